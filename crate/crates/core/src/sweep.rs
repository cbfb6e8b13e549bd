//! Finite-size critical-point sweep.
//!
//! For every replicate one shared uniform field drives all probabilities
//! on the grid, so per-seed spanning indicators are monotone in p by
//! construction (any violation aborts the run) and curves for different
//! window sizes are strongly correlated. The critical point is read off
//! the crossing of spanning-probability curves for successive window
//! sizes; hole, face and dual-bond curves all come from the same run.

use rayon::prelude::*;
use serde_json::json;

use crate::clusters::spanning_summary;
use crate::config::{threshold, UniformField};
use crate::lattice::{Dim, Window};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub d: Dim,
    /// Window radii, strictly increasing, at least two.
    pub n_list: Vec<usize>,
    /// Face probabilities, strictly increasing within [0, 1].
    pub p_grid: Vec<f64>,
    pub replicates: usize,
    pub seed: u64,
}

/// Which spanning event a curve tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// A hole cluster touches two opposite outer dual layers.
    Hole,
    /// An open-face cluster touches two opposite facets of the window.
    Face,
    /// An open dual-bond cluster spans (bond probability is `1 - p`).
    Bond,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Hole, Family::Face, Family::Bond];

    pub fn name(self) -> &'static str {
        match self {
            Family::Hole => "hole",
            Family::Face => "face",
            Family::Bond => "bond",
        }
    }

    fn index(self) -> usize {
        match self {
            Family::Hole => 0,
            Family::Face => 1,
            Family::Bond => 2,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PcEstimate {
    /// For `Bond` this is the dual-bond probability `1 - p*`;
    /// otherwise the face probability at the curve crossing.
    pub value: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub spec: SweepSpec,
    /// `curves[family][n_index][p_index]` = spanning probability.
    pub curves: [Vec<Vec<f64>>; 3],
    pub pc: [PcEstimate; 3],
}

impl SweepResult {
    pub fn curve(&self, family: Family, n_index: usize) -> &[f64] {
        &self.curves[family.index()][n_index]
    }

    pub fn pc(&self, family: Family) -> PcEstimate {
        self.pc[family.index()]
    }

    /// CSV rows in the standard nine-column schema: one row per curve
    /// point plus one `pc_estimate` row per family.
    pub fn csv_rows(&self) -> Vec<String> {
        let mut rows = Vec::new();
        for family in Family::ALL {
            for (ni, &n) in self.spec.n_list.iter().enumerate() {
                for (pi, &p) in self.spec.p_grid.iter().enumerate() {
                    let value = self.curves[family.index()][ni][pi];
                    let se =
                        (value * (1.0 - value) / self.spec.replicates as f64).sqrt();
                    rows.push(format!(
                        "spanning_prob_{},{},{},{},{},{},{},{},coupled spanning curve",
                        family.name(),
                        self.spec.d.get(),
                        n,
                        p,
                        value,
                        se,
                        self.spec.replicates,
                        self.spec.seed
                    ));
                }
            }
        }
        for family in Family::ALL {
            let pc = self.pc(family);
            let note = match family {
                Family::Bond => "crossing of successive-n curves; dual-bond probability",
                _ => "crossing of successive-n curves; face probability",
            };
            rows.push(format!(
                "pc_estimate,{},{},{},{},{},{},{},{} ({})",
                self.spec.d.get(),
                self.spec.n_list.last().unwrap(),
                f64::NAN,
                pc.value,
                pc.std_error,
                self.spec.replicates,
                self.spec.seed,
                note,
                family.name()
            ));
        }
        rows
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut families = serde_json::Map::new();
        for family in Family::ALL {
            let pc = self.pc(family);
            families.insert(
                family.name().to_string(),
                json!({
                    "pc": pc.value,
                    "pc_std_error": pc.std_error,
                    "curves": self.curves[family.index()],
                }),
            );
        }
        json!({
            "d": self.spec.d.get(),
            "n_list": self.spec.n_list,
            "p_grid": self.spec.p_grid,
            "replicates": self.spec.replicates,
            "seed": self.spec.seed,
            "families": families,
        })
    }
}

fn validate(spec: &SweepSpec) -> Result<()> {
    if spec.n_list.len() < 2 {
        return Err(Error::InvalidParameter(
            "n_list needs at least two window sizes".into(),
        ));
    }
    if !spec.n_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter("n_list must increase".into()));
    }
    if spec.n_list[0] < 2 {
        return Err(Error::InvalidParameter("window radii must be >= 2".into()));
    }
    if spec.p_grid.len() < 2 {
        return Err(Error::InvalidParameter(
            "p_grid needs at least two points".into(),
        ));
    }
    if !spec
        .p_grid
        .iter()
        .all(|p| (0.0..=1.0).contains(p) && p.is_finite())
    {
        return Err(Error::InvalidParameter("p_grid must lie in [0,1]".into()));
    }
    if !spec.p_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter(
            "p_grid must be strictly increasing".into(),
        ));
    }
    if spec.replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be >= 1".into()));
    }
    Ok(())
}

/// Per-replicate spanning indicators over the grid, with the per-seed
/// monotonicity tripwire.
fn replicate_indicators(
    spec: &SweepSpec,
    w: Window,
    replicate: usize,
) -> Result<[Vec<bool>; 3]> {
    let field = UniformField::generate(w, spec.seed, replicate as u64);
    let points = spec.p_grid.len();
    let mut hole: Vec<bool> = Vec::with_capacity(points);
    let mut face: Vec<bool> = Vec::with_capacity(points);
    let mut bond: Vec<bool> = Vec::with_capacity(points);
    for (k, &p) in spec.p_grid.iter().enumerate() {
        let cfg = threshold(&field, p);
        let summary = spanning_summary(&cfg);
        let h = summary.spanning_hole_clusters >= 1;
        let f = summary.face_spans;
        let b = summary.bond_spans;
        if k > 0 {
            let diag = |family: &str| {
                Error::MonotonicityViolation(format!(
                    "{family} spanning indicator at d={} n={} seed={} replicate={replicate} \
                     between p={} and p={p}",
                    spec.d.get(),
                    w.n(),
                    spec.seed,
                    spec.p_grid[k - 1]
                ))
            };
            if hole[k - 1] && !h {
                return Err(diag("hole"));
            }
            if face[k - 1] && !f {
                return Err(diag("face"));
            }
            if !bond[k - 1] && b {
                return Err(diag("bond"));
            }
        }
        hole.push(h);
        face.push(f);
        bond.push(b);
    }
    Ok([hole, face, bond])
}

/// Weighted average of the sign-change roots of `s_small - s_large` over
/// the grid, weight = local slope of the difference. Returns `None` when
/// the curves never cross.
fn crossing(grid: &[f64], s_small: &[f64], s_large: &[f64]) -> Option<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..grid.len() - 1 {
        let d0 = s_small[k] - s_large[k];
        let d1 = s_small[k + 1] - s_large[k + 1];
        if d0 * d1 < 0.0 {
            let root = grid[k] + (grid[k + 1] - grid[k]) * d0 / (d0 - d1);
            let weight = (d0 - d1).abs();
            num += weight * root;
            den += weight;
        }
    }
    if den > 0.0 {
        return Some(num / den);
    }
    // fall back to exact-zero interior points (curves touching)
    let mut zeros = Vec::new();
    for k in 0..grid.len() {
        let interior = s_small[k] > 0.0 && s_small[k] < 1.0;
        if s_small[k] == s_large[k] && interior {
            zeros.push(grid[k]);
        }
    }
    if zeros.is_empty() {
        None
    } else {
        Some(zeros.iter().sum::<f64>() / zeros.len() as f64)
    }
}

fn pc_from_counts(
    spec: &SweepSpec,
    counts: &[Vec<Vec<u32>>],
    block_counts: &[Vec<Vec<Vec<u32>>>],
    block_sizes: &[usize],
    family: Family,
) -> Result<PcEstimate> {
    let fi = family.index();
    let grid = &spec.p_grid;
    let reps = spec.replicates as f64;
    let curves: Vec<Vec<f64>> = counts[fi]
        .iter()
        .map(|row| row.iter().map(|&c| c as f64 / reps).collect())
        .collect();

    let mut pair_roots = Vec::new();
    for i in 0..curves.len() - 1 {
        match crossing(grid, &curves[i], &curves[i + 1]) {
            Some(root) => pair_roots.push(root),
            None => {
                return Err(Error::NoCrossing(format!(
                    "{} curves for n={} and n={} do not cross on the grid",
                    family.name(),
                    spec.n_list[i],
                    spec.n_list[i + 1]
                )))
            }
        }
    }
    let mut value = pair_roots.iter().sum::<f64>() / pair_roots.len() as f64;

    // block bootstrap over replicate blocks
    let mut block_pcs = Vec::new();
    for (b, &bsize) in block_sizes.iter().enumerate() {
        if bsize == 0 {
            continue;
        }
        let curves_b: Vec<Vec<f64>> = block_counts[b][fi]
            .iter()
            .map(|row| row.iter().map(|&c| c as f64 / bsize as f64).collect())
            .collect();
        let mut roots = Vec::new();
        for i in 0..curves_b.len() - 1 {
            if let Some(r) = crossing(grid, &curves_b[i], &curves_b[i + 1]) {
                roots.push(r);
            }
        }
        if !roots.is_empty() {
            block_pcs.push(roots.iter().sum::<f64>() / roots.len() as f64);
        }
    }
    let step = grid[1] - grid[0];
    let std_error = if block_pcs.len() >= 2 {
        let m = block_pcs.iter().sum::<f64>() / block_pcs.len() as f64;
        let var = block_pcs.iter().map(|v| (v - m).powi(2)).sum::<f64>()
            / (block_pcs.len() - 1) as f64;
        (var / block_pcs.len() as f64).sqrt().max(step / 2.0)
    } else {
        step
    };
    if family == Family::Bond {
        // report the dual-bond probability; the error bar is reflection
        // invariant
        value = 1.0 - value;
    }
    Ok(PcEstimate { value, std_error })
}

/// Runs the sweep. Aborts with [`Error::MonotonicityViolation`] if any
/// per-seed indicator fails to be monotone along the grid.
pub fn sweep_pc(spec: &SweepSpec) -> Result<SweepResult> {
    validate(spec)?;
    let points = spec.p_grid.len();
    let windows = spec.n_list.len();
    let blocks = 10usize.min(spec.replicates);

    // counts[family][n][p], block_counts[block][family][n][p]
    let mut counts = vec![vec![vec![0u32; points]; windows]; 3];
    let mut block_counts = vec![vec![vec![vec![0u32; points]; windows]; 3]; blocks];
    let mut block_sizes = vec![0usize; blocks];

    for (ni, &n) in spec.n_list.iter().enumerate() {
        let w = Window::new(spec.d, n);
        let per_rep: Vec<[Vec<bool>; 3]> = (0..spec.replicates)
            .into_par_iter()
            .map(|r| replicate_indicators(spec, w, r))
            .collect::<Result<_>>()?;
        for (r, indicators) in per_rep.iter().enumerate() {
            let b = r * blocks / spec.replicates;
            if ni == 0 {
                block_sizes[b] += 1;
            }
            for family in Family::ALL {
                let fi = family.index();
                for (pi, &hit) in indicators[fi].iter().enumerate() {
                    if hit {
                        counts[fi][ni][pi] += 1;
                        block_counts[b][fi][ni][pi] += 1;
                    }
                }
            }
        }
    }

    let reps = spec.replicates as f64;
    let curves: [Vec<Vec<f64>>; 3] = [0, 1, 2].map(|fi| {
        counts[fi]
            .iter()
            .map(|row| row.iter().map(|&c| c as f64 / reps).collect())
            .collect()
    });
    let pc = [
        pc_from_counts(spec, &counts, &block_counts, &block_sizes, Family::Hole)?,
        pc_from_counts(spec, &counts, &block_counts, &block_sizes, Family::Face)?,
        pc_from_counts(spec, &counts, &block_counts, &block_sizes, Family::Bond)?,
    ];

    Ok(SweepResult {
        spec: spec.clone(),
        curves,
        pc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: usize, n_list: Vec<usize>, p_grid: Vec<f64>, reps: usize) -> SweepSpec {
        SweepSpec {
            d: Dim::new(d).unwrap(),
            n_list,
            p_grid,
            replicates: reps,
            seed: 7,
        }
    }

    #[test]
    fn validation_rejects_bad_specs() {
        assert!(sweep_pc(&spec(2, vec![4], vec![0.4, 0.6], 5)).is_err());
        assert!(sweep_pc(&spec(2, vec![4, 4], vec![0.4, 0.6], 5)).is_err());
        assert!(sweep_pc(&spec(2, vec![4, 8], vec![0.6, 0.4], 5)).is_err());
        assert!(sweep_pc(&spec(2, vec![4, 8], vec![0.4, 1.2], 5)).is_err());
        assert!(sweep_pc(&spec(2, vec![4, 8], vec![0.4], 5)).is_err());
    }

    #[test]
    fn crossing_detects_interpolated_root() {
        let grid = [0.40, 0.45, 0.50, 0.55, 0.60];
        let small = [0.9, 0.8, 0.6, 0.4, 0.3];
        let large = [1.0, 0.9, 0.5, 0.2, 0.1];
        // difference: -0.1, -0.1, +0.1, +0.2, +0.2 -> root near 0.475
        let root = crossing(&grid, &small, &large).unwrap();
        assert!((root - 0.475).abs() < 1e-12);
        let flat = [0.0; 5];
        assert!(crossing(&grid, &flat, &flat).is_none());
    }

    #[test]
    fn small_d2_sweep_brackets_one_half() {
        let grid: Vec<f64> = (30..=70).step_by(5).map(|k| k as f64 / 100.0).collect();
        let result = sweep_pc(&spec(2, vec![4, 8], grid, 300)).unwrap();
        // tiny windows: loose bracket around the known value 1/2
        let hole = result.pc(Family::Hole).value;
        assert!((0.35..=0.65).contains(&hole), "pc_hole={hole}");
        let bond = result.pc(Family::Bond).value;
        assert!((0.35..=0.65).contains(&bond), "pc_bond={bond}");
        let face = result.pc(Family::Face).value;
        assert!((0.35..=0.65).contains(&face), "pc_face={face}");
        // curves are monotone in p
        for fam in [Family::Hole, Family::Face] {
            for ni in 0..2 {
                let c = result.curve(fam, ni);
                assert!(c.windows(2).all(|w| w[0] <= w[1] + 1e-12));
            }
        }
        for ni in 0..2 {
            let c = result.curve(Family::Bond, ni);
            assert!(c.windows(2).all(|w| w[0] + 1e-12 >= w[1]));
        }
        let rows = result.csv_rows();
        assert!(rows.iter().all(|r| r.split(',').count() == 9));
    }
}
