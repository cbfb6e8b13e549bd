//! Independent oracles for the hole count: Z/2 rank of the codimension-one
//! boundary matrix, and bounded complement components on a half-resolution
//! voxel grid. Both are desk-scale validators with hard caps.

use std::collections::HashMap;

use crate::config::Configuration;
use crate::lattice::Face;
use crate::{Error, Result};

/// Hard cap on open faces for the rank oracle.
pub const MAX_RANK_FACES: usize = 5000;
/// Hard cap on voxel grid points per axis (41 = window radius 9).
pub const MAX_GRID_SIDE: usize = 41;

/// A general elementary cube: one lower endpoint per axis plus a bitmask
/// of the nondegenerate axes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub lows: Vec<i64>,
    pub nondegenerate: u32,
}

/// The top slice of the chain complex of the open-face set: columns are
/// open faces, rows the (d-2)-cells appearing in their boundaries.
#[derive(Debug)]
pub struct ChainComplexSlice {
    pub cells_dm1: Vec<Face>,
    pub cells_dm2: Vec<Cell>,
    /// Row indices per column; each column holds exactly `2(d-1)` entries.
    pub columns: Vec<Vec<usize>>,
}

/// Builds the boundary matrix of the open faces over Z/2.
pub fn chain_complex_slice(cfg: &Configuration) -> Result<ChainComplexSlice> {
    let w = cfg.window;
    let d = w.d();
    let open = cfg.open_count();
    if open > MAX_RANK_FACES {
        return Err(Error::OracleScaleExceeded(format!(
            "{open} open faces exceeds the rank oracle cap of {MAX_RANK_FACES}"
        )));
    }
    let mut cells_dm1 = Vec::with_capacity(open);
    let mut cells_dm2: Vec<Cell> = Vec::new();
    let mut row_of: HashMap<Cell, usize> = HashMap::new();
    let mut columns = Vec::with_capacity(open);
    w.for_each_face(|idx, axis, anchor| {
        if !cfg.is_open(idx) {
            return;
        }
        cells_dm1.push(Face {
            axis,
            anchor: anchor.to_vec(),
        });
        let face_mask = !(1u32 << axis) & ((1 << d) - 1);
        let mut col = Vec::with_capacity(2 * (d - 1));
        for j in 0..d {
            if j == axis {
                continue;
            }
            for t in [0i64, 1] {
                let mut lows = anchor.to_vec();
                lows[j] += t;
                let cell = Cell {
                    lows,
                    nondegenerate: face_mask & !(1 << j),
                };
                let next = cells_dm2.len();
                let row = *row_of.entry(cell.clone()).or_insert_with(|| {
                    cells_dm2.push(cell);
                    next
                });
                col.push(row);
            }
        }
        columns.push(col);
    });
    Ok(ChainComplexSlice {
        cells_dm1,
        cells_dm2,
        columns,
    })
}

fn lowest_set_bit(words: &[u64]) -> Option<usize> {
    for (i, &w) in words.iter().enumerate() {
        if w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

/// Z/2 rank by column reduction of sparse columns packed into bitsets.
pub fn rank_z2(rows: usize, columns: &[Vec<usize>]) -> usize {
    let words = rows.div_ceil(64);
    let mut pivot_by_row: Vec<Option<Vec<u64>>> = vec![None; rows];
    let mut rank = 0usize;
    for col in columns {
        let mut v = vec![0u64; words];
        for &r in col {
            v[r / 64] ^= 1 << (r % 64);
        }
        while let Some(lead) = lowest_set_bit(&v) {
            match &pivot_by_row[lead] {
                Some(p) => {
                    for (a, b) in v.iter_mut().zip(p) {
                        *a ^= b;
                    }
                }
                None => {
                    pivot_by_row[lead] = Some(v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// The (d-1)-th Betti number of the open-face set: with no d-cells this is
/// `#open faces - rank(boundary matrix)` over the two-element field.
pub fn betti_codim1(cfg: &Configuration) -> Result<usize> {
    let slice = chain_complex_slice(cfg)?;
    let rank = rank_z2(slice.cells_dm2.len(), &slice.columns);
    Ok(slice.columns.len() - rank)
}

/// Counts bounded components of the complement by flood fill on a grid of
/// half-integer points over the margin-extended window `[-(n+1), n+1]^d`.
/// Points covered by open faces are blocked; connectivity is axis-only.
pub fn complement_components_voxel(cfg: &Configuration) -> Result<usize> {
    let w = cfg.window;
    let d = w.d();
    let n = w.n();
    // grid coordinate g = 2x + 2(n+1), so g in [0, 4n+4]
    let side = (4 * n + 5) as usize;
    if side > MAX_GRID_SIDE {
        return Err(Error::OracleScaleExceeded(format!(
            "voxel grid side {side} exceeds cap {MAX_GRID_SIDE} (window radius {n})"
        )));
    }
    let mut strides = vec![1usize; d];
    for j in (0..d - 1).rev() {
        strides[j] = strides[j + 1] * side;
    }
    let total = strides[0] * side;
    let offset = 2 * n + 2;

    let mut blocked = vec![false; total];
    w.for_each_face(|idx, axis, anchor| {
        if !cfg.is_open(idx) {
            return;
        }
        // odometer over the 3^(d-1) covered grid offsets
        let mut steps = vec![0i64; d];
        loop {
            let mut g = 0usize;
            for j in 0..d {
                let k = if j == axis {
                    2 * anchor[j]
                } else {
                    2 * anchor[j] + steps[j]
                };
                g += (k + offset) as usize * strides[j];
            }
            blocked[g] = true;
            let mut j = d;
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                if j == axis {
                    continue;
                }
                if steps[j] < 2 {
                    steps[j] += 1;
                    break;
                }
                steps[j] = 0;
            }
        }
    });

    // flood the unbounded component from the margin ring
    let mut visited = vec![false; total];
    let mut stack: Vec<usize> = Vec::new();
    let on_boundary = |g: usize| -> bool {
        let mut rem = g;
        for &s in &strides {
            let c = rem / s;
            rem %= s;
            if c == 0 || c == side - 1 {
                return true;
            }
        }
        false
    };
    for g in 0..total {
        if !blocked[g] && !visited[g] && on_boundary(g) {
            visited[g] = true;
            stack.push(g);
            while let Some(v) = stack.pop() {
                let mut rem = v;
                for &s in &strides {
                    let c = rem / s;
                    rem %= s;
                    if c > 0 && !blocked[v - s] && !visited[v - s] {
                        visited[v - s] = true;
                        stack.push(v - s);
                    }
                    if c + 1 < side && !blocked[v + s] && !visited[v + s] {
                        visited[v + s] = true;
                        stack.push(v + s);
                    }
                }
            }
        }
    }

    // remaining unblocked points form the bounded components
    let mut bounded = 0usize;
    for g in 0..total {
        if blocked[g] || visited[g] {
            continue;
        }
        bounded += 1;
        visited[g] = true;
        stack.push(g);
        while let Some(v) = stack.pop() {
            let mut rem = v;
            for &s in &strides {
                let c = rem / s;
                rem %= s;
                if c > 0 && !blocked[v - s] && !visited[v - s] {
                    visited[v - s] = true;
                    stack.push(v - s);
                }
                if c + 1 < side && !blocked[v + s] && !visited[v + s] {
                    visited[v + s] = true;
                    stack.push(v + s);
                }
            }
        }
    }
    Ok(bounded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{sample_configuration, Configuration, SimulationParams};
    use crate::holes::extract_holes;
    use crate::lattice::{Dim, Window};

    fn params(d: usize, n: usize, p: f64, seed: u64) -> SimulationParams {
        SimulationParams {
            p,
            d: Dim::new(d).unwrap(),
            n,
            replicates: 1,
            seed,
        }
    }

    fn unit_square_frame() -> Configuration {
        let w = Window::new(Dim::new(2).unwrap(), 2);
        let mut cfg = Configuration::all_closed(w);
        for (axis, anchor) in [
            (0usize, vec![0i64, 0]),
            (0, vec![1, 0]),
            (1, vec![0, 0]),
            (1, vec![0, 1]),
        ] {
            cfg.set_open(w.face_index(&Face { axis, anchor }).unwrap(), true);
        }
        cfg
    }

    #[test]
    fn square_frame_has_one_cycle() {
        let cfg = unit_square_frame();
        assert_eq!(betti_codim1(&cfg).unwrap(), 1);
        assert_eq!(complement_components_voxel(&cfg).unwrap(), 1);
        let slice = chain_complex_slice(&cfg).unwrap();
        assert_eq!(slice.cells_dm2.len(), 4);
        assert_eq!(rank_z2(slice.cells_dm2.len(), &slice.columns), 3);
    }

    #[test]
    fn single_edge_has_no_cycle() {
        let w = Window::new(Dim::new(2).unwrap(), 2);
        let mut cfg = Configuration::all_closed(w);
        cfg.set_open(0, true);
        assert_eq!(betti_codim1(&cfg).unwrap(), 0);
        assert_eq!(complement_components_voxel(&cfg).unwrap(), 0);
    }

    #[test]
    fn unit_cube_shell_is_one_generator() {
        let w = Window::new(Dim::new(3).unwrap(), 2);
        let mut cfg = Configuration::all_closed(w);
        for axis in 0..3usize {
            for t in [0i64, 1] {
                let mut anchor = vec![0i64; 3];
                anchor[axis] = t;
                cfg.set_open(w.face_index(&Face { axis, anchor }).unwrap(), true);
            }
        }
        let slice = chain_complex_slice(&cfg).unwrap();
        assert_eq!(slice.cells_dm2.len(), 12);
        assert_eq!(slice.columns.len(), 6);
        assert!(slice.columns.iter().all(|c| c.len() == 4));
        assert_eq!(rank_z2(12, &slice.columns), 5);
        assert_eq!(betti_codim1(&cfg).unwrap(), 1);
        assert_eq!(complement_components_voxel(&cfg).unwrap(), 1);
    }

    #[test]
    fn empty_configuration_has_unbounded_complement_only() {
        let cfg = sample_configuration(&params(3, 2, 0.0, 1), 0);
        assert_eq!(betti_codim1(&cfg).unwrap(), 0);
        assert_eq!(complement_components_voxel(&cfg).unwrap(), 0);
    }

    #[test]
    fn oracles_agree_with_hole_count() {
        for seed in 0..40u64 {
            for &p in &[0.2, 0.5, 0.8] {
                for &(d, n) in &[(2usize, 3usize), (3, 2)] {
                    let cfg = sample_configuration(&params(d, n, p, seed), 0);
                    let holes = extract_holes(&cfg).len();
                    let betti = betti_codim1(&cfg).unwrap();
                    let voxel = complement_components_voxel(&cfg).unwrap();
                    assert_eq!(betti, holes, "betti d={d} n={n} p={p} seed={seed}");
                    assert_eq!(voxel, holes, "voxel d={d} n={n} p={p} seed={seed}");
                }
            }
        }
    }

    #[test]
    fn rank_is_invariant_under_column_shuffles() {
        let cfg = sample_configuration(&params(3, 2, 0.6, 9), 0);
        let slice = chain_complex_slice(&cfg).unwrap();
        let base = rank_z2(slice.cells_dm2.len(), &slice.columns);
        let mut cols = slice.columns.clone();
        // deterministic shuffle
        let mut state = 0x9E3779B97F4A7C15u64;
        for i in (1..cols.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let j = (state >> 33) as usize % (i + 1);
            cols.swap(i, j);
        }
        assert_eq!(rank_z2(slice.cells_dm2.len(), &cols), base);
    }

    #[test]
    fn scale_guards_trip() {
        // 10512 faces all open exceeds the rank cap
        let params_big = params(2, 36, 1.0, 1);
        let cfg = sample_configuration(&params_big, 0);
        assert!(matches!(
            betti_codim1(&cfg),
            Err(Error::OracleScaleExceeded(_))
        ));
        // window radius 10 needs 45 grid points per axis
        let cfg = sample_configuration(&params(2, 10, 0.5, 1), 0);
        assert!(matches!(
            complement_components_voxel(&cfg),
            Err(Error::OracleScaleExceeded(_))
        ));
    }
}
