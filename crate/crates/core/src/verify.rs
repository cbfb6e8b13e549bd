//! Randomized invariant suites behind the `verify` command: oracle
//! agreement, partition equivalence, coupling monotonicity, the
//! boundary-open-face identity, and the trifurcation surface bound.
//!
//! Every case is reproducible from `(d, n, p, seed)`; a failing check
//! reports the first such quadruple.

use rayon::prelude::*;

use crate::clusters::{boundary_edges, dual_clusters};
use crate::config::{coupled_field, threshold, SimulationParams};
use crate::estimators::count_spanning_hole_clusters;
use crate::holes::{build_hole_graph, hole_clusters_via_complement, trifurcations};
use crate::homology::{betti_codim1, complement_components_voxel};
use crate::lattice::{face_from_dual_bond, Dim, Window};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub dims: Vec<usize>,
    pub max_n: usize,
    /// Total randomized cases per check, spread over the (d, n, p) matrix.
    pub seeds: u64,
    pub base_seed: u64,
    /// Negative control: corrupt one face after labeling so the
    /// boundary-open identity check must fail.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            dims: vec![2, 3],
            max_n: 4,
            seeds: 500,
            base_seed: 0x5EED,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    /// First failing reproduction, if any.
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }
}

const P_VALUES: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

#[derive(Debug, Clone, Copy)]
struct Case {
    d: usize,
    n: usize,
    p: f64,
    seed: u64,
}

impl Case {
    fn describe(&self) -> String {
        format!("d={} n={} p={} seed={}", self.d, self.n, self.p, self.seed)
    }

    fn params(&self) -> SimulationParams {
        SimulationParams {
            p: self.p,
            d: Dim::new(self.d).unwrap(),
            n: self.n,
            replicates: 1,
            seed: self.seed,
        }
    }
}

fn cases(opts: &VerifyOptions, salt: u64) -> Vec<Case> {
    let mut cells = Vec::new();
    for &d in &opts.dims {
        for n in 1..=opts.max_n {
            for &p in &P_VALUES {
                cells.push((d, n, p));
            }
        }
    }
    (0..opts.seeds)
        .map(|i| {
            let (d, n, p) = cells[(i as usize) % cells.len()];
            Case {
                d,
                n,
                p,
                seed: opts
                    .base_seed
                    .wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
                    .wrapping_add(i),
            }
        })
        .collect()
}

fn first_failure<F>(cases: &[Case], check: F) -> Option<String>
where
    F: Fn(&Case) -> Result<()> + Sync,
{
    let failures: Vec<(usize, String)> = cases
        .par_iter()
        .enumerate()
        .filter_map(|(i, case)| check(case).err().map(|e| (i, e.to_string())))
        .collect();
    failures
        .into_iter()
        .min_by_key(|(i, _)| *i)
        .map(|(_, msg)| msg)
}

/// Hole count equals the Z/2 Betti number and the bounded voxel component
/// count, wherever the oracles are in scale.
fn check_three_way_agreement(cases: &[Case]) -> Option<String> {
    first_failure(cases, |case| {
        let cfg = crate::config::sample_configuration(&case.params(), 0);
        let holes = crate::holes::extract_holes(&cfg).len();
        match betti_codim1(&cfg) {
            Ok(betti) if betti != holes => {
                return Err(Error::InvalidParameter(format!(
                    "betti {betti} != hole count {holes} at {}",
                    case.describe()
                )))
            }
            _ => {}
        }
        match complement_components_voxel(&cfg) {
            Ok(voxel) if voxel != holes => {
                return Err(Error::InvalidParameter(format!(
                    "voxel components {voxel} != hole count {holes} at {}",
                    case.describe()
                )))
            }
            _ => {}
        }
        Ok(())
    })
}

/// Hole-graph cluster partition equals the complement-route partition.
fn check_partition_equivalence(cases: &[Case]) -> Option<String> {
    first_failure(cases, |case| {
        let cfg = crate::config::sample_configuration(&case.params(), 0);
        let g = build_hole_graph(&cfg);
        if g.vertex_partition() != hole_clusters_via_complement(&cfg) {
            return Err(Error::InvalidParameter(format!(
                "hole-cluster partitions disagree at {}",
                case.describe()
            )));
        }
        Ok(())
    })
}

/// Under the shared-uniform coupling, the hole-membership vertex set, the
/// spanning indicator and the origin indicator are non-decreasing in p.
fn check_coupling_monotonicity(cases: &[Case]) -> Option<String> {
    first_failure(cases, |case| {
        if case.n < 2 {
            return Ok(());
        }
        let w = Window::new(Dim::new(case.d).unwrap(), case.n);
        let field = coupled_field(w, case.seed);
        let origin = vec![0i64; case.d];
        let mut prev_members: Option<Vec<bool>> = None;
        let mut prev_span = false;
        let mut prev_origin = false;
        for &p in &P_VALUES {
            let cfg = threshold(&field, p);
            let g = build_hole_graph(&cfg);
            let mut members = vec![false; w.dual_vertex_count()];
            for h in &g.holes {
                for &v in &h.members {
                    members[v] = true;
                }
            }
            let span = count_spanning_hole_clusters(&cfg) >= 1;
            let oi = w.encode_dual(&origin).unwrap();
            let origin_hit = g.vertex_to_hole[oi]
                .map(|h| g.cluster_touches_boundary[g.cluster_label[h as usize] as usize])
                .unwrap_or(false);
            if let Some(prev) = &prev_members {
                if prev.iter().zip(&members).any(|(a, b)| *a && !b) {
                    return Err(Error::MonotonicityViolation(format!(
                        "hole membership shrank as p rose to {p} at {}",
                        case.describe()
                    )));
                }
            }
            if prev_span && !span {
                return Err(Error::MonotonicityViolation(format!(
                    "spanning indicator dropped at p={p}, {}",
                    case.describe()
                )));
            }
            if prev_origin && !origin_hit {
                return Err(Error::MonotonicityViolation(format!(
                    "origin hole indicator dropped at p={p}, {}",
                    case.describe()
                )));
            }
            prev_members = Some(members);
            prev_span = span;
            prev_origin = origin_hit;
        }
        Ok(())
    })
}

/// Every boundary bond of every finite dual cluster crosses an open face.
fn check_boundary_open_identity(cases: &[Case], inject_fault: bool) -> Option<String> {
    first_failure(cases, |case| {
        let mut cfg = crate::config::sample_configuration(&case.params(), 0);
        let lab = dual_clusters(&cfg);
        let mut fault_armed = inject_fault;
        for (id, info) in lab.clusters.iter().enumerate() {
            if info.touches_infinity {
                continue;
            }
            let edges = boundary_edges(&lab, id as u32)?;
            if fault_armed {
                // flip the face under the first boundary bond after labeling
                if let Some(e) = edges.first() {
                    let q = face_from_dual_bond(e);
                    if let Some(idx) = cfg.window.face_index(&q) {
                        cfg.set_open(idx, false);
                        fault_armed = false;
                    }
                }
            }
            for e in &edges {
                let q = face_from_dual_bond(e);
                let open = cfg
                    .window
                    .face_index(&q)
                    .map(|idx| cfg.is_open(idx))
                    .unwrap_or(false);
                if !open {
                    return Err(Error::InvalidParameter(format!(
                        "boundary bond {:?}+e_{} maps to a closed face at {}",
                        e.base.coords,
                        e.axis,
                        case.describe()
                    )));
                }
            }
        }
        Ok(())
    })
}

/// The per-configuration trifurcation count never exceeds the outer dual
/// layer size.
fn check_trifurcation_bound(cases: &[Case]) -> Option<String> {
    first_failure(cases, |case| {
        let cfg = crate::config::sample_configuration(&case.params(), 0);
        let g = build_hole_graph(&cfg);
        let count = trifurcations(&g).len();
        let bound = cfg.window.boundary_dual_count();
        if count > bound {
            return Err(Error::SurfaceBoundViolation(format!(
                "{count} trifurcations exceed outer layer {bound} at {}",
                case.describe()
            )));
        }
        Ok(())
    })
}

/// Runs every suite and reports per-check outcomes.
pub fn run_verification(opts: &VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();

    let c = cases(opts, 1);
    checks.push(CheckResult {
        name: "three_way_hole_count_agreement",
        cases: c.len(),
        failure: check_three_way_agreement(&c),
    });

    let c = cases(opts, 2);
    checks.push(CheckResult {
        name: "hole_cluster_partition_equivalence",
        cases: c.len(),
        failure: check_partition_equivalence(&c),
    });

    // one coupling case covers all p values, so fewer cases suffice
    let coupling_opts = VerifyOptions {
        seeds: (opts.seeds / 5).max(1),
        ..opts.clone()
    };
    let c = cases(&coupling_opts, 3);
    checks.push(CheckResult {
        name: "coupling_monotonicity",
        cases: c.len(),
        failure: check_coupling_monotonicity(&c),
    });

    let c = cases(opts, 4);
    checks.push(CheckResult {
        name: "boundary_open_face_identity",
        cases: c.len(),
        failure: check_boundary_open_identity(&c, opts.inject_fault),
    });

    let c = cases(opts, 5);
    checks.push(CheckResult {
        name: "trifurcation_surface_bound",
        cases: c.len(),
        failure: check_trifurcation_bound(&c),
    });

    VerifyReport { checks }
}
