//! Monte Carlo estimators with standard errors.
//!
//! Every "infinite" event uses a window proxy (boundary contact or
//! spanning), recorded in `proxy_notes`. Replicates are independent tasks;
//! results are reduced in replicate order, so output is bit-identical
//! regardless of worker count.

use rayon::prelude::*;
use serde_json::json;

use crate::clusters::{dual_clusters, dual_clusters_windowed, face_clusters};
use crate::config::{sample_configuration, Configuration, SimulationParams};
use crate::holes::{build_hole_graph, extract_holes, trifurcations};
use crate::lattice::{DualVertex, Face};
use crate::{Error, Result};

/// The estimated quantity, as named in CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    ThetaHole,
    ThetaBond,
    ThetaFace,
    Kappa,
    VertexDensity,
    AvgHoleSize,
    TwoPointHole,
    SpanningHoleClusters,
    TrifurcationDensity,
    PcEstimate,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::ThetaHole => "theta_hole",
            Quantity::ThetaBond => "theta_bond",
            Quantity::ThetaFace => "theta_face",
            Quantity::Kappa => "kappa",
            Quantity::VertexDensity => "vertex_density",
            Quantity::AvgHoleSize => "avg_hole_size",
            Quantity::TwoPointHole => "two_point_hole",
            Quantity::SpanningHoleClusters => "spanning_hole_clusters",
            Quantity::TrifurcationDensity => "trifurcation_density",
            Quantity::PcEstimate => "pc_estimate",
        }
    }
}

/// One estimate with its standard error and proxy description.
#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub quantity: Quantity,
    pub params: SimulationParams,
    pub value: f64,
    pub std_error: f64,
    pub replicates_used: usize,
    pub proxy_notes: String,
}

impl EstimateReport {
    pub const CSV_HEADER: &'static str =
        "quantity,d,n,p,value,std_error,replicates,seed,proxy_notes";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.quantity.name(),
            self.params.d.get(),
            self.params.n,
            self.params.p,
            self.value,
            self.std_error,
            self.replicates_used,
            self.params.seed,
            csv_escape(&self.proxy_notes)
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "quantity": self.quantity.name(),
            "d": self.params.d.get(),
            "n": self.params.n,
            "p": self.params.p,
            "value": self.value,
            "std_error": self.std_error,
            "replicates": self.replicates_used,
            "seed": self.params.seed,
            "proxy_notes": self.proxy_notes,
        })
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Sample mean and standard error (sample sd / sqrt(count)).
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let count = values.len();
    if count == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / count as f64;
    if count == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
    (mean, (var / count as f64).sqrt())
}

/// Runs `f` over all replicates in parallel. The returned vector is
/// ordered by replicate index, so any later reduction is deterministic.
pub fn replicate_values<T, F>(params: &SimulationParams, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &Configuration) -> Result<T> + Sync,
{
    (0..params.replicates)
        .into_par_iter()
        .map(|r| {
            let cfg = sample_configuration(params, r);
            f(r, &cfg)
        })
        .collect()
}

fn require_n(params: &SimulationParams, min_n: usize) -> Result<()> {
    params.validate()?;
    if params.n < min_n {
        return Err(Error::InvalidParameter(format!(
            "window radius {} below the minimum {min_n} for this estimator",
            params.n
        )));
    }
    Ok(())
}

fn indicator_report(
    quantity: Quantity,
    params: &SimulationParams,
    notes: &str,
    values: Vec<f64>,
) -> EstimateReport {
    let (value, std_error) = mean_and_se(&values);
    EstimateReport {
        quantity,
        params: *params,
        value,
        std_error,
        replicates_used: values.len(),
        proxy_notes: notes.to_string(),
    }
}

/// P(the origin dual vertex lies in a hole whose hole cluster touches the
/// window boundary) — the window proxy for θ^hole.
pub fn estimate_theta_hole(params: &SimulationParams) -> Result<EstimateReport> {
    require_n(params, 2)?;
    let origin = vec![0i64; params.d.get()];
    let values = replicate_values(params, |_, cfg| {
        let g = build_hole_graph(cfg);
        let idx = cfg.window.encode_dual(&origin).expect("origin in window");
        let hit = g.vertex_to_hole[idx]
            .map(|h| g.cluster_touches_boundary[g.cluster_label[h as usize] as usize])
            .unwrap_or(false);
        Ok(hit as u8 as f64)
    })?;
    Ok(indicator_report(
        Quantity::ThetaHole,
        params,
        "window proxy for |G_0*|=inf (hole cluster touches boundary)",
        values,
    ))
}

/// P(the origin's dual-bond cluster reaches the window boundary), with
/// `params.p` the dual-bond open probability.
pub fn estimate_theta_bond(params: &SimulationParams) -> Result<EstimateReport> {
    require_n(params, 2)?;
    let face_params = SimulationParams {
        p: 1.0 - params.p,
        ..*params
    };
    let origin = vec![0i64; params.d.get()];
    let values = replicate_values(&face_params, |_, cfg| {
        let lab = dual_clusters_windowed(cfg);
        let idx = cfg.window.encode_dual(&origin).expect("origin in window");
        let id = lab.cluster_of(idx).expect("dual vertices always labeled");
        Ok((lab.cluster(id).boundary_mask != 0) as u8 as f64)
    })?;
    Ok(indicator_report(
        Quantity::ThetaBond,
        params,
        "boundary-reach proxy on dual lattice; p is the bond probability",
        values,
    ))
}

/// P(the origin face's cluster reaches the boundary of the window).
pub fn estimate_theta_face(params: &SimulationParams) -> Result<EstimateReport> {
    require_n(params, 2)?;
    let q0 = Face {
        axis: 0,
        anchor: vec![0; params.d.get()],
    };
    let values = replicate_values(params, |_, cfg| {
        let idx = cfg.window.face_index(&q0).expect("origin face in window");
        if !cfg.is_open(idx) {
            return Ok(0.0);
        }
        let lab = face_clusters(cfg);
        let id = lab.cluster_of(idx).expect("open faces are labeled");
        Ok((lab.cluster(id).boundary_mask != 0) as u8 as f64)
    })?;
    Ok(indicator_report(
        Quantity::ThetaFace,
        params,
        "boundary-reach proxy for |C(Q_0)|=inf",
        values,
    ))
}

/// The ergodic estimator of κ: the average over dual vertices of the
/// reciprocal cluster size, infinity-touching clusters contributing zero.
/// `dual_p` is the dual-bond open probability.
pub fn estimate_kappa(dual_p: f64, params: &SimulationParams) -> Result<EstimateReport> {
    let params = SimulationParams {
        p: dual_p,
        ..*params
    };
    require_n(&params, 2)?;
    let face_params = SimulationParams {
        p: 1.0 - dual_p,
        ..params
    };
    let values = replicate_values(&face_params, |_, cfg| Ok(kappa_of(cfg)))?;
    Ok(indicator_report(
        Quantity::Kappa,
        &params,
        "p column is the dual-bond probability; reciprocal cluster sizes",
        values,
    ))
}

/// Per-configuration κ statistic: mean over vertices of 1/|C*(x*)|.
pub fn kappa_of(cfg: &Configuration) -> f64 {
    let lab = dual_clusters(cfg);
    let mut sum = 0.0;
    for l in &lab.label {
        let info = lab.cluster(l.expect("dual vertices always labeled"));
        if !info.touches_infinity {
            sum += 1.0 / info.size as f64;
        }
    }
    sum / lab.label.len() as f64
}

/// |G^n(ω)| / |B̃(n)|: holes whose members all lie in the window, per
/// dual vertex.
pub fn vertex_density(cfg: &Configuration) -> f64 {
    extract_holes(cfg).len() as f64 / cfg.window.dual_vertex_count() as f64
}

pub fn estimate_vertex_density(params: &SimulationParams) -> Result<EstimateReport> {
    require_n(params, 2)?;
    let values = replicate_values(params, |_, cfg| Ok(vertex_density(cfg)))?;
    Ok(indicator_report(
        Quantity::VertexDensity,
        params,
        "holes entirely inside the window per dual vertex",
        values,
    ))
}

/// Mean hole size of one configuration; `None` when there are no holes.
pub fn average_hole_size(cfg: &Configuration) -> Option<f64> {
    let holes = extract_holes(cfg);
    if holes.is_empty() {
        return None;
    }
    Some(holes.iter().map(|h| h.size as f64).sum::<f64>() / holes.len() as f64)
}

/// Measured average hole size together with the independently assembled
/// limit value `(1 - θ^bond(1-p)) / κ(1-p)`.
#[derive(Debug, Clone)]
pub struct AvgHoleSizeEstimate {
    pub lhs: EstimateReport,
    pub rhs_value: f64,
    pub rhs_std_error: f64,
    pub skipped_replicates: usize,
}

pub fn estimate_average_hole_size(params: &SimulationParams) -> Result<AvgHoleSizeEstimate> {
    require_n(params, 2)?;
    let per_rep = replicate_values(params, |_, cfg| Ok(average_hole_size(cfg)))?;
    let skipped = per_rep.iter().filter(|v| v.is_none()).count();
    let values: Vec<f64> = per_rep.into_iter().flatten().collect();
    let (value, std_error) = mean_and_se(&values);

    // Independent run assembling the right-hand side. Both ingredients are
    // window averages over the same replicates (the construction behind the
    // limit identity), so their covariance enters the error propagation.
    let rhs_seed = params.seed ^ 0x517c_c1b7_2722_0a95;
    let rhs_params = SimulationParams {
        p: params.p,
        seed: rhs_seed,
        ..*params
    };
    let pairs = replicate_values(&rhs_params, |_, cfg| {
        let lab = dual_clusters(cfg);
        let mut inf_vertices = 0usize;
        let mut kappa = 0.0f64;
        for l in &lab.label {
            let info = lab.cluster(l.expect("labeled"));
            if info.touches_infinity {
                inf_vertices += 1;
            } else {
                kappa += 1.0 / info.size as f64;
            }
        }
        let count = lab.label.len() as f64;
        Ok((inf_vertices as f64 / count, kappa / count))
    })?;
    let thetas: Vec<f64> = pairs.iter().map(|(t, _)| *t).collect();
    let kappas: Vec<f64> = pairs.iter().map(|(_, k)| *k).collect();
    let (theta, theta_se) = mean_and_se(&thetas);
    let (kappa, kappa_se) = mean_and_se(&kappas);
    let reps = pairs.len() as f64;
    let cov = if pairs.len() > 1 {
        let c: f64 = pairs
            .iter()
            .map(|(t, k)| (t - theta) * (k - kappa))
            .sum::<f64>()
            / (reps - 1.0);
        c / reps
    } else {
        0.0
    };
    let rhs_value = (1.0 - theta) / kappa;
    // delta method for f(θ, κ) = (1-θ)/κ
    let df_dtheta = -1.0 / kappa;
    let df_dkappa = -(1.0 - theta) / (kappa * kappa);
    let rhs_var = df_dtheta * df_dtheta * theta_se * theta_se
        + df_dkappa * df_dkappa * kappa_se * kappa_se
        + 2.0 * df_dtheta * df_dkappa * cov;
    let rhs_std_error = rhs_var.max(0.0).sqrt();

    Ok(AvgHoleSizeEstimate {
        lhs: EstimateReport {
            quantity: Quantity::AvgHoleSize,
            params: *params,
            value,
            std_error,
            replicates_used: values.len(),
            proxy_notes: format!(
                "mean hole size; {skipped} zero-hole replicates skipped; \
                 assembled (1-theta)/kappa = {rhs_value:.6}+-{rhs_std_error:.6} \
                 from window averages at seed {rhs_seed}"
            ),
        },
        rhs_value,
        rhs_std_error,
        skipped_replicates: skipped,
    })
}

/// P(x* and y* lie in holes of the same hole cluster).
pub fn two_point_hole(
    params: &SimulationParams,
    x: &DualVertex,
    y: &DualVertex,
) -> Result<EstimateReport> {
    require_n(params, 2)?;
    let w = params.window();
    let xi = w
        .dual_index(x)
        .ok_or_else(|| Error::OutsideWindow(x.coords.clone()))?;
    let yi = w
        .dual_index(y)
        .ok_or_else(|| Error::OutsideWindow(y.coords.clone()))?;
    let values = replicate_values(params, |_, cfg| {
        let g = build_hole_graph(cfg);
        let same = match (g.vertex_to_hole[xi], g.vertex_to_hole[yi]) {
            (Some(h1), Some(h2)) => {
                g.cluster_label[h1 as usize] == g.cluster_label[h2 as usize]
            }
            _ => false,
        };
        Ok(same as u8 as f64)
    })?;
    let dist: i64 = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(indicator_report(
        Quantity::TwoPointHole,
        params,
        &format!("x={:?} y={:?} l1_distance={dist}", x.coords, y.coords),
        values,
    ))
}

/// Number of hole clusters touching two opposite outer layers. Computed
/// by the lean single-pass route; tests pin it to the hole-graph masks.
pub fn count_spanning_hole_clusters(cfg: &Configuration) -> usize {
    crate::clusters::spanning_hole_count(cfg)
}

/// P(at least two spanning hole clusters) — the finite-size uniqueness
/// check.
pub fn estimate_uniqueness(params: &SimulationParams) -> Result<EstimateReport> {
    require_n(params, 4)?;
    let values = replicate_values(params, |_, cfg| {
        Ok((count_spanning_hole_clusters(cfg) >= 2) as u8 as f64)
    })?;
    Ok(indicator_report(
        Quantity::SpanningHoleClusters,
        params,
        "P(>=2 clusters spanning opposite outer layers)",
        values,
    ))
}

/// Mean trifurcation count per dual vertex. Every configuration is checked
/// against the surface bound: the count may never exceed the size of the
/// outermost dual layer.
pub fn trifurcation_density(params: &SimulationParams) -> Result<EstimateReport> {
    require_n(params, 4)?;
    let w = params.window();
    let vertices = w.dual_vertex_count() as f64;
    let bound = w.boundary_dual_count();
    let values = replicate_values(params, |r, cfg| {
        let g = build_hole_graph(cfg);
        let count = trifurcations(&g).len();
        if count > bound {
            return Err(Error::SurfaceBoundViolation(format!(
                "{count} trifurcations exceed the outer-layer size {bound} \
                 (d={} n={} p={} seed={} replicate={r})",
                params.d.get(),
                params.n,
                params.p,
                params.seed
            )));
        }
        Ok(count as f64 / vertices)
    })?;
    Ok(indicator_report(
        Quantity::TrifurcationDensity,
        params,
        "window-proxy trifurcations per dual vertex; surface bound checked",
        values,
    ))
}
