//! Connected-component labeling via union-find: dual-bond clusters (with a
//! virtual infinity class), face clusters, and cluster boundary-edge sets.
//!
//! A dual bond is open exactly when its transverse face is closed. Faces
//! outside the window are closed by the truncation convention, so every
//! dual bond leaving the window is open; the whole outside is represented
//! by one virtual infinity node.

use crate::config::Configuration;
use crate::lattice::{DualBond, DualVertex, Window};
use crate::{Error, Result};

/// What the elements of a labeling are.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject {
    DualVertices,
    Faces,
}

/// Per-cluster summary. `min_member` is the smallest element index, which
/// also orders the dense cluster ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterInfo {
    pub min_member: usize,
    pub size: usize,
    pub touches_infinity: bool,
    /// Facet-contact mask accumulated over members (see
    /// [`Window::dual_facet_mask`] / [`Window::face_facet_mask`]).
    pub boundary_mask: u64,
}

/// A partition of dual vertices or faces into clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabeling {
    pub subject: Subject,
    pub window: Window,
    /// Dense cluster id per element; `None` for closed faces.
    pub label: Vec<Option<u32>>,
    pub clusters: Vec<ClusterInfo>,
    /// Whether the virtual infinity node participated in the unions.
    pub has_virtual_infinity: bool,
}

impl ClusterLabeling {
    #[inline]
    pub fn cluster_of(&self, element: usize) -> Option<u32> {
        self.label[element]
    }

    pub fn cluster(&self, id: u32) -> &ClusterInfo {
        &self.clusters[id as usize]
    }

    /// Elements of one cluster in increasing index order.
    pub fn members(&self, id: u32) -> Vec<usize> {
        self.label
            .iter()
            .enumerate()
            .filter_map(|(i, l)| (*l == Some(id)).then_some(i))
            .collect()
    }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
    }
}

fn dual_clusters_impl(cfg: &Configuration, virtual_infinity: bool) -> ClusterLabeling {
    let w = cfg.window;
    let n = w.n();
    let side = (2 * n) as usize;
    let vertices = w.dual_vertex_count();
    let inf = vertices as u32;
    let mut uf = UnionFind::new(vertices + 1);

    // One dual bond per in-window face. The bond is open iff the face is
    // closed; endpoints outside the window collapse to the infinity node.
    w.for_each_face(|idx, axis, anchor| {
        if cfg.is_open(idx) {
            return; // bond closed
        }
        let encode = |axis_val: i64| -> Option<u32> {
            if axis_val < -n || axis_val >= n {
                return None;
            }
            let mut id = 0usize;
            for (j, &c) in anchor.iter().enumerate() {
                let v = if j == axis { axis_val } else { c };
                id = id * side + (v + n) as usize;
            }
            Some(id as u32)
        };
        let a = anchor[axis];
        match (encode(a - 1), encode(a)) {
            (Some(u), Some(v)) => uf.union(u, v),
            (Some(u), None) if virtual_infinity => uf.union(u, inf),
            (None, Some(v)) if virtual_infinity => uf.union(v, inf),
            _ => {}
        }
    });

    let inf_root = uf.find(inf);
    let mut label = vec![None; vertices];
    let mut clusters: Vec<ClusterInfo> = Vec::new();
    let mut root_to_id: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    w.for_each_dual(|i, coords| {
        let root = uf.find(i as u32);
        let id = *root_to_id.entry(root).or_insert_with(|| {
            clusters.push(ClusterInfo {
                min_member: i,
                size: 0,
                touches_infinity: virtual_infinity && root == inf_root,
                boundary_mask: 0,
            });
            (clusters.len() - 1) as u32
        });
        let info = &mut clusters[id as usize];
        info.size += 1;
        info.boundary_mask |= w.dual_facet_mask(coords);
        label[i] = Some(id);
    });

    ClusterLabeling {
        subject: Subject::DualVertices,
        window: w,
        label,
        clusters,
        has_virtual_infinity: virtual_infinity,
    }
}

/// Clusters of dual vertices under open dual bonds, with the virtual
/// infinity node: any vertex joined by an open bond to the outside is
/// merged into one infinity-touching cluster.
pub fn dual_clusters(cfg: &Configuration) -> ClusterLabeling {
    dual_clusters_impl(cfg, true)
}

/// Clusters from in-window open dual bonds only. Used for spanning and
/// boundary-reach events, where merging through the outside would create
/// false connections.
pub fn dual_clusters_windowed(cfg: &Configuration) -> ClusterLabeling {
    dual_clusters_impl(cfg, false)
}

/// Clusters of open faces under the shared-(d-2)-cell adjacency. Closed
/// faces are unlabeled. `touches_infinity` means the cluster meets the
/// topological boundary of `Λ^n` (the finite-window proxy).
pub fn face_clusters(cfg: &Configuration) -> ClusterLabeling {
    let w = cfg.window;
    let faces = w.face_count();
    let mut uf = UnionFind::new(faces);
    w.for_each_face(|idx, axis, anchor| {
        if !cfg.is_open(idx) {
            return;
        }
        w.for_each_face_neighbor(axis, anchor, |nidx| {
            if nidx > idx && cfg.is_open(nidx) {
                uf.union(idx as u32, nidx as u32);
            }
        });
    });

    let mut label = vec![None; faces];
    let mut clusters: Vec<ClusterInfo> = Vec::new();
    let mut root_to_id: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    w.for_each_face(|idx, axis, anchor| {
        if !cfg.is_open(idx) {
            return;
        }
        let root = uf.find(idx as u32);
        let id = *root_to_id.entry(root).or_insert_with(|| {
            clusters.push(ClusterInfo {
                min_member: idx,
                size: 0,
                touches_infinity: false,
                boundary_mask: 0,
            });
            (clusters.len() - 1) as u32
        });
        let info = &mut clusters[id as usize];
        info.size += 1;
        info.boundary_mask |= w.face_facet_mask(axis, anchor);
        label[idx] = Some(id);
    });
    for info in &mut clusters {
        info.touches_infinity = info.boundary_mask != 0;
    }

    ClusterLabeling {
        subject: Subject::Faces,
        window: w,
        label,
        clusters,
        has_virtual_infinity: false,
    }
}

/// Spanning indicators of one configuration, computed in a single pass
/// without materializing cluster labelings or the hole graph. Used by the
/// sweep and the uniqueness estimator, and cross-checked against the
/// graph-based route in tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanningSummary {
    /// Hole clusters touching two opposite outer dual layers.
    pub spanning_hole_clusters: usize,
    /// Some open-face cluster touches two opposite facets.
    pub face_spans: bool,
    /// Some in-window open dual-bond cluster spans.
    pub bond_spans: bool,
}

pub fn spanning_summary(cfg: &Configuration) -> SpanningSummary {
    let w = cfg.window;
    let n = w.n();
    let side = (2 * n) as usize;
    let vertices = w.dual_vertex_count();
    let faces = w.face_count();
    let inf = vertices as u32;

    let mut uf_dual = UnionFind::new(vertices + 1);
    let mut uf_bond = UnionFind::new(vertices);
    let mut uf_face = UnionFind::new(faces);
    w.for_each_face(|idx, axis, anchor| {
        if cfg.is_open(idx) {
            w.for_each_face_neighbor(axis, anchor, |nidx| {
                if nidx > idx && cfg.is_open(nidx) {
                    uf_face.union(idx as u32, nidx as u32);
                }
            });
        } else {
            let encode = |axis_val: i64| -> Option<u32> {
                if axis_val < -n || axis_val >= n {
                    return None;
                }
                let mut id = 0usize;
                for (j, &c) in anchor.iter().enumerate() {
                    let v = if j == axis { axis_val } else { c };
                    id = id * side + (v + n) as usize;
                }
                Some(id as u32)
            };
            let a = anchor[axis];
            match (encode(a - 1), encode(a)) {
                (Some(u), Some(v)) => {
                    uf_dual.union(u, v);
                    uf_bond.union(u, v);
                }
                (Some(u), None) => uf_dual.union(u, inf),
                (None, Some(v)) => uf_dual.union(v, inf),
                _ => {}
            }
        }
    });

    // open dual-bond spanning from in-window unions only
    let mut masks = vec![0u64; vertices];
    let mut bond_spans = false;
    w.for_each_dual(|v, coords| {
        let root = uf_bond.find(v as u32) as usize;
        masks[root] |= w.dual_facet_mask(coords);
        if w.mask_spans(masks[root]) {
            bond_spans = true;
        }
    });

    let spanning_hole_clusters = spanning_hole_count_from_uf(w, &mut uf_dual, &mut masks);

    let mut face_masks = vec![0u64; faces];
    let mut face_spans = false;
    w.for_each_face(|idx, axis, anchor| {
        if !cfg.is_open(idx) {
            return;
        }
        let root = uf_face.find(idx as u32) as usize;
        face_masks[root] |= w.face_facet_mask(axis, anchor);
        if w.mask_spans(face_masks[root]) {
            face_spans = true;
        }
    });

    SpanningSummary {
        spanning_hole_clusters,
        face_spans,
        bond_spans,
    }
}

/// Number of hole clusters spanning two opposite outer layers, without
/// the face and bond machinery (used at scale by the uniqueness check).
pub fn spanning_hole_count(cfg: &Configuration) -> usize {
    let w = cfg.window;
    let n = w.n();
    let side = (2 * n) as usize;
    let vertices = w.dual_vertex_count();
    let inf = vertices as u32;
    let mut uf_dual = UnionFind::new(vertices + 1);
    w.for_each_face(|idx, axis, anchor| {
        if cfg.is_open(idx) {
            return;
        }
        let encode = |axis_val: i64| -> Option<u32> {
            if axis_val < -n || axis_val >= n {
                return None;
            }
            let mut id = 0usize;
            for (j, &c) in anchor.iter().enumerate() {
                let v = if j == axis { axis_val } else { c };
                id = id * side + (v + n) as usize;
            }
            Some(id as u32)
        };
        let a = anchor[axis];
        match (encode(a - 1), encode(a)) {
            (Some(u), Some(v)) => uf_dual.union(u, v),
            (Some(u), None) => uf_dual.union(u, inf),
            (None, Some(v)) => uf_dual.union(v, inf),
            _ => {}
        }
    });
    let mut masks = vec![0u64; vertices];
    spanning_hole_count_from_uf(w, &mut uf_dual, &mut masks)
}

/// Shared tail: hole clusters are components of the dual grid restricted
/// to vertices outside the infinity class (the complement-route
/// characterization), and one spans when its facet mask covers two
/// opposite sides.
fn spanning_hole_count_from_uf(w: Window, uf_dual: &mut UnionFind, masks: &mut [u64]) -> usize {
    let n = w.n();
    let d = w.d();
    let side = (2 * n) as usize;
    let vertices = w.dual_vertex_count();
    let inf_root = uf_dual.find(vertices as u32);
    let mut uf_holes = UnionFind::new(vertices);
    let mut strides = vec![1usize; d];
    for j in (0..d - 1).rev() {
        strides[j] = strides[j + 1] * side;
    }
    let in_infinity: Vec<bool> = (0..vertices)
        .map(|v| uf_dual.find(v as u32) == inf_root)
        .collect();
    w.for_each_dual(|v, coords| {
        if in_infinity[v] {
            return;
        }
        for j in 0..d {
            if coords[j] + 1 < n && !in_infinity[v + strides[j]] {
                uf_holes.union(v as u32, (v + strides[j]) as u32);
            }
        }
    });
    for m in masks.iter_mut() {
        *m = 0;
    }
    let mut counted = vec![false; vertices];
    let mut count = 0usize;
    w.for_each_dual(|v, coords| {
        if in_infinity[v] {
            return;
        }
        let root = uf_holes.find(v as u32) as usize;
        masks[root] |= w.dual_facet_mask(coords);
        if !counted[root] && w.mask_spans(masks[root]) {
            counted[root] = true;
            count += 1;
        }
    });
    count
}

/// The boundary edge set ΔC*: all dual bonds with exactly one endpoint in
/// the cluster, including bonds crossing the window boundary. Sorted for
/// determinism.
pub fn boundary_edges(labeling: &ClusterLabeling, cluster_id: u32) -> Result<Vec<DualBond>> {
    if labeling.subject != Subject::DualVertices {
        return Err(Error::InvalidParameter(
            "boundary_edges requires a dual-vertex labeling".into(),
        ));
    }
    if cluster_id as usize >= labeling.clusters.len() {
        return Err(Error::UnknownCluster(cluster_id as usize));
    }
    let w = labeling.window;
    let d = w.d();
    let mut out = Vec::new();
    for member in labeling.members(cluster_id) {
        let v = w.dual_at(member);
        for axis in 0..d {
            for dir in [1i64, -1] {
                let mut other = v.coords.clone();
                other[axis] += dir;
                let internal = w
                    .encode_dual(&other)
                    .and_then(|oi| labeling.label[oi])
                    .map(|l| l == cluster_id)
                    .unwrap_or(false);
                if internal {
                    continue;
                }
                let base = if dir == 1 {
                    v.clone()
                } else {
                    DualVertex { coords: other }
                };
                out.push(DualBond { base, axis });
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{sample_configuration, SimulationParams};
    use crate::lattice::{face_from_dual_bond, Dim, Face};

    fn params(d: usize, n: usize, p: f64, seed: u64) -> SimulationParams {
        SimulationParams {
            p,
            d: Dim::new(d).unwrap(),
            n,
            replicates: 1,
            seed,
        }
    }

    /// Opens exactly the four faces framing the unit cell of dual vertex 0*.
    fn framed_origin_cell(n: usize) -> Configuration {
        let w = Window::new(Dim::new(2).unwrap(), n);
        let mut cfg = Configuration::all_closed(w);
        for face in [
            Face { axis: 0, anchor: vec![0, 0] },
            Face { axis: 0, anchor: vec![1, 0] },
            Face { axis: 1, anchor: vec![0, 0] },
            Face { axis: 1, anchor: vec![0, 1] },
        ] {
            cfg.set_open(w.face_index(&face).unwrap(), true);
        }
        cfg
    }

    #[test]
    fn all_open_gives_singletons() {
        let cfg = sample_configuration(&params(2, 2, 1.0, 1), 0);
        let lab = dual_clusters(&cfg);
        assert_eq!(lab.clusters.len(), 16);
        assert!(lab.clusters.iter().all(|c| c.size == 1));
        assert!(lab.clusters.iter().all(|c| !c.touches_infinity));
    }

    #[test]
    fn all_closed_gives_one_infinite_cluster() {
        let cfg = sample_configuration(&params(2, 2, 0.0, 1), 0);
        let lab = dual_clusters(&cfg);
        assert_eq!(lab.clusters.len(), 1);
        assert_eq!(lab.clusters[0].size, 16);
        assert!(lab.clusters[0].touches_infinity);
    }

    #[test]
    fn framed_cell_isolates_origin() {
        let cfg = framed_origin_cell(2);
        let lab = dual_clusters(&cfg);
        let w = cfg.window;
        let origin = w.encode_dual(&[0, 0]).unwrap();
        let oid = lab.cluster_of(origin).unwrap();
        assert_eq!(lab.cluster(oid).size, 1);
        assert!(!lab.cluster(oid).touches_infinity);
        // every other vertex sits in one infinity-touching cluster
        assert_eq!(lab.clusters.len(), 2);
        let other = (0..2).find(|&i| i != oid as usize).unwrap();
        assert_eq!(lab.clusters[other].size, 15);
        assert!(lab.clusters[other].touches_infinity);
    }

    #[test]
    fn framed_cell_faces_form_one_cluster() {
        let cfg = framed_origin_cell(2);
        let lab = face_clusters(&cfg);
        assert_eq!(lab.clusters.len(), 1);
        assert_eq!(lab.clusters[0].size, 4);
        assert!(!lab.clusters[0].touches_infinity);
    }

    #[test]
    fn all_open_faces_connected() {
        let cfg = sample_configuration(&params(3, 2, 1.0, 1), 0);
        let lab = face_clusters(&cfg);
        assert_eq!(lab.clusters.len(), 1);
        assert_eq!(lab.clusters[0].size, cfg.window.face_count());
        assert!(lab.clusters[0].touches_infinity);
    }

    #[test]
    fn single_open_face_is_singleton_cluster() {
        let w = Window::new(Dim::new(2).unwrap(), 2);
        let mut cfg = Configuration::all_closed(w);
        cfg.set_open(7, true);
        let lab = face_clusters(&cfg);
        assert_eq!(lab.clusters.len(), 1);
        assert_eq!(lab.clusters[0].size, 1);
        assert_eq!(lab.cluster_of(7), Some(0));
        assert_eq!(lab.cluster_of(6), None);
    }

    #[test]
    fn boundary_edges_of_singleton() {
        let cfg = framed_origin_cell(2);
        let lab = dual_clusters(&cfg);
        let origin = cfg.window.encode_dual(&[0, 0]).unwrap();
        let oid = lab.cluster_of(origin).unwrap();
        let edges = boundary_edges(&lab, oid).unwrap();
        assert_eq!(edges.len(), 4);
        // every boundary bond of a finite cluster crosses an open face
        for e in &edges {
            let q = face_from_dual_bond(e);
            let idx = cfg.window.face_index(&q).unwrap();
            assert!(cfg.is_open(idx));
        }
    }

    #[test]
    fn boundary_edges_of_singleton_d3() {
        // frame the origin cell of a d=3 window: 6 faces
        let w = Window::new(Dim::new(3).unwrap(), 2);
        let mut cfg = Configuration::all_closed(w);
        for axis in 0..3usize {
            for hi in [0i64, 1] {
                let mut anchor = vec![0i64; 3];
                anchor[axis] = hi;
                cfg.set_open(w.face_index(&Face { axis, anchor }).unwrap(), true);
            }
        }
        let lab = dual_clusters(&cfg);
        let origin = w.encode_dual(&[0, 0, 0]).unwrap();
        let oid = lab.cluster_of(origin).unwrap();
        assert_eq!(lab.cluster(oid).size, 1);
        assert_eq!(boundary_edges(&lab, oid).unwrap().len(), 6);
    }

    #[test]
    fn boundary_edges_of_domino() {
        // two-vertex cluster {0*, 0* + e_1}: open the six faces around the
        // 2x1 block, keep the shared face closed
        let w = Window::new(Dim::new(2).unwrap(), 2);
        let mut cfg = Configuration::all_closed(w);
        for face in [
            Face { axis: 0, anchor: vec![0, 0] },
            Face { axis: 0, anchor: vec![2, 0] },
            Face { axis: 1, anchor: vec![0, 0] },
            Face { axis: 1, anchor: vec![0, 1] },
            Face { axis: 1, anchor: vec![1, 0] },
            Face { axis: 1, anchor: vec![1, 1] },
        ] {
            cfg.set_open(w.face_index(&face).unwrap(), true);
        }
        let lab = dual_clusters(&cfg);
        let a = w.encode_dual(&[0, 0]).unwrap();
        let b = w.encode_dual(&[1, 0]).unwrap();
        let id = lab.cluster_of(a).unwrap();
        assert_eq!(lab.cluster_of(b), Some(id));
        assert_eq!(lab.cluster(id).size, 2);
        assert!(!lab.cluster(id).touches_infinity);
        assert_eq!(boundary_edges(&lab, id).unwrap().len(), 6);
    }

    #[test]
    fn unknown_cluster_id_errors() {
        let cfg = framed_origin_cell(2);
        let lab = dual_clusters(&cfg);
        assert!(matches!(
            boundary_edges(&lab, 99),
            Err(Error::UnknownCluster(99))
        ));
        let flab = face_clusters(&cfg);
        assert!(boundary_edges(&flab, 0).is_err());
    }

    #[test]
    fn spanning_summary_matches_graph_based_route() {
        use crate::holes::build_hole_graph;
        for seed in 0..40u64 {
            for &(d, n, p) in &[(2usize, 4usize, 0.5), (2, 6, 0.55), (3, 3, 0.7), (3, 4, 0.8)] {
                let cfg = sample_configuration(&params(d, n, p, seed), 0);
                let summary = spanning_summary(&cfg);
                let w = cfg.window;

                let g = build_hole_graph(&cfg);
                let via_graph = g
                    .cluster_boundary_mask
                    .iter()
                    .filter(|&&m| w.mask_spans(m))
                    .count();
                assert_eq!(summary.spanning_hole_clusters, via_graph);

                let flab = face_clusters(&cfg);
                let f = flab.clusters.iter().any(|c| w.mask_spans(c.boundary_mask));
                assert_eq!(summary.face_spans, f);

                let blab = dual_clusters_windowed(&cfg);
                let b = blab.clusters.iter().any(|c| w.mask_spans(c.boundary_mask));
                assert_eq!(summary.bond_spans, b);
            }
        }
    }

    #[test]
    fn partition_properties_hold_on_random_configurations() {
        for seed in 0..20u64 {
            let cfg = sample_configuration(&params(3, 2, 0.5, seed), 0);
            let lab = dual_clusters(&cfg);
            let total: usize = lab.clusters.iter().map(|c| c.size).sum();
            assert_eq!(total, cfg.window.dual_vertex_count());
            assert!(lab.label.iter().all(|l| l.is_some()));
            for (id, info) in lab.clusters.iter().enumerate() {
                let members = lab.members(id as u32);
                assert_eq!(members.len(), info.size);
                assert_eq!(members[0], info.min_member);
            }
            // every in-window face is in exactly one state
            let open_bonds = cfg.window.face_count() - cfg.open_count();
            assert_eq!(open_bonds + cfg.open_count(), cfg.window.face_count());
        }
    }
}
