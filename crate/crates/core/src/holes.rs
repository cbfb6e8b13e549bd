//! Holes (finite dual clusters), the hole graph, hole clusters computed two
//! independent ways, and trifurcation tests.
//!
//! A hole is a bounded component of the complement of the open-face set;
//! in the window it is exactly a finite dual cluster. Two holes are
//! adjacent when their clusters share a boundary bond, equivalently when a
//! closed dual bond joins the two clusters.

use std::collections::HashSet;

use serde_json::json;

use crate::clusters::{dual_clusters, ClusterLabeling};
use crate::config::Configuration;
use crate::lattice::{DualVertex, Window};
use crate::{Error, Result};

/// A hole: one finite dual cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hole {
    pub id: u32,
    /// Member dual vertices as canonical indices, increasing.
    pub members: Vec<usize>,
    pub size: usize,
    /// Facet contacts of the members (nonzero = touches the outermost
    /// dual layer).
    pub boundary_mask: u64,
}

impl Hole {
    pub fn member_vertices(&self, w: &Window) -> Vec<DualVertex> {
        self.members.iter().map(|&i| w.dual_at(i)).collect()
    }

    #[inline]
    pub fn touches_boundary(&self) -> bool {
        self.boundary_mask != 0
    }
}

/// The hole graph restricted to the window, with its connected components.
#[derive(Debug, Clone)]
pub struct HoleGraph {
    pub window: Window,
    pub holes: Vec<Hole>,
    /// Unordered hole-id pairs `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(u32, u32)>,
    pub adjacency: Vec<Vec<u32>>,
    /// Hole-cluster id per hole, dense in min-hole-id order.
    pub cluster_label: Vec<u32>,
    pub cluster_count: usize,
    /// Whether each cluster contains a hole touching the outermost dual
    /// layer (the finite-window proxy for an infinite hole cluster).
    pub cluster_touches_boundary: Vec<bool>,
    pub cluster_boundary_mask: Vec<u64>,
    /// Hole id per dual vertex; `None` for vertices of infinity-touching
    /// dual clusters.
    pub vertex_to_hole: Vec<Option<u32>>,
}

impl HoleGraph {
    pub fn hole_count(&self) -> usize {
        self.holes.len()
    }

    /// Holes of one cluster, increasing.
    pub fn cluster_holes(&self, cluster: u32) -> Vec<u32> {
        (0..self.holes.len() as u32)
            .filter(|&h| self.cluster_label[h as usize] == cluster)
            .collect()
    }

    /// Hole clusters expressed as a partition of dual-vertex indices,
    /// groups and members sorted.
    pub fn vertex_partition(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.cluster_count];
        for (v, h) in self.vertex_to_hole.iter().enumerate() {
            if let Some(h) = h {
                groups[self.cluster_label[*h as usize] as usize].push(v);
            }
        }
        groups.retain(|g| !g.is_empty());
        groups.sort_by_key(|g| g[0]);
        groups
    }
}

fn holes_from_labeling(lab: &ClusterLabeling) -> (Vec<Hole>, Vec<Option<u32>>, Vec<Option<u32>>) {
    let mut cluster_to_hole = vec![None; lab.clusters.len()];
    let mut holes = Vec::new();
    for (cid, info) in lab.clusters.iter().enumerate() {
        if !info.touches_infinity {
            cluster_to_hole[cid] = Some(holes.len() as u32);
            holes.push(Hole {
                id: holes.len() as u32,
                members: Vec::with_capacity(info.size),
                size: info.size,
                boundary_mask: info.boundary_mask,
            });
        }
    }
    let mut vertex_to_hole = vec![None; lab.label.len()];
    for (v, l) in lab.label.iter().enumerate() {
        if let Some(cid) = l {
            if let Some(h) = cluster_to_hole[*cid as usize] {
                holes[h as usize].members.push(v);
                vertex_to_hole[v] = Some(h);
            }
        }
    }
    (holes, vertex_to_hole, cluster_to_hole)
}

/// One hole per finite dual cluster, ids assigned by minimal member.
pub fn extract_holes(cfg: &Configuration) -> Vec<Hole> {
    let lab = dual_clusters(cfg);
    holes_from_labeling(&lab).0
}

/// Builds the hole graph: for every closed dual bond whose endpoints lie
/// in two different finite dual clusters, an edge joins the corresponding
/// holes.
pub fn build_hole_graph(cfg: &Configuration) -> HoleGraph {
    let lab = dual_clusters(cfg);
    build_hole_graph_from_labeling(cfg, &lab)
}

pub fn build_hole_graph_from_labeling(cfg: &Configuration, lab: &ClusterLabeling) -> HoleGraph {
    let w = cfg.window;
    let n = w.n();
    let side = (2 * n) as usize;
    let (holes, vertex_to_hole, _) = holes_from_labeling(lab);

    let mut edge_set: HashSet<(u32, u32)> = HashSet::new();
    w.for_each_face(|idx, axis, anchor| {
        if !cfg.is_open(idx) {
            return; // bond open: internal to a dual cluster or reaches out
        }
        let encode = |axis_val: i64| -> Option<usize> {
            if axis_val < -n || axis_val >= n {
                return None;
            }
            let mut id = 0usize;
            for (j, &c) in anchor.iter().enumerate() {
                let v = if j == axis { axis_val } else { c };
                id = id * side + (v + n) as usize;
            }
            Some(id)
        };
        let a = anchor[axis];
        if let (Some(u), Some(v)) = (encode(a - 1), encode(a)) {
            if let (Some(h1), Some(h2)) = (vertex_to_hole[u], vertex_to_hole[v]) {
                if h1 != h2 {
                    edge_set.insert((h1.min(h2), h1.max(h2)));
                }
            }
        }
    });
    let mut edges: Vec<(u32, u32)> = edge_set.into_iter().collect();
    edges.sort_unstable();

    let mut adjacency = vec![Vec::new(); holes.len()];
    for &(a, b) in &edges {
        adjacency[a as usize].push(b);
        adjacency[b as usize].push(a);
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }

    // connected components of (holes, edges)
    let mut cluster_label = vec![u32::MAX; holes.len()];
    let mut cluster_count = 0usize;
    let mut stack = Vec::new();
    for h in 0..holes.len() {
        if cluster_label[h] != u32::MAX {
            continue;
        }
        let id = cluster_count as u32;
        cluster_count += 1;
        cluster_label[h] = id;
        stack.push(h as u32);
        while let Some(v) = stack.pop() {
            for &next in &adjacency[v as usize] {
                if cluster_label[next as usize] == u32::MAX {
                    cluster_label[next as usize] = id;
                    stack.push(next);
                }
            }
        }
    }

    let mut cluster_boundary_mask = vec![0u64; cluster_count];
    for (h, hole) in holes.iter().enumerate() {
        cluster_boundary_mask[cluster_label[h] as usize] |= hole.boundary_mask;
    }
    let cluster_touches_boundary = cluster_boundary_mask.iter().map(|&m| m != 0).collect();

    HoleGraph {
        window: w,
        holes,
        edges,
        adjacency,
        cluster_label,
        cluster_count,
        cluster_touches_boundary,
        cluster_boundary_mask,
        vertex_to_hole,
    }
}

/// Hole clusters by the independent complement route: the graph on dual
/// vertices outside every infinity-touching cluster, with *all* dual bonds
/// whose endpoints both avoid those clusters (open or closed). Returns its
/// component partition, groups and members sorted.
pub fn hole_clusters_via_complement(cfg: &Configuration) -> Vec<Vec<usize>> {
    let w = cfg.window;
    let lab = dual_clusters(cfg);
    let in_infinity: Vec<bool> = lab
        .label
        .iter()
        .map(|l| lab.clusters[l.unwrap() as usize].touches_infinity)
        .collect();

    let count = w.dual_vertex_count();
    let mut parent: Vec<u32> = (0..count as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let g = parent[parent[x as usize] as usize];
            parent[x as usize] = g;
            x = g;
        }
        x
    }
    let n = w.n();
    let d = w.d();
    let mut strides = vec![1usize; d];
    for j in (0..d - 1).rev() {
        strides[j] = strides[j + 1] * (2 * n) as usize;
    }
    w.for_each_dual(|idx, coords| {
        if in_infinity[idx] {
            return;
        }
        for j in 0..d {
            if coords[j] + 1 >= n {
                continue;
            }
            let other = idx + strides[j];
            if in_infinity[other] {
                continue;
            }
            let ra = find(&mut parent, idx as u32);
            let rb = find(&mut parent, other as u32);
            if ra != rb {
                parent[ra.max(rb) as usize] = ra.min(rb);
            }
        }
    });

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_to_group: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    for (v, &inside) in in_infinity.iter().enumerate() {
        if inside {
            continue;
        }
        let root = find(&mut parent, v as u32);
        let g = *root_to_group.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(v);
    }
    groups.sort_by_key(|g| g[0]);
    groups
}

/// Counts the boundary-touching components left after deleting hole `h`
/// from its cluster, by explicit traversal.
fn boundary_components_after_deletion(g: &HoleGraph, h: u32) -> usize {
    let cluster = g.cluster_label[h as usize];
    let mut visited: HashSet<u32> = HashSet::new();
    visited.insert(h);
    let mut boundary_components = 0usize;
    let mut stack = Vec::new();
    for start in g.cluster_holes(cluster) {
        if visited.contains(&start) {
            continue;
        }
        let mut touches = false;
        visited.insert(start);
        stack.push(start);
        while let Some(v) = stack.pop() {
            if g.holes[v as usize].touches_boundary() {
                touches = true;
            }
            for &next in &g.adjacency[v as usize] {
                if next != h && visited.insert(next) {
                    stack.push(next);
                }
            }
        }
        if touches {
            boundary_components += 1;
        }
    }
    boundary_components
}

/// Whether `x*` is a trifurcation: its dual cluster is exactly `{x*}`, its
/// hole lies in a boundary-touching hole cluster, and deleting the hole
/// splits that cluster into exactly three boundary-touching components.
pub fn is_trifurcation(cfg: &Configuration, x: &DualVertex) -> Result<bool> {
    let w = cfg.window;
    let idx = w
        .dual_index(x)
        .ok_or_else(|| Error::OutsideWindow(x.coords.clone()))?;
    let g = build_hole_graph(cfg);
    Ok(is_trifurcation_in_graph(&g, idx))
}

/// Reference (traversal-based) trifurcation test against a prebuilt graph.
pub fn is_trifurcation_in_graph(g: &HoleGraph, vertex_index: usize) -> bool {
    let h = match g.vertex_to_hole[vertex_index] {
        Some(h) => h,
        None => return false,
    };
    if g.holes[h as usize].size != 1 {
        return false;
    }
    if !g.cluster_touches_boundary[g.cluster_label[h as usize] as usize] {
        return false;
    }
    boundary_components_after_deletion(g, h) == 3
}

/// All trifurcations of a configuration, as sorted dual-vertex indices.
///
/// Uses one articulation-point pass (iterative depth-first search with
/// low-links) per boundary-touching hole cluster, so the whole window
/// costs O(holes + edges) instead of one traversal per candidate.
pub fn trifurcations(g: &HoleGraph) -> Vec<usize> {
    let holes = g.holes.len();
    if holes == 0 {
        return Vec::new();
    }

    const UNSET: u32 = u32::MAX;
    let mut disc = vec![UNSET; holes];
    let mut low = vec![0u32; holes];
    let mut parent = vec![UNSET; holes];
    // per hole: count of boundary holes in its DFS subtree
    let mut sub_boundary = vec![0u32; holes];
    // per hole: separated subtrees (low >= disc) touching the boundary,
    // accumulated while unwinding
    let mut sep_boundary_subtrees = vec![0u32; holes];
    let mut sep_boundary_total = vec![0u32; holes];
    let mut root_children_boundary = vec![0u32; holes];

    let mut cluster_boundary_count = vec![0u32; g.cluster_count];
    for (h, hole) in g.holes.iter().enumerate() {
        if hole.touches_boundary() {
            cluster_boundary_count[g.cluster_label[h] as usize] += 1;
        }
    }

    let mut timer = 1u32;
    // stack of (vertex, next adjacency position)
    let mut stack: Vec<(u32, usize)> = Vec::new();
    for start in 0..holes as u32 {
        if disc[start as usize] != UNSET {
            continue;
        }
        if !g.cluster_touches_boundary[g.cluster_label[start as usize] as usize] {
            // finite cluster: no member can satisfy condition 2
            disc[start as usize] = 0;
            let mut s = vec![start];
            while let Some(v) = s.pop() {
                for &nx in &g.adjacency[v as usize] {
                    if disc[nx as usize] == UNSET {
                        disc[nx as usize] = 0;
                        s.push(nx);
                    }
                }
            }
            continue;
        }
        disc[start as usize] = timer;
        low[start as usize] = timer;
        sub_boundary[start as usize] = g.holes[start as usize].touches_boundary() as u32;
        timer += 1;
        stack.push((start, 0));
        while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
            let vu = v as usize;
            if *pos < g.adjacency[vu].len() {
                let next = g.adjacency[vu][*pos];
                *pos += 1;
                if disc[next as usize] == UNSET {
                    parent[next as usize] = v;
                    disc[next as usize] = timer;
                    low[next as usize] = timer;
                    sub_boundary[next as usize] =
                        g.holes[next as usize].touches_boundary() as u32;
                    timer += 1;
                    stack.push((next, 0));
                } else if next != parent[vu] {
                    low[vu] = low[vu].min(disc[next as usize]);
                }
            } else {
                stack.pop();
                let p = parent[vu];
                if p != UNSET {
                    let pu = p as usize;
                    low[pu] = low[pu].min(low[vu]);
                    sub_boundary[pu] += sub_boundary[vu];
                    if parent[pu] == UNSET {
                        if sub_boundary[vu] > 0 {
                            root_children_boundary[pu] += 1;
                        }
                    } else if low[vu] >= disc[pu] {
                        sep_boundary_total[pu] += sub_boundary[vu];
                        if sub_boundary[vu] > 0 {
                            sep_boundary_subtrees[pu] += 1;
                        }
                    }
                }
            }
        }
    }

    let mut out = Vec::new();
    for (h, hole) in g.holes.iter().enumerate() {
        if hole.size != 1 {
            continue;
        }
        let cluster = g.cluster_label[h] as usize;
        if !g.cluster_touches_boundary[cluster] {
            continue;
        }
        let own = hole.touches_boundary() as u32;
        let boundary_components = if parent[h] == UNSET {
            // deleting the DFS root leaves exactly its child subtrees
            root_children_boundary[h] as usize
        } else {
            let rest = cluster_boundary_count[cluster] - sep_boundary_total[h] - own;
            sep_boundary_subtrees[h] as usize + usize::from(rest > 0)
        };
        if boundary_components == 3 {
            out.push(hole.members[0]);
        }
    }
    out.sort_unstable();
    out
}

/// Line-based adjacency export: `hole_id size neighbor_count: neighbor_ids`.
pub fn export_adjacency(g: &HoleGraph) -> String {
    let mut out = String::new();
    for hole in &g.holes {
        let adj = &g.adjacency[hole.id as usize];
        out.push_str(&format!("{} {} {}:", hole.id, hole.size, adj.len()));
        for n in adj {
            out.push_str(&format!(" {n}"));
        }
        out.push('\n');
    }
    out
}

/// JSON summary of a hole graph.
pub fn summary_json(g: &HoleGraph) -> serde_json::Value {
    let mut cluster_sizes = vec![0usize; g.cluster_count];
    for &c in &g.cluster_label {
        cluster_sizes[c as usize] += 1;
    }
    let spanning: Vec<bool> = g
        .cluster_boundary_mask
        .iter()
        .map(|&m| g.window.mask_spans(m))
        .collect();
    json!({
        "hole_count": g.holes.len(),
        "cluster_count": g.cluster_count,
        "max_cluster_size": cluster_sizes.iter().max().copied().unwrap_or(0),
        "cluster_touches_boundary": g.cluster_touches_boundary,
        "cluster_spans_window": spanning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{sample_configuration, Configuration, SimulationParams};
    use crate::lattice::{Dim, Face};

    fn params(d: usize, n: usize, p: f64, seed: u64) -> SimulationParams {
        SimulationParams {
            p,
            d: Dim::new(d).unwrap(),
            n,
            replicates: 1,
            seed,
        }
    }

    fn open_cell_faces(cfg: &mut Configuration, coords: &[i64]) {
        let w = cfg.window;
        let d = w.d();
        for axis in 0..d {
            for t in [0i64, 1] {
                let mut anchor = coords.to_vec();
                anchor[axis] += t;
                let idx = w.face_index(&Face { axis, anchor }).unwrap();
                cfg.set_open(idx, true);
            }
        }
    }

    #[test]
    fn all_open_every_vertex_is_a_singleton_hole() {
        let cfg = sample_configuration(&params(2, 2, 1.0, 3), 0);
        let holes = extract_holes(&cfg);
        assert_eq!(holes.len(), 16);
        assert!(holes.iter().all(|h| h.size == 1));
        let g = build_hole_graph(&cfg);
        // 4x4 grid graph: 2 * 4 * 3 = 24 edges, one spanning cluster
        assert_eq!(g.edges.len(), 24);
        assert_eq!(g.cluster_count, 1);
        assert!(g.cluster_touches_boundary[0]);
    }

    #[test]
    fn all_closed_no_holes() {
        let cfg = sample_configuration(&params(2, 2, 0.0, 3), 0);
        assert!(extract_holes(&cfg).is_empty());
        let g = build_hole_graph(&cfg);
        assert!(g.edges.is_empty());
        assert_eq!(g.cluster_count, 0);
        assert!(hole_clusters_via_complement(&cfg).is_empty());
    }

    #[test]
    fn framed_cell_is_one_hole() {
        let w = Window::new(Dim::new(2).unwrap(), 2);
        let mut cfg = Configuration::all_closed(w);
        open_cell_faces(&mut cfg, &[0, 0]);
        let holes = extract_holes(&cfg);
        assert_eq!(holes.len(), 1);
        assert_eq!(holes[0].size, 1);
        assert_eq!(holes[0].members, vec![w.encode_dual(&[0, 0]).unwrap()]);
    }

    #[test]
    fn two_framed_cells_share_one_edge() {
        let w = Window::new(Dim::new(2).unwrap(), 2);
        let mut cfg = Configuration::all_closed(w);
        open_cell_faces(&mut cfg, &[0, 0]);
        open_cell_faces(&mut cfg, &[1, 0]);
        let g = build_hole_graph(&cfg);
        assert_eq!(g.hole_count(), 2);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.cluster_count, 1);
    }

    #[test]
    fn complement_partition_matches_hole_graph() {
        for seed in 0..50u64 {
            for &p in &[0.2, 0.4, 0.6, 0.8] {
                let cfg = sample_configuration(&params(2, 4, p, seed), 0);
                let g = build_hole_graph(&cfg);
                assert_eq!(g.vertex_partition(), hole_clusters_via_complement(&cfg));
                let cfg = sample_configuration(&params(3, 3, p, seed), 0);
                let g = build_hole_graph(&cfg);
                assert_eq!(g.vertex_partition(), hole_clusters_via_complement(&cfg));
            }
        }
    }

    #[test]
    fn hole_sizes_cover_non_infinity_vertices() {
        for seed in 0..20u64 {
            let cfg = sample_configuration(&params(3, 3, 0.7, seed), 0);
            let lab = dual_clusters(&cfg);
            let expected: usize = lab
                .clusters
                .iter()
                .filter(|c| !c.touches_infinity)
                .map(|c| c.size)
                .sum();
            let total: usize = extract_holes(&cfg).iter().map(|h| h.size).sum();
            assert_eq!(total, expected);
        }
    }

    #[test]
    fn all_open_interior_vertex_is_not_a_trifurcation() {
        let cfg = sample_configuration(&params(2, 3, 1.0, 5), 0);
        let x = DualVertex { coords: vec![0, 0] };
        assert!(!is_trifurcation(&cfg, &x).unwrap());
        let g = build_hole_graph(&cfg);
        assert!(trifurcations(&g).is_empty());
    }

    #[test]
    fn all_closed_is_not_a_trifurcation() {
        let cfg = sample_configuration(&params(2, 3, 0.0, 5), 0);
        let x = DualVertex { coords: vec![0, 0] };
        assert!(!is_trifurcation(&cfg, &x).unwrap());
    }

    #[test]
    fn outside_window_errors() {
        let cfg = sample_configuration(&params(2, 3, 0.5, 5), 0);
        let x = DualVertex { coords: vec![9, 0] };
        assert!(is_trifurcation(&cfg, &x).is_err());
    }

    #[test]
    fn three_corridors_make_a_trifurcation() {
        // three face-tube corridors meeting at 0* in d=3, n=3
        let w = Window::new(Dim::new(3).unwrap(), 3);
        let mut cfg = Configuration::all_closed(w);
        let mut path: Vec<Vec<i64>> = vec![vec![0, 0, 0]];
        path.extend([vec![1, 0, 0], vec![2, 0, 0]]);
        path.extend([vec![-1, 0, 0], vec![-2, 0, 0], vec![-3, 0, 0]]);
        path.extend([vec![0, 1, 0], vec![0, 2, 0]]);
        for coords in &path {
            open_cell_faces(&mut cfg, coords);
        }
        let holes = extract_holes(&cfg);
        assert_eq!(holes.len(), path.len());

        let origin = DualVertex { coords: vec![0, 0, 0] };
        assert!(is_trifurcation(&cfg, &origin).unwrap());
        // interior corridor vertices split their chain in two, not three
        let mid = DualVertex { coords: vec![1, 0, 0] };
        assert!(!is_trifurcation(&cfg, &mid).unwrap());
        let tip = DualVertex { coords: vec![2, 0, 0] };
        assert!(!is_trifurcation(&cfg, &tip).unwrap());

        let g = build_hole_graph(&cfg);
        let expected = vec![w.encode_dual(&[0, 0, 0]).unwrap()];
        assert_eq!(trifurcations(&g), expected);
    }

    #[test]
    fn fast_trifurcations_match_reference() {
        for seed in 0..30u64 {
            for &(d, n, p) in &[(2usize, 4usize, 0.55), (3, 3, 0.8), (3, 3, 0.6), (2, 4, 0.8)] {
                let cfg = sample_configuration(&params(d, n, p, seed), 0);
                let g = build_hole_graph(&cfg);
                let fast = trifurcations(&g);
                let slow: Vec<usize> = (0..cfg.window.dual_vertex_count())
                    .filter(|&v| is_trifurcation_in_graph(&g, v))
                    .collect();
                assert_eq!(fast, slow, "d={d} n={n} p={p} seed={seed}");
                // loose counting sanity bound, always true
                assert!(fast.len() <= cfg.window.boundary_dual_count() * 2 * d);
            }
        }
    }

    #[test]
    fn monotone_hole_membership_under_coupling() {
        use crate::config::{coupled_field, threshold};
        for seed in 0..10u64 {
            let w = Window::new(Dim::new(2).unwrap(), 4);
            let field = coupled_field(w, seed);
            let mut prev: Option<Vec<bool>> = None;
            for i in 1..=9usize {
                let cfg = threshold(&field, i as f64 / 10.0);
                let g = build_hole_graph(&cfg);
                let mut member = vec![false; w.dual_vertex_count()];
                for h in &g.holes {
                    for &v in &h.members {
                        member[v] = true;
                    }
                }
                if let Some(prev) = &prev {
                    for (a, b) in prev.iter().zip(&member) {
                        assert!(!a || *b, "hole membership shrank as p grew");
                    }
                }
                prev = Some(member);
            }
        }
    }

    #[test]
    fn adjacency_export_format() {
        let w = Window::new(Dim::new(2).unwrap(), 2);
        let mut cfg = Configuration::all_closed(w);
        open_cell_faces(&mut cfg, &[0, 0]);
        open_cell_faces(&mut cfg, &[1, 0]);
        let g = build_hole_graph(&cfg);
        let text = export_adjacency(&g);
        assert_eq!(text, "0 1 1: 1\n1 1 1: 0\n");
        let summary = summary_json(&g);
        assert_eq!(summary["hole_count"], 2);
        assert_eq!(summary["cluster_count"], 1);
        assert_eq!(summary["max_cluster_size"], 2);
    }
}
