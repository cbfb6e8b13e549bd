//! Geometry and indexing of the cubical lattice, its dual, and the
//! (d-1)-dimensional faces, for arbitrary dimension d >= 2.
//!
//! All coordinates are exact integers. A dual vertex `x*` sits at
//! `coords + (1/2, ..., 1/2)`; only the integer part is stored, so the
//! half-integer shift never touches floating point.

use crate::{Error, Result};

/// Lattice dimension, constrained to d >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dim(usize);

impl Dim {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension must be >= 2, got {d}"
            )));
        }
        Ok(Dim(d))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }
}

/// A (d-1)-dimensional elementary cube.
///
/// `axis` is the unique degenerate coordinate; `anchor[axis]` is its value
/// and `anchor[j]` for `j != axis` is the lower endpoint of the unit
/// interval `[anchor[j], anchor[j] + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub axis: usize,
    pub anchor: Vec<i64>,
}

/// A dual lattice vertex `x* = coords + (1/2, ..., 1/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualVertex {
    pub coords: Vec<i64>,
}

/// A dual bond `<x*, x* + e_axis>`, stored from its lexicographically
/// smaller endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualBond {
    pub base: DualVertex,
    pub axis: usize,
}

impl DualBond {
    /// The endpoint `base + e_axis`.
    pub fn other(&self) -> DualVertex {
        let mut coords = self.base.coords.clone();
        coords[self.axis] += 1;
        DualVertex { coords }
    }
}

/// The unique face transverse to a dual bond.
///
/// For the bond `<x*, x* + e_i>` the face is degenerate on axis `i` at
/// `(x*)_i + 1/2` and spans `[(x*)_j - 1/2, (x*)_j + 1/2]` elsewhere.
pub fn face_from_dual_bond(e: &DualBond) -> Face {
    let mut anchor = e.base.coords.clone();
    anchor[e.axis] += 1;
    Face {
        axis: e.axis,
        anchor,
    }
}

/// Inverse of [`face_from_dual_bond`].
pub fn dual_bond_from_face(q: &Face) -> DualBond {
    let mut coords = q.anchor.clone();
    coords[q.axis] -= 1;
    DualBond {
        base: DualVertex { coords },
        axis: q.axis,
    }
}

/// All faces `Q'` with `Q ∩ Q'` an elementary cube of dimension d-2.
///
/// There are exactly `6(d-1)` of them: for each non-degenerate axis `j`,
/// two translates along `j` keeping the degenerate axis, and four faces
/// whose degenerate axis switches to `j`.
pub fn face_neighbors(q: &Face) -> Vec<Face> {
    let d = q.anchor.len();
    let mut out = Vec::with_capacity(6 * (d - 1));
    for j in 0..d {
        if j == q.axis {
            continue;
        }
        for step in [-1i64, 1] {
            let mut anchor = q.anchor.clone();
            anchor[j] += step;
            out.push(Face {
                axis: q.axis,
                anchor,
            });
        }
        for di in [-1i64, 0] {
            for dj in [0i64, 1] {
                let mut anchor = q.anchor.clone();
                anchor[q.axis] += di;
                anchor[j] += dj;
                out.push(Face { axis: j, anchor });
            }
        }
    }
    out
}

/// The observation window: faces live in `Λ^n = [-n, n]^d`, dual vertices
/// in `B̃(n) = {x* : ||x*||_∞ < n}`.
///
/// Canonical enumeration orders faces by `(axis, anchor)` and dual
/// vertices by `coords`, both lexicographically with coordinate 0 most
/// significant. These orders index every bit-field in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    d: Dim,
    n: i64,
}

impl Window {
    pub fn new(d: Dim, n: usize) -> Self {
        Window { d, n: n as i64 }
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.d
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d.get()
    }

    #[inline]
    pub fn n(&self) -> i64 {
        self.n
    }

    /// Number of faces whose closure lies in `Λ^n`: `d(2n+1)(2n)^{d-1}`.
    pub fn face_count(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        self.d() * self.face_block()
    }

    /// Faces of one degenerate axis: `(2n+1)(2n)^{d-1}`.
    fn face_block(&self) -> usize {
        let side = (2 * self.n) as usize;
        (side + 1) * side.pow(self.d() as u32 - 1)
    }

    /// Number of dual vertices in `B̃(n)`: `(2n)^d`.
    pub fn dual_vertex_count(&self) -> usize {
        ((2 * self.n) as usize).pow(self.d() as u32)
    }

    /// Dual vertices in the outermost layer `||x*||_∞ = n - 1/2`.
    pub fn boundary_dual_count(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let outer = self.dual_vertex_count();
        let inner = ((2 * self.n - 2) as usize).pow(self.d() as u32);
        outer - inner
    }

    #[inline]
    pub fn contains_face(&self, q: &Face) -> bool {
        self.encode_face(q.axis, &q.anchor).is_some()
    }

    #[inline]
    pub fn contains_dual(&self, v: &DualVertex) -> bool {
        v.coords.iter().all(|&c| -self.n <= c && c < self.n)
    }

    /// Membership in the outermost dual layer.
    pub fn is_boundary(&self, v: &DualVertex) -> bool {
        self.contains_dual(v)
            && v.coords
                .iter()
                .any(|&c| c == -self.n || c == self.n - 1)
    }

    /// Canonical index of a face, or `None` if its closure leaves `Λ^n`.
    pub fn face_index(&self, q: &Face) -> Option<usize> {
        self.encode_face(q.axis, &q.anchor)
    }

    /// Canonical index from `(axis, anchor)` coordinates without building
    /// a `Face`. Returns `None` outside the window.
    pub fn encode_face(&self, axis: usize, anchor: &[i64]) -> Option<usize> {
        let d = self.d();
        if axis >= d || anchor.len() != d || self.n == 0 {
            return None;
        }
        let n = self.n;
        let side = (2 * n) as usize;
        let mut idx = 0usize;
        for (j, &a) in anchor.iter().enumerate() {
            let radix = if j == axis { side + 1 } else { side };
            let hi = -n + radix as i64 - 1;
            if a < -n || a > hi {
                return None;
            }
            idx = idx * radix + (a + n) as usize;
        }
        Some(axis * self.face_block() + idx)
    }

    /// Face for a canonical index. Panics if out of range.
    pub fn face_at(&self, index: usize) -> Face {
        let d = self.d();
        assert!(index < self.face_count(), "face index out of range");
        let block = self.face_block();
        let axis = index / block;
        let mut rem = index % block;
        let n = self.n;
        let side = (2 * n) as usize;
        let mut anchor = vec![0i64; d];
        for j in (0..d).rev() {
            let radix = if j == axis { side + 1 } else { side };
            anchor[j] = -n + (rem % radix) as i64;
            rem /= radix;
        }
        Face { axis, anchor }
    }

    /// Canonical index of a dual vertex, or `None` outside `B̃(n)`.
    pub fn dual_index(&self, v: &DualVertex) -> Option<usize> {
        self.encode_dual(&v.coords)
    }

    /// Canonical dual index from raw coordinates.
    pub fn encode_dual(&self, coords: &[i64]) -> Option<usize> {
        let d = self.d();
        if coords.len() != d {
            return None;
        }
        let n = self.n;
        let side = (2 * n) as usize;
        let mut idx = 0usize;
        for &c in coords {
            if c < -n || c >= n {
                return None;
            }
            idx = idx * side + (c + n) as usize;
        }
        Some(idx)
    }

    /// Dual vertex for a canonical index. Panics if out of range.
    pub fn dual_at(&self, index: usize) -> DualVertex {
        let d = self.d();
        assert!(index < self.dual_vertex_count(), "dual index out of range");
        let n = self.n;
        let side = (2 * n) as usize;
        let mut rem = index;
        let mut coords = vec![0i64; d];
        for j in (0..d).rev() {
            coords[j] = -n + (rem % side) as i64;
            rem /= side;
        }
        DualVertex { coords }
    }

    /// All in-window faces in canonical order.
    pub fn faces(&self) -> Vec<Face> {
        (0..self.face_count()).map(|i| self.face_at(i)).collect()
    }

    /// All dual vertices of `B̃(n)` in canonical order.
    pub fn dual_vertices(&self) -> Vec<DualVertex> {
        (0..self.dual_vertex_count())
            .map(|i| self.dual_at(i))
            .collect()
    }

    /// Visits every in-window face as `(index, axis, anchor)` without
    /// allocating per face. The anchor odometer matches canonical order.
    pub fn for_each_face(&self, mut visit: impl FnMut(usize, usize, &[i64])) {
        let d = self.d();
        let n = self.n;
        if n == 0 {
            return;
        }
        let mut index = 0usize;
        let mut anchor = vec![0i64; d];
        for axis in 0..d {
            for (j, a) in anchor.iter_mut().enumerate() {
                *a = -n;
                let _ = j;
            }
            'block: loop {
                visit(index, axis, &anchor);
                index += 1;
                for j in (0..d).rev() {
                    let hi = if j == axis { n } else { n - 1 };
                    if anchor[j] < hi {
                        anchor[j] += 1;
                        continue 'block;
                    }
                    anchor[j] = -n;
                }
                break;
            }
        }
    }

    /// Visits every dual vertex as `(index, coords)` without allocating.
    pub fn for_each_dual(&self, mut visit: impl FnMut(usize, &[i64])) {
        let d = self.d();
        let n = self.n;
        if n == 0 {
            return;
        }
        let mut index = 0usize;
        let mut coords = vec![-n; d];
        'outer: loop {
            visit(index, &coords);
            index += 1;
            for j in (0..d).rev() {
                if coords[j] < n - 1 {
                    coords[j] += 1;
                    continue 'outer;
                }
                coords[j] = -n;
            }
            break;
        }
    }

    /// `encode_face` with up to two coordinates overridden, avoiding any
    /// intermediate anchor buffer.
    #[inline]
    fn encode_face_with(
        &self,
        axis: usize,
        anchor: &[i64],
        j1: usize,
        v1: i64,
        j2: usize,
        v2: i64,
    ) -> Option<usize> {
        let n = self.n;
        let side = (2 * n) as usize;
        let mut idx = 0usize;
        for (k, &a0) in anchor.iter().enumerate() {
            let a = if k == j1 {
                v1
            } else if k == j2 {
                v2
            } else {
                a0
            };
            let radix = if k == axis { side + 1 } else { side };
            if a < -n || a > -n + radix as i64 - 1 {
                return None;
            }
            idx = idx * radix + (a + n) as usize;
        }
        Some(axis * self.face_block() + idx)
    }

    /// Calls `visit` with the canonical index of every in-window neighbor
    /// of the face `(axis, anchor)`. Out-of-window neighbors are skipped.
    pub fn for_each_face_neighbor(
        &self,
        axis: usize,
        anchor: &[i64],
        mut visit: impl FnMut(usize),
    ) {
        let d = self.d();
        for j in 0..d {
            if j == axis {
                continue;
            }
            for step in [-1i64, 1] {
                if let Some(idx) =
                    self.encode_face_with(axis, anchor, j, anchor[j] + step, j, anchor[j] + step)
                {
                    visit(idx);
                }
            }
            for di in [-1i64, 0] {
                for dj in [0i64, 1] {
                    if let Some(idx) = self.encode_face_with(
                        j,
                        anchor,
                        axis,
                        anchor[axis] + di,
                        j,
                        anchor[j] + dj,
                    ) {
                        visit(idx);
                    }
                }
            }
        }
    }

    /// Facet-contact mask for a dual vertex: bit `2j` set when
    /// `coords[j] == -n`, bit `2j+1` when `coords[j] == n-1`.
    #[inline]
    pub fn dual_facet_mask(&self, coords: &[i64]) -> u64 {
        let mut mask = 0u64;
        for (j, &c) in coords.iter().enumerate() {
            if c == -self.n {
                mask |= 1 << (2 * j);
            }
            if c == self.n - 1 {
                mask |= 1 << (2 * j + 1);
            }
        }
        mask
    }

    /// Facet-contact mask for a face: which hyperplanes `x_j = ±n` its
    /// closure touches.
    pub fn face_facet_mask(&self, axis: usize, anchor: &[i64]) -> u64 {
        let mut mask = 0u64;
        for (j, &a) in anchor.iter().enumerate() {
            if j == axis {
                if a == -self.n {
                    mask |= 1 << (2 * j);
                }
                if a == self.n {
                    mask |= 1 << (2 * j + 1);
                }
            } else {
                if a == -self.n {
                    mask |= 1 << (2 * j);
                }
                if a + 1 == self.n {
                    mask |= 1 << (2 * j + 1);
                }
            }
        }
        mask
    }

    /// True when some axis touches both opposite facets.
    #[inline]
    pub fn mask_spans(&self, mask: u64) -> bool {
        (0..self.d()).any(|j| mask & (1 << (2 * j)) != 0 && mask & (1 << (2 * j + 1)) != 0)
    }
}
