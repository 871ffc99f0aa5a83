use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rational::{int, rat, Rational};

use super::arc::{arcs_diameter, Arc};
use super::boxes::{BoxUnion, Side};

/// Region of `T^d` known only up to the uniform `m^d` grid.
///
/// The true set contains the closed union of `inner` cells and lies in the
/// interior of the closed union of `outer` cells. Cell `c` has index
/// `Σ c_k m^k` and covers `[c_k/m, (c_k+1)/m]` on axis `k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridRegion {
    dim: usize,
    resolution: u32,
    inner: Vec<u32>,
    outer: Vec<u32>,
}

impl GridRegion {
    pub fn new(dim: usize, resolution: u32, mut inner: Vec<u32>, mut outer: Vec<u32>) -> Result<Self> {
        if dim == 0 || resolution == 0 {
            return Err(Error::InvalidSet("grid needs positive dimension and resolution".into()));
        }
        let total = (resolution as u64).checked_pow(dim as u32).ok_or(Error::Overflow)?;
        if total > u32::MAX as u64 {
            return Err(Error::Overflow);
        }
        inner.sort_unstable();
        inner.dedup();
        outer.sort_unstable();
        outer.dedup();
        if outer.last().is_some_and(|&c| c as u64 >= total) {
            return Err(Error::InvalidSet("grid cell index out of range".into()));
        }
        if !is_subset(&inner, &outer) {
            return Err(Error::InvalidSet("inner cells must be a subset of outer cells".into()));
        }
        Ok(GridRegion { dim, resolution, inner, outer })
    }

    pub fn full(dim: usize, resolution: u32) -> Result<Self> {
        let total = (resolution as u64).checked_pow(dim as u32).ok_or(Error::Overflow)?;
        let all: Vec<u32> = (0..total as u32).collect();
        Self::new(dim, resolution, all.clone(), all)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn inner(&self) -> &[u32] {
        &self.inner
    }

    pub fn outer(&self) -> &[u32] {
        &self.outer
    }

    pub fn cell_count(&self) -> usize {
        (self.resolution as usize).pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.outer.is_empty()
    }

    pub fn cell_coords(&self, mut idx: u32) -> Vec<u32> {
        let m = self.resolution;
        let mut c = Vec::with_capacity(self.dim);
        for _ in 0..self.dim {
            c.push(idx % m);
            idx /= m;
        }
        c
    }

    fn cell_index(&self, coords: &[i64]) -> u32 {
        let m = self.resolution as i64;
        let mut idx = 0i64;
        for &c in coords.iter().rev() {
            idx = idx * m + c.rem_euclid(m);
        }
        idx as u32
    }

    /// Centre of a cell, as torus coordinates.
    pub fn cell_center(&self, idx: u32) -> Vec<Rational> {
        let m = self.resolution as i128;
        self.cell_coords(idx).into_iter().map(|c| rat(2 * c as i128 + 1, 2 * m)).collect()
    }

    /// Conservative approximation of a box union.
    pub fn from_boxes(b: &BoxUnion, resolution: u32) -> Result<Self> {
        let dim = b.dim();
        let m = resolution as i128;
        let mut inner = Vec::new();
        let mut outer = Vec::new();
        let probe = GridRegion { dim, resolution, inner: Vec::new(), outer: Vec::new() };
        for bx in b.boxes() {
            let mut outer_axes = Vec::with_capacity(dim);
            let mut inner_axes = Vec::with_capacity(dim);
            for side in bx.sides() {
                match side {
                    Side::Full => {
                        let all: Vec<i64> = (0..m as i64).collect();
                        outer_axes.push(all.clone());
                        inner_axes.push(all);
                    }
                    Side::Arc(a) => {
                        let s = a.start() * int(m);
                        let e = a.end() * int(m);
                        let olo = s.ceil().to_integer() - 1;
                        let ohi = e.floor().to_integer();
                        outer_axes.push(cyclic_range(olo, ohi, m));
                        let ilo = s.floor().to_integer() + 1;
                        let ihi = e.ceil().to_integer() - 2;
                        inner_axes.push(cyclic_range(ilo, ihi, m));
                    }
                }
            }
            for_each_product(&outer_axes, |c| outer.push(probe.cell_index(c)));
            for_each_product(&inner_axes, |c| inner.push(probe.cell_index(c)));
        }
        Self::new(dim, resolution, inner, outer)
    }

    pub fn intersect(&self, other: &GridRegion) -> Result<GridRegion> {
        if self.dim != other.dim || self.resolution != other.resolution {
            return Err(Error::MixedRepresentations);
        }
        Ok(GridRegion {
            dim: self.dim,
            resolution: self.resolution,
            inner: intersect_sorted(&self.inner, &other.inner),
            outer: intersect_sorted(&self.outer, &other.outer),
        })
    }

    /// Preimage under `x ↦ M x` using a precomputed cell pattern.
    pub fn preimage(&self, pattern: &CellPattern) -> GridRegion {
        let total = self.cell_count();
        let mut in_outer = alloc::vec![false; total];
        let mut in_inner = alloc::vec![false; total];
        for &c in &self.outer {
            in_outer[c as usize] = true;
        }
        for &c in &self.inner {
            in_inner[c as usize] = true;
        }
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        let mut image = alloc::vec![0i64; self.dim];
        let mut shifted = alloc::vec![0i64; self.dim];
        for idx in 0..total as u32 {
            let c: Vec<i64> = self.cell_coords(idx).into_iter().map(|x| x as i64).collect();
            for (i, slot) in image.iter_mut().enumerate() {
                *slot = (0..self.dim).map(|j| pattern.matrix.get(i, j) as i64 * c[j]).sum();
            }
            let mut any = false;
            let mut all = true;
            for d in &pattern.offsets {
                for k in 0..self.dim {
                    shifted[k] = image[k] + d[k];
                }
                let t = self.cell_index(&shifted) as usize;
                any |= in_outer[t];
                all &= in_inner[t];
                if any && !all {
                    break;
                }
            }
            if any {
                outer.push(idx);
            }
            if all {
                inner.push(idx);
            }
        }
        GridRegion { dim: self.dim, resolution: self.resolution, inner, outer }
    }

    /// Diameter bounds `(lo, hi)`: the closed inner union and the closed outer union.
    pub fn diameter_bounds(&self) -> (Rational, Rational) {
        (self.cells_diameter(&self.inner), self.cells_diameter(&self.outer))
    }

    fn cells_diameter(&self, cells: &[u32]) -> Rational {
        if cells.is_empty() {
            return int(0);
        }
        let m = self.resolution as usize;
        let mut best = int(0);
        for axis in 0..self.dim {
            let mut occupied = alloc::vec![false; m];
            for &c in cells {
                occupied[self.cell_coords(c)[axis] as usize] = true;
            }
            let d = slots_diameter(&occupied);
            if d > best {
                best = d;
            }
        }
        best
    }
}

/// Diameter of a union of closed grid slots `[i/m, (i+1)/m]` on the circle.
fn slots_diameter(occupied: &[bool]) -> Rational {
    let m = occupied.len();
    if occupied.iter().all(|&o| o) {
        return rat(1, 2);
    }
    let start = occupied.iter().position(|&o| !o).unwrap();
    let mut arcs = Vec::new();
    let mut i = 0;
    while i < m {
        let p = (start + i) % m;
        if occupied[p] {
            let mut len = 0;
            while i < m && occupied[(start + i) % m] {
                len += 1;
                i += 1;
            }
            arcs.push(Arc::new(rat(p as i128, m as i128), rat(len as i128, m as i128)).expect("run length in (0,1)"));
        } else {
            i += 1;
        }
    }
    arcs_diameter(&arcs)
}

fn cyclic_range(lo: i128, hi: i128, m: i128) -> Vec<i64> {
    if hi < lo {
        return Vec::new();
    }
    let count = (hi - lo + 1).min(m);
    (0..count).map(|k| (lo + k).rem_euclid(m) as i64).collect()
}

fn for_each_product(axes: &[Vec<i64>], mut f: impl FnMut(&[i64])) {
    if axes.iter().any(|a| a.is_empty()) {
        return;
    }
    let mut idx = alloc::vec![0usize; axes.len()];
    let mut cur: Vec<i64> = axes.iter().map(|a| a[0]).collect();
    loop {
        f(&cur);
        let mut k = 0;
        loop {
            if k == axes.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                cur[k] = axes[k][idx[k]];
                break;
            }
            idx[k] = 0;
            cur[k] = axes[k][0];
            k += 1;
        }
    }
}

pub(crate) fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
    }
    true
}

/// Integer offsets `δ` of the unit cells meeting the closed parallelotope `M[0,1]^d`.
#[derive(Debug, Clone)]
pub struct CellPattern {
    matrix: IntMatrix,
    offsets: Vec<Vec<i64>>,
}

impl CellPattern {
    pub fn new(matrix: &IntMatrix) -> Result<Self> {
        let d = matrix.dim();
        if matrix.det()? == 0 {
            return Err(Error::SingularMatrix);
        }
        let mut lo = alloc::vec![0i64; d];
        let mut hi = alloc::vec![0i64; d];
        for i in 0..d {
            for j in 0..d {
                let v = matrix.get(i, j) as i64;
                if v < 0 {
                    lo[i] += v;
                } else {
                    hi[i] += v;
                }
            }
        }
        let axes: Vec<Vec<i64>> = (0..d).map(|i| (lo[i] - 1..=hi[i]).collect()).collect();
        let mut offsets = Vec::new();
        for_each_product(&axes, |delta| {
            if d != 2 || meets_parallelogram(matrix, delta) {
                offsets.push(delta.to_vec());
            }
        });
        Ok(CellPattern { matrix: matrix.clone(), offsets })
    }

    pub fn offsets(&self) -> &[Vec<i64>] {
        &self.offsets
    }
}

/// Separating-axis test between the unit cell at `delta` and `M[0,1]^2` (both closed).
fn meets_parallelogram(m: &IntMatrix, delta: &[i64]) -> bool {
    let c1 = [m.get(0, 0) as i64, m.get(1, 0) as i64];
    let c2 = [m.get(0, 1) as i64, m.get(1, 1) as i64];
    let para = [[0, 0], c1, c2, [c1[0] + c2[0], c1[1] + c2[1]]];
    let cell = [
        [delta[0], delta[1]],
        [delta[0] + 1, delta[1]],
        [delta[0], delta[1] + 1],
        [delta[0] + 1, delta[1] + 1],
    ];
    let axes = [[1, 0], [0, 1], [-c1[1], c1[0]], [-c2[1], c2[0]]];
    axes.iter().all(|ax| {
        let proj = |p: &[i64; 2]| ax[0] * p[0] + ax[1] * p[1];
        let (pmin, pmax) = minmax(para.iter().map(proj));
        let (cmin, cmax) = minmax(cell.iter().map(proj));
        pmin <= cmax && cmin <= pmax
    })
}

fn minmax(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(a, b), x| (a.min(x), b.max(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::boxes::TorusBox;

    fn square(s: (i128, i128), len: (i128, i128)) -> BoxUnion {
        let a = Arc::new(rat(s.0, s.1), rat(len.0, len.1)).unwrap();
        BoxUnion::single(TorusBox::from_arcs(alloc::vec![a.clone(), a]).unwrap())
    }

    #[test]
    fn box_promotion_counts() {
        let g = GridRegion::from_boxes(&square((0, 1), (1, 2)), 8).unwrap();
        // outer: cells -1..=4 per axis (6), inner: 1..=2 (2)
        assert_eq!(g.outer().len(), 36);
        assert_eq!(g.inner().len(), 4);
    }

    #[test]
    fn identity_pattern_keeps_region() {
        let g = GridRegion::from_boxes(&square((1, 10), (3, 5)), 16).unwrap();
        let p = CellPattern::new(&IntMatrix::identity(2)).unwrap();
        let h = g.preimage(&p);
        assert!(is_subset(g.outer(), h.outer()));
        assert!(is_subset(h.inner(), g.inner()));
    }

    #[test]
    fn cat_map_pattern_is_tight() {
        let m = IntMatrix::new(2, alloc::vec![1, 1, 1, 2]).unwrap();
        let p = CellPattern::new(&m).unwrap();
        // bounding box has 4*5 = 20 cells, the parallelogram meets fewer
        assert!(p.offsets().len() < 20);
        assert!(p.offsets().contains(&alloc::vec![0, 0]));
        assert!(!p.offsets().contains(&alloc::vec![1, -1]));
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = IntMatrix::new(2, alloc::vec![1, 2, 2, 4]).unwrap();
        assert_eq!(CellPattern::new(&m).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn grid_diameter_bounds() {
        let g = GridRegion::from_boxes(&square((0, 1), (1, 4)), 16).unwrap();
        let (lo, hi) = g.diameter_bounds();
        assert!(lo <= rat(1, 4) && rat(1, 4) <= hi);
    }
}
