//! Nerves of covers, complexity counts and simplicial maps.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::cover::{coverage_of, Coverage, Cover, RefinementWitness};
use crate::error::{Error, Result};

/// A simplicial complex on vertices `0..vertex_count`, stored as sorted lists of
/// strictly increasing vertex tuples per dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nerve {
    vertex_count: usize,
    simplices: Vec<Vec<Vec<u32>>>,
    uncertified: Vec<Vec<u32>>,
    uncertified_cover: bool,
    truncated: bool,
    full_dim: usize,
}

impl Nerve {
    /// Downward closure of the given faces, up to dimension `max_dim`.
    pub fn from_faces(vertex_count: usize, faces: &[Vec<u32>], max_dim: usize) -> Result<Self> {
        let mut stacks: Vec<Vec<u32>> = Vec::with_capacity(faces.len() + vertex_count);
        for f in faces {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.iter().any(|&v| v as usize >= vertex_count) {
                return Err(Error::OutOfRange("vertex"));
            }
            stacks.push(f);
        }
        for v in 0..vertex_count as u32 {
            stacks.push(alloc::vec![v]);
        }
        Ok(from_stacks(vertex_count, stacks, max_dim))
    }

    /// The full simplex on `n` vertices.
    pub fn full_simplex(n: usize) -> Self {
        let all: Vec<u32> = (0..n as u32).collect();
        Self::from_faces(n, &[all], n.saturating_sub(1)).expect("vertices in range")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Simplices of dimension `k` (empty beyond the top dimension).
    pub fn simplices(&self, k: usize) -> &[Vec<u32>] {
        self.simplices.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn counts(&self) -> Vec<u64> {
        self.simplices.iter().map(|s| s.len() as u64).collect()
    }

    /// Largest `k` with a nonempty `Δ_k`.
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        if s.is_empty() {
            return true;
        }
        match self.simplices.get(s.len() - 1) {
            Some(level) => level.binary_search_by(|x| x.as_slice().cmp(s)).is_ok(),
            None => false,
        }
    }

    /// Simplices found only through outer grid approximations.
    pub fn uncertified(&self) -> &[Vec<u32>] {
        &self.uncertified
    }

    /// True when the underlying cover was not certified (grid approximations).
    pub fn uncertified_cover(&self) -> bool {
        self.uncertified_cover
    }

    /// True when simplices above the requested dimension were dropped.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Dimension of the complex before truncation (an upper bound for induced
    /// subcomplexes of a truncated nerve).
    pub fn full_dim(&self) -> usize {
        self.full_dim
    }

    /// Full subcomplex on the kept vertices, renumbered in increasing order.
    pub fn induced(&self, keep: &[bool]) -> Nerve {
        let mut renum = alloc::vec![u32::MAX; self.vertex_count];
        let mut next = 0u32;
        for (v, &k) in keep.iter().enumerate() {
            if k {
                renum[v] = next;
                next += 1;
            }
        }
        let mut simplices: Vec<Vec<Vec<u32>>> = Vec::new();
        for level in &self.simplices {
            let sub: Vec<Vec<u32>> = level
                .iter()
                .filter(|s| s.iter().all(|&v| keep[v as usize]))
                .map(|s| s.iter().map(|&v| renum[v as usize]).collect())
                .collect();
            if sub.is_empty() {
                break;
            }
            simplices.push(sub);
        }
        let simplices_len_dim = simplices.len().saturating_sub(1);
        let uncertified = self
            .uncertified
            .iter()
            .filter(|s| s.iter().all(|&v| keep[v as usize]))
            .map(|s| s.iter().map(|&v| renum[v as usize]).collect())
            .collect();
        Nerve {
            vertex_count: next as usize,
            simplices,
            uncertified,
            uncertified_cover: self.uncertified_cover,
            truncated: self.truncated,
            full_dim: if self.truncated { self.full_dim } else { simplices_len_dim },
        }
    }

    /// Checks downward closure and ordering.
    pub fn is_closed(&self) -> bool {
        for (k, level) in self.simplices.iter().enumerate() {
            for w in level.windows(2) {
                if w[0] >= w[1] {
                    return false;
                }
            }
            for s in level {
                if s.len() != k + 1 || s.windows(2).any(|w| w[0] >= w[1]) {
                    return false;
                }
                if k > 0 {
                    for r in 0..s.len() {
                        let mut f = s.clone();
                        f.remove(r);
                        if !self.contains(&f) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Builds the complex generated by the given vertex sets (each sorted).
fn from_stacks(vertex_count: usize, mut stacks: Vec<Vec<u32>>, max_dim: usize) -> Nerve {
    stacks.sort_unstable();
    stacks.dedup();
    let largest = stacks.iter().map(|s| s.len()).max().unwrap_or(0);
    let top = largest.saturating_sub(1).min(max_dim);
    let mut simplices: Vec<Vec<Vec<u32>>> = Vec::new();
    if vertex_count == 0 {
        return Nerve { vertex_count, simplices, uncertified: Vec::new(), uncertified_cover: false, truncated: false, full_dim: 0 };
    }
    for k in 0..=top {
        let mut level: Vec<Vec<u32>> = Vec::new();
        for s in stacks.iter().filter(|s| s.len() > k) {
            for_each_subset(s, k + 1, |sub| level.push(sub.to_vec()));
        }
        level.sort_unstable();
        level.dedup();
        if level.is_empty() {
            break;
        }
        simplices.push(level);
    }
    Nerve {
        vertex_count,
        simplices,
        uncertified: Vec::new(),
        uncertified_cover: false,
        truncated: largest > max_dim + 1,
        full_dim: largest.saturating_sub(1),
    }
}

fn for_each_subset(items: &[u32], size: usize, mut f: impl FnMut(&[u32])) {
    let n = items.len();
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut buf: Vec<u32> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] == i + n - size {
            return;
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..size {
            buf[j] = items[idx[j]];
        }
    }
}

fn lists_meet(lists: &[&[u32]]) -> bool {
    let Some(shortest) = lists.iter().min_by_key(|l| l.len()) else {
        return false;
    };
    shortest.iter().any(|x| lists.iter().all(|l| l.binary_search(x).is_ok()))
}

/// Nerve of a cover, up to dimension `max_dim`.
///
/// Edges come from the atoms each member contains; higher simplices are joined from
/// lower ones sharing a prefix, kept only when every facet is present and the members
/// really meet. For grid covers the test runs on outer cells and simplices whose inner
/// cells are disjoint are flagged as uncertified.
pub fn build_nerve(cover: &Cover, max_dim: usize) -> Result<Nerve> {
    let t = cover.atoms()?;
    let coverage = coverage_of(&t, 0..cover.len(), cover.grid_resolution());
    if let Coverage::NotCovered { .. } = coverage {
        return Err(Error::UncoveredSpace);
    }
    let n = cover.len();
    // members per atom, in CSR form
    let mut start = alloc::vec![0u32; t.atom_count() + 1];
    for i in 0..n {
        for &a in t.possible(i) {
            start[a as usize + 1] += 1;
        }
    }
    for a in 0..t.atom_count() {
        start[a + 1] += start[a];
    }
    let mut fill = start.clone();
    let mut stack_members = alloc::vec![0u32; start[t.atom_count()] as usize];
    for i in 0..n {
        for &a in t.possible(i) {
            stack_members[fill[a as usize] as usize] = i as u32;
            fill[a as usize] += 1;
        }
    }
    let mut stacks: Vec<&[u32]> = (0..t.atom_count())
        .map(|a| &stack_members[start[a] as usize..start[a + 1] as usize])
        .filter(|s| s.len() > 1)
        .collect();
    stacks.sort_unstable();
    stacks.dedup();
    let largest = stacks.iter().map(|s| s.len()).max().unwrap_or(1);

    let mut simplices: Vec<Vec<Vec<u32>>> = alloc::vec![(0..n as u32).map(|v| alloc::vec![v]).collect()];
    if max_dim >= 1 {
        let mut edges: Vec<Vec<u32>> = Vec::new();
        for s in &stacks {
            for_each_subset(s, 2, |e| edges.push(e.to_vec()));
        }
        edges.sort_unstable();
        edges.dedup();
        if !edges.is_empty() {
            simplices.push(edges);
        }
    }
    let mut k = 2;
    while k <= max_dim && simplices.len() == k {
        let prev = &simplices[k - 1];
        let mut level = Vec::new();
        let mut g0 = 0;
        while g0 < prev.len() {
            let mut g1 = g0 + 1;
            while g1 < prev.len() && prev[g1][..k - 1] == prev[g0][..k - 1] {
                g1 += 1;
            }
            for a in g0..g1 {
                for b in a + 1..g1 {
                    let mut cand = prev[a].clone();
                    cand.push(prev[b][k - 1]);
                    let facets_present = (0..k - 1).all(|r| {
                        let mut f = cand.clone();
                        f.remove(r);
                        prev.binary_search(&f).is_ok()
                    });
                    if !facets_present {
                        continue;
                    }
                    let lists: Vec<&[u32]> = cand.iter().map(|&v| t.possible(v as usize)).collect();
                    if lists_meet(&lists) {
                        level.push(cand);
                    }
                }
            }
            g0 = g1;
        }
        if level.is_empty() {
            break;
        }
        level.sort_unstable();
        simplices.push(level);
        k += 1;
    }
    let mut uncertified = Vec::new();
    if !t.is_exact() {
        for level in simplices.iter() {
            for s in level {
                let lists: Vec<&[u32]> = s.iter().map(|&v| t.certain(v as usize)).collect();
                if !lists_meet(&lists) {
                    uncertified.push(s.clone());
                }
            }
        }
    }
    Ok(Nerve {
        vertex_count: n,
        simplices,
        uncertified,
        uncertified_cover: !matches!(coverage, Coverage::Certified),
        truncated: largest > max_dim + 1,
        full_dim: largest.saturating_sub(1),
    })
}

/// `|Δ_k|`, their partial sums `G_k` and the dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityProfile {
    pub counts: Vec<u64>,
    pub g: Vec<u64>,
    pub dim: usize,
}

impl ComplexityProfile {
    pub fn from_counts(counts: &[u64]) -> Self {
        let g = counts
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        let dim = counts.iter().rposition(|&c| c > 0).unwrap_or(0);
        ComplexityProfile { counts: counts.to_vec(), g, dim }
    }

    /// `G_k`; constant beyond the top dimension.
    pub fn g_k(&self, k: usize) -> u64 {
        match self.g.get(k) {
            Some(&v) => v,
            None => self.g.last().copied().unwrap_or(0),
        }
    }
}

pub fn complexity_profile(n: &Nerve) -> ComplexityProfile {
    ComplexityProfile::from_counts(&n.counts())
}

/// Vertex map with the induced (deduplicated) images of all source simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    pub vertex_map: Vec<u32>,
    pub images: Vec<Vec<Vec<u32>>>,
}

impl SimplicialMap {
    pub fn image(&self, s: &[u32]) -> Vec<u32> {
        let mut img: Vec<u32> = s.iter().map(|&v| self.vertex_map[v as usize]).collect();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn compose(&self, next: &SimplicialMap) -> SimplicialMap {
        let vertex_map: Vec<u32> = self.vertex_map.iter().map(|&v| next.vertex_map[v as usize]).collect();
        let images = self.images.iter().map(|level| level.iter().map(|s| next.image(s)).collect()).collect();
        SimplicialMap { vertex_map, images }
    }
}

/// The simplicial map `K(α) → K(β)` of a refinement witness.
pub fn induced_map(w: &RefinementWitness, src: &Nerve, dst: &Nerve) -> Result<SimplicialMap> {
    if w.map.len() != src.vertex_count() {
        return Err(Error::WitnessInconsistent);
    }
    let vertex_map: Vec<u32> = w.map.iter().map(|&j| j as u32).collect();
    if vertex_map.iter().any(|&v| v as usize >= dst.vertex_count()) {
        return Err(Error::WitnessInconsistent);
    }
    let mut map = SimplicialMap { vertex_map, images: Vec::new() };
    for k in 0..=src.dim() {
        let mut level = Vec::with_capacity(src.simplices(k).len());
        for s in src.simplices(k) {
            let img = map.image(s);
            if !dst.contains(&img) {
                return Err(Error::WitnessInconsistent);
            }
            level.push(img);
        }
        map.images.push(level);
    }
    Ok(map)
}

/// Coefficients of `∏_γ Σ_i |Δ_i(γ)| t^i`.
pub fn product_polynomial(factors: &[Vec<u64>]) -> Vec<BigUint> {
    let mut acc: Vec<BigUint> = alloc::vec![BigUint::one()];
    for f in factors {
        let mut next = alloc::vec![BigUint::zero(); acc.len() + f.len().saturating_sub(1)];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &c) in f.iter().enumerate() {
                next[i + j] += a * BigUint::from(c);
            }
        }
        acc = next;
    }
    acc
}

/// `Σ_{|k⃗| = k} ∏_γ |Δ_{k(γ)}|`, the number of `k`-cells of a product of complexes.
pub fn product_cell_counts(factors: &[Vec<u64>], k: usize) -> BigUint {
    product_polynomial(factors).get(k).cloned().unwrap_or_else(BigUint::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{Cover, OpenSet, PointSet};
    use crate::rational::{int, rat};
    use crate::space::{FiniteMetric, Space};
    use proptest::prelude::*;

    fn three_arcs() -> Cover {
        Cover::circle_arcs(&[(int(0), rat(2, 5)), (rat(3, 10), rat(7, 10)), (rat(3, 5), rat(21, 20))]).unwrap()
    }

    #[test]
    fn three_arc_counts() {
        let n = build_nerve(&three_arcs(), 3).unwrap();
        assert_eq!(n.counts(), alloc::vec![3, 3]);
        assert!(n.is_closed());
    }

    #[test]
    fn triple_overlap_gives_triangle() {
        let c = Cover::circle_arcs(&[(int(0), rat(3, 5)), (rat(1, 2), rat(6, 5)), (rat(2, 5), rat(11, 20))]).unwrap();
        let n = build_nerve(&c, 3).unwrap();
        assert_eq!(n.counts()[2], 1);
    }

    #[test]
    fn trivial_cover_is_a_point() {
        let n = build_nerve(&Cover::trivial(Space::Circle), 4).unwrap();
        assert_eq!(n.counts(), alloc::vec![1]);
        assert_eq!(n.dim(), 0);
    }

    #[test]
    fn uncovered_is_an_error() {
        let c = Cover::circle_arcs(&[(int(0), rat(1, 2))]).unwrap();
        assert_eq!(build_nerve(&c, 2).unwrap_err(), Error::UncoveredSpace);
    }

    #[test]
    fn profiles() {
        let p = ComplexityProfile::from_counts(&[3, 3]);
        assert_eq!((p.g.clone(), p.dim), (alloc::vec![3, 6], 1));
        let p = ComplexityProfile::from_counts(&[4, 6, 4, 1]);
        assert_eq!((p.g[3], p.dim), (15, 3));
        let p = ComplexityProfile::from_counts(&[2, 1]);
        assert_eq!((p.g[1], p.dim), (3, 1));
    }

    #[test]
    fn refinement_map_collapses_edges() {
        let a = Cover::circle_arcs(&[(rat(-1, 16), rat(9, 16)), (rat(7, 16), rat(17, 16))]).unwrap();
        let r = a.common_refinement(&a).unwrap();
        let src = build_nerve(&r.cover, 4).unwrap();
        let dst = build_nerve(&a, 4).unwrap();
        let f = induced_map(&r.left, &src, &dst).unwrap();
        // (0,0) and (0,1) meet and both go to vertex 0
        let i00 = r.pairs.iter().position(|&p| p == (0, 0)).unwrap() as u32;
        let i01 = r.pairs.iter().position(|&p| p == (0, 1)).unwrap() as u32;
        let e = [i00.min(i01), i00.max(i01)];
        assert!(src.contains(&e));
        assert_eq!(f.image(&e), alloc::vec![0]);
        let id = induced_map(&RefinementWitness::identity(2), &dst, &dst).unwrap();
        assert_eq!(f.compose(&id), f);
        let g = induced_map(&r.left.then(&RefinementWitness::identity(2)), &src, &dst).unwrap();
        assert_eq!(g, f.compose(&id));
    }

    #[test]
    fn inconsistent_witness() {
        let a = three_arcs();
        let src = build_nerve(&a, 2).unwrap();
        let two = Nerve::from_faces(3, &[], 2).unwrap();
        assert_eq!(induced_map(&RefinementWitness::identity(3), &src, &two).unwrap_err(), Error::WitnessInconsistent);
    }

    #[test]
    fn product_counts() {
        assert_eq!(product_cell_counts(&[alloc::vec![3, 3]], 1), BigUint::from(3u32));
        assert_eq!(product_cell_counts(&[alloc::vec![3, 3], alloc::vec![3, 3]], 1), BigUint::from(18u32));
        assert_eq!(product_cell_counts(&[alloc::vec![2, 1], alloc::vec![2, 1]], 2), BigUint::from(1u32));
    }

    #[test]
    fn subsets_enumerated() {
        let mut seen = Vec::new();
        for_each_subset(&[1, 4, 6, 9], 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 6);
        let mut seen = Vec::new();
        for_each_subset(&[1, 4, 6], 3, |s| seen.push(s.to_vec()));
        assert_eq!(seen, alloc::vec![alloc::vec![1, 4, 6]]);
        let mut seen = Vec::new();
        for_each_subset(&[1, 4, 6], 1, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 3);
    }

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    }

    proptest! {
        #[test]
        fn random_abstract_nerves(sets in proptest::collection::vec(proptest::collection::vec(0usize..7, 1..5), 1..8)) {
            let mut members: Vec<OpenSet> = sets.iter().map(|s| OpenSet::Points(PointSet::new(s.clone()))).collect();
            members.push(OpenSet::Points(PointSet::new((0..7).collect())));
            let c = Cover::new(Space::Abstract(FiniteMetric::discrete(7).unwrap()), members.clone()).unwrap();
            let n = build_nerve(&c, 8).unwrap();
            prop_assert!(n.is_closed());
            // brute-force oracle: every subset with a common point
            let m = members.len();
            for mask in 1u32..(1 << m) {
                let vs: Vec<u32> = (0..m as u32).filter(|i| mask >> i & 1 == 1).collect();
                let common = (0..7).any(|p| vs.iter().all(|&v| match &members[v as usize] { OpenSet::Points(s) => s.contains(p), _ => false }));
                prop_assert_eq!(n.contains(&vs), common);
            }
            let p = complexity_profile(&n);
            for l in 0..p.counts.len() {
                prop_assert!(p.counts[l] <= binom(p.g[0], l as u64 + 1));
            }
        }
    }
}
