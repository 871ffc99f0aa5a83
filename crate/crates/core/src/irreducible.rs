//! Redundant members, reduction to irreducible subcovers and subcover searches for `S_k`
//! and `Dim`.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;

use crate::cover::{coverage_of, AtomTable, Cover, OpenSet};
use crate::error::{Error, Result};
use crate::nerve::{build_nerve, Nerve};
use crate::space::{Point, Space};

/// Exhaustive searches never run on more members than this (masks are `u64`).
pub const MAX_EXACT_MEMBERS: usize = 64;

/// Search nodes visited before an exhaustive search gives up.
pub const NODE_LIMIT: u64 = 4_000_000;

#[derive(Debug, Clone)]
pub struct ReductionTrace {
    /// Indices into the input cover, in removal order.
    pub removed: Vec<usize>,
    /// Indices into the input cover of the retained members.
    pub kept: Vec<usize>,
    pub cover: Cover,
    /// One entry per retained member.
    pub private_points: Vec<Option<Point>>,
}

#[derive(Debug, Clone)]
pub struct SkEstimate {
    pub value: u64,
    /// Indices of the minimizing subcover.
    pub witness: Vec<usize>,
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct DimEstimate {
    pub value: usize,
    pub witness: Vec<usize>,
    pub exact: bool,
    /// For manifolds: whether the estimate is at most the manifold dimension.
    pub manifold_bound_ok: Option<bool>,
}

fn certified_atoms(c: &Cover) -> Result<AtomTable> {
    let t = c.atoms()?;
    if !coverage_of(&t, 0..c.len(), grid_resolution(c)).is_certified() {
        return Err(Error::NotCertifiedCover);
    }
    Ok(t)
}

fn grid_resolution(c: &Cover) -> Option<u32> {
    match &c.members()[0] {
        OpenSet::Grid(g) => Some(g.resolution()),
        _ => None,
    }
}

/// For every position in `active`, how many later positions hold identical atom lists.
fn later_duplicates(t: &AtomTable, active: &[usize]) -> Vec<u32> {
    let key = |p: usize| (t.possible(active[p]), t.certain(active[p]));
    let mut order: Vec<usize> = (0..active.len()).collect();
    order.sort_by(|&a, &b| (key(a), a).cmp(&(key(b), b)));
    let mut out = alloc::vec![0u32; active.len()];
    let mut g0 = 0;
    while g0 < order.len() {
        let mut g1 = g0 + 1;
        while g1 < order.len() && key(order[g0]) == key(order[g1]) {
            g1 += 1;
        }
        for (pos, &p) in order[g0..g1].iter().enumerate() {
            out[p] = (g1 - g0 - 1 - pos) as u32;
        }
        g0 = g1;
    }
    out
}

/// Is member `i` inside the union of the other active members, its own later copies excluded?
fn redundant_now(t: &AtomTable, i: usize, depth: &[u32], dups: u32) -> bool {
    let inner = t.certain(i);
    t.possible(i).iter().all(|&a| {
        let own = if inner.binary_search(&a).is_ok() { 1 + dups } else { 0 };
        depth[a as usize] > own
    })
}

fn certain_depth(t: &AtomTable, active: impl Iterator<Item = usize>) -> Vec<u32> {
    let mut depth = alloc::vec![0u32; t.atom_count()];
    for i in active {
        for &a in t.certain(i) {
            depth[a as usize] += 1;
        }
    }
    depth
}

/// Members contained in the union of the others. Exact duplicates report all but the
/// lowest-index copy. Grid members count as contained only when certified by inner cells.
pub fn find_redundant(c: &Cover) -> Result<Vec<usize>> {
    let t = certified_atoms(c)?;
    let depth = certain_depth(&t, 0..c.len());
    let all: Vec<usize> = (0..c.len()).collect();
    let dups = later_duplicates(&t, &all);
    Ok((0..c.len()).filter(|&i| redundant_now(&t, i, &depth, dups[i])).collect())
}

/// Index-order reduction over a subset of members: each member in turn is dropped if the
/// members still present cover it. Returns the kept indices.
fn reduce_indices(t: &AtomTable, active: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut depth = certain_depth(t, active.iter().copied());
    let dup_later = later_duplicates(t, active);
    // later copies are judged after `i`, so all of them are still present here
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for (p, &i) in active.iter().enumerate() {
        if redundant_now(t, i, &depth, dup_later[p]) {
            for &a in t.certain(i) {
                depth[a as usize] -= 1;
            }
            removed.push(i);
        } else {
            kept.push(i);
        }
    }
    (kept, removed)
}

/// Private points of the given members relative to each other.
fn private_points(t: &AtomTable, members: &[usize]) -> Vec<Option<Point>> {
    let mut depth = alloc::vec![0u32; t.atom_count()];
    for &i in members {
        for &a in t.possible(i) {
            depth[a as usize] += 1;
        }
    }
    members
        .iter()
        .map(|&i| t.certain(i).iter().find(|&&a| depth[a as usize] == 1).map(|&a| t.representative(a)))
        .collect()
}

/// Removes redundant members lowest index first until none is left.
pub fn reduce(c: &Cover) -> Result<ReductionTrace> {
    let t = certified_atoms(c)?;
    let all: Vec<usize> = (0..c.len()).collect();
    let (kept, removed) = reduce_indices(&t, &all);
    let private = private_points(&t, &kept);
    Ok(ReductionTrace { removed, cover: c.subcover(&kept)?, private_points: private, kept })
}

/// Lazy greedy maximum coverage, then reduction.
fn greedy_cover(t: &AtomTable) -> Vec<usize> {
    let n = t.set_count();
    let mut covered = alloc::vec![false; t.atom_count()];
    let mut left = t.atom_count();
    let mut heap: BinaryHeap<(usize, core::cmp::Reverse<usize>)> =
        (0..n).map(|i| (t.certain(i).len(), core::cmp::Reverse(i))).collect();
    let mut chosen = Vec::new();
    while left > 0 {
        let Some((gain, core::cmp::Reverse(i))) = heap.pop() else { break };
        let fresh = t.certain(i).iter().filter(|&&a| !covered[a as usize]).count();
        if fresh == 0 {
            continue;
        }
        if fresh < gain {
            heap.push((fresh, core::cmp::Reverse(i)));
            continue;
        }
        for &a in t.certain(i) {
            if !covered[a as usize] {
                covered[a as usize] = true;
                left -= 1;
            }
        }
        chosen.push(i);
    }
    chosen.sort_unstable();
    reduce_indices(t, &chosen).0
}

/// Exact minimum-cardinality subcover when every member is one circular run of atoms
/// (single arcs on the circle). `None` when the members are not of that shape.
pub(crate) fn circular_min_cover(c: &Cover, t: &AtomTable) -> Option<Vec<usize>> {
    if !matches!(c.space(), Space::Circle) || !t.is_exact() {
        return None;
    }
    let n_atoms = t.atom_count();
    let mut runs: Vec<(usize, usize)> = Vec::with_capacity(c.len());
    for (i, m) in c.members().iter().enumerate() {
        let OpenSet::Arcs(u) = m else { return None };
        if u.is_full() {
            return Some(alloc::vec![i]);
        }
        if u.arcs().len() != 1 {
            return None;
        }
        let atoms = t.possible(i);
        let len = atoms.len();
        // start of the cyclic run: the atom whose predecessor is absent
        let start = if len == n_atoms {
            return Some(alloc::vec![i]);
        } else {
            atoms
                .iter()
                .copied()
                .find(|&a| atoms.binary_search(&(((a as usize + n_atoms - 1) % n_atoms) as u32)).is_err())? as usize
        };
        runs.push((start, len));
    }
    // best[p] = (furthest exclusive end, member) over runs starting at p, on the doubled line
    let mut best: Vec<(usize, usize)> = alloc::vec![(0, usize::MAX); 2 * n_atoms];
    for (i, &(s, len)) in runs.iter().enumerate() {
        for base in [s, s + n_atoms] {
            if base + len > best[base].0 {
                best[base] = (base + len, i);
            }
        }
    }
    // far[p] = furthest end among runs starting at or before p that contain p
    let mut far: Vec<(usize, usize)> = alloc::vec![(0, usize::MAX); 2 * n_atoms];
    let mut cur = (0, usize::MAX);
    for p in 0..2 * n_atoms {
        if best[p].0 > cur.0 {
            cur = best[p];
        }
        far[p] = if cur.0 > p { cur } else { (0, usize::MAX) };
    }
    let mut answer: Option<Vec<usize>> = None;
    for (i, &(s, len)) in runs.iter().enumerate() {
        // runs through atom 0, placed on the line as [s', s' + len) with s' <= n_atoms < s' + len
        let s_line = if s == 0 { n_atoms } else { s };
        if !(s_line <= n_atoms && s_line + len > n_atoms) {
            continue;
        }
        let goal = s_line + n_atoms;
        let mut pos = s_line + len;
        let mut chosen = alloc::vec![i];
        let mut ok = true;
        while pos < goal {
            let (end, j) = far[pos];
            if j == usize::MAX {
                ok = false;
                break;
            }
            chosen.push(j);
            pos = end;
            if answer.as_ref().is_some_and(|a| chosen.len() >= a.len()) {
                ok = false;
                break;
            }
        }
        if ok && answer.as_ref().is_none_or(|a| chosen.len() < a.len()) {
            answer = Some(chosen);
        }
    }
    answer.map(|mut a| {
        a.sort_unstable();
        a.dedup();
        a
    })
}

/// `G_k` of the subcover on `members`: simplices of the full nerve spanned by them.
fn g_k_of(nerve: &Nerve, members: &[usize], k: usize) -> u64 {
    let mut keep = alloc::vec![false; nerve.vertex_count()];
    for &i in members {
        keep[i] = true;
    }
    (0..=k.min(nerve.dim()))
        .map(|d| nerve.simplices(d).iter().filter(|s| s.iter().all(|&v| keep[v as usize])).count() as u64)
        .sum()
}

/// Coverage constraints as member masks: every atom must be hit by a chosen member
/// certainly containing it. Only inclusion-minimal masks are kept.
fn constraint_masks(t: &AtomTable) -> Vec<u64> {
    let mut masks = alloc::vec![0u64; t.atom_count()];
    for i in 0..t.set_count() {
        for &a in t.certain(i) {
            masks[a as usize] |= 1 << i;
        }
    }
    masks.sort_unstable_by_key(|m| (m.count_ones(), *m));
    masks.dedup();
    let mut minimal: Vec<u64> = Vec::new();
    for m in masks {
        if minimal.iter().all(|&x| x & m != x) {
            minimal.push(m);
        }
    }
    minimal
}

struct Search<'a, F: Fn(u64) -> u64> {
    constraints: &'a [u64],
    cost: F,
    /// Atom stacks that may hold at most `cap` chosen members (dimension search).
    stacks: &'a [u64],
    cap: u32,
    best: u64,
    best_set: Option<u64>,
    nodes: u64,
    aborted: bool,
}

impl<F: Fn(u64) -> u64> Search<'_, F> {
    fn run(&mut self, included: u64, excluded: u64) {
        self.nodes += 1;
        if self.nodes > NODE_LIMIT {
            self.aborted = true;
            return;
        }
        if self.stacks.iter().any(|&f| (included & f).count_ones() > self.cap) {
            return;
        }
        let here = (self.cost)(included);
        // pick the open constraint with the fewest candidates, and pack disjoint ones
        let mut pick: Option<u64> = None;
        let mut packed: u64 = 0;
        let mut extra = 0;
        for &c in self.constraints {
            if c & included != 0 {
                continue;
            }
            let cand = c & !excluded;
            if cand == 0 {
                return;
            }
            if pick.is_none_or(|p| cand.count_ones() < p.count_ones()) {
                pick = Some(cand);
            }
            if cand & packed == 0 {
                packed |= cand;
                extra += 1;
            }
        }
        let Some(cand) = pick else {
            if here < self.best {
                self.best = here;
                self.best_set = Some(included);
            }
            return;
        };
        if here + extra >= self.best {
            return;
        }
        let mut excl = excluded;
        let mut rest = cand;
        while rest != 0 && !self.aborted {
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            self.run(included | 1 << i, excl);
            excl |= 1 << i;
        }
    }
}

fn mask_to_indices(m: u64) -> Vec<usize> {
    (0..64).filter(|&i| m >> i & 1 == 1).collect()
}

/// Shared state for the subcover searches on one certified cover: atoms, the nerve and
/// the heuristic candidates (index-order reduction, greedy covering, and on the circle an
/// exact minimum-cardinality subcover).
pub struct SubcoverSearch<'a> {
    cover: &'a Cover,
    table: AtomTable,
    nerve: Nerve,
    candidates: Vec<Vec<usize>>,
    circular: Option<Vec<usize>>,
    budget: usize,
}

fn masks_of(level: &[Vec<u32>]) -> impl Iterator<Item = u64> + '_ {
    level.iter().map(|s| s.iter().fold(0u64, |m, &v| m | 1 << v))
}

impl<'a> SubcoverSearch<'a> {
    pub fn new(c: &'a Cover, max_dim: usize, budget: usize) -> Result<Self> {
        let table = certified_atoms(c)?;
        let nerve = build_nerve(c, max_dim)?;
        Ok(Self::assemble(c, table, nerve, budget))
    }

    /// Reuses a nerve already built for `c`.
    pub fn with_nerve(c: &'a Cover, nerve: Nerve, budget: usize) -> Result<Self> {
        let table = certified_atoms(c)?;
        Ok(Self::assemble(c, table, nerve, budget))
    }

    fn assemble(cover: &'a Cover, table: AtomTable, nerve: Nerve, budget: usize) -> Self {
        let all: Vec<usize> = (0..cover.len()).collect();
        let mut candidates = alloc::vec![reduce_indices(&table, &all).0, greedy_cover(&table)];
        let circular = circular_min_cover(cover, &table);
        if let Some(w) = &circular {
            candidates.push(w.clone());
        }
        SubcoverSearch { cover, table, nerve, candidates, circular, budget }
    }

    pub fn nerve(&self) -> &Nerve {
        &self.nerve
    }

    fn exhaustive(&self) -> bool {
        self.cover.len() <= self.budget.min(MAX_EXACT_MEMBERS)
    }

    /// Minimum of `G_k` over subcovers; exhaustive (exact) for at most `budget` members.
    pub fn s_k(&self, k: usize) -> Result<SkEstimate> {
        if self.nerve.truncated() && k > self.nerve.dim() {
            return Err(Error::OutOfRange("k above the nerve dimension built"));
        }
        let nerve = &self.nerve;
        let mut best: Option<(u64, &Vec<usize>)> = None;
        for cand in &self.candidates {
            let v = g_k_of(nerve, cand, k);
            if best.as_ref().is_none_or(|b| v < b.0) {
                best = Some((v, cand));
            }
        }
        let (mut value, witness) = best.expect("at least one candidate");
        let mut witness = witness.clone();
        // minimum cardinality is exactly S_0 for arcs on the circle
        let mut exact = k == 0 && self.circular.as_ref().is_some_and(|w| w.len() as u64 == value);
        if !exact && self.exhaustive() {
            let simplex_masks: Vec<u64> = (0..=nerve.dim().min(k)).flat_map(|d| masks_of(nerve.simplices(d))).collect();
            let constraints = constraint_masks(&self.table);
            let mut s = Search {
                constraints: &constraints,
                cost: |inc: u64| simplex_masks.iter().filter(|&&m| inc & m == m).count() as u64,
                stacks: &[],
                cap: u32::MAX,
                best: value,
                best_set: None,
                nodes: 0,
                aborted: false,
            };
            s.run(0, 0);
            if let Some(set) = s.best_set {
                value = s.best;
                witness = mask_to_indices(set);
            }
            exact = !s.aborted;
        }
        Ok(SkEstimate { value, witness, exact })
    }

    /// Nerve dimension of a subcover: the largest number of its members over one atom, minus one.
    fn candidate_dim(&self, cand: &[usize]) -> usize {
        let mut count = alloc::vec![0u32; self.table.atom_count()];
        for &i in cand {
            for &a in self.table.possible(i) {
                count[a as usize] += 1;
            }
        }
        count.iter().max().copied().unwrap_or(1).saturating_sub(1) as usize
    }

    /// Distinct maximal atom stacks as member masks (members < 64).
    fn stack_masks(&self) -> Vec<u64> {
        let mut masks = alloc::vec![0u64; self.table.atom_count()];
        for i in 0..self.cover.len() {
            for &a in self.table.possible(i) {
                masks[a as usize] |= 1 << i;
            }
        }
        masks.sort_unstable();
        masks.dedup();
        let all = masks.clone();
        masks.retain(|&m| !all.iter().any(|&o| o != m && o & m == m));
        masks
    }

    /// Minimum nerve dimension over subcovers.
    pub fn dim(&self) -> Result<DimEstimate> {
        let c = self.cover;
        let t = &self.table;
        let manifold = c.space().manifold_dim();
        if let Some(i) = (0..c.len()).find(|&i| t.certain(i).len() == t.atom_count()) {
            return Ok(DimEstimate { value: 0, witness: alloc::vec![i], exact: true, manifold_bound_ok: manifold.map(|_| true) });
        }
        let lower = if c.space().is_connected() { 1 } else { 0 };
        let mut best: Option<(usize, &Vec<usize>)> = None;
        for cand in &self.candidates {
            let d = self.candidate_dim(cand);
            if best.as_ref().is_none_or(|b| d < b.0) {
                best = Some((d, cand));
            }
        }
        let (mut value, witness) = best.expect("at least one candidate");
        let mut witness = witness.clone();
        let mut exact = value <= lower;
        if !exact && self.exhaustive() {
            let constraints = constraint_masks(t);
            let stacks = self.stack_masks();
            exact = true;
            // look for a subcover of dimension d, from the bottom up
            let top = value;
            for d in lower..top {
                let mut s = Search {
                    constraints: &constraints,
                    cost: |_| 0,
                    stacks: &stacks,
                    cap: d as u32 + 1,
                    best: u64::MAX,
                    best_set: None,
                    nodes: 0,
                    aborted: false,
                };
                s.run(0, 0);
                if let Some(set) = s.best_set {
                    value = d;
                    witness = mask_to_indices(set);
                    break;
                }
                if s.aborted {
                    exact = false;
                    break;
                }
            }
        }
        let manifold_bound_ok = manifold.map(|n| !exact || value <= n);
        Ok(DimEstimate { value, witness, exact, manifold_bound_ok })
    }
}

/// Minimum of `G_k` over subcovers. Exhaustive (exact) for at most `budget` members,
/// otherwise the best of the heuristic candidates.
pub fn s_k_estimate(c: &Cover, k: usize, budget: usize) -> Result<SkEstimate> {
    SubcoverSearch::new(c, k, budget)?.s_k(k)
}

/// Minimum nerve dimension over subcovers.
pub fn dim_estimate(c: &Cover, budget: usize) -> Result<DimEstimate> {
    SubcoverSearch::new(c, 0, budget)?.dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::PointSet;
    use crate::nerve::complexity_profile;
    use crate::rational::{int, rat};
    use crate::space::FiniteMetric;
    use proptest::prelude::*;

    fn arcs(v: &[(i128, i128, i128, i128)]) -> Cover {
        let a: Vec<_> = v.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d))).collect();
        Cover::circle_arcs(&a).unwrap()
    }

    fn three() -> Cover {
        arcs(&[(0, 1, 2, 5), (3, 10, 7, 10), (3, 5, 21, 20)])
    }

    #[test]
    fn contained_arc_is_redundant() {
        let c = arcs(&[(0, 1, 3, 5), (1, 2, 11, 10), (1, 10, 3, 10)]);
        assert_eq!(find_redundant(&c).unwrap(), alloc::vec![2]);
        assert!(find_redundant(&three()).unwrap().is_empty());
    }

    #[test]
    fn duplicates_keep_lowest() {
        let c = arcs(&[(0, 1, 3, 5), (1, 2, 11, 10), (0, 1, 3, 5)]);
        assert_eq!(find_redundant(&c).unwrap(), alloc::vec![2]);
        let r = reduce(&c).unwrap();
        assert_eq!(r.kept, alloc::vec![0, 1]);
    }

    #[test]
    fn reduce_examples() {
        let t = Cover::trivial(Space::Circle);
        assert_eq!(reduce(&t).unwrap().kept, alloc::vec![0]);
        let c = arcs(&[(0, 1, 2, 5), (3, 10, 7, 10), (3, 5, 21, 20), (1, 10, 1, 5)]);
        let r = reduce(&c).unwrap();
        assert_eq!(r.removed, alloc::vec![3]);
        assert_eq!(r.cover.len(), 3);
        assert!(r.private_points.iter().all(|p| p.is_some()));
        // 2 and 3 both bridge the gap at 1/2: whichever goes first keeps the other
        let c = arcs(&[(0, 1, 1, 2), (3, 5, 21, 20), (2, 5, 3, 5), (9, 20, 31, 50), (11, 20, 7, 10)]);
        assert_eq!(find_redundant(&c).unwrap(), alloc::vec![2, 3, 4]);
        let r = reduce(&c).unwrap();
        assert_eq!(r.removed, alloc::vec![2, 4]);
        assert!(find_redundant(&r.cover).unwrap().is_empty());
        // the other order ends irreducible as well, with a different result
        let other = c.subcover(&[0, 1, 2, 4]).unwrap();
        assert!(find_redundant(&other).unwrap().is_empty());
    }

    #[test]
    fn private_points_are_private() {
        let c = arcs(&[(0, 1, 2, 5), (3, 10, 7, 10), (3, 5, 21, 20), (1, 10, 1, 5)]);
        let r = reduce(&c).unwrap();
        for (i, p) in r.private_points.iter().enumerate() {
            let p = p.clone().unwrap();
            for (j, m) in r.cover.members().iter().enumerate() {
                assert_eq!(m.contains(&p), Some(i == j));
            }
        }
    }

    #[test]
    fn irreducible_estimates() {
        let c = three();
        for k in 0..3 {
            let e = s_k_estimate(&c, k, 20).unwrap();
            assert_eq!(e.value, complexity_profile(&build_nerve(&c, k).unwrap()).g_k(k));
            assert!(e.exact);
        }
        let d = dim_estimate(&c, 20).unwrap();
        assert_eq!((d.value, d.exact, d.manifold_bound_ok), (1, true, Some(true)));
        let t = Cover::trivial(Space::Circle);
        assert_eq!(dim_estimate(&t, 20).unwrap().value, 0);
    }

    #[test]
    fn circular_min_cover_on_overlapping_arcs() {
        // eight arcs of length 3/8 at multiples of 1/8: each holds two of the eight
        // grid points, so four are needed and four suffice
        let v: Vec<(Rational, Rational)> = (0..8).map(|i| (rat(i, 8), rat(i, 8) + rat(3, 8))).collect();
        let c = Cover::circle_arcs(&v).unwrap();
        let t = c.atoms().unwrap();
        let w = circular_min_cover(&c, &t).unwrap();
        assert_eq!(w.len(), 4);
        assert!(c.subcover(&w).unwrap().is_cover().unwrap().is_certified());
        let e = s_k_estimate(&c, 0, 0).unwrap();
        assert_eq!((e.value, e.exact), (4, true));
    }

    use crate::rational::Rational;

    fn subsets_min(members: &[Vec<usize>], points: usize, k: usize) -> (u64, usize) {
        let n = members.len();
        let mut best_g = u64::MAX;
        let mut best_dim = usize::MAX;
        for mask in 1u32..(1 << n) {
            let chosen: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if !(0..points).all(|p| chosen.iter().any(|&i| members[i].contains(&p))) {
                continue;
            }
            // brute-force nerve
            let mut counts = alloc::vec![0u64; n];
            let mut dim = 0;
            for sub in 1u32..(1 << n) {
                if sub & !mask != 0 {
                    continue;
                }
                let vs: Vec<usize> = (0..n).filter(|i| sub >> i & 1 == 1).collect();
                if (0..points).any(|p| vs.iter().all(|&v| members[v].contains(&p))) {
                    counts[vs.len() - 1] += 1;
                    dim = dim.max(vs.len() - 1);
                }
            }
            best_g = best_g.min(counts[..=k.min(n - 1)].iter().sum());
            best_dim = best_dim.min(dim);
        }
        (best_g, best_dim)
    }

    fn abstract_cover(sets: &[Vec<usize>], points: usize) -> Cover {
        let members = sets.iter().map(|s| OpenSet::Points(PointSet::new(s.clone()))).collect();
        Cover::new(Space::Abstract(FiniteMetric::discrete(points).unwrap()), members).unwrap()
    }

    proptest! {
        #[test]
        fn exhaustive_matches_brute_force(
            sets in proptest::collection::vec(proptest::collection::btree_set(0usize..6, 1..4), 1..7),
            k in 0usize..3,
        ) {
            let mut sets: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
            // make sure it covers
            for p in 0..6 {
                if !sets.iter().any(|s| s.contains(&p)) {
                    sets.push(alloc::vec![p, (p + 1) % 6]);
                }
            }
            prop_assume!(sets.len() <= 8);
            let c = abstract_cover(&sets, 6);
            let (g, d) = subsets_min(&sets, 6, k);
            let e = s_k_estimate(&c, k, 64).unwrap();
            prop_assert!(e.exact);
            prop_assert_eq!(e.value, g);
            prop_assert!(c.subcover(&e.witness).unwrap().is_cover().unwrap().is_certified());
            let de = dim_estimate(&c, 64).unwrap();
            prop_assert!(de.exact);
            prop_assert_eq!(de.value, d);
            let r = reduce(&c).unwrap();
            prop_assert!(find_redundant(&r.cover).unwrap().is_empty());
            prop_assert!(r.private_points.iter().all(|p| p.is_some()));
            prop_assert!(e.value <= complexity_profile(&build_nerve(&c, k).unwrap()).g_k(k));
        }

        #[test]
        fn all_removal_orders_end_irreducible(
            sets in proptest::collection::vec(proptest::collection::btree_set(0usize..5, 1..4), 2..6),
        ) {
            let mut sets: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
            sets.push(alloc::vec![0, 1, 2]);
            sets.push(alloc::vec![2, 3, 4]);
            let c = abstract_cover(&sets, 5);
            let r = reduce(&c).unwrap();
            prop_assert!(find_redundant(&r.cover).unwrap().is_empty());
            // any greedy removal order also ends with no redundant member
            let mut active: Vec<usize> = (0..sets.len()).rev().collect();
            loop {
                let sub = c.subcover(&active).unwrap();
                let red = find_redundant(&sub).unwrap();
                match red.last() {
                    Some(&j) => { active.remove(j); }
                    None => break,
                }
            }
            prop_assert!(find_redundant(&c.subcover(&active).unwrap()).unwrap().is_empty());
        }

        #[test]
        fn s0_is_submultiplicative(
            a in proptest::collection::vec((0i128..12, 3i128..9), 3..5),
            b in proptest::collection::vec((0i128..12, 3i128..9), 3..5),
        ) {
            let mk = |v: &[(i128, i128)]| {
                let mut arcs: Vec<(Rational, Rational)> = v.iter().map(|&(s, l)| (rat(s, 12), rat(s + l, 12))).collect();
                arcs.push((int(0), rat(1, 2)));
                arcs.push((rat(5, 12), rat(13, 12)));
                Cover::circle_arcs(&arcs).unwrap()
            };
            let (ca, cb) = (mk(&a), mk(&b));
            let r = ca.common_refinement(&cb).unwrap();
            let s_ab = s_k_estimate(&r.cover, 0, 64).unwrap().value;
            let s_a = s_k_estimate(&ca, 0, 64).unwrap().value;
            let s_b = s_k_estimate(&cb, 0, 64).unwrap().value;
            prop_assert!(s_ab <= s_a * s_b);
        }
    }
}
