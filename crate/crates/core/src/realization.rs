//! Partitions of unity, barycentric realization, the vertex metric `d⁰` and
//! Gromov–Hausdorff bounds between the metrized 1-skeleton and the space.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_integer::Integer;

use crate::cover::{Cover, OpenSet, Side};
use crate::error::{Error, Result};
use crate::nerve::Nerve;
use crate::rational::{frac, int, Rational};
use crate::space::{Point, Space};

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionOfUnity {
    members: usize,
    samples: Vec<Point>,
    /// Per sample, the nonzero `(member, x_i(v))` in member order.
    weights: Vec<Vec<(u32, Rational)>>,
}

impl PartitionOfUnity {
    pub fn members(&self) -> usize {
        self.members
    }

    pub fn samples(&self) -> &[Point] {
        &self.samples
    }

    pub fn weights(&self, sample: usize) -> &[(u32, Rational)] {
        &self.weights[sample]
    }

    pub fn value(&self, member: usize, sample: usize) -> Rational {
        self.weights[sample]
            .iter()
            .find(|(i, _)| *i as usize == member)
            .map(|(_, w)| *w)
            .unwrap_or_else(|| int(0))
    }
}

/// `x_i(v) = dist(v, A_i^c) / Σ_j dist(v, A_j^c)`, exactly.
pub fn partition_of_unity(c: &Cover, samples: &[Point]) -> Result<PartitionOfUnity> {
    if !c.is_cover()?.is_certified() {
        return Err(Error::NotCertifiedCover);
    }
    let mut weights = Vec::with_capacity(samples.len());
    for v in samples {
        c.space().check_point(v)?;
        let mut w = Vec::new();
        let mut total = int(0);
        for (i, m) in c.members().iter().enumerate() {
            let d = m.depth(c.space(), v)?;
            if d > int(0) {
                total += &d;
                w.push((i as u32, d));
            }
        }
        if w.is_empty() {
            return Err(Error::UncoveredSample);
        }
        for (_, x) in &mut w {
            *x /= total;
        }
        weights.push(w);
    }
    Ok(PartitionOfUnity { members: c.len(), samples: samples.to_vec(), weights })
}

/// `x(v) = Σ x_i(v) [a_i]`, stored on its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Barycentric {
    pub support: Vec<u32>,
    pub coords: Vec<Rational>,
}

impl Barycentric {
    pub fn dense(&self, n: usize) -> Vec<Rational> {
        let mut out = alloc::vec![int(0); n];
        for (i, x) in self.support.iter().zip(&self.coords) {
            out[*i as usize] = *x;
        }
        out
    }
}

pub fn realize(pou: &PartitionOfUnity, v: &Point) -> Result<Barycentric> {
    let s = pou.samples.iter().position(|p| p == v).ok_or(Error::OutOfRange("point was not evaluated"))?;
    let (support, coords) = pou.weights[s].iter().cloned().unzip();
    Ok(Barycentric { support, coords })
}

/// Member shapes scaled by the common denominator, for exact distance ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Shapes {
    /// member → boxes → per-axis closed interval `(start, len)`
    Torus(Vec<Vec<Vec<(i128, i128)>>>),
    Abstract { dist: Vec<Vec<i128>>, points: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMetric {
    reps: Vec<Point>,
    edges: Vec<(u32, u32, Rational)>,
    scale: i128,
    adj: Vec<Vec<(u32, i128)>>,
    connected: bool,
    space_connected: bool,
    shapes: Shapes,
}

fn lcm_all<'a>(it: impl Iterator<Item = &'a Rational>) -> Result<i128> {
    let mut l: i128 = 2;
    for r in it {
        l = l.lcm(r.denom());
        if l > 1 << 62 {
            return Err(Error::Overflow);
        }
    }
    Ok(l)
}

fn scaled(r: &Rational, l: i128) -> i128 {
    r.numer() * (l / r.denom())
}

fn side_interval(s: &Side) -> (Rational, Rational) {
    match s {
        Side::Full => (int(0), int(1)),
        Side::Arc(a) => (*a.start(), *a.len()),
    }
}

fn member_boxes(m: &OpenSet) -> Result<Vec<Vec<(Rational, Rational)>>> {
    match m {
        OpenSet::Arcs(u) if u.is_full() => Ok(alloc::vec![alloc::vec![(int(0), int(1))]]),
        OpenSet::Arcs(u) => Ok(u.arcs().iter().map(|a| alloc::vec![(*a.start(), *a.len())]).collect()),
        OpenSet::Boxes(b) => Ok(b.boxes().iter().map(|bx| bx.sides().iter().map(side_interval).collect()).collect()),
        _ => Err(Error::Unsupported("grid regions cannot be metrized")),
    }
}

impl VertexMetric {
    pub fn vertex_count(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[Point] {
        &self.reps
    }

    /// 1-simplices with their lengths `d(b_i, b_j)`.
    pub fn edges(&self) -> &[(u32, u32, Rational)] {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    fn int_row(&self, src: usize) -> Vec<i128> {
        let n = self.reps.len();
        let mut dist = alloc::vec![i128::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0;
        heap.push(Reverse((0i128, src as u32)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u as usize] {
                continue;
            }
            for &(v, w) in &self.adj[u as usize] {
                let nd = d + w;
                if nd < dist[v as usize] {
                    dist[v as usize] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }

    /// `d⁰(b_src, ·)`.
    pub fn distances_from(&self, src: usize) -> Vec<Rational> {
        self.int_row(src).into_iter().map(|d| Rational::new(d, self.scale)).collect()
    }

    pub fn distance(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.int_row(i)[j], self.scale)
    }

    /// `(min, max)` of `d(v, w)` over `v ∈ closure A_i`, `w ∈ closure A_j`, scaled.
    fn range(&self, i: usize, j: usize) -> (i128, i128) {
        let l = self.scale;
        match &self.shapes {
            Shapes::Torus(m) => {
                let (mut lo, mut hi) = (i128::MAX, 0);
                for x in &m[i] {
                    for y in &m[j] {
                        let (mut a, mut b) = (0, 0);
                        for (p, q) in x.iter().zip(y) {
                            let (mn, mx) = axis_range(*p, *q, l);
                            a = a.max(mn);
                            b = b.max(mx);
                        }
                        lo = lo.min(a);
                        hi = hi.max(b);
                    }
                }
                (lo, hi)
            }
            Shapes::Abstract { dist, points } => {
                let (mut lo, mut hi) = (i128::MAX, 0);
                for &p in &points[i] {
                    for &q in &points[j] {
                        lo = lo.min(dist[p][q]);
                        hi = hi.max(dist[p][q]);
                    }
                }
                (lo, hi)
            }
        }
    }
}

fn circle_abs(x: i128, l: i128) -> i128 {
    let x = x.rem_euclid(l);
    x.min(l - x)
}

/// Distance range on `R/Z` (scaled by `l`) between two closed arcs.
fn axis_range((a, la): (i128, i128), (b, lb): (i128, i128), l: i128) -> (i128, i128) {
    if la + lb >= l {
        return (0, l / 2);
    }
    let lo = (a - b - lb).rem_euclid(l);
    let hi = lo + la + lb;
    let min = if lo == 0 || hi >= l { 0 } else { lo.min(l - hi) };
    let h = l / 2;
    let max = if (lo <= h && h <= hi) || (lo <= h + l && h + l <= hi) { h } else { circle_abs(lo, l).max(circle_abs(hi, l)) };
    (min, max)
}

/// Member centres as representatives and the shortest-path metric over the 1-skeleton.
///
/// On a disconnected finite space, vertices in different skeleton components are
/// joined by edges of their true distance before taking the closure.
pub fn vertex_metric(c: &Cover, n: &Nerve) -> Result<VertexMetric> {
    if n.vertex_count() != c.len() {
        return Err(Error::WitnessInconsistent);
    }
    let reps: Vec<Point> = c.members().iter().map(OpenSet::center).collect::<Result<_>>()?;
    let space = c.space();
    let (scale, shapes) = match space {
        Space::Abstract(m) => {
            let l = lcm_all(m.matrix().iter().flatten())?;
            let dist = m.matrix().iter().map(|r| r.iter().map(|x| scaled(x, l)).collect()).collect();
            let points = c
                .members()
                .iter()
                .map(|s| match s {
                    OpenSet::Points(p) => Ok(p.points().to_vec()),
                    _ => Err(Error::SpaceMismatch),
                })
                .collect::<Result<_>>()?;
            (l, Shapes::Abstract { dist, points })
        }
        _ => {
            let boxes: Vec<Vec<Vec<(Rational, Rational)>>> = c.members().iter().map(member_boxes).collect::<Result<_>>()?;
            let centers = reps.iter().flat_map(|p| p.angles().unwrap_or_default());
            let ends: Vec<Rational> = boxes.iter().flatten().flatten().flat_map(|(s, l)| [*s, *l]).chain(centers).collect();
            let l = lcm_all(ends.iter())?;
            let shapes = boxes
                .iter()
                .map(|m| m.iter().map(|b| b.iter().map(|(s, len)| (scaled(&frac(s), l), scaled(len, l))).collect()).collect())
                .collect();
            (l, Shapes::Torus(shapes))
        }
    };
    let mut edges = Vec::new();
    let mut adj = alloc::vec![Vec::new(); reps.len()];
    for e in n.simplices(1) {
        let d = space.distance(&reps[e[0] as usize], &reps[e[1] as usize])?;
        let w = scaled(&d, scale);
        adj[e[0] as usize].push((e[1], w));
        adj[e[1] as usize].push((e[0], w));
        edges.push((e[0], e[1], d));
    }
    let comp = components(&adj);
    let connected = comp.iter().all(|&x| x == 0);
    let space_connected = space.is_connected();
    if !connected && !space_connected {
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                if comp[i] != comp[j] {
                    let w = scaled(&space.distance(&reps[i], &reps[j])?, scale);
                    adj[i].push((j as u32, w));
                    adj[j].push((i as u32, w));
                }
            }
        }
    }
    Ok(VertexMetric { reps, edges, scale, adj, connected, space_connected, shapes })
}

fn components(adj: &[Vec<(u32, i128)>]) -> Vec<usize> {
    let mut comp = alloc::vec![usize::MAX; adj.len()];
    let mut next = 0;
    for s in 0..adj.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = alloc::vec![s];
        comp[s] = next;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if comp[v as usize] == usize::MAX {
                    comp[v as usize] = next;
                    stack.push(v as usize);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Half the distortion of the correspondence `{(b_i, v) : v ∈ A_i}`.
///
/// The supremum over each pair of members is taken exactly from the distance range
/// between their closures, so the value bounds the Gromov–Hausdorff distance between
/// `(Δ_0, d⁰)` and the space from above.
pub fn gh_upper_bound(vm: &VertexMetric) -> Result<Rational> {
    if !vm.connected && vm.space_connected {
        return Err(Error::DisconnectedSkeleton);
    }
    let n = vm.vertex_count();
    let mut dis: i128 = 0;
    for i in 0..n {
        let row = vm.int_row(i);
        for (j, &d0) in row.iter().enumerate().skip(i) {
            let (lo, hi) = vm.range(i, j);
            dis = dis.max(d0 - lo).max(hi - d0);
        }
    }
    Ok(Rational::new(dis, 2 * vm.scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{Arc, ArcUnion};
    use crate::nerve::build_nerve;
    use crate::rational::rat;
    use crate::space::FiniteMetric;
    use proptest::prelude::*;

    fn three_arcs() -> Cover {
        Cover::circle_arcs(&[(rat(0, 1), rat(2, 5)), (rat(3, 10), rat(7, 10)), (rat(3, 5), rat(21, 20))]).unwrap()
    }

    fn two_arcs() -> Cover {
        Cover::circle_arcs(&[(rat(-1, 4), rat(5, 8)), (rat(3, 8), rat(5, 4))]).unwrap()
    }

    #[test]
    fn partition_examples() {
        let c = three_arcs();
        let pts = [Point::circle(rat(1, 10)), Point::circle(rat(7, 20)), Point::circle(rat(13, 20))];
        let p = partition_of_unity(&c, &pts).unwrap();
        assert_eq!(p.weights(0), &[(0, int(1))]);
        // symmetric overlap (3/10, 2/5): midpoint 7/20 is 1/20 deep in both arcs
        assert_eq!(p.weights(1), &[(0, rat(1, 2)), (1, rat(1, 2))]);
        for s in 0..pts.len() {
            let total: Rational = p.weights(s).iter().map(|(_, w)| *w).sum();
            assert_eq!(total, int(1));
        }
        let b = realize(&p, &pts[1]).unwrap();
        assert_eq!(b.dense(3), alloc::vec![rat(1, 2), rat(1, 2), int(0)]);
        assert!(realize(&p, &Point::circle(rat(1, 3))).is_err());
    }

    #[test]
    fn triple_overlap_lies_inside_the_triangle() {
        let c = Cover::circle_arcs(&[(rat(0, 1), rat(1, 2)), (rat(1, 5), rat(3, 5)), (rat(3, 10), rat(11, 10))]).unwrap();
        let n = build_nerve(&c, 2).unwrap();
        let v = Point::circle(rat(7, 20));
        let b = realize(&partition_of_unity(&c, core::slice::from_ref(&v)).unwrap(), &v).unwrap();
        assert_eq!(b.support, alloc::vec![0, 1, 2]);
        assert!(n.contains(&b.support));
        // depths 3/20, 3/20, 1/20
        assert_eq!(b.coords, alloc::vec![rat(3, 7), rat(3, 7), rat(1, 7)]);
    }

    #[test]
    fn triangle_vertex_metric() {
        let c = three_arcs();
        let n = build_nerve(&c, 2).unwrap();
        let vm = vertex_metric(&c, &n).unwrap();
        assert!(vm.is_connected());
        let perimeter: Rational = vm.edges().iter().map(|e| e.2).sum();
        // centres 1/5, 1/2, 33/40
        assert_eq!(perimeter, int(1));
        assert_eq!(vm.distance(0, 2), rat(3, 8));
    }

    #[test]
    fn two_point_metric_and_bound() {
        let c = two_arcs();
        let n = build_nerve(&c, 1).unwrap();
        let vm = vertex_metric(&c, &n).unwrap();
        assert_eq!(vm.vertex_count(), 2);
        assert_eq!(vm.edges().len(), 1);
        let g = gh_upper_bound(&vm).unwrap();
        assert!(g <= rat(1, 2));
    }

    #[test]
    fn identical_finite_spaces() {
        let m = FiniteMetric::new(alloc::vec![
            alloc::vec![int(0), int(1), int(2)],
            alloc::vec![int(1), int(0), int(1)],
            alloc::vec![int(2), int(1), int(0)],
        ])
        .unwrap();
        let singles = (0..3).map(|i| OpenSet::Points(crate::cover::PointSet::new(alloc::vec![i]))).collect();
        let c = Cover::new(Space::Abstract(m), singles).unwrap();
        let vm = vertex_metric(&c, &build_nerve(&c, 1).unwrap()).unwrap();
        assert!(!vm.is_connected());
        assert_eq!(gh_upper_bound(&vm).unwrap(), int(0));
    }

    #[test]
    fn disconnected_circle_skeleton() {
        let c = Cover::new(
            Space::Circle,
            alloc::vec![
                OpenSet::Arcs(ArcUnion::from_arcs(alloc::vec![Arc::new(int(0), rat(3, 5)).unwrap(), Arc::new(rat(1, 2), rat(3, 5)).unwrap()])),
            ],
        )
        .unwrap();
        let vm = vertex_metric(&c, &build_nerve(&c, 1).unwrap()).unwrap();
        assert!(vm.is_connected());
        assert!(gh_upper_bound(&vm).unwrap() <= rat(1, 4));
    }

    #[test]
    fn axis_ranges() {
        // [0, 1/4] and [1/2, 3/4] at scale 8: distances run from 1/4 to 1/2
        assert_eq!(axis_range((0, 2), (4, 2), 8), (2, 4));
        assert_eq!(axis_range((0, 1), (1, 1), 8), (0, 2));
        assert_eq!(axis_range((7, 2), (0, 1), 8), (0, 2));
        assert_eq!(axis_range((0, 0), (3, 0), 8), (3, 3));
    }

    proptest! {
        #[test]
        fn axis_range_matches_sampling(a in 0i128..24, la in 0i128..12, b in 0i128..24, lb in 0i128..12) {
            let l = 24;
            let (mn, mx) = axis_range((a, la), (b, lb), l);
            let (mut smin, mut smax) = (i128::MAX, 0);
            for x in a..=a + la {
                for y in b..=b + lb {
                    let d = circle_abs(x - y, l);
                    smin = smin.min(d);
                    smax = smax.max(d);
                }
            }
            prop_assert_eq!((mn, mx), (smin, smax));
        }

        #[test]
        fn weights_are_a_partition(starts in proptest::collection::vec(0i128..20, 3..7), x in 0i128..40) {
            let arcs: Vec<(Rational, Rational)> = starts.iter().map(|&s| (rat(s, 20), rat(s, 20) + rat(9, 20))).collect();
            let c = Cover::circle_arcs(&arcs).unwrap();
            if c.is_cover().unwrap().is_certified() {
                let v = Point::circle(rat(x, 40));
                let p = partition_of_unity(&c, core::slice::from_ref(&v)).unwrap();
                let total: Rational = p.weights(0).iter().map(|(_, w)| *w).sum();
                prop_assert_eq!(total, int(1));
                for (i, m) in c.members().iter().enumerate() {
                    let w = p.value(i, 0);
                    prop_assert!(w >= int(0));
                    prop_assert_eq!(w > int(0), m.contains(&v) == Some(true));
                }
                let b = realize(&p, &v).unwrap();
                prop_assert!(build_nerve(&c, 6).unwrap().contains(&b.support));
            }
        }
    }
}
