//! Open sets, covers, refinement and pullbacks.

pub mod arc;
pub mod atoms;
pub mod boxes;
pub mod grid;
pub mod points;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::AffineMap;
use crate::rational::{int, Rational};
use crate::space::{Point, Space};

pub use arc::{Arc, ArcUnion};
pub use atoms::AtomTable;
pub use boxes::{BoxUnion, Side, TorusBox};
pub use grid::{CellPattern, GridRegion};
pub use points::PointSet;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpenSet {
    Arcs(ArcUnion),
    Boxes(BoxUnion),
    Grid(GridRegion),
    Points(PointSet),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Arcs,
    Boxes,
    Grid,
    Points,
}

impl OpenSet {
    pub fn family(&self) -> Family {
        match self {
            OpenSet::Arcs(_) => Family::Arcs,
            OpenSet::Boxes(_) => Family::Boxes,
            OpenSet::Grid(_) => Family::Grid,
            OpenSet::Points(_) => Family::Points,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            OpenSet::Arcs(u) => u.is_empty(),
            OpenSet::Boxes(b) => b.is_empty(),
            OpenSet::Grid(g) => g.is_empty(),
            OpenSet::Points(p) => p.is_empty(),
        }
    }

    fn check_space(&self, space: &Space) -> Result<()> {
        let ok = match (self, space) {
            (OpenSet::Arcs(_), Space::Circle) => true,
            (OpenSet::Boxes(b), Space::Torus { dim }) => b.dim() == *dim,
            (OpenSet::Grid(g), Space::Torus { dim }) => g.dim() == *dim,
            (OpenSet::Points(p), Space::Abstract(m)) => p.points().iter().all(|&i| i < m.len()),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Membership; `None` when a grid region cannot decide.
    pub fn contains(&self, p: &Point) -> Option<bool> {
        match (self, p) {
            (OpenSet::Arcs(u), Point::Circle(a)) => Some(u.contains(a.value())),
            (OpenSet::Boxes(b), Point::Torus(t)) => {
                let x: Vec<Rational> = t.coords().iter().map(|a| *a.value()).collect();
                Some(b.contains(&x))
            }
            (OpenSet::Points(s), Point::Abstract(i)) => Some(s.contains(*i)),
            (OpenSet::Grid(g), Point::Torus(t)) => {
                let m = int(g.resolution() as i128);
                let mut cells: Vec<Vec<u32>> = alloc::vec![Vec::new()];
                // all closed cells containing the point
                for a in t.coords() {
                    let s = a.value() * m;
                    let f = s.floor().to_integer() as u32;
                    let opts = if s.is_integer() {
                        alloc::vec![f % g.resolution(), (f + g.resolution() - 1) % g.resolution()]
                    } else {
                        alloc::vec![f % g.resolution()]
                    };
                    cells = cells
                        .into_iter()
                        .flat_map(|c| {
                            opts.iter().map(move |&o| {
                                let mut c = c.clone();
                                c.push(o);
                                c
                            })
                        })
                        .collect();
                }
                let r = g.resolution();
                let idx = |c: &Vec<u32>| c.iter().rev().fold(0u32, |acc, &x| acc * r + x);
                let in_inner = cells.iter().any(|c| g.inner().binary_search(&idx(c)).is_ok());
                let in_outer = cells.iter().all(|c| g.outer().binary_search(&idx(c)).is_ok());
                if in_inner {
                    Some(true)
                } else if !in_outer {
                    Some(false)
                } else {
                    None
                }
            }
            _ => Some(false),
        }
    }

    /// Lower bound on the distance from `p` to the complement (exact for arcs).
    pub fn depth(&self, space: &Space, p: &Point) -> Result<Rational> {
        match (self, p, space) {
            (OpenSet::Arcs(u), Point::Circle(a), _) => Ok(u.depth(a.value())),
            (OpenSet::Boxes(b), Point::Torus(t), _) => {
                let x: Vec<Rational> = t.coords().iter().map(|a| *a.value()).collect();
                Ok(b.depth(&x))
            }
            (OpenSet::Points(s), Point::Abstract(i), Space::Abstract(m)) => {
                if !s.contains(*i) {
                    return Ok(int(0));
                }
                // open ball B(i, r) ⊆ s iff r <= distance to the nearest outside point
                Ok((0..m.len())
                    .filter(|j| !s.contains(*j))
                    .map(|j| *m.get(*i, j))
                    .min()
                    .unwrap_or_else(|| space.diameter() + int(1)))
            }
            (OpenSet::Grid(_), _, _) => Err(Error::Unsupported("depth of a grid region")),
            _ => Err(Error::PointSpaceMismatch),
        }
    }

    /// `(lo, hi)` bounds on the diameter; equal for exact representations.
    pub fn diameter_bounds(&self, space: &Space) -> (Rational, Rational) {
        match self {
            OpenSet::Arcs(u) => {
                let d = u.diameter();
                (d, d)
            }
            OpenSet::Boxes(b) => {
                let d = b.diameter();
                (d, d)
            }
            OpenSet::Grid(g) => g.diameter_bounds(),
            OpenSet::Points(p) => {
                let d = match space {
                    Space::Abstract(m) => p
                        .points()
                        .iter()
                        .flat_map(|&i| p.points().iter().map(move |&j| (i, j)))
                        .map(|(i, j)| *m.get(i, j))
                        .max()
                        .unwrap_or_else(|| int(0)),
                    _ => int(0),
                };
                (d, d)
            }
        }
    }

    pub fn intersect(&self, other: &OpenSet) -> Result<OpenSet> {
        Ok(match (self, other) {
            (OpenSet::Arcs(a), OpenSet::Arcs(b)) => OpenSet::Arcs(a.intersect(b)),
            (OpenSet::Boxes(a), OpenSet::Boxes(b)) if a.dim() == b.dim() => OpenSet::Boxes(a.intersect(b)),
            (OpenSet::Grid(a), OpenSet::Grid(b)) => OpenSet::Grid(a.intersect(b)?),
            (OpenSet::Points(a), OpenSet::Points(b)) => OpenSet::Points(a.intersect(b)),
            _ => return Err(Error::MixedRepresentations),
        })
    }

    /// `self ∩ f⁻¹(target)` for exact representations.
    pub fn intersect_preimage(&self, f: &AffineMap, target: &OpenSet) -> Result<OpenSet> {
        match (self, target) {
            (OpenSet::Arcs(a), OpenSet::Arcs(t)) => {
                if f.dim() != 1 {
                    return Err(Error::ActionSpaceMismatch);
                }
                Ok(OpenSet::Arcs(a.intersect_preimage(f.matrix().get(0, 0), &f.shift()[0], t)))
            }
            (OpenSet::Boxes(a), OpenSet::Boxes(t)) => {
                if f.dim() != a.dim() {
                    return Err(Error::ActionSpaceMismatch);
                }
                if !f.matrix().is_diagonal() {
                    return Err(Error::RepresentationNotClosed);
                }
                Ok(OpenSet::Boxes(a.intersect_preimage(&f.matrix().diagonal_entries(), f.shift(), t)))
            }
            (OpenSet::Grid(a), OpenSet::Grid(t)) => {
                let p = grid_preimage(t, f)?;
                Ok(OpenSet::Grid(a.intersect(&p)?))
            }
            (OpenSet::Points(_), OpenSet::Points(_)) => Err(Error::ActionSpaceMismatch),
            _ => Err(Error::MixedRepresentations),
        }
    }

    pub fn preimage(&self, f: &AffineMap) -> Result<OpenSet> {
        match self {
            OpenSet::Arcs(_) => OpenSet::Arcs(ArcUnion::full()).intersect_preimage(f, self),
            OpenSet::Boxes(b) => OpenSet::Boxes(BoxUnion::full(b.dim())).intersect_preimage(f, self),
            OpenSet::Grid(g) => Ok(OpenSet::Grid(grid_preimage(g, f)?)),
            OpenSet::Points(_) => Err(Error::ActionSpaceMismatch),
        }
    }

    /// Connected components (grid regions and point sets are returned whole).
    pub fn components(&self) -> Vec<OpenSet> {
        match self {
            OpenSet::Arcs(u) => u.components().into_iter().map(OpenSet::Arcs).collect(),
            OpenSet::Boxes(b) => b.components().into_iter().map(OpenSet::Boxes).collect(),
            _ => alloc::vec![self.clone()],
        }
    }

    /// A representative point: longest arc midpoint, widest box centre, lowest point.
    pub fn center(&self) -> Result<Point> {
        match self {
            OpenSet::Arcs(u) => Ok(Point::circle(u.center())),
            OpenSet::Boxes(b) => Point::torus(b.center()),
            OpenSet::Points(p) => p.points().first().map(|&i| Point::Abstract(i)).ok_or(Error::InvalidSet("empty set".into())),
            OpenSet::Grid(_) => Err(Error::Unsupported("representative of a grid region")),
        }
    }
}

pub(crate) fn grid_preimage(g: &GridRegion, f: &AffineMap) -> Result<GridRegion> {
    if f.dim() != g.dim() {
        return Err(Error::ActionSpaceMismatch);
    }
    if !f.is_linear() {
        return Err(Error::Unsupported("translations on grid regions"));
    }
    let pattern = CellPattern::new(f.matrix())?;
    Ok(g.preimage(&pattern))
}

/// Outcome of a coverage check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coverage {
    Certified,
    NotCovered { witness: Point },
    Uncertified { resolution: u32 },
}

impl Coverage {
    pub fn is_certified(&self) -> bool {
        matches!(self, Coverage::Certified)
    }
}

/// `map[i]` is a member of the coarser cover containing member `i` of the finer one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementWitness {
    pub map: Vec<usize>,
}

impl RefinementWitness {
    pub fn identity(n: usize) -> Self {
        RefinementWitness { map: (0..n).collect() }
    }

    /// First `self`, then `next`.
    pub fn then(&self, next: &RefinementWitness) -> RefinementWitness {
        RefinementWitness { map: self.map.iter().map(|&i| next.map[i]).collect() }
    }
}

#[derive(Debug, Clone)]
pub struct Refinement {
    pub cover: Cover,
    pub pairs: Vec<(usize, usize)>,
    pub left: RefinementWitness,
    pub right: RefinementWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterBound {
    pub lo: Rational,
    pub hi: Rational,
}

/// A finite indexed family of nonempty open sets of one representation over one space.
///
/// Each member carries a label: its own index for a fresh cover, the index pair for a
/// common refinement, the itinerary for an iterated cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    space: Space,
    members: Vec<OpenSet>,
    labels: Vec<Vec<u32>>,
}

impl Cover {
    pub fn new(space: Space, members: Vec<OpenSet>) -> Result<Self> {
        let labels = (0..members.len() as u32).map(|i| alloc::vec![i]).collect();
        Self::with_labels(space, members, labels)
    }

    pub fn with_labels(space: Space, members: Vec<OpenSet>, labels: Vec<Vec<u32>>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidSet("a cover needs at least one member".into()));
        }
        if labels.len() != members.len() {
            return Err(Error::InvalidSet("one label per member".into()));
        }
        let fam = members[0].family();
        for m in &members {
            if m.family() != fam {
                return Err(Error::MixedRepresentations);
            }
            m.check_space(&space)?;
            if m.is_empty() {
                return Err(Error::InvalidSet("empty member".into()));
            }
        }
        if let OpenSet::Grid(g0) = &members[0] {
            if members.iter().any(|m| matches!(m, OpenSet::Grid(g) if g.resolution() != g0.resolution())) {
                return Err(Error::MixedRepresentations);
            }
        }
        Ok(Cover { space, members, labels })
    }

    /// Circle cover by single open arcs `(a, b)` with `0 < b - a <= 1`.
    pub fn circle_arcs(arcs: &[(Rational, Rational)]) -> Result<Self> {
        let members = arcs
            .iter()
            .map(|(a, b)| Arc::between(*a, *b).map(|x| OpenSet::Arcs(ArcUnion::single(x))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(Space::Circle, members)
    }

    /// The one-member cover `{V}`.
    pub fn trivial(space: Space) -> Self {
        let member = match &space {
            Space::Circle => OpenSet::Arcs(ArcUnion::full()),
            Space::Torus { dim } => OpenSet::Boxes(BoxUnion::full(*dim)),
            Space::Abstract(m) => OpenSet::Points(PointSet::new((0..m.len()).collect())),
        };
        Cover { space, members: alloc::vec![member], labels: alloc::vec![alloc::vec![0]] }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn members(&self) -> &[OpenSet] {
        &self.members
    }

    pub fn labels(&self) -> &[Vec<u32>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn family(&self) -> Family {
        self.members[0].family()
    }

    pub fn atoms(&self) -> Result<AtomTable> {
        let refs: Vec<&OpenSet> = self.members.iter().collect();
        AtomTable::build(&self.space, &refs)
    }

    pub fn subcover(&self, indices: &[usize]) -> Result<Cover> {
        let members = indices.iter().map(|&i| self.members[i].clone()).collect();
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        Cover::with_labels(self.space.clone(), members, labels)
    }

    pub fn is_cover(&self) -> Result<Coverage> {
        let t = self.atoms()?;
        Ok(coverage_of(&t, 0..self.len(), self.grid_resolution()))
    }

    pub(crate) fn grid_resolution(&self) -> Option<u32> {
        match &self.members[0] {
            OpenSet::Grid(g) => Some(g.resolution()),
            _ => None,
        }
    }

    fn check_same_space(&self, other: &Cover) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.family() != other.family() {
            return Err(Error::MixedRepresentations);
        }
        Ok(())
    }

    /// All nonempty intersections `A_i ∩ B_j`, in lexicographic `(i, j)` order.
    pub fn common_refinement(&self, other: &Cover) -> Result<Refinement> {
        self.check_same_space(other)?;
        let mut members = Vec::new();
        let mut labels = Vec::new();
        let mut pairs = Vec::new();
        for (i, a) in self.members.iter().enumerate() {
            for (j, b) in other.members.iter().enumerate() {
                let c = a.intersect(b)?;
                if !c.is_empty() {
                    members.push(c);
                    let mut l = self.labels[i].clone();
                    l.extend_from_slice(&other.labels[j]);
                    labels.push(l);
                    pairs.push((i, j));
                }
            }
        }
        let cover = Cover::with_labels(self.space.clone(), members, labels)?;
        Ok(Refinement {
            left: RefinementWitness { map: pairs.iter().map(|p| p.0).collect() },
            right: RefinementWitness { map: pairs.iter().map(|p| p.1).collect() },
            cover,
            pairs,
        })
    }

    /// Containment matrix helper: does member `i` of `self` lie in member `j` of `other`?
    fn containment_table(&self, other: &Cover) -> Result<(AtomTable, usize)> {
        self.check_same_space(other)?;
        let refs: Vec<&OpenSet> = self.members.iter().chain(other.members.iter()).collect();
        Ok((AtomTable::build(&self.space, &refs)?, self.len()))
    }

    /// Witness that every member of `self` lies in some member of `other`
    /// (smallest containing index), or `None`.
    pub fn refines(&self, other: &Cover) -> Result<Option<RefinementWitness>> {
        let (t, off) = self.containment_table(other)?;
        let mut map = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            match (0..other.len()).find(|&j| grid::is_subset(t.possible(i), t.certain(off + j))) {
                Some(j) => map.push(j),
                None => return Ok(None),
            }
        }
        Ok(Some(RefinementWitness { map }))
    }

    /// Checks a given witness by exact containment.
    pub fn verify_witness(&self, other: &Cover, w: &RefinementWitness) -> Result<bool> {
        if w.map.len() != self.len() || w.map.iter().any(|&j| j >= other.len()) {
            return Ok(false);
        }
        let (t, off) = self.containment_table(other)?;
        Ok(w.map.iter().enumerate().all(|(i, &j)| grid::is_subset(t.possible(i), t.certain(off + j))))
    }

    /// `{f⁻¹ A_i}`, member by member.
    pub fn preimage_cover(&self, f: &AffineMap) -> Result<Cover> {
        let members = self.members.iter().map(|m| m.preimage(f)).collect::<Result<Vec<_>>>()?;
        Cover::with_labels(self.space.clone(), members, self.labels.clone())
    }

    pub fn max_diameter(&self) -> DiameterBound {
        let mut lo = int(0);
        let mut hi = int(0);
        for m in &self.members {
            let (a, b) = m.diameter_bounds(&self.space);
            if a > lo {
                lo = a;
            }
            if b > hi {
                hi = b;
            }
        }
        DiameterBound { lo, hi }
    }

    /// A number `δ >= 0` below the Lebesgue number, from sampled depths minus the mesh `1/resolution`.
    pub fn lebesgue_number_lower_bound(&self, resolution: usize) -> Result<Rational> {
        if !self.is_cover()?.is_certified() {
            return Err(Error::NotCertifiedCover);
        }
        if self.family() == Family::Grid {
            return Err(Error::Unsupported("Lebesgue number of grid covers"));
        }
        if resolution == 0 {
            return Err(Error::OutOfRange("sample resolution"));
        }
        let mut best: Option<Rational> = None;
        for p in self.space.sample_grid(resolution) {
            let mut d = int(0);
            for m in &self.members {
                let x = m.depth(&self.space, &p)?;
                if x > d {
                    d = x;
                }
            }
            if best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
        let mesh = match self.space {
            Space::Abstract(_) => int(0),
            _ => Rational::new(1, resolution as i128),
        };
        let v = best.unwrap_or_else(|| int(0)) - mesh;
        Ok(if v < int(0) { int(0) } else { v })
    }

    /// Every member replaced by its connected components (labels repeated).
    pub fn split_components(&self) -> Cover {
        let mut members = Vec::new();
        let mut labels = Vec::new();
        for (m, l) in self.members.iter().zip(&self.labels) {
            for c in m.components() {
                members.push(c);
                labels.push(l.clone());
            }
        }
        Cover { space: self.space.clone(), members, labels }
    }

    /// Box members replaced by grid approximations at `resolution`.
    pub fn promote_to_grid(&self, resolution: u32) -> Result<Cover> {
        let members = self
            .members
            .iter()
            .map(|m| match m {
                OpenSet::Boxes(b) => GridRegion::from_boxes(b, resolution).map(OpenSet::Grid),
                OpenSet::Grid(g) if g.resolution() == resolution => Ok(m.clone()),
                _ => Err(Error::Unsupported("grid promotion needs box members")),
            })
            .collect::<Result<Vec<_>>>()?;
        Cover::with_labels(self.space.clone(), members, self.labels.clone())
    }

    /// A point of the space in member `i` and in no other member, if the atoms certify one.
    pub fn private_point(&self, table: &AtomTable, i: usize, active: &[bool]) -> Option<Point> {
        let mut hit = alloc::vec![false; table.atom_count()];
        for (j, &a) in active.iter().enumerate() {
            if a && j != i {
                for &x in table.possible(j) {
                    hit[x as usize] = true;
                }
            }
        }
        table.certain(i).iter().find(|&&x| !hit[x as usize]).map(|&x| table.representative(x))
    }
}

pub(crate) fn coverage_of(t: &AtomTable, members: impl Iterator<Item = usize> + Clone, grid: Option<u32>) -> Coverage {
    let certain = atoms::coverage_mask(t.atom_count(), members.clone().map(|i| t.certain(i)));
    match certain.iter().position(|&c| !c) {
        None => Coverage::Certified,
        Some(first) => {
            if t.is_exact() {
                return Coverage::NotCovered { witness: t.representative(first as u32) };
            }
            let possible = atoms::coverage_mask(t.atom_count(), members.map(|i| t.possible(i)));
            match possible.iter().position(|&c| !c) {
                Some(a) => Coverage::NotCovered { witness: t.representative(a as u32) },
                None => Coverage::Uncertified { resolution: grid.unwrap_or(0) },
            }
        }
    }
}
