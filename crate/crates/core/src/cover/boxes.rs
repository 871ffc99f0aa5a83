use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational};

use super::arc::{arc_pair_diameter, Arc, ArcUnion};

/// One factor of a torus box.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Full,
    Arc(Arc),
}

impl Side {
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Side::Full => true,
            Side::Arc(a) => a.contains(x),
        }
    }

    fn depth(&self, x: &Rational) -> Rational {
        match self {
            Side::Full => rat(1, 2),
            Side::Arc(a) => a.depth(x),
        }
    }

    fn as_union(&self) -> ArcUnion {
        match self {
            Side::Full => ArcUnion::full(),
            Side::Arc(a) => ArcUnion::single(a.clone()),
        }
    }

    fn from_union(u: &ArcUnion) -> Vec<Side> {
        if u.is_full() {
            alloc::vec![Side::Full]
        } else {
            u.arcs().iter().cloned().map(Side::Arc).collect()
        }
    }

    fn center(&self) -> Rational {
        match self {
            Side::Full => int(0),
            Side::Arc(a) => a.midpoint(),
        }
    }
}

fn side_pair_diameter(a: &Side, b: &Side) -> Rational {
    match (a, b) {
        (Side::Arc(x), Side::Arc(y)) => arc_pair_diameter(x, y),
        _ => rat(1, 2),
    }
}

/// Open axis-aligned box: a product of arcs (or full circles).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusBox {
    sides: Vec<Side>,
}

impl TorusBox {
    pub fn new(sides: Vec<Side>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::InvalidSet("box needs at least one side".into()));
        }
        Ok(TorusBox { sides })
    }

    pub fn from_arcs(arcs: Vec<Arc>) -> Result<Self> {
        Self::new(arcs.into_iter().map(Side::Arc).collect())
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.sides.iter().zip(x).all(|(s, c)| s.contains(c))
    }

    /// l∞ distance from `x` to the complement of the box.
    pub fn depth(&self, x: &[Rational]) -> Rational {
        self.sides.iter().zip(x).map(|(s, c)| s.depth(c)).min().unwrap_or_else(|| int(0))
    }

    pub fn center(&self) -> Vec<Rational> {
        self.sides.iter().map(Side::center).collect()
    }

    /// Edge length of the smallest side, used to pick representative boxes.
    fn min_side(&self) -> Rational {
        self.sides
            .iter()
            .map(|s| match s {
                Side::Full => int(1),
                Side::Arc(a) => *a.len(),
            })
            .min()
            .unwrap_or_else(|| int(0))
    }

    fn intersect(&self, other: &TorusBox) -> Vec<TorusBox> {
        let per_axis: Vec<Vec<Side>> = self
            .sides
            .iter()
            .zip(&other.sides)
            .map(|(a, b)| Side::from_union(&a.as_union().intersect(&b.as_union())))
            .collect();
        product(per_axis)
    }

    fn intersect_preimage(&self, diag: &[i128], shift: &[Rational], target: &TorusBox) -> Vec<TorusBox> {
        let per_axis: Vec<Vec<Side>> = (0..self.dim())
            .map(|k| {
                let u = self.sides[k].as_union().intersect_preimage(diag[k], &shift[k], &target.sides[k].as_union());
                Side::from_union(&u)
            })
            .collect();
        product(per_axis)
    }

    /// Supremum l∞ distance between points of the two boxes.
    fn pair_diameter(&self, other: &TorusBox) -> Rational {
        self.sides
            .iter()
            .zip(&other.sides)
            .map(|(a, b)| side_pair_diameter(a, b))
            .max()
            .unwrap_or_else(|| int(0))
    }
}

fn product(per_axis: Vec<Vec<Side>>) -> Vec<TorusBox> {
    if per_axis.iter().any(|v| v.is_empty()) {
        return Vec::new();
    }
    let mut out: Vec<Vec<Side>> = alloc::vec![Vec::new()];
    for choices in per_axis {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for prefix in &out {
            for c in &choices {
                let mut p = prefix.clone();
                p.push(c.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(|sides| TorusBox { sides }).collect()
}

/// Finite union of open boxes on `T^d`. Boxes may overlap; the list is sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoxUnion {
    dim: usize,
    boxes: Vec<TorusBox>,
}

impl BoxUnion {
    pub fn new(dim: usize, mut boxes: Vec<TorusBox>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSet("box dimension must be at least 1".into()));
        }
        if boxes.iter().any(|b| b.dim() != dim) {
            return Err(Error::InvalidSet("box dimension does not match".into()));
        }
        boxes.sort();
        boxes.dedup();
        Ok(BoxUnion { dim, boxes })
    }

    pub fn full(dim: usize) -> Self {
        BoxUnion { dim, boxes: alloc::vec![TorusBox { sides: alloc::vec![Side::Full; dim] }] }
    }

    pub fn single(b: TorusBox) -> Self {
        BoxUnion { dim: b.dim(), boxes: alloc::vec![b] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[TorusBox] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.boxes.iter().any(|b| b.contains(x))
    }

    /// Lower bound for the distance from `x` to the complement.
    pub fn depth(&self, x: &[Rational]) -> Rational {
        self.boxes.iter().map(|b| b.depth(x)).max().unwrap_or_else(|| int(0))
    }

    pub fn intersect(&self, other: &BoxUnion) -> BoxUnion {
        let mut out = Vec::new();
        for a in &self.boxes {
            for b in &other.boxes {
                out.extend(a.intersect(b));
            }
        }
        BoxUnion::new(self.dim, out).expect("dimensions agree")
    }

    /// `self ∩ {x : D x + shift ∈ target}` for a diagonal integer matrix `D`.
    pub fn intersect_preimage(&self, diag: &[i128], shift: &[Rational], target: &BoxUnion) -> BoxUnion {
        let mut out = Vec::new();
        for a in &self.boxes {
            for b in &target.boxes {
                out.extend(a.intersect_preimage(diag, shift, b));
            }
        }
        BoxUnion::new(self.dim, out).expect("dimensions agree")
    }

    /// Groups of boxes linked by overlaps. Boxes whose closures only touch stay apart:
    /// open boxes sharing a face have a disconnected union.
    pub fn components(&self) -> Vec<BoxUnion> {
        let n = self.boxes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                if !self.boxes[i].intersect(&self.boxes[j]).is_empty() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: Vec<(usize, Vec<TorusBox>)> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            match groups.iter_mut().find(|g| g.0 == r) {
                Some(g) => g.1.push(self.boxes[i].clone()),
                None => groups.push((r, alloc::vec![self.boxes[i].clone()])),
            }
        }
        groups.into_iter().map(|(_, b)| BoxUnion::new(self.dim, b).unwrap()).collect()
    }

    pub fn diameter(&self) -> Rational {
        let half = rat(1, 2);
        let mut best = int(0);
        for (i, a) in self.boxes.iter().enumerate() {
            for b in &self.boxes[i..] {
                let d = a.pair_diameter(b);
                if d > best {
                    best = d;
                    if best == half {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Center of the box with the largest smallest side (first on ties).
    pub fn center(&self) -> Vec<Rational> {
        let mut best: Option<&TorusBox> = None;
        for b in &self.boxes {
            if best.is_none_or(|c| b.min_side() > c.min_side()) {
                best = Some(b);
            }
        }
        best.map(TorusBox::center).unwrap_or_else(|| alloc::vec![int(0); self.dim])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn side(a: (i128, i128), b: (i128, i128)) -> Arc {
        Arc::between(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    #[test]
    fn diagonal_preimage_box_count() {
        let b = BoxUnion::single(TorusBox::from_arcs(alloc::vec![side((0, 1), (1, 2)), side((0, 1), (1, 3))]).unwrap());
        let p = BoxUnion::full(2).intersect_preimage(&[2, 3], &[int(0), int(0)], &b);
        assert_eq!(p.boxes().len(), 6);
        assert_eq!(p.components().len(), 6);
    }

    #[test]
    fn box_diameter_linf() {
        let b = BoxUnion::single(TorusBox::from_arcs(alloc::vec![side((0, 1), (1, 4)), side((0, 1), (1, 8))]).unwrap());
        assert_eq!(b.diameter(), rat(1, 4));
    }

    #[test]
    fn components_join_overlapping_boxes() {
        let a = TorusBox::from_arcs(alloc::vec![side((0, 1), (1, 4)), side((0, 1), (1, 4))]).unwrap();
        let b = TorusBox::from_arcs(alloc::vec![side((1, 8), (1, 2)), side((1, 8), (1, 2))]).unwrap();
        let c = TorusBox::from_arcs(alloc::vec![side((3, 4), (7, 8)), side((3, 4), (7, 8))]).unwrap();
        let u = BoxUnion::new(2, alloc::vec![a, b, c]).unwrap();
        assert_eq!(u.components().len(), 2);
    }
}
