//! Decomposition of a space into finitely many atoms such that every set in a
//! given family is a union of atoms. Exact set questions become questions about
//! sorted atom-index lists.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::{frac, int, rat, Rational};
use crate::space::{Point, Space};

use super::arc::{Arc, ArcUnion};
use super::boxes::Side;
use super::OpenSet;

/// Breakpoints on one circle axis. Atom `2i` is the point `b_i`, atom `2i+1`
/// the open interval from `b_i` to the next breakpoint (cyclically).
#[derive(Debug, Clone)]
struct CircleAxis {
    breaks: Vec<Rational>,
}

impl CircleAxis {
    fn new(mut breaks: Vec<Rational>) -> Self {
        breaks.push(int(0));
        breaks.sort();
        breaks.dedup();
        CircleAxis { breaks }
    }

    fn atom_count(&self) -> usize {
        2 * self.breaks.len()
    }

    fn index_of(&self, x: &Rational) -> usize {
        self.breaks.binary_search(x).expect("arc endpoint registered as breakpoint")
    }

    fn arc_atoms(&self, a: &Arc) -> Vec<u32> {
        let b = self.breaks.len();
        let s = self.index_of(a.start());
        let e = self.index_of(&frac(&a.end()));
        let mut d = (e + b - s) % b;
        if d == 0 {
            d = b;
        }
        let n = 2 * b;
        (0..2 * d - 1).map(|k| ((2 * s + 1 + k) % n) as u32).collect()
    }

    fn side_atoms(&self, side: &Side) -> Vec<u32> {
        match side {
            Side::Full => (0..self.atom_count() as u32).collect(),
            Side::Arc(a) => self.arc_atoms(a),
        }
    }

    fn representative(&self, atom: usize) -> Rational {
        let i = atom / 2;
        if atom.is_multiple_of(2) {
            return self.breaks[i];
        }
        let next = if i + 1 < self.breaks.len() { self.breaks[i + 1] } else { self.breaks[0] + int(1) };
        frac(&((self.breaks[i] + next) / int(2)))
    }
}

#[derive(Debug, Clone)]
enum Layout {
    Axes { axes: Vec<CircleAxis>, circle: bool },
    Grid { dim: usize, resolution: u32 },
    Points,
}

/// Atom lists for a family of sets over one space.
#[derive(Debug, Clone)]
pub struct AtomTable {
    layout: Layout,
    count: usize,
    possible: Vec<Vec<u32>>,
    certain: Option<Vec<Vec<u32>>>,
}

fn arcs_of(u: &ArcUnion) -> impl Iterator<Item = &Arc> {
    u.arcs().iter()
}

impl AtomTable {
    pub fn build(space: &Space, sets: &[&OpenSet]) -> Result<Self> {
        match space {
            Space::Abstract(m) => {
                let mut possible = Vec::with_capacity(sets.len());
                for s in sets {
                    match s {
                        OpenSet::Points(p) => possible.push(p.points().iter().map(|&i| i as u32).collect()),
                        _ => return Err(Error::MixedRepresentations),
                    }
                }
                Ok(AtomTable { layout: Layout::Points, count: m.len(), possible, certain: None })
            }
            Space::Circle | Space::Torus { .. } => {
                let dim = space.circle_dims().unwrap();
                if let Some(OpenSet::Grid(g)) = sets.first() {
                    return Self::build_grid(dim, g.resolution(), sets);
                }
                Self::build_axes(space, dim, sets)
            }
        }
    }

    fn build_grid(dim: usize, resolution: u32, sets: &[&OpenSet]) -> Result<Self> {
        let mut possible = Vec::with_capacity(sets.len());
        let mut certain = Vec::with_capacity(sets.len());
        for s in sets {
            match s {
                OpenSet::Grid(g) if g.dim() == dim && g.resolution() == resolution => {
                    possible.push(g.outer().to_vec());
                    certain.push(g.inner().to_vec());
                }
                _ => return Err(Error::MixedRepresentations),
            }
        }
        let count = (resolution as usize).pow(dim as u32);
        Ok(AtomTable { layout: Layout::Grid { dim, resolution }, count, possible, certain: Some(certain) })
    }

    fn build_axes(space: &Space, dim: usize, sets: &[&OpenSet]) -> Result<Self> {
        let mut breaks: Vec<Vec<Rational>> = alloc::vec![Vec::new(); dim];
        for s in sets {
            match (space, s) {
                (Space::Circle, OpenSet::Arcs(u)) => {
                    for a in arcs_of(u) {
                        breaks[0].push(*a.start());
                        breaks[0].push(frac(&a.end()));
                    }
                }
                (Space::Torus { .. }, OpenSet::Boxes(b)) if b.dim() == dim => {
                    for bx in b.boxes() {
                        for (k, side) in bx.sides().iter().enumerate() {
                            if let Side::Arc(a) = side {
                                breaks[k].push(*a.start());
                                breaks[k].push(frac(&a.end()));
                            }
                        }
                    }
                }
                _ => return Err(Error::MixedRepresentations),
            }
        }
        let axes: Vec<CircleAxis> = breaks.into_iter().map(CircleAxis::new).collect();
        let mut count: u64 = 1;
        for a in &axes {
            count = count.checked_mul(a.atom_count() as u64).ok_or(Error::Overflow)?;
        }
        if count > u32::MAX as u64 {
            return Err(Error::Overflow);
        }
        let strides: Vec<u32> = axes
            .iter()
            .scan(1u32, |acc, a| {
                let s = *acc;
                *acc *= a.atom_count() as u32;
                Some(s)
            })
            .collect();
        let mut possible = Vec::with_capacity(sets.len());
        for s in sets {
            let atoms = match s {
                OpenSet::Arcs(u) => {
                    if u.is_full() {
                        (0..count as u32).collect()
                    } else {
                        let mut v: Vec<u32> = arcs_of(u).flat_map(|a| axes[0].arc_atoms(a)).collect();
                        v.sort_unstable();
                        v.dedup();
                        v
                    }
                }
                OpenSet::Boxes(b) => {
                    let mut v = Vec::new();
                    for bx in b.boxes() {
                        let per_axis: Vec<Vec<u32>> =
                            bx.sides().iter().zip(&axes).map(|(side, ax)| ax.side_atoms(side)).collect();
                        product_indices(&per_axis, &strides, &mut v);
                    }
                    v.sort_unstable();
                    v.dedup();
                    v
                }
                _ => unreachable!(),
            };
            possible.push(atoms);
        }
        Ok(AtomTable { layout: Layout::Axes { axes, circle: matches!(space, Space::Circle) }, count: count as usize, possible, certain: None })
    }

    pub fn atom_count(&self) -> usize {
        self.count
    }

    pub fn set_count(&self) -> usize {
        self.possible.len()
    }

    /// Atoms that may meet set `i` (all of its atoms for exact representations).
    pub fn possible(&self, i: usize) -> &[u32] {
        &self.possible[i]
    }

    /// Atoms certainly inside set `i`.
    pub fn certain(&self, i: usize) -> &[u32] {
        match &self.certain {
            Some(c) => &c[i],
            None => &self.possible[i],
        }
    }

    pub fn is_exact(&self) -> bool {
        self.certain.is_none()
    }

    /// A point inside the atom.
    pub fn representative(&self, atom: u32) -> Point {
        match &self.layout {
            Layout::Points => Point::Abstract(atom as usize),
            Layout::Grid { dim, resolution } => {
                let m = *resolution;
                let mut idx = atom;
                let mut coords = Vec::with_capacity(*dim);
                for _ in 0..*dim {
                    coords.push(rat(2 * (idx % m) as i128 + 1, 2 * m as i128));
                    idx /= m;
                }
                Point::torus(coords).expect("grid dimension is positive")
            }
            Layout::Axes { axes, circle } => {
                let mut idx = atom as usize;
                let mut coords = Vec::with_capacity(axes.len());
                for a in axes {
                    coords.push(a.representative(idx % a.atom_count()));
                    idx /= a.atom_count();
                }
                if *circle {
                    Point::circle(coords.pop().unwrap())
                } else {
                    Point::torus(coords).expect("at least one axis")
                }
            }
        }
    }
}

fn product_indices(per_axis: &[Vec<u32>], strides: &[u32], out: &mut Vec<u32>) {
    if per_axis.iter().any(|v| v.is_empty()) {
        return;
    }
    let mut acc: Vec<u32> = alloc::vec![0];
    for (atoms, &stride) in per_axis.iter().zip(strides) {
        let mut next = Vec::with_capacity(acc.len() * atoms.len());
        for &a in atoms {
            for &base in &acc {
                next.push(base + a * stride);
            }
        }
        acc = next;
    }
    out.extend(acc);
}

/// Union of several sorted atom lists, as a boolean mask over all atoms.
pub(crate) fn coverage_mask(count: usize, lists: impl Iterator<Item = impl AsRef<[u32]>>) -> Vec<bool> {
    let mut mask = alloc::vec![false; count];
    for l in lists {
        for &a in l.as_ref() {
            mask[a as usize] = true;
        }
    }
    mask
}
