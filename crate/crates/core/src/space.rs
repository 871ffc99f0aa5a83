//! Model spaces: the circle `R/Z`, flat tori with the l∞ quotient metric,
//! and finite metric spaces.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::{circle_distance, frac, int, rat, Rational};

/// A point of `R/Z`, stored reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(Rational);

impl Angle {
    pub fn new(value: Rational) -> Self {
        Angle(frac(&value))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusPoint {
    coords: Vec<Angle>,
}

impl TorusPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidSpace("torus point needs at least one coordinate".into()));
        }
        Ok(TorusPoint { coords: coords.into_iter().map(Angle::new).collect() })
    }

    pub fn coords(&self) -> &[Angle] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Circle(Angle),
    Torus(TorusPoint),
    Abstract(usize),
}

impl Point {
    pub fn circle(value: Rational) -> Self {
        Point::Circle(Angle::new(value))
    }

    pub fn torus(coords: Vec<Rational>) -> Result<Self> {
        TorusPoint::new(coords).map(Point::Torus)
    }

    /// Coordinates on `R/Z` (one for the circle, `d` for a torus).
    pub fn angles(&self) -> Option<Vec<Rational>> {
        match self {
            Point::Circle(a) => Some(alloc::vec![*a.value()]),
            Point::Torus(t) => Some(t.coords.iter().map(|a| *a.value()).collect()),
            Point::Abstract(_) => None,
        }
    }
}

/// A validated finite metric space on points `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetric {
    dist: Vec<Vec<Rational>>,
}

impl FiniteMetric {
    pub fn new(dist: Vec<Vec<Rational>>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return Err(Error::InvalidSpace("abstract space needs at least one point".into()));
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSpace(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if row[i] != int(0) {
                return Err(Error::InvalidSpace(format!("nonzero diagonal at {i}")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::InvalidSpace(format!("asymmetric distance at ({i},{j})")));
                }
                if i != j && dist[i][j] <= int(0) {
                    return Err(Error::InvalidSpace(format!("nonpositive distance at ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] {
                        return Err(Error::InvalidSpace(format!("triangle inequality fails for ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(FiniteMetric { dist })
    }

    /// `n` points at mutual distance 1.
    pub fn discrete(n: usize) -> Result<Self> {
        let dist = (0..n)
            .map(|i| (0..n).map(|j| if i == j { int(0) } else { int(1) }).collect())
            .collect();
        Self::new(dist)
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space {
    Circle,
    Torus { dim: usize },
    Abstract(FiniteMetric),
}

impl Space {
    pub fn torus(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpace("torus dimension must be at least 1".into()));
        }
        Ok(Space::Torus { dim })
    }

    /// Number of circle coordinates, or `None` for a finite space.
    pub fn circle_dims(&self) -> Option<usize> {
        match self {
            Space::Circle => Some(1),
            Space::Torus { dim } => Some(*dim),
            Space::Abstract(_) => None,
        }
    }

    /// Manifold dimension, if the space is one.
    pub fn manifold_dim(&self) -> Option<usize> {
        self.circle_dims()
    }

    pub fn is_connected(&self) -> bool {
        match self {
            Space::Abstract(m) => m.len() == 1,
            _ => true,
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        match (self, p) {
            (Space::Circle, Point::Circle(_)) => Ok(()),
            (Space::Torus { dim }, Point::Torus(t)) if t.dim() == *dim => Ok(()),
            (Space::Abstract(m), Point::Abstract(i)) if *i < m.len() => Ok(()),
            _ => Err(Error::PointSpaceMismatch),
        }
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Result<Rational> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(match (self, p, q) {
            (Space::Circle, Point::Circle(a), Point::Circle(b)) => circle_distance(a.value(), b.value()),
            (Space::Torus { .. }, Point::Torus(a), Point::Torus(b)) => a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| circle_distance(x.value(), y.value()))
                .max()
                .unwrap_or_else(|| int(0)),
            (Space::Abstract(m), Point::Abstract(i), Point::Abstract(j)) => *m.get(*i, *j),
            _ => unreachable!(),
        })
    }

    pub fn diameter(&self) -> Rational {
        match self {
            Space::Circle | Space::Torus { .. } => rat(1, 2),
            Space::Abstract(m) => {
                m.matrix().iter().flat_map(|r| r.iter().cloned()).max().unwrap_or_else(|| int(0))
            }
        }
    }

    /// Uniform sample grid with `resolution` points per circle axis; all points of a finite space.
    pub fn sample_grid(&self, resolution: usize) -> Vec<Point> {
        match self {
            Space::Circle => (0..resolution).map(|i| Point::circle(rat(i as i128, resolution as i128))).collect(),
            Space::Torus { dim } => {
                let total = resolution.pow(*dim as u32);
                (0..total)
                    .map(|mut idx| {
                        let mut coords = Vec::with_capacity(*dim);
                        for _ in 0..*dim {
                            coords.push(rat((idx % resolution) as i128, resolution as i128));
                            idx /= resolution;
                        }
                        Point::Torus(TorusPoint { coords: coords.into_iter().map(Angle::new).collect() })
                    })
                    .collect()
            }
            Space::Abstract(m) => (0..m.len()).map(Point::Abstract).collect(),
        }
    }
}
