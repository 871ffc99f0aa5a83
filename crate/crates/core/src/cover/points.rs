use alloc::vec::Vec;

/// A subset of a finite metric space, as sorted point indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet {
    points: Vec<usize>,
}

impl PointSet {
    pub fn new(mut points: Vec<usize>) -> Self {
        points.sort_unstable();
        points.dedup();
        PointSet { points }
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn intersect(&self, other: &PointSet) -> PointSet {
        PointSet { points: self.points.iter().copied().filter(|p| other.contains(*p)).collect() }
    }
}
