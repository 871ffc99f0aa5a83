//! Small square integer matrices acting on tori.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::{frac, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    /// Row-major entries.
    pub fn new(n: usize, data: Vec<i128>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::InvalidSet(alloc::format!("expected {} matrix entries", n * n)));
        }
        Ok(IntMatrix { n, data })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&alloc::vec![1; n])
    }

    pub fn diagonal(d: &[i128]) -> Self {
        let n = d.len();
        let mut data = alloc::vec![0; n * n];
        for (i, &v) in d.iter().enumerate() {
            data[i * n + i] = v;
        }
        IntMatrix { n, data }
    }

    pub fn block_diagonal(blocks: &[IntMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut data = alloc::vec![0; n * n];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    data[(off + i) * n + off + j] = b.get(i, j);
                }
            }
            off += b.n;
        }
        IntMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[i128] {
        &self.data
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        let n = self.n;
        let mut data = alloc::vec![0i128; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    let p = self.get(i, k).checked_mul(other.get(k, j)).ok_or(Error::Overflow)?;
                    acc = acc.checked_add(p).ok_or(Error::Overflow)?;
                }
                data[i * n + j] = acc;
            }
        }
        Ok(IntMatrix { n, data })
    }

    pub fn pow(&self, mut e: u32) -> Result<IntMatrix> {
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> Result<i128> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k * n + k] == 0 {
                match (k + 1..n).find(|&r| a[r * n + k] != 0) {
                    Some(r) => {
                        for j in 0..n {
                            a.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j]
                        .checked_mul(a[k * n + k])
                        .and_then(|x| x.checked_sub(a[i * n + k].checked_mul(a[k * n + j])?))
                        .ok_or(Error::Overflow)?;
                    a[i * n + j] = v / prev;
                }
            }
            prev = a[k * n + k];
        }
        Ok(sign * a[n * n - 1])
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn diagonal_entries(&self) -> Vec<i128> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }
}

/// The torus map `x ↦ M x + shift` (mod 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    matrix: IntMatrix,
    shift: Vec<Rational>,
}

impl AffineMap {
    pub fn new(matrix: IntMatrix, shift: Vec<Rational>) -> Result<Self> {
        if shift.len() != matrix.dim() {
            return Err(Error::InvalidSet("shift length must match matrix size".into()));
        }
        Ok(AffineMap { shift: shift.iter().map(frac).collect(), matrix })
    }

    pub fn linear(matrix: IntMatrix) -> Self {
        let n = matrix.dim();
        AffineMap { matrix, shift: alloc::vec![int(0); n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::linear(IntMatrix::identity(n))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn shift(&self) -> &[Rational] {
        &self.shift
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn is_linear(&self) -> bool {
        self.shift.iter().all(|s| *s == int(0))
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        let matrix = self.matrix.mul(&other.matrix)?;
        let n = self.dim();
        let shift = (0..n)
            .map(|i| {
                let mut acc = self.shift[i];
                for j in 0..n {
                    acc += int(self.matrix.get(i, j)) * other.shift[j];
                }
                frac(&acc)
            })
            .collect();
        Ok(AffineMap { matrix, shift })
    }

    pub fn pow(&self, e: u32) -> Result<AffineMap> {
        let mut acc = AffineMap::identity(self.dim());
        for _ in 0..e {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = self.shift[i];
                for (j, xj) in x.iter().enumerate() {
                    acc += int(self.matrix.get(i, j)) * xj;
                }
                frac(&acc)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_pow() {
        let m = IntMatrix::new(2, alloc::vec![1, 1, 1, 2]).unwrap();
        assert_eq!(m.det().unwrap(), 1);
        assert_eq!(m.pow(3).unwrap().entries(), &[5, 8, 8, 13]);
        let s = IntMatrix::new(3, alloc::vec![0, 1, 0, 1, 0, 0, 0, 0, 3]).unwrap();
        assert_eq!(s.det().unwrap(), -3);
        assert_eq!(IntMatrix::new(2, alloc::vec![1, 2, 2, 4]).unwrap().det().unwrap(), 0);
    }

    #[test]
    fn affine_powers_compose() {
        let g = AffineMap::new(IntMatrix::diagonal(&[2]), alloc::vec![crate::rational::rat(1, 7)]).unwrap();
        let g3 = g.pow(3).unwrap();
        let x = alloc::vec![crate::rational::rat(3, 11)];
        assert_eq!(g3.apply(&x), g.apply(&g.apply(&g.apply(&x))));
    }

    #[test]
    fn block_diagonal_layout() {
        let b = IntMatrix::block_diagonal(&[IntMatrix::diagonal(&[2]), IntMatrix::diagonal(&[3])]);
        assert!(b.is_diagonal());
        assert_eq!(b.diagonal_entries(), alloc::vec![2, 3]);
    }
}
