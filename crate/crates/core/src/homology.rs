//! Boundary operators and Betti numbers over ℚ and over the field with two elements.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nerve::{ComplexityProfile, Nerve};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Rational,
    Mod2,
}

/// Sparse `∂_k`: column `j` lists `(row, sign)` for the facets of the `j`-th `k`-simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    pub k: usize,
    pub rows: usize,
    pub columns: Vec<Vec<(u32, i8)>>,
}

impl BoundaryMatrix {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// Dense copy, rows by columns.
    pub fn to_dense(&self) -> Vec<Vec<i8>> {
        let mut m = alloc::vec![alloc::vec![0i8; self.columns.len()]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(r, s) in col {
                m[r as usize][j] = s;
            }
        }
        m
    }
}

/// `∂_k` for `1 ≤ k ≤ dim`, with the sign `(-1)^r` on the facet missing vertex `r`.
pub fn boundary_matrix(n: &Nerve, k: usize, mode: Coefficients) -> Result<BoundaryMatrix> {
    if k == 0 || k > n.dim() {
        return Err(Error::OutOfRange("boundary dimension"));
    }
    let faces = n.simplices(k - 1);
    let mut columns = Vec::with_capacity(n.simplices(k).len());
    let mut facet = Vec::with_capacity(k);
    for s in n.simplices(k) {
        let mut col = Vec::with_capacity(k + 1);
        for r in 0..=k {
            facet.clear();
            facet.extend(s.iter().enumerate().filter(|&(i, _)| i != r).map(|(_, &v)| v));
            let row = faces.binary_search(&facet).map_err(|_| Error::OutOfRange("facet missing"))?;
            let sign = match mode {
                Coefficients::Mod2 => 1,
                Coefficients::Rational if r % 2 == 0 => 1,
                Coefficients::Rational => -1,
            };
            col.push((row as u32, sign));
        }
        col.sort_unstable();
        columns.push(col);
    }
    Ok(BoundaryMatrix { k, rows: faces.len(), columns })
}

/// Ranks `z_i`, `b_i` and Betti numbers `B_i = z_i - b_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiVector {
    pub betti: Vec<u64>,
    pub z: Vec<u64>,
    pub b: Vec<u64>,
}

fn find(parent: &mut [u32], mut i: u32) -> u32 {
    while parent[i as usize] != i {
        let p = parent[parent[i as usize] as usize];
        parent[i as usize] = p;
        i = p;
    }
    i
}

/// Rank of `∂_1` is `V - (number of components)` over any field.
fn edge_rank(n: &Nerve) -> u64 {
    let mut parent: Vec<u32> = (0..n.vertex_count() as u32).collect();
    let mut rank = 0;
    for e in n.simplices(1) {
        let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        if a != b {
            parent[a.max(b) as usize] = a.min(b);
            rank += 1;
        }
    }
    rank
}

fn rank_mod2(m: &BoundaryMatrix) -> u64 {
    let mut pivot_of_row: Vec<u32> = alloc::vec![u32::MAX; m.rows];
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(m.cols());
    let mut rank = 0;
    for col in &m.columns {
        let mut c: Vec<u32> = col.iter().map(|&(r, _)| r).collect();
        while let Some(&low) = c.last() {
            let p = pivot_of_row[low as usize];
            if p == u32::MAX {
                break;
            }
            c = symmetric_difference(&c, &reduced[p as usize]);
        }
        if let Some(&low) = c.last() {
            pivot_of_row[low as usize] = reduced.len() as u32;
            rank += 1;
        }
        reduced.push(c);
    }
    rank
}

fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Fraction-free column reduction over the integers: `c ← p_low·c − c_low·p`,
/// then divide by the content of `c`. Rank over ℚ is the number of nonzero columns left.
fn rank_rational(m: &BoundaryMatrix) -> u64 {
    type Col = Vec<(u32, BigInt)>;
    let mut pivot_of_row: Vec<u32> = alloc::vec![u32::MAX; m.rows];
    let mut reduced: Vec<Col> = Vec::with_capacity(m.cols());
    let mut rank = 0;
    for col in &m.columns {
        let mut c: Col = col.iter().map(|&(r, s)| (r, BigInt::from(s))).collect();
        while let Some((low, _)) = c.last() {
            let p = pivot_of_row[*low as usize];
            if p == u32::MAX {
                break;
            }
            let piv = &reduced[p as usize];
            let a = piv.last().unwrap().1.clone();
            let b = c.last().unwrap().1.clone();
            c = combine(&c, &a, piv, &b);
        }
        if let Some((low, _)) = c.last() {
            pivot_of_row[*low as usize] = reduced.len() as u32;
            rank += 1;
        }
        reduced.push(c);
    }
    rank
}

/// `a·x − b·y` on sparse columns, normalised by the gcd of the entries.
fn combine(x: &[(u32, BigInt)], a: &BigInt, y: &[(u32, BigInt)], b: &BigInt) -> Vec<(u32, BigInt)> {
    let mut out: Vec<(u32, BigInt)> = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (row, v) = if take_x {
            i += 1;
            (x[i - 1].0, a * &x[i - 1].1)
        } else if take_y {
            j += 1;
            (y[j - 1].0, -(b * &y[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (x[i - 1].0, a * &x[i - 1].1 - b * &y[j - 1].1)
        };
        if !v.is_zero() {
            out.push((row, v));
        }
    }
    let g = out.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in out.iter_mut() {
            *v = &*v / &g;
        }
    }
    out
}

/// Rank of `∂_k`.
pub fn boundary_rank(n: &Nerve, k: usize, mode: Coefficients) -> Result<u64> {
    if k == 1 {
        if n.dim() < 1 {
            return Err(Error::OutOfRange("boundary dimension"));
        }
        return Ok(edge_rank(n));
    }
    let m = boundary_matrix(n, k, mode)?;
    Ok(match mode {
        Coefficients::Mod2 => rank_mod2(&m),
        Coefficients::Rational => rank_rational(&m),
    })
}

pub fn betti_numbers(n: &Nerve, mode: Coefficients) -> BettiVector {
    let counts = n.counts();
    let top = n.dim();
    // ranks[k] = rank ∂_k, with ∂_0 = 0 and ∂_{top+1} = 0
    let mut ranks = alloc::vec![0u64; top + 2];
    for (k, r) in ranks.iter_mut().enumerate().take(top + 1).skip(1) {
        *r = boundary_rank(n, k, mode).expect("dimension within range");
    }
    let z: Vec<u64> = (0..=top).map(|i| counts.get(i).copied().unwrap_or(0) - ranks[i]).collect();
    let b: Vec<u64> = (0..=top).map(|i| ranks[i + 1]).collect();
    let betti = z.iter().zip(&b).map(|(z, b)| z - b).collect();
    BettiVector { betti, z, b }
}

/// `Σ (-1)^i |Δ_i|`.
pub fn euler_characteristic(n: &Nerve) -> i64 {
    alternating_sum(&n.counts())
}

pub fn alternating_sum(v: &[u64]) -> i64 {
    v.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
}

/// The same characteristic written through partial sums:
/// `2 Σ_{i<dim} (-1)^i G_i + (-1)^dim G_dim`.
pub fn euler_from_profile(p: &ComplexityProfile) -> i64 {
    let sign = |i: usize| if i.is_multiple_of(2) { 1i64 } else { -1 };
    let d = p.dim;
    let head: i64 = (0..d).map(|i| sign(i) * p.g_k(i) as i64).sum();
    2 * head + sign(d) * p.g_k(d) as i64
}

/// `χ_t = Σ B_i t^i` with rational Betti numbers.
pub fn poincare_polynomial(n: &Nerve, t: &Rational) -> Rational {
    poincare_from_betti(&betti_numbers(n, Coefficients::Rational).betti, t)
}

pub fn poincare_from_betti(betti: &[u64], t: &Rational) -> Rational {
    let mut acc = int(0);
    let mut pow = int(1);
    for &b in betti {
        acc += pow * int(b as i128);
        pow *= t;
    }
    acc
}
