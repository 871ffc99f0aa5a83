//! Shipped scenarios and the closed-form growth formulas behind some of them.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::cover::{Arc, BoxUnion, Cover, OpenSet, PointSet, TorusBox};
use crate::dynamics::{shift_growth_table, ActionSpec, ControllingSequence, FolnerSequence, GrowthTable};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rational::{int, rat, Rational};
use crate::space::{FiniteMetric, Space};

/// `A_0 = (−1/16, 9/16)`, `A_1 = (7/16, 17/16)`.
pub fn doubling_cover() -> Cover {
    Cover::circle_arcs(&[(rat(-1, 16), rat(9, 16)), (rat(7, 16), rat(17, 16))]).expect("two arcs cover the circle")
}

/// `(0, 2/5)`, `(3/10, 7/10)`, `(3/5, 21/20)`: a good cover with a 1-cycle nerve.
pub fn three_arc_cover() -> Cover {
    Cover::circle_arcs(&three_arcs()).expect("three arcs cover the circle")
}

fn three_arcs() -> [(Rational, Rational); 3] {
    [(int(0), rat(2, 5)), (rat(3, 10), rat(7, 10)), (rat(3, 5), rat(21, 20))]
}

/// All products `A_i × B_j` of two circle covers given by single arcs.
pub fn product_box_cover(a: &[(Rational, Rational)], b: &[(Rational, Rational)]) -> Result<Cover> {
    let mut members = Vec::with_capacity(a.len() * b.len());
    for (s, e) in a {
        for (t, f) in b {
            let sides = alloc::vec![Arc::between(*s, *e)?, Arc::between(*t, *f)?];
            members.push(OpenSet::Boxes(BoxUnion::single(TorusBox::from_arcs(sides)?)));
        }
    }
    Cover::new(Space::torus(2)?, members)
}

/// The good 9-box cover of `T²` built from two copies of the three-arc cover.
pub fn nine_box_cover() -> Cover {
    let a = three_arcs();
    product_box_cover(&a, &a).expect("product of covers")
}

pub fn product_doubling_cover() -> Cover {
    let a = [(rat(-1, 16), rat(9, 16)), (rat(7, 16), rat(17, 16))];
    product_box_cover(&a, &a).expect("product of covers")
}

/// Four boxes of side `3/5` with corners at `0` and `1/2`.
pub fn catmap_cover() -> Cover {
    let a = [(int(0), rat(3, 5)), (rat(1, 2), rat(11, 10))];
    product_box_cover(&a, &a).expect("product of covers")
}

pub fn catmap_matrix() -> IntMatrix {
    IntMatrix::new(2, alloc::vec![1, 1, 1, 2]).expect("2x2")
}

/// `log((3 + √5)/2)`, the logarithm of the expanding eigenvalue of the cat map.
pub fn catmap_reference_entropy() -> f64 {
    libm::log((3.0 + libm::sqrt(5.0)) / 2.0)
}

/// `G_k` of a cover whose members share a point: `Σ_{i≤k} C(g0, i+1)`.
pub fn prismatic_profile(g0: u64, k: u64) -> Result<BigUint> {
    if g0 == 0 {
        return Err(Error::OutOfRange("g0 must be positive"));
    }
    if k >= g0 {
        return Err(Error::OutOfRange("k beyond the nerve dimension g0 - 1"));
    }
    let mut g = BigUint::zero();
    let mut binom = BigUint::one();
    for i in 0..=k {
        // C(g0, i+1) from C(g0, i)
        binom = binom * BigUint::from(g0 - i) / BigUint::from(i + 1);
        g += &binom;
    }
    Ok(g)
}

/// A common-point cover of a finite space: point `0` lies in every member and point
/// `i ≥ 1` only in member `i − 1`.
pub fn prismatic_cover(g0: usize) -> Result<Cover> {
    if g0 == 0 {
        return Err(Error::OutOfRange("g0 must be positive"));
    }
    let n = g0 + 1;
    let dist = (0..n).map(|i| (0..n).map(|j| if i == j { int(0) } else { int(1) }).collect()).collect();
    let members = (1..n).map(|i| OpenSet::Points(PointSet::new(alloc::vec![0, i]))).collect();
    Cover::new(Space::Abstract(FiniteMetric::new(dist)?), members)
}

/// `log C(n, r)`, summing logs for small `r` to avoid cancellation in `lgamma`.
fn log_binom(n: f64, r: u64) -> f64 {
    if r <= 64 {
        (0..r).map(|t| libm::log(n - t as f64)).sum::<f64>() - libm::lgamma(r as f64 + 1.0)
    } else {
        libm::lgamma(n + 1.0) - libm::lgamma(r as f64 + 1.0) - libm::lgamma(n - r as f64 + 1.0)
    }
}

/// `ent_k = log G_k / log |F|` for the prismatic cover with `G_0 = |F| + 1`.
///
/// One row per size, entries for `k = 0..=k_max`; NaN for `|F| = 1`.
pub fn pyramid_growth(sizes: &[u64], k_max: u64) -> Vec<Vec<f64>> {
    sizes
        .iter()
        .map(|&f| {
            let g0 = f as f64 + 1.0;
            let c = libm::log(f as f64);
            let mut out = Vec::with_capacity(k_max as usize + 1);
            let mut logs: Vec<f64> = Vec::new();
            for k in 0..=k_max {
                if k < f + 1 {
                    logs.push(log_binom(g0, k + 1));
                }
                let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let lse = m + libm::log(logs.iter().map(|l| libm::exp(l - m)).sum::<f64>());
                out.push(if c > 0.0 { lse / c } else { f64::NAN });
            }
            out
        })
        .collect()
}

/// Simplex counts of the factor cover used for the shift truncation with `delta0`
/// members and nerve dimension `p`: a full `p`-simplex when `delta0 = p + 1`, the
/// `delta0`-cycle when `p = 1`, and otherwise a `p`-simplex with a path of edges
/// attached to one vertex.
pub fn shift_profile(delta0: u64, p: u64) -> Result<Vec<u64>> {
    if delta0 < 2 || p < 1 || p + 1 > delta0 {
        return Err(Error::OutOfRange("need delta0 >= p + 1 >= 2"));
    }
    let simplex = |l: u64| -> u64 {
        let mut b = 1u64;
        for i in 0..=l {
            b = b * (p + 1 - i) / (i + 1);
        }
        b
    };
    if delta0 == p + 1 {
        return Ok((0..=p).map(simplex).collect());
    }
    if p == 1 {
        return Ok(alloc::vec![delta0, delta0]);
    }
    let tail = delta0 - p - 1;
    Ok((0..=p).map(|l| simplex(l) + if l <= 1 { tail } else { 0 }).collect())
}

/// Shift-truncation rows for `|F| ∈ sizes`.
pub fn shift_truncation_growth(delta0: u64, p: u64, sizes: &[u64], k: usize) -> Result<GrowthTable> {
    let profile = shift_profile(delta0, p)?;
    Ok(shift_growth_table(&profile, p as usize, sizes, k, &ControllingSequence::Standard))
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedKind {
    /// A value stated in the literature for the system.
    Published,
    /// Follows from an elementary closed form.
    Elementary,
    /// Produced by an independent computation and frozen.
    Computed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub quantity: &'static str,
    pub value: String,
    pub kind: ExpectedKind,
}

fn expected(quantity: &'static str, value: &str, kind: ExpectedKind) -> Expected {
    Expected { quantity, value: value.into(), kind }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioKind {
    /// Iterate `cover` under `action`.
    Iterated {
        cover: Cover,
        action: ActionSpec,
        folner: FolnerSequence,
        /// `S_0` of the base cover, for the stage bounds.
        s0: u64,
    },
    Shift { delta0: u64, p: u64 },
    Pyramid { sizes: Vec<u64> },
    Prismatic { g0: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: &'static str,
    pub summary: &'static str,
    pub kind: ScenarioKind,
    pub stages: u32,
    pub k: usize,
    pub expected: Vec<Expected>,
}

pub const SCENARIO_NAMES: [&str; 7] = ["doubling", "product-doubling", "rank2-doubling", "catmap", "shift", "pyramid", "prismatic"];

pub fn scenario(name: &str) -> Result<Scenario> {
    use ExpectedKind::*;
    let diag2 = IntMatrix::diagonal(&[2, 2]);
    Ok(match name {
        "doubling" => Scenario {
            name: "doubling",
            summary: "x -> 2x on the circle with two overlapping arcs",
            kind: ScenarioKind::Iterated {
                cover: doubling_cover(),
                action: ActionSpec::CircleTimes(2),
                folner: FolnerSequence::cubes(1),
                s0: 2,
            },
            stages: 10,
            k: 1,
            expected: alloc::vec![
                expected("ent0", "log 2", Published),
                expected("S0 per stage", "2^n", Computed),
                expected("members per stage", "2, 8, 20, 48, 108, 232", Computed),
                expected("max diameter per stage", "1/2, 5/16, 5/32, 5/64, 5/128, 5/256", Computed),
            ],
        },
        "product-doubling" => Scenario {
            name: "product-doubling",
            summary: "(x, y) -> (2x, 2y) on the 2-torus with the product of two-arc covers",
            kind: ScenarioKind::Iterated {
                cover: product_doubling_cover(),
                action: ActionSpec::TorusMatrix(diag2),
                folner: FolnerSequence::cubes(1),
                s0: 4,
            },
            stages: 4,
            k: 1,
            expected: alloc::vec![expected("ent0", "2 log 2", Computed), expected("generator size", "4", Elementary)],
        },
        "rank2-doubling" => Scenario {
            name: "rank2-doubling",
            summary: "N^2 acting by doubling each coordinate of the 2-torus",
            kind: ScenarioKind::Iterated {
                cover: product_doubling_cover(),
                action: ActionSpec::Product(alloc::vec![ActionSpec::CircleTimes(2), ActionSpec::CircleTimes(2)]),
                folner: FolnerSequence::cubes(2),
                s0: 4,
            },
            stages: 3,
            k: 0,
            expected: alloc::vec![expected("stage bound", "S0 <= 4^|F|", Elementary)],
        },
        "catmap" => Scenario {
            name: "catmap",
            summary: "the cat map [[1,1],[1,2]] on grid regions at resolution 256",
            kind: ScenarioKind::Iterated {
                cover: catmap_cover(),
                action: ActionSpec::TorusMatrix(catmap_matrix()),
                folner: FolnerSequence::cubes(1),
                s0: 4,
            },
            stages: 3,
            k: 0,
            expected: alloc::vec![expected("ent0", "log((3+sqrt 5)/2) ~ 0.9624", Published)],
        },
        "shift" => Scenario {
            name: "shift",
            summary: "shift truncation over |F| copies of a 3-member cover with 1-dimensional nerve",
            kind: ScenarioKind::Shift { delta0: 3, p: 1 },
            stages: 8,
            k: 2,
            expected: alloc::vec![
                expected("G0 at |F| = 5", "243", Elementary),
                expected("Dim growth", "p = 1", Published),
                expected("ent_k limit", "log 3", Published),
            ],
        },
        "pyramid" => Scenario {
            name: "pyramid",
            summary: "prismatic covers with |F| + 1 members under logarithmic control",
            kind: ScenarioKind::Pyramid { sizes: alloc::vec![10, 100, 10_000, 1_000_000, 100_000_000] },
            stages: 5,
            k: 3,
            expected: alloc::vec![expected("ent_k limit", "k + 1", Published)],
        },
        "prismatic" => Scenario {
            name: "prismatic",
            summary: "simplex counts of a common-point cover",
            kind: ScenarioKind::Prismatic { g0: 4 },
            stages: 1,
            k: 3,
            expected: alloc::vec![expected("G_1, G_2, G_3 at G_0 = 4", "10, 14, 15", Elementary)],
        },
        _ => return Err(Error::OutOfRange("unknown scenario")),
    })
}

pub fn registry() -> Vec<Scenario> {
    SCENARIO_NAMES.iter().map(|n| scenario(n).expect("registered")).collect()
}
