//! Semigroup actions, Følner boxes, iterated covers `α_F` and growth tables.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::cover::{Cover, DiameterBound, GridRegion, OpenSet};
use crate::error::{Error, Result};
use crate::homology::{betti_numbers, euler_characteristic, Coefficients};
use crate::irreducible::SubcoverSearch;
use crate::matrix::{AffineMap, IntMatrix};
use crate::nerve::{build_nerve, complexity_profile, product_polynomial};
use crate::rational::{int, Rational};
use crate::space::Space;

/// Default cap on the raw member count of an iterated cover.
pub const DEFAULT_MEMBER_CAP: usize = 200_000;

/// Default grid resolution used when a box cover meets a non-diagonal matrix.
pub const DEFAULT_GRID_RESOLUTION: u32 = 256;

/// An action of `N^r` by commuting endomorphisms, or the formula-only shift truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionSpec {
    /// `θ ↦ kθ` on the circle.
    CircleTimes(i128),
    /// `θ ↦ kθ + shift` on the circle.
    CircleAffine { k: i128, shift: Rational },
    /// `x ↦ Mx` on `T^d`.
    TorusMatrix(IntMatrix),
    /// Factors act on their own coordinates; the rank is the sum of the factor ranks.
    Product(Vec<ActionSpec>),
    /// Shift action on `|F|` copies of one cover with the given simplex counts; `p` is its
    /// nerve dimension.
    ShiftTruncation { profile: Vec<u64>, p: usize },
}

impl ActionSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ActionSpec::CircleTimes(k) | ActionSpec::CircleAffine { k, .. } => {
                if k.abs() < 2 {
                    return Err(Error::OutOfRange("circle multiplier must satisfy |k| >= 2"));
                }
            }
            ActionSpec::TorusMatrix(m) => {
                if m.det()? == 0 {
                    return Err(Error::SingularMatrix);
                }
            }
            ActionSpec::Product(fs) => {
                if fs.is_empty() {
                    return Err(Error::OutOfRange("product needs a factor"));
                }
                for f in fs {
                    if matches!(f, ActionSpec::ShiftTruncation { .. }) {
                        return Err(Error::Unsupported("shift truncation inside a product"));
                    }
                    f.validate()?;
                }
            }
            ActionSpec::ShiftTruncation { profile, p } => {
                if profile.first().copied().unwrap_or(0) < 2 {
                    return Err(Error::OutOfRange("shift profile needs at least two vertices"));
                }
                if *p + 1 != profile.len() || profile.contains(&0) {
                    return Err(Error::OutOfRange("shift profile length must be p + 1"));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        match self {
            ActionSpec::Product(fs) => fs.iter().map(ActionSpec::rank).sum(),
            _ => 1,
        }
    }

    /// Number of circle coordinates acted on (`None` for the shift).
    pub fn space_dim(&self) -> Option<usize> {
        match self {
            ActionSpec::CircleTimes(_) | ActionSpec::CircleAffine { .. } => Some(1),
            ActionSpec::TorusMatrix(m) => Some(m.dim()),
            ActionSpec::Product(fs) => fs.iter().map(ActionSpec::space_dim).sum(),
            ActionSpec::ShiftTruncation { .. } => None,
        }
    }

    pub fn space(&self) -> Result<Space> {
        match self.space_dim() {
            Some(1) => Ok(Space::Circle),
            Some(d) => Space::torus(d),
            None => Err(Error::Unsupported("the shift truncation has no model space")),
        }
    }

    fn is_diagonal(&self) -> bool {
        match self {
            ActionSpec::TorusMatrix(m) => m.is_diagonal(),
            ActionSpec::Product(fs) => fs.iter().all(ActionSpec::is_diagonal),
            _ => true,
        }
    }

    /// The map of the element `γ ∈ N^r`.
    pub fn element_map(&self, g: &[u32]) -> Result<AffineMap> {
        if g.len() != self.rank() {
            return Err(Error::OutOfRange("element rank"));
        }
        match self {
            ActionSpec::CircleTimes(k) => {
                let e = k.checked_pow(g[0]).ok_or(Error::Overflow)?;
                Ok(AffineMap::linear(IntMatrix::diagonal(&[e])))
            }
            ActionSpec::CircleAffine { k, shift } => {
                AffineMap::new(IntMatrix::diagonal(&[*k]), alloc::vec![*shift])?.pow(g[0])
            }
            ActionSpec::TorusMatrix(m) => Ok(AffineMap::linear(m.pow(g[0])?)),
            ActionSpec::Product(fs) => {
                let mut blocks = Vec::with_capacity(fs.len());
                let mut shift = Vec::new();
                let mut at = 0;
                for f in fs {
                    let r = f.rank();
                    let m = f.element_map(&g[at..at + r])?;
                    at += r;
                    shift.extend_from_slice(m.shift());
                    blocks.push(m.matrix().clone());
                }
                AffineMap::new(IntMatrix::block_diagonal(&blocks), shift)
            }
            ActionSpec::ShiftTruncation { .. } => Err(Error::Unsupported("the shift truncation has no element maps")),
        }
    }
}

/// Boxes `F(n) = ∏ {0, …, a_i n − 1}` in `N^r`; cubes have every `a_i = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolnerSequence {
    aspect: Vec<u32>,
}

impl FolnerSequence {
    pub fn cubes(rank: usize) -> Self {
        FolnerSequence { aspect: alloc::vec![1; rank] }
    }

    pub fn rectangles(aspect: Vec<u32>) -> Result<Self> {
        if aspect.is_empty() || aspect.contains(&0) {
            return Err(Error::OutOfRange("aspect ratios must be positive"));
        }
        Ok(FolnerSequence { aspect })
    }

    pub fn rank(&self) -> usize {
        self.aspect.len()
    }

    fn sides(&self, n: u32) -> Vec<u32> {
        self.aspect.iter().map(|a| a * n).collect()
    }

    pub fn size(&self, n: u32) -> u64 {
        self.sides(n).iter().map(|&s| s as u64).product()
    }

    /// Elements of `F(n)` in lexicographic order.
    pub fn set(&self, n: u32) -> Vec<Vec<u32>> {
        let sides = self.sides(n);
        let mut out: Vec<Vec<u32>> = alloc::vec![Vec::new()];
        for &s in &sides {
            out = out.into_iter().flat_map(|p| (0..s).map(move |x| {
                let mut q = p.clone();
                q.push(x);
                q
            })).collect();
        }
        out
    }

    /// `F(n) \ F(n − 1)`.
    pub fn shell(&self, n: u32) -> Vec<Vec<u32>> {
        let inner = self.sides(n.saturating_sub(1));
        self.set(n).into_iter().filter(|g| g.iter().zip(&inner).any(|(x, s)| x >= s)).collect()
    }

    /// Elements `γ ∈ F(n)` with `γ + e_i ∉ F(n)` for some generator `e_i`.
    pub fn boundary_size(&self, n: u32) -> u64 {
        let sides = self.sides(n);
        self.set(n).iter().filter(|g| g.iter().zip(&sides).any(|(x, s)| x + 1 == *s)).count() as u64
    }
}

/// An iterated cover together with the grid resolution used if boxes had to be promoted.
#[derive(Debug, Clone)]
pub struct Iterated {
    pub cover: Cover,
    pub promoted: Option<u32>,
}

/// Incremental construction of `α_F` as `F` grows.
struct Refiner<'a> {
    base: Cover,
    act: &'a ActionSpec,
    current: Cover,
    promoted: Option<u32>,
}

impl<'a> Refiner<'a> {
    fn new(a: &Cover, act: &'a ActionSpec, resolution: u32) -> Result<Self> {
        act.validate()?;
        if *a.space() != act.space()? {
            return Err(Error::ActionSpaceMismatch);
        }
        let (base, promoted) = match a.members()[0] {
            OpenSet::Boxes(_) if !act.is_diagonal() => (a.promote_to_grid(resolution)?, Some(resolution)),
            _ => (a.clone(), None),
        };
        let full = match &base.members()[0] {
            OpenSet::Grid(g) => OpenSet::Grid(GridRegion::full(g.dim(), g.resolution())?),
            _ => Cover::trivial(base.space().clone()).members()[0].clone(),
        };
        let current = Cover::with_labels(base.space().clone(), alloc::vec![full], alloc::vec![Vec::new()])?;
        Ok(Refiner { base, act, current, promoted })
    }

    /// Refines by the pullbacks along the given elements. `false` when the member cap was hit.
    fn refine(&mut self, elements: &[Vec<u32>], cap: usize) -> Result<bool> {
        for g in elements {
            let f = self.act.element_map(g)?;
            let grid = matches!(self.base.members()[0], OpenSet::Grid(_));
            let pulled: Vec<OpenSet> = if grid {
                self.base.members().iter().map(|m| m.preimage(&f)).collect::<Result<_>>()?
            } else {
                Vec::new()
            };
            let mut members = Vec::new();
            let mut labels = Vec::new();
            // a cover is a family of sets: equal members merge, keeping the first itinerary
            let mut seen = BTreeSet::new();
            for (x, lx) in self.current.members().iter().zip(self.current.labels()) {
                for (j, target) in self.base.members().iter().enumerate() {
                    let piece = if grid { x.intersect(&pulled[j])? } else { x.intersect_preimage(&f, target)? };
                    if piece.is_empty() {
                        continue;
                    }
                    let mut l = lx.clone();
                    l.push(j as u32);
                    for c in piece.components() {
                        if !seen.insert(c.clone()) {
                            continue;
                        }
                        members.push(c);
                        labels.push(l.clone());
                    }
                }
                if members.len() > cap {
                    return Ok(false);
                }
            }
            self.current = Cover::with_labels(self.base.space().clone(), members, labels)?;
        }
        Ok(true)
    }
}

/// `α_F = ⋂_{γ∈F} ρ(γ)⁻¹ α`, with itinerary labels and connected members.
///
/// Box covers under a non-diagonal matrix are first promoted to grid regions at
/// `resolution`, which is reported in the result.
pub fn iterate_cover(a: &Cover, act: &ActionSpec, f: &[Vec<u32>], resolution: u32) -> Result<Iterated> {
    if f.is_empty() {
        return Err(Error::OutOfRange("empty element set"));
    }
    let mut r = Refiner::new(a, act, resolution)?;
    r.refine(f, usize::MAX)?;
    Ok(Iterated { cover: r.current, promoted: r.promoted })
}

/// Normalising sequence `c(n)`, evaluated at `|F(n)|` (or looked up per stage).
#[derive(Debug, Clone, PartialEq)]
pub enum ControllingSequence {
    Standard,
    Logarithmic,
    Custom(Vec<f64>),
}

impl ControllingSequence {
    /// `None` when `c(n)` is not positive (e.g. `log 1`).
    pub fn value(&self, stage: usize, size_f: u64) -> Option<f64> {
        let v = match self {
            ControllingSequence::Standard => size_f as f64,
            ControllingSequence::Logarithmic => libm::log(size_f as f64),
            ControllingSequence::Custom(t) => *t.get(stage.checked_sub(1)?)?,
        };
        (v > 0.0).then_some(v)
    }

    pub fn validate(&self) -> Result<()> {
        if let ControllingSequence::Custom(t) = self {
            if t.is_empty() || t[0] <= 0.0 || t.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::OutOfRange("custom control must be positive and strictly increasing"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GrowthConfig {
    pub stages: u32,
    pub k: usize,
    pub control: ControllingSequence,
    pub budget: usize,
    pub member_cap: usize,
    pub grid_resolution: u32,
    /// Defaults to cubes of the action's rank.
    pub folner: Option<FolnerSequence>,
}

impl GrowthConfig {
    pub fn new(stages: u32, k: usize) -> Self {
        GrowthConfig {
            stages,
            k,
            control: ControllingSequence::Standard,
            budget: 24,
            member_cap: DEFAULT_MEMBER_CAP,
            grid_resolution: DEFAULT_GRID_RESOLUTION,
            folner: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub n: u32,
    pub size_f: u64,
    pub members: BigUint,
    /// `G_0..G_K`.
    pub g: Vec<BigUint>,
    /// `S_0..S_K` estimates.
    pub s: Vec<BigUint>,
    pub s_exact: Vec<bool>,
    /// Nerve dimension of the stage cover.
    pub dim: Option<u64>,
    pub dim_estimate: u64,
    pub dim_exact: bool,
    /// `B_0..B_K` (mod 2), absent for formula rows.
    pub betti: Option<Vec<u64>>,
    pub chi: Option<BigInt>,
    pub max_diameter: Option<DiameterBound>,
    pub certified: bool,
    /// `ent_k = log S_k / c(n)`; NaN when `c(n)` is not positive.
    pub ent: Vec<f64>,
    pub dim_growth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTable {
    pub k: usize,
    pub rows: Vec<GrowthRow>,
    /// Set when the member cap stopped the iteration early.
    pub truncated: bool,
    pub promoted: Option<u32>,
}

/// Natural logarithm of a big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    libm::log(top as f64) + shift as f64 * core::f64::consts::LN_2
}

fn ratio(x: f64, c: Option<f64>) -> f64 {
    match c {
        Some(c) => x / c,
        None => f64::NAN,
    }
}

/// Stage-by-stage table for `F(1), F(2), …`.
///
/// Each stage refines the previous cover by the pullbacks of the new shell, builds the
/// nerve, its mod 2 Betti numbers and the subcover estimates. Uncertified grid stages
/// report `S_k = G_k` of the raw cover, flagged inexact. For the shift truncation the
/// cover argument is not used: rows follow from products of the factor profile.
pub fn growth_table(a: &Cover, act: &ActionSpec, cfg: &GrowthConfig) -> Result<GrowthTable> {
    if cfg.stages == 0 {
        return Err(Error::OutOfRange("stages must be at least 1"));
    }
    cfg.control.validate()?;
    if let ActionSpec::ShiftTruncation { profile, p } = act {
        act.validate()?;
        let folner = cfg.folner.clone().unwrap_or_else(|| FolnerSequence::cubes(1));
        let sizes: Vec<u64> = (1..=cfg.stages).map(|n| folner.size(n)).collect();
        return Ok(shift_growth_table(profile, *p, &sizes, cfg.k, &cfg.control));
    }
    let folner = cfg.folner.clone().unwrap_or_else(|| FolnerSequence::cubes(act.rank()));
    if folner.rank() != act.rank() {
        return Err(Error::OutOfRange("Følner rank differs from the action rank"));
    }
    let mut refiner = Refiner::new(a, act, cfg.grid_resolution)?;
    let mut rows = Vec::new();
    let mut truncated = false;
    for n in 1..=cfg.stages {
        if !refiner.refine(&folner.shell(n), cfg.member_cap)? {
            truncated = true;
            break;
        }
        let size_f = folner.size(n);
        rows.push(stage_row(&refiner.current, n, size_f, cfg)?);
    }
    Ok(GrowthTable { k: cfg.k, rows, truncated, promoted: refiner.promoted })
}

fn stage_row(c: &Cover, n: u32, size_f: u64, cfg: &GrowthConfig) -> Result<GrowthRow> {
    let k = cfg.k;
    let certified = c.is_cover()?.is_certified();
    let nerve = build_nerve(c, k + 1)?;
    let profile = complexity_profile(&nerve);
    let g: Vec<BigUint> = (0..=k).map(|i| BigUint::from(profile.g_k(i))).collect();
    let mut betti = betti_numbers(&nerve, Coefficients::Mod2).betti;
    betti.resize(k + 1, 0);
    let complete = !nerve.truncated();
    let chi = complete.then(|| BigInt::from(euler_characteristic(&nerve)));
    let raw_dim = nerve.full_dim() as u64;
    let dim = Some(raw_dim);
    let (s, s_exact, dim_estimate, dim_exact) = if certified {
        let search = SubcoverSearch::with_nerve(c, nerve, cfg.budget)?;
        let mut s = Vec::with_capacity(k + 1);
        let mut ex = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let e = search.s_k(i)?;
            s.push(BigUint::from(e.value));
            ex.push(e.exact);
        }
        let d = search.dim()?;
        (s, ex, d.value as u64, d.exact)
    } else {
        (g.clone(), alloc::vec![false; k + 1], raw_dim, false)
    };
    let cn = cfg.control.value(n as usize, size_f);
    let ent = s.iter().map(|x| ratio(ln_big(x), cn)).collect();
    Ok(GrowthRow {
        n,
        size_f,
        members: BigUint::from(c.len()),
        g,
        s,
        s_exact,
        dim,
        dim_estimate,
        dim_exact,
        betti: Some(betti),
        chi,
        max_diameter: Some(c.max_diameter()),
        certified,
        ent,
        dim_growth: ratio(dim_estimate as f64, cn),
    })
}

/// Rows for the shift truncation: the stage cover is the product of `|F|` copies of an
/// irreducible cover with simplex counts `profile`, so `G_k` is the number of product
/// cells of dimension at most `k`, `S_k = G_k`, and the dimension is `p |F|`.
pub fn shift_growth_table(profile: &[u64], p: usize, sizes: &[u64], k: usize, control: &ControllingSequence) -> GrowthTable {
    let mut rows = Vec::with_capacity(sizes.len());
    let chi_one: i64 = crate::homology::alternating_sum(profile);
    for (idx, &size_f) in sizes.iter().enumerate() {
        let factors: Vec<Vec<u64>> = alloc::vec![profile.to_vec(); size_f as usize];
        let poly = product_polynomial(&factors);
        let mut g = Vec::with_capacity(k + 1);
        let mut acc = BigUint::zero();
        for i in 0..=k {
            if let Some(c) = poly.get(i) {
                acc += c;
            }
            g.push(acc.clone());
        }
        let dim = p as u64 * size_f;
        let cn = control.value(idx + 1, size_f);
        let ent = g.iter().map(|x| ratio(ln_big(x), cn)).collect();
        let mut chi = BigInt::one();
        for _ in 0..size_f {
            chi *= BigInt::from(chi_one);
        }
        rows.push(GrowthRow {
            n: idx as u32 + 1,
            size_f,
            members: poly[0].clone(),
            s: g.clone(),
            g,
            s_exact: alloc::vec![true; k + 1],
            dim: Some(dim),
            dim_estimate: dim,
            dim_exact: true,
            betti: None,
            chi: Some(chi),
            max_diameter: None,
            certified: true,
            ent,
            dim_growth: ratio(dim as f64, cn),
        });
    }
    GrowthTable { k, rows, truncated: false, promoted: None }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageBoundRow {
    pub n: u32,
    /// `S_0(α_F) ≤ s0^{|F|}`.
    pub s0_ok: bool,
    /// `S_k(α_F) ≤ s0^{(k+1)|F|}`, i.e. `log S_k / |F| ≤ (k+1) log s0`.
    pub s_k_ok: Vec<bool>,
    pub s0_exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageBoundReport {
    pub rows: Vec<StageBoundRow>,
    pub pass: bool,
}

/// `x ≤ base^exp`, exactly while the power stays below a few million bits.
fn at_most_power(x: &BigUint, base: u64, exp: u64) -> bool {
    if base <= 1 {
        return *x <= BigUint::from(base);
    }
    let log2 = libm::log2(base as f64) * exp as f64;
    if (x.bits() as f64) < libm::floor(log2) {
        return true;
    }
    if log2 > 4.0e6 {
        return ln_big(x) <= libm::log(base as f64) * exp as f64 * (1.0 + 1e-12);
    }
    *x <= BigUint::from(base).pow(exp as u32)
}

/// Checks the stage bounds `S_k(α_{F(n)}) ≤ S_0(α)^{(k+1)|F(n)|}` in integers.
pub fn stage_bound_check(t: &GrowthTable, s0alpha: u64) -> StageBoundReport {
    let rows: Vec<StageBoundRow> = t
        .rows
        .iter()
        .map(|r| {
            let s_k_ok: Vec<bool> =
                r.s.iter().enumerate().map(|(k, s)| at_most_power(s, s0alpha, (k as u64 + 1) * r.size_f)).collect();
            StageBoundRow { n: r.n, s0_ok: s_k_ok[0], s_k_ok, s0_exact: r.s_exact[0] }
        })
        .collect();
    let pass = rows.iter().all(|r| r.s0_ok && r.s_k_ok.iter().all(|&b| b));
    StageBoundReport { rows, pass }
}

pub const GENERATOR_DISCLAIMER: &str =
    "finitely many stages cannot prove the generator property; they can only refute shrinking";

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorReport {
    pub diameters: Vec<DiameterBound>,
    /// Upper diameter bounds never increase.
    pub nonincreasing: bool,
    /// Diameters reached zero? Never on a continuum; true when the bounds shrink at all.
    pub shrinking: bool,
    /// First stage whose upper bound is below the threshold.
    pub first_below: Option<u32>,
    /// Every member of the base cover has diameter at most the supplied expansivity
    /// constant, which makes it a generator.
    pub generator_by_constant: Option<bool>,
    pub disclaimer: &'static str,
}

/// Maximal member diameters of `α_{F(n)}` for `n = 1..stages`.
pub fn generator_diagnostics(
    a: &Cover,
    act: &ActionSpec,
    stages: u32,
    threshold: &Rational,
    e_constant: Option<&Rational>,
) -> Result<GeneratorReport> {
    if !a.is_cover()?.is_certified() {
        return Err(Error::NotCertifiedCover);
    }
    let folner = FolnerSequence::cubes(act.rank());
    let mut refiner = Refiner::new(a, act, DEFAULT_GRID_RESOLUTION)?;
    let mut diameters = Vec::new();
    let mut first_below = None;
    for n in 1..=stages {
        if !refiner.refine(&folner.shell(n), DEFAULT_MEMBER_CAP)? {
            break;
        }
        let d = refiner.current.max_diameter();
        if first_below.is_none() && d.hi < *threshold {
            first_below = Some(n);
        }
        diameters.push(d);
    }
    let nonincreasing = diameters.windows(2).all(|w| w[1].hi <= w[0].hi);
    let shrinking = match (diameters.first(), diameters.last()) {
        (Some(f), Some(l)) => l.hi < f.hi,
        _ => false,
    };
    let generator_by_constant = e_constant.map(|e| a.max_diameter().hi <= *e && *e > int(0));
    Ok(GeneratorReport { diameters, nonincreasing, shrinking, first_below, generator_by_constant, disclaimer: GENERATOR_DISCLAIMER })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{Arc, ArcUnion, BoxUnion, TorusBox};
    use crate::irreducible::s_k_estimate;
    use crate::rational::rat;

    fn two_arcs() -> Cover {
        Cover::circle_arcs(&[(rat(-1, 16), rat(9, 16)), (rat(7, 16), rat(17, 16))]).unwrap()
    }

    fn shifted_two_arcs(c: &Rational) -> Cover {
        Cover::circle_arcs(&[(rat(-1, 16) + c, rat(9, 16) + c), (rat(7, 16) + c, rat(17, 16) + c)]).unwrap()
    }

    fn product_boxes(a: &Cover, b: &Cover) -> Cover {
        let mut members = Vec::new();
        for x in a.members() {
            for y in b.members() {
                let (OpenSet::Arcs(x), OpenSet::Arcs(y)) = (x, y) else { unreachable!() };
                members.push(OpenSet::Boxes(
                    BoxUnion::single(TorusBox::from_arcs(alloc::vec![x.arcs()[0].clone(), y.arcs()[0].clone()]).unwrap()),
                ));
            }
        }
        Cover::new(Space::torus(2).unwrap(), members).unwrap()
    }

    #[test]
    fn identity_element_gives_the_cover() {
        let a = two_arcs();
        let it = iterate_cover(&a, &ActionSpec::CircleTimes(2), &[alloc::vec![0]], 256).unwrap();
        assert_eq!(it.cover.members(), a.members());
        assert_eq!(it.promoted, None);
    }

    #[test]
    fn doubling_first_refinement() {
        let a = two_arcs();
        let it = iterate_cover(&a, &ActionSpec::CircleTimes(2), &[alloc::vec![0], alloc::vec![1]], 256).unwrap();
        assert!(it.cover.len() <= 8);
        // independent count: components of A_i ∩ f⁻¹A_j, computed arc by arc
        let mut expect = 0;
        for x in a.members() {
            for t in a.members() {
                let (OpenSet::Arcs(x), OpenSet::Arcs(t)) = (x, t) else { unreachable!() };
                for xa in x.arcs() {
                    for ta in t.arcs() {
                        expect += ArcUnion::from_arcs(xa.intersect_preimage(2, &int(0), ta)).components().len();
                    }
                }
            }
        }
        assert_eq!(it.cover.len(), expect);
        assert_eq!(it.cover.len(), 8);
        let s = s_k_estimate(&it.cover, 0, 24).unwrap();
        assert_eq!((s.value, s.exact), (4, true));
        // labels are itineraries
        assert!(it.cover.labels().iter().all(|l| l.len() == 2));
    }

    #[test]
    fn incremental_equals_batch() {
        let a = two_arcs();
        let act = ActionSpec::CircleTimes(2);
        let batch = iterate_cover(&a, &act, &[alloc::vec![0], alloc::vec![1], alloc::vec![2]], 256).unwrap().cover;
        let two = iterate_cover(&a, &act, &[alloc::vec![0], alloc::vec![1]], 256).unwrap().cover;
        let pulled = a.preimage_cover(&act.element_map(&[2]).unwrap()).unwrap();
        let inc = two.common_refinement(&pulled).unwrap().cover.split_components();
        let as_set = |c: &Cover| c.members().iter().cloned().collect::<BTreeSet<_>>();
        assert_eq!(as_set(&inc), as_set(&batch));
        assert_eq!(as_set(&batch).len(), batch.len());
    }

    #[test]
    fn product_action_factorises() {
        let a = two_arcs();
        // a rank-1 diagonal map acts coordinatewise with the same element, so the join factorises
        let act = ActionSpec::TorusMatrix(IntMatrix::diagonal(&[2, 2]));
        let it = iterate_cover(&product_boxes(&a, &a), &act, &[alloc::vec![0], alloc::vec![1]], 256).unwrap().cover;
        let circle = iterate_cover(&a, &ActionSpec::CircleTimes(2), &[alloc::vec![0], alloc::vec![1]], 256).unwrap().cover;
        let expect = product_boxes(&circle, &circle);
        let mut got: Vec<_> = it.members().to_vec();
        let mut want: Vec<_> = expect.members().to_vec();
        got.sort_by_key(format_key);
        want.sort_by_key(format_key);
        assert_eq!(got, want);
    }

    fn format_key(o: &OpenSet) -> Vec<Rational> {
        match o {
            OpenSet::Boxes(b) => b
                .boxes()
                .iter()
                .flat_map(|bx| bx.sides().iter().flat_map(|s| match s {
                    crate::cover::Side::Arc(a) => alloc::vec![*a.start(), *a.len()],
                    crate::cover::Side::Full => alloc::vec![int(-1)],
                }))
                .collect(),
            _ => Vec::new(),
        }
    }

    #[test]
    fn folner_boxes() {
        let f = FolnerSequence::cubes(2);
        assert_eq!(f.size(3), 9);
        assert_eq!(f.shell(3).len(), 5);
        assert!(f.set(2).iter().all(|g| f.set(3).contains(g)));
        let ratios: Vec<f64> = (1..6).map(|n| f.boundary_size(n) as f64 / f.size(n) as f64).collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0] || w[0] == 1.0));
        let r = FolnerSequence::rectangles(alloc::vec![1, 2]).unwrap();
        assert_eq!(r.size(3), 18);
        assert_eq!(r.shell(1), r.set(1));
    }

    #[test]
    fn doubling_growth_small() {
        let t = growth_table(&two_arcs(), &ActionSpec::CircleTimes(2), &GrowthConfig::new(5, 1)).unwrap();
        let s0: Vec<u64> = t.rows.iter().map(|r| r.s[0].to_u64().unwrap()).collect();
        assert_eq!(s0, alloc::vec![2, 4, 8, 16, 32]);
        assert!(t.rows.iter().all(|r| r.s_exact[0]));
        let members: Vec<u64> = t.rows.iter().map(|r| r.members.to_u64().unwrap()).collect();
        assert_eq!(members, alloc::vec![2, 8, 20, 48, 108]);
        assert!(stage_bound_check(&t, 2).pass);
        for r in &t.rows {
            assert!((r.ent[0] - core::f64::consts::LN_2).abs() < 1e-12);
            assert_eq!(r.betti.as_ref().unwrap()[0], 1);
        }
    }

    /// Stage `n` of the doubling cover, computed on the cells of the `1/(16·2^n)` grid:
    /// even cells are grid points, odd cells the open intervals between them. Every
    /// pulled-back arc endpoint is a grid point, so each cell lies inside or outside it.
    fn doubling_oracle(n: u32) -> usize {
        let u: i128 = 32 << (n - 1);
        let arcs = [(-u / 16, 9 * u / 16), (7 * u / 16, 17 * u / 16)];
        let inside = |y: i128, (lo, hi): (i128, i128)| [y - u, y, y + u].iter().any(|&z| lo < z && z < hi);
        let mut sets = BTreeSet::new();
        for word in 0..1u32 << n {
            let cells: Vec<bool> = (0..u)
                .map(|c| (0..n).all(|t| inside((c << t).rem_euclid(u), arcs[((word >> t) & 1) as usize])))
                .collect();
            if cells.iter().all(|&b| b) {
                sets.insert((0..u).collect::<Vec<_>>());
                continue;
            }
            let start = cells.iter().position(|&b| !b).unwrap() as i128;
            let mut run: Vec<i128> = Vec::new();
            for step in 1..=u {
                let c = (start + step) % u;
                if cells[c as usize] {
                    run.push(c);
                } else if !run.is_empty() {
                    run.sort();
                    sets.insert(core::mem::take(&mut run));
                }
            }
        }
        sets.len()
    }

    #[test]
    fn doubling_members_match_cell_oracle() {
        let t = growth_table(&two_arcs(), &ActionSpec::CircleTimes(2), &GrowthConfig::new(6, 0)).unwrap();
        for r in &t.rows {
            assert_eq!(r.members.to_usize().unwrap(), doubling_oracle(r.n), "stage {}", r.n);
        }
    }

    #[test]
    fn stage_bound_negative_control() {
        let mut t = growth_table(&two_arcs(), &ActionSpec::CircleTimes(2), &GrowthConfig::new(3, 0)).unwrap();
        assert!(stage_bound_check(&t, 2).pass);
        t.rows[2].s[0] = BigUint::from(9u32);
        assert!(!stage_bound_check(&t, 2).pass);
        let triv = growth_table(&Cover::trivial(Space::Circle), &ActionSpec::CircleTimes(3), &GrowthConfig::new(3, 0)).unwrap();
        assert!(stage_bound_check(&triv, 1).pass);
    }

    #[test]
    fn conjugate_system_has_identical_counts() {
        let c = rat(3, 10);
        let a = two_arcs();
        let b = shifted_two_arcs(&c);
        // h(x) = x + c conjugates x ↦ 2x to x ↦ 2x − c
        let f = GrowthConfig::new(5, 1);
        let t1 = growth_table(&a, &ActionSpec::CircleTimes(2), &f).unwrap();
        let t2 = growth_table(&b, &ActionSpec::CircleAffine { k: 2, shift: -c }, &f).unwrap();
        for (x, y) in t1.rows.iter().zip(&t2.rows) {
            assert_eq!((&x.members, &x.g, &x.s, x.dim), (&y.members, &y.g, &y.s, y.dim));
        }
    }

    #[test]
    fn generator_reports() {
        let r = generator_diagnostics(&two_arcs(), &ActionSpec::CircleTimes(2), 8, &rat(1, 64), None).unwrap();
        assert!(r.nonincreasing && r.shrinking);
        assert!(r.first_below.is_some_and(|n| n <= 8));
        let t = generator_diagnostics(&Cover::trivial(Space::Circle), &ActionSpec::CircleTimes(2), 4, &rat(1, 64), None).unwrap();
        assert!(!t.shrinking);
        assert!(t.diameters.iter().all(|d| d.hi == rat(1, 2)));
        let small: Vec<(Rational, Rational)> = (0..10).map(|i| (rat(i, 10), rat(i, 10) + rat(3, 20))).collect();
        let fine = Cover::circle_arcs(&small).unwrap();
        let g = generator_diagnostics(&fine, &ActionSpec::CircleTimes(2), 2, &rat(1, 64), Some(&rat(1, 4))).unwrap();
        assert_eq!(g.generator_by_constant, Some(true));
    }

    #[test]
    fn shift_rows() {
        let t = shift_growth_table(&[3, 3], 1, &[1, 2, 5], 1, &ControllingSequence::Standard);
        assert_eq!(t.rows[2].g[0], BigUint::from(243u32));
        assert_eq!(t.rows[1].g[1], BigUint::from(9u32 + 18));
        assert!(t.rows.iter().all(|r| r.dim_growth == 1.0));
        assert!((t.rows[2].ent[0] - libm::log(3.0)).abs() < 1e-12);
    }

    #[test]
    fn cat_map_promotes_to_grid() {
        let side = rat(3, 5);
        let mut members = Vec::new();
        for x in [int(0), rat(1, 2)] {
            for y in [int(0), rat(1, 2)] {
                let b = TorusBox::from_arcs(alloc::vec![Arc::new(x, side).unwrap(), Arc::new(y, side).unwrap()]).unwrap();
                members.push(OpenSet::Boxes(BoxUnion::single(b)));
            }
        }
        let a = Cover::new(Space::torus(2).unwrap(), members).unwrap();
        let m = IntMatrix::new(2, alloc::vec![1, 1, 1, 2]).unwrap();
        let it = iterate_cover(&a, &ActionSpec::TorusMatrix(m), &[alloc::vec![0], alloc::vec![1]], 32).unwrap();
        assert_eq!(it.promoted, Some(32));
        assert!(matches!(it.cover.members()[0], OpenSet::Grid(_)));
    }

    #[test]
    fn invalid_actions() {
        assert!(ActionSpec::CircleTimes(1).validate().is_err());
        assert_eq!(ActionSpec::TorusMatrix(IntMatrix::new(2, alloc::vec![1, 2, 2, 4]).unwrap()).validate(), Err(Error::SingularMatrix));
        assert_eq!(iterate_cover(&two_arcs(), &ActionSpec::TorusMatrix(IntMatrix::identity(2)), &[alloc::vec![0]], 8).unwrap_err(), Error::ActionSpaceMismatch);
    }
}
