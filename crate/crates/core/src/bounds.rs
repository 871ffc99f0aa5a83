//! Space-form ball volumes and the volume-ratio bounds built on them.

use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Relative tolerance of the volume quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Absolute tolerance of the e-constant bisection.
pub const BISECTION_TOL: f64 = 1e-12;

/// Diameter bound applied when `λ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MyersConvention {
    /// `π / √λ` for `Rc ≥ (d − 1) λ g`.
    #[default]
    Standard,
    /// `√(π² / ((d − 1) λ))`.
    Rescaled,
}

impl MyersConvention {
    pub fn radius(self, lambda: f64, d: u32) -> Option<f64> {
        if lambda <= 0.0 {
            return None;
        }
        Some(match self {
            MyersConvention::Standard => PI / libm::sqrt(lambda),
            MyersConvention::Rescaled => libm::sqrt(PI * PI / ((d as f64 - 1.0) * lambda)),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceFormParams {
    pub lambda: f64,
    pub d: u32,
    pub diameter: f64,
    pub epsilon: f64,
    pub convention: MyersConvention,
}

impl SpaceFormParams {
    pub fn new(lambda: f64, d: u32, diameter: f64, epsilon: f64) -> Result<Self> {
        let p = SpaceFormParams { lambda, d, diameter, epsilon, convention: MyersConvention::Standard };
        p.validate()?;
        Ok(p)
    }

    pub fn with_convention(mut self, c: MyersConvention) -> Self {
        self.convention = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::OutOfRange("dimension must be at least 2"));
        }
        if !(self.diameter > 0.0 && self.diameter.is_finite()) {
            return Err(Error::OutOfRange("diameter must be positive"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::OutOfRange("epsilon must be positive"));
        }
        if !self.lambda.is_finite() {
            return Err(Error::OutOfRange("lambda must be finite"));
        }
        Ok(())
    }

    /// The diameter after the Myers clamp, and whether the clamp changed it.
    pub fn clamped_diameter(&self) -> (f64, bool) {
        match self.convention.radius(self.lambda, self.d) {
            Some(r) if self.diameter > r => (r, true),
            _ => (self.diameter, false),
        }
    }
}

fn sn(lambda: f64, t: f64) -> f64 {
    if lambda > 0.0 {
        let s = libm::sqrt(lambda);
        libm::sin(s * t) / s
    } else if lambda < 0.0 {
        let s = libm::sqrt(-lambda);
        libm::sinh(s * t) / s
    } else {
        t
    }
}

/// Surface measure of the unit `(d − 1)`-sphere.
pub fn unit_sphere_area(d: u32) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * libm::pow(PI, h) / libm::tgamma(h)
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adapt(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || libm::fabs(delta) <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adapt(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) + adapt(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature with a relative tolerance.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(&f, a, fa, b, fb);
    // a coarse pass fixes the absolute scale of the tolerance
    let scale = libm::fabs(whole).max(f64::MIN_POSITIVE);
    adapt(&f, a, fa, b, fb, m, fm, whole, rel_tol * scale, 48)
}

/// `ω_{d−1} ∫_0^R sn_λ(t)^{d−1} dt`.
pub fn spaceform_ball_volume(lambda: f64, d: u32, r: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::OutOfRange("dimension must be at least 2"));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::OutOfRange("radius must be positive"));
    }
    if lambda > 0.0 && r > PI / libm::sqrt(lambda) * (1.0 + 1e-15) {
        return Err(Error::RadiusBeyondDiameter);
    }
    let e = (d - 1) as i32;
    let v = integrate(|t| libm::pow(sn(lambda, t), e as f64), 0.0, r, QUADRATURE_TOL);
    Ok(unit_sphere_area(d) * v)
}

/// Closed-form volumes for `d = 2, 3`.
pub fn spaceform_ball_volume_closed(lambda: f64, d: u32, r: f64) -> Option<f64> {
    let s = libm::sqrt(libm::fabs(lambda));
    match (d, lambda.partial_cmp(&0.0)?) {
        (2, core::cmp::Ordering::Equal) => Some(PI * r * r),
        (2, core::cmp::Ordering::Greater) => Some(2.0 * PI * (1.0 - libm::cos(s * r)) / lambda),
        (2, core::cmp::Ordering::Less) => Some(2.0 * PI * (libm::cosh(s * r) - 1.0) / -lambda),
        (3, core::cmp::Ordering::Equal) => Some(4.0 * PI * r * r * r / 3.0),
        (3, core::cmp::Ordering::Greater) => Some(4.0 * PI / lambda * (r / 2.0 - libm::sin(2.0 * s * r) / (4.0 * s))),
        (3, core::cmp::Ordering::Less) => Some(4.0 * PI / -lambda * (libm::sinh(2.0 * s * r) / (4.0 * s) - r / 2.0)),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta {
    pub value: f64,
    pub diameter_used: f64,
    pub clamped: bool,
}

/// `Θ(λ, D, ε) = ‖B_D‖_λ / ‖B_{ε/4}‖_λ`, with `D` clamped for `λ > 0`.
pub fn theta(p: &SpaceFormParams) -> Result<Theta> {
    p.validate()?;
    let (dm, clamped) = p.clamped_diameter();
    let r = p.epsilon / 4.0;
    if r > dm {
        return Err(Error::EpsilonExceedsDiameter);
    }
    let value = spaceform_ball_volume(p.lambda, p.d, dm)? / spaceform_ball_volume(p.lambda, p.d, r)?;
    Ok(Theta { value: value.max(1.0), diameter_used: dm, clamped })
}

/// Upper bound on the size of a minimal generator when `ε` is an e-constant.
pub fn generator_cardinality_bound(p: &SpaceFormParams) -> Result<f64> {
    Ok(theta(p)?.value)
}

/// Largest `ε ≤ 4D` with `‖B_{ε/4}‖_λ ≤ ‖B_D‖_λ / exp(ent0)`.
pub fn e_constant_bound(lambda: f64, d: u32, diameter: f64, ent0: f64, convention: MyersConvention) -> Result<f64> {
    if ent0.is_nan() || ent0 < 0.0 {
        return Err(Error::OutOfRange("ent0 must be nonnegative"));
    }
    let p = SpaceFormParams { lambda, d, diameter, epsilon: 1.0, convention };
    p.validate()?;
    let (dm, _) = p.clamped_diameter();
    let target = spaceform_ball_volume(lambda, d, dm)? / libm::exp(ent0);
    let fits = |eps: f64| -> Result<bool> { Ok(spaceform_ball_volume(lambda, d, eps / 4.0)? <= target) };
    let (mut lo, mut hi) = (0.0, 4.0 * dm);
    if fits(hi)? {
        return Ok(hi);
    }
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if fits(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Relative slack allowed in `exp(ent0) ≤ size` to absorb rounding in `log`/`exp`.
pub const SANDWICH_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichReport {
    pub lower: f64,
    pub generator_size: u64,
    pub upper: Option<f64>,
    pub lower_ok: bool,
    pub upper_ok: Option<bool>,
    /// `size − exp(ent0)`.
    pub lower_slack: f64,
    /// `Θ − size`.
    pub upper_slack: Option<f64>,
    pub pass: bool,
}

/// `exp(ent0) ≤ |generator| ≤ Θ`; the upper half needs space-form parameters.
pub fn sandwich_check(ent0: f64, generator_size: u64, params: Option<&SpaceFormParams>) -> Result<SandwichReport> {
    let lower = libm::exp(ent0);
    let size = generator_size as f64;
    let lower_ok = lower <= size * (1.0 + SANDWICH_REL_TOL);
    let upper = params.map(theta).transpose()?.map(|t| t.value);
    let upper_ok = upper.map(|u| size <= u * (1.0 + SANDWICH_REL_TOL));
    Ok(SandwichReport {
        lower,
        generator_size,
        upper,
        lower_ok,
        upper_ok,
        lower_slack: size - lower,
        upper_slack: upper.map(|u| u - size),
        pass: lower_ok && upper_ok.unwrap_or(true),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub params: SpaceFormParams,
    pub ent0: f64,
    pub theta: f64,
    pub diameter_used: f64,
    pub clamped: bool,
    pub covering_bound: f64,
    pub entropy_lower: f64,
    pub e_constant: f64,
}

pub fn bound_report(p: &SpaceFormParams, ent0: f64) -> Result<BoundReport> {
    let t = theta(p)?;
    Ok(BoundReport {
        params: *p,
        ent0,
        theta: t.value,
        diameter_used: t.diameter_used,
        clamped: t.clamped,
        covering_bound: t.value,
        entropy_lower: libm::exp(ent0),
        e_constant: e_constant_bound(p.lambda, p.d, p.diameter, ent0, p.convention)?,
    })
}
