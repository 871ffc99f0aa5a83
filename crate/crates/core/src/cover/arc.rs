use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{frac, int, rat, Rational};

/// Open arc `{start + t : 0 < t < len}` of `R/Z`.
///
/// `len == 1` is the circle minus the point `start`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    start: Rational,
    len: Rational,
}

impl Arc {
    pub fn new(start: Rational, len: Rational) -> Result<Self> {
        if len <= int(0) || len > int(1) {
            return Err(Error::InvalidSet(alloc::format!("arc length {len} outside (0,1]")));
        }
        Ok(Arc { start: frac(&start), len })
    }

    /// The open arc from `a` to `b` going in the positive direction, with `0 < b - a <= 1`.
    pub fn between(a: Rational, b: Rational) -> Result<Self> {
        let len = b - a;
        Self::new(a, len)
    }

    pub fn start(&self) -> &Rational {
        &self.start
    }

    pub fn len(&self) -> &Rational {
        &self.len
    }

    /// Lifted right endpoint, in `(0, 2)`.
    pub fn end(&self) -> Rational {
        self.start + self.len
    }

    pub fn midpoint(&self) -> Rational {
        frac(&(self.start + self.len / int(2)))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let t = frac(&(x - self.start));
        t > int(0) && t < self.len
    }

    /// Distance from `x` to the complement of the arc (0 outside).
    pub fn depth(&self, x: &Rational) -> Rational {
        let t = frac(&(x - self.start));
        if t.is_zero() || t >= self.len {
            return int(0);
        }
        let other = self.len - t;
        if t < other {
            t
        } else {
            other
        }
    }

    pub fn diameter(&self) -> Rational {
        let half = rat(1, 2);
        if self.len < half {
            self.len
        } else {
            half
        }
    }

    pub fn intersect(&self, other: &Arc) -> Vec<Arc> {
        let mut out = Vec::new();
        let (a0, a1) = (self.start, self.end());
        for m in -1..=1i128 {
            let b0 = other.start + int(m);
            let b1 = b0 + other.len;
            let lo = if a0 > b0 { a0 } else { b0 };
            let hi = if a1 < b1 { a1 } else { b1 };
            if lo < hi {
                out.push(Arc { start: frac(&lo), len: hi - lo });
            }
        }
        out
    }

    /// Pieces of `self ∩ {x : k x + shift ∈ target}`, pairwise disjoint.
    pub fn intersect_preimage(&self, k: i128, shift: &Rational, target: &Arc) -> Vec<Arc> {
        pieces_in_window(&self.start, &self.len, k, shift, target)
    }
}

/// Solutions of `k x + shift ∈ target` lying in the lifted window `(a, a + l)`.
fn pieces_in_window(a: &Rational, l: &Rational, k: i128, shift: &Rational, target: &Arc) -> Vec<Arc> {
    assert!(k != 0, "multiplier must be nonzero");
    // Rewrite as q x ∈ (s, s + len) mod 1 with q > 0.
    let (q, s) = if k > 0 {
        (k, target.start() - shift)
    } else {
        (-k, shift - target.start() - target.len())
    };
    let qr = int(q);
    let len = target.len();
    let hi_window = a + l;
    let jlo = (qr * a - s - len).floor().to_integer();
    let jhi = (qr * hi_window - s).ceil().to_integer();
    let mut out = Vec::new();
    let mut j = jlo;
    while j <= jhi {
        let p0 = (s + int(j)) / qr;
        let p1 = p0 + len / qr;
        let lo = if *a > p0 { *a } else { p0 };
        let hi = if hi_window < p1 { hi_window } else { p1 };
        if lo < hi {
            out.push(Arc { start: frac(&lo), len: hi - lo });
        }
        j += 1;
    }
    out
}

/// A finite union of open arcs, normalised to disjoint maximal arcs sorted by start,
/// or the whole circle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcUnion {
    arcs: Vec<Arc>,
    full: bool,
}

impl ArcUnion {
    pub fn full() -> Self {
        ArcUnion { arcs: Vec::new(), full: true }
    }

    pub fn empty() -> Self {
        ArcUnion { arcs: Vec::new(), full: false }
    }

    pub fn single(arc: Arc) -> Self {
        ArcUnion { arcs: alloc::vec![arc], full: false }
    }

    pub fn from_arcs(arcs: Vec<Arc>) -> Self {
        normalize(arcs)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn is_empty(&self) -> bool {
        !self.full && self.arcs.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.full || self.arcs.iter().any(|a| a.contains(x))
    }

    /// Distance from `x` to the complement.
    pub fn depth(&self, x: &Rational) -> Rational {
        if self.full {
            return rat(1, 2);
        }
        self.arcs.iter().map(|a| a.depth(x)).max().unwrap_or_else(|| int(0))
    }

    pub fn intersect(&self, other: &ArcUnion) -> ArcUnion {
        if self.full {
            return other.clone();
        }
        if other.full {
            return self.clone();
        }
        let mut out = Vec::new();
        for a in &self.arcs {
            for b in &other.arcs {
                out.extend(a.intersect(b));
            }
        }
        normalize(out)
    }

    pub fn union(&self, other: &ArcUnion) -> ArcUnion {
        if self.full || other.full {
            return ArcUnion::full();
        }
        let mut all = self.arcs.clone();
        all.extend(other.arcs.iter().cloned());
        normalize(all)
    }

    /// Preimage under `x ↦ k x + shift`.
    pub fn preimage(&self, k: i128, shift: &Rational) -> ArcUnion {
        ArcUnion::full().intersect_preimage(k, shift, self)
    }

    /// `self ∩ {x : k x + shift ∈ target}`.
    pub fn intersect_preimage(&self, k: i128, shift: &Rational, target: &ArcUnion) -> ArcUnion {
        if target.full {
            return self.clone();
        }
        let mut out = Vec::new();
        if self.full {
            for t in &target.arcs {
                // Use a window starting at a point that maps onto the (excluded) start of t.
                let q = k.abs();
                let s = if k > 0 { t.start() - shift } else { shift - t.start() - t.len() };
                let c = frac(&(s / int(q)));
                out.extend(pieces_in_window(&c, &int(1), k, shift, t));
            }
        } else {
            for a in &self.arcs {
                for t in &target.arcs {
                    out.extend(a.intersect_preimage(k, shift, t));
                }
            }
        }
        normalize(out)
    }

    /// Connected components.
    pub fn components(&self) -> Vec<ArcUnion> {
        if self.full {
            return alloc::vec![self.clone()];
        }
        self.arcs.iter().cloned().map(ArcUnion::single).collect()
    }

    pub fn diameter(&self) -> Rational {
        if self.full {
            return rat(1, 2);
        }
        arcs_diameter(&self.arcs)
    }

    /// Midpoint of the longest arc (lowest start on ties); 0 for the full circle.
    pub fn center(&self) -> Rational {
        let mut best: Option<&Arc> = None;
        for a in &self.arcs {
            if best.is_none_or(|b| a.len > b.len) {
                best = Some(a);
            }
        }
        best.map(|a| a.midpoint()).unwrap_or_else(|| int(0))
    }
}

fn normalize(mut arcs: Vec<Arc>) -> ArcUnion {
    if arcs.is_empty() {
        return ArcUnion::empty();
    }
    arcs.sort();
    let mut merged: Vec<(Rational, Rational)> = Vec::new();
    for a in arcs {
        let (s, e) = (a.start, a.end());
        match merged.last_mut() {
            Some(last) if s < last.1 => {
                if e > last.1 {
                    last.1 = e;
                }
            }
            _ => merged.push((s, e)),
        }
    }
    // Wrap-around: the last interval may reach past the first one's start + 1.
    while merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        if last.1 > first.0 + int(1) {
            let shifted_end = first.1 + int(1);
            let new_end = if shifted_end > last.1 { shifted_end } else { last.1 };
            merged.remove(0);
            merged.last_mut().unwrap().1 = new_end;
        } else {
            break;
        }
    }
    let one = Rational::one();
    let mut out = Vec::with_capacity(merged.len());
    for (s, e) in merged {
        let len = e - s;
        if len > one {
            return ArcUnion::full();
        }
        out.push(Arc { start: s, len });
    }
    out.sort();
    ArcUnion { arcs: out, full: false }
}

/// Largest circle distance `min(frac t, 1 - frac t)` over closed `t`-interval `[lo, hi]`.
fn max_circle_gap(lo: &Rational, hi: &Rational) -> Rational {
    let half = rat(1, 2);
    let m = (lo - half).ceil();
    if m + half <= *hi {
        return half;
    }
    let g = |t: &Rational| {
        let f = frac(t);
        let o = int(1) - f;
        if f < o {
            f
        } else {
            o
        }
    };
    let (a, b) = (g(lo), g(hi));
    if a > b {
        a
    } else {
        b
    }
}

/// Supremum distance between a point of `x` and a point of `y`.
pub(crate) fn arc_pair_diameter(x: &Arc, y: &Arc) -> Rational {
    if x == y {
        return x.diameter();
    }
    let lo = x.start() - y.end();
    let hi = x.end() - y.start();
    max_circle_gap(&lo, &hi)
}

/// Diameter of a union of arcs in the circle metric.
pub(crate) fn arcs_diameter(arcs: &[Arc]) -> Rational {
    let half = rat(1, 2);
    let mut best = int(0);
    for (i, x) in arcs.iter().enumerate() {
        for y in &arcs[i..] {
            let d = arc_pair_diameter(x, y);
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
