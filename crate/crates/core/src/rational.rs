//! Exact rational helpers shared by every module.

use alloc::format;
use alloc::string::{String, ToString};
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn rat(num: i128, den: i128) -> Rational {
    Ratio::new(num, den)
}

pub fn int(n: i128) -> Rational {
    Ratio::from_integer(n)
}

/// Fractional part, always in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// Distance on `R/Z` between two reals (taken mod 1).
pub fn circle_distance(a: &Rational, b: &Rational) -> Rational {
    let t = frac(&(a - b));
    let s = int(1) - t;
    if t < s {
        t
    } else {
        s
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => s.parse::<i128>().map(int).map_err(|_| bad()),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn frac_and_circle_distance() {
        assert_eq!(frac(&rat(-1, 8)), rat(7, 8));
        assert_eq!(circle_distance(&rat(1, 4), &rat(3, 4)), rat(1, 2));
        assert_eq!(circle_distance(&rat(1, 16), &rat(15, 16)), rat(1, 8));
    }
}
