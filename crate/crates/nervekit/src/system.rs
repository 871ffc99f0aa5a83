//! Parsers for `--system`, `--control` and `--folner` arguments.

use anyhow::{bail, Context, Result};
use nervekit_core::dynamics::{ActionSpec, ControllingSequence, FolnerSequence};
use nervekit_core::matrix::IntMatrix;
use nervekit_core::rational::parse_rational;
use nervekit_core::scenarios::{catmap_matrix, shift_profile};

fn ints(s: &str) -> Result<Vec<i128>> {
    s.split(',').map(|x| x.trim().parse::<i128>().with_context(|| format!("invalid integer {x:?}"))).collect()
}

/// `doubling:K`, `affine:K:SHIFT`, `matrix:a,b;c,d`, `diag:a,b`, `catmap`,
/// `product:S1+S2+…` and `shift:DELTA0:P`.
pub fn parse_system(s: &str) -> Result<ActionSpec> {
    let (head, rest) = s.split_once(':').unwrap_or((s, ""));
    let spec = match head {
        "doubling" | "times" => ActionSpec::CircleTimes(rest.parse().with_context(|| format!("invalid multiplier in {s:?}"))?),
        "affine" => {
            let (k, shift) = rest.split_once(':').context("affine:K:SHIFT")?;
            ActionSpec::CircleAffine { k: k.parse().context("invalid multiplier")?, shift: parse_rational(shift)? }
        }
        "matrix" => {
            let rows: Vec<Vec<i128>> = rest.split(';').map(ints).collect::<Result<_>>()?;
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                bail!("matrix must be square: {s:?}");
            }
            ActionSpec::TorusMatrix(IntMatrix::new(n, rows.concat())?)
        }
        "diag" => ActionSpec::TorusMatrix(IntMatrix::diagonal(&ints(rest)?)),
        "catmap" => ActionSpec::TorusMatrix(catmap_matrix()),
        "product" => ActionSpec::Product(rest.split('+').map(parse_system).collect::<Result<_>>()?),
        "shift" => {
            let (d, p) = rest.split_once(':').context("shift:DELTA0:P")?;
            let (d, p): (u64, u64) = (d.parse().context("invalid delta0")?, p.parse().context("invalid p")?);
            ActionSpec::ShiftTruncation { profile: shift_profile(d, p)?, p: p as usize }
        }
        _ => bail!("unknown system {s:?}"),
    };
    spec.validate().with_context(|| format!("invalid system {s:?}"))?;
    Ok(spec)
}

/// `standard`, `log` or `custom:c1,c2,…`.
pub fn parse_control(s: &str) -> Result<ControllingSequence> {
    let c = match s.split_once(':') {
        None if s == "standard" => ControllingSequence::Standard,
        None if s == "log" || s == "logarithmic" => ControllingSequence::Logarithmic,
        Some(("custom", v)) => ControllingSequence::Custom(
            v.split(',').map(|x| x.trim().parse::<f64>().with_context(|| format!("invalid value {x:?}"))).collect::<Result<_>>()?,
        ),
        _ => bail!("unknown control {s:?}"),
    };
    c.validate()?;
    Ok(c)
}

/// `cube` or `rect:a1,a2,…`.
pub fn parse_folner(s: &str, rank: usize) -> Result<FolnerSequence> {
    match s.split_once(':') {
        None if s == "cube" => Ok(FolnerSequence::cubes(rank)),
        Some(("rect", v)) => {
            let a = v.split(',').map(|x| x.trim().parse::<u32>().with_context(|| format!("invalid side {x:?}"))).collect::<Result<Vec<_>>>()?;
            Ok(FolnerSequence::rectangles(a)?)
        }
        _ => bail!("unknown Følner sequence {s:?}"),
    }
}
