//! Report structures and their JSON/CSV renderings.
//!
//! Rationals are written as `"p/q"` strings and big integers as decimal strings;
//! reals carry 15 significant digits.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use nervekit_core::bounds::{BoundReport, MyersConvention, SandwichReport};
use nervekit_core::dynamics::{GrowthRow, GrowthTable};
use nervekit_core::homology::{alternating_sum, BettiVector, Coefficients};
use nervekit_core::irreducible::ReductionTrace;
use nervekit_core::nerve::Nerve;
use nervekit_core::rational::{format_rational, Rational};
use nervekit_core::realization::{PartitionOfUnity, VertexMetric};
use nervekit_core::space::Point;
use num_bigint::BigUint;
use serde::Serialize;

use crate::files::CoverFile;

/// Decimal text with 15 significant digits (exponent form outside `1e-5..1e15`).
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&e) {
        return format!("{x:.14e}");
    }
    let s = format!("{:.*}", (14 - e).max(0) as usize, x);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A real rounded to 15 significant digits for JSON (`null` for NaN).
pub fn real(x: f64) -> Option<f64> {
    if x.is_finite() {
        fmt_real(x).parse().ok()
    } else {
        None
    }
}

fn point_text(p: &Point) -> Vec<String> {
    match p {
        Point::Abstract(i) => vec![i.to_string()],
        _ => p.angles().unwrap_or_default().iter().map(format_rational).collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct NerveJson {
    pub vertices: usize,
    pub counts: Vec<u64>,
    pub dim: usize,
    pub truncated: bool,
    pub uncertified_cover: bool,
    /// Simplices of dimension 1 and up, keyed by dimension.
    pub simplices: BTreeMap<String, Vec<Vec<u32>>>,
    pub uncertified: Vec<Vec<u32>>,
}

impl NerveJson {
    /// Counts are padded with zeros up to `max_dim`.
    pub fn new(n: &Nerve, max_dim: usize) -> Self {
        let mut counts = n.counts();
        if counts.len() <= max_dim {
            counts.resize(max_dim + 1, 0);
        }
        let simplices = (1..=n.dim()).map(|k| (k.to_string(), n.simplices(k).to_vec())).collect();
        NerveJson {
            vertices: n.vertex_count(),
            counts,
            dim: n.full_dim(),
            truncated: n.truncated(),
            uncertified_cover: n.uncertified_cover(),
            simplices,
            uncertified: n.uncertified().to_vec(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct HomologyJson {
    pub coefficients: &'static str,
    pub counts: Vec<u64>,
    pub betti: Vec<u64>,
    pub euler_from_counts: i64,
    pub euler_from_betti: i64,
    pub truncated: bool,
}

impl HomologyJson {
    pub fn new(n: &Nerve, mode: Coefficients, b: &BettiVector) -> Self {
        HomologyJson {
            coefficients: match mode {
                Coefficients::Rational => "rational",
                Coefficients::Mod2 => "mod2",
            },
            counts: n.counts(),
            betti: b.betti.clone(),
            euler_from_counts: alternating_sum(&n.counts()),
            euler_from_betti: alternating_sum(&b.betti),
            truncated: n.truncated(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReduceJson {
    pub removed: Vec<usize>,
    pub kept: Vec<usize>,
    pub private_points: Vec<Option<Vec<String>>>,
    pub cover: CoverFile,
}

impl ReduceJson {
    pub fn new(t: &ReductionTrace) -> Result<Self> {
        Ok(ReduceJson {
            removed: t.removed.clone(),
            kept: t.kept.clone(),
            private_points: t.private_points.iter().map(|p| p.as_ref().map(point_text)).collect(),
            cover: CoverFile::from_cover(&t.cover)?,
        })
    }
}

fn big(x: &BigUint) -> String {
    x.to_string()
}

fn diameter_parts(r: &GrowthRow) -> (String, String) {
    match &r.max_diameter {
        Some(d) => (d.hi.numer().to_string(), d.hi.denom().to_string()),
        None => (String::new(), String::new()),
    }
}

/// Growth table as CSV; a trailing `#` line marks truncation at the member cap.
pub fn write_growth_csv(t: &GrowthTable, out: &mut dyn Write) -> Result<()> {
    let k = t.k;
    let mut w = csv::WriterBuilder::new().flexible(false).from_writer(Vec::new());
    let mut header: Vec<String> = vec!["n".into(), "sizeF".into(), "members".into()];
    header.extend((0..=k).map(|i| format!("g{i}")));
    header.extend((0..=k).map(|i| format!("s{i}")));
    header.extend(["s_exact".into(), "dim".into(), "Dim".into()]);
    header.extend((0..=k).map(|i| format!("b{i}")));
    header.extend(["chi".into(), "maxdiam_num".into(), "maxdiam_den".into()]);
    header.extend((0..=k).map(|i| format!("ent{i}")));
    header.push("dimgrowth".into());
    w.write_record(&header)?;
    for r in &t.rows {
        let mut rec: Vec<String> = vec![r.n.to_string(), r.size_f.to_string(), big(&r.members)];
        rec.extend(r.g.iter().map(big));
        rec.extend(r.s.iter().map(big));
        rec.push(r.s_exact.iter().all(|&e| e).to_string());
        rec.push(r.dim.map(|d| d.to_string()).unwrap_or_default());
        rec.push(r.dim_estimate.to_string());
        match &r.betti {
            Some(b) => rec.extend(b.iter().map(u64::to_string)),
            None => rec.extend((0..=k).map(|_| String::new())),
        }
        rec.push(r.chi.as_ref().map(|c| c.to_string()).unwrap_or_default());
        let (num, den) = diameter_parts(r);
        rec.extend([num, den]);
        rec.extend(r.ent.iter().map(|&e| fmt_real(e)));
        rec.push(fmt_real(r.dim_growth));
        w.write_record(&rec)?;
    }
    out.write_all(&w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)?;
    if t.truncated {
        writeln!(out, "# truncated: member cap reached after stage {}", t.rows.len())?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct GrowthRowJson {
    pub n: u32,
    pub size_f: u64,
    pub members: String,
    pub g: Vec<String>,
    pub s: Vec<String>,
    pub s_exact: Vec<bool>,
    pub dim: Option<u64>,
    pub dim_estimate: u64,
    pub dim_exact: bool,
    pub betti: Option<Vec<u64>>,
    pub chi: Option<String>,
    pub max_diameter: Option<[String; 2]>,
    pub certified: bool,
    pub ent: Vec<Option<f64>>,
    pub dim_growth: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct GrowthJson {
    pub k: usize,
    pub truncated: bool,
    pub grid_resolution: Option<u32>,
    pub rows: Vec<GrowthRowJson>,
}

impl GrowthJson {
    pub fn new(t: &GrowthTable) -> Self {
        let rows = t
            .rows
            .iter()
            .map(|r| GrowthRowJson {
                n: r.n,
                size_f: r.size_f,
                members: big(&r.members),
                g: r.g.iter().map(big).collect(),
                s: r.s.iter().map(big).collect(),
                s_exact: r.s_exact.clone(),
                dim: r.dim,
                dim_estimate: r.dim_estimate,
                dim_exact: r.dim_exact,
                betti: r.betti.clone(),
                chi: r.chi.as_ref().map(|c| c.to_string()),
                max_diameter: r.max_diameter.as_ref().map(|d| [format_rational(&d.lo), format_rational(&d.hi)]),
                certified: r.certified,
                ent: r.ent.iter().map(|&e| real(e)).collect(),
                dim_growth: real(r.dim_growth),
            })
            .collect();
        GrowthJson { k: t.k, truncated: t.truncated, grid_resolution: t.promoted, rows }
    }
}

#[derive(Debug, Serialize)]
pub struct SandwichJson {
    pub lower: Option<f64>,
    pub generator_size: u64,
    pub upper: Option<f64>,
    pub lower_ok: bool,
    pub upper_ok: Option<bool>,
    pub pass: bool,
}

impl SandwichJson {
    pub fn new(s: &SandwichReport) -> Self {
        SandwichJson {
            lower: real(s.lower),
            generator_size: s.generator_size,
            upper: s.upper.and_then(real),
            lower_ok: s.lower_ok,
            upper_ok: s.upper_ok,
            pass: s.pass,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundsJson {
    pub lambda: Option<f64>,
    pub dim: u32,
    pub diameter: Option<f64>,
    pub epsilon: Option<f64>,
    pub ent0: Option<f64>,
    pub convention: &'static str,
    pub diameter_used: Option<f64>,
    pub clamped: bool,
    pub theta: Option<f64>,
    pub covering_bound: Option<f64>,
    pub entropy_lower: Option<f64>,
    pub e_constant: Option<f64>,
    pub sandwich: Option<SandwichJson>,
}

impl BoundsJson {
    pub fn new(r: &BoundReport, sandwich: Option<&SandwichReport>) -> Self {
        BoundsJson {
            lambda: real(r.params.lambda),
            dim: r.params.d,
            diameter: real(r.params.diameter),
            epsilon: real(r.params.epsilon),
            ent0: real(r.ent0),
            convention: match r.params.convention {
                MyersConvention::Standard => "standard",
                MyersConvention::Rescaled => "rescaled",
            },
            diameter_used: real(r.diameter_used),
            clamped: r.clamped,
            theta: real(r.theta),
            covering_bound: real(r.covering_bound),
            entropy_lower: real(r.entropy_lower),
            e_constant: real(r.e_constant),
            sandwich: sandwich.map(SandwichJson::new),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WeightJson {
    pub member: u32,
    pub weight: String,
}

#[derive(Debug, Serialize)]
pub struct SampleJson {
    pub point: Vec<String>,
    pub coordinates: Vec<WeightJson>,
}

#[derive(Debug, Serialize)]
pub struct EdgeJson {
    pub u: u32,
    pub v: u32,
    pub length: String,
}

#[derive(Debug, Serialize)]
pub struct RealizeJson {
    pub representatives: Vec<Vec<String>>,
    pub edges: Vec<EdgeJson>,
    pub connected: bool,
    pub gh_upper_bound: Option<String>,
    pub gh_upper_bound_real: Option<f64>,
    pub samples: Vec<SampleJson>,
}

impl RealizeJson {
    pub fn new(pou: &PartitionOfUnity, vm: &VertexMetric, gh: Option<&Rational>) -> Self {
        let samples = pou
            .samples()
            .iter()
            .enumerate()
            .map(|(s, p)| SampleJson {
                point: point_text(p),
                coordinates: pou.weights(s).iter().map(|(i, w)| WeightJson { member: *i, weight: format_rational(w) }).collect(),
            })
            .collect();
        RealizeJson {
            representatives: vm.representatives().iter().map(point_text).collect(),
            edges: vm.edges().iter().map(|(u, v, l)| EdgeJson { u: *u, v: *v, length: format_rational(l) }).collect(),
            connected: vm.is_connected(),
            gh_upper_bound: gh.map(format_rational),
            gh_upper_bound_real: gh.and_then(|g| real(nervekit_core::rational::to_f64(g))),
            samples,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nervekit_core::dynamics::{growth_table, ActionSpec, GrowthConfig};
    use nervekit_core::scenarios::doubling_cover;

    #[test]
    fn reals() {
        assert_eq!(fmt_real(std::f64::consts::LN_2), "0.693147180559945");
        assert_eq!(fmt_real(100.0), "100");
        assert_eq!(fmt_real(-2.5), "-2.5");
        assert_eq!(fmt_real(1e20), "1.00000000000000e20");
        assert_eq!(fmt_real(f64::NAN), "nan");
        assert_eq!(real(f64::NAN), None);
    }

    #[test]
    fn growth_csv_shape() {
        let t = growth_table(&doubling_cover(), &ActionSpec::CircleTimes(2), &GrowthConfig::new(3, 1)).unwrap();
        let mut buf = Vec::new();
        write_growth_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(
            lines[0],
            "n,sizeF,members,g0,g1,s0,s1,s_exact,dim,Dim,b0,b1,chi,maxdiam_num,maxdiam_den,ent0,ent1,dimgrowth"
        );
        assert!(lines[1].starts_with("1,1,2,2,3,2,3,true,1,1,1,0,1,1,2,0.693147180559945,"));
    }
}
