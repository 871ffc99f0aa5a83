//! Acceptance checks: one PASS/FAIL line per criterion; exits non-zero on any failure.

use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use nervekit::cli::{run, skeleton_gh, Cli};
use nervekit::output::fmt_real;
use nervekit_core::bounds::{
    e_constant_bound, sandwich_check, spaceform_ball_volume, spaceform_ball_volume_closed, theta, MyersConvention, SpaceFormParams,
};
use nervekit_core::cover::{Cover, OpenSet, PointSet};
use nervekit_core::dynamics::{growth_table, iterate_cover, stage_bound_check, ActionSpec, FolnerSequence, GrowthConfig};
use nervekit_core::homology::{alternating_sum, betti_numbers, Coefficients};
use nervekit_core::irreducible::s_k_estimate;
use nervekit_core::nerve::{build_nerve, complexity_profile, Nerve};
use nervekit_core::rational::{rat, Rational};
use nervekit_core::scenarios::{
    catmap_cover, catmap_matrix, nine_box_cover, prismatic_cover, prismatic_profile, pyramid_growth, registry, scenario,
    shift_truncation_growth, three_arc_cover, ScenarioKind,
};
use nervekit_core::space::{FiniteMetric, Space};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../nervekit/tests/data").join(name)
}

/// Random certified cover of a discrete space on `points` points by `members` subsets.
fn random_cover(rng: &mut StdRng, points: usize, members: usize) -> Cover {
    loop {
        let mut sets: Vec<Vec<usize>> = (0..members)
            .map(|_| (0..points).filter(|_| rng.random_bool(0.4)).collect::<Vec<_>>())
            .filter(|s: &Vec<usize>| !s.is_empty())
            .collect();
        if sets.is_empty() {
            continue;
        }
        // patch uncovered points into a random member
        for p in 0..points {
            if !sets.iter().any(|s| s.contains(&p)) {
                let i = rng.random_range(0..sets.len());
                sets[i].push(p);
            }
        }
        let space = Space::Abstract(FiniteMetric::discrete(points).unwrap());
        let members = sets.into_iter().map(|s| OpenSet::Points(PointSet::new(s))).collect();
        return Cover::new(space, members).unwrap();
    }
}

fn full_nerve(c: &Cover) -> Nerve {
    build_nerve(c, c.len().saturating_sub(1).max(1)).unwrap()
}

const MAX_CORPUS_DIM: usize = 10;

/// The nerves every structural criterion is checked on.
fn nerve_corpus() -> Vec<(String, Nerve)> {
    let mut rng = StdRng::seed_from_u64(0x6e65_7276);
    let mut out = Vec::new();
    for i in 0..60 {
        let points = rng.random_range(3..=9);
        let members = rng.random_range(1..=8);
        out.push((format!("random #{i}"), full_nerve(&random_cover(&mut rng, points, members))));
    }
    out.push(("three arcs".into(), full_nerve(&three_arc_cover())));
    out.push(("nine boxes".into(), full_nerve(&nine_box_cover())));
    for g0 in 1..=6 {
        out.push((format!("prismatic {g0}"), full_nerve(&prismatic_cover(g0).unwrap())));
    }
    for s in registry() {
        if let ScenarioKind::Iterated { cover, action, folner, .. } = &s.kind {
            for n in 1..=2 {
                let it = iterate_cover(cover, action, &folner.set(n), 256).unwrap();
                // full nerves only where the largest stack keeps them small
                let dim = build_nerve(&it.cover, 1).unwrap().full_dim();
                if dim <= MAX_CORPUS_DIM {
                    out.push((format!("{} stage {n}", s.name), build_nerve(&it.cover, dim.max(1)).unwrap()));
                }
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("doubling.csv");
    let cover = data("two_arcs.json");
    let args = ["nervekit", "grow", "--system", "doubling:2", "--cover", cover.to_str().unwrap(), "--stages", "10", "--k", "0"];
    let start = Instant::now();
    let status = run(Cli::parse_from(args.iter().copied().chain(["--out", out.to_str().unwrap()])));
    let secs = start.elapsed().as_secs_f64();
    if let Err(e) = status {
        return outcome(false, format!("grow failed: {e:#}"));
    }
    let text = std::fs::read(&out).unwrap();
    let mut r = csv::Reader::from_reader(text.as_slice());
    let h = r.headers().unwrap().clone();
    let idx = |n: &str| h.iter().position(|x| x == n).unwrap();
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    let last: f64 = rows.last().unwrap()[idx("ent0")].parse().unwrap();
    let diam: Vec<Rational> = rows
        .iter()
        .map(|row| {
            Rational::new(row[idx("maxdiam_num")].parse().unwrap(), row[idx("maxdiam_den")].parse().unwrap())
        })
        .collect();
    let monotone = diam.windows(2).all(|w| w[1] <= w[0]);
    let err = (last - std::f64::consts::LN_2).abs();
    outcome(
        rows.len() == 10 && err <= 0.15 && monotone && secs <= 60.0,
        format!("ent0(10) = {last}, |ent0 - log 2| = {err:.3e}, diameters nonincreasing: {monotone}, {secs:.2} s"),
    )
}

fn criterion_2(corpus: &[(String, Nerve)]) -> Outcome {
    let mut bad = Vec::new();
    for (name, n) in corpus {
        let chi = alternating_sum(&n.counts());
        for mode in [Coefficients::Rational, Coefficients::Mod2] {
            if alternating_sum(&betti_numbers(n, mode).betti) != chi {
                bad.push(name.clone());
            }
        }
    }
    let random = corpus.iter().filter(|(n, _)| n.starts_with("random")).count();
    outcome(bad.is_empty(), format!("{} nerves ({random} random covers), both coefficient modes; failures: {bad:?}", corpus.len()))
}

fn binom(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_3(corpus: &[(String, Nerve)]) -> Outcome {
    let mut bad = Vec::new();
    for (name, n) in corpus {
        let counts = n.counts();
        let p = complexity_profile(n);
        let g0 = p.g_k(0);
        for k in 0..counts.len() {
            let gk = p.g_k(k);
            let max = *counts[..=k].iter().max().unwrap();
            let mut ok = g0 <= gk && max <= gk && gk <= (k as u64 + 1) * max;
            if k > 0 {
                ok &= p.g_k(k - 1) <= gk;
            }
            ok &= BigUint::from(counts[k]) <= binom(g0, k as u64 + 1);
            if !ok {
                bad.push(format!("{name} k={k}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{} nerves; failures: {bad:?}", corpus.len()))
}

fn criterion_4() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5375_6261);
    let mut bad = Vec::new();
    let mut inexact = 0;
    for i in 0..100 {
        let points = rng.random_range(3..=8);
        let (ma, mb) = (rng.random_range(1..=8), rng.random_range(1..=8));
        let a = random_cover(&mut rng, points, ma);
        let b = random_cover(&mut rng, points, mb);
        let ab = a.common_refinement(&b).unwrap().cover;
        let s = |c: &Cover| s_k_estimate(c, 0, 64).unwrap();
        let (sa, sb, sab) = (s(&a), s(&b), s(&ab));
        if !(sa.exact && sb.exact && sab.exact) {
            inexact += 1;
        }
        if sab.value > sa.value * sb.value {
            bad.push(i);
        }
    }
    outcome(bad.is_empty() && inexact == 0, format!("100 pairs, exhaustive searches: {}, violations: {bad:?}", 100 - inexact))
}

fn criterion_5() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for s in registry() {
        let (t, s0) = match &s.kind {
            ScenarioKind::Iterated { cover, action, folner, s0 } => {
                let mut cfg = GrowthConfig::new(s.stages, s.k);
                cfg.folner = Some(folner.clone());
                (growth_table(cover, action, &cfg).unwrap(), *s0)
            }
            ScenarioKind::Shift { delta0, p } => {
                let sizes: Vec<u64> = (1..=s.stages as u64).collect();
                (shift_truncation_growth(*delta0, *p, &sizes, s.k).unwrap(), *delta0)
            }
            _ => continue,
        };
        let r = stage_bound_check(&t, s0);
        let ent_ok = t.rows.iter().all(|row| {
            row.ent.iter().enumerate().all(|(k, e)| *e <= (k as f64 + 1.0) * (s0 as f64).ln() * (1.0 + 1e-12))
        });
        pass &= r.pass && ent_ok;
        lines.push(format!("{} ({} stages): {}", s.name, t.rows.len(), r.pass && ent_ok));
    }
    outcome(pass, lines.join(", "))
}

fn criterion_6() -> Outcome {
    let mut bad = Vec::new();
    for g0 in 1..=64u64 {
        let mut prev = BigUint::from(0u32);
        for k in 0..g0 {
            let gk = prismatic_profile(g0, k).unwrap();
            if gk != binom(g0, k + 1) + &prev {
                bad.push(format!("G_{k} at {g0}"));
            }
            prev = gk;
        }
        // the profile ends at dim = G_0 - 1
        if prismatic_profile(g0, g0).is_ok() {
            bad.push(format!("dim at {g0}"));
        }
        if g0 <= 6 {
            let n = full_nerve(&prismatic_cover(g0 as usize).unwrap());
            let brute: Vec<u64> = n.counts().iter().scan(0, |acc, c| {
                *acc += c;
                Some(*acc)
            }).collect();
            let formula: Vec<u64> = (0..g0).map(|k| prismatic_profile(g0, k).unwrap().try_into().unwrap()).collect();
            if brute != formula || n.full_dim() as u64 != g0 - 1 {
                bad.push(format!("brute force at {g0}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("G_0 = 1..64, brute-force nerves for G_0 <= 6; failures: {bad:?}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let row = pyramid_growth(&[100_000_000], 3).remove(0);
    let secs = start.elapsed().as_secs_f64();
    let errs: Vec<f64> = row.iter().enumerate().map(|(k, e)| (e - (k as f64 + 1.0)).abs()).collect();
    let pass = errs.iter().all(|&e| e <= 0.1) && secs <= 1.0;
    let vals: Vec<String> = row.iter().map(|e| format!("{e:.4}")).collect();
    outcome(pass, format!("ent_k at |F| = 1e8: [{}], errors vs k+1: {errs:.4?}, {secs:.4} s", vals.join(", ")))
}

fn criterion_8() -> Outcome {
    let s = scenario("shift").unwrap();
    let ScenarioKind::Shift { delta0, p } = s.kind else { unreachable!() };
    let sizes: Vec<u64> = (1..=s.stages as u64).collect();
    let t = shift_truncation_growth(delta0, p, &sizes, s.k).unwrap();
    let target = (delta0 as f64).ln();
    let mut off = Vec::new();
    for r in &t.rows {
        for (k, e) in r.ent.iter().enumerate() {
            // equality at the 15 significant digits reals are reported with
            if fmt_real(*e) != fmt_real(target) {
                off.push(format!("n={} k={k}: {e:.6}", r.n));
            }
        }
    }
    let dim_ok = t.rows.iter().all(|r| r.dim_growth == p as f64);
    let shown: Vec<&String> = off.iter().take(4).collect();
    outcome(
        off.is_empty() && dim_ok,
        format!(
            "log {delta0} = {target:.6}; Dim growth = {p} at every stage: {dim_ok}; {} of {} ent_k values differ, e.g. {shown:?}",
            off.len(),
            t.rows.len() * (s.k + 1)
        ),
    )
}

fn criterion_9() -> Outcome {
    let cases: Vec<(String, Nerve, Vec<u64>)> = {
        let mut v = vec![
            ("three arcs".to_string(), full_nerve(&three_arc_cover()), vec![1, 1]),
            ("nine boxes".to_string(), full_nerve(&nine_box_cover()), vec![1, 2, 1]),
        ];
        for n in 1..=7 {
            let mut b = vec![0; n];
            b[0] = 1;
            v.push((format!("full simplex on {n}"), Nerve::full_simplex(n), b));
        }
        v
    };
    let mut bad = Vec::new();
    for (name, n, want) in &cases {
        for mode in [Coefficients::Rational, Coefficients::Mod2] {
            let mut got = betti_numbers(n, mode).betti;
            got.resize(want.len().max(got.len()), 0);
            let mut w = want.clone();
            w.resize(got.len(), 0);
            if got != w {
                bad.push(format!("{name} {mode:?}: {got:?}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{} complexes, rational and mod 2; failures: {bad:?}", cases.len()))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn criterion_10() -> Outcome {
    let mut worst_scale: f64 = 0.0;
    for &(lambda, d, dd, eps) in &[(-1.0, 2, 3.0, 0.5), (0.0, 3, 2.0, 0.3), (1.0, 2, 2.0, 0.4), (-0.25, 4, 5.0, 1.0), (2.0, 3, 1.5, 0.2)] {
        let base = theta(&SpaceFormParams::new(lambda, d, dd, eps).unwrap()).unwrap().value;
        for c in [0.5, 2.0, 7.0] {
            let scaled = theta(&SpaceFormParams::new(lambda / (c * c), d, c * dd, c * eps).unwrap()).unwrap().value;
            worst_scale = worst_scale.max(rel(scaled, base));
        }
    }
    let mut worst_quad: f64 = 0.0;
    for lambda in [-2.0f64, -1.0, 0.0, 0.5, 1.0] {
        for d in [2, 3] {
            for r in [0.1, 0.7, 1.5, 3.0] {
                if lambda > 0.0 && r > std::f64::consts::PI / lambda.sqrt() {
                    continue;
                }
                let q = spaceform_ball_volume(lambda, d, r).unwrap();
                let c = spaceform_ball_volume_closed(lambda, d, r).unwrap();
                worst_quad = worst_quad.max(rel(q, c));
            }
        }
    }
    let mut worst_e: f64 = 0.0;
    for &(d, dd, ent0) in &[(2, 1.0, 0.5), (3, 2.0, 1.2), (4, 0.7, 3.0), (2, 3.0, 0.0)] {
        let e = e_constant_bound(0.0, d, dd, ent0, MyersConvention::Standard).unwrap();
        worst_e = worst_e.max(rel(e, 4.0 * dd * (-ent0 / d as f64).exp()));
    }
    let sw = sandwich_check(std::f64::consts::LN_2, 2, None).unwrap();
    let equality = sw.lower == 2.0;
    let pass = worst_scale <= 1e-9 && worst_quad <= 1e-9 && worst_e <= 1e-9 && sw.pass && equality;
    outcome(
        pass,
        format!(
            "scaling {worst_scale:.1e}, quadrature {worst_quad:.1e}, Euclidean e-constant {worst_e:.1e}, sandwich {} <= 2: {}",
            sw.lower, sw.pass
        ),
    )
}

fn criterion_11() -> Outcome {
    let gh = skeleton_gh(&scenarios_doubling(), &ActionSpec::CircleTimes(2), 8).unwrap();
    let vals: Vec<Rational> = gh.iter().map(|(_, g)| *g).collect();
    let monotone = vals.windows(2).all(|w| w[1] <= w[0]);
    let by6 = vals[5] <= rat(1, 16);
    let shown: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
    outcome(monotone && by6, format!("stages 1-8: [{}]; nonincreasing: {monotone}; stage 6 <= 1/16: {by6}", shown.join(", ")))
}

fn scenarios_doubling() -> Cover {
    nervekit_core::scenarios::doubling_cover()
}

fn criterion_12() -> Outcome {
    let s = scenario("catmap").unwrap();
    let ScenarioKind::Iterated { cover, action, folner, s0 } = &s.kind else { unreachable!() };
    let mut cfg = GrowthConfig::new(s.stages, 0);
    cfg.folner = Some(folner.clone());
    let t = growth_table(cover, action, &cfg).unwrap();
    let bound = stage_bound_check(&t, *s0).pass;
    let ent: Vec<f64> = t.rows.iter().map(|r| r.ent[0]).collect();
    let in_range = ent.iter().all(|&e| e > 0.0 && e <= (*s0 as f64).ln() * (1.0 + 1e-12));

    let act = ActionSpec::TorusMatrix(catmap_matrix());
    let boxes = FolnerSequence::cubes(1);
    let mut flips = Vec::new();
    for n in 1..=3 {
        let mut prev: Option<bool> = None;
        for res in [32, 64, 128, 256] {
            let it = iterate_cover(&catmap_cover(), &act, &boxes.set(n), res).unwrap();
            let cert = it.cover.is_cover().unwrap().is_certified();
            if prev == Some(true) && !cert {
                flips.push(format!("stage {n} at {res}"));
            }
            prev = Some(cert);
        }
    }
    let reference = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let shown: Vec<String> = ent.iter().map(|e| format!("{e:.4}")).collect();
    outcome(
        bound && in_range && flips.is_empty(),
        format!(
            "ent0 stages [{}] within (0, log {s0}]: {in_range}; stage bound: {bound}; certification flips: {flips:?}; reference log((3+sqrt 5)/2) = {reference:.6}",
            shown.join(", ")
        ),
    )
}

fn main() {
    let corpus = nerve_corpus();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "doubling entropy", criterion_1()),
        (2, "Euler-Poincare", criterion_2(&corpus)),
        (3, "G_k inequalities", criterion_3(&corpus)),
        (4, "subadditivity", criterion_4()),
        (5, "stage bound", criterion_5()),
        (6, "prismatic formulas", criterion_6()),
        (7, "pyramid sharpness", criterion_7()),
        (8, "shift truncation", criterion_8()),
        (9, "homology ground truth", criterion_9()),
        (10, "comparison bounds", criterion_10()),
        (11, "skeleton GH convergence", criterion_11()),
        (12, "cat map", criterion_12()),
    ];
    let mut failed = 0;
    for (i, name, o) in &results {
        println!("criterion {i:>2} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
