//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;

use rmfm::effects::{h_projector, h_sum, model_matrix, CellLayout, ContrastScheme, EffectId, EffectSet};
use rmfm::exactlin::{rat, ratio, Rat, RatMatrix};
use rmfm::fdist::{f_cdf, FParams};
use rmfm::fixtures;
use rmfm::hypothesis::{effect_selector, rmfm_projector, type_ss, HypothesisSpec, LinearModel, ResponseVector, SsType};
use rmfm::verify::{self, SuiteReport};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn from_report(r: &SuiteReport) -> Self {
        let failed: Vec<String> = r.failures().map(|c| format!("{} ({})", c.name, c.detail)).collect();
        let detail = if failed.is_empty() {
            format!("{} checks", r.checks.len())
        } else {
            format!("{}/{} failed, first: {}", failed.len(), r.checks.len(), failed[0])
        };
        Outcome { passed: failed.is_empty(), detail }
    }

    fn within(self, elapsed: Duration, limit: Duration) -> Self {
        let fast = elapsed < limit;
        Outcome { passed: self.passed && fast, detail: format!("{}; {:.2?} (limit {:?})", self.detail, elapsed, limit) }
    }
}

fn table1_reference() -> Outcome {
    let start = Instant::now();
    let r = verify::table1().expect("table1 suite runs");
    let elapsed = start.elapsed();
    let checks = r.checks.into_iter().filter(|c| !c.name.contains("diagonal") && !c.name.contains('∩')).collect();
    let sub = SuiteReport { suite: r.suite, checks };
    let mut out = Outcome::from_report(&sub);
    if sub.checks.len() != 9 {
        out = Outcome { passed: false, detail: format!("expected 9 checks, got {}", sub.checks.len()) };
    }
    out.within(elapsed, Duration::from_secs(5))
}

fn table1_diagonal() -> Outcome {
    let r = verify::table1().expect("table1 suite runs");
    let checks: Vec<_> = r.checks.into_iter().filter(|c| c.name.contains("diagonal") || c.name.contains('∩')).collect();
    let n = checks.len();
    let mut out = Outcome::from_report(&SuiteReport { suite: r.suite, checks });
    if n != 10 {
        out.passed = false;
        out.detail = format!("expected 10 checks, got {n}");
    }
    out
}

fn prop1() -> Outcome {
    let start = Instant::now();
    let r = verify::prop1(20240601, 500).expect("prop1 suite runs");
    let out = Outcome::from_report(&r);
    let mut out = out.within(start.elapsed(), Duration::from_secs(30));
    if r.checks.len() != 500 {
        out.passed = false;
    }
    out
}

fn prop2() -> Outcome {
    let r = verify::prop2(20240602, 200).expect("prop2 suite runs");
    let mut out = Outcome::from_report(&r);
    if r.checks.len() != 200 {
        out.passed = false;
    }
    out
}

fn prop3() -> Outcome {
    let all_dims: [&[usize]; 12] =
        [&[2], &[3], &[4], &[2, 2], &[2, 3], &[3, 2], &[3, 4], &[4, 4], &[2, 2, 2], &[3, 2, 2], &[2, 3, 3], &[4, 4, 3]];
    let reports: Vec<SuiteReport> = all_dims.par_iter().map(|d| verify::prop3(d).expect("prop3 suite runs")).collect();
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    match reports.iter().find(|r| !r.passed()) {
        None => Outcome { passed: true, detail: format!("{} layouts, {total} checks", reports.len()) },
        Some(r) => Outcome::from_report(r),
    }
}

/// `m Σ_i Σ_j (ȳ_i·· - ȳ···)²` from plain averages of the response.
fn a_ss_from_means(a: usize, b: usize, m: usize, y: &[Rat]) -> Rat {
    let total: Rat = y.iter().sum();
    let grand = &total / rat((a * b * m) as i64);
    let mut ss = rat(0);
    for i in 0..a {
        let row: Rat = y[i * b * m..(i + 1) * b * m].iter().sum();
        let d = row / rat((b * m) as i64) - &grand;
        ss += &d * &d * rat((b * m) as i64);
    }
    ss
}

fn averaging(m: usize) -> RatMatrix {
    RatMatrix::from_vec(m, m, vec![ratio(1, m as i64); m * m]).expect("square")
}

fn random_response(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    (0..n).map(|_| rat(rng.random_range(-9..=9))).collect()
}

fn balanced_closed_form() -> Outcome {
    let scheme = ContrastScheme::Helmert;
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut checks = 0;
    let mut failures = Vec::new();
    for m in 1..=3 {
        for a in 2..=3 {
            for b in 2..=3 {
                let dims = [a, b];
                let layout = CellLayout::balanced(dims.to_vec(), m).expect("valid layout");
                let u = averaging(m);
                for set in EffectSet::all_subsets(2) {
                    let model =
                        LinearModel::new(model_matrix(&set, &layout, &scheme).expect("model matrix")).expect("model");
                    checks += 1;
                    if model.projector().matrix() != &h_sum(&set, &dims).expect("H_J").matrix().kron(&u) {
                        failures.push(format!("P_KC_J a={a} b={b} m={m} J={{{}}}", set.bit_strings()));
                    }
                    for j in set.iter() {
                        let g = effect_selector(&set, j, &dims, &scheme).expect("selector");
                        let p = rmfm_projector(&model, &HypothesisSpec::new(g)).expect("projector");
                        let expected = h_projector(j, &dims).expect("H_j").matrix().kron(&u);
                        checks += 1;
                        if p.matrix() != &expected {
                            failures.push(format!("a={a} b={b} m={m} J={{{}}} effect {j}", set.bit_strings()));
                        }
                    }
                }
                let y = random_response(&mut rng, a * b * m);
                let oracle = a_ss_from_means(a, b, m, &y);
                let resp = ResponseVector::new(y);
                for t in SsType::ALL {
                    let r = type_ss(t, &EffectId::main(0, 2), &layout, &resp, &scheme).expect("type ss");
                    checks += 1;
                    if r.ss_num != oracle {
                        failures.push(format!("A SS a={a} b={b} m={m} type {}: {} vs {oracle}", t.number(), r.ss_num));
                    }
                }
            }
        }
    }
    match failures.first() {
        None => Outcome { passed: true, detail: format!("{checks} checks") },
        Some(f) => Outcome { passed: false, detail: format!("{} of {checks} failed, first: {f}", failures.len()) },
    }
}

fn type_equality() -> Outcome {
    let scheme = ContrastScheme::Helmert;
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut failures = Vec::new();
    let mut checks = 0;
    for dims in [vec![2, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2]] {
        for m in 1..=3 {
            let layout = CellLayout::balanced(dims.clone(), m).expect("valid layout");
            let y = ResponseVector::new(random_response(&mut rng, layout.n()));
            for effect in EffectId::all(dims.len()).into_iter().filter(|e| e.order() > 0) {
                let ss: Vec<Rat> = SsType::ALL
                    .iter()
                    .map(|&t| type_ss(t, &effect, &layout, &y, &scheme).expect("type ss").ss_num)
                    .collect();
                checks += 1;
                if ss[0] != ss[1] || ss[1] != ss[2] {
                    failures.push(format!("dims {dims:?} m={m} effect {effect}: {ss:?}"));
                }
            }
        }
    }

    let n0 = fixtures::layout("N0").expect("N0");
    let y = ResponseVector::new(random_response(&mut ChaCha8Rng::seed_from_u64(708), n0.n()));
    let ss: Vec<Rat> = SsType::ALL
        .iter()
        .map(|&t| type_ss(t, &verify::a_effect(), &n0, &y, &scheme).expect("type ss").ss_num)
        .collect();
    checks += 1;
    if ss[0] == ss[1] || ss[1] == ss[2] || ss[0] == ss[2] {
        failures.push(format!("N0 A SS not pairwise distinct: {} {} {}", ss[0], ss[1], ss[2]));
    }
    match failures.first() {
        None => Outcome { passed: true, detail: format!("{checks} checks; N0 A SS = {}, {}, {}", ss[0], ss[1], ss[2]) },
        Some(f) => Outcome { passed: false, detail: format!("{} of {checks} failed, first: {f}", failures.len()) },
    }
}

const MC_DRAWS: usize = 10_000_000;
const MC_CHUNKS: usize = 200;

/// Fraction of noncentral F draws at or below each `x`. The numerator is
/// `(Z + √λ)² + χ²_{ν₁-1}`.
fn monte_carlo_cdf(nu1: f64, nu2: f64, ncp: f64, xs: &[f64], seed: u64) -> Vec<f64> {
    let per_chunk = MC_DRAWS / MC_CHUNKS;
    let counts = (0..MC_CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(chunk as u64));
            let central = ChiSquared::new(nu1 - 1.0).expect("nu1 > 1");
            let denom = ChiSquared::new(nu2).expect("nu2 > 0");
            let shift = ncp.sqrt();
            let mut counts = vec![0usize; xs.len()];
            for _ in 0..per_chunk {
                let z: f64 = rng.sample(StandardNormal);
                let num = (z + shift).powi(2) + central.sample(&mut rng);
                let f = (num / nu1) / (denom.sample(&mut rng) / nu2);
                for (c, &x) in counts.iter_mut().zip(xs) {
                    if f <= x {
                        *c += 1;
                    }
                }
            }
            counts
        })
        .reduce(
            || vec![0usize; xs.len()],
            |mut acc, c| {
                acc.iter_mut().zip(c).for_each(|(a, b)| *a += b);
                acc
            },
        );
    counts.into_iter().map(|c| c as f64 / (per_chunk * MC_CHUNKS) as f64).collect()
}

fn f_numerics() -> Outcome {
    let start = Instant::now();
    let suite = verify::fdist_suite().expect("fdist suite runs");
    let mut out = Outcome::from_report(&suite);

    let configs = [(2.0, 10.0, 4.0), (3.0, 20.0, 1.5), (5.0, 8.0, 9.0)];
    let xs = [0.5, 1.0, 2.0, 4.0];
    let mut worst: f64 = 0.0;
    let mut misses = Vec::new();
    for (k, &(nu1, nu2, ncp)) in configs.iter().enumerate() {
        let params = FParams::new(nu1, nu2, ncp).expect("valid params");
        let empirical = monte_carlo_cdf(nu1, nu2, ncp, &xs, 900 + k as u64);
        for (&x, &p_hat) in xs.iter().zip(&empirical) {
            let exact = f_cdf(x, &params).expect("cdf");
            let se = (exact * (1.0 - exact) / MC_DRAWS as f64).sqrt();
            let z = (p_hat - exact).abs() / se;
            worst = worst.max(z);
            if z > 3.0 {
                misses.push(format!("F'({nu1},{nu2},{ncp}) x={x}: {exact:.6} vs {p_hat:.6} ({z:.2} SE)"));
            }
        }
    }
    if !misses.is_empty() {
        out.passed = false;
        out.detail = format!("{}; {} MC points beyond 3 SE, first: {}", out.detail, misses.len(), misses[0]);
    } else {
        out.detail = format!("{}; 12 MC points, max {worst:.2} SE", out.detail);
    }
    out.within(start.elapsed(), Duration::from_secs(120))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("reference testing targets, 3 layouts x 3 (t,m) pairs", table1_reference),
        ("diagonal targets and N1 G13 meets H10 trivially", table1_diagonal),
        ("RMFM characterization, 500 random instances", prop1),
        ("numerator dominance, 200 random instances", prop2),
        ("effect-model spans and scheme invariance", prop3),
        ("balanced closed form", balanced_closed_form),
        ("SS types equal under balance, differ on N0", type_equality),
        ("F distribution numerics", f_numerics),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let status = if out.passed { "PASS" } else { "FAIL" };
        println!("{status} [{}] {name}: {} ({:.2?})", i + 1, out.detail, start.elapsed());
        all &= out.passed;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
