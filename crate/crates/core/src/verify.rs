//! Exact verification suites: the reference testing targets, the RMFM
//! characterization, numerator dominance, effect-model spans, and F
//! distribution sanity checks. Random instances come from seeded ChaCha
//! generators with small integer entries, so every run is reproducible.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dominance::check_dominance;
use crate::effects::{
    c_block, effect_model_matrix, h_projector, h_sum, incidence, model_matrix, CellLayout, ContrastScheme, EffectId,
    EffectSet,
};
use crate::error::Result;
use crate::exactlin::{colspace, nullspace, projector, rat, solve, Projector, Rat, RatMatrix, Subspace};
use crate::fdist;
use crate::fixtures;
use crate::hypothesis::{
    estimable_part, rmfm_projector, rmfm_ss, sse, testing_target, HypothesisSpec, LinearModel, ResponseVector, SsType,
};

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures().count();
        let status = if failed == 0 { "PASS" } else { "FAIL" };
        writeln!(f, "{status} {}: {}/{} checks", self.suite, self.checks.len() - failed, self.checks.len())?;
        for c in &self.checks {
            if !c.passed || self.checks.len() <= 20 {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                writeln!(f, "  {mark} {} {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

/// The A main effect of a two-factor layout.
pub fn a_effect() -> EffectId {
    EffectId::from_bits("10").expect("valid bits")
}

/// `P_tA`: the RMFM projector for A in the Type `t` model.
pub fn a_projector(t: SsType, layout: &CellLayout, scheme: &ContrastScheme) -> Result<Projector> {
    let a = a_effect();
    let set = t.model_set(&a);
    let full = projector(&model_matrix(&set, layout, scheme)?);
    let rest = set.without(&a).expect("model has an intercept");
    full.nested_difference(&projector(&model_matrix(&rest, layout, scheme)?))
}

/// `sp(P_{M_m} K' P_tA)`, what the Type `t` A SS tests in model `m`.
pub fn a_testing_target(t: SsType, m: SsType, layout: &CellLayout, scheme: &ContrastScheme) -> Result<Subspace> {
    let p = a_projector(t, layout, scheme)?;
    let mm = effect_model_matrix(&m.model_set(&a_effect()), layout.dims(), scheme)?;
    testing_target(&mm, &incidence(layout), &p)
}

/// Recomputes every reference `G_tm` and the diagonal claims.
pub fn table1() -> Result<SuiteReport> {
    let scheme = ContrastScheme::Helmert;
    let layouts = fixtures::layouts()?;
    let mut checks = Vec::new();
    for entry in fixtures::table1()? {
        let layout = &layouts[&entry.layout];
        let target = a_testing_target(SsType::from_number(entry.t)?, SsType::from_number(entry.m)?, layout, &scheme)?;
        let expected = colspace(&entry.g);
        checks.push(CheckOutcome::new(
            format!("{} G{}{}", entry.layout, entry.t, entry.m),
            target == expected,
            format!("dim {}", target.dim()),
        ));
    }

    let c10 = colspace(&c_block(&a_effect(), &[3, 3], &scheme)?);
    let g33_n2 = colspace(&RatMatrix::from_i64_rows(&[&[0], &[1], &[-1]]).kron(&RatMatrix::ones(3)));
    for name in fixtures::LAYOUT_NAMES {
        let layout = &layouts[name];
        for t in SsType::ALL {
            let g = a_testing_target(t, t, layout, &scheme)?;
            let expected = if name == "N2" && t == SsType::Type3 { &g33_n2 } else { &c10 };
            checks.push(CheckOutcome::new(
                format!("{name} G{0}{0} diagonal", t.number()),
                &g == expected,
                format!("dim {}", g.dim()),
            ));
        }
    }
    let g13 = a_testing_target(SsType::Type1, SsType::Type3, &layouts["N1"], &scheme)?;
    let h10 = h_projector(&a_effect(), &[3, 3])?.range();
    let meet = g13.intersect(&h10)?;
    checks.push(CheckOutcome::new("N1 sp(G13) ∩ sp(H10) = {0}", meet.is_zero(), format!("dim {}", meet.dim())));
    Ok(SuiteReport { suite: "table1".into(), checks })
}

fn small_int(rng: &mut impl Rng, bound: i64) -> Rat {
    rat(rng.random_range(-bound..=bound))
}

/// Random `rows x cols` integer matrix with entries in `[-bound, bound]`.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> RatMatrix {
    let data = (0..rows * cols).map(|_| small_int(rng, bound)).collect();
    RatMatrix::from_vec(rows, cols, data).expect("sizes agree")
}

/// Random nonsingular `k x k` integer matrix.
pub fn random_nonsingular(rng: &mut impl Rng, k: usize, bound: i64) -> RatMatrix {
    loop {
        let m = random_matrix(rng, k, k, bound);
        if colspace(&m).dim() == k {
            return m;
        }
    }
}

/// Random nonzero `n x p` matrix of rank at most `r`.
pub fn random_low_rank(rng: &mut impl Rng, n: usize, p: usize, r: usize) -> RatMatrix {
    loop {
        let x = &random_matrix(rng, n, r, 3) * &random_matrix(rng, r, p, 3);
        if !x.is_zero() {
            return x;
        }
    }
}

/// One randomized `(X, G, y)` instance for the RMFM characterization.
#[derive(Clone, Debug)]
pub struct Prop1Instance {
    pub x: RatMatrix,
    pub g: RatMatrix,
    pub y: Vec<Rat>,
}

pub fn prop1_instance(rng: &mut impl Rng) -> Prop1Instance {
    let n = rng.random_range(1..=12usize);
    let p = rng.random_range(1..=7usize);
    let r = rng.random_range(1..=n.min(p));
    let x = random_low_rank(rng, n, p, r);
    let ng = rng.random_range(1..=4usize);
    let g = match rng.random_range(0..4u8) {
        0 => RatMatrix::zeros(p, ng),
        1 => random_matrix(rng, p, ng, 3),
        2 => &x.transpose() * &random_matrix(rng, n, ng, 2),
        _ => {
            // estimable directions mixed with directions outside sp(X')
            let est = &x.transpose() * &random_matrix(rng, n, ng, 2);
            let null = nullspace(&x);
            if null.is_zero() {
                est
            } else {
                let mix = &null.integer_basis() * &random_matrix(rng, null.dim(), ng, 2);
                &est + &mix
            }
        }
    };
    let y = (0..n).map(|_| small_int(rng, 5)).collect();
    Prop1Instance { x, g, y }
}

/// Builds `H ⊆ sp(X)` with `sp(X'H)` equal to the estimable part, mixed by
/// a random nonsingular matrix.
fn matching_h(rng: &mut impl Rng, model: &LinearModel, estimable: &Subspace) -> Result<RatMatrix> {
    let x = model.x();
    let xtx = &x.transpose() * x;
    let mut cols = Vec::new();
    for e in estimable.basis_vectors() {
        let w = solve(&xtx, &e)?.expect("e lies in sp(X'X) = sp(X')");
        cols.push(x.mul_vec(&w)?);
    }
    let h = RatMatrix::from_columns(x.nrows(), &cols)?;
    if h.ncols() == 0 {
        return Ok(RatMatrix::zeros(x.nrows(), 1));
    }
    Ok(&h * &random_nonsingular(rng, h.ncols(), 2))
}

pub fn prop1(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::with_capacity(trials);
    for trial in 0..trials {
        let inst = prop1_instance(&mut rng);
        let model = LinearModel::new(inst.x.clone())?;
        let spec = HypothesisSpec::new(inst.g.clone());
        let p_h = rmfm_projector(&model, &spec)?;
        let xt = inst.x.transpose();
        let est = colspace(&xt).intersect(&colspace(&inst.g))?;

        let forward = colspace(&xt.try_mul(p_h.matrix())?) == est;
        let h = matching_h(&mut rng, &model, &est)?;
        let reverse = projector(&h) == p_h;
        let both_routes = estimable_part(&model, &spec).map(|e| e == est).unwrap_or(false);

        let y = ResponseVector::new(inst.y.clone());
        let n = restricted_projector(&model, &spec)?;
        let ss = rmfm_ss(&y, &model, &spec)?;
        let extra_sse = sse(&n, y.values())? - model.sse(&y)?;
        let ss_ok = ss == extra_sse && ss >= rat(0);

        let passed = forward && reverse && both_routes && ss_ok;
        checks.push(CheckOutcome::new(
            format!("trial {trial}"),
            passed,
            format!(
                "n={} p={} rank={} est_dim={} forward={forward} reverse={reverse} routes={both_routes} ss={ss_ok}",
                inst.x.nrows(),
                inst.x.ncols(),
                model.rank(),
                est.dim()
            ),
        ));
    }
    Ok(SuiteReport { suite: "prop1".into(), checks })
}

/// `P_XN` for the minimal `N`.
pub fn restricted_projector(model: &LinearModel, spec: &HypothesisSpec) -> Result<Projector> {
    let n = crate::hypothesis::restriction_nullbasis(spec);
    let xn = model.x().try_mul(&n)?;
    Ok(if xn.ncols() == 0 { Projector::zero(model.n()) } else { projector(&xn) })
}

/// `(X, H, L)` with `sp(H) ⊆ sp(X)` and `sp(X'L) = sp(X'H)` by construction.
#[derive(Clone, Debug)]
pub struct Prop2Instance {
    pub x: RatMatrix,
    pub h: RatMatrix,
    pub l: RatMatrix,
}

pub fn prop2_instance(rng: &mut impl Rng) -> Prop2Instance {
    let n = rng.random_range(2..=10usize);
    let p = rng.random_range(1..=5usize);
    let r = rng.random_range(1..=n.min(p));
    let x = random_low_rank(rng, n, p, r);
    let hk = rng.random_range(1..=3usize);
    let h = &x * &random_matrix(rng, p, hk, 2);
    let w = colspace(&x).complement().integer_basis();
    let mut l = &h * &random_nonsingular(rng, hk, 2);
    if w.ncols() > 0 {
        l = &l + &(&w * &random_matrix(rng, w.ncols(), hk, 2));
        let extra = rng.random_range(0..=2usize);
        if extra > 0 {
            l = l.hcat(&(&w * &random_matrix(rng, w.ncols(), extra, 2))).expect("same rows");
        }
    }
    Prop2Instance { x, h, l }
}

pub fn prop2(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::with_capacity(trials);
    for trial in 0..trials {
        let inst = prop2_instance(&mut rng);
        let r = check_dominance(&inst.x, &inst.h, &inst.l)?;
        let b = r.df_bounds;
        checks.push(CheckOutcome::new(
            format!("trial {trial}"),
            r.all_hold() && r.auxiliary_is_projector,
            format!(
                "span={} contain={} nnd={} df={}={}<={}<={} aux={}",
                r.span_recovered,
                r.containment,
                r.nnd_holds,
                b.nu_h,
                b.nu_pxl,
                b.nu_l,
                b.upper,
                r.auxiliary_is_projector
            ),
        ));
    }
    Ok(SuiteReport { suite: "prop2".into(), checks })
}

/// Contrasts `e_i - e_m`, `i < m`: a second valid scheme.
pub fn reference_level_scheme(dims: &[usize]) -> ContrastScheme {
    ContrastScheme::UserSupplied(
        dims.iter()
            .map(|&m| {
                let mut c = RatMatrix::zeros(m, m.saturating_sub(1));
                for i in 0..m.saturating_sub(1) {
                    c[(i, i)] = rat(1);
                    c[(m - 1, i)] = rat(-1);
                }
                c
            })
            .collect(),
    )
}

/// Effect-model span identities over every nonempty effect set and every
/// dropped effect, plus scheme invariance against reference-level coding.
pub fn prop3(dims: &[usize]) -> Result<SuiteReport> {
    let f = dims.len();
    let helmert = ContrastScheme::Helmert;
    let alt = reference_level_scheme(dims);
    let ncells: usize = dims.iter().product();
    let mut checks = Vec::new();

    let complements: Vec<(EffectId, Subspace)> = EffectId::all(f)
        .into_iter()
        .map(|j| Ok((j.clone(), h_projector(&j, dims)?.range().complement())))
        .collect::<Result<_>>()?;
    for (j, _) in &complements {
        let block_ok = projector(&c_block(j, dims, &helmert)?) == h_projector(j, dims)?
            && projector(&c_block(j, dims, &alt)?) == h_projector(j, dims)?;
        checks.push(CheckOutcome::new(format!("P(C_{j}) = H_{j}"), block_ok, ""));
    }

    let subsets = EffectSet::all_subsets(f);
    let spans: Vec<Subspace> =
        subsets.iter().map(|s| Ok(colspace(&effect_model_matrix(s, dims, &helmert)?))).collect::<Result<_>>()?;
    let span_of = |s: &EffectSet| -> Subspace {
        subsets.iter().position(|t| t == s).map(|i| spans[i].clone()).expect("all subsets enumerated")
    };

    for (set, sp_c) in subsets.iter().zip(&spans) {
        let sp_h = colspace(h_sum(set, dims)?.matrix());
        let sp_alt = colspace(&effect_model_matrix(set, dims, &alt)?);
        checks.push(CheckOutcome::new(
            format!("J={{{}}} sp(C_J) = sp(H_J)", set.bit_strings()),
            *sp_c == sp_h && sp_alt == sp_h,
            format!("dim {}", sp_c.dim()),
        ));
        for j in set.iter() {
            let perp = &complements.iter().find(|(e, _)| e == j).expect("all effects").1;
            let lhs = sp_c.intersect(perp)?;
            let rhs = set.without(j).map(|s| span_of(&s)).unwrap_or_else(|| Subspace::zero(ncells));
            checks.push(CheckOutcome::new(
                format!("J={{{}}} drop {j}", set.bit_strings()),
                lhs == rhs,
                format!("dim {}", lhs.dim()),
            ));
        }
    }
    Ok(SuiteReport { suite: format!("prop3 dims {dims:?}"), checks })
}

/// Symmetry, quantile round trips and the power monotonicity grid.
pub fn fdist_suite() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for nu in [1.0, 3.0, 5.0, 10.0] {
        let v = fdist::f_cdf(1.0, &fdist::FParams::central(nu, nu)?)?;
        checks.push(CheckOutcome::new(
            format!("F({nu},{nu}) cdf(1) = 1/2"),
            (v - 0.5).abs() < 1e-12,
            format!("{v:.15}"),
        ));
    }
    for alpha in [0.01, 0.05, 0.5, 0.95] {
        let q = fdist::f_quantile(alpha, 2.0, 10.0)?;
        let c = fdist::f_cdf(q, &fdist::FParams::central(2.0, 10.0)?)?;
        checks.push(CheckOutcome::new(
            format!("quantile round trip alpha={alpha}"),
            (c - (1.0 - alpha)).abs() < 1e-10,
            format!("q={q:.10}"),
        ));
    }
    let (ok, detail) = monotonicity_grid()?;
    checks.push(CheckOutcome::new("power monotonicity grid", ok, detail));
    Ok(SuiteReport { suite: "fdist".into(), checks })
}

/// Power over α ∈ {.01,.05,.1,.25}, ν₁ ∈ 1..=6, ν₂ ∈ {4,8,16,32},
/// δ² ∈ {0,.5,1,2,4,8}: nondecreasing in δ² and ν₂, nonincreasing in ν₁,
/// strictly so when δ² > 0. Returns the verdict and a summary.
pub fn monotonicity_grid() -> Result<(bool, String)> {
    const SLACK: f64 = 1e-10;
    let alphas = [0.01, 0.05, 0.1, 0.25];
    let nu1s = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let nu2s = [4.0, 8.0, 16.0, 32.0];
    let ncps = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];
    let mut grid = vec![0.0; alphas.len() * nu1s.len() * nu2s.len() * ncps.len()];
    let idx = |a: usize, i: usize, j: usize, k: usize| ((a * nu1s.len() + i) * nu2s.len() + j) * ncps.len() + k;
    for (a, &alpha) in alphas.iter().enumerate() {
        for (i, &nu1) in nu1s.iter().enumerate() {
            for (j, &nu2) in nu2s.iter().enumerate() {
                for (k, &ncp) in ncps.iter().enumerate() {
                    grid[idx(a, i, j, k)] = fdist::power(alpha, nu1, nu2, ncp)?;
                }
            }
        }
    }
    let mut comparisons = 0;
    let mut violations = Vec::new();
    for a in 0..alphas.len() {
        for i in 0..nu1s.len() {
            for j in 0..nu2s.len() {
                for k in 0..ncps.len() {
                    let here = grid[idx(a, i, j, k)];
                    let positive = ncps[k] > 0.0;
                    if k + 1 < ncps.len() {
                        comparisons += 1;
                        if grid[idx(a, i, j, k + 1)] <= here {
                            violations.push(format!("ncp a={a} nu1={} nu2={} k={k}", nu1s[i], nu2s[j]));
                        }
                    }
                    if j + 1 < nu2s.len() {
                        comparisons += 1;
                        let next = grid[idx(a, i, j + 1, k)];
                        let bad = if positive { next <= here } else { next < here - SLACK };
                        if bad {
                            violations.push(format!("nu2 a={a} nu1={} nu2={} ncp={}", nu1s[i], nu2s[j], ncps[k]));
                        }
                    }
                    if i + 1 < nu1s.len() {
                        comparisons += 1;
                        let next = grid[idx(a, i + 1, j, k)];
                        let bad = if positive { next >= here } else { next > here + SLACK };
                        if bad {
                            violations.push(format!("nu1 a={a} nu1={} nu2={} ncp={}", nu1s[i], nu2s[j], ncps[k]));
                        }
                    }
                }
            }
        }
    }
    let ok = violations.is_empty();
    let detail = if ok {
        format!("{comparisons} comparisons")
    } else {
        format!("{} of {comparisons} comparisons violated, first: {}", violations.len(), violations[0])
    };
    Ok((ok, detail))
}
