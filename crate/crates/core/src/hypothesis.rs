//! Restricted-model-minus-full-model (RMFM) sums of squares.
//!
//! For a model `E(Y) = Xβ` and a hypothesis `G'β = 0`, the restricted
//! model is `sp(XN)` with `sp(N) = sp(G)⊥`. The numerator matrix
//! `P_H = P_X - P_XN` is the unique projector inside `sp(X)` whose SS tests
//! exactly the estimable part `sp(X') ∩ sp(G)` of the hypothesis, and
//! `y'P_H y = SSE_XN - SSE_X`.

use num_traits::{One, Zero};

use crate::effects::{effect_model_matrix, incidence, model_matrix, CellLayout, ContrastScheme, EffectId, EffectSet};
use crate::error::{Error, Result};
use crate::exactlin::{colspace, dot, projector, solve, Projector, Rat, RatMatrix, Subspace};
use crate::fdist;

/// Full-rank-or-not linear model `E(Y) = Xβ`, with its projector cached.
#[derive(Clone, Debug)]
pub struct LinearModel {
    x: RatMatrix,
    projector_x: Projector,
    nu_x: usize,
}

impl LinearModel {
    pub fn new(x: RatMatrix) -> Result<Self> {
        if x.nrows() == 0 || x.ncols() == 0 {
            return Err(Error::InvalidArgument("model matrix needs at least one row and column".into()));
        }
        if x.is_zero() {
            return Err(Error::InvalidArgument("model matrix has no nonzero entry".into()));
        }
        let projector_x = projector(&x);
        let nu_x = projector_x.rank();
        Ok(LinearModel { x, projector_x, nu_x })
    }

    pub fn x(&self) -> &RatMatrix {
        &self.x
    }

    pub fn projector(&self) -> &Projector {
        &self.projector_x
    }

    /// `ν_X = rank(X)`.
    pub fn rank(&self) -> usize {
        self.nu_x
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    /// Number of coefficients, `k + 1`.
    pub fn nparams(&self) -> usize {
        self.x.ncols()
    }

    /// `I - P_X`.
    pub fn residual_projector(&self) -> Projector {
        self.projector_x.orthogonal_complement()
    }

    /// `SSE_X(y) = y'(I - P_X)y`.
    pub fn sse(&self, y: &ResponseVector) -> Result<Rat> {
        self.check_response(y)?;
        sse(&self.projector_x, y.values())
    }

    fn check_response(&self, y: &ResponseVector) -> Result<()> {
        if y.len() != self.n() {
            return Err(Error::Dimension(format!("response of length {} for a model with {} rows", y.len(), self.n())));
        }
        Ok(())
    }
}

/// `y'(I - P)y`.
pub fn sse(p: &Projector, y: &[Rat]) -> Result<Rat> {
    Ok(dot(y, y) - p.quadratic_form(y)?)
}

/// Hypothesis `G'β = 0`; only `sp(G)` matters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisSpec {
    g: RatMatrix,
}

impl HypothesisSpec {
    pub fn new(g: RatMatrix) -> Self {
        HypothesisSpec { g }
    }

    pub fn g(&self) -> &RatMatrix {
        &self.g
    }

    fn check(&self, model: &LinearModel) -> Result<()> {
        if self.g.nrows() != model.nparams() {
            return Err(Error::Dimension(format!(
                "G has {} rows but the model has {} coefficients",
                self.g.nrows(),
                model.nparams()
            )));
        }
        Ok(())
    }
}

/// Parameter point `(β, σ²)` for noncentrality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPoint {
    beta: Vec<Rat>,
    sigma2: Rat,
}

impl ParamPoint {
    pub fn new(beta: Vec<Rat>, sigma2: Rat) -> Result<Self> {
        if sigma2 <= Rat::zero() {
            return Err(Error::InvalidArgument("sigma^2 must be positive".into()));
        }
        Ok(ParamPoint { beta, sigma2 })
    }

    pub fn beta(&self) -> &[Rat] {
        &self.beta
    }

    pub fn sigma2(&self) -> &Rat {
        &self.sigma2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResponseVector(Vec<Rat>);

impl ResponseVector {
    pub fn new(y: Vec<Rat>) -> Self {
        ResponseVector(y)
    }

    pub fn values(&self) -> &[Rat] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<Rat>> for ResponseVector {
    fn from(v: Vec<Rat>) -> Self {
        ResponseVector(v)
    }
}

/// Outcome of an F test. `estimable_part` is expressed in the coordinates
/// of the hypothesis: coefficients for [`f_statistic`], cell means for
/// [`type_ss`] and [`effect_ss`].
#[derive(Clone, Debug)]
pub struct TestResult {
    pub ss_num: Rat,
    pub nu_num: usize,
    pub ss_den: Rat,
    pub nu_den: usize,
    pub f_value: Option<Rat>,
    pub estimable_part: Subspace,
    pub p_value: Option<f64>,
}

impl TestResult {
    fn build(ss_num: Rat, nu_num: usize, ss_den: Rat, nu_den: usize, estimable_part: Subspace) -> Self {
        let f_value = (nu_num > 0 && nu_den > 0 && ss_den > Rat::zero())
            .then(|| (&ss_num / Rat::from_integer(nu_num.into())) / (&ss_den / Rat::from_integer(nu_den.into())));
        let mut r = TestResult { ss_num, nu_num, ss_den, nu_den, f_value, estimable_part, p_value: None };
        r.p_value = fdist::p_value(&r).ok();
        r
    }
}

/// Which model an effect's SS is computed in.
///
/// * `Type1`: sequential, effects entered in canonical order up to and
///   including the tested one (intercept + A for the A effect).
/// * `Type2`: every effect that does not contain the tested one (the
///   additive model for a main effect of a two-factor layout).
/// * `Type3`: the saturated model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SsType {
    Type1,
    Type2,
    Type3,
}

impl SsType {
    pub const ALL: [SsType; 3] = [SsType::Type1, SsType::Type2, SsType::Type3];

    pub fn number(self) -> u8 {
        match self {
            SsType::Type1 => 1,
            SsType::Type2 => 2,
            SsType::Type3 => 3,
        }
    }

    pub fn from_number(t: u8) -> Result<Self> {
        match t {
            1 => Ok(SsType::Type1),
            2 => Ok(SsType::Type2),
            3 => Ok(SsType::Type3),
            _ => Err(Error::InvalidArgument(format!("unknown SS type {t}"))),
        }
    }

    /// Effect set of the model in which `effect` is tested.
    pub fn model_set(self, effect: &EffectId) -> EffectSet {
        let f = effect.nfactors();
        let all = EffectId::all(f);
        let members: Vec<EffectId> = match self {
            SsType::Type1 => all.into_iter().filter(|j| j <= effect).collect(),
            SsType::Type2 => all.into_iter().filter(|j| !effect.is_contained_in(j)).collect(),
            SsType::Type3 => all,
        };
        EffectSet::new(members).expect("contains the effect itself")
    }
}

/// `N` with `sp(N) = sp(G)⊥`.
pub fn restriction_nullbasis(spec: &HypothesisSpec) -> RatMatrix {
    colspace(spec.g()).complement().basis().clone()
}

/// `P_H = P_X - P_XN`.
pub fn rmfm_projector(model: &LinearModel, spec: &HypothesisSpec) -> Result<Projector> {
    spec.check(model)?;
    let n = restriction_nullbasis(spec);
    let xn = model.x().try_mul(&n)?;
    let p_xn = if xn.ncols() == 0 { Projector::zero(model.n()) } else { projector(&xn) };
    let p_h = model.projector().nested_difference(&p_xn)?;
    debug_assert_eq!(
        colspace(&(&model.x().transpose() * p_h.matrix())),
        colspace(&model.x().transpose()).intersect(&colspace(spec.g()))?
    );
    Ok(p_h)
}

/// `y'(P_X - P_XN)y`, the increase in SSE from imposing `G'β = 0`.
pub fn rmfm_ss(y: &ResponseVector, model: &LinearModel, spec: &HypothesisSpec) -> Result<Rat> {
    model.check_response(y)?;
    rmfm_projector(model, spec)?.quadratic_form(y.values())
}

/// `sp(X') ∩ sp(G)`, cross-checked against `sp(X' P_H)`.
pub fn estimable_part(model: &LinearModel, spec: &HypothesisSpec) -> Result<Subspace> {
    spec.check(model)?;
    let direct = colspace(&model.x().transpose()).intersect(&colspace(spec.g()))?;
    let via_projector = estimable_part_via_projector(model, spec)?;
    if direct != via_projector {
        return Err(Error::Precondition("estimable part differs between intersection and projector routes".into()));
    }
    Ok(direct)
}

/// `sp(X' P_H)` alone.
pub fn estimable_part_via_projector(model: &LinearModel, spec: &HypothesisSpec) -> Result<Subspace> {
    let p_h = rmfm_projector(model, spec)?;
    Ok(colspace(&model.x().transpose().try_mul(p_h.matrix())?))
}

/// What `SS_P` tests about the cell means `η` in the model `sp(K M)`:
/// `sp(P_M K' P)`.
pub fn testing_target(m: &RatMatrix, k: &RatMatrix, p: &Projector) -> Result<Subspace> {
    let p_m = projector(m);
    let prod = p_m.matrix().try_mul(&k.transpose())?.try_mul(p.matrix())?;
    Ok(colspace(&prod))
}

/// RMFM SS for dropping `effect` from the effects model `set`, with the
/// saturated-model residual as denominator.
pub fn effect_ss(
    set: &EffectSet,
    effect: &EffectId,
    layout: &CellLayout,
    y: &ResponseVector,
    scheme: &ContrastScheme,
) -> Result<TestResult> {
    if !set.contains(effect) {
        return Err(Error::EffectNotInModel(effect.bit_string()));
    }
    let n = layout.n();
    if y.len() != n {
        return Err(Error::Dimension(format!("response of length {} for {n} observations", y.len())));
    }
    let k = incidence(layout);
    let p_full = projector(&model_matrix(set, layout, scheme)?);
    let p_restricted = match set.without(effect) {
        Some(rest) => projector(&model_matrix(&rest, layout, scheme)?),
        None => Projector::zero(n),
    };
    let p = p_full.nested_difference(&p_restricted)?;
    let ss_num = p.quadratic_form(y.values())?;
    let nu_num = p.rank();

    let p_k = projector(&k);
    let ss_den = sse(&p_k, y.values())?;
    let nu_den = n - p_k.rank();

    let target = testing_target(&effect_model_matrix(set, layout.dims(), scheme)?, &k, &p)?;
    Ok(TestResult::build(ss_num, nu_num, ss_den, nu_den, target))
}

/// Type 1/2/3 SS for `effect`.
pub fn type_ss(
    t: SsType,
    effect: &EffectId,
    layout: &CellLayout,
    y: &ResponseVector,
    scheme: &ContrastScheme,
) -> Result<TestResult> {
    if effect.nfactors() != layout.nfactors() {
        return Err(Error::Dimension("effect and layout differ in factor count".into()));
    }
    effect_ss(&t.model_set(effect), effect, layout, y, scheme)
}

/// `δ² = β'X'PXβ / σ²`.
pub fn ncp(p: &Projector, model: &LinearModel, point: &ParamPoint) -> Result<Rat> {
    if p.ambient_dim() != model.n() {
        return Err(Error::Dimension("projector and model sizes differ".into()));
    }
    let mu = model.x().mul_vec(point.beta())?;
    Ok(p.quadratic_form(&mu)? / point.sigma2())
}

/// `F = (SS_P/ν_P) / (SS_Q/ν_Q)`. Requires `PQ = 0` and `sp(Q) ⊆ sp(X)⊥`.
pub fn f_statistic(model: &LinearModel, y: &ResponseVector, p: &Projector, q: &Projector) -> Result<TestResult> {
    model.check_response(y)?;
    if p.ambient_dim() != model.n() || q.ambient_dim() != model.n() {
        return Err(Error::Dimension("projector and model sizes differ".into()));
    }
    if !p.matrix().try_mul(q.matrix())?.is_zero() {
        return Err(Error::Orthogonality("PQ != 0".into()));
    }
    if !q.matrix().try_mul(model.projector().matrix())?.is_zero() {
        return Err(Error::Orthogonality("sp(Q) is not orthogonal to sp(X)".into()));
    }
    let nu_num = p.rank();
    let nu_den = q.rank();
    if nu_num == 0 {
        return Err(Error::UndefinedF("numerator has zero degrees of freedom".into()));
    }
    let ss_num = p.quadratic_form(y.values())?;
    let ss_den = q.quadratic_form(y.values())?;
    if ss_den.is_zero() {
        return Err(Error::UndefinedF("denominator SS is zero".into()));
    }
    let target = colspace(&model.x().transpose().try_mul(p.matrix())?);
    Ok(TestResult::build(ss_num, nu_num, ss_den, nu_den, target))
}

/// `y - X b0` for the minimum-norm `b0` solving `G'b0 = c0`, which turns a
/// test of `G'β = c0` into one of `G'β = 0`.
pub fn adjust_rhs(
    y: &ResponseVector,
    model: &LinearModel,
    spec: &HypothesisSpec,
    c0: &[Rat],
) -> Result<ResponseVector> {
    spec.check(model)?;
    model.check_response(y)?;
    if c0.len() != spec.g().ncols() {
        return Err(Error::Dimension(format!("c0 has length {} but G has {} columns", c0.len(), spec.g().ncols())));
    }
    // the minimum-norm solution lies in sp(G): b0 = B t
    let basis = colspace(spec.g()).basis().clone();
    let system = spec.g().transpose().try_mul(&basis)?;
    let b0 = if basis.ncols() == 0 {
        if c0.iter().any(|c| !c.is_zero()) {
            return Err(Error::InconsistentRhs);
        }
        vec![Rat::zero(); model.nparams()]
    } else {
        let t = solve(&system, c0)?.ok_or(Error::InconsistentRhs)?;
        basis.mul_vec(&t)?
    };
    let shift = model.x().mul_vec(&b0)?;
    Ok(ResponseVector(y.values().iter().zip(&shift).map(|(a, b)| a - b).collect()))
}

/// Selector matrix for the columns of `C_J` belonging to `effect`: a
/// hypothesis on the effects-model coefficients whose restricted model
/// drops exactly that block.
pub fn effect_selector(
    set: &EffectSet,
    effect: &EffectId,
    dims: &[usize],
    scheme: &ContrastScheme,
) -> Result<RatMatrix> {
    use crate::effects::c_block;
    let mut offset = 0;
    let mut range = None;
    for j in set.iter() {
        let w = c_block(j, dims, scheme)?.ncols();
        if j == effect {
            range = Some(offset..offset + w);
        }
        offset += w;
    }
    let range = range.ok_or_else(|| Error::EffectNotInModel(effect.bit_string()))?;
    let mut g = RatMatrix::zeros(offset, range.len());
    for (c, r) in range.enumerate() {
        g[(r, c)] = Rat::one();
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effects::{h_projector, u_matrix};
    use crate::exactlin::{rat, ratio};

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn small_model() -> LinearModel {
        LinearModel::new(RatMatrix::from_i64_rows(&[&[1, 0, 2], &[1, 1, 0], &[1, 2, 1], &[1, 3, 3], &[0, 1, 1]]))
            .unwrap()
    }

    #[test]
    fn linear_model_rejects_degenerate_x() {
        assert!(LinearModel::new(RatMatrix::zeros(3, 2)).is_err());
        assert!(LinearModel::new(RatMatrix::zeros(0, 2)).is_err());
    }

    #[test]
    fn restriction_nullbasis_examples() {
        let spec = HypothesisSpec::new(RatMatrix::identity(3));
        assert_eq!(restriction_nullbasis(&spec).ncols(), 0);
        let spec = HypothesisSpec::new(RatMatrix::zeros(3, 1));
        assert_eq!(colspace(&restriction_nullbasis(&spec)), Subspace::full(3));
        let spec = HypothesisSpec::new(RatMatrix::from_i64_rows(&[&[0], &[1], &[0]]));
        let e13 = Subspace::span(3, &[ints(&[1, 0, 0]), ints(&[0, 0, 1])]).unwrap();
        assert_eq!(colspace(&restriction_nullbasis(&spec)), e13);
    }

    #[test]
    fn vacuous_hypothesis_gives_zero_projector() {
        let model = small_model();
        let spec = HypothesisSpec::new(RatMatrix::zeros(3, 1));
        assert_eq!(rmfm_projector(&model, &spec).unwrap(), Projector::zero(5));
    }

    #[test]
    fn full_hypothesis_gives_model_projector() {
        let model = small_model();
        let spec = HypothesisSpec::new(RatMatrix::identity(3));
        assert_eq!(&rmfm_projector(&model, &spec).unwrap(), model.projector());
    }

    #[test]
    fn rmfm_ss_vanishes_on_restricted_fit_and_residual() {
        let model = small_model();
        let spec = HypothesisSpec::new(RatMatrix::from_i64_rows(&[&[0], &[1], &[0]]));
        // y = X b with b_2 = 0
        let y = ResponseVector::new(model.x().mul_vec(&ints(&[2, 0, -1])).unwrap());
        assert_eq!(rmfm_ss(&y, &model, &spec).unwrap(), rat(0));
        let resid = model.residual_projector();
        let z = ResponseVector::new(resid.matrix().mul_vec(&ints(&[1, 2, 3, 4, 5])).unwrap());
        assert_eq!(rmfm_ss(&z, &model, &spec).unwrap(), rat(0));
    }

    #[test]
    fn balanced_a_effect_ss_is_eight() {
        // m = 2 per cell, a = b = 2, cell means 1, 2, 3, 4
        let layout = CellLayout::balanced(vec![2, 2], 2).unwrap();
        let y = ResponseVector::new(ints(&[1, 1, 2, 2, 3, 3, 4, 4]));
        let a = EffectId::from_name("A", 2).unwrap();
        let r = type_ss(SsType::Type3, &a, &layout, &y, &ContrastScheme::Helmert).unwrap();
        assert_eq!(r.ss_num, rat(8));
        assert_eq!(r.nu_num, 1);
        assert_eq!(r.ss_den, rat(0));
        assert_eq!(r.f_value, None);
        assert_eq!(r.p_value, None);
    }

    #[test]
    fn balanced_rmfm_projector_is_h_kron_u() {
        let layout = CellLayout::balanced(vec![2, 2], 2).unwrap();
        let scheme = ContrastScheme::Helmert;
        let set = EffectSet::saturated(2);
        let a = EffectId::from_bits("10").unwrap();
        let model = LinearModel::new(model_matrix(&set, &layout, &scheme).unwrap()).unwrap();
        let spec = HypothesisSpec::new(effect_selector(&set, &a, &[2, 2], &scheme).unwrap());
        let p = rmfm_projector(&model, &spec).unwrap();
        let expected = h_projector(&a, &[2, 2]).unwrap().matrix().kron(u_matrix(2).unwrap().matrix());
        assert_eq!(p.matrix(), &expected);
    }

    #[test]
    fn estimable_part_full_rank_is_everything() {
        let model = small_model();
        let g = RatMatrix::from_i64_rows(&[&[1, 0], &[2, 1], &[0, -1]]);
        let spec = HypothesisSpec::new(g.clone());
        assert_eq!(estimable_part(&model, &spec).unwrap(), colspace(&g));
    }

    #[test]
    fn ncp_examples() {
        let model = small_model();
        let p = model.projector().clone();
        let zero = ParamPoint::new(vec![rat(0); 3], rat(1)).unwrap();
        assert_eq!(ncp(&p, &model, &zero).unwrap(), rat(0));
        let beta = ints(&[1, -1, 2]);
        let mu = model.x().mul_vec(&beta).unwrap();
        let point = ParamPoint::new(beta, rat(1)).unwrap();
        assert_eq!(ncp(&p, &model, &point).unwrap(), dot(&mu, &mu));
        assert!(ParamPoint::new(vec![rat(0); 3], rat(0)).is_err());
        assert!(ParamPoint::new(vec![rat(0); 3], rat(-2)).is_err());
    }

    #[test]
    fn f_statistic_examples() {
        let model = small_model();
        let spec = HypothesisSpec::new(RatMatrix::from_i64_rows(&[&[0], &[1], &[0]]));
        let p = rmfm_projector(&model, &spec).unwrap();
        let q = model.residual_projector();
        let resid = q.matrix().mul_vec(&ints(&[1, -2, 0, 3, 1])).unwrap();
        let r = f_statistic(&model, &ResponseVector::new(resid), &p, &q).unwrap();
        assert_eq!(r.f_value, Some(rat(0)));
        assert_eq!(r.nu_num, 1);
        assert_eq!(r.nu_den, 2);

        let y = ResponseVector::new(ints(&[1, 2, 3, 4, 5]));
        assert!(matches!(f_statistic(&model, &y, &Projector::zero(5), &q), Err(Error::UndefinedF(_))));
        assert!(matches!(f_statistic(&model, &y, &p, &p), Err(Error::Orthogonality(_))));
        let fit = ResponseVector::new(model.x().mul_vec(&ints(&[1, 1, 1])).unwrap());
        assert!(matches!(f_statistic(&model, &fit, &p, &q), Err(Error::UndefinedF(_))));
    }

    #[test]
    fn adjust_rhs_examples() {
        let model = small_model();
        let y = ResponseVector::new(ints(&[1, 2, 3, 4, 5]));
        let spec = HypothesisSpec::new(RatMatrix::from_i64_rows(&[&[0], &[1], &[0]]));
        assert_eq!(adjust_rhs(&y, &model, &spec, &[rat(0)]).unwrap(), y);
        let shifted = adjust_rhs(&y, &model, &spec, &[rat(5)]).unwrap();
        let col2 = model.x().column(1);
        let expected: Vec<Rat> = y.values().iter().zip(&col2).map(|(a, c)| a - rat(5) * c).collect();
        assert_eq!(shifted.values(), &expected[..]);

        let dup = HypothesisSpec::new(RatMatrix::from_i64_rows(&[&[1, 1], &[0, 0], &[0, 0]]));
        assert!(matches!(adjust_rhs(&y, &model, &dup, &[rat(0), rat(1)]), Err(Error::InconsistentRhs)));
        // scaled duplicate column: consistent when c0 scales too
        let scaled = HypothesisSpec::new(RatMatrix::from_i64_rows(&[&[1, 2], &[0, 0], &[1, 2]]));
        let out = adjust_rhs(&y, &model, &scaled, &[rat(3), rat(6)]).unwrap();
        // b0 = (3/2, 0, 3/2)
        let b0 = vec![ratio(3, 2), rat(0), ratio(3, 2)];
        let shift = model.x().mul_vec(&b0).unwrap();
        let expected: Vec<Rat> = y.values().iter().zip(&shift).map(|(a, b)| a - b).collect();
        assert_eq!(out.values(), &expected[..]);
    }

    #[test]
    fn type_model_sets() {
        let a = EffectId::from_bits("10").unwrap();
        let b = EffectId::from_bits("01").unwrap();
        let ab = EffectId::from_bits("11").unwrap();
        assert_eq!(SsType::Type1.model_set(&a), EffectSet::parse("00,10").unwrap());
        assert_eq!(SsType::Type2.model_set(&a), EffectSet::additive(2));
        assert_eq!(SsType::Type3.model_set(&a), EffectSet::saturated(2));
        assert_eq!(SsType::Type1.model_set(&b), EffectSet::additive(2));
        assert_eq!(SsType::Type2.model_set(&ab), EffectSet::saturated(2));
    }

    #[test]
    fn effect_ss_rejects_missing_effect() {
        let layout = CellLayout::balanced(vec![2, 2], 1).unwrap();
        let y = ResponseVector::new(ints(&[1, 2, 3, 4]));
        let set = EffectSet::parse("00,10").unwrap();
        let ab = EffectId::from_bits("11").unwrap();
        assert!(matches!(effect_ss(&set, &ab, &layout, &y, &ContrastScheme::Helmert), Err(Error::EffectNotInModel(_))));
    }
}
