//! ANOVA effects for f-factor layouts.
//!
//! An effect is a binary tuple `j = (j_1, …, j_f)`: `j_k = 1` means the
//! effect involves factor `k`. For cell means `η` indexed
//! lexicographically by factor levels (first factor slowest), the effect
//! projector is the Kronecker product
//!
//! ```text
//! H_j = ⊗_k { U_{a_k} if j_k = 0,  S_{a_k} if j_k = 1 }
//! ```
//!
//! with `U_m = (1/m) 1 1'` and `S_m = I - U_m`. The contrast block `C_j`
//! replaces `U` by a column of ones and `S` by a contrast matrix, so
//! `sp(C_j) = sp(H_j)`. A model is a set of effects; its model matrix
//! concatenates the contrast blocks, and dropping a block removes exactly
//! that effect.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{colspace, rat, ratio, Projector, Rat, RatMatrix};

/// Binary tuple naming an ANOVA effect.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EffectId {
    bits: Vec<bool>,
}

impl EffectId {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument("effect needs at least one factor".into()));
        }
        Ok(EffectId { bits })
    }

    /// Parses a string of `0`/`1` characters, e.g. `"10"`.
    pub fn from_bits(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidArgument(format!("bad effect bit string {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }

    /// Parses a factor-letter name (`"A"`, `"BC"`, `"I"` for the mean) for
    /// `nfactors` factors.
    pub fn from_name(name: &str, nfactors: usize) -> Result<Self> {
        let mut bits = vec![false; nfactors];
        if !(name == "I" || name == "mean") {
            for c in name.chars() {
                let k = (c.to_ascii_uppercase() as u32).wrapping_sub('A' as u32) as usize;
                if k >= nfactors || !c.is_ascii_alphabetic() || bits[k] {
                    return Err(Error::InvalidArgument(format!("bad effect name {name:?} for {nfactors} factors")));
                }
                bits[k] = true;
            }
        }
        Self::new(bits)
    }

    /// The mean (all zeros).
    pub fn intercept(nfactors: usize) -> Self {
        EffectId { bits: vec![false; nfactors] }
    }

    /// Main effect of factor `k` (0-based).
    pub fn main(k: usize, nfactors: usize) -> Self {
        let mut bits = vec![false; nfactors];
        bits[k] = true;
        EffectId { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn nfactors(&self) -> usize {
        self.bits.len()
    }

    pub fn order(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `self`'s factors are a proper subset of `other`'s.
    pub fn is_contained_in(&self, other: &EffectId) -> bool {
        self != other && self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }

    /// Factor-letter name: `A`, `B`, `AB`, …; `I` for the mean.
    pub fn name(&self) -> String {
        if self.order() == 0 {
            return "I".into();
        }
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| (b'A' + k as u8) as char).collect()
    }

    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// All `2^f` effects in canonical order.
    pub fn all(nfactors: usize) -> Vec<EffectId> {
        let mut v: Vec<EffectId> = (0..1usize << nfactors)
            .map(|mask| EffectId { bits: (0..nfactors).map(|k| mask >> k & 1 == 1).collect() })
            .collect();
        v.sort();
        v
    }
}

// Canonical order: by number of factors, then earlier factors first
// (00, 10, 01, 11 for two factors).
impl Ord for EffectId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order().cmp(&other.order()).then_with(|| other.bits.cmp(&self.bits))
    }
}

impl PartialOrd for EffectId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EffectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bit_string())
    }
}

impl fmt::Debug for EffectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EffectId({})", self.bit_string())
    }
}

impl FromStr for EffectId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_bits(s)
    }
}

/// Nonempty set of effects sharing the same number of factors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EffectSet {
    members: BTreeSet<EffectId>,
}

impl EffectSet {
    pub fn new(members: impl IntoIterator<Item = EffectId>) -> Result<Self> {
        let members: BTreeSet<EffectId> = members.into_iter().collect();
        let Some(first) = members.iter().next() else {
            return Err(Error::InvalidArgument("effect set must be nonempty".into()));
        };
        let f = first.nfactors();
        if members.iter().any(|e| e.nfactors() != f) {
            return Err(Error::InvalidArgument("effects have different lengths".into()));
        }
        Ok(EffectSet { members })
    }

    /// Comma-separated bit strings, e.g. `"00,10,01"`.
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(s.split(',').map(|t| EffectId::from_bits(t.trim())).collect::<Result<Vec<_>>>()?)
    }

    /// Every effect: the saturated model.
    pub fn saturated(nfactors: usize) -> Self {
        EffectSet { members: EffectId::all(nfactors).into_iter().collect() }
    }

    /// Mean and all main effects.
    pub fn additive(nfactors: usize) -> Self {
        EffectSet { members: EffectId::all(nfactors).into_iter().filter(|e| e.order() <= 1).collect() }
    }

    pub fn nfactors(&self) -> usize {
        self.members.iter().next().expect("nonempty").nfactors()
    }

    pub fn contains(&self, e: &EffectId) -> bool {
        self.members.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &EffectId> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `self` without `e`; `None` when that leaves nothing.
    pub fn without(&self, e: &EffectId) -> Option<EffectSet> {
        let members: BTreeSet<EffectId> = self.members.iter().filter(|m| *m != e).cloned().collect();
        (!members.is_empty()).then_some(EffectSet { members })
    }

    /// Every nonempty subset of the `2^f` effects.
    pub fn all_subsets(nfactors: usize) -> Vec<EffectSet> {
        let all = EffectId::all(nfactors);
        (1usize..1 << all.len())
            .map(|mask| EffectSet {
                members: all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.clone()).collect(),
            })
            .collect()
    }

    pub fn bit_strings(&self) -> String {
        self.members.iter().map(EffectId::bit_string).collect::<Vec<_>>().join(",")
    }
}

/// Factor dimensions and per-cell observation counts, cells in
/// lexicographic order of factor levels.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CellLayout {
    dims: Vec<usize>,
    counts: Vec<usize>,
}

impl CellLayout {
    /// Every factor needs at least one level, and every level of every
    /// factor needs at least one observation. Empty cells are allowed.
    pub fn new(dims: Vec<usize>, counts: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidLayout(format!("bad factor dimensions {dims:?}")));
        }
        let ncells: usize = dims.iter().product();
        if counts.len() != ncells {
            return Err(Error::InvalidLayout(format!("{} cell counts for {ncells} cells", counts.len())));
        }
        let layout = CellLayout { dims, counts };
        for k in 0..layout.dims.len() {
            let margins = layout.marginal_counts(k);
            if let Some(level) = margins.iter().position(|&c| c == 0) {
                return Err(Error::InvalidLayout(format!(
                    "level {} of factor {} has no observations",
                    level + 1,
                    k + 1
                )));
            }
        }
        Ok(layout)
    }

    /// Two-factor layout from an `a x b` array of counts.
    pub fn two_factor(counts: &[&[usize]]) -> Result<Self> {
        let a = counts.len();
        let b = counts.first().map_or(0, |r| r.len());
        if counts.iter().any(|r| r.len() != b) {
            return Err(Error::InvalidLayout("ragged count array".into()));
        }
        Self::new(vec![a, b], counts.iter().flat_map(|r| r.iter().copied()).collect())
    }

    /// `m` observations in every cell.
    pub fn balanced(dims: Vec<usize>, m: usize) -> Result<Self> {
        let ncells = dims.iter().product();
        Self::new(dims, vec![m; ncells])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn nfactors(&self) -> usize {
        self.dims.len()
    }

    pub fn ncells(&self) -> usize {
        self.counts.len()
    }

    /// Total number of observations.
    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Level indices (0-based) of a cell.
    pub fn cell_levels(&self, cell: usize) -> Vec<usize> {
        let mut levels = vec![0; self.dims.len()];
        let mut rest = cell;
        for k in (0..self.dims.len()).rev() {
            levels[k] = rest % self.dims[k];
            rest /= self.dims[k];
        }
        levels
    }

    /// Cell index of a level tuple (0-based levels).
    pub fn cell_index(&self, levels: &[usize]) -> usize {
        levels.iter().zip(&self.dims).fold(0, |acc, (&l, &a)| acc * a + l)
    }

    pub fn marginal_counts(&self, factor: usize) -> Vec<usize> {
        let mut m = vec![0; self.dims[factor]];
        for (cell, &c) in self.counts.iter().enumerate() {
            m[self.cell_levels(cell)[factor]] += c;
        }
        m
    }

    /// `Some(m)` when every cell has exactly `m` observations.
    pub fn balanced_count(&self) -> Option<usize> {
        let m = self.counts[0];
        self.counts.iter().all(|&c| c == m).then_some(m)
    }

    /// Cell of each observation, observations ordered by cell then
    /// replicate.
    pub fn observation_cells(&self) -> Vec<usize> {
        self.counts.iter().enumerate().flat_map(|(cell, &c)| std::iter::repeat_n(cell, c)).collect()
    }
}

/// How contrast matrices `C_m` are chosen.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub enum ContrastScheme {
    /// Column `j` is zero above row `j`, `m - j` in row `j`, `-1` below
    /// (1-based). For `m = 3` this is `[[2,0],[-1,1],[-1,-1]]`.
    #[default]
    Helmert,
    /// One `a_k x (a_k - 1)` contrast matrix per factor.
    UserSupplied(Vec<RatMatrix>),
}

impl ContrastScheme {
    /// Contrast columns for `factor` with `m` levels. Validates user input.
    pub fn for_factor(&self, factor: usize, m: usize) -> Result<RatMatrix> {
        match self {
            ContrastScheme::Helmert => Ok(helmert(m)),
            ContrastScheme::UserSupplied(ms) => {
                let c = ms
                    .get(factor)
                    .ok_or_else(|| Error::InvalidContrast(format!("no contrast matrix for factor {}", factor + 1)))?;
                validate_contrast(c, m)?;
                Ok(c.clone())
            }
        }
    }
}

fn helmert(m: usize) -> RatMatrix {
    let mut c = RatMatrix::zeros(m, m.saturating_sub(1));
    for j in 0..m.saturating_sub(1) {
        c[(j, j)] = rat((m - 1 - j) as i64);
        for i in j + 1..m {
            c[(i, j)] = rat(-1);
        }
    }
    c
}

/// Checks that `c` is `m x (m-1)`, has zero column sums and rank `m - 1`.
pub fn validate_contrast(c: &RatMatrix, m: usize) -> Result<()> {
    if c.nrows() != m || c.ncols() + 1 != m {
        return Err(Error::InvalidContrast(format!(
            "expected {m}x{} matrix, got {}x{}",
            m.saturating_sub(1),
            c.nrows(),
            c.ncols()
        )));
    }
    for j in 0..c.ncols() {
        if !c.column(j).iter().fold(Rat::zero(), |a, v| a + v).is_zero() {
            return Err(Error::InvalidContrast(format!("column {} does not sum to zero", j + 1)));
        }
    }
    if colspace(c).dim() + 1 != m {
        return Err(Error::InvalidContrast("columns are linearly dependent".into()));
    }
    Ok(())
}

/// `U_m = (1/m) 1 1'`.
pub fn u_matrix(m: usize) -> Result<Projector> {
    if m == 0 {
        return Err(Error::InvalidArgument("U_m needs m >= 1".into()));
    }
    let v = ratio(1, m as i64);
    let mat = RatMatrix::from_vec(m, m, vec![v; m * m])?;
    Projector::try_from_matrix(mat)
}

/// `S_m = I - U_m`.
pub fn s_matrix(m: usize) -> Result<Projector> {
    Ok(u_matrix(m)?.orthogonal_complement())
}

/// Contrast matrix `C_m` under `scheme`, taking factor 0's matrix for a
/// user-supplied scheme.
pub fn contrast_matrix(m: usize, scheme: &ContrastScheme) -> Result<RatMatrix> {
    if m < 2 {
        return Err(Error::InvalidArgument("contrast matrix needs m >= 2".into()));
    }
    scheme.for_factor(0, m)
}

fn check_effect_dims(j: &EffectId, dims: &[usize]) -> Result<()> {
    if j.nfactors() != dims.len() {
        return Err(Error::Dimension(format!("effect {j} for {} factors", dims.len())));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidArgument("factor with zero levels".into()));
    }
    Ok(())
}

/// Effect projector `H_j`.
pub fn h_projector(j: &EffectId, dims: &[usize]) -> Result<Projector> {
    check_effect_dims(j, dims)?;
    let mut m = RatMatrix::identity(1);
    for (&bit, &a) in j.bits().iter().zip(dims) {
        let factor = if bit { s_matrix(a)? } else { u_matrix(a)? };
        m = m.kron(factor.matrix());
    }
    // Kronecker products of projectors are projectors
    Ok(Projector::from_matrix_unchecked(m))
}

/// `H_J = Σ_{j∈J} H_j`.
pub fn h_sum(set: &EffectSet, dims: &[usize]) -> Result<Projector> {
    let n: usize = dims.iter().product();
    let mut m = RatMatrix::zeros(n, n);
    for j in set.iter() {
        m = m.try_add(h_projector(j, dims)?.matrix())?;
    }
    // distinct effect projectors are mutually orthogonal
    Ok(Projector::from_matrix_unchecked(m))
}

/// Contrast block `C_j`.
pub fn c_block(j: &EffectId, dims: &[usize], scheme: &ContrastScheme) -> Result<RatMatrix> {
    check_effect_dims(j, dims)?;
    let mut m = RatMatrix::identity(1);
    for (k, (&bit, &a)) in j.bits().iter().zip(dims).enumerate() {
        let factor = if !bit {
            RatMatrix::ones(a)
        } else if a == 1 {
            RatMatrix::zeros(1, 0)
        } else {
            scheme.for_factor(k, a)?
        };
        m = m.kron(&factor);
    }
    Ok(m)
}

/// `C_J`: contrast blocks of every effect in `set`, concatenated in
/// canonical effect order.
pub fn effect_model_matrix(set: &EffectSet, dims: &[usize], scheme: &ContrastScheme) -> Result<RatMatrix> {
    let blocks = set.iter().map(|j| c_block(j, dims, scheme)).collect::<Result<Vec<_>>>()?;
    RatMatrix::hcat_all(dims.iter().product(), &blocks)
}

/// Observation-to-cell incidence matrix: row `r` has a single 1 in the
/// column of observation `r`'s cell. Empty cells give zero columns.
pub fn incidence(layout: &CellLayout) -> RatMatrix {
    let cells = layout.observation_cells();
    let mut k = RatMatrix::zeros(cells.len(), layout.ncells());
    for (r, &c) in cells.iter().enumerate() {
        k[(r, c)] = Rat::one();
    }
    k
}

/// `K C_J`.
pub fn model_matrix(set: &EffectSet, layout: &CellLayout, scheme: &ContrastScheme) -> Result<RatMatrix> {
    if set.nfactors() != layout.nfactors() {
        return Err(Error::Dimension("effect set and layout differ in factor count".into()));
    }
    incidence(layout).try_mul(&effect_model_matrix(set, layout.dims(), scheme)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{projector, Subspace};

    fn eff(s: &str) -> EffectId {
        EffectId::from_bits(s).unwrap()
    }

    #[test]
    fn u_and_s_examples() {
        let h = ratio(1, 2);
        assert_eq!(u_matrix(2).unwrap().matrix().entries(), &[h.clone(), h.clone(), h.clone(), h.clone()]);
        assert_eq!(
            s_matrix(2).unwrap().matrix(),
            &RatMatrix::from_vec(2, 2, vec![h.clone(), -h.clone(), -h.clone(), h]).unwrap()
        );
        assert_eq!(s_matrix(5).unwrap().rank(), 4);
        assert!(u_matrix(0).is_err());
        for m in 1..5 {
            let (u, s) = (u_matrix(m).unwrap(), s_matrix(m).unwrap());
            assert_eq!(u.matrix() + s.matrix(), RatMatrix::identity(m));
            assert!((u.matrix() * s.matrix()).is_zero());
        }
    }

    #[test]
    fn helmert_matches_c3() {
        let c = contrast_matrix(3, &ContrastScheme::Helmert).unwrap();
        assert_eq!(c, RatMatrix::from_i64_rows(&[&[2, 0], &[-1, 1], &[-1, -1]]));
        let c2 = contrast_matrix(2, &ContrastScheme::Helmert).unwrap();
        assert_eq!(c2, RatMatrix::from_i64_rows(&[&[1], &[-1]]));
        let c4 = contrast_matrix(4, &ContrastScheme::Helmert).unwrap();
        assert_eq!(&projector(&c4), &s_matrix(4).unwrap());
        assert!(contrast_matrix(1, &ContrastScheme::Helmert).is_err());
    }

    #[test]
    fn user_contrasts_are_validated() {
        let bad_sum = ContrastScheme::UserSupplied(vec![RatMatrix::from_i64_rows(&[&[1, 0], &[0, 1], &[-1, 0]])]);
        assert!(matches!(contrast_matrix(3, &bad_sum), Err(Error::InvalidContrast(_))));
        let dependent = ContrastScheme::UserSupplied(vec![RatMatrix::from_i64_rows(&[&[1, 2], &[-1, -2], &[0, 0]])]);
        assert!(matches!(contrast_matrix(3, &dependent), Err(Error::InvalidContrast(_))));
        let wrong_shape = ContrastScheme::UserSupplied(vec![RatMatrix::from_i64_rows(&[&[1], &[-1], &[0]])]);
        assert!(matches!(contrast_matrix(3, &wrong_shape), Err(Error::InvalidContrast(_))));
        let ok = ContrastScheme::UserSupplied(vec![RatMatrix::from_i64_rows(&[&[1, 0], &[-1, 1], &[0, -1]])]);
        assert!(contrast_matrix(3, &ok).is_ok());
    }

    #[test]
    fn h_projector_examples() {
        let dims = [3, 3];
        let h00 = h_projector(&eff("00"), &dims).unwrap();
        assert!(h00.matrix().entries().iter().all(|v| *v == ratio(1, 9)));
        let total = EffectId::all(2)
            .iter()
            .map(|j| h_projector(j, &dims).unwrap().into_matrix())
            .fold(RatMatrix::zeros(9, 9), |a, b| &a + &b);
        assert_eq!(total, RatMatrix::identity(9));
        let h10 = h_projector(&eff("10"), &dims).unwrap();
        let h01 = h_projector(&eff("01"), &dims).unwrap();
        assert!((h10.matrix() * h01.matrix()).is_zero());
    }

    #[test]
    fn c_block_examples() {
        let dims = [3, 3];
        let scheme = ContrastScheme::Helmert;
        let c10 = c_block(&eff("10"), &dims, &scheme).unwrap();
        assert_eq!((c10.nrows(), c10.ncols()), (9, 2));
        let c3 = contrast_matrix(3, &scheme).unwrap();
        for i in 0..9 {
            assert_eq!(c10.row(i), c3.row(i / 3));
        }
        assert_eq!(c_block(&eff("00"), &dims, &scheme).unwrap(), RatMatrix::ones(9));
        let s3 = s_matrix(3).unwrap();
        assert_eq!(projector(&c_block(&eff("11"), &dims, &scheme).unwrap()).matrix(), &s3.matrix().kron(s3.matrix()));
    }

    #[test]
    fn effect_model_matrix_examples() {
        let dims = [3, 3];
        let scheme = ContrastScheme::Helmert;
        let full = effect_model_matrix(&EffectSet::saturated(2), &dims, &scheme).unwrap();
        assert_eq!(colspace(&full), Subspace::full(9));
        let additive = EffectSet::parse("00,10,01").unwrap();
        assert_eq!(additive, EffectSet::additive(2));
        let ca = effect_model_matrix(&additive, &dims, &scheme).unwrap();
        assert_eq!(colspace(&ca), h_sum(&additive, &dims).unwrap().range());
        let mean = effect_model_matrix(&EffectSet::parse("00").unwrap(), &dims, &scheme).unwrap();
        assert_eq!(colspace(&mean), colspace(&RatMatrix::ones(9)));
        assert!(EffectSet::new(Vec::new()).is_err());
    }

    #[test]
    fn effect_order_and_names() {
        let all: Vec<String> = EffectId::all(2).iter().map(|e| e.bit_string()).collect();
        assert_eq!(all, ["00", "10", "01", "11"]);
        let names: Vec<String> = EffectId::all(3).iter().map(|e| e.name()).collect();
        assert_eq!(names, ["I", "A", "B", "C", "AB", "AC", "BC", "ABC"]);
        assert_eq!(EffectId::from_name("AB", 2).unwrap(), eff("11"));
        assert_eq!(EffectId::from_name("I", 2).unwrap(), eff("00"));
        assert!(EffectId::from_name("C", 2).is_err());
        assert!(eff("10").is_contained_in(&eff("11")));
        assert!(!eff("11").is_contained_in(&eff("11")));
        assert_eq!(EffectSet::all_subsets(2).len(), 15);
    }

    #[test]
    fn layout_validation() {
        assert!(CellLayout::two_factor(&[&[1, 0], &[0, 0]]).is_err());
        assert!(CellLayout::two_factor(&[&[0, 2], &[3, 0]]).is_ok());
        assert!(CellLayout::new(vec![2, 2], vec![1, 1, 1]).is_err());
        assert!(CellLayout::new(vec![], vec![]).is_err());
    }

    #[test]
    fn incidence_examples() {
        let n2 = CellLayout::two_factor(&[&[0, 2, 3], &[3, 1, 2], &[3, 2, 1]]).unwrap();
        let k = incidence(&n2);
        assert!(k.column(0).iter().all(Zero::is_zero));

        let bal = CellLayout::balanced(vec![2, 2], 2).unwrap();
        assert_eq!(incidence(&bal), RatMatrix::identity(4).kron(&RatMatrix::ones(2)));

        let n0 = CellLayout::two_factor(&[&[1, 2, 3], &[3, 1, 2], &[3, 2, 1]]).unwrap();
        let k0 = incidence(&n0);
        assert_eq!((k0.nrows(), k0.ncols()), (18, 9));
        let sums: Vec<Rat> = (0..9).map(|j| k0.column(j).iter().fold(Rat::zero(), |a, v| a + v)).collect();
        let expected: Vec<Rat> = [1, 2, 3, 3, 1, 2, 3, 2, 1].iter().map(|&v| rat(v)).collect();
        assert_eq!(sums, expected);
        for i in 0..18 {
            assert_eq!(k0.row(i).iter().fold(Rat::zero(), |a, v| a + v), rat(1));
        }
    }

    #[test]
    fn model_matrix_examples() {
        let scheme = ContrastScheme::Helmert;
        let n0 = CellLayout::two_factor(&[&[1, 2, 3], &[3, 1, 2], &[3, 2, 1]]).unwrap();
        let x = model_matrix(&EffectSet::saturated(2), &n0, &scheme).unwrap();
        assert_eq!(colspace(&x), colspace(&incidence(&n0)));
        assert_eq!(colspace(&x).dim(), 9);
        let x0 = model_matrix(&EffectSet::parse("00").unwrap(), &n0, &scheme).unwrap();
        assert_eq!(colspace(&x0), colspace(&RatMatrix::ones(18)));

        let bal = CellLayout::balanced(vec![2, 3], 2).unwrap();
        for set in EffectSet::all_subsets(2) {
            let p = projector(&model_matrix(&set, &bal, &scheme).unwrap());
            let expected = h_sum(&set, &[2, 3]).unwrap().matrix().kron(u_matrix(2).unwrap().matrix());
            assert_eq!(p.matrix(), &expected);
        }
    }
}
