use num_traits::{One, Zero};

use super::matrix::{dot, is_negative, Rat, RatMatrix};
use super::reduce::rref;
use crate::error::{Error, Result};

/// A linear subspace of `Q^n`, held as its canonical basis: the reduced
/// column-echelon form of any spanning set. Two subspaces are equal iff
/// their bases are entry-wise equal, so `PartialEq` is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RatMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: RatMatrix::zeros(ambient_dim, 0) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: RatMatrix::identity(ambient_dim) }
    }

    /// Span of a list of vectors, all of length `ambient_dim`.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Rat>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::Dimension(format!("vector of length {} in a {ambient_dim}-dimensional space", v.len())));
        }
        let (rows, _) = rref(vectors, ambient_dim);
        let basis = RatMatrix::from_columns(ambient_dim, &rows)?;
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis, one column per basis vector.
    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rat>> {
        self.basis.columns()
    }

    /// Canonical basis with each column rescaled to coprime integers.
    pub fn integer_basis(&self) -> RatMatrix {
        self.basis.integer_scaled()
    }

    pub fn contains(&self, v: &[Rat]) -> Result<bool> {
        self.check_ambient_len(v.len())?;
        let mut vs = self.basis_vectors();
        vs.push(v.to_vec());
        let (rows, _) = rref(&vs, self.ambient_dim);
        Ok(rows.len() == self.dim())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        Ok(self.sum(other)?.dim() == other.dim())
    }

    /// `S1 + S2`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::span(self.ambient_dim, &vs)
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> Subspace {
        nullspace(&self.basis.transpose())
    }

    /// `S1 ∩ S2`, computed as the complement of the sum of complements.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(self.complement().sum(&other.complement())?.complement())
    }

    /// Orthogonal projector onto this subspace.
    pub fn projector(&self) -> Projector {
        let n = self.ambient_dim;
        let ortho = gram_schmidt(&self.basis_vectors());
        let mut m = RatMatrix::zeros(n, n);
        for v in &ortho {
            let norm2 = dot(v, v);
            for i in 0..n {
                if v[i].is_zero() {
                    continue;
                }
                let vi = &v[i] / &norm2;
                for j in 0..n {
                    if !v[j].is_zero() {
                        m[(i, j)] += &vi * &v[j];
                    }
                }
            }
        }
        Projector { matrix: m }
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        self.check_ambient_len(other.ambient_dim)
    }

    fn check_ambient_len(&self, n: usize) -> Result<()> {
        if self.ambient_dim != n {
            return Err(Error::Dimension(format!("ambient dimensions {} and {n} differ", self.ambient_dim)));
        }
        Ok(())
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in Q^{}) {:?}", self.dim(), self.ambient_dim, self.basis)
    }
}

/// Orthogonal (not normalized) basis of the span of independent vectors.
fn gram_schmidt(vectors: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut out: Vec<(Vec<Rat>, Rat)> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for (u, uu) in &out {
            let c = dot(&w, u) / uu;
            if c.is_zero() {
                continue;
            }
            for (wi, ui) in w.iter_mut().zip(u) {
                if !ui.is_zero() {
                    *wi -= &c * ui;
                }
            }
        }
        let ww = dot(&w, &w);
        if !ww.is_zero() {
            out.push((w, ww));
        }
    }
    out.into_iter().map(|(w, _)| w).collect()
}

/// Symmetric idempotent matrix: the orthogonal projector onto its column
/// space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Projector {
    matrix: RatMatrix,
}

impl Projector {
    pub fn zero(n: usize) -> Self {
        Projector { matrix: RatMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Projector { matrix: RatMatrix::identity(n) }
    }

    /// Accepts `m` only if it is symmetric and idempotent.
    pub fn try_from_matrix(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if &m * &m != m {
            return Err(Error::InvalidArgument("matrix is not idempotent".into()));
        }
        Ok(Projector { matrix: m })
    }

    /// Caller guarantees `m` is symmetric and idempotent.
    pub(crate) fn from_matrix_unchecked(m: RatMatrix) -> Self {
        debug_assert!(m.is_symmetric());
        Projector { matrix: m }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.matrix
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Trace, which equals the rank of a projector.
    pub fn rank(&self) -> usize {
        let t = self.matrix.trace().expect("projector is square");
        debug_assert!(t.is_integer());
        num_traits::ToPrimitive::to_usize(&t.to_integer()).expect("trace is a small nonnegative integer")
    }

    pub fn range(&self) -> Subspace {
        colspace(&self.matrix)
    }

    /// `I - P`.
    pub fn orthogonal_complement(&self) -> Projector {
        let n = self.ambient_dim();
        Projector { matrix: &RatMatrix::identity(n) - &self.matrix }
    }

    /// `y' P y`.
    pub fn quadratic_form(&self, y: &[Rat]) -> Result<Rat> {
        self.matrix.quadratic_form(y)
    }

    /// `self - other` where `range(other) ⊆ range(self)`; the difference of
    /// nested projectors is again a projector.
    pub fn nested_difference(&self, other: &Projector) -> Result<Projector> {
        let d = self.matrix.try_sub(&other.matrix)?;
        if &self.matrix * &other.matrix != other.matrix {
            return Err(Error::InvalidArgument("projector ranges are not nested".into()));
        }
        Ok(Projector { matrix: d })
    }
}

impl std::fmt::Debug for Projector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Projector {:?}", self.matrix)
    }
}

/// Column space of `m`.
pub fn colspace(m: &RatMatrix) -> Subspace {
    Subspace::span(m.nrows(), &m.columns()).expect("columns have matching length")
}

/// Orthogonal projector onto the column space of `m`.
pub fn projector(m: &RatMatrix) -> Projector {
    colspace(m).projector()
}

/// `{x : m x = 0}`.
pub fn nullspace(m: &RatMatrix) -> Subspace {
    let n = m.ncols();
    let rows: Vec<Vec<Rat>> = (0..m.nrows()).map(|i| m.row(i).to_vec()).collect();
    let (reduced, pivots) = rref(&rows, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let vectors: Vec<Vec<Rat>> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Rat::zero(); n];
            v[fc] = Rat::one();
            for (row, &pc) in reduced.iter().zip(&pivots) {
                v[pc] = -row[fc].clone();
            }
            v
        })
        .collect();
    Subspace::span(n, &vectors).expect("vectors have matching length")
}

pub fn rank(m: &RatMatrix) -> usize {
    colspace(m).dim()
}

pub fn trace(m: &RatMatrix) -> Result<Rat> {
    m.trace()
}

/// Some `x` with `a x = b`, or `None` if the system is inconsistent. Free
/// variables are set to zero.
pub fn solve(a: &RatMatrix, b: &[Rat]) -> Result<Option<Vec<Rat>>> {
    if b.len() != a.nrows() {
        return Err(Error::Dimension(format!("right-hand side of length {} for {} equations", b.len(), a.nrows())));
    }
    let n = a.ncols();
    let rows: Vec<Vec<Rat>> = (0..a.nrows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let (reduced, pivots) = rref(&rows, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &pc) in reduced.iter().zip(&pivots) {
        x[pc] = row[n].clone();
    }
    Ok(Some(x))
}

/// Exact nonnegative-definiteness test for a symmetric matrix by pivoted
/// LDL' elimination: a negative diagonal pivot, or a zero diagonal with a
/// nonzero entry in its row, means some `x'Mx < 0`.
pub fn is_nnd(m: &RatMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut a = m.clone();
    let mut active: Vec<usize> = (0..m.nrows()).collect();
    while !active.is_empty() {
        if active.iter().any(|&i| is_negative(&a[(i, i)])) {
            return Ok(false);
        }
        let Some(pos) = active.iter().position(|&i| !a[(i, i)].is_zero()) else {
            // every remaining diagonal entry is zero: nnd iff the block is zero
            return Ok(active.iter().all(|&i| active.iter().all(|&j| a[(i, j)].is_zero())));
        };
        let p = active.remove(pos);
        let d = a[(p, p)].clone();
        for &i in &active {
            if a[(i, p)].is_zero() {
                continue;
            }
            let l = &a[(i, p)] / &d;
            for &j in &active {
                if !a[(p, j)].is_zero() {
                    let delta = &l * &a[(p, j)];
                    a[(i, j)] -= delta;
                }
            }
        }
    }
    Ok(true)
}
