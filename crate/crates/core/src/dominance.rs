//! Checks that the RMFM numerator dominates any competitor testing the
//! same function.
//!
//! Given `sp(H) ⊆ sp(X)` and a competing numerator matrix `L` with
//! `sp(X'L) = sp(X'H)`, the following hold:
//!
//! 1. `sp(P_X L) = sp(H)`;
//! 2. `sp(L) ⊆ sp(H) + sp(X)⊥`;
//! 3. `X'P_H X - X'P_L X` is nonnegative definite, so `L`'s
//!    noncentrality never exceeds `H`'s;
//! 4. `ν_H = ν_{P_X L} ≤ ν_L ≤ ν_H + n - ν_X`.
//!
//! [`check_dominance`] evaluates each conclusion exactly.

use crate::error::{Error, Result};
use crate::exactlin::{colspace, is_nnd, projector, Projector, RatMatrix};

/// Degrees of freedom in the sandwich `ν_H = ν_{P_X L} ≤ ν_L ≤ ν_H + n - ν_X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DfBounds {
    pub nu_h: usize,
    pub nu_pxl: usize,
    pub nu_l: usize,
    pub upper: usize,
}

impl DfBounds {
    pub fn holds(&self) -> bool {
        self.nu_h == self.nu_pxl && self.nu_pxl <= self.nu_l && self.nu_l <= self.upper
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceReport {
    pub span_recovered: bool,
    pub containment: bool,
    pub nnd_holds: bool,
    pub df_bounds: DfBounds,
    /// `X'P_H X - X'P_L X`.
    pub ncp_gap: RatMatrix,
    /// `P_H + (I - P_X) - P_L` is symmetric and idempotent.
    pub auxiliary_is_projector: bool,
}

impl DominanceReport {
    pub fn all_hold(&self) -> bool {
        self.span_recovered && self.containment && self.nnd_holds && self.df_bounds.holds()
    }
}

pub fn check_dominance(x: &RatMatrix, h: &RatMatrix, l: &RatMatrix) -> Result<DominanceReport> {
    let n = x.nrows();
    if h.nrows() != n || l.nrows() != n {
        return Err(Error::Dimension(format!("X, H and L must share {n} rows (got {}, {})", h.nrows(), l.nrows())));
    }
    let sp_x = colspace(x);
    let sp_h = colspace(h);
    if !sp_h.is_subspace_of(&sp_x)? {
        return Err(Error::Precondition("sp(H) is not contained in sp(X)".into()));
    }
    let xt = x.transpose();
    if colspace(&xt.try_mul(l)?) != colspace(&xt.try_mul(h)?) {
        return Err(Error::Precondition("sp(X'L) differs from sp(X'H)".into()));
    }

    let p_x = sp_x.projector();
    let p_h = sp_h.projector();
    let p_l = projector(l);
    let pxl = p_x.matrix().try_mul(l)?;
    let sp_pxl = colspace(&pxl);

    let span_recovered = sp_pxl == sp_h;
    let containment = colspace(l).is_subspace_of(&sp_h.sum(&sp_x.complement())?)?;
    let ncp_gap = xt.try_mul(p_h.matrix())?.try_mul(x)?.try_sub(&xt.try_mul(p_l.matrix())?.try_mul(x)?)?;
    let nnd_holds = is_nnd(&ncp_gap)?;

    let nu_h = p_h.rank();
    let nu_x = p_x.rank();
    let df_bounds = DfBounds { nu_h, nu_pxl: sp_pxl.dim(), nu_l: p_l.rank(), upper: nu_h + n - nu_x };

    let aux = p_h.matrix().try_add(p_x.orthogonal_complement().matrix())?.try_sub(p_l.matrix())?;
    let auxiliary_is_projector = Projector::try_from_matrix(aux).is_ok();

    Ok(DominanceReport { span_recovered, containment, nnd_holds, df_bounds, ncp_gap, auxiliary_is_projector })
}
