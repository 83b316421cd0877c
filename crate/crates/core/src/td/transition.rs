use super::TDSystem;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SubspaceBasis};

/// Projections onto the components of a direct sum decomposition of `V`.
pub fn projections(n: usize, parts: &[SubspaceBasis]) -> Result<Vec<Matrix>> {
    let cols: Vec<Vec<_>> = parts.iter().flat_map(|p| p.basis().iter().cloned()).collect();
    if cols.len() != n {
        return Err(Error::Dimension(format!("components have total dimension {} in V of dim {n}", cols.len())));
    }
    let b = Matrix::from_cols(n, &cols);
    let binv = b.inverse()?;
    let mut out = Vec::with_capacity(parts.len());
    let mut start = 0;
    let all: Vec<usize> = (0..n).collect();
    for p in parts {
        let idx: Vec<usize> = (start..start + p.dim()).collect();
        out.push(b.select(&all, &idx).mul(&binv.select(&idx, &all))?);
        start += p.dim();
    }
    Ok(out)
}

/// `Psi`, `Psi*`, their inverses and the split projections `E^v_i`.
#[derive(Debug, Clone)]
pub struct SplitTransition {
    pub proj: Vec<Matrix>,
    pub psi: Matrix,
    pub psistar: Matrix,
    pub psi_inv: Matrix,
    pub psistar_inv: Matrix,
}

pub fn split_transition(sys: &TDSystem, u: &[SubspaceBasis]) -> Result<SplitTransition> {
    let d = sys.d();
    let n = sys.n();
    let fail = |m: String| Err(Error::TransitionCheckFailed(m));
    let proj = projections(n, u)?;
    let mut psi = Matrix::zeros(n, n);
    let mut psistar = Matrix::zeros(n, n);
    let mut psi_inv = Matrix::zeros(n, n);
    let mut psistar_inv = Matrix::zeros(n, n);
    for i in 0..=d {
        psi = psi.add(&proj[d - i].mul(&sys.e[i])?)?;
        psistar = psistar.add(&proj[i].mul(&sys.estar[i])?)?;
        psi_inv = psi_inv.add(&sys.e[d - i].mul(&proj[i])?)?;
        psistar_inv = psistar_inv.add(&sys.estar[i].mul(&proj[i])?)?;
    }
    let id = Matrix::identity(n);
    if psi.mul(&psi_inv)? != id || psi_inv.mul(&psi)? != id {
        return fail("Psi Psi^-1 != I".into());
    }
    if psistar.mul(&psistar_inv)? != id || psistar_inv.mul(&psistar)? != id {
        return fail("Psi* Psi*^-1 != I".into());
    }
    for i in 0..=d {
        if sys.eigenspace(i).image(&psi) != u[d - i] {
            return fail(format!("Psi(E_{i} V) != U_{}", d - i));
        }
        if sys.dual_eigenspace(i).image(&psistar) != u[i] {
            return fail(format!("Psi*(E*_{i} V) != U_{i}"));
        }
        let f = &proj[i];
        if &f.mul(&sys.estar[i])?.mul(f)? != f || sys.estar[i].mul(f)?.mul(&sys.estar[i])? != sys.estar[i] {
            return fail(format!("efe identities fail at {i}"));
        }
        if &f.mul(&sys.e[d - i])?.mul(f)? != f || sys.e[i].mul(&proj[d - i])?.mul(&sys.e[i])? != sys.e[i] {
            return fail(format!("fef identities fail at {i}"));
        }
    }
    Ok(SplitTransition { proj, psi, psistar, psi_inv, psistar_inv })
}
