use super::catalog::{decomposition_catalog, Decomp};
use super::transition::projections;
use super::TDSystem;
use crate::alternating::AlternatingFamily;
use crate::error::{Error, Result};
use crate::linalg::{eigen_decompose, Matrix, SubspaceBasis};
use crate::scalar::Rational;
use crate::word::Kind;
use num_traits::Zero;
use serde::Serialize;

/// Matrix of `m` restricted to the invariant subspace `s`, in the
/// coordinates read off at the pivot rows of `s`.
pub fn restrict(m: &Matrix, s: &SubspaceBasis) -> Matrix {
    let imgs: Vec<Vec<Rational>> = s.basis().iter().map(|v| m.mul_vec(v)).collect();
    let piv = s.pivots();
    let mut r = Matrix::zeros(s.dim(), s.dim());
    for (c, img) in imgs.iter().enumerate() {
        for (row, &p) in piv.iter().enumerate() {
            r.set(row, c, img[p].clone());
        }
    }
    r
}

/// Common eigenspaces of a commuting family, with one eigenvalue per member.
pub fn common_eigenspaces(mats: &[Matrix]) -> Result<Vec<(Vec<Rational>, SubspaceBasis)>> {
    let n = mats.first().map_or(0, Matrix::rows);
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            if a.mul(b)? != b.mul(a)? {
                return Err(Error::NoCommonEigenbasis("family does not commute".into()));
            }
        }
    }
    let mut parts = vec![(Vec::new(), SubspaceBasis::full(n))];
    for m in mats {
        let mut next = Vec::new();
        for (vals, s) in parts {
            let dec = eigen_decompose(&restrict(m, &s)).map_err(|e| {
                Error::NoCommonEigenbasis(format!("restricted eigenproblem: {e}"))
            })?;
            if !dec.diagonalizable {
                return Err(Error::NoCommonEigenbasis("a member is not diagonalizable over Q".into()));
            }
            let basis = s.to_matrix();
            for (t, sub) in dec.pairs {
                let lifted: Vec<Vec<Rational>> = sub.basis().iter().map(|y| basis.mul_vec(y)).collect();
                let mut v = vals.clone();
                v.push(t);
                next.push((v, SubspaceBasis::span(n, &lifted)));
            }
        }
        parts = next;
    }
    Ok(parts)
}

fn tname(k: Kind) -> &'static str {
    if k == Kind::G {
        "G"
    } else {
        "G~"
    }
}

/// One transferred vector: the source eigenvector `v` with eigenvalues
/// `omega`, its image `u` and the target eigenvalues of `u`.
#[derive(Debug, Clone, Serialize)]
pub struct TransferRow {
    #[serde(with = "crate::scalar::serde_rational_vec")]
    pub omega: Vec<Rational>,
    #[serde(with = "crate::scalar::serde_rational_vec")]
    pub v: Vec<Rational>,
    #[serde(with = "crate::scalar::serde_rational_vec")]
    pub u: Vec<Rational>,
    #[serde(with = "crate::scalar::serde_rational_vec")]
    pub target_eigenvalues: Vec<Rational>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferTable {
    pub target: String,
    pub decomposition: String,
    pub rows: Vec<TransferRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferOutcome {
    pub source: String,
    pub tables: Vec<TransferTable>,
}

/// Moves a common eigenbasis of `{W_(-k)}` (or `{W_(k+1)}`) to common
/// eigenbases of `{G_k}` and `{G~_k}`.
///
/// A source vector in `E_j V` is sent along the decomposition on which the
/// target family acts diagonally; its target eigenvalues are `omega_k / omega_0`,
/// checked exactly for `0 <= k <= K`.
pub fn transfer_basis(sys: &TDSystem, fam: &AlternatingFamily<Matrix>, source: Kind) -> Result<TransferOutcome> {
    let d = sys.d();
    let kmax = fam.depth();
    let (members, idem, label): (Vec<Matrix>, &[Matrix], &str) = match source {
        Kind::Wminus => ((0..=kmax).map(|k| fam.w_minus(k).clone()).collect(), &sys.e, "Wminus"),
        Kind::Wplus => ((0..=kmax).map(|k| fam.w_pos(k + 1).clone()).collect(), &sys.estar, "Wplus"),
        _ => return Err(Error::Input("source must be Wminus or Wplus".into())),
    };
    let spaces = common_eigenspaces(&members)?;
    let catalog = decomposition_catalog(sys)?;
    let mut tables = Vec::new();
    for target in [Kind::G, Kind::Gtilde] {
        let decomp = if target == Kind::G { Decomp::ZeroStarZero } else { Decomp::DStarD };
        // index of the component meeting E_j V (or E*_j V) in the matching flag
        let slot = |j: usize| match (source, target) {
            (Kind::Wminus, Kind::G) | (Kind::Wplus, Kind::Gtilde) => d - j,
            _ => j,
        };
        let proj = projections(sys.n(), catalog.decomp(decomp))?;
        let mut map = Matrix::zeros(sys.n(), sys.n());
        for (j, e) in idem.iter().enumerate() {
            map = map.add(&proj[slot(j)].mul(e)?)?;
        }
        let mut rows = Vec::new();
        let mut images = Vec::new();
        for (omega, space) in &spaces {
            if omega[0].is_zero() {
                return Err(Error::EigenvalueRatioMismatch("omega_0 = 0".into()));
            }
            for v in space.basis() {
                let u = map.mul_vec(v);
                let mut target_eigenvalues = Vec::new();
                for k in 0..=kmax {
                    let ratio = &omega[k] / &omega[0];
                    let gk = fam.get(target, k);
                    let lhs = gk.mul_vec(&u);
                    let rhs: Vec<Rational> = u.iter().map(|x| x * &ratio).collect();
                    if lhs != rhs {
                        return Err(Error::EigenvalueRatioMismatch(format!(
                            "{label} -> {}: u is not a {}_{k} eigenvector with eigenvalue {ratio}",
                            tname(target),
                            tname(target)
                        )));
                    }
                    target_eigenvalues.push(ratio);
                }
                images.push(u.clone());
                rows.push(TransferRow { omega: omega.clone(), v: v.clone(), u, target_eigenvalues });
            }
        }
        if SubspaceBasis::span(sys.n(), &images).dim() != sys.n() {
            return Err(Error::NoCommonEigenbasis(format!("{label} -> {}: images are not a basis", tname(target))));
        }
        tables.push(TransferTable { target: tname(target).to_string(), decomposition: decomp.name(), rows });
    }
    Ok(TransferOutcome { source: label.to_string(), tables })
}
