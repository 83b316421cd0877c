use super::TDSystem;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Rational;
use num_traits::{One, Zero};
use serde::Serialize;

/// `beta, gamma, gamma*, varrho, varrho*` of the tridiagonal relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TridiagonalParams {
    #[serde(with = "crate::scalar::serde_rational")]
    pub beta: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub gamma: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub gammastar: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub rho: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub rhostar: Rational,
}

fn unique(values: Vec<Rational>, what: &str) -> Result<Option<Rational>> {
    let mut it = values.into_iter();
    let Some(first) = it.next() else { return Ok(None) };
    for v in it {
        if v != first {
            return Err(Error::InconsistentSequences(format!("{what} takes values {first} and {v}")));
        }
    }
    Ok(Some(first))
}

fn gamma_rho(s: &[Rational], beta: &Rational) -> Result<(Rational, Rational)> {
    let d = s.len() - 1;
    let gammas: Vec<Rational> = (1..d).map(|i| &s[i - 1] - beta * &s[i] + &s[i + 1]).collect();
    let gamma = unique(gammas, "gamma")?.unwrap_or_else(Rational::zero);
    let rhos: Vec<Rational> = (1..=d)
        .map(|i| {
            let (a, b) = (&s[i - 1], &s[i]);
            a * a - beta * a * b + b * b - &gamma * (a + b)
        })
        .collect();
    let rho = unique(rhos, "varrho")?.unwrap_or_else(Rational::zero);
    Ok((gamma, rho))
}

/// Solves the parameter conditions from the eigenvalue sequences.
///
/// With `d >= 3`, `beta` is forced by the sequences. Below that the sequences
/// do not determine `beta`, and the geometric value `b + 1/b` with
/// `b = theta_1 / theta_0` is used instead.
pub fn tridiagonal_params(theta: &[Rational], thetastar: &[Rational]) -> Result<TridiagonalParams> {
    if theta.len() != thetastar.len() || theta.len() < 2 {
        return Err(Error::InconsistentSequences("need two sequences of equal length >= 2".into()));
    }
    let d = theta.len() - 1;
    let beta = if d >= 3 {
        let mut vals = Vec::new();
        for s in [theta, thetastar] {
            for i in 2..d {
                let den = &s[i - 1] - &s[i];
                if den.is_zero() {
                    return Err(Error::InconsistentSequences("repeated eigenvalue".into()));
                }
                vals.push((&s[i - 2] - &s[i + 1]) / den - Rational::one());
            }
        }
        unique(vals, "beta + 1")?.expect("d >= 3")
    } else {
        if theta[0].is_zero() {
            return Err(Error::InconsistentSequences("theta_0 = 0".into()));
        }
        let b = &theta[1] / &theta[0];
        &b + b.recip()
    };
    let (gamma, rho) = gamma_rho(theta, &beta)?;
    let (gammastar, rhostar) = gamma_rho(thetastar, &beta)?;
    Ok(TridiagonalParams { beta, gamma, gammastar, rho, rhostar })
}

/// Residuals of both tridiagonal relations on the matrices of `sys`.
pub fn tridiagonal_relation_residuals(sys: &TDSystem, p: &TridiagonalParams) -> Result<(Matrix, Matrix)> {
    let one_rel = |x: &Matrix, y: &Matrix, gamma: &Rational, rho: &Rational| -> Result<Matrix> {
        // [X, X^2 Y - beta X Y X + Y X^2 - gamma (X Y + Y X) - rho Y]
        let xx = x.mul(x)?;
        let inner = xx
            .mul(y)?
            .sub(&x.mul(y)?.mul(x)?.scale(&p.beta))?
            .add(&y.mul(&xx)?)?
            .sub(&x.mul(y)?.add(&y.mul(x)?)?.scale(gamma))?
            .sub(&y.scale(rho))?;
        x.mul(&inner)?.sub(&inner.mul(x)?)
    };
    let r1 = one_rel(&sys.a, &sys.astar, &p.gamma, &p.rho)?;
    let r2 = one_rel(&sys.astar, &sys.a, &p.gammastar, &p.rhostar)?;
    Ok((r1, r2))
}
