//! Leonard systems of q-Serre type built from `(d, q, xi)`, the scalars `r_n`
//! and their generating functions.

use crate::alternating::generate_alternating;
use crate::carrier::MatrixCarrier;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::relations::serre;
use crate::report::Report;
use crate::scalar::{int, QParams, Rational};
use crate::series::TruncatedSeries;
use crate::td::{validate_td_system, Ordering, TDSystem};
use num_traits::{One, Zero};
use serde::Serialize;

/// The four maps `x01, x12, x23, x30` of a Leonard system of q-Serre type,
/// written in the basis of its split decomposition.
#[derive(Debug, Clone)]
pub struct QTetQuad {
    pub d: usize,
    pub params: QParams,
    pub xi: Rational,
    pub x01: Matrix,
    pub x12: Matrix,
    pub x23: Matrix,
    pub x30: Matrix,
    /// Superdiagonal of `x30`.
    pub f: Vec<Rational>,
    pub upsilon: Rational,
}

/// `q^(d-1), q^(d-3), ..., q^(1-d)`.
pub fn forbidden_xi(d: usize, p: &QParams) -> Vec<Rational> {
    let d = d as i64;
    (0..d).map(|j| p.qpow(d - 1 - 2 * j)).collect()
}

fn affine_eval(d: usize, p: &QParams, xi: &Rational, f: &[Rational]) -> (Matrix, Matrix, Matrix, Matrix, Matrix) {
    let n = d + 1;
    let di = d as i64;
    let q = p.q();
    let x23 = Matrix::diag(&(0..n as i64).map(|i| p.qpow(2 * i - di)).collect::<Vec<_>>());
    let mut x12 = Matrix::diag(&(0..n as i64).map(|i| p.qpow(di - 2 * i)).collect::<Vec<_>>());
    let mut x30 = x12.clone();
    for i in 0..d {
        x12.set(i + 1, i, int(1));
        x30.set(i, i + 1, f[i].clone());
    }
    let id = Matrix::identity(n);
    let ups = p.qpow(di + 1) + p.qpow(-di - 1);
    let x01 = id
        .scale(&ups)
        .sub(&x12.mul(&x30).unwrap().sub(&id).unwrap().scale(&xi.recip()))
        .unwrap()
        .sub(&x23.scale(&q.recip()))
        .unwrap()
        .scale(&q.recip());
    let qq = q - q.recip();
    let comm = x30.mul(&x12).unwrap().sub(&x12.mul(&x30).unwrap()).unwrap();
    let eq = x01.sub(&x23).unwrap().scale(xi).sub(&comm.scale(&qq.recip())).unwrap();
    (x01, x12, x23, x30, eq)
}

/// Solves for the superdiagonal of `x30` without screening `xi` or the
/// solution. [`build_qtet_quad`] is the checked entry point.
pub fn solve_quad(d: usize, p: &QParams, xi: &Rational) -> Result<QTetQuad> {
    if d == 0 {
        return Err(Error::Input("d must be at least 1".into()));
    }
    if xi.is_zero() {
        return Err(Error::ForbiddenXi("0".into()));
    }
    let n = d + 1;
    let zero = vec![Rational::zero(); d];
    let base = affine_eval(d, p, xi, &zero).4;
    // column k: coefficient of f_k in each entry of the equation
    let mut sys = Matrix::zeros(n * n, d + 1);
    for k in 0..d {
        let mut e = zero.clone();
        e[k] = Rational::one();
        let ek = affine_eval(d, p, xi, &e).4;
        for r in 0..n {
            for c in 0..n {
                sys.set(r * n + c, k, ek.get(r, c) - base.get(r, c));
            }
        }
    }
    for r in 0..n {
        for c in 0..n {
            sys.set(r * n + c, d, -base.get(r, c).clone());
        }
    }
    let pivots = sys.rref_in_place();
    if pivots.contains(&d) {
        return Err(Error::VerificationFailed("eval equation has no solution for the superdiagonal".into()));
    }
    if pivots.len() < d {
        return Err(Error::LinearSolveSingular);
    }
    let f: Vec<Rational> = (0..d).map(|k| sys.get(k, d).clone()).collect();
    let (x01, x12, x23, x30, _) = affine_eval(d, p, xi, &f);
    let di = d as i64;
    Ok(QTetQuad {
        d,
        params: p.clone(),
        xi: xi.clone(),
        x01,
        x12,
        x23,
        x30,
        f,
        upsilon: p.qpow(di + 1) + p.qpow(-di - 1),
    })
}

/// Residuals of the twelve defining identities, named.
pub fn quad_residuals(quad: &QTetQuad) -> Result<Vec<(&'static str, Matrix)>> {
    let p = &quad.params;
    let q = p.q().clone();
    let qi = q.recip();
    let qq = (&q - &qi).recip();
    let xi = &quad.xi;
    let id = Matrix::identity(quad.d + 1);
    let (x01, x12, x23, x30) = (&quad.x01, &quad.x12, &quad.x23, &quad.x30);
    let ups = id.scale(&quad.upsilon);
    let qw = |a: &Matrix, b: &Matrix| -> Result<Matrix> {
        a.mul(b)?.scale(&q).sub(&b.mul(a)?.scale(&qi))?.scale(&qq).sub(&id)
    };
    let comm = |a: &Matrix, b: &Matrix| -> Result<Matrix> { a.mul(b)?.sub(&b.mul(a)?) };
    let upsl = |s: &Rational, a: &Matrix, b: &Matrix, c: &Matrix, e: &Matrix| -> Result<Matrix> {
        a.mul(b)?.sub(&id)?.scale(s).add(&c.scale(&q))?.add(&e.scale(&qi))?.sub(&ups)
    };
    let carrier = MatrixCarrier::new(quad.d + 1);
    let bp = p.bparams();
    Ok(vec![
        ("qw x01 x12", qw(x01, x12)?),
        ("qw x12 x23", qw(x12, x23)?),
        ("qw x23 x30", qw(x23, x30)?),
        ("qw x30 x01", qw(x30, x01)?),
        ("eval xi", x01.sub(x23)?.scale(xi).sub(&comm(x30, x12)?.scale(&qq))?),
        ("eval xi^-1", x12.sub(x30)?.scale(&xi.recip()).sub(&comm(x01, x23)?.scale(&qq))?),
        ("upsilon x01 x23", upsl(xi, x01, x23, x30, x12)?),
        ("upsilon x12 x30", upsl(&xi.recip(), x12, x30, x01, x23)?),
        ("upsilon x23 x01", upsl(xi, x23, x01, x12, x30)?),
        ("upsilon x30 x12", upsl(&xi.recip(), x30, x12, x23, x01)?),
        ("q-Serre A", serre(&carrier, x12, x30, bp)?),
        ("q-Serre A*", serre(&carrier, x30, x12, bp)?),
    ])
}

/// Builds the quadruple for `(d, q, xi)` and checks all twelve identities.
pub fn build_qtet_quad(d: usize, p: &QParams, xi: &Rational) -> Result<QTetQuad> {
    if d == 0 {
        return Err(Error::Input("d must be at least 1".into()));
    }
    if xi.is_zero() || forbidden_xi(d, p).contains(xi) {
        return Err(Error::ForbiddenXi(xi.to_string()));
    }
    let quad = solve_quad(d, p, xi)?;
    if let Some(i) = quad.f.iter().position(Zero::is_zero) {
        return Err(Error::VerificationFailed(format!("superdiagonal entry f_{i} vanishes")));
    }
    for (name, r) in quad_residuals(&quad)? {
        if !r.is_zero() {
            return Err(Error::VerificationFailed(format!("{name}: residual {}", r.render(10))));
        }
    }
    Ok(quad)
}

/// `theta_i = q^(2i-d)` and `theta*_i = q^(d-2i)`.
pub fn qserre_sequences(d: usize, p: &QParams) -> (Vec<Rational>, Vec<Rational>) {
    let d = d as i64;
    ((0..=d).map(|i| p.qpow(2 * i - d)).collect(), (0..=d).map(|i| p.qpow(d - 2 * i)).collect())
}

/// The TD system `(x12, x30)` with the q-Serre orderings.
pub fn leonard_system_from_quad(quad: &QTetQuad) -> Result<TDSystem> {
    let (theta, thetastar) = qserre_sequences(quad.d, &quad.params);
    let sys = validate_td_system(&quad.x12, &quad.x30, Ordering::Given { theta, thetastar })?;
    if !sys.is_leonard() {
        return Err(Error::VerificationFailed(format!("shape {:?} is not all ones", sys.shape)));
    }
    Ok(sys)
}

/// `r_0..r_N` with `r∨_n = sum_k r_k r_(n-k) q^(n-2k)`.
#[derive(Debug, Clone, Serialize)]
pub struct RnSequence {
    pub d: usize,
    #[serde(with = "crate::scalar::serde_rational")]
    pub q: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub xi: Rational,
    #[serde(with = "crate::scalar::serde_rational_vec")]
    pub r: Vec<Rational>,
    #[serde(with = "crate::scalar::serde_rational_vec")]
    pub rvee: Vec<Rational>,
}

fn convolve(r: &[Rational], n: usize, p: &QParams) -> Rational {
    (0..=n).map(|k| &r[k] * &r[n - k] * p.qpow(n as i64 - 2 * k as i64)).sum()
}

impl RnSequence {
    fn from_r(d: usize, p: &QParams, xi: &Rational, r: Vec<Rational>) -> Self {
        let rvee = (0..r.len()).map(|n| convolve(&r, n, p)).collect();
        RnSequence { d, q: p.q().clone(), xi: xi.clone(), r, rvee }
    }

    /// Index of the first `n` where the stored `r∨_n` disagrees with the convolution.
    pub fn convolution_defect(&self) -> Option<usize> {
        let p = QParams::new(self.q.clone()).ok()?;
        (0..self.r.len()).find(|&n| convolve(&self.r, n, &p) != self.rvee[n])
    }
}

/// Reads `r_n` off the alternating elements realized by the quadruple and
/// checks all four closed forms for `n <= N`.
pub fn extract_rn(quad: &QTetQuad, n_max: usize) -> Result<RnSequence> {
    let p = &quad.params;
    let n = quad.d + 1;
    let carrier = MatrixCarrier::new(n);
    let fam = generate_alternating(&quad.x12, &quad.x30, n_max, p.bparams(), &carrier)?;
    let id = Matrix::identity(n);
    let qxi = p.q() * &quad.xi;
    let mut r = vec![Rational::one()];
    for k in 1..=n_max {
        let s = fam.g(k).add(&quad.x23.scale(&(&qxi * &r[k - 1])))?;
        let rk = s.get(0, 0).clone();
        if s != id.scale(&rk) {
            return Err(Error::NotScalarMultiple(k));
        }
        r.push(rk);
    }
    for k in 0..=n_max {
        let prev = if k == 0 { Rational::zero() } else { &qxi * &r[k - 1] };
        let checks = [
            (fam.w_minus(k), quad.x12.scale(&r[k]).sub(&id.scale(&prev))?),
            (fam.w_pos(k + 1), quad.x30.scale(&r[k]).sub(&id.scale(&prev))?),
            (fam.g(k), id.scale(&r[k]).sub(&quad.x23.scale(&prev))?),
            (fam.gt(k), id.scale(&r[k]).sub(&quad.x01.scale(&prev))?),
        ];
        if checks.iter().any(|(a, b)| *a != b) {
            return Err(Error::NotScalarMultiple(k));
        }
    }
    Ok(RnSequence::from_r(quad.d, p, &quad.xi, r))
}

/// `r∨` by its three-term recursion and `r` by inverting the convolution.
pub fn rn_by_recursion(d: usize, p: &QParams, xi: &Rational, n_max: usize) -> RnSequence {
    let q = p.q();
    let di = d as i64;
    let one = Rational::one();
    let c1 = q * (&one + xi * p.qpow(di + 1) + xi * p.qpow(-di - 1));
    let c2 = q * q * xi * (xi + p.qpow(di + 1) + p.qpow(-di - 1));
    let c3 = q * q * q * xi * xi;
    let mut rv: Vec<Rational> = vec![one.clone()];
    let at = |v: &[Rational], k: i64| if k < 0 { Rational::zero() } else { v[k as usize].clone() };
    for n in 1..=n_max as i64 {
        let next = &c1 * at(&rv, n - 1) - &c2 * at(&rv, n - 2) + &c3 * at(&rv, n - 3);
        rv.push(next);
    }
    let mut r = vec![one];
    for n in 1..=n_max {
        let ni = n as i64;
        let inner: Rational = (1..n).map(|k| &r[k] * &r[n - k] * p.qpow(ni - 2 * k as i64)).sum();
        r.push((&rv[n] - inner) / (p.qpow(ni) + p.qpow(-ni)));
    }
    RnSequence { d, q: q.clone(), xi: xi.clone(), r, rvee: rv }
}

fn mismatch(check: &str, a: &TruncatedSeries, b: &TruncatedSeries) -> Option<Error> {
    a.first_difference(b).map(|order| Error::CoefficientMismatch { check: check.into(), order })
}

/// `R(qt) R(t/q)` truncated at order `N`.
fn r_product(seq: &RnSequence, n_max: usize) -> Result<TruncatedSeries> {
    let r = TruncatedSeries::new(seq.r[..=n_max].to_vec(), n_max);
    r.dilate(&seq.q).mul(&r.dilate(&seq.q.recip()))
}

/// The three generating-function identities, each as its own instance.
///
/// A failing instance names the first order at which the two sides differ.
pub fn verify_generating_functions(seq: &RnSequence, n_max: usize) -> Result<Report> {
    if seq.r.len() <= n_max || seq.rvee.len() <= n_max {
        return Err(Error::Input(format!("sequence shorter than order {n_max}")));
    }
    let p = QParams::new(seq.q.clone())?;
    let q = p.q();
    let di = seq.d as i64;
    let xi = &seq.xi;
    let r = TruncatedSeries::new(seq.r[..=n_max].to_vec(), n_max);
    let prod = r_product(seq, n_max)?;
    let rvee = TruncatedSeries::new(seq.rvee[..=n_max].to_vec(), n_max);
    let lin = |c: Rational| TruncatedSeries::new(vec![Rational::one(), -c], n_max);
    let cubic = lin(q.clone()).mul(&lin(xi * p.qpow(di + 2)))?.mul(&lin(xi * p.qpow(-di)))?;
    let rhs = cubic.inv()?;
    let mut pc = vec![Rational::zero()];
    for k in 1..=n_max as i64 {
        let xk = crate::scalar::powi(xi, k);
        let num = Rational::one() + p.qpow(k * (di + 1)) * &xk + p.qpow(-k * (di + 1)) * &xk;
        pc.push(num / (p.qpow(k) + p.qpow(-k)) * p.qpow(k) / int(k));
    }
    let e = TruncatedSeries::new(pc, n_max).exp()?;
    let mut rep = Report::new("genfun");
    let show = |e: Option<Error>| e.map(|e| e.to_string());
    rep.record(format!("R∨(t) = R(qt)R(t/q) through order {n_max}"), show(mismatch("R∨(t) = R(qt)R(t/q)", &rvee, &prod)));
    rep.record(format!("R(qt)R(t/q) = 1/cubic through order {n_max}"), show(mismatch("R(qt)R(t/q) = 1/cubic", &prod, &rhs)));
    rep.record(format!("R(t) = exp P(t) through order {n_max}"), show(mismatch("R(t) = exp P(t)", &r, &e)));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    fn qp(q: Rational) -> QParams {
        QParams::new(q).unwrap()
    }

    #[test]
    fn d1_example() {
        let quad = build_qtet_quad(1, &qp(int(2)), &int(2)).unwrap();
        assert_eq!(quad.f, vec![frac(9, 4)]);
        let want = Matrix::from_rows(vec![vec![int(2), frac(9, 4)], vec![int(0), frac(1, 2)]]).unwrap();
        assert_eq!(quad.x30, want);
        // (q - 1/q)^2 (xi - 1)
        let q = int(2);
        let qq = &q - q.recip();
        assert_eq!(quad.f[0], &qq * &qq * (int(2) - int(1)));
    }

    #[test]
    fn forbidden_values() {
        assert!(matches!(build_qtet_quad(1, &qp(int(2)), &int(1)), Err(Error::ForbiddenXi(_))));
        assert!(matches!(build_qtet_quad(3, &qp(int(2)), &int(4)), Err(Error::ForbiddenXi(_))));
        assert_eq!(forbidden_xi(3, &qp(int(2))), vec![int(4), int(1), frac(1, 4)]);
    }

    #[test]
    fn diagonal_of_x12() {
        for d in [1usize, 3, 4] {
            let p = qp(frac(3, 5));
            let quad = build_qtet_quad(d, &p, &int(-3)).unwrap();
            for i in 0..=d {
                assert_eq!(quad.x12.get(i, i), &p.qpow(d as i64 - 2 * i as i64));
            }
        }
    }

    #[test]
    fn systems_validate() {
        let sys = leonard_system_from_quad(&build_qtet_quad(1, &qp(int(2)), &int(2)).unwrap()).unwrap();
        assert_eq!(sys.theta, vec![frac(1, 2), int(2)]);
        assert_eq!(sys.thetastar, vec![int(2), frac(1, 2)]);
        let sys = leonard_system_from_quad(&build_qtet_quad(3, &qp(int(2)), &int(2)).unwrap()).unwrap();
        assert_eq!(sys.shape, vec![1; 4]);
    }

    #[test]
    fn r1_at_d1() {
        let p = qp(int(2));
        let quad = build_qtet_quad(1, &p, &int(2)).unwrap();
        let seq = extract_rn(&quad, 8).unwrap();
        assert_eq!(seq.r[0], int(1));
        assert_eq!(seq.r[1], frac(38, 5));
        let rec = rn_by_recursion(1, &p, &int(2), 8);
        assert_eq!(seq.r, rec.r);
        assert_eq!(seq.rvee, rec.rvee);
        assert_eq!(rec.convolution_defect(), None);
    }

    #[test]
    fn rvee_examples() {
        for (d, q, xi) in [(1usize, int(2), int(2)), (4, frac(3, 5), int(-3))] {
            let p = qp(q.clone());
            let di = d as i64;
            let s = rn_by_recursion(d, &p, &xi, 3);
            assert_eq!(s.rvee[1], p.qpow(1) + &xi * p.qpow(di + 2) + &xi * p.qpow(-di));
            let x2 = &xi * &xi;
            assert_eq!(
                s.rvee[2],
                p.qpow(2) + &x2 * p.qpow(2 * di + 4) + &x2 * p.qpow(-2 * di) + &xi * p.qpow(di + 3)
                    + &xi * p.qpow(1 - di)
                    + &x2 * p.qpow(2)
            );
        }
    }

    #[test]
    fn generating_functions_d3() {
        let seq = rn_by_recursion(3, &qp(int(2)), &int(2), 12);
        let rep = verify_generating_functions(&seq, 12).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.first_failure());
    }

    #[test]
    fn perturbed_r3_is_caught_at_order_3() {
        let mut seq = rn_by_recursion(3, &qp(int(2)), &int(2), 12);
        seq.r[3] += int(1);
        let rep = verify_generating_functions(&seq, 12).unwrap();
        let fails: Vec<_> = rep.failures().collect();
        assert!(!fails.is_empty());
        for f in fails {
            assert!(f.residual.as_deref().unwrap().ends_with("order 3"), "{f:?}");
        }
    }

    #[test]
    fn fourth_qw_needs_x30_on_the_right() {
        let p = qp(int(2));
        let quad = build_qtet_quad(3, &p, &int(2)).unwrap();
        let q = p.q().clone();
        let id = Matrix::identity(4);
        let lhs = |right: &Matrix| {
            quad.x30
                .mul(&quad.x01)
                .unwrap()
                .scale(&q)
                .sub(&quad.x01.mul(right).unwrap().scale(&q.recip()))
                .unwrap()
                .scale(&(&q - q.recip()).recip())
        };
        assert_eq!(lhs(&quad.x30), id);
        assert_ne!(lhs(&quad.x23), id);
    }
}
