use super::{Matrix, SubspaceBasis};
use crate::error::{Error, Result};
use crate::scalar::{int, to_f64, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Characteristic polynomial `det(tI - M)`, coefficients from degree 0 upward
/// (Faddeev-LeVerrier).
pub fn char_poly(m: &Matrix) -> Vec<Rational> {
    let n = m.rows();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk).expect("square");
        for i in 0..n {
            let v = next.get(i, i) + &c[n - k + 1];
            next.set(i, i, v);
        }
        let am = m.mul(&next).expect("square");
        c[n - k] = -am.trace() / int(k as i64);
        mk = next;
    }
    c
}

pub fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Divides by `t - r`, assuming `r` is a root.
fn deflate(p: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = p.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (1..=n).rev() {
        carry = &p[k] + carry * r;
        q[k - 1] = carry.clone();
    }
    q
}

fn trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// The convergent of `x` with denominator at most `max_den` closest to `x`,
/// if it lies within `tol` of `x`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    convergents(x, max_den)
        .into_iter()
        .find(|c| (to_f64(c) - x).abs() <= tol)
}

/// Convergents of the continued fraction of `x`.
fn convergents(x: f64, max_den: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::one(), BigInt::from(x.floor() as i64));
    let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
    out.push(Rational::new(h1.clone(), k1.clone()));
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if frac.abs() < 1e-14 {
            break;
        }
        let inv = 1.0 / frac;
        let a = BigInt::from(inv.floor() as i64);
        frac = inv - inv.floor();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        out.push(Rational::new(h2.clone(), k2.clone()));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
    }
    out
}

fn small_divisors(n: &BigInt, limit: usize) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if p > BigInt::from(100_000) {
            return None;
        }
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
        p += 1;
    }
    if !n.is_one() {
        factors.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pe = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pe);
                pe *= &p;
            }
        }
        divs = next;
        if divs.len() > limit {
            return None;
        }
    }
    Some(divs)
}

/// All rational roots with multiplicity, if the polynomial splits over Q.
///
/// Candidates come first from floating point eigen-solutions of the companion
/// matrix (rationalized by continued fractions and verified exactly), and any
/// remainder is scanned with the rational root theorem.
pub fn rational_roots(p: &[Rational]) -> Result<Vec<Rational>> {
    rational_roots_with_hints(p, &[])
}

/// [`rational_roots`], trying the `hints` as candidate roots first.
pub fn rational_roots_with_hints(p: &[Rational], hints: &[Rational]) -> Result<Vec<Rational>> {
    let mut p = p.to_vec();
    trim(&mut p);
    let degree = p.len() - 1;
    let mut roots = Vec::new();
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        roots.push(Rational::zero());
    }
    let take = |p: &mut Vec<Rational>, r: &Rational, roots: &mut Vec<Rational>| {
        let mut hit = false;
        while p.len() > 1 && poly_eval(p, r).is_zero() {
            *p = deflate(p, r);
            roots.push(r.clone());
            hit = true;
        }
        hit
    };
    for h in hints {
        take(&mut p, h, &mut roots);
    }
    if p.len() == 2 {
        let r = -&p[0] / &p[1];
        take(&mut p, &r, &mut roots);
    }
    if p.len() > 1 {
        let lead = p.last().unwrap().clone();
        let monic: Vec<f64> = p.iter().map(|c| to_f64(&(c / &lead))).collect();
        let m = monic.len() - 1;
        let comp = nalgebra::DMatrix::from_fn(m, m, |i, j| {
            if j == m - 1 {
                -monic[i]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let dens: BigInt = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let lead_int = (p.last().unwrap() * Rational::from_integer(dens)).to_integer();
        let max_den = lead_int.abs().to_i64().unwrap_or(i64::MAX).clamp(1, 1 << 40);
        for z in comp.complex_eigenvalues().iter() {
            if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                continue;
            }
            for c in convergents(z.re, max_den) {
                if take(&mut p, &c, &mut roots) {
                    break;
                }
            }
        }
    }
    if p.len() == 2 {
        let r = -&p[0] / &p[1];
        take(&mut p, &r, &mut roots);
    }
    if p.len() > 1 {
        // Rational root theorem on the integer-normalized remainder.
        let dens: BigInt = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(dens.clone())).to_integer()).collect();
        let a0 = ints.first().unwrap();
        let an = ints.last().unwrap();
        if let (Some(num), Some(den)) = (small_divisors(a0, 20_000), small_divisors(an, 20_000)) {
            'outer: for a in &num {
                for b in &den {
                    for s in [1, -1] {
                        let cand = Rational::new(a * s, b.clone());
                        take(&mut p, &cand, &mut roots);
                        if p.len() == 1 {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    if p.len() > 1 {
        return Err(Error::NotRationalSpectrum { found: roots.len(), degree });
    }
    roots.sort();
    Ok(roots)
}

/// Eigenvalues (ascending) and eigenspaces of a rational matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub pairs: Vec<(Rational, SubspaceBasis)>,
    pub diagonalizable: bool,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> Vec<Rational> {
        self.pairs.iter().map(|(t, _)| t.clone()).collect()
    }

    pub fn space(&self, theta: &Rational) -> Option<&SubspaceBasis> {
        self.pairs.iter().find(|(t, _)| t == theta).map(|(_, s)| s)
    }
}

pub fn eigen_decompose(m: &Matrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::Dimension("eigen_decompose needs a square matrix".into()));
    }
    let mut diag: Vec<Rational> = (0..m.rows()).map(|i| m.get(i, i).clone()).collect();
    diag.sort();
    diag.dedup();
    let roots = rational_roots_with_hints(&char_poly(m), &diag)?;
    let mut distinct = roots.clone();
    distinct.dedup();
    let mut total = 0;
    let mut pairs = Vec::new();
    for t in distinct {
        let space = SubspaceBasis::kernel(&m.shift(&t));
        total += space.dim();
        pairs.push((t, space));
    }
    Ok(EigenDecomposition { pairs, diagonalizable: total == m.rows() })
}

/// `E_i = prod_(j != i) (M - theta_j I) / (theta_i - theta_j)`, verified.
pub fn primitive_idempotents(m: &Matrix, order: &[Rational]) -> Result<Vec<Matrix>> {
    let n = m.rows();
    for (i, a) in order.iter().enumerate() {
        if order[..i].contains(a) {
            return Err(Error::RepeatedEigenvalue(a.to_string()));
        }
    }
    let mut es = Vec::with_capacity(order.len());
    for (i, ti) in order.iter().enumerate() {
        let mut e = Matrix::identity(n);
        for (j, tj) in order.iter().enumerate() {
            if i != j {
                e = e.mul(&m.shift(tj))?.scale(&(ti - tj).recip());
            }
        }
        es.push(e);
    }
    let mut sum = Matrix::zeros(n, n);
    let mut recon = Matrix::zeros(n, n);
    for (e, t) in es.iter().zip(order) {
        sum = sum.add(e)?;
        recon = recon.add(&e.scale(t))?;
    }
    if sum != Matrix::identity(n) || &recon != m {
        return Err(Error::NotDiagonalizable);
    }
    for (i, a) in es.iter().enumerate() {
        for (j, b) in es.iter().enumerate() {
            let p = a.mul(b)?;
            let ok = if i == j { &p == a } else { p.is_zero() };
            if !ok || a.is_zero() {
                return Err(Error::NotDiagonalizable);
            }
        }
    }
    Ok(es)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    #[test]
    fn diagonal_matrix() {
        let m = Matrix::diag(&[int(1), int(2), int(2)]);
        let e = eigen_decompose(&m).unwrap();
        assert_eq!(e.eigenvalues(), vec![int(1), int(2)]);
        assert_eq!(e.pairs[0].1.dim(), 1);
        assert_eq!(e.pairs[1].1.dim(), 2);
        assert!(e.diagonalizable);
    }

    #[test]
    fn nilpotent_block() {
        let e = eigen_decompose(&Matrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        assert!(!e.diagonalizable);
        assert_eq!(e.pairs.len(), 1);
    }

    #[test]
    fn companion_of_geometric_roots() {
        // (t-1)(t-4)(t-16) = t^3 - 21 t^2 + 84 t - 64
        let m = Matrix::from_i64(&[&[0, 0, 64], &[1, 0, -84], &[0, 1, 21]]);
        assert_eq!(char_poly(&m), vec![int(-64), int(84), int(-21), int(1)]);
        let e = eigen_decompose(&m).unwrap();
        assert_eq!(e.eigenvalues(), vec![int(1), int(4), int(16)]);
        assert!(e.pairs.iter().all(|(_, s)| s.dim() == 1));
    }

    #[test]
    fn irrational_spectrum_is_an_error() {
        let m = Matrix::from_i64(&[&[0, 2], &[1, 0]]);
        assert_eq!(
            eigen_decompose(&m).unwrap_err(),
            Error::NotRationalSpectrum { found: 0, degree: 2 }
        );
    }

    #[test]
    fn fractional_roots() {
        // roots 3/5, -7/2, 0, 3/5
        let mut p = vec![int(1)];
        for r in [frac(3, 5), frac(-7, 2), int(0), frac(3, 5)] {
            let mut next = vec![Rational::zero(); p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &r;
            }
            p = next;
        }
        assert_eq!(rational_roots(&p).unwrap(), vec![frac(-7, 2), int(0), frac(3, 5), frac(3, 5)]);
    }

    #[test]
    fn idempotents_of_diag_and_leonard_dual() {
        let es = primitive_idempotents(&Matrix::diag(&[int(1), int(2)]), &[int(1), int(2)]).unwrap();
        assert_eq!(es[0], Matrix::diag(&[int(1), int(0)]));
        assert_eq!(es[1], Matrix::diag(&[int(0), int(1)]));
        let one = primitive_idempotents(&Matrix::diag(&[int(5)]), &[int(5)]).unwrap();
        assert_eq!(one[0], Matrix::identity(1));
        let m = Matrix::from_rows(vec![vec![int(2), frac(9, 4)], vec![int(0), frac(1, 2)]]).unwrap();
        let es = primitive_idempotents(&m, &[int(2), frac(1, 2)]).unwrap();
        // Lagrange by hand: E_0 = (M - 1/2)/(3/2)
        let e0 = m.shift(&frac(1, 2)).scale(&frac(2, 3));
        assert_eq!(es[0], e0);
        assert_eq!(es[0].mul(&es[1]).unwrap(), Matrix::zeros(2, 2));
        assert!(matches!(
            primitive_idempotents(&m, &[int(2), int(2)]),
            Err(Error::RepeatedEigenvalue(_))
        ));
        assert_eq!(
            primitive_idempotents(&Matrix::from_i64(&[&[0, 1], &[0, 0]]), &[int(0)]),
            Err(Error::NotDiagonalizable)
        );
    }
}
