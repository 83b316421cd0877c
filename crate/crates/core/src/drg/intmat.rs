//! Dense square matrices of rationals sharing one denominator, stored as
//! `i128` numerators. Every operation is exact or fails with `Overflow`.

use crate::carrier::AlgebraCarrier;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    den: i128,
    num: Vec<i128>,
}

fn big_to_i128(b: &BigInt) -> Result<i128> {
    b.to_i128().ok_or(Error::Overflow)
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, den: 1, num: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.num[i * n + i] = 1;
        }
        m
    }

    pub fn diag(d: &[i128]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.num[i * d.len() + i] = v;
        }
        m
    }

    /// Integer matrix from row-major entries.
    pub fn from_ints(n: usize, entries: Vec<i128>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!("{} entries for {n}x{n}", entries.len())));
        }
        Ok(IntMatrix { n, den: 1, num: entries })
    }

    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension("square matrix expected".into()));
        }
        let n = m.rows();
        let mut den = BigInt::from(1);
        for i in 0..n {
            for j in 0..n {
                den = den.lcm(m.get(i, j).denom());
            }
        }
        let den_i = big_to_i128(&den)?;
        let mut num = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = m.get(i, j);
                num.push(big_to_i128(&(e.numer() * (&den / e.denom())))?);
            }
        }
        Ok(IntMatrix { n, den: den_i, num }.normalized())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn numerator(&self, i: usize, j: usize) -> i128 {
        self.num[i * self.n + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        Rational::new(BigInt::from(self.numerator(i, j)), BigInt::from(self.den))
    }

    pub fn get_f64(&self, i: usize, j: usize) -> f64 {
        self.numerator(i, j) as f64 / self.den as f64
    }

    fn normalized(mut self) -> Self {
        let mut g = self.den;
        for &v in &self.num {
            if g == 1 {
                break;
            }
            if v != 0 {
                g = g.gcd(&v);
            }
        }
        if self.num.iter().all(|&v| v == 0) {
            self.den = 1;
            return self;
        }
        if g > 1 {
            self.den /= g;
            for v in &mut self.num {
                *v /= g;
            }
        }
        self
    }

    fn max_abs(&self) -> u128 {
        self.num.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    fn check_n(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::Dimension(format!("{} vs {}", self.n, o.n)));
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut num = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                num[j * n + i] = self.num[i * n + j];
            }
        }
        IntMatrix { n, den: self.den, num }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&v| v == 0)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_n(o)?;
        let l = self.den.lcm(&o.den);
        let (fa, fb) = (l / self.den, l / o.den);
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(&a, &b)| {
                a.checked_mul(fa)
                    .zip(b.checked_mul(fb))
                    .and_then(|(x, y)| x.checked_add(y))
                    .ok_or(Error::Overflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix { n: self.n, den: l, num }.normalized())
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        let (p, r) = (big_to_i128(c.numer())?, big_to_i128(c.denom())?);
        if p == 0 {
            return Ok(Self::zeros(self.n));
        }
        let g = self.den.gcd(&p);
        let (p, den) = (p / g, self.den / g);
        let den = den.checked_mul(r).ok_or(Error::Overflow)?;
        let num = self.num.iter().map(|&a| a.checked_mul(p).ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix { n: self.n, den, num }.normalized())
    }

    /// `self * o`, skipping zero entries of `self`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_n(o)?;
        let n = self.n;
        let den = self.den.checked_mul(o.den).ok_or(Error::Overflow)?;
        let mut num = vec![0i128; n * n];
        let bound = self
            .max_abs()
            .checked_mul(o.max_abs())
            .and_then(|v| v.checked_mul(n as u128));
        let fast = matches!(bound, Some(v) if v <= i128::MAX as u128);
        for i in 0..n {
            let row = &mut num[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.num[i * n + k];
                if a == 0 {
                    continue;
                }
                let brow = &o.num[k * n..(k + 1) * n];
                if fast {
                    for (c, &b) in row.iter_mut().zip(brow) {
                        *c += a * b;
                    }
                } else {
                    for (c, &b) in row.iter_mut().zip(brow) {
                        *c = a.checked_mul(b).and_then(|t| c.checked_add(t)).ok_or(Error::Overflow)?;
                    }
                }
            }
        }
        Ok(IntMatrix { n, den, num }.normalized())
    }

    /// `self * v` for an integer vector, as numerators over [`Self::denominator`].
    pub fn mul_int_vec(&self, v: &[i128]) -> Result<Vec<i128>> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut s: i128 = 0;
                for (k, &x) in v.iter().enumerate() {
                    let a = self.num[i * n + k];
                    if a != 0 && x != 0 {
                        s = a.checked_mul(x).and_then(|t| s.checked_add(t)).ok_or(Error::Overflow)?;
                    }
                }
                Ok(s)
            })
            .collect()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        let d = self.den as f64;
        nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| self.num[i * self.n + j] as f64 / d)
    }

    pub fn to_matrix(&self) -> Matrix {
        let rows = (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect();
        Matrix::from_rows(rows).expect("square")
    }

    /// Largest entry in absolute value.
    pub fn max_entry(&self) -> Rational {
        Rational::new(BigInt::from(self.max_abs()), BigInt::from(self.den))
    }

    pub fn nonzero_count(&self) -> usize {
        self.num.iter().filter(|&&v| v != 0).count()
    }

    /// Perturbs one numerator; for fault-injection tests.
    pub fn bump(&mut self, i: usize, j: usize) {
        self.num[i * self.n + j] += 1;
    }

    pub fn render(&self, max_terms: usize) -> String {
        let mut parts = Vec::new();
        let mut count = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                if self.numerator(i, j) != 0 {
                    count += 1;
                    if parts.len() < max_terms {
                        parts.push(format!("({i},{j})={}", self.get(i, j)));
                    }
                }
            }
        }
        if count == 0 {
            return "0".into();
        }
        if count > parts.len() {
            parts.push(format!("... {} nonzero entries", count));
        }
        parts.join(" ")
    }
}

/// Square matrices of a fixed size over [`IntMatrix`].
#[derive(Debug, Clone)]
pub struct IntMatrixCarrier {
    pub n: usize,
}

impl AlgebraCarrier for IntMatrixCarrier {
    type Elem = IntMatrix;

    fn tag(&self) -> &'static str {
        "int-matrix"
    }
    fn one(&self) -> IntMatrix {
        IntMatrix::identity(self.n)
    }
    fn zero(&self) -> IntMatrix {
        IntMatrix::zeros(self.n)
    }
    fn mul(&self, a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
        a.mul(b)
    }
    fn add(&self, a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
        IntMatrix::add(a, b)
    }
    fn scale(&self, c: &Rational, a: &IntMatrix) -> Result<IntMatrix> {
        a.scale(c)
    }
    fn is_zero(&self, a: &IntMatrix) -> bool {
        IntMatrix::is_zero(a)
    }
    fn render(&self, a: &IntMatrix, max_terms: usize) -> String {
        a.render(max_terms)
    }
}
