//! Truncated power series over the rationals.

use crate::error::{Error, Result};
use crate::scalar::{int, Rational};
use num_traits::{One, Zero};

/// Coefficients `c_0 .. c_N` of a series known modulo `t^(N+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Pads with zeros or truncates so the order is exactly `n`.
    pub fn new(mut coeffs: Vec<Rational>, n: usize) -> Self {
        coeffs.resize(n + 1, Rational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(Vec::new(), n)
    }

    pub fn one(n: usize) -> Self {
        Self::new(vec![Rational::one()], n)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(TruncatedSeries { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(TruncatedSeries { coeffs })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Cauchy product modulo `t^(N+1)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn inv(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = a0.recip();
        let n = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut s = Rational::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &out[k - j];
            }
            out.push(-s * &inv0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `exp(a)` via `n e_n = sum_k k a_k e_(n-k)`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut e: Vec<Rational> = Vec::with_capacity(n + 1);
        e.push(Rational::one());
        for m in 1..=n {
            let mut s = Rational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    s += int(k as i64) * &self.coeffs[k] * &e[m - k];
                }
            }
            e.push(s / int(m as i64));
        }
        Ok(TruncatedSeries { coeffs: e })
    }

    /// `log(a)` as the integral of `a'/a`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::LogConstantTerm);
        }
        let q = self.derivative().mul(&self.inv()?)?;
        Ok(q.integral())
    }

    /// Formal derivative; the top coefficient becomes zero.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut out: Vec<Rational> =
            (1..=n).map(|k| int(k as i64) * &self.coeffs[k]).collect();
        out.push(Rational::zero());
        TruncatedSeries { coeffs: out }
    }

    /// Antiderivative with zero constant term; the top input coefficient is dropped.
    pub fn integral(&self) -> Self {
        let n = self.order();
        let mut out = vec![Rational::zero()];
        for k in 1..=n {
            out.push(&self.coeffs[k - 1] / int(k as i64));
        }
        TruncatedSeries { coeffs: out }
    }

    /// Substitutes `t -> c t`.
    pub fn dilate(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &p);
            p *= c;
        }
        TruncatedSeries { coeffs }
    }

    /// First order where two series of equal order differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        (0..=self.order().min(other.order())).find(|&k| self.coeffs[k] != other.coeffs[k])
    }
}
