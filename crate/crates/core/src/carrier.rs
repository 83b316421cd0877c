//! Associative algebras the alternating recursion can run in.

use crate::error::Result;
use crate::linalg::Matrix;
use crate::scalar::{int, BParams, Rational};
use crate::word::NCPoly;

/// `[X, Y]`, `[X, Y]_b = bXY - YX` or `[X, Y]_(b^-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Plain,
    B,
    BInverse,
}

/// An associative unital algebra over the rationals.
pub trait AlgebraCarrier: Sync {
    type Elem: Clone + Send + Sync;

    fn tag(&self) -> &'static str;
    fn one(&self) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn scale(&self, c: &Rational, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn render(&self, a: &Self::Elem, max_terms: usize) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.add(a, &self.scale(&int(-1), b)?)
    }

    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool> {
        Ok(self.is_zero(&self.sub(a, b)?))
    }

    fn bracket(&self, a: &Self::Elem, b: &Self::Elem, flavor: Flavor, p: &BParams) -> Result<Self::Elem> {
        let ab = self.mul(a, b)?;
        let ba = self.mul(b, a)?;
        let ab = match flavor {
            Flavor::Plain => ab,
            Flavor::B => self.scale(p.b(), &ab)?,
            Flavor::BInverse => self.scale(p.b_inv(), &ab)?,
        };
        self.sub(&ab, &ba)
    }

    /// `sum c_i e_i`.
    fn lin(&self, terms: &[(Rational, &Self::Elem)]) -> Result<Self::Elem> {
        let mut acc = self.zero();
        for (c, e) in terms {
            acc = self.add(&acc, &self.scale(c, e)?)?;
        }
        Ok(acc)
    }
}

/// `p(x, y)`: each word becomes the product of `x` and `y` in its letter order.
pub fn evaluate<C: AlgebraCarrier>(c: &C, p: &NCPoly, x: &C::Elem, y: &C::Elem) -> Result<C::Elem> {
    let mut acc = c.zero();
    for (w, coef) in p.terms() {
        let mut prod = c.one();
        for i in (0..w.len()).rev() {
            prod = c.mul(if w.letter(i) == 0 { x } else { y }, &prod)?;
        }
        acc = c.add(&acc, &c.scale(coef, &prod)?)?;
    }
    Ok(acc)
}

/// The q-shuffle algebra on `x`, `y`.
#[derive(Debug, Clone)]
pub struct ShuffleCarrier {
    pub params: BParams,
}

impl ShuffleCarrier {
    pub fn new(params: BParams) -> Self {
        ShuffleCarrier { params }
    }
}

impl AlgebraCarrier for ShuffleCarrier {
    type Elem = NCPoly;

    fn tag(&self) -> &'static str {
        "shuffle"
    }
    fn one(&self) -> NCPoly {
        NCPoly::one()
    }
    fn zero(&self) -> NCPoly {
        NCPoly::zero()
    }
    fn mul(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        a.shuffle(b, &self.params)
    }
    fn add(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        Ok(a.add(b))
    }
    fn scale(&self, c: &Rational, a: &NCPoly) -> Result<NCPoly> {
        Ok(a.scale(c))
    }
    fn is_zero(&self, a: &NCPoly) -> bool {
        a.is_zero()
    }
    fn render(&self, a: &NCPoly, max_terms: usize) -> String {
        a.render(max_terms)
    }
}

/// The free algebra with concatenation.
#[derive(Debug, Clone, Default)]
pub struct FreeCarrier;

impl AlgebraCarrier for FreeCarrier {
    type Elem = NCPoly;

    fn tag(&self) -> &'static str {
        "free"
    }
    fn one(&self) -> NCPoly {
        NCPoly::one()
    }
    fn zero(&self) -> NCPoly {
        NCPoly::zero()
    }
    fn mul(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        a.concat(b)
    }
    fn add(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly> {
        Ok(a.add(b))
    }
    fn scale(&self, c: &Rational, a: &NCPoly) -> Result<NCPoly> {
        Ok(a.scale(c))
    }
    fn is_zero(&self, a: &NCPoly) -> bool {
        a.is_zero()
    }
    fn render(&self, a: &NCPoly, max_terms: usize) -> String {
        a.render(max_terms)
    }
}

/// Square rational matrices of a fixed size.
#[derive(Debug, Clone)]
pub struct MatrixCarrier {
    pub n: usize,
}

impl MatrixCarrier {
    pub fn new(n: usize) -> Self {
        MatrixCarrier { n }
    }
}

impl AlgebraCarrier for MatrixCarrier {
    type Elem = Matrix;

    fn tag(&self) -> &'static str {
        "matrix"
    }
    fn one(&self) -> Matrix {
        Matrix::identity(self.n)
    }
    fn zero(&self) -> Matrix {
        Matrix::zeros(self.n, self.n)
    }
    fn mul(&self, a: &Matrix, b: &Matrix) -> Result<Matrix> {
        a.mul(b)
    }
    fn add(&self, a: &Matrix, b: &Matrix) -> Result<Matrix> {
        a.add(b)
    }
    fn scale(&self, c: &Rational, a: &Matrix) -> Result<Matrix> {
        Ok(a.scale(c))
    }
    fn is_zero(&self, a: &Matrix) -> bool {
        a.is_zero()
    }
    fn render(&self, a: &Matrix, max_terms: usize) -> String {
        a.render(max_terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QParams;

    #[test]
    fn shuffle_b_bracket_of_letters() {
        // [x, y]_b = (q^2 - q^-2) xy
        let qp = QParams::new(int(2)).unwrap();
        let c = ShuffleCarrier::new(qp.bparams().clone());
        let x = NCPoly::parse_word("x").unwrap();
        let y = NCPoly::parse_word("y").unwrap();
        let br = c.bracket(&x, &y, Flavor::B, qp.bparams()).unwrap();
        let expected = NCPoly::parse_word("xy").unwrap().scale(&(qp.qpow(2) - qp.qpow(-2)));
        assert_eq!(br, expected);
        assert!(c.is_zero(&c.bracket(&x, &x, Flavor::Plain, qp.bparams()).unwrap()));
    }

    #[test]
    fn evaluation_respects_letter_order() {
        let c = MatrixCarrier::new(2);
        let x = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let y = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        let mut p = NCPoly::parse_word("xy").unwrap();
        p.add_term(crate::word::Word::parse("yyx").unwrap(), int(3));
        // xy = diag(1, 0), yyx = 0
        assert_eq!(evaluate(&c, &p, &x, &y).unwrap(), Matrix::from_i64(&[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn matrix_plain_bracket() {
        let c = MatrixCarrier::new(2);
        let p = BParams::new(int(4)).unwrap();
        let e = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let f = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        let h = c.bracket(&e, &f, Flavor::Plain, &p).unwrap();
        assert_eq!(h, Matrix::from_i64(&[&[1, 0], &[0, -1]]));
    }
}
