use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Rational;
use num_traits::Zero;

/// A subspace of `Q^n` stored as the reduced echelon rows of its basis.
///
/// The representation is canonical, so equal subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    n: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(n: usize) -> Self {
        SubspaceBasis { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self::from_columns_of(&Matrix::identity(n))
    }

    pub fn span(n: usize, vectors: &[Vec<Rational>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(n);
        }
        let mut m = Matrix::from_rows(vectors.to_vec()).expect("equal lengths");
        let pivots = m.rref_in_place();
        let rows = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        SubspaceBasis { n, rows, pivots }
    }

    /// Column space of `m`.
    pub fn from_columns_of(m: &Matrix) -> Self {
        Self::span(m.rows(), &m.columns())
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.n
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Basis vectors as the columns of an `n x dim` matrix.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_cols(self.n, &self.rows)
    }

    fn same(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::AmbientMismatch(self.n, o.n));
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (a, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
        }
        r.iter().all(Zero::is_zero)
    }

    pub fn contains(&self, o: &Self) -> Result<bool> {
        self.same(o)?;
        Ok(o.rows.iter().all(|v| self.contains_vector(v)))
    }

    pub fn sum(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        let mut v = self.rows.clone();
        v.extend(o.rows.iter().cloned());
        Ok(Self::span(self.n, &v))
    }

    pub fn sum_all<'a>(n: usize, parts: impl IntoIterator<Item = &'a SubspaceBasis>) -> Result<Self> {
        let mut acc = Self::zero(n);
        for p in parts {
            acc = acc.sum(p)?;
        }
        Ok(acc)
    }

    /// Zassenhaus: row reduce `[[a, a], [b, 0]]`; rows with zero left half
    /// carry a basis of the intersection in their right half.
    pub fn intersect(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.n));
        }
        let n = self.n;
        let mut rows = Vec::with_capacity(self.dim() + o.dim());
        for r in &self.rows {
            let mut x = r.clone();
            x.extend(r.iter().cloned());
            rows.push(x);
        }
        for r in &o.rows {
            let mut x = r.clone();
            x.extend(std::iter::repeat_n(Rational::zero(), n));
            rows.push(x);
        }
        let mut m = Matrix::from_rows(rows)?;
        let pivots = m.rref_in_place();
        let out: Vec<Vec<Rational>> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= n)
            .map(|(i, _)| m.row(i)[n..].to_vec())
            .collect();
        Ok(Self::span(n, &out))
    }

    /// `m(self)`.
    pub fn image(&self, m: &Matrix) -> Self {
        let v: Vec<Vec<Rational>> = self.rows.iter().map(|r| m.mul_vec(r)).collect();
        Self::span(m.rows(), &v)
    }

    /// Orthogonal complement with respect to the standard dot product.
    pub fn orthogonal_complement(&self) -> Self {
        if self.is_zero() {
            return Self::full(self.n);
        }
        let m = Matrix::from_rows(self.rows.clone()).expect("rectangular");
        Self::span(self.n, &m.nullspace())
    }

    /// Kernel of `m` as a subspace.
    pub fn kernel(m: &Matrix) -> Self {
        Self::span(m.cols(), &m.nullspace())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> Vec<Rational> {
        (0..n).map(|j| int((i == j) as i64)).collect()
    }

    #[test]
    fn coordinate_spans() {
        let a = SubspaceBasis::span(3, &[e(3, 0)]);
        let b = SubspaceBasis::span(3, &[e(3, 1)]);
        let s = a.sum(&b).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pivots(), &[0, 1]);
        assert_eq!(a.sum(&a).unwrap(), a);
        assert_eq!(a.sum(&SubspaceBasis::zero(3)).unwrap(), a);
        let c = SubspaceBasis::span(3, &[e(3, 0), e(3, 1)]);
        let d = SubspaceBasis::span(3, &[e(3, 1), e(3, 2)]);
        assert_eq!(c.intersect(&d).unwrap(), b);
        assert_eq!(c.intersect(&SubspaceBasis::full(3)).unwrap(), c);
        assert!(matches!(a.sum(&SubspaceBasis::zero(2)), Err(Error::AmbientMismatch(3, 2))));
    }

    #[test]
    fn complement() {
        let a = SubspaceBasis::span(3, &[vec![int(1), int(1), int(0)]]);
        let c = a.orthogonal_complement();
        assert_eq!(c.dim(), 2);
        assert!(c.intersect(&a).unwrap().is_zero());
    }

    fn arb_subspace() -> impl Strategy<Value = SubspaceBasis> {
        proptest::collection::vec(proptest::collection::vec(-2i64..3, 8), 0..6)
            .prop_map(|vs| SubspaceBasis::span(8, &vs.into_iter().map(|v| v.into_iter().map(int).collect()).collect::<Vec<_>>()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn dimension_formula(a in arb_subspace(), b in arb_subspace()) {
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
            prop_assert!(a.contains(&i).unwrap() && b.contains(&i).unwrap());
            prop_assert!(s.contains(&a).unwrap() && s.contains(&b).unwrap());
        }

        #[test]
        fn canonical_form(a in arb_subspace()) {
            // Respanning by a different basis gives the identical representation.
            let mixed: Vec<Vec<Rational>> = a.basis().iter().rev().enumerate()
                .map(|(k, v)| v.iter().map(|x| x * int(k as i64 + 2)).collect()).collect();
            prop_assert_eq!(SubspaceBasis::span(8, &mixed), a);
        }
    }
}
