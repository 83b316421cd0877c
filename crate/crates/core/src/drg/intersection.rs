use super::graph::Graph;
use crate::error::{Error, Result};
use crate::linalg::{eigen_decompose, Matrix};
use crate::scalar::{int, BParams, Rational};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// `{b_0, ..., b_(d-1); c_1, ..., c_d}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionArray {
    pub d: usize,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
}

impl IntersectionArray {
    pub fn new(b: Vec<i64>, c: Vec<i64>) -> Result<Self> {
        if b.len() != c.len() || b.is_empty() {
            return Err(Error::Input("need b_0..b_(d-1) and c_1..c_d with d >= 1".into()));
        }
        if c[0] != 1 || b.iter().chain(&c).any(|&v| v <= 0) {
            return Err(Error::Input("c_1 = 1 and positive b_i, c_i required".into()));
        }
        Ok(IntersectionArray { d: b.len(), b, c })
    }

    pub fn k(&self) -> i64 {
        self.b[0]
    }

    /// `b_i`, with `b_d = 0`.
    pub fn b_at(&self, i: usize) -> i64 {
        self.b.get(i).copied().unwrap_or(0)
    }

    /// `c_i`, with `c_0 = 0`.
    pub fn c_at(&self, i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    pub fn a_at(&self, i: usize) -> i64 {
        self.k() - self.b_at(i) - self.c_at(i)
    }

    /// `k_i = |Gamma_i(x)|`.
    pub fn subconstituent_sizes(&self) -> Vec<i64> {
        let mut k = vec![1i64];
        for i in 1..=self.d {
            k.push(k[i - 1] * self.b_at(i - 1) / self.c_at(i));
        }
        k
    }

    /// The tridiagonal intersection matrix with rows `(c_i, a_i, b_i)`.
    pub fn intersection_matrix(&self) -> Matrix {
        let n = self.d + 1;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            if i > 0 {
                m.set(i, i - 1, int(self.c_at(i)));
            }
            m.set(i, i, int(self.a_at(i)));
            if i < self.d {
                m.set(i, i + 1, int(self.b_at(i)));
            }
        }
        m
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{{{}; {}}}", j(&self.b), j(&self.c))
    }
}

/// `(b_i, c_i)` seen from `x`, or a vertex `y` whose counts disagree with an
/// earlier vertex at the same distance.
fn local_array(g: &Graph, x: usize) -> std::result::Result<(Vec<i64>, Vec<i64>), usize> {
    let dist = g.distances_from(x);
    let d = *dist.iter().max().unwrap() as usize;
    let mut b = vec![None; d + 1];
    let mut c = vec![None; d + 1];
    for y in 0..g.n() {
        let i = dist[y];
        let (mut up, mut down) = (0i64, 0i64);
        for &z in g.neighbors(y) {
            let dz = dist[z as usize];
            if dz + 1 == i {
                down += 1;
            } else if dz == i + 1 {
                up += 1;
            }
        }
        let i = i as usize;
        for (slot, v) in [(&mut b[i], up), (&mut c[i], down)] {
            match *slot {
                None => *slot = Some(v),
                Some(w) if w != v => return Err(y),
                _ => {}
            }
        }
    }
    Ok((b.into_iter().map(Option::unwrap).collect(), c.into_iter().map(Option::unwrap).collect()))
}

/// Breadth-first search from every vertex; the counts toward and away from
/// `x` must depend only on `d(x, y)`.
pub fn check_distance_regular(g: &Graph) -> Result<IntersectionArray> {
    let locals: Vec<std::result::Result<(Vec<i64>, Vec<i64>), usize>> =
        (0..g.n()).into_par_iter().map(|x| local_array(g, x)).collect();
    let mut reference: Option<&(Vec<i64>, Vec<i64>)> = None;
    for (x, l) in locals.iter().enumerate() {
        match l {
            Err(y) => return Err(Error::NotDistanceRegular { x, y: *y }),
            Ok(arr) => match reference {
                None => reference = Some(arr),
                Some(r) if r != arr => {
                    let dist = g.distances_from(x);
                    let i = (0..arr.0.len().min(r.0.len()))
                        .find(|&i| arr.0[i] != r.0[i] || arr.1[i] != r.1[i])
                        .unwrap_or(arr.0.len().min(r.0.len()) - 1);
                    let y = (0..g.n()).find(|&y| dist[y] as usize == i).unwrap_or(x);
                    return Err(Error::NotDistanceRegular { x, y });
                }
                _ => {}
            },
        }
    }
    let (b, c) = reference.expect("at least one vertex");
    let d = b.len() - 1;
    if d == 0 {
        return Err(Error::Input("graph has a single vertex".into()));
    }
    IntersectionArray::new(b[..d].to_vec(), c[1..].to_vec())
}

/// Eigenvalues of the intersection matrix, largest first.
pub fn drg_eigenvalues(ia: &IntersectionArray) -> Result<Vec<Rational>> {
    let dec = eigen_decompose(&ia.intersection_matrix())?;
    let mut theta = dec.eigenvalues();
    if theta.len() != ia.d + 1 {
        return Err(Error::NotRationalSpectrum { found: theta.len(), degree: ia.d + 1 });
    }
    theta.sort_by(|a, b| b.cmp(a));
    Ok(theta)
}

/// Multiplicity of `theta` from the standard sequence `u_i(theta)`.
pub fn multiplicity(ia: &IntersectionArray, theta: &Rational) -> Rational {
    let k = int(ia.k());
    let mut u = vec![Rational::one(), theta / &k];
    for i in 1..ia.d {
        let next = ((theta - int(ia.a_at(i))) * &u[i] - int(ia.c_at(i)) * &u[i - 1]) / int(ia.b_at(i));
        u.push(next);
    }
    let sizes = ia.subconstituent_sizes();
    let n: i64 = sizes.iter().sum();
    let denom: Rational = sizes.iter().zip(&u).map(|(&ki, ui)| int(ki) * ui * ui).sum();
    int(n) / denom
}

/// `theta_i = r b^(-i) + s` with the ordering it was found in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineForm {
    #[serde(with = "crate::scalar::serde_rational")]
    pub r: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub s: Rational,
    #[serde(with = "crate::scalar::serde_rational_vec")]
    pub theta: Vec<Rational>,
}

/// Fits `theta_i = r b^(-i) + s`, trying the given order and its reverse.
pub fn fit_affine_form(theta: &[Rational], b: &BParams) -> Result<AffineForm> {
    if theta.len() < 2 {
        return Err(Error::NoAffineFit);
    }
    let one_minus = Rational::one() - b.b_inv();
    for order in [theta.to_vec(), theta.iter().rev().cloned().collect()] {
        let r = (&order[0] - &order[1]) / &one_minus;
        let s = &order[0] - &r;
        if r.is_zero() {
            continue;
        }
        if order.iter().enumerate().all(|(i, t)| *t == &r * b.pow(-(i as i64)) + &s) {
            return Ok(AffineForm { r, s, theta: order });
        }
    }
    Err(Error::NoAffineFit)
}

/// The base `b` suggested by three consecutive eigenvalues.
pub fn infer_b(theta: &[Rational]) -> Result<BParams> {
    if theta.len() < 3 {
        return Err(Error::ClassicalFit("need at least three eigenvalues to read off b".into()));
    }
    let den = &theta[1] - &theta[2];
    if den.is_zero() {
        return Err(Error::ClassicalFit("repeated eigenvalue".into()));
    }
    BParams::new((&theta[0] - &theta[1]) / den).map_err(|e| Error::ClassicalFit(e.to_string()))
}

/// Classical parameters `(d, b, alpha, beta)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalParams {
    pub d: usize,
    #[serde(with = "crate::scalar::serde_rational")]
    pub b: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub alpha: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub beta: Rational,
}

impl ClassicalParams {
    /// `alpha = b - 1`.
    pub fn is_formally_self_dual_type(&self) -> bool {
        self.alpha == &self.b - Rational::one()
    }
}

/// `[i] = 1 + b + ... + b^(i-1)`.
fn gauss(i: usize, b: &Rational) -> Rational {
    (0..i).map(|e| b.pow(e as i32)).sum()
}

/// Reads `alpha` from `c_2` and `beta` from `b_0`, then checks every `b_i`, `c_i`
/// against `b_i = ([d]-[i])(beta - alpha [i])` and `c_i = [i](1 + alpha [i-1])`.
pub fn fit_classical(ia: &IntersectionArray, b: &BParams) -> Result<ClassicalParams> {
    let d = ia.d;
    if d < 2 {
        return Err(Error::ClassicalFit("diameter must be at least 2".into()));
    }
    let bb = b.b().clone();
    let g = |i: usize| gauss(i, &bb);
    let alpha = int(ia.c_at(2)) / g(2) - Rational::one();
    let beta = int(ia.k()) / g(d);
    for i in 0..=d {
        let bi = (g(d) - g(i)) * (&beta - &alpha * g(i));
        if i < d && bi != int(ia.b_at(i)) {
            return Err(Error::ClassicalFit(format!("b_{i} = {} but the formula gives {bi}", ia.b_at(i))));
        }
        if i >= 1 {
            let ci = g(i) * (Rational::one() + &alpha * g(i - 1));
            if ci != int(ia.c_at(i)) {
                return Err(Error::ClassicalFit(format!("c_{i} = {} but the formula gives {ci}", ia.c_at(i))));
            }
        }
    }
    Ok(ClassicalParams { d, b: bb, alpha, beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drg::graph::build_bilinear_forms_graph;

    #[test]
    fn complete_and_cycle() {
        let k5 = check_distance_regular(&Graph::complete(5)).unwrap();
        assert_eq!((k5.d, k5.b.clone(), k5.c.clone()), (1, vec![4], vec![1]));
        assert_eq!(drg_eigenvalues(&k5).unwrap(), vec![int(4), int(-1)]);
        let c6 = check_distance_regular(&Graph::cycle(6)).unwrap();
        assert_eq!(c6.to_string(), "{2,1,1; 1,1,2}");
        assert_eq!(drg_eigenvalues(&c6).unwrap(), vec![int(2), int(1), int(-1), int(-2)]);
    }

    #[test]
    fn multiplicities_of_the_six_cycle() {
        let c6 = check_distance_regular(&Graph::cycle(6)).unwrap();
        let m: Vec<Rational> = drg_eigenvalues(&c6).unwrap().iter().map(|t| multiplicity(&c6, t)).collect();
        assert_eq!(m, vec![int(1), int(2), int(2), int(1)]);
    }

    #[test]
    fn path_is_not_distance_regular() {
        let p = Graph::from_edges(4, &[[0, 1], [1, 2], [2, 3]], Vec::new()).unwrap();
        assert!(matches!(check_distance_regular(&p), Err(Error::NotDistanceRegular { .. })));
        // a star: every leaf sees the same counts but the center does not
        let star = Graph::from_edges(4, &[[0, 1], [0, 2], [0, 3]], Vec::new()).unwrap();
        assert!(matches!(check_distance_regular(&star), Err(Error::NotDistanceRegular { .. })));
    }

    #[test]
    fn affine_fits() {
        let b2 = BParams::new(int(2)).unwrap();
        let f = fit_affine_form(&[int(3), int(1), int(0)], &b2).unwrap();
        assert_eq!((f.r, f.s), (int(4), int(-1)));
        assert_eq!(fit_affine_form(&[int(1), int(2), int(3)], &b2), Err(Error::NoAffineFit));
        let rev = fit_affine_form(&[int(0), int(1), int(3)], &b2).unwrap();
        assert_eq!(rev.theta, vec![int(3), int(1), int(0)]);
    }

    #[test]
    fn bilinear_3x3_parameters() {
        let g = build_bilinear_forms_graph(3, 3, 2).unwrap();
        let ia = check_distance_regular(&g).unwrap();
        assert_eq!(ia.subconstituent_sizes(), vec![1, 49, 294, 168]);
        let theta = drg_eigenvalues(&ia).unwrap();
        assert_eq!(theta, vec![int(49), int(17), int(1), int(-7)]);
        let mult: Vec<Rational> = theta.iter().map(|t| multiplicity(&ia, t)).collect();
        let total: Rational = mult.iter().sum();
        let trace: Rational = mult.iter().zip(&theta).map(|(m, t)| m * t).sum();
        assert_eq!(total, int(512));
        assert!(trace.is_zero());
        let b = infer_b(&theta).unwrap();
        assert_eq!(b.b(), &int(2));
        let fit = fit_affine_form(&theta, &b).unwrap();
        assert_eq!((fit.r.clone(), fit.s.clone()), (int(64), int(-15)));
        let cp = fit_classical(&ia, &b).unwrap();
        assert_eq!((cp.alpha.clone(), cp.beta.clone()), (int(1), int(7)));
        assert!(cp.is_formally_self_dual_type());
    }

    #[test]
    fn hypercube_is_classical_with_b_one_excluded() {
        // the 3-cube has classical parameters (3, 1, 0, 1); b = 1 is not a valid base
        let edges: Vec<[usize; 2]> =
            (0..8usize).flat_map(|v| (0..3).map(move |i| [v, v ^ (1 << i)])).filter(|e| e[0] < e[1]).collect();
        let ia = check_distance_regular(&Graph::from_edges(8, &edges, Vec::new()).unwrap()).unwrap();
        assert_eq!(ia.to_string(), "{3,2,1; 1,2,3}");
        let theta = drg_eigenvalues(&ia).unwrap();
        assert!(infer_b(&theta).is_err());
    }
}
