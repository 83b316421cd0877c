use crate::error::{Error, Result};
use crate::linalg::{eigen_decompose, primitive_idempotents, Matrix, SubspaceBasis};
use crate::scalar::Rational;
use num_traits::Zero;

/// How to order the primitive idempotents.
#[derive(Debug, Clone)]
pub enum Ordering {
    /// Use these eigenvalue sequences as given.
    Given { theta: Vec<Rational>, thetastar: Vec<Rational> },
    /// Find a standard ordering from the tridiagonal pattern; the orientation is
    /// the one starting at the smaller end eigenvalue.
    Discover,
    /// Find a standard ordering and orient it so that `theta_i = b theta_(i-1)`
    /// and `theta*_i = theta*_(i-1) / b`.
    QSerre(Rational),
}

/// `A`, `A*` with standard orderings of their primitive idempotents.
#[derive(Debug, Clone)]
pub struct TDSystem {
    pub a: Matrix,
    pub astar: Matrix,
    pub e: Vec<Matrix>,
    pub estar: Vec<Matrix>,
    pub theta: Vec<Rational>,
    pub thetastar: Vec<Rational>,
    pub shape: Vec<usize>,
    /// Whether `rho_(i-1) <= rho_i` for `1 <= i <= d/2`; reported, not enforced.
    pub shape_unimodal: bool,
}

impl TDSystem {
    pub fn d(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn is_leonard(&self) -> bool {
        self.shape.iter().all(|&r| r == 1)
    }

    pub fn eigenspace(&self, i: usize) -> SubspaceBasis {
        SubspaceBasis::from_columns_of(&self.e[i])
    }

    pub fn dual_eigenspace(&self, i: usize) -> SubspaceBasis {
        SubspaceBasis::from_columns_of(&self.estar[i])
    }

    /// `E_lo V + ... + E_hi V`.
    pub fn eigen_sum(&self, idx: impl IntoIterator<Item = usize>) -> SubspaceBasis {
        let mut acc = SubspaceBasis::zero(self.n());
        for i in idx {
            acc = acc.sum(&self.eigenspace(i)).expect("same ambient");
        }
        acc
    }

    pub fn dual_eigen_sum(&self, idx: impl IntoIterator<Item = usize>) -> SubspaceBasis {
        let mut acc = SubspaceBasis::zero(self.n());
        for i in idx {
            acc = acc.sum(&self.dual_eigenspace(i)).expect("same ambient");
        }
        acc
    }

    /// Whether the eigenvalue sequences are geometric with ratios `b` and `1/b`.
    pub fn is_qserre(&self, b: &Rational) -> bool {
        let ok = |s: &[Rational], r: &Rational| s.windows(2).all(|w| &w[1] == &(&w[0] * r));
        ok(&self.theta, b) && ok(&self.thetastar, &b.recip())
    }
}

/// Orders the eigenvalues of `m` along the path on which the sandwich
/// `E_i other E_j` is nonzero.
fn path_order(
    values: &[Rational],
    idem: &[Matrix],
    other: &Matrix,
) -> Result<Vec<usize>> {
    let k = values.len();
    if k == 1 {
        return Ok(vec![0]);
    }
    let mut adj = vec![Vec::new(); k];
    for i in 0..k {
        for j in i + 1..k {
            let s = idem[i].mul(other)?.mul(&idem[j])?;
            let t = idem[j].mul(other)?.mul(&idem[i])?;
            if !s.is_zero() || !t.is_zero() {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let ends: Vec<usize> = (0..k).filter(|&i| adj[i].len() == 1).collect();
    if ends.len() != 2 || adj.iter().any(|a| a.len() > 2 || a.is_empty()) {
        let (i, j) = (0..k)
            .flat_map(|i| adj[i].iter().map(move |&j| (i, j)))
            .find(|&(i, j)| adj[i].len() > 2 || adj[j].len() > 2)
            .unwrap_or((0, 0));
        return Err(Error::NotTridiagonal(i, j));
    }
    let start = if values[ends[0]] <= values[ends[1]] { ends[0] } else { ends[1] };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < k {
        let next = *adj[cur].iter().find(|&&j| j != prev).ok_or(Error::NotTridiagonal(cur, cur))?;
        order.push(next);
        prev = cur;
        cur = next;
    }
    Ok(order)
}

fn orient_geometric(seq: &mut Vec<Rational>, ratio: &Rational) -> Result<()> {
    let fits = |s: &[Rational]| s.windows(2).all(|w| &w[1] == &(&w[0] * ratio));
    if fits(seq) {
        return Ok(());
    }
    seq.reverse();
    if fits(seq) {
        return Ok(());
    }
    Err(Error::NonstandardOrdering(format!(
        "eigenvalue path is not geometric with ratio {ratio}"
    )))
}

/// Closure of `v` under `A` and `A*`.
pub fn closure(a: &Matrix, astar: &Matrix, v: &[Rational]) -> SubspaceBasis {
    let n = a.rows();
    let mut span = SubspaceBasis::span(n, &[v.to_vec()]);
    let mut queue = vec![v.to_vec()];
    while let Some(w) = queue.pop() {
        for m in [a, astar] {
            let u = m.mul_vec(&w);
            if !span.contains_vector(&u) {
                span = span.sum(&SubspaceBasis::span(n, &[u.clone()])).expect("same ambient");
                queue.push(u);
            }
        }
    }
    span
}

/// Checks the axioms of a TD system and returns it with its idempotents.
pub fn validate_td_system(a: &Matrix, astar: &Matrix, ordering: Ordering) -> Result<TDSystem> {
    let n = a.rows();
    if !a.is_square() || !astar.is_square() || astar.rows() != n {
        return Err(Error::Dimension("A and A* must be square of equal size".into()));
    }
    let ea = eigen_decompose(a)?;
    let es = eigen_decompose(astar)?;
    if !ea.diagonalizable || !es.diagonalizable {
        return Err(Error::NotDiagonalizable);
    }
    if ea.pairs.len() != es.pairs.len() {
        return Err(Error::NonstandardOrdering(format!(
            "A has {} eigenvalues but A* has {}",
            ea.pairs.len(),
            es.pairs.len()
        )));
    }
    let (theta, thetastar) = match ordering {
        Ordering::Given { theta, thetastar } => {
            let same = |given: &[Rational], found: Vec<Rational>| {
                let mut g = given.to_vec();
                g.sort();
                g == found
            };
            if !same(&theta, ea.eigenvalues()) || !same(&thetastar, es.eigenvalues()) {
                return Err(Error::NonstandardOrdering(
                    "supplied orderings are not the spectra".into(),
                ));
            }
            (theta, thetastar)
        }
        Ordering::Discover | Ordering::QSerre(_) => {
            let va = ea.eigenvalues();
            let vs = es.eigenvalues();
            let ia = primitive_idempotents(a, &va)?;
            let is = primitive_idempotents(astar, &vs)?;
            let oa = path_order(&va, &ia, astar)?;
            let os = path_order(&vs, &is, a)?;
            let mut theta: Vec<Rational> = oa.iter().map(|&i| va[i].clone()).collect();
            let mut thetastar: Vec<Rational> = os.iter().map(|&i| vs[i].clone()).collect();
            if let Ordering::QSerre(b) = &ordering {
                orient_geometric(&mut theta, b)?;
                orient_geometric(&mut thetastar, &b.recip())?;
            }
            (theta, thetastar)
        }
    };
    let e = primitive_idempotents(a, &theta)?;
    let estar = primitive_idempotents(astar, &thetastar)?;
    let d = theta.len() - 1;
    for i in 0..=d {
        for j in 0..=d {
            let gap = i.abs_diff(j);
            if gap == 0 {
                continue;
            }
            for (x, m) in [(&e, astar), (&estar, a)] {
                let s = x[i].mul(m)?.mul(&x[j])?;
                if gap > 1 && !s.is_zero() {
                    return Err(Error::NotTridiagonal(i, j));
                }
                if gap == 1 && s.is_zero() {
                    return Err(Error::NotIrreducible(format!(
                        "sandwich between idempotents {i} and {j} vanishes"
                    )));
                }
            }
        }
    }
    check_irreducible(a, astar, &ea, &es)?;
    let shape: Vec<usize> = e.iter().map(Matrix::rank).collect();
    let dual_shape: Vec<usize> = estar.iter().map(Matrix::rank).collect();
    if shape != dual_shape {
        return Err(Error::SplitCheckFailed(format!(
            "eigenspace dimensions {shape:?} differ from dual {dual_shape:?}"
        )));
    }
    if (0..=d).any(|i| shape[i] != shape[d - i]) {
        return Err(Error::SplitCheckFailed(format!("shape {shape:?} is not symmetric")));
    }
    let shape_unimodal = (1..=d / 2).all(|i| shape[i - 1] <= shape[i]);
    Ok(TDSystem { a: a.clone(), astar: astar.clone(), e, estar, theta, thetastar, shape, shape_unimodal })
}

fn check_irreducible(
    a: &Matrix,
    astar: &Matrix,
    ea: &crate::linalg::EigenDecomposition,
    es: &crate::linalg::EigenDecomposition,
) -> Result<()> {
    let n = a.rows();
    let mut some_full = false;
    for i in 0..n {
        let mut v = vec![Rational::zero(); n];
        v[i] = num_traits::One::one();
        if closure(a, astar, &v).is_full() {
            some_full = true;
            break;
        }
    }
    if !some_full {
        return Err(Error::NotIrreducible("no coordinate vector generates V".into()));
    }
    for (label, dec) in [("A", ea), ("A*", es)] {
        for (t, space) in &dec.pairs {
            for v in space.basis() {
                let c = closure(a, astar, v);
                if !c.is_full() {
                    return Err(Error::NotIrreducible(format!(
                        "an eigenvector of {label} for {t} generates a {}-dimensional invariant subspace",
                        c.dim()
                    )));
                }
            }
        }
    }
    Ok(())
}
