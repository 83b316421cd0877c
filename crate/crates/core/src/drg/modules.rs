//! Decomposition of the standard module into irreducible modules for the
//! algebra generated by `A` and `A*`, in double precision.

use super::context::DRGContext;
use crate::error::{Error, Result};
use crate::scalar::to_f64;
use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default relative tolerance for float checks.
pub const TOL: f64 = 1e-8;

/// An irreducible module with an orthonormal basis.
#[derive(Debug, Clone)]
pub struct TModule {
    /// `n x m`, orthonormal columns.
    pub basis: DMatrix<f64>,
    /// `dim E*_i M` for `i = 0..=d`.
    pub shells: Vec<usize>,
    /// Restrictions of `A` and `A*` in the basis.
    pub a: DMatrix<f64>,
    pub astar: DMatrix<f64>,
}

impl TModule {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// First `i` with `E*_i M != 0`.
    pub fn endpoint(&self) -> usize {
        self.shells.iter().position(|&s| s > 0).unwrap_or(0)
    }

    /// Number of nonzero `E*_i M`, minus one.
    pub fn diameter(&self) -> usize {
        self.shells.iter().filter(|&&s| s > 0).count().saturating_sub(1)
    }

    pub fn is_thin(&self) -> bool {
        self.shells.iter().all(|&s| s <= 1)
    }
}

/// Float versions of `A`, `A*` acting through the adjacency lists.
pub struct FloatPair<'a> {
    ctx: &'a DRGContext,
    s: f64,
    dual: Vec<f64>,
}

impl<'a> FloatPair<'a> {
    pub fn new(ctx: &'a DRGContext) -> Self {
        let dual = (0..=ctx.d()).map(|i| to_f64(&ctx.dual_shifted(i))).collect();
        FloatPair { ctx, s: to_f64(&ctx.fit.s), dual }
    }

    pub fn apply_a(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let g = &self.ctx.graph;
        let mut y = DMatrix::zeros(x.nrows(), x.ncols());
        for c in 0..x.ncols() {
            for v in 0..x.nrows() {
                let mut acc = -self.s * x[(v, c)];
                for &w in g.neighbors(v) {
                    acc += x[(w as usize, c)];
                }
                y[(v, c)] = acc;
            }
        }
        y
    }

    pub fn apply_astar(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut y = x.clone();
        for v in 0..x.nrows() {
            let f = self.dual[self.ctx.dist[v]];
            for c in 0..x.ncols() {
                y[(v, c)] *= f;
            }
        }
        y
    }

    /// `E*_i x`.
    pub fn shell_part(&self, i: usize, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut y = x.clone();
        for v in 0..x.nrows() {
            if self.ctx.dist[v] != i {
                y.row_mut(v).fill(0.0);
            }
        }
        y
    }

    fn apply_letter(&self, l: u8, x: &DMatrix<f64>) -> DMatrix<f64> {
        if l == 0 {
            self.apply_a(x)
        } else {
            self.apply_astar(x)
        }
    }
}

/// Orthonormal columns found so far.
struct Found {
    q: DMatrix<f64>,
    used: usize,
}

impl Found {
    fn project_out(&self, v: &mut DVector<f64>) {
        if self.used == 0 {
            return;
        }
        let q = self.q.columns(0, self.used);
        for _ in 0..2 {
            let c = q.tr_mul(v);
            *v -= &q * c;
        }
    }

    fn push(&mut self, basis: &DMatrix<f64>) {
        for c in 0..basis.ncols() {
            self.q.set_column(self.used, &basis.column(c));
            self.used += 1;
        }
    }
}

/// Orthonormal basis of the column space of `p`, dropping directions with
/// Gram eigenvalue below `tol` times the largest.
fn orthonormal_columns(p: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    if p.ncols() == 0 {
        return p.clone();
    }
    let gram = p.tr_mul(p);
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&i| eig.eigenvalues[i] > tol * top.max(1.0)).collect();
    let mut out = DMatrix::zeros(p.nrows(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        let v = p * eig.eigenvectors.column(i) / eig.eigenvalues[i].sqrt();
        out.set_column(c, &v);
    }
    out
}

/// Groups sorted values whose neighbors differ by at most `tol`.
fn clusters(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match out.last_mut() {
            Some(c) if (values[i] - values[*c.last().unwrap()]).abs() <= tol => c.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Eigenspaces of a symmetric matrix as orthonormal column blocks, with the
/// mean eigenvalue of each.
pub fn symmetric_eigenspaces(m: &DMatrix<f64>, rel_tol: f64) -> Vec<(f64, DMatrix<f64>)> {
    let eig = SymmetricEigen::new(m.clone());
    let vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    let scale = vals.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    clusters(&vals, rel_tol * scale)
        .into_iter()
        .map(|c| {
            let mean = c.iter().map(|&i| vals[i]).sum::<f64>() / c.len() as f64;
            let mut b = DMatrix::zeros(m.nrows(), c.len());
            for (j, &i) in c.iter().enumerate() {
                b.set_column(j, &eig.eigenvectors.column(i));
            }
            (mean, b)
        })
        .collect()
}

/// The smallest module containing `v`, orthogonal to everything in `found`.
fn generate(pair: &FloatPair, v: DVector<f64>, found: &Found) -> DMatrix<f64> {
    let n = v.len();
    let mut cols: Vec<DVector<f64>> = Vec::new();
    let add = |mut w: DVector<f64>, cols: &mut Vec<DVector<f64>>| -> bool {
        let norm0 = w.norm();
        if norm0 == 0.0 {
            return false;
        }
        found.project_out(&mut w);
        for _ in 0..2 {
            for c in cols.iter() {
                let t = c.dot(&w);
                w -= c * t;
            }
        }
        let norm = w.norm();
        if norm <= 1e-9 * norm0 {
            return false;
        }
        cols.push(w / norm);
        true
    };
    add(v, &mut cols);
    let mut next = 0;
    while next < cols.len() {
        let u = DMatrix::from_column_slice(n, 1, cols[next].as_slice());
        for img in [pair.apply_a(&u), pair.apply_astar(&u)] {
            add(img.column(0).into_owned(), &mut cols);
        }
        next += 1;
    }
    DMatrix::from_columns(&cols)
}

/// Basis of the commutant of the restricted pair `(a, astar)`.
pub fn commutant(a: &DMatrix<f64>, astar: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    let m = a.nrows();
    let id = DMatrix::<f64>::identity(m, m);
    // vec(MX - XM) = (I (x) M - M^t (x) I) vec(X)
    let block = |x: &DMatrix<f64>| id.kronecker(x) - x.transpose().kronecker(&id);
    let (ka, ks) = (block(a), block(astar));
    let mut sys = DMatrix::zeros(2 * m * m, m * m);
    sys.rows_mut(0, m * m).copy_from(&ka);
    sys.rows_mut(m * m, m * m).copy_from(&ks);
    let scale = a.norm().max(astar.norm()).max(1.0);
    let svd = SVD::new(sys, false, true);
    let vt = svd.v_t.expect("requested");
    (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= 1e-9 * scale)
        .map(|i| DMatrix::from_iterator(m, m, vt.row(i).iter().cloned()))
        .collect()
}

fn restrict(pair: &FloatPair, basis: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (basis.tr_mul(&pair.apply_a(basis)), basis.tr_mul(&pair.apply_astar(basis)))
}

/// Splits a module by the eigenspaces of a generic symmetric commutant element
/// until every piece has a one-dimensional commutant.
fn split(pair: &FloatPair, basis: DMatrix<f64>, rng: &mut ChaCha8Rng, out: &mut Vec<DMatrix<f64>>) -> Result<()> {
    let (a, s) = restrict(pair, &basis);
    if basis.ncols() > 48 {
        return Err(Error::Input(format!("generated module of dimension {} is too large to split", basis.ncols())));
    }
    let comm = commutant(&a, &s);
    if comm.len() <= 1 {
        out.push(basis);
        return Ok(());
    }
    for _ in 0..8 {
        let mut y = DMatrix::zeros(a.nrows(), a.nrows());
        for x in &comm {
            y += (x + x.transpose()) * rng.gen_range(-1.0..1.0);
        }
        let spaces = symmetric_eigenspaces(&y, 1e-7);
        if spaces.len() > 1 {
            for (_, v) in spaces {
                split(pair, &basis * v, rng, out)?;
            }
            return Ok(());
        }
    }
    Err(Error::Input("commutant has no splitting element".into()))
}

/// Random symmetric element of the algebra, compressed to the columns of `s`.
fn local_operator(pair: &FloatPair, s: &DMatrix<f64>, rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
    let na = 1.0 / to_f64(&pair.ctx.fit.r).abs().max(1.0);
    let mut y = DMatrix::zeros(s.nrows(), s.ncols());
    for _ in 0..8 {
        let len = rng.gen_range(1..=2 * d + 2);
        let word: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2)).collect();
        let mut acc = s.clone();
        for &l in word.iter().rev() {
            acc = pair.apply_letter(l, &acc) * na;
        }
        y += acc * rng.gen_range(-1.0..1.0);
    }
    let h = s.tr_mul(&y);
    &h + h.transpose()
}

/// Orthogonal decomposition of the standard module into irreducible modules.
///
/// Modules are peeled off by increasing endpoint: for each `r`, the part of
/// `E*_r V` orthogonal to the modules found so far is split by a random
/// symmetric local operator, each eigenvector generates a module, and each
/// module is split further through its commutant.
pub fn decompose_t_modules(ctx: &DRGContext, seed: u64) -> Result<Vec<TModule>> {
    let n = ctx.n();
    let d = ctx.d();
    let pair = FloatPair::new(ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Found { q: DMatrix::zeros(n, n), used: 0 };
    let mut bases: Vec<DMatrix<f64>> = Vec::new();
    for r in 0..=d {
        let shell = ctx.shell(r);
        for _round in 0..4 {
            let mut p = DMatrix::zeros(n, shell.len());
            for (c, &y) in shell.iter().enumerate() {
                let mut e = DVector::zeros(n);
                e[y] = 1.0;
                found.project_out(&mut e);
                p.set_column(c, &e);
            }
            let s = orthonormal_columns(&p, 1e-10);
            if s.ncols() == 0 {
                break;
            }
            let h = local_operator(&pair, &s, &mut rng, d);
            for (_, vecs) in symmetric_eigenspaces(&h, 1e-9) {
                for c in 0..vecs.ncols() {
                    let v = &s * vecs.column(c);
                    let mut probe = v.clone();
                    found.project_out(&mut probe);
                    if probe.norm() < 1e-6 {
                        continue;
                    }
                    let m = generate(&pair, probe, &found);
                    let mut pieces = Vec::new();
                    split(&pair, m, &mut rng, &mut pieces)?;
                    for piece in pieces {
                        found.push(&piece);
                        bases.push(piece);
                    }
                }
            }
        }
    }
    if found.used != n {
        return Err(Error::DecompositionIncomplete { got: found.used, want: n });
    }
    Ok(bases
        .into_iter()
        .map(|basis| {
            let shells = (0..=d).map(|i| pair.shell_part(i, &basis).norm_squared().round() as usize).collect();
            let (a, astar) = restrict(&pair, &basis);
            TModule { basis, shells, a, astar }
        })
        .collect())
}

/// Largest `|<u, v>|` over basis vectors of distinct modules, and the largest
/// deviation of each module's Gram matrix from the identity.
pub fn orthogonality_defect(modules: &[TModule]) -> (f64, f64) {
    let mut cross = 0.0f64;
    let mut within = 0.0f64;
    for (i, m) in modules.iter().enumerate() {
        let g = m.basis.tr_mul(&m.basis) - DMatrix::identity(m.dim(), m.dim());
        within = within.max(g.amax());
        for o in &modules[i + 1..] {
            cross = cross.max(m.basis.tr_mul(&o.basis).amax());
        }
    }
    (cross, within)
}

/// Largest relative residual `|X B - B (B^t X B)|` of `A` and `A*` on a module.
pub fn invariance_defect(ctx: &DRGContext, m: &TModule) -> f64 {
    let pair = FloatPair::new(ctx);
    let scale = to_f64(&ctx.fit.r).abs().max(1.0);
    let ra = pair.apply_a(&m.basis) - &m.basis * &m.a;
    let rs = pair.apply_astar(&m.basis) - &m.basis * &m.astar;
    ra.amax().max(rs.amax()) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drg::{build_bilinear_forms_graph, prepare, DrgConfig};

    #[test]
    fn commutant_dimensions() {
        let id = DMatrix::<f64>::identity(2, 2);
        assert_eq!(commutant(&id, &id).len(), 4);
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        assert_eq!(commutant(&a, &s).len(), 1);
        let d = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 3.0]);
        assert_eq!(commutant(&d, &s).len(), 2);
    }

    #[test]
    fn symmetric_eigenspaces_group_repeats() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 5.0, 2.0]));
        let dims: Vec<(f64, usize)> = symmetric_eigenspaces(&m, 1e-9).into_iter().map(|(l, v)| (l, v.ncols())).collect();
        assert_eq!(dims, [(2.0, 2), (5.0, 1)]);
    }

    #[test]
    fn bil_2x2_decomposes() {
        let g = build_bilinear_forms_graph(2, 2, 2).unwrap();
        let (ctx, _) = prepare(&g, &DrgConfig::default()).unwrap();
        let ms = decompose_t_modules(&ctx, 7).unwrap();
        assert_eq!(ms.iter().map(TModule::dim).sum::<usize>(), 16);
        assert_eq!(ms[0].endpoint(), 0);
        assert_eq!(ms[0].dim(), 3);
        let (cross, within) = orthogonality_defect(&ms);
        assert!(cross < TOL && within < TOL);
        assert!(ms.iter().all(|m| invariance_defect(&ctx, m) < TOL && commutant(&m.a, &m.astar).len() == 1));
    }
}
