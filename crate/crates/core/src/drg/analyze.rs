use super::context::DRGContext;
use super::intmat::IntMatrix;
use super::modules::{FloatPair, TModule, TOL};
use crate::alternating::{generate_alternating, AlternatingFamily};
use crate::carrier::MatrixCarrier;
use crate::error::{Error, Result};
use crate::linalg::{rationalize, Matrix, SubspaceBasis};
use crate::report::{Report, RESIDUAL_TERMS};
use crate::scalar::Rational;
use crate::td::{common_eigenspaces, validate_td_system, verify_block_tables, Ordering};
use crate::word::Kind;
use nalgebra::{DMatrix, SVD};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

/// One common eigenspace: its dimension and the eigenvalue of each member.
#[derive(Debug, Clone, Serialize)]
pub struct EigenRow {
    pub dim: usize,
    pub eigenvalues: Vec<String>,
}

/// Common eigenspaces of the four families on one module.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FamilyTables {
    pub wminus: Vec<EigenRow>,
    pub wplus: Vec<EigenRow>,
    pub g: Vec<EigenRow>,
    pub gtilde: Vec<EigenRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureDims {
    pub wminus: Vec<usize>,
    pub wplus: Vec<usize>,
    pub g: Vec<usize>,
    pub gtilde: Vec<usize>,
    pub all_one: bool,
}

impl FamilyTables {
    fn slot(&mut self, kind: Kind) -> &mut Vec<EigenRow> {
        match kind {
            Kind::Wminus => &mut self.wminus,
            Kind::Wplus => &mut self.wplus,
            Kind::G => &mut self.g,
            Kind::Gtilde => &mut self.gtilde,
        }
    }

    pub fn dims(&self) -> ConjectureDims {
        let d = |v: &[EigenRow]| v.iter().map(|r| r.dim).collect::<Vec<_>>();
        let (wminus, wplus, g, gtilde) = (d(&self.wminus), d(&self.wplus), d(&self.g), d(&self.gtilde));
        let all_one = [&wminus, &wplus, &g, &gtilde].iter().all(|v| !v.is_empty() && v.iter().all(|&x| x == 1));
        ConjectureDims { wminus, wplus, g, gtilde, all_one }
    }
}

/// Report for one irreducible module.
#[derive(Debug, Clone, Serialize)]
pub struct ModuleRecord {
    pub index: usize,
    pub dim: usize,
    pub endpoint: usize,
    pub diameter: usize,
    pub shells: Vec<usize>,
    pub thin: bool,
    /// `"exact"` when a rational model of the module was checked, else `"float"`.
    pub mode: String,
    /// Largest `|X B - B (B^t X B)| / |X|` over the alternating elements.
    pub restriction_residual: f64,
    pub checks: Report,
    pub conjecture_dims: ConjectureDims,
    pub eigenvalue_tables: FamilyTables,
}

impl ModuleRecord {
    /// The first failed check as a `TheoremViolation` tagged `(a)`..`(f)`.
    pub fn ensure(&self) -> Result<()> {
        match self.checks.first_failure() {
            None => Ok(()),
            Some(i) => Err(Error::TheoremViolation {
                tag: i.id.chars().take(3).collect(),
                detail: format!("module {}: {} ({})", self.index, i.id, i.residual.clone().unwrap_or_default()),
            }),
        }
    }
}

const KINDS: [(Kind, &str); 4] = [(Kind::Wminus, "W-k"), (Kind::Wplus, "Wk+1"), (Kind::G, "Gk+1"), (Kind::Gtilde, "G~k+1")];

fn members<E>(fam: &AlternatingFamily<E>, kind: Kind, k_max: usize) -> Vec<&E> {
    (0..=k_max)
        .map(|k| match kind {
            Kind::Wminus => fam.w_minus(k),
            Kind::Wplus => fam.w_pos(k + 1),
            Kind::G => fam.g(k + 1),
            Kind::Gtilde => fam.gt(k + 1),
        })
        .collect()
}

// ---------------------------------------------------------------- float

fn norm(m: &DMatrix<f64>) -> f64 {
    m.norm().max(f64::MIN_POSITIVE)
}

fn rel(x: f64) -> String {
    format!("relative residual {x:.3e}")
}

/// Restrictions `B^t X B` of every element and the largest invariance residual.
pub fn restrict_family(
    fam_f: &AlternatingFamily<DMatrix<f64>>,
    basis: &DMatrix<f64>,
) -> Result<(AlternatingFamily<DMatrix<f64>>, f64)> {
    let worst = std::cell::Cell::new(0.0f64);
    let rf = fam_f.map(|x| {
        let xb = x * basis;
        let r = basis.tr_mul(&xb);
        let res = (&xb - basis * &r).amax() / x.amax().max(f64::MIN_POSITIVE);
        worst.set(worst.get().max(res));
        Ok(r)
    })?;
    Ok((rf, worst.get()))
}

type FloatSpaces = Vec<(Vec<f64>, DMatrix<f64>)>;

fn orthonormalize(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.clone().qr().q().columns(0, m.ncols()).into_owned()
}

fn cluster_values(vals: &[f64], tol: f64) -> Vec<f64> {
    let mut v = vals.to_vec();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some(c) if (x - c[c.len() - 1]).abs() <= tol => c.push(x),
            _ => out.push(vec![x]),
        }
    }
    out.into_iter().map(|c| c.iter().sum::<f64>() / c.len() as f64).collect()
}

/// Sequential refinement into common eigenspaces with orthonormal bases.
fn refine(members: &[&DMatrix<f64>], symmetric: bool) -> std::result::Result<FloatSpaces, String> {
    let m = members.first().map_or(0, |x| x.nrows());
    let mut parts: FloatSpaces = vec![(Vec::new(), DMatrix::identity(m, m))];
    for (k, x) in members.iter().enumerate() {
        let scale = norm(x);
        let mut next = Vec::new();
        for (vals, s) in parts {
            let c = s.tr_mul(&(*x * &s));
            if (*x * &s - &s * &c).amax() > TOL * scale {
                return Err(format!("member {k} does not preserve a common eigenspace"));
            }
            let pieces: Vec<(f64, DMatrix<f64>)> = if symmetric {
                let cs = (&c + c.transpose()) * 0.5;
                super::modules::symmetric_eigenspaces(&cs, 1e-6)
                    .into_iter()
                    .map(|(l, v)| (l, &s * v))
                    .collect()
            } else {
                let ev = c
                    .clone()
                    .eigenvalues()
                    .ok_or_else(|| format!("member {k} has non-real eigenvalues on a common eigenspace"))?;
                let ev: Vec<f64> = ev.iter().cloned().collect();
                let mut out = Vec::new();
                let mut total = 0;
                for l in cluster_values(&ev, 1e-6 * scale) {
                    let shifted = &c - DMatrix::identity(c.nrows(), c.nrows()) * l;
                    let svd = SVD::new(shifted, false, true);
                    let vt = svd.v_t.expect("requested");
                    let null: Vec<_> = (0..svd.singular_values.len())
                        .filter(|&i| svd.singular_values[i] <= 1e-7 * scale)
                        .map(|i| vt.row(i).transpose())
                        .collect();
                    if null.is_empty() {
                        continue;
                    }
                    total += null.len();
                    let nm = DMatrix::from_columns(&null);
                    out.push((l, &s * orthonormalize(&nm)));
                }
                if total != c.nrows() {
                    return Err(format!("member {k} is not diagonalizable on a common eigenspace"));
                }
                out
            };
            for (l, b) in pieces {
                let mut v = vals.clone();
                v.push(l);
                next.push((v, b));
            }
        }
        parts = next;
    }
    Ok(parts)
}

fn float_row(vals: &[f64], b: &DMatrix<f64>) -> EigenRow {
    EigenRow { dim: b.ncols(), eigenvalues: vals.iter().map(|v| format!("{v:.9e}")).collect() }
}

fn float_checks(rf: &AlternatingFamily<DMatrix<f64>>, k_max: usize, rep: &mut Report) -> FamilyTables {
    let mut tables = FamilyTables::default();
    for k in 0..=k_max {
        for (kind, x) in [(Kind::Wminus, rf.w_minus(k)), (Kind::Wplus, rf.w_pos(k + 1))] {
            let r = (x - x.transpose()).norm() / norm(x);
            rep.check(format!("(a) {} symmetric", kind.label(k)), r <= TOL, || rel(r));
        }
        let (g, gt) = (rf.g(k + 1), rf.gt(k + 1));
        let r = (g.transpose() - gt).norm() / norm(g);
        rep.check(format!("(b) G{}^t = G~{}", k + 1, k + 1), r <= TOL, || rel(r));
    }
    for (kind, name) in KINDS {
        let ms = members(rf, kind, k_max);
        for i in 0..ms.len() {
            for j in i + 1..ms.len() {
                let r = (ms[i] * ms[j] - ms[j] * ms[i]).norm() / (norm(ms[i]) * norm(ms[j]));
                rep.check(format!("(a) {name} members {i},{j} commute"), r <= TOL, || rel(r));
            }
        }
    }
    let mut spaces: Vec<FloatSpaces> = Vec::new();
    for (kind, name) in KINDS {
        let ms = members(rf, kind, k_max);
        let symmetric = matches!(kind, Kind::Wminus | Kind::Wplus);
        let tag = if symmetric { "(c)" } else { "(d)" };
        match refine(&ms, symmetric) {
            Err(e) => {
                rep.fail(format!("{tag} {name} common eigenspaces"), e);
                spaces.push(Vec::new());
            }
            Ok(sp) => {
                let total: usize = sp.iter().map(|(_, b)| b.ncols()).sum();
                let m = ms[0].nrows();
                rep.check(format!("{tag} {name} eigenspaces sum to the module"), total == m, || {
                    format!("dimensions sum to {total} of {m}")
                });
                let mut worst = 0.0f64;
                for (vals, b) in &sp {
                    for (x, l) in ms.iter().zip(vals) {
                        worst = worst.max((*x * b - b * *l).amax() / norm(x));
                    }
                }
                rep.check(format!("{tag} {name} common eigenvectors"), worst <= TOL, || rel(worst));
                if symmetric {
                    let mut cross = 0.0f64;
                    for (i, (_, b)) in sp.iter().enumerate() {
                        for (_, c) in &sp[i + 1..] {
                            cross = cross.max(b.tr_mul(c).amax());
                        }
                    }
                    rep.check(format!("(c) {name} eigenspaces mutually orthogonal"), cross <= TOL, || {
                        format!("largest inner product {cross:.3e}")
                    });
                }
                *tables.slot(kind) = sp.iter().map(|(v, b)| float_row(v, b)).collect();
                spaces.push(sp);
            }
        }
    }
    let (gs, gts) = (&spaces[2], &spaces[3]);
    if !gs.is_empty() && !gts.is_empty() {
        let mut partner = vec![Vec::new(); gs.len()];
        let mut back = vec![0usize; gts.len()];
        for (i, (_, u)) in gs.iter().enumerate() {
            for (j, (_, v)) in gts.iter().enumerate() {
                if u.tr_mul(v).amax() > 1e-6 {
                    partner[i].push(j);
                    back[j] += 1;
                }
            }
        }
        let matching = partner.iter().all(|p| p.len() == 1) && back.iter().all(|&c| c == 1);
        rep.check("(d) G/G~ nonorthogonality is a perfect matching", matching, || format!("partners {partner:?}"));
        if matching {
            let scales: Vec<f64> = members(rf, Kind::G, k_max).iter().map(|x| norm(x)).collect();
            let mut worst = 0.0f64;
            for (i, p) in partner.iter().enumerate() {
                for ((a, b), s) in gs[i].0.iter().zip(&gts[p[0]].0).zip(&scales) {
                    worst = worst.max((a - b).abs() / s);
                }
            }
            rep.check("(d) matched summands share eigenvalues", worst <= TOL, || rel(worst));
        }
    }
    tables
}

// ---------------------------------------------------------------- exact

/// A thin module in the basis `w_0, ..., w_delta` with `w_(i+1) = E*_(r+i+1) A w_i`;
/// `gram[i] = <w_i, w_i> / <w_0, w_0>`.
#[derive(Debug, Clone)]
pub struct ThinModel {
    pub endpoint: usize,
    pub a: Matrix,
    pub astar: Matrix,
    pub gram: Vec<Rational>,
}

fn checked_dot(u: &[i128], v: &[i128]) -> Result<i128> {
    u.iter().zip(v).try_fold(0i128, |acc, (a, b)| a.checked_mul(*b).and_then(|t| acc.checked_add(t)).ok_or(Error::Overflow))
}

/// Coordinates of `num / den` in the basis `ws`, where `ws[j]` lives on the
/// subconstituent at distance `r + j`; `None` if the vector is outside the span.
fn shell_coordinates(ctx: &DRGContext, ws: &[Vec<i128>], r: usize, num: &[i128], den: i128) -> Result<Option<Vec<Rational>>> {
    let pivots: Vec<usize> = ws.iter().map(|w| w.iter().position(|&x| x != 0).expect("nonzero basis vector")).collect();
    for (v, &x) in num.iter().enumerate() {
        let i = ctx.dist[v];
        if i < r || i >= r + ws.len() {
            if x != 0 {
                return Ok(None);
            }
            continue;
        }
        let j = i - r;
        let p = pivots[j];
        let lhs = x.checked_mul(ws[j][p]).ok_or(Error::Overflow)?;
        let rhs = num[p].checked_mul(ws[j][v]).ok_or(Error::Overflow)?;
        if lhs != rhs {
            return Ok(None);
        }
    }
    Ok(Some(
        pivots
            .iter()
            .enumerate()
            .map(|(j, &p)| Rational::new(BigInt::from(num[p]), BigInt::from(den) * BigInt::from(ws[j][p])))
            .collect(),
    ))
}

/// The module generated by the base vertex, with every alternating element
/// restricted exactly.
pub fn primary_model(ctx: &DRGContext, fam: &AlternatingFamily<IntMatrix>) -> Result<(ThinModel, AlternatingFamily<Matrix>)> {
    let n = ctx.n();
    let mut w0 = vec![0i128; n];
    w0[ctx.base] = 1;
    let mut ws = vec![w0];
    for i in 1..=ctx.d() {
        let prev = &ws[i - 1];
        let next: Vec<i128> = (0..n)
            .map(|v| if ctx.dist[v] == i { ctx.graph.neighbors(v).iter().map(|&u| prev[u as usize]).sum() } else { 0 })
            .collect();
        if next.iter().all(|&x| x == 0) {
            break;
        }
        ws.push(next);
    }
    let m = ws.len();
    let restrict = |x: &IntMatrix| -> Result<Matrix> {
        let mut out = Matrix::zeros(m, m);
        for (i, w) in ws.iter().enumerate() {
            let img = x.mul_int_vec(w)?;
            let c = shell_coordinates(ctx, &ws, 0, &img, x.denominator())?
                .ok_or_else(|| Error::VerificationFailed("primary module is not invariant".into()))?;
            for (j, v) in c.into_iter().enumerate() {
                out.set(j, i, v);
            }
        }
        Ok(out)
    };
    let rfam = fam.map(restrict)?;
    let g0 = Rational::from_integer(BigInt::from(checked_dot(&ws[0], &ws[0])?));
    let gram = ws
        .iter()
        .map(|w| Ok(Rational::from_integer(BigInt::from(checked_dot(w, w)?)) / &g0))
        .collect::<Result<Vec<_>>>()?;
    let model = ThinModel { endpoint: 0, a: rfam.w_minus(0).clone(), astar: rfam.w_pos(1).clone(), gram };
    Ok((model, rfam))
}

/// Rebuilds a thin module from its float basis: the recurrence coefficients
/// `A w_i = w_(i+1) + a_i w_i + x_i w_(i-1)` are recovered as rationals with
/// denominators up to `10^6`. Also returns the coordinates of the `w_i` in
/// the module's orthonormal basis.
pub fn reconstruct_model(ctx: &DRGContext, m: &TModule) -> Result<(ThinModel, DMatrix<f64>)> {
    if !m.is_thin() {
        return Err(Error::Input("exact models need a thin module".into()));
    }
    let pair = FloatPair::new(ctx);
    let r = m.endpoint();
    let dim = m.dim();
    let p = pair.shell_part(r, &m.basis);
    let best = (0..p.ncols()).max_by(|&i, &j| p.column(i).norm().total_cmp(&p.column(j).norm())).unwrap();
    let w0 = p.column(best) / p.column(best).norm();
    let mut ws = vec![DMatrix::from_column_slice(ctx.n(), 1, w0.as_slice())];
    for i in 1..dim {
        let next = pair.shell_part(r + i, &pair.apply_a(&ws[i - 1]));
        ws.push(next);
    }
    let ip = |u: &DMatrix<f64>, v: &DMatrix<f64>| u.dot(v);
    let recon = |x: f64, what: String| -> Result<Rational> {
        rationalize(x, 1_000_000, 1e-9 * x.abs().max(1.0))
            .ok_or_else(|| Error::VerificationFailed(format!("no rational reconstruction of {what} = {x}")))
    };
    let mut a = Matrix::zeros(dim, dim);
    let mut gram = vec![Rational::one()];
    for i in 0..dim {
        let aw = pair.apply_a(&ws[i]);
        a.set(i, i, recon(ip(&ws[i], &aw) / ip(&ws[i], &ws[i]), format!("a_{i}"))?);
        if i + 1 < dim {
            a.set(i + 1, i, Rational::one());
        }
        if i > 0 {
            let x = recon(ip(&ws[i - 1], &aw) / ip(&ws[i - 1], &ws[i - 1]), format!("x_{i}"))?;
            gram.push(&gram[i - 1] * &x);
            a.set(i - 1, i, x);
        }
    }
    let astar = Matrix::diag(&(0..dim).map(|i| ctx.dual_shifted(r + i)).collect::<Vec<_>>());
    let mut wc = DMatrix::zeros(dim, dim);
    for (i, w) in ws.iter().enumerate() {
        wc.set_column(i, &m.basis.tr_mul(w).column(0));
    }
    Ok((ThinModel { endpoint: r, a, astar, gram }, wc))
}

fn exact_row(vals: &[Rational], s: &SubspaceBasis) -> EigenRow {
    EigenRow { dim: s.dim(), eigenvalues: vals.iter().map(|v| v.to_string()).collect() }
}

/// Theorem checks on an exact model, with the inner product `diag(gram)`.
fn exact_checks(
    model: &ThinModel,
    fam: &AlternatingFamily<Matrix>,
    k_max: usize,
    ctx: &DRGContext,
    rep: &mut Report,
) -> Result<FamilyTables> {
    let gram = Matrix::diag(&model.gram);
    let gram_inv = Matrix::diag(&model.gram.iter().map(|g| g.recip()).collect::<Vec<_>>());
    let ip = |u: &[Rational], v: &[Rational]| -> Rational {
        u.iter().zip(v).zip(&model.gram).map(|((a, b), g)| a * b * g).sum()
    };
    let mut tables = FamilyTables::default();
    for k in 0..=k_max {
        for (kind, x) in [(Kind::Wminus, fam.w_minus(k)), (Kind::Wplus, fam.w_pos(k + 1))] {
            let dx = gram.mul(x)?;
            rep.check(format!("(a) exact {} self-adjoint", kind.label(k)), dx == dx.transpose(), || {
                dx.sub(&dx.transpose()).map(|r| r.render(RESIDUAL_TERMS)).unwrap_or_default()
            });
        }
        let adj = gram_inv.mul(&fam.g(k + 1).transpose())?.mul(&gram)?;
        rep.check(format!("(b) exact adjoint of G{} is G~{}", k + 1, k + 1), &adj == fam.gt(k + 1), || {
            adj.sub(fam.gt(k + 1)).map(|r| r.render(RESIDUAL_TERMS)).unwrap_or_default()
        });
    }
    let mut spaces = Vec::new();
    for (kind, name) in KINDS {
        let ms: Vec<Matrix> = members(fam, kind, k_max).into_iter().cloned().collect();
        for i in 0..ms.len() {
            for j in i + 1..ms.len() {
                let c = ms[i].mul(&ms[j])?.sub(&ms[j].mul(&ms[i])?)?;
                rep.check(format!("(a) exact {name} members {i},{j} commute"), c.is_zero(), || c.render(RESIDUAL_TERMS));
            }
        }
        let tag = if matches!(kind, Kind::Wminus | Kind::Wplus) { "(c)" } else { "(d)" };
        match common_eigenspaces(&ms) {
            Err(e) => {
                rep.fail(format!("{tag} exact {name} common eigenspaces"), e.to_string());
                spaces.push(Vec::new());
            }
            Ok(sp) => {
                let total: usize = sp.iter().map(|(_, s)| s.dim()).sum();
                rep.check(format!("{tag} exact {name} eigenspaces sum to the module"), total == model.a.rows(), || {
                    format!("dimensions sum to {total}")
                });
                if tag == "(c)" {
                    let orth = sp.iter().enumerate().all(|(i, (_, s))| {
                        sp[i + 1..].iter().all(|(_, t)| {
                            s.basis().iter().all(|u| t.basis().iter().all(|v| ip(u, v).is_zero()))
                        })
                    });
                    rep.check(format!("(c) exact {name} eigenspaces mutually orthogonal"), orth, String::new);
                }
                *tables.slot(kind) = sp.iter().map(|(v, s)| exact_row(v, s)).collect();
                spaces.push(sp);
            }
        }
    }
    let (gs, gts) = (&spaces[2], &spaces[3]);
    if !gs.is_empty() && !gts.is_empty() {
        let mut partner = vec![Vec::new(); gs.len()];
        let mut back = vec![0usize; gts.len()];
        for (i, (_, u)) in gs.iter().enumerate() {
            for (j, (_, v)) in gts.iter().enumerate() {
                if u.basis().iter().any(|a| v.basis().iter().any(|b| !ip(a, b).is_zero())) {
                    partner[i].push(j);
                    back[j] += 1;
                }
            }
        }
        let matching = partner.iter().all(|p| p.len() == 1) && back.iter().all(|&c| c == 1);
        rep.check("(d) exact G/G~ nonorthogonality is a perfect matching", matching, || format!("partners {partner:?}"));
        if matching {
            let same = partner.iter().enumerate().all(|(i, p)| gs[i].0 == gts[p[0]].0);
            rep.check("(d) exact matched summands share eigenvalues", same, String::new);
        }
    }
    if model.a.rows() == 1 {
        rep.pass("(f) one-dimensional module, no block tables");
    } else {
        match validate_td_system(&model.a, &model.astar, Ordering::QSerre(ctx.b.b().clone())) {
            Err(e) => rep.fail("(f) module carries a TD system of q-Serre type", e.to_string()),
            Ok(sys) => {
                rep.pass("(f) module carries a TD system of q-Serre type");
                let blocks = verify_block_tables(&sys, fam, k_max)?;
                for i in blocks.instances {
                    rep.record(format!("(f) {}", i.id), i.residual);
                }
            }
        }
    }
    Ok(tables)
}

/// Restricts the alternating elements to `m` and checks the orthogonality
/// theorems, the pairing of `G`- and `G~`-eigenspaces, and (for exact models)
/// the block tables of the TD system the module carries.
///
/// The primary module is always checked exactly; other thin modules are
/// checked exactly when `exact` is set.
pub fn analyze_module(
    ctx: &DRGContext,
    fam: &AlternatingFamily<IntMatrix>,
    fam_f: &AlternatingFamily<DMatrix<f64>>,
    m: &TModule,
    index: usize,
    k_max: usize,
    exact: bool,
) -> Result<ModuleRecord> {
    fam.require(k_max)?;
    let mut rep = Report::new(format!("module {index}"));
    let (rf, residual) = restrict_family(fam_f, &m.basis)?;
    rep.check("(r) alternating elements preserve the module", residual <= TOL, || rel(residual));
    let mut tables = float_checks(&rf, k_max, &mut rep);
    let primary = m.endpoint() == 0;
    let mut mode = "float";
    if primary || (exact && m.is_thin()) {
        mode = "exact";
        let (model, efam) = if primary {
            let (model, rfam) = primary_model(ctx, fam)?;
            let gen = generate_alternating(&model.a, &model.astar, k_max, &ctx.b, &MatrixCarrier::new(model.a.rows()))?;
            let same = (0..=k_max).all(|k| {
                KINDS.iter().all(|&(kind, _)| members(&gen, kind, k_max)[k] == members(&rfam, kind, k_max)[k])
            });
            rep.check("(r) exact restriction agrees with generation on the module", same, String::new);
            (model, rfam)
        } else {
            let (model, wc) = reconstruct_model(ctx, m)?;
            let gen = generate_alternating(&model.a, &model.astar, k_max, &ctx.b, &MatrixCarrier::new(model.a.rows()))?;
            let wc_inv = wc.clone().try_inverse().ok_or(Error::Singular)?;
            let mut worst = 0.0f64;
            for (kind, _) in KINDS {
                for (x, y) in members(&rf, kind, k_max).into_iter().zip(members(&gen, kind, k_max)) {
                    let yf = y.to_f64();
                    worst = worst.max((&wc_inv * x * &wc - &yf).norm() / norm(&yf));
                }
            }
            rep.check("(r) rational model matches the float restriction", worst <= TOL, || rel(worst));
            (model, gen)
        };
        let lhs: Vec<Rational> = (0..model.a.rows()).map(|i| model.astar.get(i, i).clone()).collect();
        let want: Vec<Rational> = (0..model.a.rows()).map(|i| ctx.dual_shifted(model.endpoint + i)).collect();
        rep.check("(r) A* acts on the model by the dual eigenvalues", lhs == want, String::new);
        tables = exact_checks(&model, &efam, k_max, ctx, &mut rep)?;
    }
    let conjecture_dims = tables.dims();
    Ok(ModuleRecord {
        index,
        dim: m.dim(),
        endpoint: m.endpoint(),
        diameter: m.diameter(),
        shells: m.shells.clone(),
        thin: m.is_thin(),
        mode: mode.into(),
        restriction_residual: residual,
        checks: rep,
        conjecture_dims,
        eigenvalue_tables: tables,
    })
}
