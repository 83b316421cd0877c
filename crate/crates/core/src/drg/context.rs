use super::graph::Graph;
use super::intersection::{fit_classical, AffineForm, ClassicalParams, IntersectionArray};
use super::intmat::{IntMatrix, IntMatrixCarrier};
use crate::alternating::AlternatingFamily;
use crate::carrier::{evaluate, AlgebraCarrier};
use crate::error::{Error, Result};
use crate::relations::{serre, verify_relations, Suite};
use crate::report::{Report, RESIDUAL_TERMS};
use crate::scalar::{int, BParams, Rational};
use crate::word::{NCPoly, Word};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A distance-regular graph with a base vertex, its adjacency and dual
/// adjacency matrices, and the shifted pair `A = 𝔸 - sI`, `A* = 𝔸* - sI`.
#[derive(Debug, Clone)]
pub struct DRGContext {
    pub graph: Graph,
    pub base: usize,
    pub dist: Vec<usize>,
    pub ia: IntersectionArray,
    pub classical: ClassicalParams,
    pub fit: AffineForm,
    pub b: BParams,
    pub big_a: IntMatrix,
    pub big_astar: IntMatrix,
    pub a: IntMatrix,
    pub astar: IntMatrix,
    /// The q-Serre and adjointness checks made while building.
    pub checks: Report,
}

impl DRGContext {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn d(&self) -> usize {
        self.ia.d
    }

    pub fn carrier(&self) -> IntMatrixCarrier {
        IntMatrixCarrier { n: self.n() }
    }

    /// `theta*_i - s`, the diagonal entry of `A*` on the `i`-th subconstituent.
    pub fn dual_shifted(&self, i: usize) -> Rational {
        &self.fit.theta[i] - &self.fit.s
    }

    /// Vertices at distance `i` from the base vertex.
    pub fn shell(&self, i: usize) -> Vec<usize> {
        (0..self.n()).filter(|&y| self.dist[y] == i).collect()
    }
}

fn to_i128(r: &Rational) -> Result<i128> {
    if !r.is_integer() {
        return Err(Error::Input(format!("{r} is not an integer")));
    }
    r.numer().to_i128().ok_or(Error::Overflow)
}

fn shifted(m: &IntMatrix, s: &Rational) -> Result<IntMatrix> {
    m.add(&IntMatrix::identity(m.n()).scale(&-s)?)
}

/// Builds `𝔸`, `𝔸*(x)` with diagonal entry `theta_(d(x,y))`, shifts both by
/// `-s` and checks both q-Serre relations exactly.
pub fn build_pair(g: &Graph, x: usize, ia: &IntersectionArray, fit: &AffineForm, b: &BParams) -> Result<DRGContext> {
    let n = g.n();
    if x >= n {
        return Err(Error::Input(format!("base vertex {x} out of range")));
    }
    let classical = fit_classical(ia, b)?;
    if !classical.is_formally_self_dual_type() {
        return Err(Error::ClassicalFit(format!("alpha = {} but b - 1 = {}", classical.alpha, b.b() - Rational::one())));
    }
    if fit.theta[0] != int(ia.k()) {
        return Err(Error::Input("affine fit must start at the valency".into()));
    }
    let dist: Vec<usize> = g.distances_from(x).into_iter().map(|v| v as usize).collect();
    let mut entries = vec![0i128; n * n];
    for v in 0..n {
        for &w in g.neighbors(v) {
            entries[v * n + w as usize] = 1;
        }
    }
    let big_a = IntMatrix::from_ints(n, entries)?;
    let theta = fit.theta.iter().map(to_i128).collect::<Result<Vec<_>>>()?;
    let big_astar = IntMatrix::diag(&dist.iter().map(|&i| theta[i]).collect::<Vec<_>>());
    let a = shifted(&big_a, &fit.s)?;
    let astar = shifted(&big_astar, &fit.s)?;
    let c = IntMatrixCarrier { n };
    let mut checks = Report::new("pair");
    for (label, x1, y1) in [("[A,[A,[A,A*]_b]_1/b] = 0", &a, &astar), ("[A*,[A*,[A*,A]_b]_1/b] = 0", &astar, &a)] {
        let res = serre(&c, x1, y1, b)?;
        if !res.is_zero() {
            return Err(Error::QSerreViolation(format!("{label}: {}", res.render(RESIDUAL_TERMS))));
        }
        checks.pass(label);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for t in 0..3 {
        let u: Vec<i128> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let v: Vec<i128> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let dot = |p: &[i128], q: &[i128]| p.iter().zip(q).map(|(a, b)| a * b).sum::<i128>();
        let bu = astar.mul_int_vec(&u)?;
        let btv = astar.transpose().mul_int_vec(&v)?;
        checks.check(format!("<A* u, v> = <u, A*^t v> (sample {t})"), dot(&bu, &v) == dot(&u, &btv), || {
            format!("{} vs {}", dot(&bu, &v), dot(&u, &btv))
        });
    }
    Ok(DRGContext {
        graph: g.clone(),
        base: x,
        dist,
        ia: ia.clone(),
        classical,
        fit: fit.clone(),
        b: b.clone(),
        big_a,
        big_astar,
        a,
        astar,
        checks,
    })
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    let letters: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2)).collect();
    Word::from_letters(&letters).expect("short word")
}

/// Exact matrix invariants of the family realized on the graph: the four
/// commuting families, the symmetry of `W_(-k)`, `W_(k+1)`, the transposition
/// `G_(k+1)^t = G~_(k+1)`, and `♮(p)^t = ♮(†p)` for random shuffle products `p`.
pub fn verify_invariants(ctx: &DRGContext, fam: &AlternatingFamily<IntMatrix>, k_max: usize, seed: u64) -> Result<Report> {
    fam.require(k_max)?;
    let c = ctx.carrier();
    let mut rep = Report::new("drg-invariants");
    rep.absorb(verify_relations(fam, &c, Suite::Nrel2, k_max)?);
    let diff = |x: &IntMatrix, y: &IntMatrix| -> Result<Option<String>> {
        let d = x.add(&y.scale(&int(-1))?)?;
        Ok((!d.is_zero()).then(|| d.render(RESIDUAL_TERMS)))
    };
    for k in 0..=k_max {
        let wm = fam.w_minus(k);
        rep.record(format!("W-{k}^t = W-{k}"), diff(&wm.transpose(), wm)?);
        let wp = fam.w_pos(k + 1);
        rep.record(format!("W{}^t = W{}", k + 1, k + 1), diff(&wp.transpose(), wp)?);
        rep.record(format!("G{}^t = Gt{}", k + 1, k + 1), diff(&fam.g(k + 1).transpose(), fam.gt(k + 1))?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sc = crate::carrier::ShuffleCarrier::new(ctx.b.clone());
    for t in 0..3 {
        let u = NCPoly::word(random_word(&mut rng, 3));
        let v = NCPoly::word(random_word(&mut rng, 3));
        let p = sc.mul(&u, &v)?.scale(&Rational::new(BigInt::from(rng.gen_range(1..=5)), BigInt::one()));
        let lhs = evaluate(&c, &p, &ctx.a, &ctx.astar)?.transpose();
        let rhs = evaluate(&c, &p.dagger(), &ctx.a, &ctx.astar)?;
        rep.record(format!("natural(p)^t = natural(dagger p), p = {} (sample {t})", p.render(4)), diff(&lhs, &rhs)?);
    }
    Ok(rep)
}
