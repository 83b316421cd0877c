//! The alternating elements, generated from `W_0` and `W_1` by recursion.

use crate::carrier::{AlgebraCarrier, Flavor};
use crate::error::{Error, Result};
use crate::scalar::{BParams, Rational};
use crate::word::Kind;
use num_traits::One;

/// `W_(-k)`, `W_(k+1)`, `G_(k+1)` and `G~_(k+1)` for `k = 0..=K` in some carrier.
///
/// `g[k]` holds `G_(k+1)`; `G_0 = G~_0 = 1` is served by [`AlternatingFamily::g`].
#[derive(Debug, Clone)]
pub struct AlternatingFamily<E> {
    pub wminus: Vec<E>,
    pub wplus: Vec<E>,
    pub g: Vec<E>,
    pub gtilde: Vec<E>,
    pub one: E,
    pub params: BParams,
    pub carrier: &'static str,
}

impl<E> AlternatingFamily<E> {
    /// Largest `K` with all four lists populated through index `K`.
    pub fn depth(&self) -> usize {
        self.wminus.len() - 1
    }

    pub fn require(&self, need: usize) -> Result<()> {
        if self.depth() < need {
            return Err(Error::InsufficientFamilyDepth { have: self.depth(), need });
        }
        Ok(())
    }

    /// `W_(-k)`.
    pub fn w_minus(&self, k: usize) -> &E {
        &self.wminus[k]
    }

    /// `W_n` for `n >= 1`.
    pub fn w_pos(&self, n: usize) -> &E {
        &self.wplus[n - 1]
    }

    /// `G_n`, with `G_0 = 1`.
    pub fn g(&self, n: usize) -> &E {
        if n == 0 {
            &self.one
        } else {
            &self.g[n - 1]
        }
    }

    /// `G~_n`, with `G~_0 = 1`.
    pub fn gt(&self, n: usize) -> &E {
        if n == 0 {
            &self.one
        } else {
            &self.gtilde[n - 1]
        }
    }

    /// Element of the given kind; for `Wplus` the index is `k` in `W_(k+1)`,
    /// for `G`/`Gtilde` it is the subscript itself.
    pub fn get(&self, kind: Kind, k: usize) -> &E {
        match kind {
            Kind::Wminus => self.w_minus(k),
            Kind::Wplus => &self.wplus[k],
            Kind::G => self.g(k),
            Kind::Gtilde => self.gt(k),
        }
    }

    pub fn map<F, T>(&self, f: F) -> Result<AlternatingFamily<T>>
    where
        F: Fn(&E) -> Result<T>,
    {
        let m = |v: &[E]| v.iter().map(&f).collect::<Result<Vec<T>>>();
        Ok(AlternatingFamily {
            wminus: m(&self.wminus)?,
            wplus: m(&self.wplus)?,
            g: m(&self.g)?,
            gtilde: m(&self.gtilde)?,
            one: f(&self.one)?,
            params: self.params.clone(),
            carrier: self.carrier,
        })
    }
}

/// Runs the recursion in the order `W_0, W_1, G_1, G~_1, W_(-1), W_2, G_2, ...`
/// and stops after `G_(K+1), G~_(K+1)`.
pub fn generate_alternating<C: AlgebraCarrier>(
    w0: &C::Elem,
    w1: &C::Elem,
    k_max: usize,
    p: &BParams,
    carrier: &C,
) -> Result<AlternatingFamily<C::Elem>> {
    let mut fam = AlternatingFamily {
        wminus: vec![w0.clone()],
        wplus: vec![w1.clone()],
        g: Vec::new(),
        gtilde: Vec::new(),
        one: carrier.one(),
        params: p.clone(),
        carrier: carrier.tag(),
    };
    let one = Rational::one();
    let b_inv = p.b_inv().clone();
    let b_minus_one = p.b() - &one;
    let one_minus_binv = &one - &b_inv;
    for n in 1..=k_max + 1 {
        let denom = &one + p.pow(-(n as i64));
        let mut acc = carrier.zero();
        for k in 0..n {
            let t = carrier.mul(fam.w_minus(k), fam.w_pos(n - k))?;
            acc = carrier.add(&acc, &carrier.scale(&p.pow(-(k as i64)), &t)?)?;
        }
        for k in 1..n {
            let t = carrier.mul(fam.g(k), fam.gt(n - k))?;
            acc = carrier.sub(&acc, &carrier.scale(&p.pow(-(k as i64)), &t)?)?;
        }
        let wn = fam.w_pos(n).clone();
        let comm = carrier.bracket(&wn, w0, Flavor::Plain, p)?;
        let g = carrier.add(
            &carrier.scale(&denom.recip(), &acc)?,
            &carrier.scale(&(&denom * &one_minus_binv).recip(), &comm)?,
        )?;
        let comm0 = carrier.bracket(w0, &wn, Flavor::Plain, p)?;
        let gt = carrier.add(&g, &carrier.scale(&one_minus_binv.recip(), &comm0)?)?;
        fam.g.push(g);
        fam.gtilde.push(gt);
        if n <= k_max {
            let wm = carrier.bracket(w0, fam.g(n), Flavor::B, p)?;
            let wm = carrier.scale(&b_minus_one.recip(), &wm)?;
            let wp = carrier.bracket(fam.g(n), w1, Flavor::B, p)?;
            let wp = carrier.scale(&b_minus_one.recip(), &wp)?;
            fam.wminus.push(wm);
            fam.wplus.push(wp);
        }
    }
    debug_assert_eq!(fam.depth(), k_max);
    Ok(fam)
}
