//! Instantiated relation suites for an alternating family.

use crate::alternating::{generate_alternating, AlternatingFamily};
use crate::carrier::{AlgebraCarrier, Flavor, ShuffleCarrier};
use crate::error::{Error, Result};
use crate::report::{Report, RESIDUAL_TERMS};
use crate::scalar::{BParams, Rational};
use crate::word::{alternating_word_image, Kind, NCPoly, Word};
use num_traits::One;
use rayon::prelude::*;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Nrel1,
    Nrel2,
    Ggww,
    FourP,
    QSerre,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Nrel1, Suite::Nrel2, Suite::Ggww, Suite::FourP, Suite::QSerre];

    /// Family depth needed to instantiate the suite up to `max_index`.
    pub fn required_depth(&self, max_index: usize) -> usize {
        match self {
            Suite::Nrel1 => max_index + 1,
            Suite::Nrel2 | Suite::FourP => max_index,
            Suite::Ggww => max_index.saturating_sub(1),
            Suite::QSerre => 0,
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Ok(match s {
            "nrel1" => Suite::Nrel1,
            "nrel2" => Suite::Nrel2,
            "ggww" => Suite::Ggww,
            "fourP" | "fourp" => Suite::FourP,
            "qserre" => Suite::QSerre,
            _ => return Err(Error::Input(format!("unknown suite {s}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Nrel1 => "nrel1",
            Suite::Nrel2 => "nrel2",
            Suite::Ggww => "ggww",
            Suite::FourP => "fourP",
            Suite::QSerre => "qserre",
        })
    }
}

type Check<'a, E> = (String, Box<dyn Fn() -> Result<E> + Send + Sync + 'a>);

/// `[X, [X, [X, Y]_b]_(b^-1)]`.
pub fn serre<C: AlgebraCarrier>(c: &C, x: &C::Elem, y: &C::Elem, p: &BParams) -> Result<C::Elem> {
    let inner = c.bracket(x, y, Flavor::B, p)?;
    let mid = c.bracket(x, &inner, Flavor::BInverse, p)?;
    c.bracket(x, &mid, Flavor::Plain, p)
}

/// Evaluates each instantiated identity `lhs - rhs` and records whether it vanishes.
pub fn verify_relations<C: AlgebraCarrier>(
    fam: &AlternatingFamily<C::Elem>,
    carrier: &C,
    suite: Suite,
    max_index: usize,
) -> Result<Report> {
    fam.require(suite.required_depth(max_index))?;
    let p = &fam.params;
    let c = carrier;
    let one = Rational::one();
    let mut checks: Vec<Check<'_, C::Elem>> = Vec::new();
    let br = move |a: &C::Elem, b: &C::Elem, f: Flavor| c.bracket(a, b, f, p);
    match suite {
        Suite::Nrel1 => {
            let coef1 = &one - p.b_inv();
            let coef2 = p.b() - &one;
            for k in 0..=max_index {
                let (w0, w1) = (fam.w_minus(0), fam.w_pos(1));
                let (wk1, wmk) = (fam.w_pos(k + 1), fam.w_minus(k));
                let (g, gt) = (fam.g(k + 1), fam.gt(k + 1));
                let (wmk1, wk2) = (fam.w_minus(k + 1), fam.w_pos(k + 2));
                let (c1, c2) = (coef1.clone(), coef2.clone());
                checks.push((
                    format!("k={k} [W0,W{}] = [W-{k},W1]", k + 1),
                    Box::new(move || c.sub(&br(w0, wk1, Flavor::Plain)?, &br(wmk, w1, Flavor::Plain)?)),
                ));
                checks.push((
                    format!("k={k} [W0,W{}] = (1-1/b)(Gt{} - G{})", k + 1, k + 1, k + 1),
                    Box::new(move || {
                        let rhs = c.scale(&c1, &c.sub(gt, g)?)?;
                        c.sub(&br(w0, wk1, Flavor::Plain)?, &rhs)
                    }),
                ));
                checks.push((
                    format!("k={k} [W0,G{}]_b = [Gt{},W0]_b", k + 1, k + 1),
                    Box::new(move || c.sub(&br(w0, g, Flavor::B)?, &br(gt, w0, Flavor::B)?)),
                ));
                let c2b = c2.clone();
                checks.push((
                    format!("k={k} [W0,G{}]_b = (b-1)W-{}", k + 1, k + 1),
                    Box::new(move || c.sub(&br(w0, g, Flavor::B)?, &c.scale(&c2b, wmk1)?)),
                ));
                checks.push((
                    format!("k={k} [G{},W1]_b = [W1,Gt{}]_b", k + 1, k + 1),
                    Box::new(move || c.sub(&br(g, w1, Flavor::B)?, &br(w1, gt, Flavor::B)?)),
                ));
                checks.push((
                    format!("k={k} [G{},W1]_b = (b-1)W{}", k + 1, k + 2),
                    Box::new(move || c.sub(&br(g, w1, Flavor::B)?, &c.scale(&c2, wk2)?)),
                ));
            }
        }
        Suite::Nrel2 => {
            for k in 0..=max_index {
                for l in k + 1..=max_index {
                    let pairs = [
                        (format!("[W-{k},W-{l}]"), fam.w_minus(k), fam.w_minus(l)),
                        (format!("[W{},W{}]", k + 1, l + 1), fam.w_pos(k + 1), fam.w_pos(l + 1)),
                        (format!("[G{},G{}]", k + 1, l + 1), fam.g(k + 1), fam.g(l + 1)),
                        (format!("[Gt{},Gt{}]", k + 1, l + 1), fam.gt(k + 1), fam.gt(l + 1)),
                    ];
                    for (name, a, b) in pairs {
                        checks.push((
                            format!("k={k} l={l} {name} = 0"),
                            Box::new(move || br(a, b, Flavor::Plain)),
                        ));
                    }
                }
            }
        }
        Suite::Ggww => {
            for n in 1..=max_index {
                checks.push((
                    format!("n={n} sum G_k Gt_(n-k) b^-k = sum W_-k W_(n-k) b^-k"),
                    Box::new(move || {
                        let mut acc = c.zero();
                        for k in 0..=n {
                            let t = c.mul(fam.g(k), fam.gt(n - k))?;
                            acc = c.add(&acc, &c.scale(&p.pow(-(k as i64)), &t)?)?;
                        }
                        for k in 0..n {
                            let t = c.mul(fam.w_minus(k), fam.w_pos(n - k))?;
                            acc = c.sub(&acc, &c.scale(&p.pow(-(k as i64)), &t)?)?;
                        }
                        Ok(acc)
                    }),
                ));
            }
        }
        Suite::FourP => {
            let (w0, w1) = (fam.w_minus(0), fam.w_pos(1));
            for k in 0..=max_index {
                let (wm, wp, g, gt) = (fam.w_minus(k), fam.w_pos(k + 1), fam.g(k + 1), fam.gt(k + 1));
                checks.push((format!("k={k} (i) [W0,W-{k}] = 0"), Box::new(move || br(w0, wm, Flavor::Plain))));
                checks.push((
                    format!("k={k} (i) [W1,[W1,[W1,W-{k}]_b]_1/b] = 0"),
                    Box::new(move || serre(c, w1, wm, p)),
                ));
                checks.push((
                    format!("k={k} (ii) [W0,[W0,[W0,W{}]_b]_1/b] = 0", k + 1),
                    Box::new(move || serre(c, w0, wp, p)),
                ));
                checks.push((format!("k={k} (ii) [W1,W{}] = 0", k + 1), Box::new(move || br(w1, wp, Flavor::Plain))));
                checks.push((
                    format!("k={k} (iii) [W0,[W0,G{}]_b] = 0", k + 1),
                    Box::new(move || br(w0, &br(w0, g, Flavor::B)?, Flavor::Plain)),
                ));
                checks.push((
                    format!("k={k} (iii) [[G{},W1]_b,W1] = 0", k + 1),
                    Box::new(move || br(&br(g, w1, Flavor::B)?, w1, Flavor::Plain)),
                ));
                checks.push((
                    format!("k={k} (iv) [[Gt{},W0]_b,W0] = 0", k + 1),
                    Box::new(move || br(&br(gt, w0, Flavor::B)?, w0, Flavor::Plain)),
                ));
                checks.push((
                    format!("k={k} (iv) [W1,[W1,Gt{}]_b] = 0", k + 1),
                    Box::new(move || br(w1, &br(w1, gt, Flavor::B)?, Flavor::Plain)),
                ));
            }
        }
        Suite::QSerre => {
            let (w0, w1) = (fam.w_minus(0), fam.w_pos(1));
            checks.push(("[W0,[W0,[W0,W1]_b]_1/b] = 0".into(), Box::new(move || serre(c, w0, w1, p))));
            checks.push(("[W1,[W1,[W1,W0]_b]_1/b] = 0".into(), Box::new(move || serre(c, w1, w0, p))));
        }
    }
    let results: Vec<(String, Result<Option<String>>)> = checks
        .par_iter()
        .map(|(id, f)| {
            let r = f().map(|e| (!c.is_zero(&e)).then(|| c.render(&e, RESIDUAL_TERMS)));
            (id.clone(), r)
        })
        .collect();
    let mut report = Report::new(suite.to_string());
    for (id, r) in results {
        report.record(id, r?);
    }
    Ok(report)
}

/// Word-level checks of the swap automorphism, the reversal antiautomorphism
/// and the scaling automorphism on a shuffle-carrier family.
pub fn verify_automorphisms(
    fam: &AlternatingFamily<NCPoly>,
    max_index: usize,
    l0: &Rational,
    l1: &Rational,
) -> Result<Report> {
    fam.require(max_index)?;
    let mut r = Report::new("automorphisms");
    let mismatch = |a: &NCPoly, b: &NCPoly| (a != b).then(|| a.add(&b.scale(&-Rational::one())).render(RESIDUAL_TERMS));
    for k in 0..=max_index {
        let (wm, wp) = (fam.w_minus(k), fam.w_pos(k + 1));
        r.record(format!("sigma W-{k} = W{}", k + 1), mismatch(&wm.sigma(), wp));
        r.record(format!("sigma W{} = W-{k}", k + 1), mismatch(&wp.sigma(), wm));
        r.record(format!("dagger W-{k} = W-{k}"), mismatch(&wm.dagger(), wm));
        r.record(format!("dagger W{} = W{}", k + 1, k + 1), mismatch(&wp.dagger(), wp));
        let e = k as i32;
        let want = wm.scale(&(l0.pow(e + 1) * l1.pow(e)));
        r.record(format!("scaling W-{k} = l0^{} l1^{k} W-{k}", k + 1), mismatch(&wm.scaling(l0, l1)?, &want));
        let want = wp.scale(&(l0.pow(e) * l1.pow(e + 1)));
        r.record(format!("scaling W{} = l0^{k} l1^{} W{}", k + 1, k + 1, k + 1), mismatch(&wp.scaling(l0, l1)?, &want));
    }
    for n in 0..=max_index + 1 {
        let (g, gt) = (fam.g(n), fam.gt(n));
        r.record(format!("sigma G{n} = Gt{n}"), mismatch(&g.sigma(), gt));
        r.record(format!("sigma Gt{n} = G{n}"), mismatch(&gt.sigma(), g));
        r.record(format!("dagger G{n} = Gt{n}"), mismatch(&g.dagger(), gt));
        r.record(format!("dagger Gt{n} = G{n}"), mismatch(&gt.dagger(), g));
        let f = l0.pow(n as i32) * l1.pow(n as i32);
        r.record(format!("scaling G{n} = (l0 l1)^{n} G{n}"), mismatch(&g.scaling(l0, l1)?, &g.scale(&f)));
        r.record(format!("scaling Gt{n} = (l0 l1)^{n} Gt{n}"), mismatch(&gt.scaling(l0, l1)?, &gt.scale(&f)));
    }
    // The automorphisms applied to the generators regenerate the transformed family.
    let carrier = ShuffleCarrier::new(fam.params.clone());
    let swapped = generate_alternating(fam.w_pos(1), fam.w_minus(0), max_index, &fam.params, &carrier)?;
    for k in 0..=max_index {
        r.record(format!("recursion from (W1,W0): W-{k} = sigma W-{k}"), mismatch(swapped.w_minus(k), &fam.w_minus(k).sigma()));
    }
    let scaled = generate_alternating(
        &fam.w_minus(0).scale(l0),
        &fam.w_pos(1).scale(l1),
        max_index,
        &fam.params,
        &carrier,
    )?;
    for k in 0..=max_index {
        r.record(
            format!("recursion from (l0 W0, l1 W1): G{}", k + 1),
            mismatch(scaled.g(k + 1), &fam.g(k + 1).scaling(l0, l1)?),
        );
    }
    Ok(r)
}

/// Compares a shuffle-carrier family with the alternating words.
pub fn verify_word_images(fam: &AlternatingFamily<NCPoly>, max_index: usize) -> Result<Report> {
    fam.require(max_index)?;
    let mut r = Report::new("word-images");
    let check = |r: &mut Report, kind: Kind, k: usize, got: &NCPoly| -> Result<()> {
        let want = NCPoly::word(alternating_word_image(kind, k)?);
        r.check(format!("{} -> {}", kind.label(k), want.render(1)), got == &want, || got.render(RESIDUAL_TERMS));
        Ok(())
    };
    for k in 0..=max_index {
        check(&mut r, Kind::Wminus, k, fam.w_minus(k))?;
        check(&mut r, Kind::Wplus, k, fam.w_pos(k + 1))?;
        check(&mut r, Kind::G, k + 1, fam.g(k + 1))?;
        check(&mut r, Kind::Gtilde, k + 1, fam.gt(k + 1))?;
    }
    r.check("G0 = Gt0 = 1", fam.g(0) == &NCPoly::word(Word::EMPTY), String::new);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int, QParams};

    fn fam(q: Rational, k: usize) -> (AlternatingFamily<NCPoly>, ShuffleCarrier) {
        let qp = QParams::new(q).unwrap();
        let c = ShuffleCarrier::new(qp.bparams().clone());
        let f = generate_alternating(&NCPoly::word(Word::X), &NCPoly::word(Word::Y), k, qp.bparams(), &c).unwrap();
        (f, c)
    }

    #[test]
    fn qserre_suite_on_letters() {
        let (f, c) = fam(int(2), 0);
        let r = verify_relations(&f, &c, Suite::QSerre, 0).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.instances.len(), 2);
    }

    #[test]
    fn nrel2_commutes_through_three() {
        let (f, c) = fam(frac(3, 5), 3);
        let r = verify_relations(&f, &c, Suite::Nrel2, 3).unwrap();
        assert!(r.all_pass(), "{:?}", r.first_failure());
        assert_eq!(r.instances.len(), 4 * 6);
    }

    #[test]
    fn ggww_at_one_by_hand() {
        // G0 Gt1 + G1 Gt0 / b = xy + yx/b, and W0 W1 = x * y = xy + q^-2 yx
        let (f, c) = fam(int(2), 1);
        let lhs = c.add(f.gt(1), &c.scale(f.params.b_inv(), f.g(1)).unwrap()).unwrap();
        let mut hand = NCPoly::parse_word("xy").unwrap();
        hand.add_term(Word::parse("yx").unwrap(), frac(1, 4));
        assert_eq!(lhs, hand);
        assert_eq!(c.mul(f.w_minus(0), f.w_pos(1)).unwrap(), hand);
        assert!(verify_relations(&f, &c, Suite::Ggww, 1).unwrap().all_pass());
    }

    #[test]
    fn depth_is_checked() {
        let (f, c) = fam(int(2), 2);
        assert!(matches!(
            verify_relations(&f, &c, Suite::Nrel1, 2),
            Err(Error::InsufficientFamilyDepth { have: 2, need: 3 })
        ));
    }

    #[test]
    fn perturbed_term_is_localized() {
        let (mut f, c) = fam(int(2), 3);
        f.wminus[2].add_term(Word::parse("xxyyx").unwrap(), int(1));
        let r = verify_relations(&f, &c, Suite::Nrel2, 3).unwrap();
        let bad: Vec<&str> = r.failures().map(|i| i.id.as_str()).collect();
        assert!(!bad.is_empty());
        assert!(bad.iter().all(|id| id.contains("W-2")), "{bad:?}");
    }

    #[test]
    fn automorphisms_small() {
        let (f, _) = fam(int(2), 2);
        let r = verify_automorphisms(&f, 2, &int(2), &frac(-1, 3)).unwrap();
        assert!(r.all_pass(), "{:?}", r.first_failure());
    }
}
