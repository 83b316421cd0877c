//! Words in the letters `x`, `y` and noncommutative polynomials over them.

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, BParams, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// A word packed into bits, `x = 0` and `y = 1`, first letter most significant.
///
/// Ordering is by length first and then by bits, which agrees with
/// lexicographic order (`x < y`) inside each length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };
    pub const X: Word = Word { len: 1, bits: 0 };
    pub const Y: Word = Word { len: 1, bits: 1 };

    pub fn from_letters(letters: &[u8]) -> Result<Word> {
        if letters.len() > 64 {
            return Err(Error::WordTooLong);
        }
        let mut bits = 0u64;
        for &c in letters {
            bits = (bits << 1) | u64::from(c & 1);
        }
        Ok(Word { len: letters.len() as u8, bits })
    }

    pub fn parse(s: &str) -> Result<Word> {
        let letters: Vec<u8> = s
            .chars()
            .map(|c| match c {
                'x' => Ok(0),
                'y' => Ok(1),
                _ => Err(Error::Input(format!("letter {c:?} is not x or y"))),
            })
            .collect::<Result<_>>()?;
        Word::from_letters(&letters)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Letter at position `i` from the left (0 for x, 1 for y).
    pub fn letter(&self, i: usize) -> u8 {
        ((self.bits >> (self.len() - 1 - i)) & 1) as u8
    }

    pub fn letters(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.letter(i)).collect()
    }

    pub fn count_y(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn count_x(&self) -> u32 {
        self.len as u32 - self.count_y()
    }

    fn mask(&self) -> u64 {
        if self.len == 64 {
            u64::MAX
        } else {
            (1u64 << self.len) - 1
        }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        let len = self.len() + other.len();
        if len > 64 {
            return Err(Error::WordTooLong);
        }
        let bits = if other.len == 64 { other.bits } else { (self.bits << other.len) | other.bits };
        Ok(Word { len: len as u8, bits })
    }

    pub fn swap_letters(&self) -> Word {
        Word { len: self.len, bits: !self.bits & self.mask() }
    }

    pub fn reversed(&self) -> Word {
        if self.len == 0 {
            return *self;
        }
        Word { len: self.len, bits: self.bits.reverse_bits() >> (64 - self.len as u32) }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for i in 0..self.len() {
            f.write_str(if self.letter(i) == 0 { "x" } else { "y" })?;
        }
        Ok(())
    }
}

/// Which alternating word to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Wminus,
    Wplus,
    G,
    Gtilde,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Wminus, Kind::Wplus, Kind::G, Kind::Gtilde];

    pub fn label(&self, k: usize) -> String {
        match self {
            Kind::Wminus => format!("W-{k}"),
            Kind::Wplus => format!("W{}", k + 1),
            Kind::G => format!("G{k}"),
            Kind::Gtilde => format!("Gt{k}"),
        }
    }
}

/// `x(yx)^k`, `y(xy)^k`, `(yx)^k` or `(xy)^k`. For `Wplus` the index is `k`
/// in `W_(k+1)`.
pub fn alternating_word_image(kind: Kind, k: usize) -> Result<Word> {
    let (first, len) = match kind {
        Kind::Wminus => (0u8, 2 * k + 1),
        Kind::Wplus => (1, 2 * k + 1),
        Kind::G | Kind::Gtilde if k == 0 => {
            return Err(Error::Index("G_0 and Gtilde_0 are the identity, not a word".into()))
        }
        Kind::G => (1, 2 * k),
        Kind::Gtilde => (0, 2 * k),
    };
    let letters: Vec<u8> = (0..len).map(|i| first ^ (i as u8 & 1)).collect();
    Word::from_letters(&letters)
}

/// A finite rational combination of words; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Rational>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: String,
    coeff: String,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Word::EMPTY, Rational::one())
    }

    pub fn word(w: Word) -> Self {
        Self::monomial(w, Rational::one())
    }

    pub fn monomial(w: Word, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn parse_word(s: &str) -> Result<Self> {
        Ok(Self::word(Word::parse(s)?))
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NCPoly { terms: self.terms.iter().map(|(w, a)| (*w, a * c)).collect() }
    }

    pub fn map_words(&self, f: impl Fn(&Word) -> Word) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(f(w), c.clone());
        }
        out
    }

    /// Concatenation product in the free algebra.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, c) in &other.terms {
                out.add_term(u.concat(v)?, a * c);
            }
        }
        Ok(out)
    }

    /// The q-shuffle product.
    pub fn shuffle(&self, other: &Self, p: &BParams) -> Result<Self> {
        let mut powers: HashMap<i32, Rational> = HashMap::new();
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, c) in &other.terms {
                let ac = a * c;
                for ((w, e), n) in shuffle_words(u, v)? {
                    let be = powers.entry(e).or_insert_with(|| p.pow(e as i64)).clone();
                    out.add_term(w, &ac * be * Rational::from_integer(n.into()));
                }
            }
        }
        Ok(out)
    }

    /// Swaps `x` and `y` in every word.
    pub fn sigma(&self) -> Self {
        self.map_words(Word::swap_letters)
    }

    /// Reverses every word.
    pub fn dagger(&self) -> Self {
        self.map_words(Word::reversed)
    }

    /// Scales each word by `l0^#x * l1^#y`.
    pub fn scaling(&self, l0: &Rational, l1: &Rational) -> Result<Self> {
        if l0.is_zero() || l1.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let f = l0.pow(w.count_x() as i32) * l1.pow(w.count_y() as i32);
            out.add_term(*w, c * f);
        }
        Ok(out)
    }

    /// Human-readable form showing at most `max_terms` terms.
    pub fn render(&self, max_terms: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> =
            self.terms.iter().take(max_terms).map(|(w, c)| format!("({c}){w}")).collect();
        if self.len() > max_terms {
            parts.push(format!("... ({} more terms)", self.len() - max_terms));
        }
        parts.join(" + ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(w, c)| TermJson {
                word: if w.is_empty() { String::new() } else { w.to_string() },
                coeff: c.to_string(),
            })
            .collect();
        serde_json::to_value(v).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let terms: Vec<TermJson> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Input(e.to_string()))?;
        let mut out = Self::zero();
        for t in terms {
            out.add_term(Word::parse(&t.word)?, parse_rational(&t.coeff)?);
        }
        Ok(out)
    }
}

/// All interleavings of `u` and `v`, collected as `(word, exponent of b) -> count`.
///
/// Placing a letter `c` of `v` in front of the unread suffix `s` of `u`
/// contributes `q^<c, s>`; since every pairing is `±2` this is `b` raised to
/// `#(c in s) - #(other letter in s)`.
pub fn shuffle_words(u: &Word, v: &Word) -> Result<HashMap<(Word, i32), u64>> {
    let m = u.len();
    let n = v.len();
    if m + n > 64 {
        return Err(Error::WordTooLong);
    }
    let ul = u.letters();
    let vl = v.letters();
    // suffix_y[i] = number of y among ul[i..]
    let mut suffix_y = vec![0i32; m + 1];
    for i in (0..m).rev() {
        suffix_y[i] = suffix_y[i + 1] + ul[i] as i32;
    }
    let weight = |c: u8, i: usize| -> i32 {
        let ys = suffix_y[i];
        let xs = (m - i) as i32 - ys;
        if c == 1 {
            ys - xs
        } else {
            xs - ys
        }
    };
    let mut out: HashMap<(Word, i32), u64> = HashMap::new();
    let mut stack: Vec<(usize, usize, u64, i32)> = vec![(0, 0, 0, 0)];
    while let Some((i, j, bits, e)) = stack.pop() {
        if i == m && j == n {
            *out.entry((Word { len: (m + n) as u8, bits }, e)).or_insert(0) += 1;
            continue;
        }
        if i < m {
            stack.push((i + 1, j, (bits << 1) | ul[i] as u64, e));
        }
        if j < n {
            let c = vl[j];
            stack.push((i, j + 1, (bits << 1) | c as u64, e + weight(c, i)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn p(s: &str) -> NCPoly {
        NCPoly::parse_word(s).unwrap()
    }

    fn b2() -> BParams {
        BParams::new(int(4)).unwrap()
    }

    #[test]
    fn word_round_trip_and_order() {
        for s in ["x", "y", "xyyx", "yyyyxxxxyx"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert_eq!(Word::EMPTY.to_string(), "1");
        assert!(w("xy") < w("yx"));
        assert!(w("yy") < w("xxx"));
        assert_eq!(w("xyy").reversed(), w("yyx"));
        assert_eq!(w("xyx").swap_letters(), w("yxy"));
        assert_eq!(w("xy").concat(&w("yx")).unwrap(), w("xyyx"));
        assert!(Word::parse("xz").is_err());
    }

    #[test]
    fn word_images() {
        assert_eq!(alternating_word_image(Kind::Wminus, 2).unwrap(), w("xyxyx"));
        assert_eq!(alternating_word_image(Kind::Gtilde, 3).unwrap(), w("xyxyxy"));
        assert_eq!(alternating_word_image(Kind::Wminus, 0).unwrap(), w("x"));
        assert_eq!(alternating_word_image(Kind::Wplus, 1).unwrap(), w("yxy"));
        assert_eq!(alternating_word_image(Kind::G, 2).unwrap(), w("yxyx"));
        assert!(matches!(alternating_word_image(Kind::G, 0), Err(Error::Index(_))));
    }

    #[test]
    fn shuffle_of_letters() {
        // x * y = xy + q^-2 yx at q = 2
        let s = p("x").shuffle(&p("y"), &b2()).unwrap();
        assert_eq!(s.coeff(&w("xy")), int(1));
        assert_eq!(s.coeff(&w("yx")), frac(1, 4));
        assert_eq!(s.len(), 2);
        // x * x = (1 + q^2) xx
        let s = p("x").shuffle(&p("x"), &b2()).unwrap();
        assert_eq!(s, NCPoly::monomial(w("xx"), int(5)));
    }

    /// Brute-force oracle: sum over position subsets, weight from each
    /// (v-letter, earlier-placed-later u-letter) inversion pair.
    fn oracle(u: &Word, v: &Word, b: &Rational) -> NCPoly {
        let (m, n) = (u.len(), v.len());
        let mut out = NCPoly::zero();
        for mask in 0u32..(1 << (m + n)) {
            if mask.count_ones() as usize != n {
                continue;
            }
            let (mut i, mut j) = (0, 0);
            let mut letters = Vec::new();
            let mut exp = 0i32;
            for pos in 0..m + n {
                if mask >> pos & 1 == 1 {
                    let c = v.letter(j);
                    for k in i..m {
                        exp += if u.letter(k) == c { 1 } else { -1 };
                    }
                    letters.push(c);
                    j += 1;
                } else {
                    letters.push(u.letter(i));
                    i += 1;
                }
            }
            let coeff = if exp >= 0 { b.pow(exp) } else { b.recip().pow(-exp) };
            out.add_term(Word::from_letters(&letters).unwrap(), coeff);
        }
        out
    }

    #[test]
    fn shuffle_matches_brute_force() {
        let b = b2();
        for (u, v) in [("xy", "x"), ("xyy", "yx"), ("yxyx", "xxy"), ("", "xy")] {
            assert_eq!(p(u).shuffle(&p(v), &b).unwrap(), oracle(&w(u), &w(v), b.b()), "{u} * {v}");
        }
    }

    #[test]
    fn shuffle_term_count_is_binomial() {
        let m = shuffle_words(&w("xyxy"), &w("yyx")).unwrap();
        assert_eq!(m.values().sum::<u64>(), 35);
    }

    #[test]
    fn q_serre_for_letters() {
        // [x,[x,[x,y]_b]_{b^-1}] = 0 and the same with letters swapped
        let bp = b2();
        let br = |a: &NCPoly, c: &NCPoly, f: &Rational| {
            a.shuffle(c, &bp).unwrap().scale(f).add(&c.shuffle(a, &bp).unwrap().scale(&int(-1)))
        };
        for (a, c) in [(p("x"), p("y")), (p("y"), p("x"))] {
            let inner = br(&a, &c, bp.b());
            let mid = br(&a, &inner, bp.b_inv());
            let outer = br(&a, &mid, &int(1));
            assert!(outer.is_zero(), "{}", outer.render(10));
        }
    }

    #[test]
    fn automorphisms_on_words() {
        assert_eq!(p("xyx").sigma(), p("yxy"));
        assert_eq!(p("xyy").dagger(), p("yyx"));
        let s = p("xyx").scaling(&int(2), &int(3)).unwrap();
        assert_eq!(s, NCPoly::monomial(w("xyx"), int(12)));
        assert_eq!(p("xyx").scaling(&int(0), &int(1)), Err(Error::ZeroScalar));
    }

    #[test]
    fn json_round_trip() {
        let mut q = p("xy").scale(&frac(-3, 5));
        q.add_term(Word::EMPTY, int(2));
        let j = q.to_json();
        assert_eq!(j.to_string(), r#"[{"coeff":"2","word":""},{"coeff":"-3/5","word":"xy"}]"#);
        assert_eq!(NCPoly::from_json(&j).unwrap(), q);
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0u8..2, 0..=max).prop_map(|l| Word::from_letters(&l).unwrap())
    }

    fn arb_poly() -> impl Strategy<Value = NCPoly> {
        proptest::collection::vec((arb_word(3), -3i64..4), 1..4).prop_map(|ts| {
            let mut out = NCPoly::zero();
            for (w, c) in ts {
                out.add_term(w, int(c));
            }
            out
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn shuffle_associative(u in arb_word(3), v in arb_word(3), x in arb_word(3)) {
            let bp = BParams::new(frac(9, 25)).unwrap();
            let (u, v, x) = (NCPoly::word(u), NCPoly::word(v), NCPoly::word(x));
            let l = u.shuffle(&v, &bp).unwrap().shuffle(&x, &bp).unwrap();
            let r = u.shuffle(&v.shuffle(&x, &bp).unwrap(), &bp).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn shuffle_collapses_to_binomial_at_unit_weight(u in arb_word(6), v in arb_word(6)) {
            let m = shuffle_words(&u, &v).unwrap();
            let total: u64 = m.values().sum();
            let (a, b) = (u.len() as u64, v.len() as u64);
            let binom = (1..=b).fold(1u64, |acc, i| acc * (a + i) / i);
            prop_assert_eq!(total, binom);
        }

        #[test]
        fn dagger_is_antiautomorphism(a in arb_poly(), c in arb_poly()) {
            let bp = b2();
            let l = a.shuffle(&c, &bp).unwrap().dagger();
            let r = c.dagger().shuffle(&a.dagger(), &bp).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn sigma_is_involutive_automorphism(a in arb_poly(), c in arb_poly()) {
            let bp = b2();
            prop_assert_eq!(a.sigma().sigma(), a.clone());
            let l = a.shuffle(&c, &bp).unwrap().sigma();
            let r = a.sigma().shuffle(&c.sigma(), &bp).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn unit_scaling_is_identity(a in arb_poly()) {
            prop_assert_eq!(a.scaling(&int(1), &int(1)).unwrap(), a);
        }
    }
}
