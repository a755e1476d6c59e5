//! Sparse noncommutative polynomials over exact rationals.
//!
//! Products: concatenation, shuffle `⧢` (dual to the letter-primitive
//! coproduct) and stuffle `⊎` on `Y0` with the merge rule `y_i, y_j -> y_{i+j}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{binomial, format_q, parse_q, Q};
use crate::words::{Alphabet, Letter, Word};

pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NCPoly {
    terms: BTreeMap<Word, Q>,
}

/// Formal sum of `u ⊗ v` with rational coefficients.
pub type Tensor = BTreeMap<(Word, Word), Q>;

impl NCPoly {
    pub fn zero() -> NCPoly {
        NCPoly::default()
    }

    pub fn one() -> NCPoly {
        NCPoly::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> NCPoly {
        NCPoly::monomial(w, Q::one())
    }

    pub fn monomial(w: Word, c: Q) -> NCPoly {
        let mut p = NCPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn constant(c: Q) -> NCPoly {
        NCPoly::monomial(Word::empty(), c)
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Q)>>(terms: I) -> Result<NCPoly> {
        let mut p = NCPoly::zero();
        let mut alphabet: Option<Alphabet> = None;
        for (w, c) in terms {
            if let Some(a) = w.alphabet() {
                match alphabet {
                    Some(b) if a != b => {
                        return Err(Error::AlphabetMismatch(format!(
                            "word {w} in a {b:?} polynomial"
                        )));
                    }
                    _ => alphabet = Some(a),
                }
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, Q> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Word::empty())
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn alphabet(&self) -> Option<Alphabet> {
        self.terms.keys().find_map(Word::alphabet)
    }

    pub fn scale(&self, c: &Q) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Keeps only words of length `<= max_len`.
    pub fn truncate(&self, max_len: usize) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= max_len)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous(&self, n: usize) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies a word-to-word map linearly.
    pub fn map_words(&self, f: impl Fn(&Word) -> Word) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(f(w), c.clone());
        }
        out
    }

    /// Scalar product `<p|q>` for which words are orthonormal.
    pub fn pairing(&self, other: &NCPoly) -> Q {
        self.terms.iter().map(|(w, c)| c * other.coeff(w)).sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| {
                    json!({
                        "coef": format_q(c),
                        "word": w.letters().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }

    fn check_same_alphabet(&self, other: &NCPoly) -> Result<()> {
        match (self.alphabet(), other.alphabet()) {
            (Some(a), Some(b)) if a != b => Err(Error::AlphabetMismatch(format!("{a:?} vs {b:?}"))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let c = c.abs();
            if w.is_empty() {
                write!(f, "{}", format_q(&c))?;
            } else if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{} * {}", format_q(&c), w)?;
            }
        }
        Ok(())
    }
}

impl FromStr for NCPoly {
    type Err = Error;

    /// Parses `coef * word` terms joined by `+`/`-`; a bare word means
    /// coefficient one and a bare number is a constant.
    fn from_str(s: &str) -> Result<NCPoly> {
        let mut terms = Vec::new();
        let mut sign = Q::one();
        let mut current = String::new();
        let flush = |text: &str, sign: &Q, terms: &mut Vec<(Word, Q)>| -> Result<()> {
            let text = text.trim();
            if text.is_empty() {
                return Err(Error::Syntax {
                    offset: 0,
                    message: format!("empty term in `{s}`"),
                });
            }
            let (c, w) = match text.split_once('*') {
                Some((c, w)) => (parse_q(c)?, w.parse::<Word>()?),
                None => match parse_q(text) {
                    Ok(c) => (c, Word::empty()),
                    Err(_) => (Q::one(), text.parse::<Word>()?),
                },
            };
            terms.push((w, c * sign));
            Ok(())
        };
        let trimmed = s.trim();
        if trimmed == "0" {
            return Ok(NCPoly::zero());
        }
        for ch in trimmed.chars() {
            if (ch == '+' || ch == '-' || ch == '−') && !current.trim().is_empty() {
                flush(&current, &sign, &mut terms)?;
                current.clear();
                sign = if ch == '+' { Q::one() } else { -Q::one() };
            } else if (ch == '+' || ch == '-' || ch == '−') && current.trim().is_empty() {
                if ch != '+' {
                    sign = -sign;
                }
            } else {
                current.push(ch);
            }
        }
        flush(&current, &sign, &mut terms)?;
        NCPoly::from_terms(terms)
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(&-Q::one())
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    /// Concatenation product. Panics on an alphabet mismatch; use [`conc`] for the checked form.
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        conc(self, rhs).expect("alphabet mismatch in concatenation")
    }
}

pub fn conc(p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
    p.check_same_alphabet(q)?;
    let mut out = NCPoly::zero();
    for (u, a) in &p.terms {
        for (v, b) in &q.terms {
            out.add_term(u.concat(v), a * b);
        }
    }
    Ok(out)
}

/// Shuffle of two words as a map word -> multiplicity, by dynamic programming
/// over prefix pairs using `ua ⧢ vb = (u ⧢ vb)a + (ua ⧢ v)b`.
pub fn shuffle_words(u: &Word, v: &Word) -> BTreeMap<Word, BigInt> {
    let (a, b) = (u.letters(), v.letters());
    let mut prev: Vec<HashMap<Vec<Letter>, BigInt>> = Vec::with_capacity(b.len() + 1);
    // Row i = 0: prefixes of v alone.
    for j in 0..=b.len() {
        let mut m = HashMap::new();
        m.insert(b[..j].to_vec(), BigInt::one());
        prev.push(m);
    }
    for i in 1..=a.len() {
        let mut row: Vec<HashMap<Vec<Letter>, BigInt>> = Vec::with_capacity(b.len() + 1);
        let mut first = HashMap::new();
        first.insert(a[..i].to_vec(), BigInt::one());
        row.push(first);
        for j in 1..=b.len() {
            let mut m: HashMap<Vec<Letter>, BigInt> = HashMap::new();
            for (w, c) in &prev[j] {
                let mut w2 = w.clone();
                w2.push(a[i - 1]);
                *m.entry(w2).or_default() += c;
            }
            for (w, c) in &row[j - 1] {
                let mut w2 = w.clone();
                w2.push(b[j - 1]);
                *m.entry(w2).or_default() += c;
            }
            row.push(m);
        }
        prev = row;
    }
    prev.pop()
        .unwrap_or_default()
        .into_iter()
        .map(|(w, c)| (Word::new(w).expect("shuffle preserves alphabet"), c))
        .collect()
}

fn shuffle_size_bound(p: &NCPoly, q: &NCPoly) -> u128 {
    let mut total: u128 = 0;
    for u in p.terms.keys() {
        for v in q.terms.keys() {
            let n = binomial((u.len() + v.len()) as u64, u.len() as u64);
            total = total.saturating_add(n.to_u128().unwrap_or(u128::MAX));
        }
    }
    total
}

pub fn shuffle(p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
    shuffle_bounded(p, q, DEFAULT_TERM_BUDGET)
}

pub fn shuffle_bounded(p: &NCPoly, q: &NCPoly, budget: usize) -> Result<NCPoly> {
    p.check_same_alphabet(q)?;
    let needed = shuffle_size_bound(p, q);
    if needed > budget as u128 {
        return Err(Error::TermBudget { needed, budget });
    }
    let mut out = NCPoly::zero();
    for (u, a) in &p.terms {
        for (v, b) in &q.terms {
            let ab = a * b;
            for (w, m) in shuffle_words(u, v) {
                out.add_term(w, &ab * Q::from_integer(m));
            }
        }
    }
    Ok(out)
}

/// `p^{⧢n}`.
pub fn shuffle_pow(p: &NCPoly, n: u32) -> Result<NCPoly> {
    let mut acc = NCPoly::one();
    for _ in 0..n {
        acc = shuffle(&acc, p)?;
    }
    Ok(acc)
}

fn require_y0(p: &NCPoly) -> Result<()> {
    match p.alphabet() {
        Some(Alphabet::X) => Err(Error::AlphabetMismatch(
            "stuffle is defined on Y0 words".into(),
        )),
        _ => Ok(()),
    }
}

/// Stuffle of two `Y0` words, by DP over suffix pairs.
pub fn stuffle_words(u: &Word, v: &Word) -> BTreeMap<Word, BigInt> {
    let (a, b) = (u.letters(), v.letters());
    let (n, m) = (a.len(), b.len());
    // table[i][j] = a[i..] ⊎ b[j..]
    let mut table: Vec<Vec<HashMap<Vec<Letter>, BigInt>>> =
        vec![vec![HashMap::new(); m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            let mut cell: HashMap<Vec<Letter>, BigInt> = HashMap::new();
            if i == n || j == m {
                let rest: Vec<Letter> = if i == n {
                    b[j..].to_vec()
                } else {
                    a[i..].to_vec()
                };
                cell.insert(rest, BigInt::one());
            } else {
                let merged = Letter::y(a[i].index() + b[j].index());
                for (letter, src) in [
                    (a[i], &table[i + 1][j]),
                    (b[j], &table[i][j + 1]),
                    (merged, &table[i + 1][j + 1]),
                ] {
                    for (w, c) in src {
                        let mut w2 = Vec::with_capacity(w.len() + 1);
                        w2.push(letter);
                        w2.extend_from_slice(w);
                        *cell.entry(w2).or_default() += c;
                    }
                }
            }
            table[i][j] = cell;
        }
    }
    std::mem::take(&mut table[0][0])
        .into_iter()
        .map(|(w, c)| (Word::new(w).expect("stuffle preserves alphabet"), c))
        .collect()
}

pub fn stuffle(p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
    stuffle_bounded(p, q, DEFAULT_TERM_BUDGET)
}

pub fn stuffle_bounded(p: &NCPoly, q: &NCPoly, budget: usize) -> Result<NCPoly> {
    require_y0(p)?;
    require_y0(q)?;
    // Delannoy-type growth is below 3^(|u|+|v|); the shuffle count is a usable lower guide.
    let needed = shuffle_size_bound(p, q);
    if needed > budget as u128 {
        return Err(Error::TermBudget { needed, budget });
    }
    let mut out = NCPoly::zero();
    for (u, a) in &p.terms {
        for (v, b) in &q.terms {
            let ab = a * b;
            for (w, m) in stuffle_words(u, v) {
                out.add_term(w, &ab * Q::from_integer(m));
            }
        }
    }
    Ok(out)
}

/// `Δ_⧢(w)`: sum over complementary subsequence splits of `w`.
pub fn coproduct_shuffle(w: &Word) -> Tensor {
    let letters = w.letters();
    let n = letters.len();
    assert!(n < 64, "coproduct enumerates 2^|w| splits");
    let mut out = Tensor::new();
    for mask in 0u64..(1u64 << n) {
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (i, &l) in letters.iter().enumerate() {
            if mask >> i & 1 == 1 {
                left.push(l);
            } else {
                right.push(l);
            }
        }
        let key = (
            Word::new(left).expect("subword"),
            Word::new(right).expect("subword"),
        );
        *out.entry(key).or_insert_with(Q::zero) += Q::one();
    }
    out
}

/// Returns `P_m` with `u x1 x0^n = Σ_{m=0}^{n} (P_m x1) ⧢ x0^m`.
///
/// Uses `u x1 x0^n = u x1 ⧢ x0^n - Σ_{k=1}^{n} (u ⧢ x0^k) x1 x0^{n-k}`
/// recursively on the shorter tails.
pub fn x0_tail_eliminate(u: &Word, n: usize) -> BTreeMap<usize, NCPoly> {
    let mut out: BTreeMap<usize, NCPoly> = BTreeMap::new();
    tail_eliminate_poly(&NCPoly::from_word(u.clone()), n, &Q::one(), &mut out);
    out.retain(|_, p| !p.is_zero());
    out
}

fn tail_eliminate_poly(u: &NCPoly, n: usize, scale: &Q, out: &mut BTreeMap<usize, NCPoly>) {
    if u.is_zero() {
        return;
    }
    let slot = out.entry(n).or_default();
    *slot = &*slot + &u.scale(scale);
    for k in 1..=n {
        let x0k = NCPoly::from_word(Word::x0_pow(k));
        let shuffled = shuffle(u, &x0k).expect("tail elimination stays small");
        tail_eliminate_poly(&shuffled, n - k, &-scale.clone(), out);
    }
}

/// Leading-`x1` analogue: `x1^n x0 v = Σ_m (x0 R_m) ⧢ x1^m`, obtained by
/// conjugating [`x0_tail_eliminate`] with reversal and the letter swap.
pub fn x1_head_eliminate(v: &Word, n: usize) -> BTreeMap<usize, NCPoly> {
    let u = v.reversed().swapped();
    x0_tail_eliminate(&u, n)
        .into_iter()
        .map(|(m, p)| (m, p.map_words(|w| w.reversed().swapped())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{factorial, q};

    fn p(s: &str) -> NCPoly {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn conc_examples() {
        assert_eq!(conc(&p("x0"), &p("x1")).unwrap(), p("x0 x1"));
        assert_eq!(conc(&p("x0 + x1"), &p("x1")).unwrap(), p("x0 x1 + x1 x1"));
        assert_eq!(
            conc(&p("2 * x0 - x1 x0"), &NCPoly::one()).unwrap(),
            p("2 * x0 - x1 x0")
        );
        assert!(conc(&p("x0"), &p("y1")).is_err());
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle(&p("x0"), &p("x1")).unwrap(), p("x0 x1 + x1 x0"));
        assert_eq!(shuffle(&p("x0"), &p("x0")).unwrap(), p("2 * x0 x0"));
        assert_eq!(shuffle_pow(&p("x1"), 3).unwrap(), p("6 * x1 x1 x1"));
        assert!(shuffle(&p("x0"), &p("y0")).is_err());
    }

    #[test]
    fn letter_shuffle_power_is_factorial() {
        for x in ["x0", "x1", "y3"] {
            for n in 0..=10u32 {
                let word = Word::new(vec![w(x).letters()[0]; n as usize]).unwrap();
                let expected = NCPoly::monomial(word, Q::from_integer(factorial(n.into())));
                assert_eq!(shuffle_pow(&p(x), n).unwrap(), expected);
            }
        }
    }

    #[test]
    fn stuffle_examples() {
        assert_eq!(stuffle(&p("y1"), &p("y1")).unwrap(), p("2 * y1 y1 + y2"));
        assert_eq!(
            stuffle(&p("y1"), &p("y2")).unwrap(),
            p("y1 y2 + y2 y1 + y3")
        );
        assert_eq!(stuffle(&p("y2 y0"), &NCPoly::one()).unwrap(), p("y2 y0"));
        // y0 merges like any other letter.
        assert_eq!(stuffle(&p("y0"), &p("y0")).unwrap(), p("2 * y0 y0 + y0"));
        assert!(stuffle(&p("x1"), &p("x1")).is_err());
    }

    #[test]
    fn stuffle_two_by_one_brute_force() {
        // Direct recursion on y_a y_b ⊎ y_c.
        let got = stuffle(&p("y1 y2"), &p("y3")).unwrap();
        let expected = p("y1 y2 y3 + y1 y3 y2 + y3 y1 y2 + y1 y5 + y4 y2");
        assert_eq!(got, expected);
    }

    #[test]
    fn coproduct_examples() {
        let c = coproduct_shuffle(&w("x0"));
        assert_eq!(c.len(), 2);
        assert_eq!(c[&(w("x0"), Word::empty())], q(1));
        assert_eq!(c[&(Word::empty(), w("x0"))], q(1));

        let c = coproduct_shuffle(&w("x0 x1"));
        let expected: Tensor = [
            ((w("x0 x1"), w("1")), q(1)),
            ((w("x0"), w("x1")), q(1)),
            ((w("x1"), w("x0")), q(1)),
            ((w("1"), w("x0 x1")), q(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(c, expected);

        let c = coproduct_shuffle(&Word::empty());
        assert_eq!(
            c.into_iter().collect::<Vec<_>>(),
            vec![((w("1"), w("1")), q(1))]
        );
    }

    #[test]
    fn tail_elimination_examples() {
        let r = x0_tail_eliminate(&Word::empty(), 0);
        assert_eq!(r, [(0, NCPoly::one())].into_iter().collect());
        let r = x0_tail_eliminate(&Word::empty(), 1);
        assert_eq!(
            r,
            [(0, p("-1 * x0")), (1, NCPoly::one())]
                .into_iter()
                .collect()
        );
    }

    fn reconstruct(p_m: &BTreeMap<usize, NCPoly>) -> NCPoly {
        let x1 = NCPoly::from_word(w("x1"));
        p_m.iter().fold(NCPoly::zero(), |acc, (m, pm)| {
            let left = conc(pm, &x1).unwrap();
            &acc + &shuffle(&left, &NCPoly::from_word(Word::x0_pow(*m))).unwrap()
        })
    }

    #[test]
    fn tail_elimination_reconstructs() {
        let mut words = vec![Word::empty()];
        for len in 1..=4 {
            for bits in 0..1u32 << len {
                words.push(Word::x(
                    &(0..len).map(|i| (bits >> i) & 1).collect::<Vec<_>>(),
                ));
            }
        }
        for u in &words {
            for n in 0..=4 {
                let parts = x0_tail_eliminate(u, n);
                let target = NCPoly::from_word(u.push(Letter::X1).concat(&Word::x0_pow(n)));
                assert_eq!(reconstruct(&parts), target, "u = {u}, n = {n}");
                assert_eq!(parts[&n], NCPoly::from_word(u.clone()));
            }
        }
    }

    #[test]
    fn head_elimination_reconstructs() {
        for (v, n) in [("x1", 1), ("x0 x1", 2), ("x1 x1", 3), ("x0 x0 x1", 1)] {
            let v = w(v);
            let parts = x1_head_eliminate(&v, n);
            let x0 = NCPoly::from_word(w("x0"));
            let total = parts.iter().fold(NCPoly::zero(), |acc, (m, r)| {
                let left = conc(&x0, r).unwrap();
                &acc + &shuffle(
                    &left,
                    &NCPoly::from_word(Word::new(vec![Letter::X1; *m]).unwrap()),
                )
                .unwrap()
            });
            let target = Word::new(vec![Letter::X1; n])
                .unwrap()
                .push(Letter::X0)
                .concat(&v);
            assert_eq!(total, NCPoly::from_word(target));
        }
    }

    #[test]
    fn text_roundtrip() {
        let poly = p("2 * x0 x1 - 1/2 * x1 + 3");
        assert_eq!(poly.coeff(&w("x0 x1")), q(2));
        assert_eq!(poly.coeff(&w("x1")), crate::rational::q_frac(-1, 2));
        assert_eq!(poly.constant_term(), q(3));
        assert_eq!(poly.to_string().parse::<NCPoly>().unwrap(), poly);
        assert_eq!(p("-x0").coeff(&w("x0")), q(-1));
        assert_eq!(p("0"), NCPoly::zero());
    }

    #[test]
    fn json_export() {
        let v = p("1/2 * x0 x1").to_json();
        assert_eq!(
            v,
            serde_json::json!([{"coef": "1/2", "word": ["x0", "x1"]}])
        );
    }

    #[test]
    fn budget_is_enforced() {
        let long = NCPoly::from_word(Word::x(&[0, 1].repeat(10)));
        let err = shuffle_bounded(&long, &long, 1000).unwrap_err();
        assert!(matches!(err, Error::TermBudget { budget: 1000, .. }));
    }
}
