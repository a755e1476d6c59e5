//! The shuffle module `C⟨X⟩[x0*, (-x0)*, x1*]` on the basis
//! `w ⧢ (x0*)^{⧢k} ⧢ (x1*)^{⧢l}`, and its rewriting modulo the kernel
//! ideal generated by `x0* ⧢ x1* - x1* + 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lifun::CFunction;
use crate::ncpoly::{shuffle_words, DEFAULT_TERM_BUDGET};
use crate::rational::{binomial, format_q, Q};
use crate::ratl::{lex, Tok};
use crate::words::{Alphabet, Letter, Word};

/// `w ⧢ (x0*)^{⧢k} ⧢ (x1*)^{⧢l}`; negative `k` stands for `((-x0)*)^{⧢|k|}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarTerm {
    pub w: Word,
    pub k: i64,
    pub l: u32,
}

impl StarTerm {
    pub fn new(w: Word, k: i64, l: u32) -> StarTerm {
        StarTerm { w, k, l }
    }

    fn reducible(&self) -> bool {
        self.k != 0 && self.l >= 1
    }
}

impl fmt::Display for StarTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.w.is_empty() {
            parts.push(self.w.to_string());
        }
        let pow = |base: &str, e: u64| {
            if e == 1 {
                base.to_string()
            } else {
                format!("{base}^{e}")
            }
        };
        if self.k > 0 {
            parts.push(pow("x0*", self.k as u64));
        } else if self.k < 0 {
            parts.push(pow("(-x0)*", self.k.unsigned_abs()));
        }
        if self.l > 0 {
            parts.push(pow("x1*", self.l as u64));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" # "))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct StarPoly {
    terms: BTreeMap<StarTerm, Q>,
}

impl StarPoly {
    pub fn zero() -> StarPoly {
        StarPoly::default()
    }

    pub fn one() -> StarPoly {
        StarPoly::term(Word::empty(), 0, 0, Q::one())
    }

    pub fn term(w: Word, k: i64, l: u32, c: Q) -> StarPoly {
        let mut p = StarPoly::zero();
        p.add_term(StarTerm::new(w, k, l), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (StarTerm, Q)>>(terms: I) -> Result<StarPoly> {
        let mut p = StarPoly::zero();
        for (t, c) in terms {
            if matches!(t.w.alphabet(), Some(Alphabet::Y0)) {
                return Err(Error::AlphabetMismatch(format!(
                    "star polynomial word `{}` is not over X",
                    t.w
                )));
            }
            p.add_term(t, c);
        }
        Ok(p)
    }

    /// The kernel generator `x0* ⧢ x1* - x1* + 1`.
    pub fn kernel_generator() -> StarPoly {
        let mut p = StarPoly::term(Word::empty(), 1, 1, Q::one());
        p.add_term(StarTerm::new(Word::empty(), 0, 1), -Q::one());
        p.add_term(StarTerm::new(Word::empty(), 0, 0), Q::one());
        p
    }

    pub fn add_term(&mut self, t: StarTerm, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&StarTerm, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &StarTerm) -> Q {
        self.terms.get(t).cloned().unwrap_or_else(Q::zero)
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

    pub fn scale(&self, c: &Q) -> StarPoly {
        if c.is_zero() {
            return StarPoly::zero();
        }
        StarPoly {
            terms: self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect(),
        }
    }

    /// True when every term has `k·l = 0`.
    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|t| !t.reducible())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(
                    |(t, c)| json!({"coef": format_q(c), "w": t.w.letters().iter().map(ToString::to_string).collect::<Vec<_>>(), "k": t.k, "l": t.l}),
                )
                .collect(),
        )
    }
}

impl Add for &StarPoly {
    type Output = StarPoly;
    fn add(self, other: &StarPoly) -> StarPoly {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }
}

impl Sub for &StarPoly {
    type Output = StarPoly;
    fn sub(self, other: &StarPoly) -> StarPoly {
        self + &(-other)
    }
}

impl Neg for &StarPoly {
    type Output = StarPoly;
    fn neg(self) -> StarPoly {
        self.scale(&-Q::one())
    }
}

pub fn shuffle_star(p: &StarPoly, q: &StarPoly) -> Result<StarPoly> {
    shuffle_star_bounded(p, q, DEFAULT_TERM_BUDGET)
}

/// `(w1,k1,l1) ⧢ (w2,k2,l2) = (w1 ⧢ w2, k1+k2, l1+l2)`, extended bilinearly.
pub fn shuffle_star_bounded(p: &StarPoly, q: &StarPoly, budget: usize) -> Result<StarPoly> {
    let needed = p
        .terms
        .keys()
        .flat_map(|s| {
            q.terms
                .keys()
                .map(move |t| (s.w.len() as u64, t.w.len() as u64))
        })
        .map(|(a, b)| u128::try_from(binomial(a + b, a)).unwrap_or(u128::MAX))
        .fold(0u128, u128::saturating_add);
    if needed > budget as u128 {
        return Err(Error::TermBudget { needed, budget });
    }
    let mut out = StarPoly::zero();
    for (s, a) in &p.terms {
        for (t, b) in &q.terms {
            let ab = a * b;
            for (w, m) in shuffle_words(&s.w, &t.w) {
                out.add_term(
                    StarTerm::new(w, s.k + t.k, s.l + t.l),
                    &ab * Q::from_integer(m),
                );
            }
        }
    }
    Ok(out)
}

/// Normal form modulo the kernel ideal, rewriting the first reducible term each time.
pub fn rewrite_mod_j(p: &StarPoly) -> StarPoly {
    rewrite_with(p, |_| 0)
}

/// Rewriting with a caller-chosen rule order.
///
/// `choose(n)` receives the number of reducible terms and returns the index
/// (in term order) of the one to rewrite next.
pub fn rewrite_with(p: &StarPoly, mut choose: impl FnMut(usize) -> usize) -> StarPoly {
    let mut cur = p.clone();
    loop {
        let reducible: Vec<StarTerm> = cur
            .terms
            .keys()
            .filter(|t| t.reducible())
            .cloned()
            .collect();
        if reducible.is_empty() {
            return cur;
        }
        let t = reducible[choose(reducible.len()) % reducible.len()].clone();
        let c = cur.terms.remove(&t).expect("term present");
        if t.k > 0 {
            cur.add_term(StarTerm::new(t.w.clone(), t.k - 1, t.l), c.clone());
            cur.add_term(StarTerm::new(t.w, t.k - 1, t.l - 1), -c);
        } else {
            cur.add_term(StarTerm::new(t.w.clone(), t.k + 1, t.l), c.clone());
            cur.add_term(StarTerm::new(t.w, t.k, t.l - 1), c);
        }
    }
}

/// `(w, k, l) ↦ z^k (1-z)^{-l} Li_w`.
pub fn li_ext(p: &StarPoly) -> CFunction {
    let mut out = CFunction::zero();
    for (t, c) in &p.terms {
        let f = CFunction::from_word(&t.w).expect("words over X");
        let m = CFunction::monomial(t.k, t.l);
        out = &out + &m.mul(&f).scale(c);
    }
    out
}

impl fmt::Display for StarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = t.w.is_empty() && t.k == 0 && t.l == 0;
            if mag.is_one() || unit {
                if unit {
                    write!(f, "{}", format_q(&mag))?
                } else {
                    write!(f, "{t}")?
                }
            } else {
                write!(f, "{} {t}", format_q(&mag))?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- parsing
//
// Terms are joined by `+`/`-` and shuffled with `#`. Juxtaposition
// concatenates letters and multiplies by scalars. The atoms `x0*`,
// `(-x0)*` and `x1*` are the three generators, and `^k` is a shuffle power.

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn err<T>(&self, message: &str) -> Result<T> {
        let offset = self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end);
        Err(Error::Syntax {
            offset,
            message: message.to_string(),
        })
    }

    fn expr(&mut self) -> Result<StarPoly> {
        let mut acc = self.shuffle()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.shuffle()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.shuffle()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn shuffle(&mut self) -> Result<StarPoly> {
        let mut acc = self.product()?;
        while self.peek() == Some(&Tok::Hash) {
            self.pos += 1;
            let rhs = self.product()?;
            acc = shuffle_star(&acc, &rhs)?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<StarPoly> {
        let negate = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.power()?;
        while matches!(
            self.peek(),
            Some(Tok::Num(_) | Tok::Letter(_) | Tok::LParen | Tok::Dot)
        ) {
            if self.peek() == Some(&Tok::Dot) {
                self.pos += 1;
            }
            let at = self.pos;
            let rhs = self.power()?;
            acc = concat(&acc, &rhs).map_err(|m| Error::Syntax {
                offset: self.toks[at].0,
                message: m,
            })?;
        }
        Ok(if negate { -&acc } else { acc })
    }

    fn power(&mut self) -> Result<StarPoly> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let k = match self.peek() {
                Some(Tok::Int(k)) => *k,
                _ => return self.err("expected an integer exponent"),
            };
            self.pos += 1;
            let mut acc = StarPoly::one();
            for _ in 0..k {
                acc = shuffle_star(&acc, &base)?;
            }
            base = acc;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<StarPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(c)) => {
                self.pos += 1;
                Ok(StarPoly::term(Word::empty(), 0, 0, c))
            }
            Some(Tok::Letter(l)) => {
                if l.alphabet() != Alphabet::X {
                    return self.err("star polynomials use the letters x0 and x1");
                }
                self.pos += 1;
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    return Ok(if l == Letter::X0 {
                        StarPoly::term(Word::empty(), 1, 0, Q::one())
                    } else {
                        StarPoly::term(Word::empty(), 0, 1, Q::one())
                    });
                }
                Ok(StarPoly::term(Word::letter(l), 0, 0, Q::one()))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                if self.peek() == Some(&Tok::Star) {
                    let minus_x0 = StarPoly::term(Word::letter(Letter::X0), 0, 0, -Q::one());
                    if inner == minus_x0 {
                        self.pos += 1;
                        return Ok(StarPoly::term(Word::empty(), -1, 0, Q::one()));
                    }
                    return self.err("only x0*, (-x0)* and x1* are available");
                }
                Ok(inner)
            }
            _ => self.err("expected a letter, a number or `(`"),
        }
    }
}

/// Concatenation inside the module: only scalars times anything, or words times words.
fn concat(p: &StarPoly, q: &StarPoly) -> std::result::Result<StarPoly, String> {
    let scalar = |s: &StarPoly| -> Option<Q> {
        match s.terms.iter().collect::<Vec<_>>().as_slice() {
            [] => Some(Q::zero()),
            [(t, c)] if t.w.is_empty() && t.k == 0 && t.l == 0 => Some((*c).clone()),
            _ => None,
        }
    };
    if let Some(c) = scalar(p) {
        return Ok(q.scale(&c));
    }
    if let Some(c) = scalar(q) {
        return Ok(p.scale(&c));
    }
    let plain = |s: &StarPoly| s.terms.keys().all(|t| t.k == 0 && t.l == 0);
    if !(plain(p) && plain(q)) {
        return Err("concatenation with a star generator leaves the module; use `#`".into());
    }
    let mut out = StarPoly::zero();
    for (s, a) in &p.terms {
        for (t, b) in &q.terms {
            out.add_term(StarTerm::new(s.w.concat(&t.w), 0, 0), a * b);
        }
    }
    Ok(out)
}

impl FromStr for StarPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<StarPoly> {
        let toks = lex(s)?;
        if toks.is_empty() {
            return Err(Error::Syntax {
                offset: 0,
                message: "empty expression".into(),
            });
        }
        let mut p = Parser {
            toks,
            pos: 0,
            end: s.len(),
        };
        let out = p.expr()?;
        if p.pos < p.toks.len() {
            return p.err("unexpected token");
        }
        Ok(out)
    }
}
