//! Rational series as weighted automata.
//!
//! A [`RatExpr`] is parsed from text and compiled into a linear
//! representation `(β, μ, η)` with `⟨S|w⟩ = β μ(w) η`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ncpoly::{self, NCPoly, DEFAULT_TERM_BUDGET};
use crate::rational::{format_q, parse_q, Q};
use crate::words::{Alphabet, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatExpr {
    Scalar(Q),
    Letter(Letter),
    Sum(Box<RatExpr>, Box<RatExpr>),
    Conc(Box<RatExpr>, Box<RatExpr>),
    Star(Box<RatExpr>),
    Shuffle(Box<RatExpr>, Box<RatExpr>),
}

impl RatExpr {
    pub fn scalar(c: Q) -> RatExpr {
        RatExpr::Scalar(c)
    }

    pub fn letter(l: Letter) -> RatExpr {
        RatExpr::Letter(l)
    }

    pub fn sum(a: RatExpr, b: RatExpr) -> RatExpr {
        RatExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn conc(a: RatExpr, b: RatExpr) -> RatExpr {
        RatExpr::Conc(Box::new(a), Box::new(b))
    }

    pub fn star(a: RatExpr) -> RatExpr {
        RatExpr::Star(Box::new(a))
    }

    pub fn shuffle(a: RatExpr, b: RatExpr) -> RatExpr {
        RatExpr::Shuffle(Box::new(a), Box::new(b))
    }

    /// `a^k` for concatenation; `a^0 = 1`.
    pub fn conc_pow(a: RatExpr, k: u32) -> RatExpr {
        Self::fold_pow(a, k, RatExpr::conc)
    }

    /// `a^{⧢k}`; `a^{⧢0} = 1`.
    pub fn shuffle_pow(a: RatExpr, k: u32) -> RatExpr {
        Self::fold_pow(a, k, RatExpr::shuffle)
    }

    fn fold_pow(a: RatExpr, k: u32, op: fn(RatExpr, RatExpr) -> RatExpr) -> RatExpr {
        if k == 0 {
            return RatExpr::Scalar(Q::one());
        }
        let mut acc = a.clone();
        for _ in 1..k {
            acc = op(acc, a.clone());
        }
        acc
    }

    /// Letters occurring anywhere in the expression.
    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<Letter>) {
        match self {
            RatExpr::Scalar(_) => {}
            RatExpr::Letter(l) => {
                out.insert(*l);
            }
            RatExpr::Star(a) => a.collect_letters(out),
            RatExpr::Sum(a, b) | RatExpr::Conc(a, b) | RatExpr::Shuffle(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            RatExpr::Scalar(_) | RatExpr::Letter(_) => 1,
            RatExpr::Star(a) => 1 + a.size(),
            RatExpr::Sum(a, b) | RatExpr::Conc(a, b) | RatExpr::Shuffle(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Constant term `⟨S|1⟩`, computed syntactically.
    pub fn constant_term(&self) -> Result<Q> {
        Ok(match self {
            RatExpr::Scalar(c) => c.clone(),
            RatExpr::Letter(_) => Q::zero(),
            RatExpr::Sum(a, b) => a.constant_term()? + b.constant_term()?,
            RatExpr::Conc(a, b) | RatExpr::Shuffle(a, b) => {
                a.constant_term()? * b.constant_term()?
            }
            RatExpr::Star(a) => {
                if !a.constant_term()?.is_zero() {
                    return Err(Error::ImproperStar(a.to_string()));
                }
                Q::one()
            }
        })
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatExpr::Scalar(c) => write!(f, "{}", format_q(c)),
            RatExpr::Letter(l) => write!(f, "{l}"),
            RatExpr::Sum(a, b) => write!(f, "({a} + {b})"),
            RatExpr::Conc(a, b) => {
                let wrap = |e: &RatExpr| match e {
                    RatExpr::Scalar(c) if c.is_negative() => format!("({e})"),
                    _ => e.to_string(),
                };
                write!(f, "{} {}", wrap(a), wrap(b))
            }
            RatExpr::Star(a) => match **a {
                RatExpr::Letter(_) => write!(f, "{a}*"),
                _ => write!(f, "({a})*"),
            },
            RatExpr::Shuffle(a, b) => write!(f, "({a} # {b})"),
        }
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(Q),
    Letter(Letter),
    Int(u32),
    Plus,
    Minus,
    Hash,
    Dot,
    Star,
    Caret,
    LParen,
    RParen,
}

pub(crate) fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'#' => Some(Tok::Hash),
            b'.' => Some(Tok::Dot),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((start, t));
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'x' || c == b'y' {
            i += 1;
            let ds = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if ds == i {
                return Err(Error::Syntax {
                    offset: start,
                    message: "letter needs an index".into(),
                });
            }
            let idx: u32 = text[ds..i].parse().map_err(|_| Error::Syntax {
                offset: start,
                message: "letter index too large".into(),
            })?;
            let letter = if c == b'x' {
                Letter::x(idx).map_err(|e| Error::Syntax {
                    offset: start,
                    message: e.to_string(),
                })?
            } else {
                Letter::y(idx)
            };
            out.push((start, Tok::Letter(letter)));
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            // An exponent after `^` stays an integer token.
            let after_caret = matches!(out.last(), Some((_, Tok::Caret)));
            if after_caret {
                let k: u32 = text[start..i].parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: "exponent too large".into(),
                })?;
                out.push((start, Tok::Int(k)));
                continue;
            }
            if i + 1 < bytes.len()
                && (bytes[i] == b'/' || bytes[i] == b'.')
                && bytes[i + 1].is_ascii_digit()
            {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let q = parse_q(&text[start..i]).map_err(|e| Error::Syntax {
                offset: start,
                message: e.to_string(),
            })?;
            out.push((start, Tok::Num(q)));
            continue;
        }
        return Err(Error::Syntax {
            offset: start,
            message: format!("unexpected character `{}`", c as char),
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error<T>(&self, message: &str) -> Result<T> {
        let message = match self.peek() {
            None => format!("{message}, found end of input"),
            Some(t) => format!("{message}, found {t:?}"),
        };
        Err(Error::Syntax {
            offset: self.offset(),
            message,
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn sum(&mut self) -> Result<RatExpr> {
        let mut acc = self.shuffle()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.shuffle()?;
                    acc = RatExpr::sum(acc, rhs);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.shuffle()?;
                    acc = RatExpr::sum(acc, RatExpr::conc(RatExpr::Scalar(-Q::one()), rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn shuffle(&mut self) -> Result<RatExpr> {
        let mut acc = self.conc()?;
        while self.peek() == Some(&Tok::Hash) && self.peek2() != Some(&Tok::Caret) {
            self.bump();
            let rhs = self.conc()?;
            acc = RatExpr::shuffle(acc, rhs);
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_) | Tok::Letter(_) | Tok::LParen)
        )
    }

    fn conc(&mut self) -> Result<RatExpr> {
        let negate = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.postfix()?;
        loop {
            if self.peek() == Some(&Tok::Dot) {
                self.bump();
            } else if !self.starts_atom() {
                break;
            }
            let rhs = self.postfix()?;
            acc = RatExpr::conc(acc, rhs);
        }
        if negate {
            acc = RatExpr::conc(RatExpr::Scalar(-Q::one()), acc);
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<u32> {
        match self.peek() {
            Some(Tok::Int(k)) => {
                let k = *k;
                self.bump();
                Ok(k)
            }
            _ => self.error("expected an integer exponent"),
        }
    }

    fn postfix(&mut self) -> Result<RatExpr> {
        let mut acc = self.atom()?;
        loop {
            match (self.peek(), self.peek2()) {
                (Some(Tok::Star), _) => {
                    self.bump();
                    acc = RatExpr::star(acc);
                }
                (Some(Tok::Caret), _) => {
                    self.bump();
                    let k = self.exponent()?;
                    acc = RatExpr::conc_pow(acc, k);
                }
                (Some(Tok::Hash), Some(Tok::Caret)) => {
                    self.bump();
                    self.bump();
                    let k = self.exponent()?;
                    acc = RatExpr::shuffle_pow(acc, k);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn atom(&mut self) -> Result<RatExpr> {
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.bump();
                Ok(RatExpr::Scalar(q))
            }
            Some(Tok::Letter(l)) => {
                self.bump();
                Ok(RatExpr::Letter(l))
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.sum()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                self.bump();
                Ok(e)
            }
            _ => self.error("expected a letter, a number or `(`"),
        }
    }
}

/// Parses a rational expression.
///
/// Precedence from low to high: `+`/`-`, `#`, juxtaposition or `.`,
/// postfix `*`, `^k` (concatenation power) and `#^k` (shuffle power).
pub fn parse(text: &str) -> Result<RatExpr> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        return p.error("unexpected token");
    }
    Ok(e)
}

// ---------------------------------------------------------------- matrices

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        self.data
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(<[Q]>::to_vec)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch"
        );
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// `[[a, b], [c, d]]` from four blocks.
    pub fn block(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut out = Mat::zeros(a.rows + c.rows, a.cols + b.cols);
        let place = |out: &mut Mat, m: &Mat, r0: usize, c0: usize| {
            for i in 0..m.rows {
                for j in 0..m.cols {
                    out.set(r0 + i, c0 + j, m.get(i, j).clone());
                }
            }
        };
        place(&mut out, a, 0, 0);
        place(&mut out, b, 0, a.cols);
        place(&mut out, c, a.rows, 0);
        place(&mut out, d, a.rows, a.cols);
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> Q {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Q::zero(), |acc, j| acc + self.get(i, j).abs()))
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// Scalar value of a `1×1` matrix.
    fn scalar(&self) -> Q {
        assert_eq!((self.rows, self.cols), (1, 1));
        self.data[0].clone()
    }
}

// ---------------------------------------------------------------- linear representations

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinRep {
    beta: Mat,
    mu: BTreeMap<Letter, Mat>,
    eta: Mat,
}

impl LinRep {
    /// Builds a representation, checking that all shapes agree.
    pub fn new(beta: Mat, mu: BTreeMap<Letter, Mat>, eta: Mat) -> Result<LinRep> {
        let n = beta.cols;
        let ok = beta.rows == 1
            && n >= 1
            && eta.rows == n
            && eta.cols == 1
            && mu.values().all(|m| m.rows == n && m.cols == n);
        if !ok {
            return Err(Error::InvalidArgument(
                "inconsistent linear representation shapes".into(),
            ));
        }
        Ok(LinRep { beta, mu, eta })
    }

    pub fn dim(&self) -> usize {
        self.beta.cols
    }

    pub fn beta(&self) -> &Mat {
        &self.beta
    }

    pub fn eta(&self) -> &Mat {
        &self.eta
    }

    pub fn mu(&self, l: Letter) -> Option<&Mat> {
        self.mu.get(&l)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.mu.keys().copied()
    }

    fn scalar_rep(c: Q, letters: &BTreeSet<Letter>) -> LinRep {
        LinRep {
            beta: Mat::from_rows(vec![vec![Q::one()]]),
            mu: letters.iter().map(|l| (*l, Mat::zeros(1, 1))).collect(),
            eta: Mat::from_rows(vec![vec![c]]),
        }
    }

    fn letter_rep(x: Letter, letters: &BTreeSet<Letter>) -> LinRep {
        let mut step = Mat::zeros(2, 2);
        step.set(0, 1, Q::one());
        LinRep {
            beta: Mat::from_rows(vec![vec![Q::one(), Q::zero()]]),
            mu: letters
                .iter()
                .map(|l| {
                    (
                        *l,
                        if *l == x {
                            step.clone()
                        } else {
                            Mat::zeros(2, 2)
                        },
                    )
                })
                .collect(),
            eta: Mat::from_rows(vec![vec![Q::zero()], vec![Q::one()]]),
        }
    }

    /// Same series over a larger letter set; new letters act by zero.
    fn extended(&self, letters: &BTreeSet<Letter>) -> LinRep {
        let n = self.dim();
        let mut out = self.clone();
        for l in letters {
            out.mu.entry(*l).or_insert_with(|| Mat::zeros(n, n));
        }
        out
    }

    fn aligned(&self, other: &LinRep) -> Option<(LinRep, LinRep)> {
        if self.mu.keys().eq(other.mu.keys()) {
            return None;
        }
        let all: BTreeSet<Letter> = self.mu.keys().chain(other.mu.keys()).copied().collect();
        Some((self.extended(&all), other.extended(&all)))
    }

    /// Direct sum: recognizes `S + T`.
    pub fn sum(&self, other: &LinRep) -> LinRep {
        if let Some((a, b)) = self.aligned(other) {
            return a.sum(&b);
        }
        let (n1, n2) = (self.dim(), other.dim());
        let beta = Mat::block(
            &self.beta,
            &other.beta,
            &Mat::zeros(0, n1),
            &Mat::zeros(0, n2),
        );
        let eta = Mat::block(
            &self.eta,
            &Mat::zeros(n1, 0),
            &other.eta,
            &Mat::zeros(n2, 0),
        );
        let mu = self
            .mu
            .iter()
            .map(|(l, m1)| {
                let m2 = &other.mu[l];
                (
                    *l,
                    Mat::block(m1, &Mat::zeros(n1, n2), &Mat::zeros(n2, n1), m2),
                )
            })
            .collect();
        LinRep { beta, mu, eta }
    }

    /// Cauchy product: recognizes `S T`.
    pub fn conc(&self, other: &LinRep) -> LinRep {
        if let Some((a, b)) = self.aligned(other) {
            return a.conc(&b);
        }
        let (n1, n2) = (self.dim(), other.dim());
        let beta = Mat::block(
            &self.beta,
            &Mat::zeros(1, n2),
            &Mat::zeros(0, n1),
            &Mat::zeros(0, n2),
        );
        let c2 = other.beta.mul(&other.eta).scalar();
        let eta = Mat::block(
            &self.eta.scale(&c2),
            &Mat::zeros(n1, 0),
            &other.eta,
            &Mat::zeros(n2, 0),
        );
        let jump = self.eta.mul(&other.beta);
        let mu = self
            .mu
            .iter()
            .map(|(l, m1)| {
                let m2 = &other.mu[l];
                (*l, Mat::block(m1, &jump.mul(m2), &Mat::zeros(n2, n1), m2))
            })
            .collect();
        LinRep { beta, mu, eta }
    }

    /// Star of a proper series: `S* = 1 + S⁺` with `μ⁺(x) = (I + ηβ) μ(x)`.
    fn star(&self, letters: &BTreeSet<Letter>) -> LinRep {
        let loop_back = Mat::identity(self.dim()).add(&self.eta.mul(&self.beta));
        let plus = LinRep {
            beta: self.beta.clone(),
            mu: self
                .mu
                .iter()
                .map(|(l, m)| (*l, loop_back.mul(m)))
                .collect(),
            eta: self.eta.clone(),
        };
        LinRep::scalar_rep(Q::one(), letters).sum(&plus)
    }

    /// Kronecker construction: recognizes `S ⧢ T`.
    pub fn shuffle(&self, other: &LinRep) -> LinRep {
        if let Some((a, b)) = self.aligned(other) {
            return a.shuffle(&b);
        }
        let (i1, i2) = (Mat::identity(self.dim()), Mat::identity(other.dim()));
        LinRep {
            beta: self.beta.kron(&other.beta),
            mu: self
                .mu
                .iter()
                .map(|(l, m1)| (*l, m1.kron(&i2).add(&i1.kron(&other.mu[l]))))
                .collect(),
            eta: self.eta.kron(&other.eta),
        }
    }

    /// `β μ(w)` as a row vector.
    fn row_after(&self, w: &Word) -> Result<Mat> {
        let mut v = self.beta.clone();
        for l in w.letters() {
            let m = self
                .mu
                .get(l)
                .ok_or_else(|| Error::UnknownLetter(l.to_string()))?;
            v = v.mul(m);
        }
        Ok(v)
    }

    /// `⟨S|w⟩ = β μ(w) η`.
    pub fn coeff(&self, w: &Word) -> Result<Q> {
        Ok(self.row_after(w)?.mul(&self.eta).scalar())
    }

    pub fn hom_component(&self, n: usize) -> Result<NCPoly> {
        self.hom_component_bounded(n, DEFAULT_TERM_BUDGET)
    }

    /// `S_n = Σ_{|w|=n} ⟨S|w⟩ w`, pruning prefixes whose state vector vanishes.
    pub fn hom_component_bounded(&self, n: usize, budget: usize) -> Result<NCPoly> {
        let mut layer: Vec<(Word, Mat)> = vec![(Word::empty(), self.beta.clone())];
        for _ in 0..n {
            let mut next = Vec::new();
            for (w, v) in &layer {
                for (l, m) in &self.mu {
                    let u = v.mul(m);
                    if !u.is_zero() {
                        next.push((w.push(*l), u));
                    }
                }
            }
            if next.len() > budget {
                return Err(Error::TermBudget {
                    needed: next.len() as u128,
                    budget,
                });
            }
            layer = next;
        }
        let mut out = NCPoly::zero();
        for (w, v) in layer {
            out.add_term(w, v.mul(&self.eta).scalar());
        }
        Ok(out)
    }

    pub fn truncate(&self, max_len: usize) -> Result<NCPoly> {
        self.truncate_bounded(max_len, DEFAULT_TERM_BUDGET)
    }

    /// Sum of the homogeneous components of degree `0..=max_len`.
    pub fn truncate_bounded(&self, max_len: usize, budget: usize) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for n in 0..=max_len {
            out = &out + &self.hom_component_bounded(n, budget)?;
            if out.len() > budget {
                return Err(Error::TermBudget {
                    needed: out.len() as u128,
                    budget,
                });
            }
        }
        Ok(out)
    }

    /// Constants `(K, R)` with `|⟨S|w⟩| ≤ K R^{|w|}`, from row-sum norms.
    pub fn growth_constants(&self) -> (Q, Q) {
        let beta_norm = self
            .beta
            .data
            .iter()
            .fold(Q::zero(), |acc, x| acc + x.abs());
        let k = beta_norm * self.eta.norm_inf();
        let r = self
            .mu
            .values()
            .map(Mat::norm_inf)
            .max()
            .unwrap_or_else(Q::zero);
        (k, r)
    }
}

fn alphabet_of(letters: &BTreeSet<Letter>) -> Result<Option<Alphabet>> {
    let mut it = letters.iter().map(|l| l.alphabet());
    let first = it.next();
    if let Some(a) = first {
        if it.any(|b| b != a) {
            return Err(Error::AlphabetMismatch(
                "expression mixes X and Y0 letters".into(),
            ));
        }
    }
    Ok(first)
}

/// Compiles an expression into a linear representation over its own letters.
pub fn compile(e: &RatExpr) -> Result<LinRep> {
    compile_over(e, &e.letters())
}

/// Compiles over a given letter set, which must contain the expression's letters.
pub fn compile_over(e: &RatExpr, letters: &BTreeSet<Letter>) -> Result<LinRep> {
    let mut all = letters.clone();
    all.extend(e.letters());
    alphabet_of(&all)?;
    build(e, &all)
}

fn build(e: &RatExpr, letters: &BTreeSet<Letter>) -> Result<LinRep> {
    Ok(match e {
        RatExpr::Scalar(c) => LinRep::scalar_rep(c.clone(), letters),
        RatExpr::Letter(l) => LinRep::letter_rep(*l, letters),
        RatExpr::Sum(a, b) => build(a, letters)?.sum(&build(b, letters)?),
        RatExpr::Conc(a, b) => build(a, letters)?.conc(&build(b, letters)?),
        RatExpr::Shuffle(a, b) => build(a, letters)?.shuffle(&build(b, letters)?),
        RatExpr::Star(a) => {
            let inner = build(a, letters)?;
            if !inner.beta.mul(&inner.eta).scalar().is_zero() {
                return Err(Error::ImproperStar(a.to_string()));
            }
            inner.star(letters)
        }
    })
}

/// Direct expansion of `e` up to degree `max_len` over [`NCPoly`].
///
/// Independent of the automaton constructions; used as a test oracle.
pub fn expand(e: &RatExpr, max_len: usize) -> Result<NCPoly> {
    Ok(match e {
        RatExpr::Scalar(c) => NCPoly::constant(c.clone()),
        RatExpr::Letter(l) => NCPoly::from_word(Word::letter(*l)).truncate(max_len),
        RatExpr::Sum(a, b) => &expand(a, max_len)? + &expand(b, max_len)?,
        RatExpr::Conc(a, b) => {
            ncpoly::conc(&expand(a, max_len)?, &expand(b, max_len)?)?.truncate(max_len)
        }
        RatExpr::Shuffle(a, b) => {
            ncpoly::shuffle(&expand(a, max_len)?, &expand(b, max_len)?)?.truncate(max_len)
        }
        RatExpr::Star(a) => {
            let s = expand(a, max_len)?;
            if !s.constant_term().is_zero() {
                return Err(Error::ImproperStar(a.to_string()));
            }
            let mut acc = NCPoly::one();
            let mut power = NCPoly::one();
            for _ in 0..max_len {
                power = ncpoly::conc(&power, &s)?.truncate(max_len);
                if power.is_zero() {
                    break;
                }
                acc = &acc + &power;
            }
            acc
        }
    })
}

/// Compares truncations of `(x0 + x1)*` and `rhs` up to degree `n`.
pub fn lazard_check_with(rhs: &RatExpr, n: usize) -> Result<bool> {
    let letters: BTreeSet<Letter> = [Letter::X0, Letter::X1].into_iter().collect();
    let lhs = parse("(x0 + x1)*")?;
    let l = compile_over(&lhs, &letters)?.truncate(n)?;
    let r = compile_over(rhs, &letters)?.truncate(n)?;
    Ok(l == r)
}

/// Checks `X* = (x0* x1)* x0*` up to degree `n`.
pub fn lazard_check(n: usize) -> bool {
    let rhs = parse("(x0* x1)* x0*").expect("fixed expression parses");
    lazard_check_with(&rhs, n).expect("fixed expressions compile")
}
