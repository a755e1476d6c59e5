//! The algebra `C{Li_w}` written in the basis
//! `c(z) · Li_u(z) · logⁿ(z)/n!` with `c ∈ {z^k} ∪ {(1-z)^{-l}}` and `u`
//! empty or ending in `x1`, together with `θ0`, `θ1`, `ι0`, `ι1` and
//! floating-point evaluation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ncpoly::{
    shuffle_words, x0_tail_eliminate, x1_head_eliminate, NCPoly, DEFAULT_TERM_BUDGET,
};
use crate::rational::{binomial, factorial, format_q, Q};
use crate::words::{Alphabet, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoeffMonomial {
    /// `z^k`
    Zpow(i64),
    /// `(1-z)^{-l}`, `l ≥ 1`
    Ppow(u32),
}

impl CoeffMonomial {
    /// Exponents `(a, b)` of `z^a (1-z)^{-b}`.
    pub fn exponents(self) -> (i64, i64) {
        match self {
            CoeffMonomial::Zpow(k) => (k, 0),
            CoeffMonomial::Ppow(l) => (0, l as i64),
        }
    }
}

impl fmt::Display for CoeffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffMonomial::Zpow(k) => write!(f, "z^{k}"),
            CoeffMonomial::Ppow(l) => write!(f, "(1-z)^-{l}"),
        }
    }
}

/// `z^a (1-z)^{-b}` in the basis `{z^k} ∪ {(1-z)^{-l}}`.
pub fn normalize_coeff(a: i64, b: u32) -> BTreeMap<CoeffMonomial, Q> {
    normalize_raw(a, b as i64)
}

/// Same as [`normalize_coeff`] but `b` may be negative, meaning a factor `(1-z)^{|b|}`.
fn normalize_raw(a: i64, b: i64) -> BTreeMap<CoeffMonomial, Q> {
    let mut out = BTreeMap::new();
    if b <= 0 {
        // z^a (1-z)^{|b|} expanded binomially.
        let p = (-b) as u64;
        for j in 0..=p {
            let c = Q::from_integer(binomial(p, j) * if j % 2 == 0 { 1 } else { -1 });
            add_coeff(&mut out, CoeffMonomial::Zpow(a + j as i64), c);
        }
        return out;
    }
    let mut memo = HashMap::new();
    normalize_pos(a, b as u32, &mut memo)
}

fn add_coeff(map: &mut BTreeMap<CoeffMonomial, Q>, c: CoeffMonomial, v: Q) {
    if v.is_zero() {
        return;
    }
    let e = map.entry(c).or_insert_with(Q::zero);
    *e += v;
    if e.is_zero() {
        map.remove(&c);
    }
}

fn normalize_pos(
    a: i64,
    b: u32,
    memo: &mut HashMap<(i64, u32), BTreeMap<CoeffMonomial, Q>>,
) -> BTreeMap<CoeffMonomial, Q> {
    if b == 0 {
        return BTreeMap::from([(CoeffMonomial::Zpow(a), Q::one())]);
    }
    if a == 0 {
        return BTreeMap::from([(CoeffMonomial::Ppow(b), Q::one())]);
    }
    if let Some(r) = memo.get(&(a, b)) {
        return r.clone();
    }
    // a < 0: 1/(1-z) = 1 + z/(1-z).   a > 0: z = 1 - (1-z).
    let parts = if a < 0 {
        [(a, b - 1, 1), (a + 1, b, 1)]
    } else {
        [(a - 1, b, 1), (a - 1, b - 1, -1)]
    };
    let mut out = BTreeMap::new();
    for (a2, b2, s) in parts {
        for (c, v) in normalize_pos(a2, b2, memo) {
            add_coeff(&mut out, c, v * Q::from_integer(BigInt::from(s)));
        }
    }
    memo.insert((a, b), out.clone());
    out
}

/// `c(z) · Li_u(z) · logⁿ(z)/n!`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisElem {
    pub c: CoeffMonomial,
    pub u: Word,
    pub n: u32,
}

impl BasisElem {
    pub fn new(c: CoeffMonomial, u: Word, n: u32) -> Result<BasisElem> {
        if let CoeffMonomial::Ppow(0) = c {
            return Err(Error::InvalidArgument(
                "Ppow index must be at least 1".into(),
            ));
        }
        if matches!(u.alphabet(), Some(Alphabet::Y0)) || !(u.is_empty() || u.is_x1_terminal()) {
            return Err(Error::InvalidArgument(format!(
                "basis word `{u}` must be empty or end in x1"
            )));
        }
        Ok(BasisElem { c, u, n })
    }

    /// The index map: `k`, plus `|u|` when `u` is nonempty; `k = 0` for `Ppow`.
    pub fn ind(&self) -> i64 {
        let k = match self.c {
            CoeffMonomial::Zpow(k) => k,
            CoeffMonomial::Ppow(_) => 0,
        };
        k + self.u.len() as i64
    }
}

impl fmt::Display for BasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.c != CoeffMonomial::Zpow(0) {
            parts.push(self.c.to_string());
        }
        if !self.u.is_empty() {
            parts.push(format!("Li[{}]", self.u));
        }
        match self.n {
            0 => {}
            1 => parts.push("log(z)".into()),
            n => parts.push(format!("log(z)^{n}/{n}!")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CFunction {
    terms: BTreeMap<BasisElem, Q>,
}

impl CFunction {
    pub fn zero() -> CFunction {
        CFunction::default()
    }

    pub fn one() -> CFunction {
        CFunction::constant(Q::one())
    }

    pub fn constant(c: Q) -> CFunction {
        let mut f = CFunction::zero();
        f.add_term(
            BasisElem {
                c: CoeffMonomial::Zpow(0),
                u: Word::empty(),
                n: 0,
            },
            c,
        );
        f
    }

    pub fn from_basis(b: BasisElem, c: Q) -> CFunction {
        let mut f = CFunction::zero();
        f.add_term(b, c);
        f
    }

    /// The coefficient function `z^a (1-z)^{-b}`, normalized.
    pub fn monomial(a: i64, b: u32) -> CFunction {
        CFunction::one().mul_raw(a, b as i64)
    }

    /// `Li_w` in the basis, via `u x1 x0^n = Σ_m (P_m x1) ⧢ x0^m`.
    pub fn from_word(w: &Word) -> Result<CFunction> {
        if matches!(w.alphabet(), Some(Alphabet::Y0)) {
            return Err(Error::AlphabetMismatch(format!(
                "Li is indexed by words over X, got `{w}`"
            )));
        }
        let letters = w.letters();
        let tail = letters
            .iter()
            .rev()
            .take_while(|l| **l == Letter::X0)
            .count();
        let n = tail;
        let zero_c = CoeffMonomial::Zpow(0);
        if n == letters.len() {
            return Ok(CFunction::from_basis(
                BasisElem {
                    c: zero_c,
                    u: Word::empty(),
                    n: n as u32,
                },
                Q::one(),
            ));
        }
        if n == 0 {
            return Ok(CFunction::from_basis(
                BasisElem {
                    c: zero_c,
                    u: w.clone(),
                    n: 0,
                },
                Q::one(),
            ));
        }
        let prefix = Word::new(letters[..letters.len() - n - 1].to_vec())?;
        let mut f = CFunction::zero();
        for (m, p) in x0_tail_eliminate(&prefix, n) {
            for (v, c) in p.terms() {
                f.add_term(
                    BasisElem {
                        c: zero_c,
                        u: v.push(Letter::X1),
                        n: m as u32,
                    },
                    c.clone(),
                );
            }
        }
        Ok(f)
    }

    /// `Li_p` for a polynomial over `X`.
    pub fn from_poly(p: &NCPoly) -> Result<CFunction> {
        let mut f = CFunction::zero();
        for (w, c) in p.terms() {
            f = &f + &CFunction::from_word(w)?.scale(c);
        }
        Ok(f)
    }

    pub fn add_term(&mut self, b: BasisElem, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    /// Adds `c · z^a (1-z)^{-b} · Li_u · L_n`, normalizing the coefficient.
    fn add_raw(&mut self, a: i64, b: i64, u: &Word, n: u32, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, v) in normalize_raw(a, b) {
            self.add_term(
                BasisElem {
                    c: m,
                    u: u.clone(),
                    n,
                },
                v * c,
            );
        }
    }

    /// Multiplies every term by `z^a (1-z)^{-b}`.
    fn mul_raw(&self, a: i64, b: i64) -> CFunction {
        let mut out = CFunction::zero();
        for (t, c) in &self.terms {
            let (a0, b0) = t.c.exponents();
            out.add_raw(a0 + a, b0 + b, &t.u, t.n, c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElem, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &BasisElem) -> Q {
        self.terms.get(b).cloned().unwrap_or_else(Q::zero)
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

    pub fn scale(&self, c: &Q) -> CFunction {
        if c.is_zero() {
            return CFunction::zero();
        }
        CFunction {
            terms: self.terms.iter().map(|(b, x)| (b.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &CFunction) -> CFunction {
        self.mul_bounded(other, usize::MAX)
            .expect("unbounded product")
    }

    /// Product using `Li_u Li_v = Li_{u⧢v}` and `L_m L_n = C(m+n, m) L_{m+n}`.
    pub fn mul_bounded(&self, other: &CFunction, budget: usize) -> Result<CFunction> {
        let needed: u128 = self
            .terms
            .keys()
            .flat_map(|s| other.terms.keys().map(move |t| (s, t)))
            .map(|(s, t)| {
                let (p, q) = (s.u.len() as u64, t.u.len() as u64);
                crate::rational::binomial(p + q, p)
                    .try_into()
                    .unwrap_or(u128::MAX)
            })
            .fold(0u128, u128::saturating_add);
        if needed > budget as u128 {
            return Err(Error::TermBudget { needed, budget });
        }
        let mut out = CFunction::zero();
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let (a1, b1) = s.c.exponents();
                let (a2, b2) = t.c.exponents();
                let n = s.n + t.n;
                let logs = Q::from_integer(binomial(n as u64, s.n as u64));
                let ab = a * b * logs;
                for (w, m) in shuffle_words(&s.u, &t.u) {
                    out.add_raw(a1 + a2, b1 + b2, &w, n, &(&ab * Q::from_integer(m)));
                }
            }
        }
        Ok(out)
    }

    /// `d/dz`.
    pub fn derivative(&self) -> CFunction {
        let mut out = CFunction::zero();
        for (t, c) in &self.terms {
            let (a, b) = t.c.exponents();
            // coefficient factor
            match t.c {
                CoeffMonomial::Zpow(k) if k != 0 => {
                    out.add_raw(k - 1, 0, &t.u, t.n, &(c * Q::from_integer(BigInt::from(k))));
                }
                CoeffMonomial::Ppow(l) => {
                    out.add_raw(
                        0,
                        l as i64 + 1,
                        &t.u,
                        t.n,
                        &(c * Q::from_integer(BigInt::from(l))),
                    );
                }
                _ => {}
            }
            // Li factor
            if let Some(first) = t.u.first() {
                let rest = t.u.tail();
                if first == Letter::X0 {
                    out.add_raw(a - 1, b, &rest, t.n, c);
                } else {
                    out.add_raw(a, b + 1, &rest, t.n, c);
                }
            }
            // log factor
            if t.n >= 1 {
                out.add_raw(a - 1, b, &t.u, t.n - 1, c);
            }
        }
        out
    }

    /// `θ0 = z d/dz`.
    pub fn theta0(&self) -> CFunction {
        self.derivative().mul_raw(1, 0)
    }

    /// `θ1 = (1-z) d/dz`.
    pub fn theta1(&self) -> CFunction {
        self.derivative().mul_raw(0, -1)
    }

    /// `ι1 f = ∫_0^z f(s) ds/(1-s)`.
    pub fn iota1(&self) -> Result<CFunction> {
        let g = self.mul_raw(0, 1);
        let big_f = antiderivative(&g);
        let c = limit_at_zero(&big_f, &self.to_string())?;
        Ok(&big_f - &CFunction::constant(c))
    }

    /// `ι0`, applied per basis term: basepoint 0 when `ind ≥ 1`, basepoint 1 otherwise.
    pub fn iota0(&self) -> Result<CFunction> {
        let mut out = CFunction::zero();
        for (t, c) in &self.terms {
            let g = CFunction::from_basis(t.clone(), Q::one()).mul_raw(-1, 0);
            let big_f = antiderivative(&g);
            let label = t.to_string();
            let k = if t.ind() >= 1 {
                limit_at_zero(&big_f, &label)?
            } else {
                limit_at_one(&big_f, &label)?
            };
            out = &out + &(&big_f - &CFunction::constant(k)).scale(c);
        }
        Ok(out)
    }

    /// Numeric value at `z`, summing each `Li_u` series up to `z^n_max`.
    pub fn eval(&self, z: Complex64, n_max: usize) -> Result<Complex64> {
        if n_max == 0 {
            return Err(Error::InvalidArgument(
                "truncation order must be at least 1".into(),
            ));
        }
        let mut total = Complex64::new(0.0, 0.0);
        let mut li_cache: HashMap<&Word, Complex64> = HashMap::new();
        for (t, c) in &self.terms {
            let coeff = match t.c {
                CoeffMonomial::Zpow(k) => {
                    if z == Complex64::new(0.0, 0.0) && k < 0 {
                        return Err(Error::EvalDomain(format!("z^{k} at z = 0")));
                    }
                    z.powi(k as i32)
                }
                CoeffMonomial::Ppow(l) => {
                    if z == Complex64::new(1.0, 0.0) {
                        return Err(Error::EvalDomain(format!("(1-z)^-{l} at z = 1")));
                    }
                    (Complex64::new(1.0, 0.0) - z).powi(-(l as i32))
                }
            };
            let li = if t.u.is_empty() {
                Complex64::new(1.0, 0.0)
            } else {
                if z.norm() >= 1.0 {
                    return Err(Error::EvalDomain(format!("Li[{}] needs |z| < 1", t.u)));
                }
                *li_cache
                    .entry(&t.u)
                    .or_insert_with(|| eval_li_series(&t.u, z, n_max))
            };
            let logs = if t.n == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                if z == Complex64::new(0.0, 0.0) {
                    return Err(Error::EvalDomain("log(z) at z = 0".into()));
                }
                z.ln().powi(t.n as i32)
                    / crate::rational::to_f64(&Q::from_integer(factorial(t.n as u64)))
            };
            total += coeff * li * logs * crate::rational::to_f64(c);
        }
        Ok(total)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(b, c)| {
                    json!({
                        "coeff_basis": b.c.to_string(),
                        "u": b.u.letters().iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "log_pow": b.n,
                        "coef": format_q(c),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for CFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{} * {}", format_q(&mag), b)?;
        }
        Ok(())
    }
}

impl Add for &CFunction {
    type Output = CFunction;
    fn add(self, other: &CFunction) -> CFunction {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }
}

impl Sub for &CFunction {
    type Output = CFunction;
    fn sub(self, other: &CFunction) -> CFunction {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &CFunction {
    type Output = CFunction;
    fn neg(self) -> CFunction {
        self.scale(&-Q::one())
    }
}

// ---------------------------------------------------------------- series

/// Exact Taylor coefficients `[z^0..=z^order]` of `Li_u` for `u` ending in `x1` (or empty).
pub fn li_series(u: &Word, order: usize) -> Vec<Q> {
    let mut c = vec![Q::zero(); order + 1];
    c[0] = Q::one();
    for l in u.letters().iter().rev() {
        let mut next = vec![Q::zero(); order + 1];
        if *l == Letter::X0 {
            for j in 1..=order {
                next[j] = &c[j] / Q::from_integer(BigInt::from(j));
            }
        } else {
            let mut prefix = Q::zero();
            for j in 1..=order {
                prefix += &c[j - 1];
                next[j] = &prefix / Q::from_integer(BigInt::from(j));
            }
        }
        c = next;
    }
    c
}

fn eval_li_series(u: &Word, z: Complex64, n_max: usize) -> Complex64 {
    let mut c = vec![0.0f64; n_max + 1];
    c[0] = 1.0;
    for l in u.letters().iter().rev() {
        let mut next = vec![0.0f64; n_max + 1];
        if *l == Letter::X0 {
            for j in 1..=n_max {
                next[j] = c[j] / j as f64;
            }
        } else {
            let mut prefix = 0.0;
            for j in 1..=n_max {
                prefix += c[j - 1];
                next[j] = prefix / j as f64;
            }
        }
        c = next;
    }
    // Horner from the top.
    let mut acc = Complex64::new(0.0, 0.0);
    for j in (0..=n_max).rev() {
        acc = acc * z + c[j];
    }
    acc
}

// ---------------------------------------------------------------- integration

/// Word-form terms `coef · c(z) · Li_w` with arbitrary `w`.
type WordForm = BTreeMap<(CoeffMonomial, Word), Q>;

fn wf_add(map: &mut WordForm, key: (CoeffMonomial, Word), v: Q) {
    if v.is_zero() {
        return;
    }
    let e = map.entry(key.clone()).or_insert_with(Q::zero);
    *e += v;
    if e.is_zero() {
        map.remove(&key);
    }
}

fn wf_add_raw(map: &mut WordForm, a: i64, b: i64, w: &Word, v: &Q) {
    for (m, x) in normalize_raw(a, b) {
        wf_add(map, (m, w.clone()), x * v);
    }
}

/// A primitive of `c(z) Li_w(z)` in word form, by integration by parts on the word length.
fn integrate_term(
    c: CoeffMonomial,
    w: &Word,
    memo: &mut HashMap<(CoeffMonomial, Word), WordForm>,
) -> WordForm {
    if let Some(r) = memo.get(&(c, w.clone())) {
        return r.clone();
    }
    let mut out = WordForm::new();
    match c {
        CoeffMonomial::Zpow(-1) => wf_add(
            &mut out,
            (CoeffMonomial::Zpow(0), w.prepend(Letter::X0)),
            Q::one(),
        ),
        CoeffMonomial::Ppow(1) => wf_add(
            &mut out,
            (CoeffMonomial::Zpow(0), w.prepend(Letter::X1)),
            Q::one(),
        ),
        _ => {
            // G' = c, then ∫ c Li_w = G Li_w - ∫ G Li_w'.
            let (ga, gb, scale) = match c {
                CoeffMonomial::Zpow(k) => (k + 1, 0i64, Q::new(BigInt::one(), BigInt::from(k + 1))),
                CoeffMonomial::Ppow(l) => (
                    0,
                    l as i64 - 1,
                    Q::new(BigInt::one(), BigInt::from(l as i64 - 1)),
                ),
            };
            wf_add_raw(&mut out, ga, gb, w, &scale);
            if let Some(first) = w.first() {
                let rest = w.tail();
                let (da, db) = if first == Letter::X0 { (-1, 0) } else { (0, 1) };
                for (m, x) in normalize_raw(ga + da, gb + db) {
                    let sub = integrate_term(m, &rest, memo);
                    let factor = -(&scale * x);
                    for (key, v) in sub {
                        wf_add(&mut out, key, v * &factor);
                    }
                }
            }
        }
    }
    memo.insert((c, w.clone()), out.clone());
    out
}

/// Some primitive of `g`, in the basis.
fn antiderivative(g: &CFunction) -> CFunction {
    let mut wf = WordForm::new();
    for (t, coef) in &g.terms {
        let logs = Word::x0_pow(t.n as usize);
        for (w, m) in shuffle_words(&t.u, &logs) {
            wf_add(&mut wf, (t.c, w), coef * Q::from_integer(m));
        }
    }
    let mut memo = HashMap::new();
    let mut total = WordForm::new();
    for ((c, w), v) in wf {
        for (key, x) in integrate_term(c, &w, &mut memo) {
            wf_add(&mut total, key, x * &v);
        }
    }
    let mut out = CFunction::zero();
    for ((c, w), v) in total {
        let (a, b) = c.exponents();
        let f = CFunction::from_word(&w)
            .expect("words over X")
            .mul_raw(a, b);
        out = &out + &f.scale(&v);
    }
    out
}

// ---------------------------------------------------------------- limits

/// `lim_{z→0} f`, from the expansion in `z^e logⁿ z`.
fn limit_at_zero(f: &CFunction, label: &str) -> Result<Q> {
    let mut exp: BTreeMap<(i64, u32), Q> = BTreeMap::new();
    let mut put = |e: i64, n: u32, v: Q| {
        let x = exp.entry((e, n)).or_insert_with(Q::zero);
        *x += v;
    };
    for (t, c) in &f.terms {
        match t.c {
            CoeffMonomial::Zpow(k) => {
                if t.u.is_empty() {
                    put(k, t.n, c.clone());
                } else if k < 0 {
                    let s = li_series(&t.u, (-k) as usize);
                    for (j, cj) in s.iter().enumerate() {
                        put(k + j as i64, t.n, c * cj);
                    }
                }
            }
            CoeffMonomial::Ppow(_) => {
                if t.u.is_empty() {
                    put(0, t.n, c.clone());
                }
            }
        }
    }
    let divergent = exp
        .iter()
        .any(|(&(e, n), v)| !v.is_zero() && (e < 0 || (e == 0 && n >= 1)));
    if divergent {
        return Err(Error::DivergentConstant {
            term: label.to_string(),
        });
    }
    Ok(exp.get(&(0, 0)).cloned().unwrap_or_else(Q::zero))
}

/// Linear combination of shuffle-regularized zeta values; the empty word stands for 1.
type Sym = BTreeMap<Word, Q>;

fn sym_add(a: &mut Sym, b: &Sym, scale: &Q) {
    for (w, v) in b {
        let e = a.entry(w.clone()).or_insert_with(Q::zero);
        *e += v * scale;
        if e.is_zero() {
            a.remove(w);
        }
    }
}

/// `ζ⧢(w)` rewritten over convergent words, using `ζ⧢(x0) = ζ⧢(x1) = 0`.
fn zeta_reg(w: &Word) -> Sym {
    let mut out = Sym::new();
    if w.is_empty() {
        out.insert(Word::empty(), Q::one());
        return out;
    }
    let letters = w.letters();
    if letters.iter().all(|l| *l == letters[0]) {
        return out;
    }
    let tail = letters
        .iter()
        .rev()
        .take_while(|l| **l == Letter::X0)
        .count();
    if tail > 0 {
        let prefix = Word::new(letters[..letters.len() - tail - 1].to_vec()).expect("subword");
        if let Some(p0) = x0_tail_eliminate(&prefix, tail).get(&0) {
            for (v, c) in p0.terms() {
                sym_add(&mut out, &zeta_reg(&v.push(Letter::X1)), c);
            }
        }
        return out;
    }
    let head = letters.iter().take_while(|l| **l == Letter::X1).count();
    if head > 0 {
        let rest = Word::new(letters[head + 1..].to_vec()).expect("subword");
        if let Some(r0) = x1_head_eliminate(&rest, head).get(&0) {
            for (v, c) in r0.terms() {
                sym_add(&mut out, &zeta_reg(&v.prepend(Letter::X0)), c);
            }
        }
        return out;
    }
    out.insert(w.clone(), Q::one());
    out
}

/// Series in `t^e λ^m` with `t = 1 - z`, `λ = log t`.
type TSeries = BTreeMap<(i64, u32), Sym>;

fn ts_add(s: &mut TSeries, key: (i64, u32), v: &Sym, scale: &Q) {
    let e = s.entry(key).or_default();
    sym_add(e, v, scale);
    if e.is_empty() {
        s.remove(&key);
    }
}

/// `∫_0^t s^a λ(s)^m ds` for `a ≥ 0`, as `(t-power, λ-power, coefficient)` triples.
fn primitive(a: i64, m: u32) -> Vec<(i64, u32, Q)> {
    let e = a + 1;
    let mut out = Vec::new();
    let mut falling = Q::one();
    let mut denom = Q::from_integer(BigInt::from(e));
    for j in 0..=m {
        let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
        out.push((e, m - j, sign * &falling / &denom));
        falling *= Q::from_integer(BigInt::from(m - j));
        denom *= Q::from_integer(BigInt::from(e));
    }
    out
}

/// Expansion of `Li_u(1 - t)` up to `t^order`.
fn li_at_one(u: &Word, order: i64) -> TSeries {
    let mut s = TSeries::new();
    s.insert((0, 0), BTreeMap::from([(Word::empty(), Q::one())]));
    let letters = u.letters();
    for i in (0..letters.len()).rev() {
        let suffix = Word::new(letters[i..].to_vec()).expect("subword");
        let mut next = TSeries::new();
        ts_add(&mut next, (0, 0), &zeta_reg(&suffix), &Q::one());
        let minus = -Q::one();
        if letters[i] == Letter::X1 {
            // E = ζ - ∫ E_v ds/s
            for (&(e, m), v) in &s {
                if e == 0 {
                    ts_add(
                        &mut next,
                        (0, m + 1),
                        v,
                        &(&minus / Q::from_integer(BigInt::from(m + 1))),
                    );
                } else {
                    for (te, tm, c) in primitive(e - 1, m) {
                        ts_add(&mut next, (te, tm), v, &(&minus * c));
                    }
                }
            }
        } else {
            // E = ζ - ∫_0^t E_v ds/(1-s)
            for (&(e, m), v) in &s {
                for shift in 0..order.max(0) {
                    let a = e + shift;
                    if a + 1 > order {
                        break;
                    }
                    for (te, tm, c) in primitive(a, m) {
                        ts_add(&mut next, (te, tm), v, &(&minus * c));
                    }
                }
            }
        }
        s = next;
    }
    s
}

/// Laurent polynomial in `t` truncated above `order`.
type Laurent = BTreeMap<i64, Q>;

fn laurent_mul(a: &Laurent, b: &Laurent, order: i64) -> Laurent {
    let mut out = Laurent::new();
    for (i, x) in a {
        for (j, y) in b {
            if i + j <= order {
                *out.entry(i + j).or_insert_with(Q::zero) += x * y;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `lim_{z→1} f`, from the expansion in `t^e λ^m`.
fn limit_at_one(f: &CFunction, label: &str) -> Result<Q> {
    let mut total = TSeries::new();
    for (t, c) in &f.terms {
        let (coef_poly, order) = match t.c {
            // z^k = (1-t)^k contributes only its constant term at order 0.
            CoeffMonomial::Zpow(_) => (Laurent::from([(0, Q::one())]), 0i64),
            CoeffMonomial::Ppow(l) => (Laurent::from([(-(l as i64), Q::one())]), l as i64),
        };
        // logⁿ(1-t)/n!
        let mut logs = Laurent::from([(0, Q::one())]);
        if t.n > 0 {
            let log1: Laurent = (1..=order.max(0))
                .map(|j| (j, -Q::new(BigInt::one(), BigInt::from(j))))
                .collect();
            for _ in 0..t.n {
                logs = laurent_mul(&logs, &log1, order);
            }
            let nf = Q::from_integer(factorial(t.n as u64));
            logs.values_mut().for_each(|v| *v /= &nf);
        }
        let rational = laurent_mul(&coef_poly, &logs, order);
        if rational.is_empty() {
            continue;
        }
        let low = rational.keys().next().copied().unwrap_or(0);
        let li = li_at_one(&t.u, (-low).max(0));
        for (i, x) in &rational {
            for (&(e, m), v) in &li {
                if i + e <= 0 {
                    ts_add(&mut total, (i + e, m), v, &(x * c));
                }
            }
        }
    }
    if total.keys().any(|&(e, m)| e < 0 || (e == 0 && m >= 1)) {
        return Err(Error::DivergentConstant {
            term: label.to_string(),
        });
    }
    let constant = total.remove(&(0, 0)).unwrap_or_default();
    let zetas: Vec<String> = constant
        .keys()
        .filter(|w| !w.is_empty())
        .map(|w| format!("ζ⧢({w})"))
        .collect();
    if !zetas.is_empty() {
        return Err(Error::IrrationalConstant {
            term: label.to_string(),
            zetas,
        });
    }
    Ok(constant
        .get(&Word::empty())
        .cloned()
        .unwrap_or_else(Q::zero))
}

/// Budgeted product, exposed for callers that guard against blow-up.
pub fn mul(f: &CFunction, g: &CFunction) -> Result<CFunction> {
    f.mul_bounded(g, DEFAULT_TERM_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn li(s: &str) -> CFunction {
        CFunction::from_word(&w(s)).unwrap()
    }

    fn basis(c: CoeffMonomial, u: &str, n: u32) -> BasisElem {
        BasisElem::new(c, w(u), n).unwrap()
    }

    use CoeffMonomial::{Ppow, Zpow};

    #[test]
    fn partial_fractions() {
        assert_eq!(
            normalize_coeff(1, 1),
            BTreeMap::from([(Ppow(1), q(1)), (Zpow(0), q(-1))])
        );
        assert_eq!(
            normalize_coeff(-1, 1),
            BTreeMap::from([(Zpow(-1), q(1)), (Ppow(1), q(1))])
        );
        assert_eq!(
            normalize_coeff(2, 1),
            BTreeMap::from([(Ppow(1), q(1)), (Zpow(0), q(-1)), (Zpow(1), q(-1))])
        );
        assert_eq!(normalize_coeff(3, 0), BTreeMap::from([(Zpow(3), q(1))]));
        assert_eq!(normalize_coeff(0, 2), BTreeMap::from([(Ppow(2), q(1))]));
    }

    #[test]
    fn partial_fractions_numeric() {
        for a in -4i64..=4 {
            for b in 0u32..=4 {
                let z = 0.3f64;
                let lhs = z.powi(a as i32) * (1.0 - z).powi(-(b as i32));
                let rhs: f64 = normalize_coeff(a, b)
                    .iter()
                    .map(|(m, c)| {
                        let v = match m {
                            Zpow(k) => z.powi(*k as i32),
                            Ppow(l) => (1.0 - z).powi(-(*l as i32)),
                        };
                        v * crate::rational::to_f64(c)
                    })
                    .sum();
                assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0), "{a} {b}");
            }
        }
    }

    #[test]
    fn words_to_basis() {
        assert_eq!(
            li("x0"),
            CFunction::from_basis(basis(Zpow(0), "1", 1), q(1))
        );
        assert_eq!(
            li("x1"),
            CFunction::from_basis(basis(Zpow(0), "x1", 0), q(1))
        );
        let mut expected = CFunction::from_basis(basis(Zpow(0), "x1", 1), q(1));
        expected.add_term(basis(Zpow(0), "x0x1", 0), q(-1));
        assert_eq!(li("x1x0"), expected);
    }

    #[test]
    fn products() {
        assert_eq!(li("x1").mul(&li("x1")), li("x1x1").scale(&q(2)));
        let z = CFunction::monomial(1, 0);
        let p = CFunction::monomial(0, 1);
        assert_eq!(z.mul(&p), &p - &CFunction::one());
        assert_eq!(
            li("x0").mul(&li("x0")),
            CFunction::from_basis(basis(Zpow(0), "1", 2), q(2))
        );
    }

    #[test]
    fn thetas() {
        assert_eq!(li("x0x1").theta0(), li("x1"));
        assert_eq!(li("x1").theta1(), CFunction::one());
        let p = CFunction::monomial(0, 1);
        assert_eq!(p.theta0(), &CFunction::monomial(0, 2) - &p);
    }

    #[test]
    fn index_map() {
        assert_eq!(basis(Zpow(0), "x1", 0).ind(), 1);
        assert_eq!(basis(Zpow(0), "1", 1).ind(), 0);
        assert_eq!(basis(Zpow(2), "x0x1", 0).ind(), 4);
        assert_eq!(basis(Ppow(3), "x0x1", 2).ind(), 2);
    }

    #[test]
    fn iotas() {
        assert_eq!(li("x1").iota0().unwrap(), li("x0x1"));
        assert_eq!(CFunction::one().iota1().unwrap(), li("x1"));
        assert_eq!(CFunction::one().iota0().unwrap(), li("x0"));
        let z = CFunction::monomial(1, 0);
        // ι1(z) = ∫ s/(1-s) = -log(1-z) - z
        assert_eq!(z.iota1().unwrap(), &li("x1") - &z);
    }

    #[test]
    fn iota_errors() {
        let f = CFunction::from_basis(basis(Ppow(1), "1", 0), q(1));
        assert!(matches!(f.iota0(), Err(Error::DivergentConstant { .. })));
        let f = CFunction::from_basis(basis(Ppow(1), "1", 1), q(1));
        match f.iota0() {
            Err(Error::IrrationalConstant { zetas, .. }) => {
                assert_eq!(zetas, vec!["ζ⧢(x0 x1)".to_string()])
            }
            other => panic!("{other:?}"),
        }
        let f = CFunction::from_basis(basis(Zpow(-1), "x0x1", 0), q(1));
        assert!(matches!(f.iota0(), Err(Error::DivergentConstant { .. })));
    }

    #[test]
    fn iota0_at_one_rational() {
        // ind(z^-1 log z) = -1; ∫ log(s)/s^2 from 1 is finite.
        let f = CFunction::from_basis(basis(Zpow(-1), "1", 1), q(1));
        let g = f.iota0().unwrap();
        assert_eq!(g.theta0(), f);
        // value at 1 must vanish: -log z / z - 1/z + 1
        let v = g.eval(Complex64::new(0.999_999, 0.0), 10).unwrap();
        assert!(v.norm() < 1e-5);
    }

    #[test]
    fn iota0_at_one_with_ppow() {
        // (1-z)^-2 log z ~ -1/(1-z) near 1: divergent.
        let f = CFunction::from_basis(basis(Ppow(2), "1", 1), q(1));
        assert!(matches!(f.iota0(), Err(Error::DivergentConstant { .. })));
        // (1-z)^-1 log²z/2: finite limit, equal to ζ(3).
        let f = CFunction::from_basis(basis(Ppow(1), "1", 2), q(1));
        assert!(matches!(f.iota0(), Err(Error::IrrationalConstant { .. })));
        // z^-2 log²z/2 has ind -2 and a rational limit at 1.
        let f = CFunction::from_basis(basis(Zpow(-2), "1", 2), q(1));
        let g = f.iota0().unwrap();
        assert_eq!(g.theta0(), f);
        let v = g.eval(Complex64::new(0.999_99, 0.0), 10).unwrap();
        assert!(v.norm() < 1e-4, "{v}");
    }

    #[test]
    fn zeta_regularization() {
        assert!(zeta_reg(&w("x1")).is_empty());
        assert_eq!(zeta_reg(&w("x0x1")), BTreeMap::from([(w("x0x1"), q(1))]));
        // ζ⧢(x1 x0) = -ζ(x0 x1)
        assert_eq!(zeta_reg(&w("x1x0")), BTreeMap::from([(w("x0x1"), q(-1))]));
        // ζ⧢(x1 x0 x1) = -2 ζ(x0 x1 x1)
        assert_eq!(
            zeta_reg(&w("x1x0x1")),
            BTreeMap::from([(w("x0x1x1"), q(-2))])
        );
    }

    #[test]
    fn evaluation() {
        let z = Complex64::new(0.5, 0.0);
        let v = li("x1").eval(z, 10_000).unwrap();
        assert!((v.re - std::f64::consts::LN_2).abs() < 1e-12);
        let v = li("x0x1").eval(z, 10_000).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 12.0 - std::f64::consts::LN_2.powi(2) / 2.0;
        assert!((v.re - exact).abs() < 1e-12);
        assert_eq!(
            CFunction::one().eval(Complex64::new(3.0, 1.0), 5).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert!(matches!(
            li("x1").eval(Complex64::new(1.5, 0.0), 5),
            Err(Error::EvalDomain(_))
        ));
        assert!(matches!(
            li("x0").eval(Complex64::new(0.0, 0.0), 5),
            Err(Error::EvalDomain(_))
        ));
        assert!(matches!(
            CFunction::monomial(0, 1).eval(Complex64::new(1.0, 0.0), 5),
            Err(Error::EvalDomain(_))
        ));
    }

    #[test]
    fn exact_series() {
        assert_eq!(
            li_series(&w("x1"), 3),
            vec![q(0), q(1), q_frac(1, 2), q_frac(1, 3)]
        );
        assert_eq!(
            li_series(&w("x1x1"), 3),
            vec![q(0), q(0), q_frac(1, 2), q_frac(1, 2)]
        );
    }

    #[test]
    fn li_at_one_matches_numeric() {
        // Li_{x1 x1}(1-t) = λ²/2 ... check numerically near t = 1e-3 to order 2
        for word in ["x0x1", "x1x1", "x1x0x1"] {
            let t = 1e-3f64;
            let series = li_at_one(&w(word), 3);
            let z2 = std::f64::consts::PI.powi(2) / 6.0;
            let z3 = 1.202_056_903_159_594_2_f64;
            let mut approx = 0.0;
            for (&(e, m), v) in &series {
                for (zw, c) in v {
                    let zval = match zw.to_string().as_str() {
                        "1" => 1.0,
                        "x0 x1" => z2,
                        "x0 x1 x1" | "x0 x0 x1" => z3,
                        other => panic!("{other}"),
                    };
                    approx += crate::rational::to_f64(c)
                        * zval
                        * t.powi(e as i32)
                        * t.ln().powi(m as i32);
                }
            }
            let exact = li(word)
                .eval(Complex64::new(1.0 - t, 0.0), 200_000)
                .unwrap()
                .re;
            assert!((approx - exact).abs() < 1e-6, "{word}: {approx} vs {exact}");
        }
    }

    #[test]
    fn json_dump() {
        let j = li("x1x0").to_json();
        assert_eq!(j.as_array().unwrap().len(), 2);
        assert_eq!(j[0]["coeff_basis"], "z^0");
    }
}
