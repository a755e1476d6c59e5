//! Negative polylogarithms `Li⁻_w = Σ_k a_k (1-z)^{-k}`, the harmonic sums
//! `H⁻_w(N) = Σ_k a_k C(N+k, k)` and their compaction into a few binomials.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, format_q, Q};
use crate::starpoly::StarPoly;
use crate::words::{Alphabet, Word};

fn check_y(w: &Word) -> Result<()> {
    match w.alphabet() {
        Some(Alphabet::X) => Err(Error::AlphabetMismatch(format!(
            "negative polylogarithms are indexed by Y0 words, got `{w}`"
        ))),
        _ => Ok(()),
    }
}

/// `weight(w) + |w|`, the top index of the coefficient vector.
pub fn degree_bound(w: &Word) -> usize {
    w.weight() as usize + w.len()
}

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Coefficients `a^w_0..a^w_{weight+|w|}` by the letter recursion.
pub fn a_coeffs(w: &Word) -> Result<Vec<Q>> {
    check_y(w)?;
    Ok(a_rec(
        w.letters()
            .iter()
            .map(|l| l.index())
            .collect::<Vec<_>>()
            .as_slice(),
    ))
}

fn a_rec(idx: &[u32]) -> Vec<Q> {
    let Some((&k, rest)) = idx.split_first() else {
        return vec![Q::one()];
    };
    if k == 0 {
        // a^{y0 u}_i = a^u_{i-1} - a^u_i
        let au = a_rec(rest);
        let p = au.len();
        (0..=p)
            .map(|i| {
                let left = if i >= 1 { au[i - 1].clone() } else { Q::zero() };
                let right = if i < p { au[i].clone() } else { Q::zero() };
                left - right
            })
            .collect()
    } else {
        // a^{y_k u}_i = (i-1) a^{y_{k-1} u}_{i-1} - i a^{y_{k-1} u}_i
        let mut lower = idx.to_vec();
        lower[0] = k - 1;
        let prev = a_rec(&lower);
        let p = prev.len();
        (0..=p)
            .map(|i| {
                let left = if i >= 1 {
                    &prev[i - 1] * qi(i as i64 - 1)
                } else {
                    Q::zero()
                };
                let right = if i < p {
                    &prev[i] * qi(i as i64)
                } else {
                    Q::zero()
                };
                left - right
            })
            .collect()
    }
}

/// Same coefficients, computed as a polynomial in `u = 1/(1-z)`:
/// `y0` multiplies by `u - 1`, each further unit of `y_k` applies `θ0 = (u² - u) d/du`.
pub fn a_coeffs_oracle(w: &Word) -> Result<Vec<Q>> {
    check_y(w)?;
    let mut p: Vec<Q> = vec![Q::one()];
    for l in w.letters().iter().rev() {
        // times (u - 1)
        let mut next = vec![Q::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c;
        }
        p = next;
        for _ in 0..l.index() {
            let mut next = vec![Q::zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate().skip(1) {
                let d = c * qi(i as i64);
                next[i + 1] += &d;
                next[i] -= d;
            }
            p = next;
        }
    }
    Ok(p)
}

/// `P_w = Σ_i a_i (x1*)^{⧢i}`.
pub fn neg_li_poly(w: &Word) -> Result<StarPoly> {
    let a = a_coeffs(w)?;
    let mut p = StarPoly::zero();
    for (i, c) in a.into_iter().enumerate() {
        p = &p + &StarPoly::term(Word::empty(), 0, i as u32, c);
    }
    Ok(p)
}

/// `H⁻_w(N) = Σ_k a_k C(N+k, k)`.
pub fn neg_hsum(w: &Word, n: u64) -> Result<Q> {
    let a = a_coeffs(w)?;
    Ok(a.iter()
        .enumerate()
        .map(|(k, c)| c * Q::from_integer(binomial(n + k as u64, k as u64)))
        .sum())
}

/// Direct nested sum `Σ_{N ≥ n1 > … > nr > 0} n1^{s1} … nr^{sr}`, accumulated from the innermost index.
pub fn neg_hsum_oracle(w: &Word, n: u64) -> Result<Q> {
    check_y(w)?;
    let n = n as usize;
    // inner[m] = value of the suffix sum when the enclosing index equals m
    let mut inner: Vec<BigInt> = vec![BigInt::one(); n + 2];
    for l in w.letters().iter().rev() {
        let s = l.index();
        let mut next = vec![BigInt::zero(); n + 2];
        let mut acc = BigInt::zero();
        // next[m] = Σ_{0 < j < m} j^s inner[j]
        for m in 1..=n + 1 {
            next[m] = acc.clone();
            acc += num_traits::pow(BigInt::from(m), s as usize) * &inner[m];
        }
        inner = next;
    }
    Ok(Q::from_integer(inner[n + 1].clone()))
}

/// `coef · C(N + shift, order)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialTerm {
    pub coef: Q,
    pub shift: i64,
    pub order: u32,
}

impl fmt::Display for BinomialTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}*C(N{:+},{})",
            format_q(&self.coef),
            self.shift,
            self.order
        )
    }
}

pub fn format_form(terms: &[BinomialTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" + ")
}

/// `⌊p/2⌋ + 1` for a coefficient vector of length `p + 1`.
pub fn term_bound(a: &[Q]) -> usize {
    a.len().saturating_sub(1) / 2 + 1
}

/// Greedy compaction of `Σ_k a_k C(N+k, k)` into terms `c C(N+n, m)`.
///
/// At the top order `k` with coefficient `c`, the term `c C(N+k-s, k)`
/// equals `c Σ_j (-1)^j C(s,j) C(N+k-j, k-j)`; the shift `s` leaving the
/// fewest nonzero coefficients is taken, larger `s` on ties.
pub fn faulhaber_form(a: &[Q]) -> Vec<BinomialTerm> {
    let mut rem = a.to_vec();
    let mut out = Vec::new();
    while let Some(k) = rem.iter().rposition(|x| !x.is_zero()) {
        let c = rem[k].clone();
        let mut best: Option<(usize, usize, Vec<Q>)> = None;
        for s in 0..=k {
            let mut r = rem.clone();
            for j in 0..=s {
                let term = &c * Q::from_integer(binomial(s as u64, j as u64));
                if j % 2 == 0 {
                    r[k - j] -= term;
                } else {
                    r[k - j] += term;
                }
            }
            let nz = r.iter().filter(|x| !x.is_zero()).count();
            if best.as_ref().is_none_or(|(b, _, _)| nz <= *b) {
                best = Some((nz, s, r));
            }
        }
        let (_, s, r) = best.expect("at least one shift");
        out.push(BinomialTerm {
            coef: c,
            shift: k as i64 - s as i64,
            order: k as u32,
        });
        rem = r;
    }
    out
}

/// [`faulhaber_form`] with the term-count bound enforced.
pub fn faulhaber_reduce(a: &[Q]) -> Result<Vec<BinomialTerm>> {
    let form = faulhaber_form(a);
    let bound = term_bound(a);
    if form.len() > bound {
        return Err(Error::FaulhaberBound {
            terms: form.len(),
            bound,
            form: format_form(&form),
        });
    }
    Ok(form)
}

/// Univariate polynomial in `N`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NPoly(Vec<Q>);

impl NPoly {
    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    fn trim(mut self) -> NPoly {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    /// `C(N + n, m) = (N+n)(N+n-1)…(N+n-m+1)/m!`.
    pub fn binomial(n: i64, m: u32) -> NPoly {
        let mut p = vec![Q::one()];
        for i in 0..m as i64 {
            let shift = qi(n - i);
            let mut next = vec![Q::zero(); p.len() + 1];
            for (d, c) in p.iter().enumerate() {
                next[d + 1] += c;
                next[d] += c * &shift;
            }
            p = next;
        }
        let f = Q::from_integer(factorial(m as u64));
        NPoly(p.into_iter().map(|c| c / &f).collect()).trim()
    }

    pub fn add_scaled(&self, other: &NPoly, c: &Q) -> NPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Q::zero(); n];
        for (i, x) in self.0.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in other.0.iter().enumerate() {
            out[i] += x * c;
        }
        NPoly(out).trim()
    }

    pub fn eval(&self, n: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * n + c)
    }

    pub fn from_form(terms: &[BinomialTerm]) -> NPoly {
        terms.iter().fold(NPoly::default(), |acc, t| {
            acc.add_scaled(&NPoly::binomial(t.shift, t.order), &t.coef)
        })
    }

    /// `Σ_k a_k C(N+k, k)` as a polynomial.
    pub fn from_a(a: &[Q]) -> NPoly {
        a.iter().enumerate().fold(NPoly::default(), |acc, (k, c)| {
            acc.add_scaled(&NPoly::binomial(k as i64, k as u32), c)
        })
    }
}

/// True when every entry is an integer.
pub fn all_integral(a: &[Q]) -> bool {
    a.iter().all(|x| x.is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifun::CFunction;
    use crate::starpoly::li_ext;
    use num_complex::Complex64;

    fn y(s: &[u32]) -> Word {
        Word::y(s)
    }

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|x| qi(*x)).collect()
    }

    #[test]
    fn table_rows() {
        assert_eq!(a_coeffs(&y(&[0, 0])).unwrap(), ints(&[1, -2, 1]));
        assert_eq!(a_coeffs(&y(&[2, 0])).unwrap(), ints(&[0, -2, 10, -14, 6]));
        assert_eq!(
            a_coeffs(&y(&[4, 0])).unwrap(),
            ints(&[0, -2, 46, -230, 450, -384, 120])
        );
        assert_eq!(a_coeffs(&y(&[1])).unwrap(), ints(&[0, -1, 1]));
        assert_eq!(a_coeffs(&Word::empty()).unwrap(), ints(&[1]));
        assert!(a_coeffs(&Word::x(&[0])).is_err());
    }

    #[test]
    fn oracle_rows() {
        assert_eq!(a_coeffs_oracle(&y(&[0])).unwrap(), ints(&[-1, 1]));
        assert_eq!(a_coeffs_oracle(&y(&[1, 0])).unwrap(), ints(&[0, 2, -4, 2]));
    }

    #[test]
    fn star_polynomial() {
        assert_eq!(neg_li_poly(&Word::empty()).unwrap(), StarPoly::one());
        assert_eq!(neg_li_poly(&y(&[0])).unwrap(), "x1* - 1".parse().unwrap());
        let f = li_ext(&neg_li_poly(&y(&[2, 0])).unwrap());
        let z = 1.0 / 3.0f64;
        let v = f.eval(Complex64::new(z, 0.0), 10).unwrap().re;
        let mut oracle = 0.0;
        for n1 in 2..400 {
            oracle += (n1 as f64).powi(2) * (n1 as f64 - 1.0) * z.powi(n1);
        }
        assert!(((v - oracle) / oracle).abs() < 1e-10);
        let direct =
            &CFunction::monomial(0, 4).scale(&qi(6)) - &CFunction::monomial(0, 3).scale(&qi(14));
        let direct = &direct + &CFunction::monomial(0, 2).scale(&qi(10));
        assert_eq!(f, &direct - &CFunction::monomial(0, 1).scale(&qi(2)));
    }

    #[test]
    fn sums() {
        for n in 0..10u64 {
            assert_eq!(neg_hsum(&y(&[0]), n).unwrap(), qi(n as i64));
        }
        assert_eq!(neg_hsum(&y(&[1]), 5).unwrap(), qi(15));
        assert_eq!(neg_hsum_oracle(&y(&[0]), 4).unwrap(), qi(4));
        assert_eq!(neg_hsum_oracle(&y(&[1, 0]), 3).unwrap(), qi(8));
        assert_eq!(neg_hsum_oracle(&y(&[0, 0]), 5).unwrap(), qi(10));
        assert_eq!(neg_hsum(&y(&[1, 0]), 3).unwrap(), qi(8));
    }

    #[test]
    fn faulhaber() {
        let form = |s: &[u32]| faulhaber_reduce(&a_coeffs(&y(s)).unwrap()).unwrap();
        let t = |c: i64, n: i64, m: u32| BinomialTerm {
            coef: qi(c),
            shift: n,
            order: m,
        };
        assert_eq!(form(&[0]), vec![t(1, 0, 1)]);
        assert_eq!(form(&[3]), vec![t(6, 2, 4), t(1, 1, 2)]);
        assert_eq!(form(&[1]), vec![t(1, 1, 2)]);
        // y2: a valid two-term form, equal to the sum as a polynomial in N
        let a = a_coeffs(&y(&[2])).unwrap();
        let f = form(&[2]);
        assert_eq!(f.len(), 2);
        assert_eq!(NPoly::from_form(&f), NPoly::from_a(&a));
        // Σ n⁴ needs more terms than the bound allows
        assert!(matches!(
            faulhaber_reduce(&a_coeffs(&y(&[4])).unwrap()),
            Err(Error::FaulhaberBound { bound: 3, .. })
        ));
    }

    #[test]
    fn binomial_polys() {
        let p = NPoly::binomial(2, 3);
        for n in 0..10i64 {
            assert_eq!(p.eval(&qi(n)), Q::from_integer(binomial((n + 2) as u64, 3)));
        }
        assert_eq!(NPoly::binomial(0, 0).coeffs(), &[Q::one()]);
    }
}
