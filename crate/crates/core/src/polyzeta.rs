//! Regularized values `γ` at non-positive multi-indices, the Newton–Girard
//! generating identity for harmonic sums, and the `Γ` regularization check.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::neglog::{a_coeffs, a_coeffs_oracle};
use crate::rational::{factorial, to_f64, Q};
use crate::words::Word;

/// Euler–Mascheroni constant to 50 digits (OEIS A001620).
pub const EULER_GAMMA_50: &str = "0.57721566490153286060651209008240243104215933593992";
/// π to 50 digits (OEIS A000796).
pub const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";

fn word_of(s: &[i64]) -> Result<Word> {
    let mut idx = Vec::with_capacity(s.len());
    for &x in s {
        if x > 0 {
            return Err(Error::PositiveIndex(x));
        }
        idx.push(
            u32::try_from(-x)
                .map_err(|_| Error::InvalidArgument(format!("index {x} out of range")))?,
        );
    }
    Ok(Word::y(&idx))
}

fn gamma_from(a: &[Q]) -> Q {
    a.iter()
        .enumerate()
        .map(|(k, c)| c / Q::from_integer(factorial(k as u64)))
        .sum()
}

/// `γ_{s1,…,sr} = Σ_k a^w_k / k!` with `w = y_{-s1} … y_{-sr}`.
pub fn gamma_neg(s: &[i64]) -> Result<Q> {
    Ok(gamma_from(&a_coeffs(&word_of(s)?)?))
}

/// Same value through the independent coefficient oracle.
pub fn gamma_neg_oracle(s: &[i64]) -> Result<Q> {
    Ok(gamma_from(&a_coeffs_oracle(&word_of(s)?)?))
}

/// `H_{y1^k}(N)` for `k = 0..=kmax`: elementary symmetric functions of `1, 1/2, …, 1/N`.
pub fn elementary_harmonic(n: u64, kmax: usize) -> Vec<Q> {
    let mut e = vec![Q::zero(); kmax + 1];
    e[0] = Q::one();
    for m in 1..=n {
        let inv = Q::new(BigInt::one(), BigInt::from(m));
        for k in (1..=kmax).rev() {
            let add = &e[k - 1] * &inv;
            e[k] += add;
        }
    }
    e
}

/// `H_{y_k}(N) = Σ_{n ≤ N} n^{-k}`.
pub fn power_harmonic(n: u64, k: u32) -> Q {
    (1..=n)
        .map(|m| Q::new(BigInt::one(), num_traits::pow(BigInt::from(m), k as usize)))
        .sum()
}

/// Coefficients of `exp(A(z))` up to `z^kmax` for `A` without constant term.
pub fn exp_series(a: &[Q], kmax: usize) -> Vec<Q> {
    let mut b = vec![Q::zero(); kmax + 1];
    b[0] = Q::one();
    for n in 1..=kmax {
        let mut acc = Q::zero();
        for k in 1..=n {
            if k < a.len() {
                acc += &a[k] * &b[n - k] * Q::from_integer(BigInt::from(k));
            }
        }
        b[n] = acc / Q::from_integer(BigInt::from(n));
    }
    b
}

/// Checks `Σ_k H_{y1^k}(N) z^k = exp(-Σ_{k≥1} H_{y_k}(N) (-z)^k / k)` up to `z^kmax`.
pub fn newton_girard_check(n: u64, kmax: usize) -> bool {
    let lhs = elementary_harmonic(n, kmax);
    let mut a = vec![Q::zero(); kmax + 1];
    for (k, slot) in a.iter_mut().enumerate().skip(1) {
        // -(-1)^k / k
        let sign = if k % 2 == 0 { -Q::one() } else { Q::one() };
        *slot = sign * power_harmonic(n, k as u32) / Q::from_integer(BigInt::from(k));
    }
    lhs == exp_series(&a, kmax)
}

fn parse_f64(s: &str) -> f64 {
    s.parse().expect("literal")
}

pub fn euler_gamma() -> f64 {
    parse_f64(EULER_GAMMA_50)
}

pub fn pi() -> f64 {
    parse_f64(PI_50)
}

/// `ζ(n)` for `n ≥ 2`: direct sum to `m` plus the Euler–Maclaurin tail.
pub fn zeta_numeric(n: u32, m: u64) -> f64 {
    let s = n as f64;
    let head: f64 = (1..=m).rev().map(|j| (j as f64).powf(-s)).sum();
    let mf = m as f64;
    // Σ_{j>m} j^{-s} ≈ m^{1-s}/(s-1) - m^{-s}/2 + s m^{-s-1}/12
    head + mf.powf(1.0 - s) / (s - 1.0) - mf.powf(-s) / 2.0 + s * mf.powf(-s - 1.0) / 12.0
}

/// `1/Γ(1+t) = e^{γt} Π_n (1 + t/n) e^{-t/n}`, product to `m` with a tail correction.
pub fn inv_gamma_weierstrass(t: f64, m: u64) -> f64 {
    let mut log = euler_gamma() * t;
    for n in 1..=m {
        let x = t / n as f64;
        log += x.ln_1p() - x;
    }
    // Σ_{n>m} (log(1+t/n) - t/n) ≈ -t²/2 T2 + t³/3 T3 - t⁴/4 T4 with T_k ≈ m^{1-k}/(k-1) - m^{-k}/2
    let mf = m as f64;
    let tail = |k: i32| mf.powi(1 - k) / (k as f64 - 1.0) - mf.powi(-k) / 2.0;
    log += -t * t / 2.0 * tail(2) + t.powi(3) / 3.0 * tail(3) - t.powi(4) / 4.0 * tail(4);
    log.exp()
}

/// `|exp(γt - Σ_{n=2}^{n_zeta} ζ(n)(-t)^n/n) - 1/Γ(1+t)|`.
pub fn gamma_star_check(t: &Q, n_zeta_terms: u32, quad_points: u64) -> Result<f64> {
    let tf = to_f64(t);
    if tf.abs() >= 1.0 {
        return Err(Error::InvalidArgument(
            "gamma-star check needs |t| < 1".into(),
        ));
    }
    let mut log = euler_gamma() * tf;
    for n in 2..=n_zeta_terms {
        log -= zeta_numeric(n, 2000) * (-tf).powi(n as i32) / n as f64;
    }
    Ok((log.exp() - inv_gamma_weierstrass(tf, quad_points.max(1))).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_neg(&[0]).unwrap(), q(0));
        assert_eq!(gamma_neg(&[0, 0]).unwrap(), q_frac(-1, 2));
        assert_eq!(gamma_neg(&[0, 0, 0]).unwrap(), q_frac(2, 3));
        assert_eq!(gamma_neg(&[-1, -1]).unwrap(), q_frac(11, 24));
        let big = Q::new(BigInt::from(-47315637837661i64), BigInt::from(137837700));
        assert_eq!(gamma_neg(&[-4, -4, -6]).unwrap(), big);
        assert_eq!(gamma_neg_oracle(&[-4, -4, -6]).unwrap(), big);
        assert!(matches!(gamma_neg(&[1]), Err(Error::PositiveIndex(1))));
    }

    #[test]
    fn newton_girard() {
        assert!(newton_girard_check(0, 4));
        assert!(newton_girard_check(3, 3));
        assert!(newton_girard_check(20, 8));
        let e = elementary_harmonic(3, 5);
        assert_eq!(e[1], q_frac(11, 6));
        assert!(e[4].is_zero() && e[5].is_zero());
    }

    #[test]
    fn gamma_star() {
        assert!(gamma_star_check(&q(0), 60, 10_000).unwrap() < 1e-15);
        assert!(gamma_star_check(&q_frac(1, 2), 60, 100_000).unwrap() < 1e-8);
        assert!(gamma_star_check(&q_frac(-1, 4), 60, 100_000).unwrap() < 1e-8);
        let v = inv_gamma_weierstrass(0.5, 100_000);
        assert!((v - 2.0 / pi().sqrt()).abs() < 1e-10);
        assert!(gamma_star_check(&q(1), 10, 10).is_err());
    }

    #[test]
    fn zeta_values() {
        assert!((zeta_numeric(2, 1000) - pi() * pi() / 6.0).abs() < 1e-13);
    }
}
