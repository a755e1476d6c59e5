use std::panic;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use ratli::checks::{self, random_starpoly, rng};
use ratli::lifun::CFunction;
use ratli::ncpoly::{self, NCPoly};
use ratli::neglog::{a_coeffs, neg_hsum_oracle, BinomialTerm, NPoly};
use ratli::polyzeta::{gamma_neg, gamma_star_check, newton_girard_check};
use ratli::rational::{binomial, factorial, format_q, q, q_frac, Q};
use ratli::ratl::{self, RatExpr};
use ratli::starpoly::{li_ext, rewrite_mod_j, shuffle_star, StarPoly};
use ratli::{Letter, Word};

type Criterion = fn() -> Vec<String>;

/// Runs one criterion, printing a single PASS/FAIL line; panics count as failures.
fn run(id: u32, title: &str, limit: Duration, f: Criterion) -> bool {
    let start = Instant::now();
    let failures = panic::catch_unwind(f).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        vec![format!("panicked: {msg}")]
    });
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < limit;
    let status = if ok { "PASS" } else { "FAIL" };
    println!(
        "{status} criterion {id}: {title} ({:.3}s, limit {}s)",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    for f in &failures {
        println!("    {f}");
    }
    if elapsed >= limit {
        println!("    over time limit");
    }
    ok
}

fn qv(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

fn criterion_01_coefficient_table() -> Vec<String> {
    let rows: [&[i64]; 5] = [
        &[1, -2, 1],
        &[0, 2, -4, 2],
        &[0, -2, 10, -14, 6],
        &[0, 2, -22, 62, -66, 24],
        &[0, -2, 46, -230, 450, -384, 120],
    ];
    let mut failures = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let a = a_coeffs(&Word::y(&[k as u32, 0])).unwrap();
        if a != qv(row) {
            failures.push(format!(
                "y{k} y0: got {:?}",
                a.iter().map(format_q).collect::<Vec<_>>()
            ));
        }
    }
    failures
}

fn terms(v: &[(i64, i64, u32)]) -> Vec<BinomialTerm> {
    v.iter()
        .map(|&(c, shift, order)| BinomialTerm {
            coef: q(c),
            shift,
            order,
        })
        .collect()
}

fn criterion_02_harmonic_closed_forms() -> Vec<String> {
    type Form = &'static [(i64, i64, u32)];
    let cases: [(&[u32], Form, Form); 7] = [
        (&[0], &[(1, 1, 1), (-1, 0, 0)], &[(1, 0, 1)]),
        (&[1], &[(1, 2, 2), (-1, 1, 1)], &[(1, 1, 2)]),
        (
            &[2],
            &[(2, 3, 3), (-3, 2, 2), (1, 1, 1)],
            &[(2, 2, 3), (-1, 1, 1)],
        ),
        (
            &[3],
            &[(6, 4, 4), (-12, 3, 3), (7, 2, 2), (-1, 1, 1)],
            &[(6, 2, 4), (1, 1, 2)],
        ),
        (&[0, 0], &[(1, 2, 2), (-2, 1, 1), (1, 0, 0)], &[(1, 0, 2)]),
        (&[1, 0], &[(2, 3, 3), (-4, 2, 2), (2, 1, 1)], &[(2, 1, 3)]),
        (
            &[2, 0],
            &[(6, 4, 4), (-14, 3, 3), (10, 2, 2), (-2, 1, 1)],
            &[(6, 2, 4), (2, 1, 2)],
        ),
    ];
    let mut failures = Vec::new();
    for (idx, expanded, compact) in cases {
        let w = Word::y(idx);
        let exact = NPoly::from_a(&a_coeffs(&w).unwrap());
        for (label, form) in [("expanded", expanded), ("compact", compact)] {
            let p = NPoly::from_form(&terms(form));
            if p != exact {
                failures.push(format!(
                    "{w}: {label} form differs from Σ a_k C(N+k,k) symbolically"
                ));
            }
            let bad: Vec<u64> = (0..=50u64)
                .filter(|&n| p.eval(&q(n as i64)) != neg_hsum_oracle(&w, n).unwrap())
                .collect();
            if !bad.is_empty() {
                failures.push(format!(
                    "{w}: {label} form differs from the nested sum at N = {:?}",
                    &bad[..bad.len().min(5)]
                ));
            }
        }
    }
    failures
}

fn criterion_03_gamma_table() -> Vec<String> {
    let table: [(&[i64], Q); 14] = [
        (&[0], q(0)),
        (&[-1], q_frac(-1, 2)),
        (&[-2], q_frac(-1, 6)),
        (&[-3], q_frac(3, 4)),
        (&[-4], q_frac(-7, 15)),
        (&[0, 0], q_frac(-1, 2)),
        (&[0, -1], q_frac(-5, 6)),
        (&[-2, 0], q_frac(11, 12)),
        (&[0, -2], q_frac(1, 4)),
        (&[-1, -1], q_frac(11, 24)),
        (&[0, 0, 0], q_frac(2, 3)),
        (&[0, -1, 0], q_frac(1, 12)),
        (&[0, -2, 0], q_frac(-47, 60)),
        (
            &[-4, -4, -6],
            Q::new(BigInt::from(-47315637837661i64), BigInt::from(137837700)),
        ),
    ];
    let mut failures = Vec::new();
    for (s, expected) in table {
        let got = gamma_neg(s).unwrap();
        if got != expected {
            failures.push(format!(
                "γ{s:?}: expected {}, computed {}",
                format_q(&expected),
                format_q(&got)
            ));
        }
    }
    failures
}

fn criterion_04_kernel() -> Vec<String> {
    let mut failures = Vec::new();
    let gen: StarPoly = "x0* # x1* - x1* + 1".parse().unwrap();
    if gen != StarPoly::kernel_generator() {
        failures.push("parsed generator differs from kernel_generator()".into());
    }
    if !rewrite_mod_j(&gen).is_zero() {
        failures.push(format!("generator normal form {}", rewrite_mod_j(&gen)));
    }
    let mut g = rng(404);
    let points: Vec<f64> = (0..10).map(|i| 0.1 + 0.08 * i as f64 + 0.04).collect();
    for _ in 0..20 {
        let elem = shuffle_star(&random_starpoly(&mut g, 4, 2, 2, 2), &gen).unwrap();
        let f = li_ext(&elem);
        for &z in &points {
            let v = f.eval(Complex64::new(z, 0.0), 2000).unwrap().norm();
            if v >= 1e-10 {
                failures.push(format!("|Li({elem})({z})| = {v:e}"));
            }
        }
    }
    failures
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    if b.norm() < 1e-300 {
        d
    } else {
        d / b.norm()
    }
}

fn criterion_05_shuffle_morphism() -> Vec<String> {
    let mut failures = Vec::new();
    let z = Complex64::new(0.5, 0.0);
    let mut words = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..3 {
        layer = layer
            .iter()
            .flat_map(|w| [w.push(Letter::X0), w.push(Letter::X1)])
            .collect();
        words.extend(layer.iter().cloned());
    }
    for u in &words {
        for v in &words {
            let sh = ncpoly::shuffle(&NCPoly::from_word(u.clone()), &NCPoly::from_word(v.clone()))
                .unwrap();
            let lhs = CFunction::from_poly(&sh).unwrap().eval(z, 2000).unwrap();
            let fu = CFunction::from_word(u).unwrap().eval(z, 2000).unwrap();
            let fv = CFunction::from_word(v).unwrap().eval(z, 2000).unwrap();
            let err = rel_err(lhs, fu * fv);
            if err >= 1e-8 {
                failures.push(format!("words {u}, {v}: relative error {err:e}"));
            }
        }
    }
    let mut g = rng(505);
    for _ in 0..5 {
        let s = random_starpoly(&mut g, 4, 2, 2, 2);
        let t = random_starpoly(&mut g, 4, 2, 2, 2);
        let st = shuffle_star(&s, &t).unwrap();
        let (fs, ft, fst) = (li_ext(&s), li_ext(&t), li_ext(&st));
        if fst != fs.mul(&ft) {
            failures.push(format!("series {s}, {t}: exact images differ"));
        }
        let err = rel_err(
            fst.eval(z, 2000).unwrap(),
            fs.eval(z, 2000).unwrap() * ft.eval(z, 2000).unwrap(),
        );
        if err >= 1e-8 {
            failures.push(format!("series {s}, {t}: relative error {err:e}"));
        }
    }
    failures
}

/// `Σ_n c(x^n) t^n / n!` from a degree-60 truncation of `((a x)*)^i`.
fn li_power_star(a: &Q, x: Letter, i: u32, t: f64) -> f64 {
    let ax = RatExpr::conc(RatExpr::Scalar(a.clone()), RatExpr::Letter(x));
    let rep = ratl::compile(&RatExpr::conc_pow(RatExpr::star(ax), i)).unwrap();
    let series = rep.truncate(60).unwrap();
    series
        .terms()
        .map(|(w, c)| {
            assert!(w.letters().iter().all(|l| *l == x));
            let n = w.len() as i32;
            c.to_f64().unwrap() * t.powi(n) / factorial(n as u64).to_f64().unwrap()
        })
        .sum()
}

fn closed_form(a: f64, i: u32, t: f64) -> f64 {
    let mut s = 0.0;
    for k in 0..i {
        s += binomial((i - 1) as u64, k as u64).to_f64().unwrap() * (a * t).powi(k as i32)
            / factorial(k as u64).to_f64().unwrap();
    }
    (a * t).exp() * s
}

fn criterion_06_power_of_stars() -> Vec<String> {
    let mut failures = Vec::new();
    let z: f64 = 0.5;
    for a in [q_frac(1, 3), q_frac(1, 2)] {
        let af = a.to_f64().unwrap();
        for i in 1..=3u32 {
            // Li over x0^n is log(z)^n/n!, over x1^n it is log(1/(1-z))^n/n!.
            for (x, t) in [(Letter::X0, z.ln()), (Letter::X1, -(1.0 - z).ln())] {
                let got = li_power_star(&a, x, i, t);
                let want = closed_form(af, i, t);
                let err = ((got - want) / want).abs();
                if err >= 1e-8 {
                    failures.push(format!(
                        "a={} i={i} {x}: relative error {err:e}",
                        format_q(&a)
                    ));
                }
            }
        }
    }
    for n in 1..=30u64 {
        for i in 1..=30u64 {
            let rhs: BigInt = (0..=n)
                .map(|k| binomial(i - 1, k) * binomial(n, n - k))
                .sum();
            if binomial(n + i - 1, n) != rhs {
                failures.push(format!("binomial identity n={n} i={i}"));
            }
        }
    }
    failures
}

fn criterion_07_kleene_and_lazard() -> Vec<String> {
    let mut failures = checks::ratl_kleene_consistency(707).failures;
    failures.extend(checks::ratl_shuffle_kronecker(707).failures);
    if !ratl::lazard_check(8) {
        failures.push("Lazard elimination at degree 8".into());
    }
    failures
}

fn criterion_08_operators() -> Vec<String> {
    let r = checks::lifun_operators(808);
    r.failures
}

fn criterion_09_star_exponential() -> Vec<String> {
    let mut failures = Vec::new();
    let e = ratl::parse("x0* # (-x0)*").unwrap();
    let t = ratl::compile(&e).unwrap().truncate(12).unwrap();
    if t != NCPoly::one() {
        failures.push(format!("truncation is {t}"));
    }
    for l in [Letter::X0, Letter::X1] {
        let x = NCPoly::from_word(Word::letter(l));
        for n in 0..=10u32 {
            let want = NCPoly::monomial(
                Word::new(vec![l; n as usize]).unwrap(),
                Q::from_integer(factorial(n as u64)),
            );
            if ncpoly::shuffle_pow(&x, n).unwrap() != want {
                failures.push(format!("{l}^⧢{n}"));
            }
        }
    }
    failures
}

fn criterion_10_newton_girard_and_gamma() -> Vec<String> {
    let mut failures = Vec::new();
    for n in 0..=20 {
        for kmax in 0..=8 {
            if !newton_girard_check(n, kmax) {
                failures.push(format!("Newton–Girard N={n} kmax={kmax}"));
            }
        }
    }
    for t in [q_frac(1, 2), q_frac(-1, 4), q_frac(1, 3)] {
        let res = gamma_star_check(&t, 60, 100_000).unwrap();
        if res >= 1e-8 {
            failures.push(format!("Γ residual at t={}: {res:e}", format_q(&t)));
        }
    }
    failures
}

fn main() {
    let criteria: [(u32, &str, u64, Criterion); 10] = [
        (
            1,
            "a_coeffs(y_k y_0), k = 0..4",
            1,
            criterion_01_coefficient_table,
        ),
        (2, "H⁻ closed forms", 1, criterion_02_harmonic_closed_forms),
        (
            3,
            "γ at non-positive multi-indices",
            5,
            criterion_03_gamma_table,
        ),
        (
            4,
            "kernel of Li on star polynomials",
            30,
            criterion_04_kernel,
        ),
        (
            5,
            "Li is a shuffle morphism",
            60,
            criterion_05_shuffle_morphism,
        ),
        (
            6,
            "powers of (a x)* and the binomial convolution",
            10,
            criterion_06_power_of_stars,
        ),
        (
            7,
            "linear representations and Lazard elimination",
            30,
            criterion_07_kleene_and_lazard,
        ),
        (8, "θ/ι operator identities", 10, criterion_08_operators),
        (
            9,
            "star-exponential law and letter powers",
            1,
            criterion_09_star_exponential,
        ),
        (
            10,
            "Newton–Girard and the Γ identity",
            30,
            criterion_10_newton_girard_and_gamma,
        ),
    ];
    let selected: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (id, title, secs, f) in criteria {
        let name = format!("criterion_{id:02}");
        if !selected.is_empty() && !selected.iter().any(|s| name.contains(s.as_str())) {
            continue;
        }
        if !run(id, title, Duration::from_secs(secs), f) {
            failed += 1;
        }
    }
    println!("acceptance: {failed} criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
