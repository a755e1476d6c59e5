//! Command-line front end producing deterministic JSON.

use std::io;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks;
use crate::error::{Error, Result};
use crate::ncpoly::{self, NCPoly, DEFAULT_TERM_BUDGET};
use crate::neglog::{
    a_coeffs, faulhaber_form, faulhaber_reduce, format_form, neg_hsum, term_bound,
};
use crate::polyzeta::{gamma_neg, gamma_star_check, newton_girard_check};
use crate::rational::{format_q, parse_q, to_f64, Q};
use crate::ratl;
use crate::starpoly::{li_ext, rewrite_mod_j, StarPoly};
use crate::words::Word;

#[derive(Parser, Debug)]
#[command(
    name = "ratli",
    version,
    about = "Polylogarithms indexed by rational series"
)]
struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, default_value_t = true)]
    json: bool,
    /// Emit plain text instead of JSON where a text form exists.
    #[arg(long, global = true)]
    text: bool,
    /// Upper bound on intermediate term counts.
    #[arg(long, global = true, default_value_t = DEFAULT_TERM_BUDGET)]
    term_budget: usize,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Shuffle product of two polynomials over X.
    Shuffle { p: String, q: String },
    /// Quasi-shuffle product of two polynomials over Y.
    Stuffle { p: String, q: String },
    /// Coefficient of a word in a rational expression.
    Coeff { expr: String, word: String },
    /// All terms of a rational expression up to a length.
    Truncate { expr: String, n: usize },
    /// Normal form of a star polynomial modulo the kernel ideal.
    Rewrite { poly: String },
    /// Coefficients a_k of Li_w over Y.
    Negli { word: String },
    /// Harmonic sum at a non-positive index word.
    Hsum {
        #[arg(long, required = true)]
        neg: bool,
        word: String,
        n: u64,
    },
    /// Compact binomial form of H⁻_w(N).
    Faulhaber {
        word: String,
        /// Print the greedy form even above the term bound.
        #[arg(long)]
        allow_excess: bool,
    },
    /// Regularized value at non-positive indices (pass them after `--`).
    Gamma {
        #[arg(allow_negative_numbers = true, required = true)]
        s: Vec<i64>,
    },
    /// Numerical value of Li on a star polynomial.
    LiEval {
        poly: String,
        /// Real part of z (rational or decimal).
        z: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        im: f64,
        #[arg(long, default_value_t = 2000)]
        trunc: usize,
    },
    /// Bundled checks.
    Check {
        #[command(subcommand)]
        which: CheckVerb,
    },
}

#[derive(Subcommand, Debug)]
enum CheckVerb {
    NewtonGirard(NgArgs),
    GammaStar {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 60)]
        zeta_terms: u32,
        #[arg(long, default_value_t = 100_000)]
        quad_points: u64,
    },
    Lazard {
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    All {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct NgArgs {
    #[arg(long = "N", default_value_t = 20)]
    n: u64,
    #[arg(long, default_value_t = 8)]
    kmax: usize,
}

/// Result of one invocation: exit code, standard output, standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Writes objects as `{"a": 1, "b": [2, 3]}`, keys sorted.
struct SpacedFormatter;

impl serde_json::ser::Formatter for SpacedFormatter {
    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SpacedFormatter);
    v.serialize(&mut ser).expect("in-memory write");
    String::from_utf8(buf).expect("utf-8 JSON")
}

fn ok(v: Value) -> Outcome {
    Outcome {
        code: 0,
        stdout: to_json_string(&v) + "\n",
        stderr: String::new(),
    }
}

fn text(s: String) -> Outcome {
    Outcome {
        code: 0,
        stdout: s + "\n",
        stderr: String::new(),
    }
}

fn word_json(w: &Word) -> Value {
    json!(w
        .letters()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>())
}

fn q_list(v: &[Q]) -> Value {
    json!(v.iter().map(format_q).collect::<Vec<_>>())
}

fn parse_poly(s: &str) -> Result<NCPoly> {
    s.parse()
}

fn parse_real(s: &str) -> Result<f64> {
    parse_q(s).map(|q| to_f64(&q)).or_else(|_| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("not a number: {s}")))
    })
}

/// Runs the CLI on `argv` (without the program name).
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = std::iter::once("ratli".to_string()).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(out) => out,
        Err(e) => Outcome {
            code: 1,
            stdout: to_json_string(&json!({ "error": e.to_string() })) + "\n",
            stderr: String::new(),
        },
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let budget = cli.term_budget;
    let plain = cli.text || !cli.json;
    Ok(match &cli.verb {
        Verb::Shuffle { p, q } | Verb::Stuffle { p, q } => {
            let (p, q) = (parse_poly(p)?, parse_poly(q)?);
            let r = if matches!(cli.verb, Verb::Shuffle { .. }) {
                ncpoly::shuffle_bounded(&p, &q, budget)?
            } else {
                ncpoly::stuffle_bounded(&p, &q, budget)?
            };
            if plain {
                text(r.to_string())
            } else {
                ok(json!({ "result": r.to_json() }))
            }
        }
        Verb::Coeff { expr, word } => {
            let rep = ratl::compile(&ratl::parse(expr)?)?;
            let c = rep.coeff(&word.parse::<Word>()?)?;
            if plain {
                text(format_q(&c))
            } else {
                ok(json!({ "coeff": format_q(&c) }))
            }
        }
        Verb::Truncate { expr, n } => {
            let rep = ratl::compile(&ratl::parse(expr)?)?;
            let r = rep.truncate_bounded(*n, budget)?;
            if plain {
                text(r.to_string())
            } else {
                ok(json!({ "series": r.to_json() }))
            }
        }
        Verb::Rewrite { poly } => {
            let nf = rewrite_mod_j(&poly.parse::<StarPoly>()?);
            if plain {
                text(nf.to_string())
            } else {
                ok(json!({ "normal_form": nf.to_json() }))
            }
        }
        Verb::Negli { word } => {
            let a = a_coeffs(&word.parse::<Word>()?)?;
            ok(json!({ "a": q_list(&a) }))
        }
        Verb::Hsum { word, n, .. } => {
            let w: Word = word.parse()?;
            ok(json!({ "hsum": format_q(&neg_hsum(&w, *n)?), "N": n, "word": word_json(&w) }))
        }
        Verb::Faulhaber { word, allow_excess } => {
            let w: Word = word.parse()?;
            let a = a_coeffs(&w)?;
            let form = if *allow_excess {
                faulhaber_form(&a)
            } else {
                faulhaber_reduce(&a)?
            };
            if plain {
                text(format_form(&form))
            } else {
                let terms: Vec<Value> = form
                    .iter()
                    .map(|t| json!({ "coef": format_q(&t.coef), "shift": t.shift, "order": t.order }))
                    .collect();
                ok(json!({ "bound": term_bound(&a), "form": terms, "text": format_form(&form) }))
            }
        }
        Verb::Gamma { s } => ok(json!({ "gamma": format_q(&gamma_neg(s)?) })),
        Verb::LiEval { poly, z, im, trunc } => {
            let f = li_ext(&poly.parse::<StarPoly>()?);
            let v = f.eval(Complex64::new(parse_real(z)?, *im), *trunc)?;
            ok(json!({ "re": v.re, "im": v.im }))
        }
        Verb::Check { which } => check(which)?,
    })
}

fn check(which: &CheckVerb) -> Result<Outcome> {
    Ok(match which {
        CheckVerb::NewtonGirard(NgArgs { n, kmax }) => {
            ok(json!({ "N": n, "kmax": kmax, "ok": newton_girard_check(*n, *kmax) }))
        }
        CheckVerb::GammaStar {
            t,
            zeta_terms,
            quad_points,
        } => {
            let t = parse_q(t)?;
            let res = gamma_star_check(&t, *zeta_terms, *quad_points)?;
            ok(json!({ "ok": res < 1e-8, "residual": res, "t": format_q(&t) }))
        }
        CheckVerb::Lazard { n } => ok(json!({ "N": n, "ok": ratl::lazard_check(*n) })),
        CheckVerb::All { seed } => {
            let reports = checks::run_all(*seed);
            let all_ok = reports.iter().all(|r| r.passed());
            let suites: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "passed": r.cases - r.failures.len(),
                        "failed": r.failures.len(),
                        "failures": r.failures.iter().take(5).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut out = ok(json!({ "ok": all_ok, "seed": seed, "suites": suites }));
            if !all_ok {
                out.code = 1;
            }
            out
        }
    })
}
