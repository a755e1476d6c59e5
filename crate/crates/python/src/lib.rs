use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ratli::lifun::CFunction;
use ratli::ncpoly::{self, NCPoly};
use ratli::rational::format_q;
use ratli::ratl::{self, LinRep, RatExpr};
use ratli::starpoly::{self, StarPoly};
use ratli::{neglog, polyzeta, words, Word};

fn err(e: ratli::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn word(text: &str) -> PyResult<Word> {
    text.parse().map_err(err)
}

fn letters(w: &Word) -> Vec<String> {
    w.letters().iter().map(ToString::to_string).collect()
}

/// Noncommutative polynomial with rational coefficients.
#[pyclass(name = "Poly", frozen)]
struct PyPoly(NCPoly);

#[pymethods]
impl PyPoly {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyPoly).map_err(err)
    }

    fn coeff(&self, w: &str) -> PyResult<String> {
        Ok(format_q(&self.0.coeff(&word(w)?)))
    }

    /// `[(letters, coefficient)]` in word order.
    fn terms(&self) -> Vec<(Vec<String>, String)> {
        self.0
            .terms()
            .map(|(w, c)| (letters(w), format_q(c)))
            .collect()
    }

    fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    fn shuffle(&self, other: &PyPoly) -> PyResult<PyPoly> {
        ncpoly::shuffle(&self.0, &other.0).map(PyPoly).map_err(err)
    }

    fn stuffle(&self, other: &PyPoly) -> PyResult<PyPoly> {
        ncpoly::stuffle(&self.0, &other.0).map(PyPoly).map_err(err)
    }

    fn __add__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 * &other.0)
    }

    fn __eq__(&self, other: &PyPoly) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }
}

/// Rational series given by an expression and its linear representation.
#[pyclass(name = "RatSeries", frozen)]
struct PyRatSeries {
    expr: RatExpr,
    rep: LinRep,
}

#[pymethods]
impl PyRatSeries {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let expr = ratl::parse(text).map_err(err)?;
        let rep = ratl::compile(&expr).map_err(err)?;
        Ok(PyRatSeries { expr, rep })
    }

    fn coeff(&self, w: &str) -> PyResult<String> {
        self.rep.coeff(&word(w)?).map(|c| format_q(&c)).map_err(err)
    }

    fn truncate(&self, n: usize) -> PyResult<PyPoly> {
        self.rep.truncate(n).map(PyPoly).map_err(err)
    }

    fn dim(&self) -> usize {
        self.rep.dim()
    }

    fn shuffle(&self, other: &PyRatSeries) -> PyRatSeries {
        PyRatSeries {
            expr: RatExpr::shuffle(self.expr.clone(), other.expr.clone()),
            rep: self.rep.shuffle(&other.rep),
        }
    }

    fn __add__(&self, other: &PyRatSeries) -> PyRatSeries {
        PyRatSeries {
            expr: RatExpr::sum(self.expr.clone(), other.expr.clone()),
            rep: self.rep.sum(&other.rep),
        }
    }

    fn __mul__(&self, other: &PyRatSeries) -> PyRatSeries {
        PyRatSeries {
            expr: RatExpr::conc(self.expr.clone(), other.expr.clone()),
            rep: self.rep.conc(&other.rep),
        }
    }

    fn __str__(&self) -> String {
        self.expr.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RatSeries('{}')", self.expr)
    }
}

/// Element of the star-polynomial algebra.
#[pyclass(name = "StarPoly", frozen)]
struct PyStarPoly(StarPoly);

#[pymethods]
impl PyStarPoly {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyStarPoly).map_err(err)
    }

    fn shuffle(&self, other: &PyStarPoly) -> PyResult<PyStarPoly> {
        starpoly::shuffle_star(&self.0, &other.0)
            .map(PyStarPoly)
            .map_err(err)
    }

    /// Normal form modulo the kernel ideal.
    fn rewrite(&self) -> PyStarPoly {
        PyStarPoly(starpoly::rewrite_mod_j(&self.0))
    }

    fn is_normal(&self) -> bool {
        self.0.is_normal()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn li(&self) -> PyCFunction {
        PyCFunction(starpoly::li_ext(&self.0))
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    fn __add__(&self, other: &PyStarPoly) -> PyStarPoly {
        PyStarPoly(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyStarPoly) -> PyStarPoly {
        PyStarPoly(&self.0 - &other.0)
    }

    fn __eq__(&self, other: &PyStarPoly) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("StarPoly('{}')", self.0)
    }
}

/// Combination of `z^a (1-z)^-b Li_u log(z)^n/n!` terms.
#[pyclass(name = "CFunction", frozen)]
struct PyCFunction(CFunction);

#[pymethods]
impl PyCFunction {
    #[staticmethod]
    fn from_word(w: &str) -> PyResult<PyCFunction> {
        CFunction::from_word(&word(w)?)
            .map(PyCFunction)
            .map_err(err)
    }

    #[staticmethod]
    fn monomial(a: i64, b: u32) -> PyCFunction {
        PyCFunction(CFunction::monomial(a, b))
    }

    fn derivative(&self) -> PyCFunction {
        PyCFunction(self.0.derivative())
    }

    fn theta0(&self) -> PyCFunction {
        PyCFunction(self.0.theta0())
    }

    fn theta1(&self) -> PyCFunction {
        PyCFunction(self.0.theta1())
    }

    fn iota0(&self) -> PyResult<PyCFunction> {
        self.0.iota0().map(PyCFunction).map_err(err)
    }

    fn iota1(&self) -> PyResult<PyCFunction> {
        self.0.iota1().map(PyCFunction).map_err(err)
    }

    #[pyo3(signature = (z, trunc = 2000))]
    fn eval(&self, z: Complex64, trunc: usize) -> PyResult<Complex64> {
        self.0.eval(z, trunc).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __add__(&self, other: &PyCFunction) -> PyCFunction {
        PyCFunction(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyCFunction) -> PyCFunction {
        PyCFunction(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyCFunction) -> PyCFunction {
        PyCFunction(self.0.mul(&other.0))
    }

    fn __eq__(&self, other: &PyCFunction) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyfunction]
fn a_coeffs(w: &str) -> PyResult<Vec<String>> {
    Ok(neglog::a_coeffs(&word(w)?)
        .map_err(err)?
        .iter()
        .map(format_q)
        .collect())
}

#[pyfunction]
fn neg_hsum(w: &str, n: u64) -> PyResult<String> {
    neglog::neg_hsum(&word(w)?, n)
        .map(|q| format_q(&q))
        .map_err(err)
}

#[pyfunction]
fn neg_li(w: &str) -> PyResult<PyStarPoly> {
    neglog::neg_li_poly(&word(w)?).map(PyStarPoly).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (w, allow_excess = false))]
fn faulhaber(w: &str, allow_excess: bool) -> PyResult<String> {
    let a = neglog::a_coeffs(&word(w)?).map_err(err)?;
    let form = if allow_excess {
        neglog::faulhaber_form(&a)
    } else {
        neglog::faulhaber_reduce(&a).map_err(err)?
    };
    Ok(neglog::format_form(&form))
}

#[pyfunction]
fn gamma_neg(s: Vec<i64>) -> PyResult<String> {
    polyzeta::gamma_neg(&s).map(|q| format_q(&q)).map_err(err)
}

#[pyfunction]
fn newton_girard_check(n: u64, kmax: usize) -> bool {
    polyzeta::newton_girard_check(n, kmax)
}

#[pyfunction]
fn lyndon_words(n: usize) -> Vec<String> {
    words::lyndon_words_x(n)
        .iter()
        .map(ToString::to_string)
        .collect()
}

/// Runs the command-line front end; returns `(exit code, stdout, stderr)`.
#[pyfunction]
fn run_cli(argv: Vec<String>) -> (i32, String, String) {
    let out = ratli::cli::run(argv);
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn pyratli(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_class::<PyRatSeries>()?;
    m.add_class::<PyStarPoly>()?;
    m.add_class::<PyCFunction>()?;
    m.add_function(wrap_pyfunction!(a_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(neg_hsum, m)?)?;
    m.add_function(wrap_pyfunction!(neg_li, m)?)?;
    m.add_function(wrap_pyfunction!(faulhaber, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_neg, m)?)?;
    m.add_function(wrap_pyfunction!(newton_girard_check, m)?)?;
    m.add_function(wrap_pyfunction!(lyndon_words, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
