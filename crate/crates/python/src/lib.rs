use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use hassegen::abgroup::{smith_normal_form as snf, FgGroup, IntMatrix};
use hassegen::cli;
use hassegen::curve::Curve as CoreCurve;
use hassegen::error::Error;
use hassegen::finitefield::make_field;
use hassegen::groups::{self, ClassNumber, Dynkin, GroupSpec as CoreSpec, Isogeny};
use hassegen::hassedomain::{CoverDescriptor, HasseDomain};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn group_tuple(g: &FgGroup) -> (Vec<BigInt>, usize) {
    (g.invariant_factors().to_vec(), g.free_rank())
}

/// Smooth projective curve over F_{p^k}.
#[pyclass(module = "hassegen", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Curve {
    inner: CoreCurve,
}

#[pymethods]
impl Curve {
    #[staticmethod]
    #[pyo3(signature = (p, k = 1))]
    fn projective_line(p: u64, k: usize) -> PyResult<Self> {
        Ok(Curve { inner: CoreCurve::projective_line(make_field(p, k).map_err(err)?) })
    }

    /// y^2 = x^3 + a x + b with a, b in the prime field.
    #[staticmethod]
    #[pyo3(signature = (p, a, b, k = 1))]
    fn elliptic(p: u64, a: i64, b: i64, k: usize) -> PyResult<Self> {
        let f = make_field(p, k).map_err(err)?;
        let (a, b) = (f.from_int(a), f.from_int(b));
        Ok(Curve { inner: CoreCurve::elliptic(f, a, b).map_err(err)? })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.field().q()
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus()
    }

    #[pyo3(signature = (d = 1))]
    fn point_count(&self, d: usize) -> PyResult<u64> {
        self.inner.point_count(d).map_err(err)
    }

    fn l_polynomial(&self) -> PyResult<Vec<i64>> {
        self.inner.l_polynomial().map_err(err)
    }

    /// (d1, d2) with E(F_q) = Z/d1 x Z/d2.
    fn group_structure(&self) -> PyResult<(u64, u64)> {
        let s = self.inner.group_structure().map_err(err)?;
        Ok((s.d1, s.d2))
    }

    fn num_places(&self, degree: usize) -> PyResult<usize> {
        Ok(self.inner.places_of_degree(degree).map_err(err)?.len())
    }

    fn __repr__(&self) -> String {
        self.inner.describe()
    }
}

/// O_S, with S given as (degree, index) selectors.
#[pyclass(module = "hassegen", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Domain {
    inner: HasseDomain,
}

#[pymethods]
impl Domain {
    #[new]
    fn new(curve: &Curve, places: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Domain { inner: HasseDomain::from_selectors(curve.inner.clone(), &places).map_err(err)? })
    }

    #[getter]
    fn s_size(&self) -> usize {
        self.inner.s_size()
    }

    /// (invariant factors, free rank) of Pic(O_S).
    fn pic(&self) -> (Vec<BigInt>, usize) {
        group_tuple(self.inner.pic())
    }

    fn brauer_order(&self, m: u64) -> BigInt {
        self.inner.brauer_torsion(m).order()
    }

    fn places(&self) -> Vec<String> {
        self.inner.describe_places()
    }
}

/// Twisting cover for outer forms and Res(PGL).
#[pyclass(module = "hassegen", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Cover {
    inner: CoverDescriptor,
}

#[pymethods]
impl Cover {
    #[staticmethod]
    fn constant(base: &Domain, d: usize) -> PyResult<Self> {
        Ok(Cover { inner: CoverDescriptor::constant_extension(&base.inner, d).map_err(err)? })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn cover_s_size(&self) -> usize {
        self.inner.cover_s_size()
    }

    fn is_imaginary(&self) -> bool {
        self.inner.is_imaginary()
    }
}

#[pyclass(module = "hassegen", frozen)]
struct Group {
    inner: CoreSpec,
}

#[pymethods]
impl Group {
    #[new]
    #[pyo3(signature = (kind, domain, n = None, isogeny = "adjoint", twist = None, noncompact = None, splitting_point = None))]
    fn new(
        kind: &str,
        domain: &Domain,
        n: Option<usize>,
        isogeny: &str,
        twist: Option<&Cover>,
        noncompact: Option<bool>,
        splitting_point: Option<bool>,
    ) -> PyResult<Self> {
        let d = Dynkin::parse(kind, n).map_err(err)?;
        let iso: Isogeny = isogeny.parse().map_err(err)?;
        let spec = CoreSpec::new(d, iso, domain.inner.clone(), twist.map(|c| c.inner.clone()), noncompact, splitting_point)
            .map_err(err)?;
        Ok(Group { inner: spec })
    }

    fn fundamental_group(&self) -> PyResult<String> {
        Ok(self.inner.fundamental_group().map_err(err)?.to_string())
    }

    fn genera_count(&self) -> PyResult<BigInt> {
        groups::genera_count(&self.inner).map_err(err)
    }

    /// (value, exact); a non-exact value is a lower bound.
    fn class_number(&self) -> PyResult<(BigInt, bool)> {
        Ok(match groups::class_number(&self.inner).map_err(err)? {
            ClassNumber::Exact(v) => (v, true),
            ClassNumber::AtLeast(v) => (v, false),
        })
    }

    fn h1_size(&self) -> PyResult<BigInt> {
        groups::h1_size(&self.inner).map_err(err)
    }

    /// (outcome, criterion, gcd_condition).
    fn hasse(&self) -> PyResult<(String, String, bool)> {
        let r = groups::hasse_verdict(&self.inner).map_err(err)?;
        Ok((r.outcome.to_string(), r.criterion.to_string(), r.gcd_condition))
    }

    /// (numerator, denominator, crosscheck agreed or None).
    fn tamagawa(&self) -> PyResult<(BigInt, BigInt, Option<bool>)> {
        let t = groups::tamagawa(&self.inner).map_err(err)?;
        Ok((t.tau.numer().clone(), t.tau.denom().clone(), t.crosscheck_ok()))
    }
}

/// Diagonal of the Smith form of an integer matrix given by rows.
#[pyfunction]
fn smith_normal_form(rows: Vec<Vec<BigInt>>) -> PyResult<Vec<BigInt>> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    let m = IntMatrix::new(r, c, rows.into_iter().flatten().collect()).map_err(err)?;
    Ok(snf(&m).diagonal())
}

/// Runs commands on request text; returns (report, exit code).
#[pyfunction]
#[pyo3(signature = (text, commands, machine = true))]
fn run_request(text: &str, commands: Vec<String>, machine: bool) -> PyResult<(String, i32)> {
    let req = cli::parse_request_str(text).map_err(err)?;
    let mut cmds = Vec::new();
    for c in &commands {
        cmds.push(cli::Command::parse(c).ok_or_else(|| PyValueError::new_err(format!("unknown command '{}'", c)))?);
    }
    let rep = cli::run(&req, &cmds).map_err(err)?;
    Ok((rep.render(machine), rep.exit_code()))
}

#[pymodule]
#[pyo3(name = "hassegen")]
fn hassegen_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Curve>()?;
    m.add_class::<Domain>()?;
    m.add_class::<Cover>()?;
    m.add_class::<Group>()?;
    m.add_function(wrap_pyfunction!(smith_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(run_request, m)?)?;
    Ok(())
}
