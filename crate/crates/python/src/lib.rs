use std::collections::BTreeMap;

use gerbelab::algebra_core::{format_rational, parse_rational};
use gerbelab::cech::{self, AbelianCoefficients};
use gerbelab::cli::{self, CommandRequest, InputSource, Operation};
use gerbelab::io::{self, AlgebraDoc, Scalar};
use gerbelab::lie;
use gerbelab::orbifold::{self, SectorSymmetry};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: gerbelab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn symmetry(name: &str) -> PyResult<SectorSymmetry> {
    match name {
        "normalizer" => Ok(SectorSymmetry::Normalizer),
        "centralizer" => Ok(SectorSymmetry::Centralizer),
        other => Err(PyValueError::new_err(format!("unknown symmetry {other:?}"))),
    }
}

/// Lie algebra over Q given by structure constants.
#[pyclass(name = "LieAlgebra", frozen)]
struct PyLieAlgebra(lie::LieAlgebra);

#[pymethods]
impl PyLieAlgebra {
    /// `brackets` maps `"x,y"` to `{basis name: coefficient}`; coefficients
    /// are integers or strings such as `"-3/2"`.
    #[new]
    #[pyo3(signature = (basis, brackets = BTreeMap::new()))]
    fn new(basis: Vec<String>, brackets: BTreeMap<String, BTreeMap<String, String>>) -> PyResult<Self> {
        let doc = AlgebraDoc {
            basis,
            brackets: brackets
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().map(|(n, c)| (n, Scalar::Text(c))).collect()))
                .collect(),
        };
        io::algebra(&doc).map(Self).map_err(err)
    }

    #[staticmethod]
    fn heisenberg() -> Self {
        Self(lie::LieAlgebra::heisenberg())
    }

    #[staticmethod]
    fn abelian(n: usize) -> Self {
        Self(lie::LieAlgebra::abelian(n))
    }

    #[staticmethod]
    fn gl(n: usize) -> Self {
        Self(lie::LieAlgebra::gl(n))
    }

    /// Double extension of `(R^m, form)` by the skew derivation `h`.
    /// Returns the algebra and the Gram matrix of its invariant metric.
    #[staticmethod]
    fn double_extension(form: Vec<Vec<String>>, h: Vec<Vec<String>>) -> PyResult<(Self, Vec<Vec<String>>)> {
        let form = lie::BilinearForm::new(rat_matrix(form)?).map_err(err)?;
        let (l, b) = lie::double_extension(&form, &rat_matrix(h)?).map_err(err)?;
        Ok((Self(l), io::matrix_json(b.gram())))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn basis(&self) -> Vec<String> {
        self.0.basis_names().to_vec()
    }

    fn jacobi_holds(&self) -> bool {
        self.0.jacobi_violations().is_empty()
    }

    fn nilpotency_class(&self) -> Option<usize> {
        self.0.nilpotency_class()
    }

    fn betti_numbers(&self) -> PyResult<Vec<usize>> {
        lie::betti_numbers(&self.0).map_err(err)
    }

    /// Gram matrices spanning the ad-invariant symmetric forms.
    fn invariant_forms(&self) -> PyResult<Vec<Vec<Vec<String>>>> {
        let space = lie::invariant_symmetric_forms(&self.0).map_err(err)?;
        Ok(space.basis.iter().map(|f| io::matrix_json(f.form.gram())).collect())
    }

    /// Nonzero components of `ν(x,y,z) = B([x,y],z)` and whether it is closed.
    fn nu(&self, form: Vec<Vec<String>>) -> PyResult<(BTreeMap<String, Vec<String>>, bool)> {
        let b = lie::BilinearForm::new(rat_matrix(form)?).map_err(err)?;
        let r = lie::nu_form(&self.0, &b).map_err(err)?;
        Ok((io::form_json(&self.0, &r.form), r.closed))
    }

    fn __repr__(&self) -> String {
        format!("LieAlgebra({})", self.0.basis_names().join(", "))
    }
}

fn rat_matrix(rows: Vec<Vec<String>>) -> PyResult<gerbelab::algebra_core::RatMatrix> {
    let doc: Vec<Vec<Scalar>> = rows.into_iter().map(|r| r.into_iter().map(Scalar::Text).collect()).collect();
    io::rat_matrix(&doc).map_err(err)
}

/// Simplicial complex given by its facets.
#[pyclass(name = "Nerve", frozen)]
struct PyNerve(cech::Nerve);

#[pymethods]
impl PyNerve {
    #[new]
    fn new(facets: Vec<Vec<usize>>) -> PyResult<Self> {
        cech::Nerve::from_facets(&facets).map(Self).map_err(err)
    }

    #[staticmethod]
    fn tetrahedron_boundary() -> Self {
        Self(cech::Nerve::tetrahedron_boundary())
    }

    #[staticmethod]
    fn projective_plane() -> Self {
        Self(cech::Nerve::projective_plane())
    }

    #[staticmethod]
    fn torus() -> Self {
        Self(cech::Nerve::torus())
    }

    #[staticmethod]
    fn full_simplex(vertices: usize) -> Self {
        Self(cech::Nerve::full_simplex(vertices))
    }

    fn simplices(&self, k: usize) -> Vec<Vec<usize>> {
        self.0.simplices(k).to_vec()
    }

    fn euler_characteristic(&self) -> i64 {
        self.0.euler_characteristic()
    }

    /// `H^k` with coefficients `"Z"`, `"Q"` or `"Z/m"`, as
    /// `(description, free rank, torsion invariants)`.
    #[pyo3(signature = (k, coefficients = "Z"))]
    fn cohomology(&self, k: usize, coefficients: &str) -> PyResult<(String, usize, Vec<String>)> {
        let coeffs = AbelianCoefficients::parse(coefficients).map_err(err)?;
        let h = cech::cohomology(&self.0, k, &coeffs).map_err(err)?;
        Ok((h.to_string(), h.free_rank, h.torsion.iter().map(ToString::to_string).collect()))
    }

    /// Coboundary of a cochain keyed by `"i,j,..."`.
    #[pyo3(signature = (cochain, coefficients = "Z"))]
    fn coboundary(&self, cochain: BTreeMap<String, String>, coefficients: &str) -> PyResult<BTreeMap<String, String>> {
        let c = self.cochain(cochain, coefficients)?;
        let d = cech::coboundary(&self.0, &c).map_err(err)?;
        Ok(io::cochain_json(&self.0, &d))
    }

    /// A witness `b` with `c' - c = δb`, or `None`.
    #[pyo3(signature = (c, c_prime, coefficients = "Z"))]
    fn are_cohomologous(
        &self,
        c: BTreeMap<String, String>,
        c_prime: BTreeMap<String, String>,
        coefficients: &str,
    ) -> PyResult<Option<BTreeMap<String, String>>> {
        let a = self.cochain(c, coefficients)?;
        let b = self.cochain(c_prime, coefficients)?;
        let w = cech::are_cohomologous(&self.0, &a, &b).map_err(err)?;
        Ok(w.map(|w| io::cochain_json(&self.0, &w)))
    }

    fn __repr__(&self) -> String {
        let counts: Vec<String> = (0..=self.0.dim().unwrap_or(0)).map(|k| self.0.count(k).to_string()).collect();
        format!("Nerve(f-vector [{}])", counts.join(", "))
    }
}

impl PyNerve {
    fn cochain(&self, map: BTreeMap<String, String>, coefficients: &str) -> PyResult<cech::Cochain> {
        let coeffs = AbelianCoefficients::parse(coefficients).map_err(err)?;
        let doc = map.into_iter().map(|(k, v)| (k, Scalar::Text(v))).collect();
        io::abelian_cochain(&self.0, &coeffs, &doc).map_err(err)
    }
}

/// Finite group acting on `T^n = R^n / Z^n`.
#[pyclass(name = "ToralAction", frozen)]
struct PyToralAction(orbifold::ToralAction);

#[pymethods]
impl PyToralAction {
    /// Reads an action from a JSON document with `group`, `n`, `rho_Z` and
    /// optionally `rho_C`.
    #[staticmethod]
    #[pyo3(signature = (text, max_group_order = gerbelab::group::DEFAULT_MAX_GROUP_ORDER))]
    fn from_json(text: &str, max_group_order: usize) -> PyResult<Self> {
        let doc = io::parse_document(text).map_err(err)?;
        io::toral_action(&doc, max_group_order).map(Self).map_err(err)
    }

    /// `Z/2` acting by `-I`.
    #[staticmethod]
    fn minus_identity(n: usize) -> Self {
        Self(orbifold::ToralAction::minus_identity(n))
    }

    #[staticmethod]
    fn trivial(n: usize) -> Self {
        Self(orbifold::ToralAction::trivial(n))
    }

    #[staticmethod]
    fn hexagonal_rotation() -> Self {
        Self(orbifold::ToralAction::hexagonal_rotation())
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.group().order()
    }

    fn degree_shift(&self, element: usize, tolerance: f64) -> PyResult<String> {
        if element >= self.0.group().order() {
            return Err(PyValueError::new_err(format!("no element {element}")));
        }
        let s = self.0.degree_shift(element, tolerance).map_err(err)?;
        Ok(format_rational(&s.shift))
    }

    /// Chen–Ruan table as `[(degree, dimension)]` in increasing degree.
    #[pyo3(signature = (tolerance = orbifold::DEFAULT_EIGENVALUE_TOLERANCE, symmetry = "normalizer"))]
    fn cr_table(&self, tolerance: f64, symmetry: &str) -> PyResult<Vec<(String, usize)>> {
        let sym = self::symmetry(symmetry)?;
        Ok(self.0.cr_cohomology(tolerance, sym).map_err(err)?.table())
    }
}

/// Runs a command such as `"orbifold cr"` on a JSON document and returns
/// `(exit code, JSON report)`.
#[pyfunction]
#[pyo3(signature = (command, document, tolerance = orbifold::DEFAULT_EIGENVALUE_TOLERANCE, max_group_order = gerbelab::group::DEFAULT_MAX_GROUP_ORDER))]
fn run(command: &str, document: &str, tolerance: f64, max_group_order: usize) -> PyResult<(i32, String)> {
    let op = Operation::parse(command).map_err(err)?;
    let req = CommandRequest {
        operation: op,
        input: InputSource::Inline(document.to_string()),
        tolerance,
        max_group_order,
    };
    let r = cli::run(&req);
    Ok((r.exit_code(), r.to_json()))
}

/// Like `run`, on a bundled fixture; the command defaults to the fixture's own.
#[pyfunction]
#[pyo3(signature = (name, command = None))]
fn run_fixture(name: &str, command: Option<&str>) -> PyResult<(i32, String)> {
    let entry = cli::list_fixtures()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown fixture {name:?}")))?;
    let op = Operation::parse(command.unwrap_or(&entry.command)).map_err(err)?;
    let r = cli::run(&CommandRequest::new(op, InputSource::Fixture(name.to_string())));
    Ok((r.exit_code(), r.to_json()))
}

#[pyfunction]
fn fixtures() -> Vec<(String, String, String)> {
    cli::list_fixtures()
        .into_iter()
        .map(|f| (f.name, f.command, f.description))
        .collect()
}

/// Normalizes an exact rational written as `"p/q"`.
#[pyfunction]
fn rational(text: &str) -> PyResult<String> {
    parse_rational(text).map(|q| format_rational(&q)).map_err(err)
}

#[pymodule]
fn gerbelab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLieAlgebra>()?;
    m.add_class::<PyNerve>()?;
    m.add_class::<PyToralAction>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_fixture, m)?)?;
    m.add_function(wrap_pyfunction!(fixtures, m)?)?;
    m.add_function(wrap_pyfunction!(rational, m)?)?;
    Ok(())
}
