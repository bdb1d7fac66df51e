//! Python bindings for the `adlv_core` library.

use std::sync::Arc;

use adlv_core::finite_flag_lab::{self as flags, FiniteField, Flag};
use adlv_core::sigma_structures::{CoxeterDatum, EOElement};
use adlv_core::{AffineElement, AffineWeyl, DynkinType, NodeSet, RootDatum};
use num_rational::Rational64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: adlv_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn nodes(v: &[usize]) -> NodeSet {
    v.iter().copied().collect()
}

fn frac(r: Rational64) -> (i64, i64) {
    (*r.numer(), *r.denom())
}

fn root_datum(type_letter: &str, rank: usize) -> PyResult<RootDatum> {
    RootDatum::new(DynkinType::parse(type_letter).map_err(err)?, rank).map_err(err)
}

/// Root datum of a simple adjoint group.
#[pyclass(name = "RootDatum", frozen)]
struct PyRootDatum {
    inner: RootDatum,
}

#[pymethods]
impl PyRootDatum {
    #[new]
    fn new(type_letter: &str, rank: usize) -> PyResult<Self> {
        Ok(PyRootDatum {
            inner: root_datum(type_letter, rank)?,
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    fn cartan(&self) -> Vec<Vec<i64>> {
        self.inner.cartan().to_vec()
    }

    fn positive_roots(&self) -> Vec<Vec<i64>> {
        self.inner.positive_roots().to_vec()
    }

    fn omega_order(&self) -> usize {
        self.inner.omega().order()
    }

    fn dominant(&self, coweight: Vec<i64>) -> PyResult<Vec<i64>> {
        self.inner.check_dim(coweight.len()).map_err(err)?;
        Ok(self.inner.dominant(&coweight))
    }

    fn __repr__(&self) -> String {
        format!("RootDatum({})", self.inner.name())
    }
}

/// Extended affine Weyl group; alcoves are identified with its elements.
#[pyclass(name = "AffineWeyl", frozen)]
struct PyAffineWeyl {
    g: Arc<AffineWeyl>,
}

/// An element of an extended affine Weyl group.
#[pyclass(name = "Element", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyElement {
    g: Arc<AffineWeyl>,
    x: AffineElement,
}

impl PyElement {
    fn wrap(g: &Arc<AffineWeyl>, x: AffineElement) -> PyElement {
        PyElement { g: g.clone(), x }
    }

    fn same_group(&self, other: &PyElement) -> PyResult<()> {
        if self.g.root_datum().name() == other.g.root_datum().name() {
            Ok(())
        } else {
            Err(PyValueError::new_err("elements belong to different groups"))
        }
    }
}

#[pymethods]
impl PyAffineWeyl {
    #[new]
    fn new(type_letter: &str, rank: usize) -> PyResult<Self> {
        Ok(PyAffineWeyl {
            g: Arc::new(AffineWeyl::new(root_datum(type_letter, rank)?)),
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.g.rank()
    }

    #[getter]
    fn num_nodes(&self) -> usize {
        self.g.num_nodes()
    }

    fn omega_order(&self) -> usize {
        self.g.omega_order()
    }

    fn identity(&self) -> PyElement {
        PyElement::wrap(&self.g, self.g.identity())
    }

    fn simple_reflection(&self, i: usize) -> PyResult<PyElement> {
        Ok(PyElement::wrap(&self.g, self.g.simple_reflection(i).map_err(err)?))
    }

    /// The element `s_{word[0]} ... s_{word[-1]} tau^omega`.
    #[pyo3(signature = (word, omega = 0))]
    #[allow(clippy::wrong_self_convention)]
    fn from_word(&self, word: Vec<usize>, omega: usize) -> PyResult<PyElement> {
        Ok(PyElement::wrap(&self.g, self.g.from_word(&word, omega).map_err(err)?))
    }

    fn translation(&self, coweight: Vec<i64>) -> PyResult<PyElement> {
        Ok(PyElement::wrap(&self.g, self.g.translation_checked(coweight).map_err(err)?))
    }

    fn admissible_set(&self, mu: Vec<i64>) -> PyResult<Vec<PyElement>> {
        let xs = self.g.admissible_set(&mu).map_err(err)?;
        Ok(xs.into_iter().map(|x| PyElement::wrap(&self.g, x)).collect())
    }

    fn weyl_distance(&self, x: &PyElement, y: &PyElement) -> PyElement {
        PyElement::wrap(&self.g, self.g.weyl_distance(&x.x, &y.x))
    }

    /// The alcove of the residue `base * W_P` closest to `b`.
    fn gate(&self, b: &PyElement, base: &PyElement, parabolic: Vec<usize>) -> PyResult<PyElement> {
        let r = self.g.residue(&base.x, nodes(&parabolic)).map_err(err)?;
        Ok(PyElement::wrap(&self.g, self.g.gate(&b.x, &r)))
    }

    fn minimal_gallery(&self, x: &PyElement, y: &PyElement) -> Vec<PyElement> {
        let gal = self.g.minimal_gallery(&x.x, &y.x);
        gal.0.into_iter().map(|a| PyElement::wrap(&self.g, a)).collect()
    }

    /// Distance from an alcove to the walls of the special vertices in `k`.
    fn wall_distance(&self, x: &PyElement, k: Vec<usize>) -> PyResult<(i64, i64)> {
        Ok(frac(self.g.wall_distance(&x.x, nodes(&k)).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("AffineWeyl({})", self.g.root_datum().name())
    }
}

#[pymethods]
impl PyElement {
    /// Reduced word from greedy smallest left descents.
    #[getter]
    fn word(&self) -> Vec<usize> {
        self.g.reduced_word(&self.x).0
    }

    #[getter]
    fn omega(&self) -> usize {
        self.g.omega_part(&self.x)
    }

    #[getter]
    fn length(&self) -> usize {
        self.g.length(&self.x)
    }

    #[getter]
    fn translation_part(&self) -> Vec<i64> {
        self.x.lam().to_vec()
    }

    fn inverse(&self) -> PyElement {
        PyElement::wrap(&self.g, self.g.inverse(&self.x))
    }

    fn left_descents(&self) -> Vec<usize> {
        self.g.left_descents(&self.x).to_vec()
    }

    fn right_descents(&self) -> Vec<usize> {
        self.g.right_descents(&self.x).to_vec()
    }

    fn support(&self) -> Vec<usize> {
        self.g.support(&self.x).to_vec()
    }

    fn bruhat_leq(&self, other: &PyElement) -> PyResult<bool> {
        self.same_group(other)?;
        Ok(self.g.bruhat_leq(&self.x, &other.x))
    }

    fn barycenter(&self) -> Vec<(i64, i64)> {
        self.g.barycenter(&self.x).into_iter().map(frac).collect()
    }

    fn __mul__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.same_group(other)?;
        Ok(PyElement::wrap(&self.g, self.g.mul(&self.x, &other.x)))
    }

    fn __eq__(&self, other: &PyElement) -> bool {
        self.x == other.x && self.g.root_datum().name() == other.g.root_datum().name()
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.x.hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        let (word, k) = self.g.reduced_word(&self.x);
        format!("Element(word={word:?}, omega=tau^{k})")
    }
}

/// Index data `(G, sigma, mu)` of Coxeter type with a chosen special node.
#[pyclass(name = "CoxeterDatum", frozen)]
struct PyCoxeterDatum {
    cd: CoxeterDatum,
    g: Arc<AffineWeyl>,
}

impl PyCoxeterDatum {
    fn wrap(cd: CoxeterDatum) -> PyCoxeterDatum {
        let g = Arc::new(cd.weyl().clone());
        PyCoxeterDatum { cd, g }
    }

    fn eo(&self, i: usize) -> PyResult<EOElement> {
        let all = self.cd.enumerate_eo().map_err(err)?;
        let n = all.len();
        all.into_iter()
            .nth(i)
            .ok_or_else(|| PyValueError::new_err(format!("EO index {i} out of range 0..{n}")))
    }

    fn elem(&self, x: AffineElement) -> PyElement {
        PyElement::wrap(&self.g, x)
    }
}

#[pymethods]
impl PyCoxeterDatum {
    #[new]
    fn new(
        type_letter: &str,
        rank: usize,
        sigma: Vec<usize>,
        mu: Vec<i64>,
        removed_node: usize,
    ) -> PyResult<Self> {
        let rd = root_datum(type_letter, rank)?;
        Ok(Self::wrap(CoxeterDatum::new(rd, sigma, mu, removed_node).map_err(err)?))
    }

    /// Type `A_{n-1}` with the non-split Frobenius.
    #[staticmethod]
    fn twisted_a(n: usize) -> PyResult<Self> {
        Ok(Self::wrap(CoxeterDatum::twisted_a(n).map_err(err)?))
    }

    /// Type `B_m` with the Frobenius swapping the nodes 0 and 1.
    #[staticmethod]
    fn split_b(m: usize) -> PyResult<Self> {
        Ok(Self::wrap(CoxeterDatum::split_b(m).map_err(err)?))
    }

    fn weyl(&self) -> PyAffineWeyl {
        PyAffineWeyl { g: self.g.clone() }
    }

    #[getter]
    fn sigma(&self) -> Vec<usize> {
        self.cd.sigma().perm().to_vec()
    }

    #[getter]
    fn mu(&self) -> Vec<i64> {
        self.cd.mu().to_vec()
    }

    #[getter]
    fn removed_node(&self) -> usize {
        self.cd.removed_node()
    }

    fn basic_tau(&self) -> PyElement {
        self.elem(self.cd.basic_tau())
    }

    /// EO elements as dicts with keys word, omega, element, sigma_support, sigma_w.
    fn enumerate_eo<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let eo = self.cd.enumerate_eo().map_err(err)?;
        eo.into_iter()
            .map(|e| {
                let d = PyDict::new(py);
                d.set_item("word", e.word.clone())?;
                d.set_item("omega", e.omega)?;
                d.set_item("element", self.elem(e.w.clone()))?;
                d.set_item("sigma_support", e.sigma_supp.to_vec())?;
                d.set_item("sigma_w", e.sigma_w.to_vec())?;
                Ok(d)
            })
            .collect()
    }

    fn sigma_support(&self, w: &PyElement) -> Vec<usize> {
        self.cd.sigma_support(&w.x).to_vec()
    }

    fn is_sigma_coxeter(&self, w: &PyElement) -> bool {
        self.cd.is_sigma_coxeter(&w.x)
    }

    fn is_rational(&self, x: &PyElement) -> bool {
        self.cd.is_rational(&x.x)
    }

    fn rational_elements(&self, radius: usize) -> Vec<PyElement> {
        let xs = self.cd.rational_elements(radius);
        xs.into_iter().map(|x| self.elem(x)).collect()
    }

    fn is_sigma_straight(&self, w: &PyElement) -> bool {
        self.cd.is_sigma_straight(&w.x)
    }

    /// Relative position of `j` to the stratum of the EO element with index `eo`.
    fn stratum_value(&self, eo: usize, j: &PyElement) -> PyResult<PyElement> {
        let e = self.eo(eo)?;
        let id = self.cd.weyl().identity();
        Ok(self.elem(self.cd.stratum_value(&e, &id, &j.x)))
    }

    /// A rational alcove separating `Y(eo1)` from `jprime Y(eo2)`.
    #[pyo3(signature = (eo1, eo2, jprime = None, search_radius = 12))]
    fn find_separator<'py>(
        &self,
        py: Python<'py>,
        eo1: usize,
        eo2: usize,
        jprime: Option<&PyElement>,
        search_radius: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let (e1, e2) = (self.eo(eo1)?, self.eo(eo2)?);
        let jp = jprime.map_or_else(|| self.cd.weyl().identity(), |j| j.x.clone());
        let s = self.cd.find_separator(&e1, &e2, &jp, search_radius).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("j", self.elem(s.j))?;
        d.set_item("value1", self.elem(s.val1))?;
        d.set_item("value2", self.elem(s.val2))?;
        d.set_item("scanned", s.scanned)?;
        d.set_item("translated_case", s.certificate.translated_case)?;
        d.set_item("chain", s.certificate.chain)?;
        d.set_item("certificate_ok", s.certificate.chain_ok && s.certificate.support_ok)?;
        Ok(d)
    }

    /// Checks that distinct Bruhat-Tits strata have distinct relative positions.
    #[pyo3(signature = (radius = 4, search_radius = 12))]
    fn bt_check<'py>(
        &self,
        py: Python<'py>,
        radius: usize,
        search_radius: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let r = self.cd.bt_vs_j_check(radius, search_radius).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("labels", r.labels.len())?;
        d.set_item("pairs", r.pairs)?;
        d.set_item("separated", r.separated)?;
        d.set_item("certificates_ok", r.certificates_ok)?;
        d.set_item("failures", r.failures.len())?;
        d.set_item("success", r.success())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "CoxeterDatum({}, sigma={:?}, mu={:?}, removed_node={})",
            self.g.root_datum().name(),
            self.cd.sigma().perm(),
            self.cd.mu(),
            self.cd.removed_node()
        )
    }
}

/// Number of `F_q`-rational points of `X(w)` in the flag variety of `GL_n`.
#[pyfunction]
fn dl_point_count(w: Vec<usize>, p: u32, m: u32) -> PyResult<usize> {
    Ok(flags::dl_points(&w, w.len(), p, m).map_err(err)?.len())
}

#[pyfunction]
fn coxeter_element(n: usize) -> Vec<usize> {
    flags::coxeter_element(n)
}

/// Relative position of two flags given by spanning vectors over `F_{p^m}`.
#[pyfunction]
fn relative_position(p: u32, m: u32, f: Vec<Vec<u32>>, f2: Vec<Vec<u32>>) -> PyResult<Vec<usize>> {
    let field = FiniteField::new(p, m).map_err(err)?;
    let a = Flag::from_vectors(&field, &f).map_err(err)?;
    let b = Flag::from_vectors(&field, &f2).map_err(err)?;
    flags::relative_position(&field, &a, &b).map_err(err)
}

#[pyfunction]
fn moore_criterion(p: u32, m: u32, a: Vec<u32>) -> PyResult<bool> {
    let field = FiniteField::new(p, m).map_err(err)?;
    flags::moore_criterion(&field, &a).map_err(err)
}

#[pyfunction]
fn moore_cross_check<'py>(py: Python<'py>, n: usize, p: u32, m: u32) -> PyResult<Bound<'py, PyDict>> {
    let r = flags::moore_cross_check(n, p, m).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("vectors", r.vectors)?;
    d.set_item("independent", r.independent)?;
    d.set_item("mismatches", r.mismatches)?;
    d.set_item("passed", r.passed())?;
    Ok(d)
}

#[pyfunction]
fn lusztig_containment_check<'py>(py: Python<'py>, n: usize, p: u32, m: u32) -> PyResult<Bound<'py, PyDict>> {
    let r = flags::lusztig_containment_check(n, p, m).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("points", r.points)?;
    d.set_item("violations", r.violations)?;
    d.set_item("passed", r.passed())?;
    Ok(d)
}

#[pymodule]
fn adlv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRootDatum>()?;
    m.add_class::<PyAffineWeyl>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PyCoxeterDatum>()?;
    m.add_function(wrap_pyfunction!(dl_point_count, m)?)?;
    m.add_function(wrap_pyfunction!(coxeter_element, m)?)?;
    m.add_function(wrap_pyfunction!(relative_position, m)?)?;
    m.add_function(wrap_pyfunction!(moore_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(moore_cross_check, m)?)?;
    m.add_function(wrap_pyfunction!(lusztig_containment_check, m)?)?;
    Ok(())
}
