//! Python bindings: `import fbc`.

use fbc_core::dynamics::{self, DEFAULT_DEPTH, DEFAULT_LENGTH_CAP, DEFAULT_MAX_LEN, DEFAULT_MAX_PERIOD};
use fbc_core::finite_quotients::{self, FingerprintCache};
use fbc_core::text::format_automorphism;
use fbc_core::{Comparison, FiniteGroup};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::rngs::StdRng;
use rand::SeedableRng;

create_exception!(fbc, FbcError, PyValueError, "Invalid input.");
create_exception!(fbc, NotAutomorphismError, FbcError, "The map is not an automorphism.");
create_exception!(fbc, ResourceError, FbcError, "A size cap was hit.");

fn to_py(e: fbc_core::Error) -> PyErr {
    use fbc_core::Error as E;
    match e {
        E::NotAutomorphism(_) => NotAutomorphismError::new_err(e.to_string()),
        E::CapacityExceeded { .. } | E::OrderCapExceeded { .. } => ResourceError::new_err(e.to_string()),
        _ => FbcError::new_err(e.to_string()),
    }
}

fn not_auto(e: fbc_core::NotAutomorphism) -> PyErr {
    to_py(e.into())
}

#[pyclass(module = "fbc", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Word {
    inner: fbc_core::Word,
}

#[pymethods]
impl Word {
    /// `Word(rank, "ab^2C")`
    #[new]
    fn new(rank: usize, text: &str) -> PyResult<Self> {
        fbc_core::Word::parse(rank, text).map(|inner| Word { inner }).map_err(to_py)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn inverse(&self) -> Word {
        Word { inner: self.inner.inverse() }
    }

    fn cyclic_length(&self) -> usize {
        self.inner.cyclic_length()
    }

    /// Canonical representative of the conjugacy class.
    fn canonical_cyclic(&self) -> String {
        self.inner.canonical_cyclic().to_word().to_string()
    }

    /// Signed generator indices, `-k` for the inverse of generator `k`.
    fn to_list(&self) -> Vec<i64> {
        self.inner.to_signed()
    }

    fn __mul__(&self, other: PyRef<'_, Word>) -> PyResult<Word> {
        self.inner.product(&other.inner).map(|inner| Word { inner }).map_err(to_py)
    }

    fn __pow__(&self, k: i64, _modulo: Option<i64>) -> Word {
        Word { inner: self.inner.pow(k) }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word({}, {:?})", self.inner.rank(), self.inner.to_string())
    }
}

#[pyclass(module = "fbc", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct FreeMap {
    inner: fbc_core::FreeMap,
}

#[pymethods]
impl FreeMap {
    /// `FreeMap("a->b; b->c; c->cA")`
    #[new]
    #[pyo3(signature = (text, rank=None))]
    fn new(text: &str, rank: Option<usize>) -> PyResult<Self> {
        fbc_core::text::parse_automorphism(text, rank)
            .map(|inner| FreeMap { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn identity(rank: usize) -> FreeMap {
        FreeMap { inner: fbc_core::FreeMap::identity(rank) }
    }

    /// Product of `moves` random elementary Nielsen automorphisms.
    #[staticmethod]
    fn random(rank: usize, moves: usize, seed: u64) -> FreeMap {
        let mut rng = StdRng::seed_from_u64(seed);
        FreeMap {
            inner: fbc_core::FreeMap::random_automorphism(rank, moves, &mut rng),
        }
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn images(&self) -> Vec<String> {
        self.inner.images().iter().map(ToString::to_string).collect()
    }

    fn apply(&self, w: PyRef<'_, Word>) -> PyResult<Word> {
        self.inner.apply(&w.inner).map(|inner| Word { inner }).map_err(to_py)
    }

    /// `self` after `other`.
    fn compose(&self, other: PyRef<'_, FreeMap>) -> PyResult<FreeMap> {
        self.inner.compose(&other.inner).map(|inner| FreeMap { inner }).map_err(to_py)
    }

    fn power(&self, k: usize) -> PyResult<FreeMap> {
        self.inner.power(k).map(|inner| FreeMap { inner }).map_err(to_py)
    }

    /// `sigma ∘ self ∘ sigma^-1`.
    fn conjugate_by(&self, sigma: PyRef<'_, FreeMap>) -> PyResult<FreeMap> {
        self.inner.conjugate_by(&sigma.inner).map(|inner| FreeMap { inner }).map_err(to_py)
    }

    fn invert(&self) -> PyResult<FreeMap> {
        self.inner.invert().map(|inner| FreeMap { inner }).map_err(not_auto)
    }

    fn is_automorphism(&self) -> bool {
        self.inner.is_automorphism()
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn abelianization_matrix(&self) -> Vec<Vec<i64>> {
        self.inner.abelianization_matrix().to_i64_rows().expect("small entries")
    }

    fn transition_matrix(&self) -> Vec<Vec<i64>> {
        self.inner.transition_matrix().to_i64_rows().expect("small entries")
    }

    fn mapping_torus(&self) -> PyResult<Presentation> {
        fbc_core::mapping_torus_presentation(&self.inner, None)
            .map(|inner| Presentation { inner })
            .map_err(to_py)
    }

    fn __str__(&self) -> String {
        format_automorphism(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("FreeMap({:?})", format_automorphism(&self.inner))
    }
}

#[pyclass(module = "fbc", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct Presentation {
    inner: fbc_core::Presentation,
}

#[pymethods]
impl Presentation {
    /// `Presentation("gens: a t; rel: Tata")`
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        fbc_core::Presentation::parse(text).map(|inner| Presentation { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn free(rank: usize) -> PyResult<Presentation> {
        fbc_core::Presentation::free(rank).map(|inner| Presentation { inner }).map_err(to_py)
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.generator_names().to_vec()
    }

    #[getter]
    fn relators(&self) -> Vec<String> {
        let names = self.inner.generator_names();
        self.inner
            .relators()
            .iter()
            .map(|r| {
                r.letters()
                    .iter()
                    .map(|x| {
                        let n = &names[x.index()];
                        if x.is_inverse() {
                            n.to_uppercase()
                        } else {
                            n.clone()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `(betti, [torsion...])` of the abelianization.
    fn abelian_invariants(&self) -> (usize, Vec<BigInt>) {
        let inv = fbc_core::abelian_invariants(&self.inner);
        (inv.betti, inv.torsion)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Presentation({:?})", self.inner.to_string())
    }
}

/// A finite permutation group from generators in cycle notation.
#[pyclass(module = "fbc", frozen, skip_from_py_object)]
struct Group {
    inner: FiniteGroup,
}

#[pymethods]
impl Group {
    #[new]
    fn new(label: &str, generators: Vec<String>) -> PyResult<Self> {
        let gens: Vec<&str> = generators.iter().map(String::as_str).collect();
        FiniteGroup::from_cycle_strings(label, &gens).map(|inner| Group { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn cyclic(n: usize) -> Group {
        Group { inner: FiniteGroup::cyclic(n) }
    }

    #[getter]
    fn label(&self) -> &str {
        self.inner.label()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Group({:?}, order={})", self.inner.label(), self.inner.order())
    }
}

/// `(betti, [torsion...])` of the mapping torus, from `A - I`.
#[pyfunction]
fn mapping_torus_invariants(f: PyRef<'_, FreeMap>) -> (usize, Vec<BigInt>) {
    let inv = fbc_core::mapping_torus_invariants(&f.inner);
    (inv.betti, inv.torsion)
}

/// Forward and backward stretch estimates as a dict.
#[pyfunction]
#[pyo3(signature = (f, depth=DEFAULT_DEPTH, length_cap=DEFAULT_LENGTH_CAP))]
fn stretch<'py>(py: Python<'py>, f: PyRef<'_, FreeMap>, depth: usize, length_cap: usize) -> PyResult<Bound<'py, PyDict>> {
    let map = f.inner.clone();
    let pair = py
        .detach(|| dynamics::stretch_pair(&map, depth, length_cap))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("forward", pair.forward.lambda_hat)?;
    d.set_item("backward", pair.backward.lambda_hat)?;
    d.set_item("min", pair.min())?;
    d.set_item("max", pair.max())?;
    d.set_item("converged", pair.converged())?;
    d.set_item("truncated", pair.forward.truncated || pair.backward.truncated)?;
    d.set_item("forward_lengths", pair.forward.lengths().to_vec())?;
    Ok(d)
}

/// Perron-Frobenius eigenvalue of the transition matrix.
#[pyfunction]
fn transition_bound(f: PyRef<'_, FreeMap>) -> f64 {
    dynamics::transition_bound(&f.inner).value
}

/// Periodic conjugacy classes as `(class, period)` pairs.
#[pyfunction]
#[pyo3(signature = (f, max_len=DEFAULT_MAX_LEN, max_period=DEFAULT_MAX_PERIOD))]
fn periodic_classes(py: Python<'_>, f: PyRef<'_, FreeMap>, max_len: usize, max_period: usize) -> PyResult<Vec<(String, usize)>> {
    let map = f.inner.clone();
    let scan = py
        .detach(|| dynamics::scan_periodic_classes(&map, max_len, max_period))
        .map_err(not_auto)?;
    Ok(scan
        .orbits
        .into_iter()
        .map(|o| (o.rep.to_word().to_string(), o.period))
        .collect())
}

/// `(homs, epis)` from `p` into `q`.
#[pyfunction]
fn count_homs(py: Python<'_>, p: PyRef<'_, Presentation>, q: PyRef<'_, Group>) -> (u64, u64) {
    let (p, q) = (p.inner.clone(), q.inner.clone());
    let c = py.detach(|| finite_quotients::count(&p, &q, true));
    (c.homs, c.epis)
}

fn library(deep: bool, extra: Option<Vec<PyRef<'_, Group>>>) -> Vec<FiniteGroup> {
    let mut lib = fbc_core::standard_library(deep);
    lib.extend(extra.into_iter().flatten().map(|g| g.inner.clone()));
    lib
}

fn entries(fp: &fbc_core::Fingerprint) -> Vec<(String, usize, u64, u64)> {
    fp.entries
        .iter()
        .map(|e| (e.label.clone(), e.order, e.homs, e.epis))
        .collect()
}

/// `[(label, order, homs, epis), ...]` over the standard library.
#[pyfunction]
#[pyo3(signature = (p, deep=false, groups=None, cache_file=None))]
fn fingerprint(
    py: Python<'_>,
    p: PyRef<'_, Presentation>,
    deep: bool,
    groups: Option<Vec<PyRef<'_, Group>>>,
    cache_file: Option<std::path::PathBuf>,
) -> PyResult<Vec<(String, usize, u64, u64)>> {
    let lib = library(deep, groups);
    let p = p.inner.clone();
    let fp = py
        .detach(|| {
            let mut cache = cache_file.map(FingerprintCache::open).transpose()?;
            finite_quotients::fingerprint_cached(&p, &lib, cache.as_mut())
        })
        .map_err(to_py)?;
    Ok(entries(&fp))
}

/// `None` when the fingerprints agree, else `(label, (homs, epis), (homs, epis))`
/// for the first group that tells them apart.
#[pyfunction]
#[pyo3(signature = (p1, p2, deep=false))]
#[allow(clippy::type_complexity)]
fn compare(
    py: Python<'_>,
    p1: PyRef<'_, Presentation>,
    p2: PyRef<'_, Presentation>,
    deep: bool,
) -> PyResult<Option<(String, (u64, u64), (u64, u64))>> {
    let lib = library(deep, None);
    let (a, b) = (p1.inner.clone(), p2.inner.clone());
    let cmp = py
        .detach(|| {
            let fa = fbc_core::fingerprint(&a, &lib);
            let fb = fbc_core::fingerprint(&b, &lib);
            fbc_core::compare_fingerprints(&fa, &fb)
        })
        .map_err(to_py)?;
    Ok(match cmp {
        Comparison::Identical => None,
        Comparison::Differ { label, left, right, .. } => {
            Some((label, (left.homs, left.epis), (right.homs, right.epis)))
        }
    })
}

#[pymodule]
fn fbc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("__version__", fbc_core::VERSION)?;
    m.add("FbcError", py.get_type::<FbcError>())?;
    m.add("NotAutomorphismError", py.get_type::<NotAutomorphismError>())?;
    m.add("ResourceError", py.get_type::<ResourceError>())?;
    m.add_class::<Word>()?;
    m.add_class::<FreeMap>()?;
    m.add_class::<Presentation>()?;
    m.add_class::<Group>()?;
    m.add_function(wrap_pyfunction!(mapping_torus_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(stretch, m)?)?;
    m.add_function(wrap_pyfunction!(transition_bound, m)?)?;
    m.add_function(wrap_pyfunction!(periodic_classes, m)?)?;
    m.add_function(wrap_pyfunction!(count_homs, m)?)?;
    m.add_function(wrap_pyfunction!(fingerprint, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    Ok(())
}
