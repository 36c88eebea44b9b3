//! Python bindings for the upho poset toolkit: the poset type, the
//! constructions, and the verification and analysis entry points.
//!
//! Series values cross the boundary as arbitrary-precision Python ints.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::IntoPyObjectExt;

use upho::constructions::{self, BConstructionSpec, GridSpec};
use upho::monoid::{self, MonoidPresentation};
use upho::planar::{self, MergeSchedule};
use upho::poset::{self, MeetResult, RankedPoset as CorePoset};
use upho::series;
use upho::symfunc::{self, Partition};

fn err(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rational(expr: &str) -> PyResult<series::RationalFunction> {
    series::RationalFunction::parse(expr).map_err(err)
}

fn series_from_ints(coeffs: Vec<BigInt>) -> PyResult<series::IntSeries> {
    if coeffs.is_empty() {
        return Err(err("a series needs at least one coefficient"));
    }
    Ok(series::IntSeries::new(coeffs))
}

fn presentation(alphabet: &str, relations: Vec<(String, String)>) -> PyResult<MonoidPresentation> {
    let refs: Vec<(&str, &str)> = relations
        .iter()
        .map(|(l, r)| (l.as_str(), r.as_str()))
        .collect();
    MonoidPresentation::new(alphabet, &refs).map_err(err)
}

/// A finite truncation of a graded poset.
#[pyclass(name = "RankedPoset", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRankedPoset {
    inner: CorePoset,
}

#[pymethods]
impl PyRankedPoset {
    /// Builds a poset from explicit ranks and cover edges.
    #[new]
    #[pyo3(signature = (ranks, covers, embedding = None))]
    fn new(
        ranks: Vec<Vec<usize>>,
        covers: Vec<(usize, usize)>,
        embedding: Option<Vec<Vec<usize>>>,
    ) -> PyResult<Self> {
        Ok(PyRankedPoset {
            inner: CorePoset::new(ranks, covers, embedding).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyRankedPoset {
            inner: CorePoset::from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_dot(&self) -> String {
        planar::to_dot(&self.inner)
    }

    fn depth(&self) -> usize {
        self.inner.depth()
    }

    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    fn rank_sizes(&self) -> Vec<usize> {
        self.inner.rank_sizes()
    }

    fn ranks(&self) -> Vec<Vec<usize>> {
        self.inner.ranks().to_vec()
    }

    fn covers(&self) -> Vec<(usize, usize)> {
        self.inner.covers().to_vec()
    }

    fn embedding(&self) -> Option<Vec<Vec<usize>>> {
        self.inner.embedding().map(|e| e.to_vec())
    }

    fn rank_of(&self, v: usize) -> PyResult<usize> {
        self.inner.rank_of(v).map_err(err)
    }

    /// Rank sizes as exact integers (the rank-generating series).
    fn rgf(&self) -> Vec<BigInt> {
        series::rgf(&self.inner).coeffs().to_vec()
    }

    fn truncate(&self, depth: usize) -> PyResult<Self> {
        Ok(PyRankedPoset {
            inner: self.inner.truncate(depth).map_err(err)?,
        })
    }

    fn order_filter(&self, s: usize) -> PyResult<Self> {
        Ok(PyRankedPoset {
            inner: self.inner.order_filter(s).map_err(err)?,
        })
    }

    fn product(&self, other: &PyRankedPoset, depth: usize) -> PyResult<Self> {
        Ok(PyRankedPoset {
            inner: self.inner.product(&other.inner, depth).map_err(err)?,
        })
    }

    /// The unique greatest lower bound as an int, None when no common lower
    /// bound exists, or the list of maximal common lower bounds when the
    /// meet is not unique.
    fn meet(&self, py: Python<'_>, u: usize, v: usize) -> PyResult<Py<PyAny>> {
        match self.inner.meet(u, v).map_err(err)? {
            MeetResult::Meet(m) => m.into_py_any(py),
            MeetResult::NoMeet => Ok(py.None()),
            MeetResult::NonUnique(list) => list.into_py_any(py),
        }
    }

    fn unique_min_check(&self) -> bool {
        self.inner.unique_min_check()
    }

    #[pyo3(signature = (min_depth = 3, max_root_rank = 2))]
    fn verify_upho(&self, min_depth: usize, max_root_rank: usize) -> PyResult<PyUphoResult> {
        let report = self.inner.verify_upho(min_depth, max_root_rank).map_err(err)?;
        Ok(PyUphoResult {
            passed: report.pass(),
            checked_roots: report.checked_roots,
            failures: report.failures,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "RankedPoset(depth={}, rank_sizes={:?})",
            self.inner.depth(),
            self.inner.rank_sizes()
        )
    }

    fn __eq__(&self, other: &PyRankedPoset) -> bool {
        self.inner == other.inner
    }
}

/// Result of a truncated upho verification.
#[pyclass(name = "UphoResult", frozen)]
struct PyUphoResult {
    #[pyo3(get)]
    passed: bool,
    #[pyo3(get)]
    checked_roots: Vec<(usize, usize)>,
    #[pyo3(get)]
    failures: Vec<usize>,
}

#[pymethods]
impl PyUphoResult {
    fn __repr__(&self) -> String {
        format!(
            "UphoResult(passed={}, checked={}, failures={:?})",
            self.passed,
            self.checked_roots.len(),
            self.failures
        )
    }
}

/// Result of an isomorphism test.
#[pyclass(name = "IsoResult", frozen)]
struct PyIsoResult {
    #[pyo3(get)]
    isomorphic: bool,
    /// vertex map from the first poset into the second, when isomorphic
    #[pyo3(get)]
    witness: Option<Vec<usize>>,
    /// refinement digest per poset; equal digests for isomorphic posets
    #[pyo3(get)]
    certificates: (String, String),
}

#[pymethods]
impl PyIsoResult {
    fn __repr__(&self) -> String {
        format!("IsoResult(isomorphic={})", self.isomorphic)
    }
}

#[pyfunction]
fn chain(depth: usize) -> PyResult<PyRankedPoset> {
    if depth == 0 {
        return Err(err("depth must be at least 1"));
    }
    Ok(PyRankedPoset {
        inner: constructions::chain(depth),
    })
}

#[pyfunction]
fn k_ary_tree(k: u64, depth: usize) -> PyResult<PyRankedPoset> {
    if k == 0 || depth == 0 {
        return Err(err("k and depth must be at least 1"));
    }
    Ok(PyRankedPoset {
        inner: constructions::k_ary_tree(k, depth),
    })
}

#[pyfunction]
fn grid_construction(a: Vec<u64>, depth: usize) -> PyResult<PyRankedPoset> {
    let spec = GridSpec::new(a, depth).map_err(err)?;
    Ok(PyRankedPoset {
        inner: constructions::grid_construction(&spec),
    })
}

#[pyfunction]
fn b_construction(a: Vec<u64>, b: u64, depth: usize) -> PyResult<PyRankedPoset> {
    let spec = BConstructionSpec::new(a, b, depth).map_err(err)?;
    Ok(PyRankedPoset {
        inner: constructions::b_construction(&spec),
    })
}

#[pyfunction]
fn theorem12_construction(a: Vec<u64>, b: Vec<u64>, depth: usize) -> PyResult<PyRankedPoset> {
    Ok(PyRankedPoset {
        inner: constructions::theorem12_construction(&a, &b, depth).map_err(err)?,
    })
}

/// The planar construction for up-degree b with root-bifurcation counts
/// per rank, e.g. planar_construction(3, {2: 1, 3: 1}, 6).
#[pyfunction]
fn planar_construction(
    b: usize,
    counts: BTreeMap<usize, usize>,
    depth: usize,
) -> PyResult<PyRankedPoset> {
    let schedule = MergeSchedule::new(b, counts).map_err(err)?;
    Ok(PyRankedPoset {
        inner: planar::planar_construction(&schedule, depth).map_err(err)?,
    })
}

/// Poset of congruence classes of a homogeneous presentation, graded by
/// word length 0..=max_len.
#[pyfunction]
fn monoid_poset(
    alphabet: &str,
    relations: Vec<(String, String)>,
    max_len: usize,
) -> PyResult<PyRankedPoset> {
    let pres = presentation(alphabet, relations)?;
    Ok(PyRankedPoset {
        inner: monoid::monoid_poset(&pres, max_len).map_err(err)?,
    })
}

#[pyfunction]
fn stern_poset(max_len: usize) -> PyResult<PyRankedPoset> {
    Ok(PyRankedPoset {
        inner: monoid::monoid_poset(&MonoidPresentation::stern(), max_len).map_err(err)?,
    })
}

/// Poset of the {L, R} monoid with the t_n relations for the given indices.
#[pyfunction]
fn s_family_poset(indices: Vec<usize>, max_len: usize) -> PyResult<PyRankedPoset> {
    let indices: BTreeSet<usize> = indices.into_iter().collect();
    let pres = monoid::s_family(&indices).map_err(err)?;
    Ok(PyRankedPoset {
        inner: monoid::monoid_poset(&pres, max_len).map_err(err)?,
    })
}

#[pyfunction]
fn are_isomorphic(p: &PyRankedPoset, q: &PyRankedPoset) -> PyIsoResult {
    let report = poset::are_isomorphic(&p.inner, &q.inner);
    PyIsoResult {
        isomorphic: report.isomorphic,
        witness: report.witness,
        certificates: report.certificate,
    }
}

#[pyfunction]
fn canonical_digest(p: &PyRankedPoset) -> String {
    poset::canonical_digest(&p.inner)
}

/// Expands a rational function given as text, e.g.
/// expand_rational("(1+x)(1+2x)/(1-x)", 7).
#[pyfunction]
fn expand_rational(expr: &str, order: usize) -> PyResult<Vec<BigInt>> {
    let f = parse_rational(expr)?;
    Ok(series::expand_rational(&f, order).coeffs().to_vec())
}

#[pyfunction]
fn match_rational(series_coeffs: Vec<BigInt>, expr: &str) -> PyResult<bool> {
    let s = series_from_ints(series_coeffs)?;
    Ok(series::match_rational(&s, &parse_rational(expr)?))
}

/// Exact total-positivity test: true iff all numerator roots are negative
/// reals and all denominator roots are positive reals.
#[pyfunction]
fn davydov_check(expr: &str) -> PyResult<bool> {
    Ok(symfunc::davydov_check(&parse_rational(expr)?))
}

/// Kostka number: semistandard Young tableaux of the given shape and
/// content.
#[pyfunction]
fn kostka(shape: Vec<usize>, content: Vec<usize>) -> PyResult<BigInt> {
    let lambda = Partition::new(shape).map_err(err)?;
    let mu = Partition::new(content).map_err(err)?;
    symfunc::kostka(&lambda, &mu).map_err(err)
}

/// Schur expansion of the degree-n Ehrenborg function of a series, as
/// (partition, coefficient) pairs in reverse-lexicographic order.
#[pyfunction]
fn schur_expansion(
    series_coeffs: Vec<BigInt>,
    degree: usize,
) -> PyResult<Vec<(Vec<usize>, BigInt)>> {
    let s = series_from_ints(series_coeffs)?;
    let monomial = symfunc::ehrenborg_monomial(&s, degree).map_err(err)?;
    let schur = symfunc::schur_expand(&monomial);
    Ok(schur
        .iter()
        .map(|(p, c)| (p.parts().to_vec(), c.clone()))
        .collect())
}

/// Returns (positive, witness): the witness is the first
/// (degree, partition, coefficient) with a negative Schur coefficient.
#[pyfunction]
fn is_schur_positive(
    series_coeffs: Vec<BigInt>,
    max_degree: usize,
) -> PyResult<(bool, Option<(usize, Vec<usize>, BigInt)>)> {
    let s = series_from_ints(series_coeffs)?;
    let report = symfunc::is_schur_positive(&s, max_degree).map_err(err)?;
    Ok((
        report.positive,
        report
            .witness
            .map(|w| (w.degree, w.partition.parts().to_vec(), w.coefficient)),
    ))
}

/// Crossing edge pairs of the stored embedding; empty means planar.
#[pyfunction]
fn check_embedding(p: &PyRankedPoset) -> PyResult<Vec<((usize, usize), (usize, usize))>> {
    planar::check_embedding(&p.inner).map_err(err)
}

/// Exhaustive level-planar embedding search; None when none exists.
#[pyfunction]
#[pyo3(signature = (p, width_cap = 10))]
fn find_embedding(p: &PyRankedPoset, width_cap: usize) -> PyResult<Option<Vec<Vec<usize>>>> {
    planar::find_embedding(&p.inner, width_cap).map_err(err)
}

/// (root_bifurcated_per_rank, bifurcated_per_rank) of every down-degree-2
/// vertex, classified by the meet of its covered pair.
#[pyfunction]
fn classify_merges(p: &PyRankedPoset) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let c = planar::classify_merges(&p.inner).map_err(err)?;
    Ok((c.root_bifurcated_per_rank, c.bifurcated_per_rank))
}

#[pyfunction]
fn planar_rgf_check(p: &PyRankedPoset) -> PyResult<bool> {
    planar::planar_rgf_check(&p.inner).map_err(err)
}

/// Class counts per word length for a homogeneous presentation.
#[pyfunction]
fn congruence_class_counts(
    alphabet: &str,
    relations: Vec<(String, String)>,
    max_len: usize,
) -> PyResult<Vec<usize>> {
    let pres = presentation(alphabet, relations)?;
    Ok(monoid::congruence_classes(&pres, max_len)
        .map_err(err)?
        .class_counts())
}

/// Returns (cancellative, counterexample); the counterexample is
/// (letter, x, y) with class(letter + x) == class(letter + y) but x != y.
#[pyfunction]
fn left_cancellation_check(
    alphabet: &str,
    relations: Vec<(String, String)>,
    max_len: usize,
) -> PyResult<(bool, Option<(String, String, String)>)> {
    let pres = presentation(alphabet, relations)?;
    let report = monoid::left_cancellation_check(&pres, max_len).map_err(err)?;
    Ok((
        report.cancellative,
        report
            .counterexample
            .map(|(a, x, y)| (a.to_string(), x, y)),
    ))
}

/// Returns (all_distinct, class_counts) for subsets of the t_n family.
#[pyfunction]
fn distinct_rgf_check(
    subsets: Vec<Vec<usize>>,
    max_len: usize,
) -> PyResult<(bool, Vec<Vec<usize>>)> {
    let subsets: Vec<BTreeSet<usize>> = subsets
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();
    let report = monoid::distinct_rgf_check(&subsets, max_len).map_err(err)?;
    Ok((report.all_distinct, report.class_counts))
}

#[pymodule]
fn upho_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRankedPoset>()?;
    m.add_class::<PyUphoResult>()?;
    m.add_class::<PyIsoResult>()?;
    m.add_function(wrap_pyfunction!(chain, m)?)?;
    m.add_function(wrap_pyfunction!(k_ary_tree, m)?)?;
    m.add_function(wrap_pyfunction!(grid_construction, m)?)?;
    m.add_function(wrap_pyfunction!(b_construction, m)?)?;
    m.add_function(wrap_pyfunction!(theorem12_construction, m)?)?;
    m.add_function(wrap_pyfunction!(planar_construction, m)?)?;
    m.add_function(wrap_pyfunction!(monoid_poset, m)?)?;
    m.add_function(wrap_pyfunction!(stern_poset, m)?)?;
    m.add_function(wrap_pyfunction!(s_family_poset, m)?)?;
    m.add_function(wrap_pyfunction!(are_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_digest, m)?)?;
    m.add_function(wrap_pyfunction!(expand_rational, m)?)?;
    m.add_function(wrap_pyfunction!(match_rational, m)?)?;
    m.add_function(wrap_pyfunction!(davydov_check, m)?)?;
    m.add_function(wrap_pyfunction!(kostka, m)?)?;
    m.add_function(wrap_pyfunction!(schur_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(is_schur_positive, m)?)?;
    m.add_function(wrap_pyfunction!(check_embedding, m)?)?;
    m.add_function(wrap_pyfunction!(find_embedding, m)?)?;
    m.add_function(wrap_pyfunction!(classify_merges, m)?)?;
    m.add_function(wrap_pyfunction!(planar_rgf_check, m)?)?;
    m.add_function(wrap_pyfunction!(congruence_class_counts, m)?)?;
    m.add_function(wrap_pyfunction!(left_cancellation_check, m)?)?;
    m.add_function(wrap_pyfunction!(distinct_rgf_check, m)?)?;
    Ok(())
}
