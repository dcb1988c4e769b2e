//! Python bindings for the `steiner` crate.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use steiner::design::{admissible_table as table, block_count_u64};
use steiner::exact_cover::{self, ExactCoverInstance, SearchLimits, SearchStats};
use steiner::extension::{extend_steiner, ExtensionProblem};
use steiner::{fixtures, io, isomorphism, kramer_mesner, Params, Verification};

create_exception!(steiner_py, SteinerError, PyException);

fn err(e: steiner::Error) -> PyErr {
    SteinerError::new_err(e.to_string())
}

fn params(t: usize, k: usize, v: usize) -> PyResult<Params> {
    Params::new(t, k, v).map_err(err)
}

fn stats_dict<'py>(py: Python<'py>, s: &SearchStats) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("nodes", s.nodes)?;
    d.set_item("solutions", s.solutions)?;
    d.set_item("completed", s.completed)?;
    Ok(d)
}

fn limits(max_solutions: Option<u64>, node_limit: Option<u64>) -> SearchLimits {
    SearchLimits {
        max_solutions,
        node_limit,
    }
}

/// A set of blocks on the points `0..v`.
#[pyclass(name = "Design", module = "steiner_py", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyDesign(steiner::Design);

#[pymethods]
impl PyDesign {
    #[new]
    fn new(v: usize, blocks: Vec<Vec<usize>>) -> PyResult<Self> {
        steiner::Design::new(v, blocks).map(PyDesign).map_err(err)
    }

    /// Parse the `.blocks` text format.
    #[staticmethod]
    #[pyo3(signature = (text, one_based = false))]
    fn parse(text: &str, one_based: bool) -> PyResult<Self> {
        io::parse_design(text, one_based).map(PyDesign).map_err(err)
    }

    #[getter]
    fn v(&self) -> usize {
        self.0.v()
    }

    #[getter]
    fn blocks(&self) -> Vec<Vec<usize>> {
        self.0.blocks().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.block_count()
    }

    fn __repr__(&self) -> String {
        format!("Design(v={}, b={})", self.0.v(), self.0.block_count())
    }

    /// `(True, None)` for an S(t,k,v), else `(False, (subset, coverage))`.
    fn verify(&self, t: usize, k: usize) -> PyResult<(bool, Option<(Vec<usize>, usize)>)> {
        match self.0.verify(params(t, k, self.0.v())?).map_err(err)? {
            Verification::Valid { .. } => Ok((true, None)),
            Verification::Invalid { subset, coverage } => Ok((false, Some((subset, coverage)))),
        }
    }

    fn derived(&self, point: usize) -> PyResult<Self> {
        self.0.derived(point).map(PyDesign).map_err(err)
    }

    fn relabel(&self, images: Vec<usize>) -> PyResult<Self> {
        let p = steiner::Permutation::from_images(images).map_err(err)?;
        self.0.relabel(&p).map(PyDesign).map_err(err)
    }

    fn point_degrees(&self) -> Vec<usize> {
        self.0.point_degrees()
    }

    fn to_blocks(&self) -> String {
        io::write_design(&self.0)
    }

    fn to_json(&self) -> String {
        io::design_to_json(&self.0)
    }

    fn to_gap(&self) -> String {
        io::write_gap(&self.0)
    }
}

/// A permutation group on `0..degree` given by generators.
#[pyclass(name = "PermGroup", module = "steiner_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGroup(steiner::PermGroup);

#[pymethods]
impl PyGroup {
    /// Generators are image lists.
    #[new]
    #[pyo3(signature = (degree, generators = Vec::new()))]
    fn new(degree: usize, generators: Vec<Vec<usize>>) -> PyResult<Self> {
        let gens = generators
            .into_iter()
            .map(steiner::Permutation::from_images)
            .collect::<steiner::Result<Vec<_>>>()
            .map_err(err)?;
        steiner::PermGroup::new(degree, gens).map(PyGroup).map_err(err)
    }

    /// Parse the `.grp` text format.
    #[staticmethod]
    #[pyo3(signature = (text, one_based = false))]
    fn parse(text: &str, one_based: bool) -> PyResult<Self> {
        io::parse_group(text, one_based).map(PyGroup).map_err(err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<usize>> {
        self.0.generators().iter().map(|g| g.images().to_vec()).collect()
    }

    #[pyo3(signature = (cap = 1_000_000))]
    fn order(&self, py: Python<'_>, cap: usize) -> PyResult<usize> {
        py.detach(|| self.0.order(cap)).map_err(err)
    }

    fn is_invariant(&self, design: &PyDesign) -> PyResult<bool> {
        self.0.is_invariant(&design.0).map_err(err)
    }

    fn orbit_design(&self, base_blocks: Vec<Vec<usize>>) -> PyResult<PyDesign> {
        steiner::design::design_from_orbits(&self.0, &base_blocks, self.0.degree())
            .map(PyDesign)
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("PermGroup(degree={}, generators={})", self.0.degree(), self.0.generators().len())
    }

    fn to_text(&self) -> String {
        io::write_group(&self.0)
    }
}

/// `G`-invariant S(t,k,v) by Kramer-Mesner search; returns `(designs, stats)`.
#[pyfunction]
#[pyo3(signature = (group, t, k, v, max_solutions = None, node_limit = None))]
fn km_search<'py>(
    py: Python<'py>,
    group: &PyGroup,
    t: usize,
    k: usize,
    v: usize,
    max_solutions: Option<u64>,
    node_limit: Option<u64>,
) -> PyResult<(Vec<PyDesign>, Bound<'py, PyDict>)> {
    let p = params(t, k, v)?;
    let out = py
        .detach(|| kramer_mesner::km_search(&group.0, p, limits(max_solutions, node_limit)))
        .map_err(err)?;
    let stats = stats_dict(py, &out.stats)?;
    Ok((out.designs.into_iter().map(PyDesign).collect(), stats))
}

/// Extensions of an S(t,k,v) to S(t+1,k+1,v+1) with the new point `v`;
/// returns `(designs, stats)`.
#[pyfunction]
#[pyo3(signature = (design, group, t, k, max_solutions = None, node_limit = None))]
fn extend<'py>(
    py: Python<'py>,
    design: &PyDesign,
    group: &PyGroup,
    t: usize,
    k: usize,
    max_solutions: Option<u64>,
    node_limit: Option<u64>,
) -> PyResult<(Vec<PyDesign>, Bound<'py, PyDict>)> {
    let problem = ExtensionProblem::new(design.0.clone(), group.0.clone(), params(t, k, design.0.v())?).map_err(err)?;
    let out = py
        .detach(|| extend_steiner(&problem, limits(max_solutions, node_limit)))
        .map_err(err)?;
    let stats = stats_dict(py, &out.stats)?;
    Ok((out.designs.into_iter().map(PyDesign).collect(), stats))
}

/// Exact covers of `item_count` items; returns `(solutions, stats)` with
/// each solution a list of option indices.
#[pyfunction]
#[pyo3(signature = (item_count, options, max_solutions = None, node_limit = None))]
fn exact_covers<'py>(
    py: Python<'py>,
    item_count: usize,
    options: Vec<Vec<usize>>,
    max_solutions: Option<u64>,
    node_limit: Option<u64>,
) -> PyResult<(Vec<Vec<usize>>, Bound<'py, PyDict>)> {
    let inst = ExactCoverInstance::new(item_count, options).map_err(err)?;
    let (sols, stats) = py
        .detach(|| exact_cover::solve(&inst, limits(max_solutions, node_limit)))
        .map_err(err)?;
    let stats = stats_dict(py, &stats)?;
    Ok((sols.into_iter().map(|s| s.option_indices).collect(), stats))
}

/// `(generators, order)` of the full automorphism group.
#[pyfunction]
#[pyo3(signature = (design, node_cap = None))]
fn automorphism_group(py: Python<'_>, design: &PyDesign, node_cap: Option<u64>) -> PyResult<(PyGroup, u128)> {
    let aut = py
        .detach(|| isomorphism::automorphism_group(&design.0, node_cap))
        .map_err(err)?;
    Ok((PyGroup(aut.group), aut.order))
}

/// Point images of an isomorphism from `a` onto `b`, or `None`.
#[pyfunction]
fn are_isomorphic(py: Python<'_>, a: &PyDesign, b: &PyDesign) -> Option<Vec<usize>> {
    py.detach(|| isomorphism::are_isomorphic(&a.0, &b.0))
        .mapping
        .map(|p| p.images().to_vec())
}

/// Indices of the first design of each isomorphism class.
#[pyfunction]
fn representative_indices(py: Python<'_>, designs: Vec<PyDesign>) -> Vec<usize> {
    let ds: Vec<steiner::Design> = designs.into_iter().map(|d| d.0).collect();
    py.detach(|| isomorphism::representative_indices(&ds))
}

/// Isomorphism invariant, equal for isomorphic designs.
#[pyfunction]
fn fingerprint(design: &PyDesign) -> Vec<u8> {
    isomorphism::fingerprint(&design.0).as_bytes().to_vec()
}

/// `(v, k, b)` for every admissible S(t,k,v) with `v <= vmax`.
#[pyfunction]
#[pyo3(signature = (t, vmax, kmin = None, kmax = None))]
fn admissible_table(t: usize, vmax: usize, kmin: Option<usize>, kmax: Option<usize>) -> Vec<(usize, usize, Option<u64>)> {
    let lo = kmin.unwrap_or(t + 1);
    let hi = kmax.unwrap_or(vmax.saturating_sub(1));
    table(t, vmax, lo..=hi)
        .into_iter()
        .map(|r| (r.params.v, r.params.k, block_count_u64(r.params)))
        .collect()
}

/// Shipped example: `(files, designs)` where `files` maps file name to text.
#[pyfunction]
fn fixture<'py>(py: Python<'py>, name: &str) -> PyResult<(Bound<'py, PyDict>, Vec<PyDesign>)> {
    let f = fixtures::fixture(name).map_err(err)?;
    let files = PyDict::new(py);
    for (n, text) in &f.files {
        files.set_item(n, text)?;
    }
    Ok((files, f.designs.into_iter().map(PyDesign).collect()))
}

#[pymodule]
fn steiner_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SteinerError", m.py().get_type::<SteinerError>())?;
    m.add("FIXTURE_NAMES", fixtures::FIXTURE_NAMES.to_vec())?;
    m.add_class::<PyDesign>()?;
    m.add_class::<PyGroup>()?;
    m.add_function(wrap_pyfunction!(km_search, m)?)?;
    m.add_function(wrap_pyfunction!(extend, m)?)?;
    m.add_function(wrap_pyfunction!(exact_covers, m)?)?;
    m.add_function(wrap_pyfunction!(automorphism_group, m)?)?;
    m.add_function(wrap_pyfunction!(are_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(representative_indices, m)?)?;
    m.add_function(wrap_pyfunction!(fingerprint, m)?)?;
    m.add_function(wrap_pyfunction!(admissible_table, m)?)?;
    m.add_function(wrap_pyfunction!(fixture, m)?)?;
    Ok(())
}
