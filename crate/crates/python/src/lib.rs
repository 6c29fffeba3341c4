//! Python bindings: a `Workbench` over one k-graph and its `Element`s.

use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;

use kpw_core::cli::{parse_degree, parse_grade};
use kpw_core::cycline::{self, DEFAULT_DEPTH};
use kpw_core::format::{self, ParsedGraph};
use kpw_core::infpath::EvPeriodicPath;
use kpw_core::uniqueness::{self, CompressBounds};
use kpw_core::{diagonal, KGraph, KpAlgebra, KpElement, RingSpec};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A k-graph with a coefficient ring.
#[pyclass(frozen, module = "kpw")]
struct Workbench {
    graph: KGraph,
    ring: RingSpec,
    depth: u32,
}

impl Workbench {
    fn alg(&self) -> KpAlgebra<'_> {
        KpAlgebra::new(&self.graph, self.ring.clone())
    }

    fn path(&self, text: &str) -> PyResult<kpw_core::Path> {
        self.graph.parse_path(text).map_err(err)
    }
}

#[pymethods]
impl Workbench {
    /// Builds a workbench from graph-file text. `ring` overrides the file's ring.
    #[new]
    #[pyo3(signature = (text, ring=None, depth=DEFAULT_DEPTH))]
    fn new(text: &str, ring: Option<&str>, depth: u32) -> PyResult<Self> {
        let ParsedGraph {
            graph,
            ring: file_ring,
        } = format::parse_graph_file(text).map_err(err)?;
        let ring = match ring {
            Some(r) => r.parse().map_err(err)?,
            None => file_ring,
        };
        Ok(Workbench { graph, ring, depth })
    }

    #[staticmethod]
    #[pyo3(signature = (path, ring=None, depth=DEFAULT_DEPTH))]
    fn load(path: &str, ring: Option<&str>, depth: u32) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(err)?;
        Workbench::new(&text, ring, depth)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.graph.rank()
    }

    #[getter]
    fn ring(&self) -> String {
        self.ring.to_string()
    }

    fn vertices(&self) -> Vec<String> {
        self.graph
            .vertices()
            .map(|v| self.graph.vertex_name(v).to_string())
            .collect()
    }

    fn edges(&self) -> Vec<String> {
        self.graph
            .edges()
            .map(|e| self.graph.edge_name(e).to_string())
            .collect()
    }

    /// Parses an expression such as `"2 s[e.f]t[f] - p[v]"`.
    fn element(slf: &Bound<'_, Self>, text: &str) -> PyResult<Element> {
        let (value, _) = format::parse_element(text, &slf.get().alg()).map_err(err)?;
        Ok(Element {
            wb: slf.clone().unbind(),
            value,
        })
    }

    /// Cycline status of `(alpha, beta)`: `"cycline"`, `"not-cycline"` or `"unknown"`.
    fn cycline(&self, alpha: &str, beta: &str) -> PyResult<String> {
        let (a, b) = (self.path(alpha)?, self.path(beta)?);
        Ok(cycline::is_cycline(&self.graph, &a, &b, self.depth)
            .map_err(err)?
            .status
            .to_string())
    }

    fn cycline_pairs(&self, max: &str) -> PyResult<Vec<(String, String)>> {
        let bound = parse_degree(max, self.graph.rank()).map_err(err)?;
        let pairs = cycline::cycline_pairs_up_to(&self.graph, &bound, self.depth).map_err(err)?;
        Ok(pairs
            .into_iter()
            .filter(|(_, _, v)| v.is_cycline())
            .map(|(a, b, _)| (self.graph.format_path(&a), self.graph.format_path(&b)))
            .collect())
    }

    fn is_aperiodic(&self) -> PyResult<String> {
        Ok(cycline::is_aperiodic(&self.graph, self.depth)
            .map_err(err)?
            .status
            .to_string())
    }

    fn __repr__(&self) -> String {
        format!(
            "Workbench(k={}, vertices={}, edges={}, ring={})",
            self.graph.rank(),
            self.graph.num_vertices(),
            self.graph.num_edges(),
            self.ring
        )
    }
}

/// An element of the Kumjian-Pask algebra of a workbench.
#[pyclass(frozen, module = "kpw")]
struct Element {
    wb: Py<Workbench>,
    value: KpElement,
}

impl Element {
    fn with(&self, value: KpElement) -> Element {
        Python::attach(|py| Element {
            wb: self.wb.clone_ref(py),
            value,
        })
    }

    fn same_workbench(&self, other: &Element) -> PyResult<()> {
        if self.wb.is(&other.wb) {
            Ok(())
        } else {
            Err(PyTypeError::new_err(
                "elements belong to different workbenches",
            ))
        }
    }

    fn binary(
        &self,
        other: &Element,
        op: impl Fn(&KpAlgebra, &KpElement, &KpElement) -> Result<KpElement, kpw_core::kpalg::KpError>,
    ) -> PyResult<Element> {
        self.same_workbench(other)?;
        let value = op(&self.wb.get().alg(), &self.value, &other.value).map_err(err)?;
        Ok(self.with(value))
    }
}

#[pymethods]
impl Element {
    fn __add__(&self, other: &Element) -> PyResult<Element> {
        self.binary(other, |alg, a, b| alg.add(a, b))
    }

    fn __sub__(&self, other: &Element) -> PyResult<Element> {
        self.binary(other, |alg, a, b| alg.sub(a, b))
    }

    fn __mul__(&self, other: &Element) -> PyResult<Element> {
        self.binary(other, |alg, a, b| alg.mul(a, b))
    }

    fn __neg__(&self) -> PyResult<Element> {
        Ok(self.with(self.wb.get().alg().neg(&self.value).map_err(err)?))
    }

    fn __eq__(&self, other: &Element) -> PyResult<bool> {
        self.same_workbench(other)?;
        self.wb
            .get()
            .alg()
            .equals(&self.value, &other.value)
            .map_err(err)
    }

    fn star(&self) -> PyResult<Element> {
        Ok(self.with(self.wb.get().alg().star(&self.value).map_err(err)?))
    }

    /// Normal form at degree `m`, e.g. `"1"` or `"1,2"`.
    fn normal_form(&self, m: &str) -> PyResult<Element> {
        let wb = self.wb.get();
        let m = parse_degree(m, wb.graph.rank()).map_err(err)?;
        Ok(self.with(wb.alg().normal_form(&self.value, &m).map_err(err)?))
    }

    fn graded_normal_form(&self) -> PyResult<Element> {
        Ok(self.with(
            self.wb
                .get()
                .alg()
                .graded_normal_form(&self.value)
                .map_err(err)?,
        ))
    }

    fn graded_component(&self, n: &str) -> PyResult<Element> {
        let wb = self.wb.get();
        let n = parse_grade(n, wb.graph.rank()).map_err(err)?;
        Ok(self.with(wb.alg().graded_component(&self.value, &n).map_err(err)?))
    }

    fn is_zero(&self) -> PyResult<bool> {
        self.wb.get().alg().is_zero(&self.value).map_err(err)
    }

    fn in_diagonal(&self) -> PyResult<bool> {
        diagonal::is_in_diagonal(&self.wb.get().alg(), &self.value).map_err(err)
    }

    /// `"yes"`, `"no"` or `"unknown"`.
    fn in_m(&self) -> PyResult<String> {
        let wb = self.wb.get();
        Ok(cycline::is_in_m(&wb.alg(), &self.value, wb.depth)
            .map_err(err)?
            .status
            .to_string())
    }

    /// Compresses a nonzero element to a nonzero `m = u a w` in `M`.
    ///
    /// Returns `(m, u, w, x)` with `x` the infinite path used.
    #[pyo3(signature = (x=None))]
    fn compress(&self, x: Option<&str>) -> PyResult<(Element, Element, Element, String)> {
        let wb = self.wb.get();
        let alg = wb.alg();
        let x = x
            .map(|t| EvPeriodicPath::parse(&wb.graph, t))
            .transpose()
            .map_err(err)?;
        let bounds = CompressBounds {
            depth: wb.depth,
            ..CompressBounds::default()
        };
        let c =
            uniqueness::compress_to_cycline(&alg, &self.value, x.as_ref(), bounds).map_err(err)?;
        let shown = c.x.display(&wb.graph).to_string();
        Ok((self.with(c.m), self.with(c.left), self.with(c.right), shown))
    }

    fn __str__(&self) -> String {
        self.wb.get().alg().show(&self.value)
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.__str__())
    }
}

#[pymodule]
fn kpw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Workbench>()?;
    m.add_class::<Element>()?;
    Ok(())
}
