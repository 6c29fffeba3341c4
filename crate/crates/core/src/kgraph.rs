//! Finite row-finite k-graphs without sources, presented by a colored
//! skeleton plus factorization squares.
//!
//! Paths are stored in color-blocked form: all color-1 edges first, then
//! all color-2 edges, and so on, with `s(e_j) = r(e_{j+1})` between
//! neighbours. Unique factorization makes this form unique, so path
//! equality is plain sequence equality. Moving between other color
//! orders is done one adjacent transposition at a time through the
//! square table.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("paths are not composable: s({0}) != r({1})")]
    NotComposable(String, String),
    #[error("degree {0} is not below {1}")]
    DegreeNotBelow(Degree, Degree),
    #[error("degree {0} has rank {1}, graph has rank {2}")]
    RankMismatch(Degree, usize, usize),
    #[error("empty path text")]
    EmptyPath,
    #[error("invalid k-graph presentation:\n{0}")]
    Invalid(ValidationReport),
}

/// A vector in `N^k` with the coordinatewise partial order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Degree(pub Vec<u32>);

impl Degree {
    pub fn zero(k: usize) -> Self {
        Degree(vec![0; k])
    }

    pub fn ones(k: usize) -> Self {
        Degree(vec![1; k])
    }

    pub fn diagonal(k: usize, n: u32) -> Self {
        Degree(vec![n; k])
    }

    /// The `i`-th standard basis vector (0-based color).
    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i] = 1;
        Degree(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn le(&self, other: &Degree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &Degree) -> Degree {
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Degree)
    }

    pub fn scale(&self, t: u32) -> Degree {
        Degree(self.0.iter().map(|c| c * t).collect())
    }

    pub fn strictly_positive(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }

    pub fn to_grade(&self) -> Grade {
        Grade(self.0.iter().map(|&c| i64::from(c)).collect())
    }

    /// Every degree `n <= bound`, ordered by total then lexicographically.
    pub fn all_below(bound: &Degree) -> Vec<Degree> {
        let mut out = vec![Vec::new()];
        for &b in &bound.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=b).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        let mut degrees: Vec<Degree> = out.into_iter().map(Degree).collect();
        degrees.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
        degrees
    }
}

impl Add for &Degree {
    type Output = Degree;
    fn add(self, rhs: &Degree) -> Degree {
        Degree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A vector in `Z^k`; the grading group of the algebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Grade(pub Vec<i64>);

impl Grade {
    pub fn zero(k: usize) -> Self {
        Grade(vec![0; k])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl Sub for &Degree {
    type Output = Grade;
    fn sub(self, rhs: &Degree) -> Grade {
        Grade(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| i64::from(*a) - i64::from(*b))
                .collect(),
        )
    }
}

impl Add for &Grade {
    type Output = Grade;
    fn add(self, rhs: &Grade) -> Grade {
        Grade(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A morphism of the k-graph in canonical color-blocked form.
///
/// Field order matters: the derived `Ord` compares degree first, then the
/// edge sequence (edge ids follow name order), then the range vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    degree: Degree,
    edges: Vec<EdgeId>,
    range: VertexId,
    source: VertexId,
}

impl Path {
    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Paths with the given range vertex: `v Λ^n`.
    Range,
    /// Paths with the given source vertex: `Λ^n v`.
    Source,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub name: String,
    pub range: String,
    pub source: String,
    /// 1-based color.
    pub color: usize,
}

/// The relation `e.f = f2.e2` with `color(e) < color(f)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareRecord {
    pub e: String,
    pub f: String,
    pub f2: String,
    pub e2: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGraphPresentation {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    pub squares: Vec<SquareRecord>,
}

impl KGraphPresentation {
    pub fn new(rank: usize) -> Self {
        KGraphPresentation {
            rank,
            ..Default::default()
        }
    }

    pub fn vertex(mut self, name: &str) -> Self {
        self.vertices.push(name.to_string());
        self
    }

    pub fn edge(mut self, name: &str, range: &str, source: &str, color: usize) -> Self {
        self.edges.push(EdgeRecord {
            name: name.to_string(),
            range: range.to_string(),
            source: source.to_string(),
            color,
        });
        self
    }

    pub fn square(mut self, e: &str, f: &str, f2: &str, e2: &str) -> Self {
        self.squares.push(SquareRecord {
            e: e.to_string(),
            f: f.to_string(),
            f2: f2.to_string(),
            e2: e2.to_string(),
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    BadRank,
    DuplicateVertex { vertex: String },
    DuplicateEdge { edge: String },
    UnknownVertex { edge: String, vertex: String },
    BadColor { edge: String, color: usize },
    MalformedSquare { index: usize, reason: String },
    MissingSquare { e: String, f: String },
    DuplicateSquare { e: String, f: String },
    NonBijective { f: String, e: String, images: usize },
    CubeFailure { e: String, f: String, g: String },
    Source { vertex: String, color: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadRank => write!(f, "rank must be at least 1"),
            Violation::DuplicateVertex { vertex } => write!(f, "duplicate vertex {vertex}"),
            Violation::DuplicateEdge { edge } => write!(f, "duplicate edge {edge}"),
            Violation::UnknownVertex { edge, vertex } => {
                write!(f, "edge {edge} refers to unknown vertex {vertex}")
            }
            Violation::BadColor { edge, color } => {
                write!(f, "edge {edge} has color {color} outside 1..k")
            }
            Violation::MalformedSquare { index, reason } => {
                write!(f, "square #{index} is malformed: {reason}")
            }
            Violation::MissingSquare { e, f: g } => write!(f, "missing square for ({e},{g})"),
            Violation::DuplicateSquare { e, f: g } => {
                write!(f, "more than one square for ({e},{g})")
            }
            Violation::NonBijective { f: g, e, images } => {
                write!(
                    f,
                    "squares are not a bijection: path {g}.{e} is the image of {images} squares"
                )
            }
            Violation::CubeFailure { e, f: g, g: h } => {
                write!(f, "associativity (cube) condition fails for {e}.{g}.{h}")
            }
            Violation::Source { vertex, color } => {
                write!(
                    f,
                    "vertex {vertex} has no color-{color} edge into it (source)"
                )
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        write!(f, "invalid:")?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Checks a presentation against the k-graph axioms without building it.
pub fn validate_presentation(p: &KGraphPresentation) -> ValidationReport {
    match Tables::build(p) {
        Ok(_) => ValidationReport::default(),
        Err(report) => report,
    }
}

// Index tables shared by validation and the built graph.
struct Tables {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    edge_range: Vec<VertexId>,
    edge_source: Vec<VertexId>,
    edge_color: Vec<usize>,
    swap: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
}

impl Tables {
    fn build(p: &KGraphPresentation) -> Result<Tables, ValidationReport> {
        let mut violations = Vec::new();
        let k = p.rank;
        if k == 0 {
            violations.push(Violation::BadRank);
        }

        let mut vertex_names: Vec<String> = p.vertices.clone();
        vertex_names.sort();
        for w in vertex_names.windows(2) {
            if w[0] == w[1] {
                violations.push(Violation::DuplicateVertex {
                    vertex: w[0].clone(),
                });
            }
        }
        vertex_names.dedup();
        let vertex_index: HashMap<&str, VertexId> = vertex_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), VertexId(i as u32)))
            .collect();

        let mut records: Vec<&EdgeRecord> = p.edges.iter().collect();
        records.sort_by(|a, b| a.name.cmp(&b.name));
        let mut edge_names = Vec::new();
        let mut edge_range = Vec::new();
        let mut edge_source = Vec::new();
        let mut edge_color = Vec::new();
        for (i, rec) in records.iter().enumerate() {
            if i > 0 && records[i - 1].name == rec.name {
                violations.push(Violation::DuplicateEdge {
                    edge: rec.name.clone(),
                });
                continue;
            }
            let mut ok = true;
            for v in [&rec.range, &rec.source] {
                if !vertex_index.contains_key(v.as_str()) {
                    violations.push(Violation::UnknownVertex {
                        edge: rec.name.clone(),
                        vertex: v.clone(),
                    });
                    ok = false;
                }
            }
            if rec.color == 0 || rec.color > k {
                violations.push(Violation::BadColor {
                    edge: rec.name.clone(),
                    color: rec.color,
                });
                ok = false;
            }
            if ok {
                edge_names.push(rec.name.clone());
                edge_range.push(vertex_index[rec.range.as_str()]);
                edge_source.push(vertex_index[rec.source.as_str()]);
                edge_color.push(rec.color - 1);
            }
        }
        let edge_index: HashMap<&str, EdgeId> = edge_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), EdgeId(i as u32)))
            .collect();

        // forward: (e, f) colors i < j  ->  (f2, e2)
        let mut forward: HashMap<(EdgeId, EdgeId), Vec<(EdgeId, EdgeId)>> = HashMap::new();
        for (idx, sq) in p.squares.iter().enumerate() {
            let lookup = |name: &str| edge_index.get(name).copied();
            let (Some(e), Some(f), Some(f2), Some(e2)) =
                (lookup(&sq.e), lookup(&sq.f), lookup(&sq.f2), lookup(&sq.e2))
            else {
                violations.push(Violation::MalformedSquare {
                    index: idx + 1,
                    reason: "unknown edge".into(),
                });
                continue;
            };
            let (ce, cf, cf2, ce2) = (
                edge_color[e.0 as usize],
                edge_color[f.0 as usize],
                edge_color[f2.0 as usize],
                edge_color[e2.0 as usize],
            );
            let reason = if ce >= cf {
                Some("left side must be color i then color j with i < j")
            } else if cf2 != cf || ce2 != ce {
                Some("right side must use the same two colors in the opposite order")
            } else if edge_source[e.0 as usize] != edge_range[f.0 as usize] {
                Some("left side is not a path")
            } else if edge_source[f2.0 as usize] != edge_range[e2.0 as usize] {
                Some("right side is not a path")
            } else if edge_range[e.0 as usize] != edge_range[f2.0 as usize]
                || edge_source[f.0 as usize] != edge_source[e2.0 as usize]
            {
                Some("the two sides have different range or source")
            } else {
                None
            };
            if let Some(reason) = reason {
                violations.push(Violation::MalformedSquare {
                    index: idx + 1,
                    reason: reason.into(),
                });
                continue;
            }
            forward.entry((e, f)).or_default().push((f2, e2));
        }

        let n_edges = edge_names.len();
        let mut images: HashMap<(EdgeId, EdgeId), usize> = HashMap::new();
        for list in forward.values() {
            for img in list {
                *images.entry(*img).or_default() += 1;
            }
        }
        let mut swap = HashMap::new();
        for a in 0..n_edges {
            for b in 0..n_edges {
                let (ea, eb) = (EdgeId(a as u32), EdgeId(b as u32));
                if edge_source[a] != edge_range[b] || edge_color[a] == edge_color[b] {
                    continue;
                }
                if edge_color[a] < edge_color[b] {
                    match forward.get(&(ea, eb)).map(|v| v.as_slice()) {
                        None | Some([]) => violations.push(Violation::MissingSquare {
                            e: edge_names[a].clone(),
                            f: edge_names[b].clone(),
                        }),
                        Some([img]) => {
                            swap.insert((ea, eb), *img);
                            swap.insert(*img, (ea, eb));
                        }
                        Some(_) => violations.push(Violation::DuplicateSquare {
                            e: edge_names[a].clone(),
                            f: edge_names[b].clone(),
                        }),
                    }
                } else {
                    let hits = images.get(&(ea, eb)).copied().unwrap_or(0);
                    if hits != 1 {
                        violations.push(Violation::NonBijective {
                            f: edge_names[a].clone(),
                            e: edge_names[b].clone(),
                            images: hits,
                        });
                    }
                }
            }
        }

        // Associativity for every tri-colored path e.f.g with colors i < j < l.
        if k >= 3 {
            let step = |seq: &mut [EdgeId; 3], i: usize| -> Option<()> {
                let (x, y) = *swap.get(&(seq[i], seq[i + 1]))?;
                seq[i] = x;
                seq[i + 1] = y;
                Some(())
            };
            for a in 0..n_edges {
                for b in 0..n_edges {
                    if edge_source[a] != edge_range[b] || edge_color[a] >= edge_color[b] {
                        continue;
                    }
                    for c in 0..n_edges {
                        if edge_source[b] != edge_range[c] || edge_color[b] >= edge_color[c] {
                            continue;
                        }
                        let start = [EdgeId(a as u32), EdgeId(b as u32), EdgeId(c as u32)];
                        let mut left = start;
                        let mut right = start;
                        let l = step(&mut left, 0)
                            .and_then(|_| step(&mut left, 1))
                            .and_then(|_| step(&mut left, 0));
                        let r = step(&mut right, 1)
                            .and_then(|_| step(&mut right, 0))
                            .and_then(|_| step(&mut right, 1));
                        if l.is_some() && r.is_some() && left != right {
                            violations.push(Violation::CubeFailure {
                                e: edge_names[a].clone(),
                                f: edge_names[b].clone(),
                                g: edge_names[c].clone(),
                            });
                        }
                    }
                }
            }
        }

        for (vi, v) in vertex_names.iter().enumerate() {
            for color in 0..k {
                let has =
                    (0..n_edges).any(|e| edge_range[e].0 as usize == vi && edge_color[e] == color);
                if !has {
                    violations.push(Violation::Source {
                        vertex: v.clone(),
                        color: color + 1,
                    });
                }
            }
        }

        if violations.is_empty() {
            Ok(Tables {
                vertex_names,
                edge_names,
                edge_range,
                edge_source,
                edge_color,
                swap,
            })
        } else {
            Err(ValidationReport { violations })
        }
    }
}

/// A validated finite k-graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct KGraph {
    rank: usize,
    presentation: KGraphPresentation,
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    edge_range: Vec<VertexId>,
    edge_source: Vec<VertexId>,
    edge_color: Vec<usize>,
    // edges with range v, per color
    into: Vec<Vec<Vec<EdgeId>>>,
    // edges with source v, per color
    out_of: Vec<Vec<Vec<EdgeId>>>,
    swap: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    fingerprint: u64,
}

impl PartialEq for KGraph {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint && self.presentation == other.presentation
    }
}

impl KGraph {
    pub fn new(presentation: KGraphPresentation) -> Result<KGraph, GraphError> {
        let t = Tables::build(&presentation).map_err(GraphError::Invalid)?;
        let k = presentation.rank;
        let nv = t.vertex_names.len();
        let mut into = vec![vec![Vec::new(); k]; nv];
        let mut out_of = vec![vec![Vec::new(); k]; nv];
        for (i, &c) in t.edge_color.iter().enumerate() {
            into[t.edge_range[i].0 as usize][c].push(EdgeId(i as u32));
            out_of[t.edge_source[i].0 as usize][c].push(EdgeId(i as u32));
        }
        let vertex_index = t
            .vertex_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i as u32)))
            .collect();
        let edge_index = t
            .edge_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), EdgeId(i as u32)))
            .collect();

        let mut hasher = DefaultHasher::new();
        k.hash(&mut hasher);
        t.vertex_names.hash(&mut hasher);
        for i in 0..t.edge_names.len() {
            (
                &t.edge_names[i],
                t.edge_range[i],
                t.edge_source[i],
                t.edge_color[i],
            )
                .hash(&mut hasher);
        }
        let mut squares: Vec<_> = t.swap.iter().collect();
        squares.sort();
        squares.hash(&mut hasher);

        Ok(KGraph {
            rank: k,
            presentation,
            vertex_names: t.vertex_names,
            edge_names: t.edge_names,
            edge_range: t.edge_range,
            edge_source: t.edge_source,
            edge_color: t.edge_color,
            into,
            out_of,
            swap: t.swap,
            vertex_index,
            edge_index,
            fingerprint: hasher.finish(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn presentation(&self) -> &KGraphPresentation {
        &self.presentation
    }

    /// Stable identity used to reject mixing elements of different graphs.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_names.len()
    }

    pub fn num_squares(&self) -> usize {
        self.swap.len() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_names.len() as u32).map(EdgeId)
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0 as usize]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.0 as usize]
    }

    /// 0-based color.
    pub fn color(&self, e: EdgeId) -> usize {
        self.edge_color[e.0 as usize]
    }

    pub fn edge_range(&self, e: EdgeId) -> VertexId {
        self.edge_range[e.0 as usize]
    }

    pub fn edge_source(&self, e: EdgeId) -> VertexId {
        self.edge_source[e.0 as usize]
    }

    /// Edges of the given color whose range is `v`.
    pub fn edges_into(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.into[v.0 as usize][color]
    }

    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path {
            degree: Degree::zero(self.rank),
            edges: Vec::new(),
            range: v,
            source: v,
        }
    }

    pub fn edge_path(&self, e: EdgeId) -> Path {
        Path {
            degree: Degree::unit(self.rank, self.color(e)),
            edges: vec![e],
            range: self.edge_range(e),
            source: self.edge_source(e),
        }
    }

    fn check_rank(&self, n: &Degree) -> Result<(), GraphError> {
        if n.rank() != self.rank {
            return Err(GraphError::RankMismatch(n.clone(), n.rank(), self.rank));
        }
        Ok(())
    }

    // Builds a path from an edge sequence that is already blocked and composable.
    fn from_blocked(&self, edges: Vec<EdgeId>, at: VertexId) -> Path {
        let mut degree = Degree::zero(self.rank);
        for &e in &edges {
            degree.0[self.color(e)] += 1;
        }
        let range = edges.first().map_or(at, |&e| self.edge_range(e));
        let source = edges.last().map_or(at, |&e| self.edge_source(e));
        Path {
            degree,
            edges,
            range,
            source,
        }
    }

    /// Rearranges a composable edge sequence so that its colors read
    /// `target`, using the squares. Same-colored edges never pass each
    /// other, so the target position of every edge is determined up front
    /// and an adjacent-swap sort reaches it.
    fn reorder(&self, edges: &mut [EdgeId], target: &[usize]) {
        debug_assert_eq!(edges.len(), target.len());
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); self.rank];
        for (pos, &c) in target.iter().enumerate().rev() {
            slots[c].push(pos);
        }
        let mut rank: Vec<usize> = edges
            .iter()
            .map(|&e| {
                slots[self.color(e)]
                    .pop()
                    .expect("color multiset matches target")
            })
            .collect();
        // leftmost-first adjacent transpositions
        let mut i = 0;
        while i + 1 < edges.len() {
            if rank[i] > rank[i + 1] {
                let (x, y) = self.swap[&(edges[i], edges[i + 1])];
                edges[i] = x;
                edges[i + 1] = y;
                rank.swap(i, i + 1);
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
    }

    /// `λμ` in canonical form.
    pub fn compose(&self, left: &Path, right: &Path) -> Result<Path, GraphError> {
        if left.source != right.range {
            return Err(GraphError::NotComposable(
                self.format_path(left),
                self.format_path(right),
            ));
        }
        if left.is_vertex() {
            return Ok(right.clone());
        }
        if right.is_vertex() {
            return Ok(left.clone());
        }
        let mut edges: Vec<EdgeId> = left.edges.iter().chain(&right.edges).copied().collect();
        let mut target: Vec<usize> = edges.iter().map(|&e| self.color(e)).collect();
        target.sort_unstable();
        self.reorder(&mut edges, &target);
        Ok(Path {
            degree: &left.degree + &right.degree,
            edges,
            range: left.range,
            source: right.source,
        })
    }

    /// The unique `(μ, ν)` with `d(μ) = m` and `λ = μν`.
    pub fn factor(&self, path: &Path, m: &Degree) -> Result<(Path, Path), GraphError> {
        self.check_rank(m)?;
        let rest = path
            .degree
            .checked_sub(m)
            .ok_or_else(|| GraphError::DegreeNotBelow(m.clone(), path.degree.clone()))?;
        let mut target = Vec::with_capacity(path.edges.len());
        for (c, &n) in m.0.iter().enumerate() {
            target.extend(std::iter::repeat_n(c, n as usize));
        }
        for (c, &n) in rest.0.iter().enumerate() {
            target.extend(std::iter::repeat_n(c, n as usize));
        }
        let mut edges = path.edges.clone();
        self.reorder(&mut edges, &target);
        let tail = edges.split_off(m.total() as usize);
        let head = self.from_blocked(edges, path.range);
        let tail = self.from_blocked(tail, head.source);
        Ok((head, tail))
    }

    /// `v Λ^n` or `Λ^n v`, in canonical order.
    pub fn enumerate_paths(
        &self,
        v: VertexId,
        n: &Degree,
        direction: Direction,
    ) -> Result<Vec<Path>, GraphError> {
        self.check_rank(n)?;
        if v.0 as usize >= self.vertex_names.len() {
            return Err(GraphError::UnknownVertex(format!("#{}", v.0)));
        }
        let mut colors = Vec::with_capacity(n.total() as usize);
        for (c, &count) in n.0.iter().enumerate() {
            colors.extend(std::iter::repeat_n(c, count as usize));
        }
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(colors.len());
        match direction {
            Direction::Range => self.extend_down(v, &colors, &mut stack, &mut |edges| {
                out.push(self.from_blocked(edges.to_vec(), v));
            }),
            Direction::Source => {
                colors.reverse();
                self.extend_up(v, &colors, &mut stack, &mut |edges| {
                    let mut edges = edges.to_vec();
                    edges.reverse();
                    out.push(self.from_blocked(edges, v));
                });
                out.sort();
            }
        }
        Ok(out)
    }

    fn extend_down(
        &self,
        at: VertexId,
        colors: &[usize],
        stack: &mut Vec<EdgeId>,
        emit: &mut dyn FnMut(&[EdgeId]),
    ) {
        let Some((&c, rest)) = colors.split_first() else {
            emit(stack);
            return;
        };
        for &e in self.edges_into(at, c) {
            stack.push(e);
            self.extend_down(self.edge_source(e), rest, stack, emit);
            stack.pop();
        }
    }

    fn extend_up(
        &self,
        at: VertexId,
        colors: &[usize],
        stack: &mut Vec<EdgeId>,
        emit: &mut dyn FnMut(&[EdgeId]),
    ) {
        let Some((&c, rest)) = colors.split_first() else {
            emit(stack);
            return;
        };
        for &e in &self.out_of[at.0 as usize][c] {
            stack.push(e);
            self.extend_up(self.edge_range(e), rest, stack, emit);
            stack.pop();
        }
    }

    /// Every path with degree at most `bound`, by degree then canonical order.
    pub fn paths_up_to(&self, bound: &Degree) -> Vec<Path> {
        let mut out = Vec::new();
        for n in Degree::all_below(bound) {
            let mut level: Vec<Path> = self
                .vertices()
                .flat_map(|v| {
                    self.enumerate_paths(v, &n, Direction::Range)
                        .expect("rank checked")
                })
                .collect();
            level.sort();
            out.extend(level);
        }
        out
    }

    /// Pairs `(α, β)` with `λα = μβ` and `d(λα) = d(λ) ∨ d(μ)`.
    pub fn mce(&self, lambda: &Path, mu: &Path) -> Vec<(Path, Path)> {
        if lambda.range != mu.range {
            return Vec::new();
        }
        let q = lambda.degree.join(&mu.degree);
        let ext = q.checked_sub(&lambda.degree).expect("join dominates");
        let mut out = Vec::new();
        for alpha in self
            .enumerate_paths(lambda.source, &ext, Direction::Range)
            .expect("rank checked")
        {
            let whole = self
                .compose(lambda, &alpha)
                .expect("alpha starts at s(lambda)");
            let (head, beta) = self.factor(&whole, &mu.degree).expect("d(mu) <= q");
            if head == *mu {
                out.push((alpha, beta));
            }
        }
        out
    }

    /// `c^t` for a cycle `c` (`t = 0` gives the base vertex).
    pub fn power(&self, cycle: &Path, t: u32) -> Result<Path, GraphError> {
        let mut acc = self.vertex_path(cycle.source);
        for _ in 0..t {
            acc = self.compose(&acc, cycle)?;
        }
        Ok(acc)
    }

    /// Dot-separated edge names, or the vertex name for degree 0.
    pub fn format_path(&self, p: &Path) -> String {
        if p.is_vertex() {
            return self.vertex_name(p.range).to_string();
        }
        p.edges
            .iter()
            .map(|&e| self.edge_name(e))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Inverse of [`format_path`](Self::format_path); also accepts edge
    /// sequences that are not blocked, re-blocking them.
    pub fn parse_path(&self, text: &str) -> Result<Path, GraphError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(GraphError::EmptyPath);
        }
        if let Some(&v) = self.vertex_index.get(text) {
            return Ok(self.vertex_path(v));
        }
        let mut acc: Option<Path> = None;
        for name in text.split('.') {
            let e = self.edge_path(self.edge(name.trim())?);
            acc = Some(match acc {
                None => e,
                Some(p) => self.compose(&p, &e)?,
            });
        }
        acc.ok_or(GraphError::EmptyPath)
    }

    /// Vertices reachable from `v` by following paths toward their sources.
    pub fn reachable_from(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::from([v]);
        let mut stack = vec![v];
        while let Some(w) = stack.pop() {
            for per_color in &self.into[w.0 as usize] {
                for &e in per_color {
                    let s = self.edge_source(e);
                    if seen.insert(s) {
                        stack.push(s);
                    }
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(g: &KGraph, ps: &[Path]) -> Vec<String> {
        ps.iter().map(|p| g.format_path(p)).collect()
    }

    #[test]
    fn fixtures_validate() {
        for g in [
            fixtures::g1(),
            fixtures::g2(),
            fixtures::g3(),
            fixtures::g4(),
        ] {
            assert!(validate_presentation(g.presentation()).is_valid());
        }
    }

    #[test]
    fn missing_square_is_reported() {
        let p = KGraphPresentation::new(2)
            .vertex("v")
            .edge("a", "v", "v", 1)
            .edge("b", "v", "v", 2);
        let report = validate_presentation(&p);
        assert!(report.violations.contains(&Violation::MissingSquare {
            e: "a".into(),
            f: "b".into()
        }));
    }

    #[test]
    fn source_vertex_is_reported() {
        let p = KGraphPresentation::new(1).vertex("v");
        let report = validate_presentation(&p);
        assert_eq!(
            report.violations,
            vec![Violation::Source {
                vertex: "v".into(),
                color: 1
            }]
        );
        assert_eq!(
            report.to_string(),
            "invalid:\n  vertex v has no color-1 edge into it (source)"
        );
    }

    #[test]
    fn non_bijective_squares() {
        // two color-1 loops and one color-2 loop: a.c = c.a and b.c = c.a
        // leaves c.b uncovered and c.a hit twice
        let p = KGraphPresentation::new(2)
            .vertex("v")
            .edge("a", "v", "v", 1)
            .edge("b", "v", "v", 1)
            .edge("c", "v", "v", 2)
            .square("a", "c", "c", "a")
            .square("b", "c", "c", "a");
        let report = validate_presentation(&p);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonBijective { images: 2, .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonBijective { images: 0, .. })));
    }

    #[test]
    fn malformed_square() {
        let p = KGraphPresentation::new(2)
            .vertex("v")
            .edge("a", "v", "v", 1)
            .edge("b", "v", "v", 2)
            .square("b", "a", "a", "b");
        let report = validate_presentation(&p);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MalformedSquare { .. })));
    }

    #[test]
    fn duplicate_edge() {
        let p = KGraphPresentation::new(1)
            .vertex("v")
            .edge("e", "v", "v", 1)
            .edge("e", "v", "v", 1);
        assert!(validate_presentation(&p)
            .violations
            .contains(&Violation::DuplicateEdge { edge: "e".into() }));
    }

    // A 3-graph with two loops per color at one vertex. Untwisted, every
    // square is the identity flip. Twisted, passing b1 toggles the color-1
    // index and passing c1 toggles the color-2 index; each square set is
    // still a bijection but the two routes around a1.b1.c1 disagree.
    fn cube_graph(twisted: bool) -> KGraphPresentation {
        let mut p = KGraphPresentation::new(3).vertex("v");
        for (name, c) in [
            ("a1", 1),
            ("a2", 1),
            ("b1", 2),
            ("b2", 2),
            ("c1", 3),
            ("c2", 3),
        ] {
            p = p.edge(name, "v", "v", c);
        }
        for (x, y) in [("a", "b"), ("a", "c"), ("b", "c")] {
            for i in 1..=2 {
                for j in 1..=2 {
                    let (e, f) = (format!("{x}{i}"), format!("{y}{j}"));
                    let toggles = twisted && j == 1 && (x, y) != ("a", "c");
                    let e2 = if toggles {
                        format!("{x}{}", 3 - i)
                    } else {
                        e.clone()
                    };
                    p = p.square(&e, &f, &f, &e2);
                }
            }
        }
        p
    }

    #[test]
    fn cube_condition() {
        assert!(validate_presentation(&cube_graph(false)).is_valid());
        let report = validate_presentation(&cube_graph(true));
        assert!(
            report
                .violations
                .iter()
                .all(|v| matches!(v, Violation::CubeFailure { .. })),
            "{report}"
        );
        assert!(!report.is_valid());
    }

    #[test]
    fn enumerate_two_loops() {
        let g = fixtures::g2();
        let v = g.vertex("v").unwrap();
        let ps = g
            .enumerate_paths(v, &Degree(vec![2]), Direction::Range)
            .unwrap();
        assert_eq!(names(&g, &ps), ["e.e", "e.f", "f.e", "f.f"]);
        let zero = g
            .enumerate_paths(v, &Degree(vec![0]), Direction::Range)
            .unwrap();
        assert_eq!(names(&g, &zero), ["v"]);
    }

    #[test]
    fn enumerate_torus() {
        let g = fixtures::g3();
        let v = g.vertex("v").unwrap();
        let ps = g
            .enumerate_paths(v, &Degree(vec![1, 1]), Direction::Range)
            .unwrap();
        assert_eq!(names(&g, &ps), ["a.b"]);
    }

    #[test]
    fn enumerate_by_source() {
        let g = fixtures::g4();
        let u = g.vertex("u").unwrap();
        let ps = g
            .enumerate_paths(u, &Degree(vec![3]), Direction::Source)
            .unwrap();
        assert_eq!(names(&g, &ps), ["f.e.f"]);
        assert!(g
            .enumerate_paths(VertexId(9), &Degree(vec![1]), Direction::Range)
            .is_err());
    }

    #[test]
    fn compose_reblocks() {
        let g = fixtures::g3();
        let a = g.parse_path("a").unwrap();
        let b = g.parse_path("b").unwrap();
        let ba = g.compose(&b, &a).unwrap();
        assert_eq!(g.format_path(&ba), "a.b");
        assert_eq!(ba.degree(), &Degree(vec![1, 1]));

        let g1 = fixtures::g1();
        let e = g1.parse_path("e").unwrap();
        assert_eq!(g1.format_path(&g1.compose(&e, &e).unwrap()), "e.e");
        let v = g1.parse_path("v").unwrap();
        assert_eq!(g1.compose(&v, &e).unwrap(), e);
    }

    #[test]
    fn compose_rejects_mismatch() {
        let g = fixtures::g4();
        let e = g.parse_path("e").unwrap();
        assert!(matches!(
            g.compose(&e, &e),
            Err(GraphError::NotComposable(..))
        ));
    }

    #[test]
    fn factor_examples() {
        let g = fixtures::g3();
        let ab = g.parse_path("a.b").unwrap();
        let (mu, nu) = g.factor(&ab, &Degree(vec![0, 1])).unwrap();
        assert_eq!(
            (g.format_path(&mu).as_str(), g.format_path(&nu).as_str()),
            ("b", "a")
        );
        let (mu, nu) = g.factor(&ab, &Degree(vec![0, 0])).unwrap();
        assert_eq!((g.format_path(&mu).as_str(), nu), ("v", ab.clone()));
        assert!(matches!(
            g.factor(&ab, &Degree(vec![2, 0])),
            Err(GraphError::DegreeNotBelow(..))
        ));

        let g1 = fixtures::g1();
        let ee = g1.parse_path("e.e").unwrap();
        let (mu, nu) = g1.factor(&ee, &Degree(vec![1])).unwrap();
        assert_eq!(
            (g1.format_path(&mu), g1.format_path(&nu)),
            ("e".to_string(), "e".to_string())
        );
    }

    #[test]
    fn mce_examples() {
        let g = fixtures::g3();
        let a = g.parse_path("a").unwrap();
        let b = g.parse_path("b").unwrap();
        let got: Vec<_> = g
            .mce(&a, &b)
            .iter()
            .map(|(x, y)| (g.format_path(x), g.format_path(y)))
            .collect();
        assert_eq!(got, [("b".to_string(), "a".to_string())]);

        let g2 = fixtures::g2();
        let e = g2.parse_path("e").unwrap();
        let f = g2.parse_path("f").unwrap();
        assert!(g2.mce(&e, &f).is_empty());
        let v = g2.parse_path("v").unwrap();
        assert_eq!(g2.mce(&e, &e), vec![(v.clone(), v)]);
    }

    #[test]
    fn parse_and_format_paths() {
        let g = fixtures::g3();
        assert_eq!(g.format_path(&g.parse_path("b.a").unwrap()), "a.b");
        assert!(matches!(g.parse_path("x"), Err(GraphError::UnknownEdge(_))));
        assert!(matches!(g.parse_path(""), Err(GraphError::EmptyPath)));
    }

    #[test]
    fn degrees_below_are_ordered() {
        let ds = Degree::all_below(&Degree(vec![1, 1]));
        assert_eq!(
            ds,
            vec![
                Degree(vec![0, 0]),
                Degree(vec![0, 1]),
                Degree(vec![1, 0]),
                Degree(vec![1, 1])
            ]
        );
    }
}
