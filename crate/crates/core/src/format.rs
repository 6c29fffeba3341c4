//! Text formats: graph files, element expressions, and matrix family files.
//!
//! Graph file:
//!
//! ```text
//! # comment
//! kgraph k=2
//! ring Z
//! vertex v
//! edge a v v 1        # name range source color
//! edge b v v 2
//! square a.b = b.a
//! ```
//!
//! Element expressions: `2 s[e] t[f] - p[v]`, where `t[μ]` is the ghost
//! `s_{μ*}`. Family file: `kpfamily dim=N`, `ring R`, then blocks
//! `matrix <generator>` followed by `N` rows of scalars.

use std::collections::HashSet;

use thiserror::Error;

use crate::kgraph::{GraphError, KGraph, KGraphPresentation, Path, VertexId};
use crate::kpalg::{KpAlgebra, KpElement, KpError};
use crate::matrix::Matrix;
use crate::representation::{Generator, MatrixKpFamily};
use crate::ring::{RingError, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Algebra(#[from] KpError),
    #[error("{0}")]
    Ring(#[from] RingError),
    #[error("at `{token}`: {message}")]
    Expression { token: String, message: String },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: KGraph,
    pub ring: RingSpec,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Parses without validating the k-graph conditions.
pub fn parse_presentation(text: &str) -> Result<(KGraphPresentation, RingSpec), FormatError> {
    let mut lines = content_lines(text);
    let (n, header) = lines.next().ok_or_else(|| syntax(1, "empty file"))?;
    let k = header
        .strip_prefix("kgraph")
        .and_then(|rest| rest.trim().strip_prefix("k="))
        .and_then(|k| k.trim().parse::<usize>().ok())
        .filter(|&k| k >= 1)
        .ok_or_else(|| syntax(n, format!("expected `kgraph k=<int>`, got `{header}`")))?;
    let mut p = KGraphPresentation::new(k);
    let mut ring = RingSpec::Integers;
    let mut vertices = HashSet::new();
    let mut edges = HashSet::new();
    for (n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["ring", spec] => {
                ring = spec
                    .parse()
                    .map_err(|e: RingError| syntax(n, e.to_string()))?
            }
            ["vertex", name] => {
                if !vertices.insert(name.to_string()) {
                    return Err(syntax(n, format!("duplicate vertex `{name}`")));
                }
                p = p.vertex(name);
            }
            ["edge", name, range, source, color] => {
                let color: usize = color
                    .parse()
                    .map_err(|_| syntax(n, format!("bad color `{color}`")))?;
                if !edges.insert(name.to_string()) {
                    return Err(syntax(n, format!("duplicate edge `{name}`")));
                }
                p = p.edge(name, range, source, color);
            }
            ["square", lhs, "=", rhs] => {
                let (e, f) = lhs
                    .split_once('.')
                    .ok_or_else(|| syntax(n, "square sides are `x.y`"))?;
                let (f2, e2) = rhs
                    .split_once('.')
                    .ok_or_else(|| syntax(n, "square sides are `x.y`"))?;
                p = p.square(e, f, f2, e2);
            }
            _ => return Err(syntax(n, format!("unrecognized line `{line}`"))),
        }
    }
    Ok((p, ring))
}

/// Parses and validates a graph file.
pub fn parse_graph_file(text: &str) -> Result<ParsedGraph, FormatError> {
    let (p, ring) = parse_presentation(text)?;
    let graph = KGraph::new(p)?;
    Ok(ParsedGraph { graph, ring })
}

/// Serializes a presentation in graph-file syntax.
pub fn write_graph_file(p: &KGraphPresentation, ring: &RingSpec) -> String {
    let mut out = format!("kgraph k={}\nring {}\n", p.rank, ring);
    for v in &p.vertices {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in &p.edges {
        out.push_str(&format!(
            "edge {} {} {} {}\n",
            e.name, e.range, e.source, e.color
        ));
    }
    for s in &p.squares {
        out.push_str(&format!("square {}.{} = {}.{}\n", s.e, s.f, s.f2, s.e2));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Scalar(String),
    Gen(char, String),
}

fn tokenize(text: &str) -> Result<Vec<Token>, FormatError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' | '\u{00b7}' => {
                out.push(Token::Star);
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                out.push(Token::Scalar(chars[start..i].iter().collect()));
            }
            'p' | 's' | 't' if chars.get(i + 1) == Some(&'[') => {
                let close = chars[i..].iter().position(|&x| x == ']').ok_or_else(|| {
                    FormatError::Expression {
                        token: chars[i..].iter().collect(),
                        message: "unclosed `[`".into(),
                    }
                })?;
                let inner: String = chars[i + 2..i + close].iter().collect();
                out.push(Token::Gen(c, inner.trim().to_string()));
                i += close + 1;
            }
            _ => {
                return Err(FormatError::Expression {
                    token: chars[i..].iter().take(8).collect(),
                    message: "unexpected character".into(),
                })
            }
        }
    }
    Ok(out)
}

// (range, source) of a generator as a morphism
fn ends(kind: char, path: &Path) -> (VertexId, VertexId) {
    match kind {
        't' => (path.source(), path.range()),
        _ => (path.range(), path.source()),
    }
}

/// Parses an element expression. Returns the element and any warnings
/// (an `s[μ]t[ν]` juxtaposition with `s(μ) != s(ν)` is accepted but
/// evaluates to zero).
pub fn parse_element(text: &str, alg: &KpAlgebra) -> Result<(KpElement, Vec<String>), FormatError> {
    let g = alg.graph();
    let ring = alg.ring();
    let tokens = tokenize(text)?;
    let mut warnings = Vec::new();
    let mut total = alg.zero();
    let mut i = 0;
    let mut first = true;
    while i < tokens.len() || first {
        let mut negative = false;
        let mut signed = false;
        while let Some(t @ (Token::Plus | Token::Minus)) = tokens.get(i) {
            negative ^= *t == Token::Minus;
            signed = true;
            i += 1;
        }
        if !first && !signed {
            return Err(FormatError::Expression {
                token: format!("{:?}", tokens.get(i)),
                message: "expected `+` or `-`".into(),
            });
        }
        first = false;
        let mut coeff = ring.one();
        let mut have_scalar = false;
        if let Some(Token::Scalar(s)) = tokens.get(i) {
            coeff = ring.parse_scalar(s)?;
            have_scalar = true;
            i += 1;
            if tokens.get(i) == Some(&Token::Star) {
                i += 1;
            }
        }
        let mut gens: Vec<(char, Path, String)> = Vec::new();
        while let Some(Token::Gen(kind, name)) = tokens.get(i) {
            let path = if *kind == 'p' {
                g.vertex_path(g.vertex(name)?)
            } else {
                g.parse_path(name)?
            };
            gens.push((*kind, path, format!("{kind}[{name}]")));
            i += 1;
            if tokens.get(i) == Some(&Token::Star) {
                i += 1;
            }
        }
        if gens.is_empty() && !have_scalar {
            let token = tokens
                .get(i)
                .map_or_else(|| "end of input".to_string(), |t| format!("{t:?}"));
            return Err(FormatError::Expression {
                token,
                message: "expected a term".into(),
            });
        }
        let mut zero_term = false;
        for w in gens.windows(2) {
            let (k1, p1, n1) = &w[0];
            let (k2, p2, n2) = &w[1];
            let (_, s1) = ends(*k1, p1);
            let (r2, _) = ends(*k2, p2);
            if s1 == r2 {
                continue;
            }
            if *k1 == 's' && *k2 == 't' {
                warnings.push(format!("{n1}{n2}: sources differ, term is zero"));
                zero_term = true;
            } else {
                return Err(FormatError::Expression {
                    token: format!("{n1}{n2}"),
                    message: "not composable".into(),
                });
            }
        }
        if zero_term {
            continue;
        }
        let mut term = alg.scalar(if negative { -&coeff } else { coeff })?;
        for (kind, path, _) in &gens {
            let x = match kind {
                'p' => alg.p(path.range()),
                's' => alg.s(path),
                _ => alg.t(path),
            };
            term = alg.mul(&term, &x)?;
        }
        total = alg.add(&total, &term)?;
    }
    Ok((total, warnings))
}

/// Parses a family file against `g`. Generators without a `matrix` block
/// are zero.
pub fn parse_family(text: &str, g: &KGraph) -> Result<MatrixKpFamily, FormatError> {
    let mut lines = content_lines(text).peekable();
    let (n, header) = lines.next().ok_or_else(|| syntax(1, "empty file"))?;
    let dim = header
        .strip_prefix("kpfamily")
        .and_then(|rest| rest.trim().strip_prefix("dim="))
        .and_then(|d| d.trim().parse::<usize>().ok())
        .ok_or_else(|| syntax(n, format!("expected `kpfamily dim=<int>`, got `{header}`")))?;
    let mut ring = RingSpec::Rationals;
    if let Some((n, line)) = lines.peek().copied() {
        if let Some(spec) = line.strip_prefix("ring ") {
            ring = spec
                .trim()
                .parse()
                .map_err(|e: RingError| syntax(n, e.to_string()))?;
            lines.next();
        }
    }
    let mut fam = MatrixKpFamily::zero(g, ring.clone(), dim);
    while let Some((n, line)) = lines.next() {
        let gen_text = line
            .strip_prefix("matrix ")
            .ok_or_else(|| syntax(n, format!("expected `matrix <generator>`, got `{line}`")))?
            .trim();
        let gen = parse_generator(gen_text, g).map_err(|m| syntax(n, m))?;
        let mut rows = Vec::with_capacity(dim);
        for _ in 0..dim {
            let (n, row) = lines
                .next()
                .ok_or_else(|| syntax(n, "missing matrix rows"))?;
            let cells: Result<Vec<_>, _> = row
                .split_whitespace()
                .map(|c| ring.parse_scalar(c))
                .collect();
            let cells = cells.map_err(|e| syntax(n, e.to_string()))?;
            if cells.len() != dim {
                return Err(syntax(n, format!("expected {dim} entries")));
            }
            rows.push(cells);
        }
        let m = Matrix::from_rows(&ring, rows).ok_or_else(|| syntax(n, "malformed matrix"))?;
        fam.set(gen, m);
    }
    Ok(fam)
}

fn parse_generator(text: &str, g: &KGraph) -> Result<Generator, String> {
    let (kind, rest) = text.split_at(1.min(text.len()));
    let name = rest
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| format!("bad generator `{text}`"))?;
    match kind {
        "p" => g.vertex(name).map(Generator::P).map_err(|e| e.to_string()),
        "s" => g.edge(name).map(Generator::S).map_err(|e| e.to_string()),
        "t" => g.edge(name).map(Generator::T).map_err(|e| e.to_string()),
        _ => Err(format!("bad generator `{text}`")),
    }
}

/// Serializes a family in family-file syntax.
pub fn write_family(fam: &MatrixKpFamily, g: &KGraph) -> String {
    let mut out = format!("kpfamily dim={}\nring {}\n", fam.dim(), fam.ring());
    for (gen, m) in fam.generators(g) {
        out.push_str(&format!("matrix {}\n{}\n", gen.display(g), m));
    }
    out
}
