//! Eventually periodic infinite paths `x = prefix · cycle · cycle · …`.
//!
//! These are the infinite paths with a finite description. Segments
//! `x(m, n)` are read off a long enough finite unrolling, shifts re-root
//! the unrolling, and equality is decided exactly from two periodic tails.

use std::fmt;

use thiserror::Error;

use crate::kgraph::{Degree, Direction, GraphError, KGraph, Path, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InfPathError {
    #[error("cycle must start and end at s(prefix)")]
    NotACycle,
    #[error("cycle degree {0} must be positive in every coordinate")]
    DegenerateCycle(Degree),
    #[error("segment bounds {0} > {1}")]
    BadSegment(Degree, Degree),
    #[error("expected `prefix;cycle`, got `{0}`")]
    Syntax(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `prefix · cycle^∞`, kept normalized (see [`EvPeriodicPath::new`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EvPeriodicPath {
    prefix: Path,
    cycle: Path,
}

impl EvPeriodicPath {
    /// Builds and normalizes `prefix · cycle^∞`.
    ///
    /// Normal form: the cycle is replaced by its shortest root
    /// (`cycle = root^t`), whole trailing copies of the cycle are absorbed
    /// from the prefix, and then single trailing edges are moved from the
    /// prefix into the cycle while they match the cycle's last edge of
    /// that color. For 1-graphs this is the minimal preperiod with the
    /// primitive period, so equal paths get equal representations.
    pub fn new(g: &KGraph, prefix: Path, cycle: Path) -> Result<Self, InfPathError> {
        if cycle.range() != cycle.source() || cycle.range() != prefix.source() {
            return Err(InfPathError::NotACycle);
        }
        if !cycle.degree().strictly_positive() {
            return Err(InfPathError::DegenerateCycle(cycle.degree().clone()));
        }
        let mut x = EvPeriodicPath { prefix, cycle };
        x.normalize(g)?;
        Ok(x)
    }

    /// The purely periodic path `cycle^∞`.
    pub fn periodic(g: &KGraph, cycle: Path) -> Result<Self, InfPathError> {
        let base = g.vertex_path(cycle.range());
        Self::new(g, base, cycle)
    }

    pub fn prefix(&self) -> &Path {
        &self.prefix
    }

    pub fn cycle(&self) -> &Path {
        &self.cycle
    }

    /// `r(x)`.
    pub fn range(&self) -> VertexId {
        self.prefix.range()
    }

    fn normalize(&mut self, g: &KGraph) -> Result<(), GraphError> {
        // shortest root of the cycle
        let d = self.cycle.degree().0.clone();
        let gcd = d.iter().copied().fold(0u32, gcd);
        for t in (2..=gcd).rev() {
            if gcd % t != 0 {
                continue;
            }
            let root_deg = Degree(d.iter().map(|c| c / t).collect());
            let (root, _) = g.factor(&self.cycle, &root_deg)?;
            if root.source() == root.range() && g.power(&root, t)? == self.cycle {
                self.cycle = root;
                break;
            }
        }
        // absorb whole copies
        while let Some(rest) = self.prefix.degree().checked_sub(self.cycle.degree()) {
            let (head, tail) = g.factor(&self.prefix, &rest)?;
            if tail != self.cycle {
                break;
            }
            self.prefix = head;
        }
        // back off single edges
        'outer: loop {
            for color in 0..g.rank() {
                let unit = Degree::unit(g.rank(), color);
                let (Some(p_rest), Some(c_rest)) = (
                    self.prefix.degree().checked_sub(&unit),
                    self.cycle.degree().checked_sub(&unit),
                ) else {
                    continue;
                };
                let (p_head, p_last) = g.factor(&self.prefix, &p_rest)?;
                let (c_head, c_last) = g.factor(&self.cycle, &c_rest)?;
                if p_last == c_last {
                    self.prefix = p_head;
                    self.cycle = g.compose(&c_last, &c_head)?;
                    continue 'outer;
                }
            }
            break;
        }
        Ok(())
    }

    // prefix · cycle^t with degree at least n
    fn unroll(&self, g: &KGraph, n: &Degree) -> Result<Path, GraphError> {
        let p = self.prefix.degree();
        let c = self.cycle.degree();
        let t =
            n.0.iter()
                .zip(&p.0)
                .zip(&c.0)
                .map(|((&ni, &pi), &ci)| ni.saturating_sub(pi).div_ceil(ci))
                .max()
                .unwrap_or(0);
        let tail = g.power(&self.cycle, t)?;
        g.compose(&self.prefix, &tail)
    }

    /// `x(0, n)`.
    pub fn initial(&self, g: &KGraph, n: &Degree) -> Result<Path, InfPathError> {
        let long = self.unroll(g, n)?;
        Ok(g.factor(&long, n)?.0)
    }

    /// `x(m, n)` for `m <= n`.
    pub fn segment(&self, g: &KGraph, m: &Degree, n: &Degree) -> Result<Path, InfPathError> {
        if !m.le(n) {
            return Err(InfPathError::BadSegment(m.clone(), n.clone()));
        }
        let head = self.initial(g, n)?;
        Ok(g.factor(&head, m)?.1)
    }

    /// `σ^p(x)`.
    pub fn shift(&self, g: &KGraph, p: &Degree) -> Result<EvPeriodicPath, InfPathError> {
        let long = self.unroll(g, p)?;
        let (_, rest) = g.factor(&long, p)?;
        EvPeriodicPath::new(g, rest, self.cycle.clone())
    }

    /// `αx` for `s(α) = r(x)`.
    pub fn prepend(&self, g: &KGraph, alpha: &Path) -> Result<EvPeriodicPath, InfPathError> {
        let prefix = g.compose(alpha, &self.prefix)?;
        EvPeriodicPath::new(g, prefix, self.cycle.clone())
    }

    /// `x ∈ Z(μ)`.
    pub fn in_cylinder(&self, g: &KGraph, mu: &Path) -> Result<bool, InfPathError> {
        if mu.range() != self.range() {
            return Ok(false);
        }
        Ok(self.initial(g, mu.degree())? == *mu)
    }

    /// Decides `x = y` as infinite paths.
    ///
    /// Let `M = d(prefix_x) ∨ d(prefix_y)`, `P`, `P'` the cycle degrees.
    /// Then `x = y` iff `x(0,M) = y(0,M)` and the purely periodic tails
    /// `z = σ^M x`, `z' = σ^M y` agree, and `z = z'` iff `z'(0,P) = z(0,P)`
    /// and `z'` has period `P`, which in turn is a comparison of two
    /// `P'`-periodic paths on their first `P'` block.
    pub fn same_as(&self, g: &KGraph, other: &EvPeriodicPath) -> Result<bool, InfPathError> {
        if self.range() != other.range() {
            return Ok(false);
        }
        if self == other {
            return Ok(true);
        }
        let m = self.prefix.degree().join(other.prefix.degree());
        if self.initial(g, &m)? != other.initial(g, &m)? {
            return Ok(false);
        }
        let (p, p2) = (self.cycle.degree(), other.cycle.degree());
        let z = self.shift(g, &m)?;
        let z2 = other.shift(g, &m)?;
        if z.initial(g, p)? != z2.initial(g, p)? {
            return Ok(false);
        }
        Ok(z2.shift(g, p)?.initial(g, p2)? == z2.initial(g, p2)?)
    }

    /// Every representable path is periodic; returns `(p, q)` with
    /// `p != q` and `σ^p(x) = σ^q(x)`.
    pub fn period_witness(&self) -> (Degree, Degree) {
        let p = self.prefix.degree().clone();
        let q = &p + self.cycle.degree();
        (p, q)
    }

    /// `σ^p(x) = σ^q(x)` for some `p != q`, checked at
    /// [`period_witness`](Self::period_witness).
    pub fn is_periodic(&self, g: &KGraph) -> Result<bool, InfPathError> {
        let (p, q) = self.period_witness();
        self.shift(g, &p)?.same_as(g, &self.shift(g, &q)?)
    }

    /// `prefix;cycle` with dot-separated edge names.
    pub fn display<'a>(&'a self, g: &'a KGraph) -> impl fmt::Display + 'a {
        DisplayInf { g, x: self }
    }

    pub fn parse(g: &KGraph, text: &str) -> Result<EvPeriodicPath, InfPathError> {
        let (p, c) = text
            .split_once(';')
            .ok_or_else(|| InfPathError::Syntax(text.to_string()))?;
        let prefix = g.parse_path(p)?;
        let cycle = g.parse_path(c)?;
        EvPeriodicPath::new(g, prefix, cycle)
    }
}

struct DisplayInf<'a> {
    g: &'a KGraph,
    x: &'a EvPeriodicPath,
}

impl fmt::Display for DisplayInf<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{};{}",
            self.g.format_path(&self.x.prefix),
            self.g.format_path(&self.x.cycle)
        )
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// When every vertex reachable from `v` receives exactly one edge of each
/// color, `vΛ^∞` is a single point; returns it.
pub fn sole_infinite_path(g: &KGraph, v: VertexId) -> Option<EvPeriodicPath> {
    let k = g.rank();
    let unique = g
        .reachable_from(v)
        .iter()
        .all(|&w| (0..k).all(|c| g.edges_into(w, c).len() == 1));
    if !unique {
        return None;
    }
    let step = Degree::ones(k);
    let mut visited = vec![v];
    let mut steps: Vec<Path> = Vec::new();
    let mut at = v;
    loop {
        let next = g.enumerate_paths(at, &step, Direction::Range).ok()?.pop()?;
        at = next.source();
        steps.push(next);
        if let Some(i) = visited.iter().position(|&w| w == at) {
            let compose_all = |ps: &[Path], base: VertexId| {
                ps.iter()
                    .try_fold(g.vertex_path(base), |acc, p| g.compose(&acc, p))
                    .ok()
            };
            let prefix = compose_all(&steps[..i], v)?;
            let cycle = compose_all(&steps[i..], visited[i])?;
            return EvPeriodicPath::new(g, prefix, cycle).ok();
        }
        visited.push(at);
    }
}

/// Eventually periodic paths at `v` whose cycle runs along the diagonal:
/// for each `π ∈ vΛ^{t·1}` and each `i < t` with `s(π(0, i·1)) = s(π)`,
/// the path `π(0,i·1) · π(i·1, t·1)^∞`. May contain repeats.
pub fn diagonal_candidates_at(g: &KGraph, v: VertexId, t: u32) -> Vec<EvPeriodicPath> {
    let k = g.rank();
    let Ok(paths) = g.enumerate_paths(v, &Degree::diagonal(k, t), Direction::Range) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for pi in paths {
        for i in 0..t {
            let Ok((head, tail)) = g.factor(&pi, &Degree::diagonal(k, i)) else {
                continue;
            };
            if head.source() != pi.source() {
                continue;
            }
            if let Ok(x) = EvPeriodicPath::new(g, head, tail) {
                out.push(x);
            }
        }
    }
    out
}

/// [`diagonal_candidates_at`] for `t = 1..=max_t`, deduplicated, in
/// discovery order.
pub fn diagonal_candidates(g: &KGraph, v: VertexId, max_t: u32) -> Vec<EvPeriodicPath> {
    let mut out: Vec<EvPeriodicPath> = Vec::new();
    for t in 1..=max_t {
        for x in diagonal_candidates_at(g, v, t) {
            if !out.iter().any(|y| y.same_as(g, &x).unwrap_or(false)) {
                out.push(x);
            }
        }
    }
    out
}
