//! Cycline pairs, the cycline subalgebra `M`, and aperiodicity.
//!
//! `(α, β)` is cycline when `s_{αγ}s_{(αγ)*} = s_{βγ}s_{(βγ)*}` for every
//! `γ ∈ s(α)Λ`, equivalently `αx = βx` for every `x ∈ s(α)Λ^∞`. For
//! 1-graphs this is decided exactly by the cycle-without-entry rule; for
//! higher rank a finite witness refutes it, a single-point fiber decides
//! it, and otherwise the verdict is `unknown`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::diagonal::same_cylinder;
use crate::infpath::{sole_infinite_path, InfPathError};
use crate::kgraph::{Degree, Direction, GraphError, KGraph, Path, VertexId};
use crate::kpalg::{KpAlgebra, KpElement, KpError, SpanningTerm};

pub const DEFAULT_DEPTH: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclineError {
    #[error("s({0}) != s({1})")]
    SourceMismatch(String, String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] KpError),
    #[error(transparent)]
    InfPath(#[from] InfPathError),
    #[error("{0}")]
    Diagonal(String),
}

impl From<crate::diagonal::DiagonalError> for CyclineError {
    fn from(e: crate::diagonal::DiagonalError) -> Self {
        CyclineError::Diagonal(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyclineStatus {
    Cycline,
    NotCycline,
    Unknown,
}

impl fmt::Display for CyclineStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CyclineStatus::Cycline => "cycline",
            CyclineStatus::NotCycline => "not-cycline",
            CyclineStatus::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclineVerdict {
    pub status: CyclineStatus,
    /// A `γ` with `s_{αγ}s_{(αγ)*} != s_{βγ}s_{(βγ)*}`; set iff not cycline.
    pub witness: Option<Path>,
    pub certificate: String,
    pub depth: u32,
}

impl CyclineVerdict {
    pub fn is_cycline(&self) -> bool {
        self.status == CyclineStatus::Cycline
    }

    fn cycline(certificate: String, depth: u32) -> Self {
        CyclineVerdict {
            status: CyclineStatus::Cycline,
            witness: None,
            certificate,
            depth,
        }
    }
}

fn check_sources(g: &KGraph, alpha: &Path, beta: &Path) -> Result<(), CyclineError> {
    if alpha.source() != beta.source() {
        return Err(CyclineError::SourceMismatch(
            g.format_path(alpha),
            g.format_path(beta),
        ));
    }
    Ok(())
}

/// Cycle `c` (1-graph) none of whose vertices receives an edge other than `c`'s own.
pub fn cycle_has_no_entry(g: &KGraph, c: &Path) -> bool {
    c.range() == c.source()
        && !c.is_vertex()
        && c.edges()
            .iter()
            .all(|&e| g.edges_into(g.edge_range(e), 0).len() == 1)
}

/// First `γ ∈ s(α)Λ^n`, `n <= depth·1` in canonical order, with
/// `Z(αγ) != Z(βγ)`.
pub fn find_witness(
    g: &KGraph,
    alpha: &Path,
    beta: &Path,
    depth: u32,
) -> Result<Option<Path>, CyclineError> {
    check_sources(g, alpha, beta)?;
    for n in Degree::all_below(&Degree::diagonal(g.rank(), depth)) {
        for gamma in g.enumerate_paths(alpha.source(), &n, Direction::Range)? {
            let ag = g.compose(alpha, &gamma)?;
            let bg = g.compose(beta, &gamma)?;
            if !same_cylinder(g, &ag, &bg)? {
                return Ok(Some(gamma));
            }
        }
    }
    Ok(None)
}

/// The rank-independent checker: trivial pair, single-point fiber
/// certificate, then bounded witness search.
pub fn bounded_cycline(
    g: &KGraph,
    alpha: &Path,
    beta: &Path,
    depth: u32,
) -> Result<CyclineVerdict, CyclineError> {
    check_sources(g, alpha, beta)?;
    if alpha == beta {
        return Ok(CyclineVerdict::cycline("α = β".into(), depth));
    }
    if let Some(x) = sole_infinite_path(g, alpha.source()) {
        let ax = x.prepend(g, alpha)?;
        let bx = x.prepend(g, beta)?;
        if ax.same_as(g, &bx)? {
            return Ok(CyclineVerdict::cycline(
                format!(
                    "single infinite path {} at {}, αx = βx",
                    x.display(g),
                    g.vertex_name(alpha.source())
                ),
                depth,
            ));
        }
        let gamma = g.vertex_path(alpha.source());
        return Ok(CyclineVerdict {
            status: CyclineStatus::NotCycline,
            witness: Some(gamma),
            certificate: format!("single infinite path {}, αx != βx", x.display(g)),
            depth,
        });
    }
    if let Some(gamma) = find_witness(g, alpha, beta, depth)? {
        return Ok(CyclineVerdict {
            status: CyclineStatus::NotCycline,
            witness: Some(gamma),
            certificate: "projections differ".into(),
            depth,
        });
    }
    Ok(CyclineVerdict {
        status: CyclineStatus::Unknown,
        witness: None,
        certificate: format!(
            "no witness with degree <= {}",
            Degree::diagonal(g.rank(), depth)
        ),
        depth,
    })
}

// α = β c with c a cycle without entry
fn extends_by_closed_cycle(
    g: &KGraph,
    long: &Path,
    short: &Path,
) -> Result<Option<Path>, GraphError> {
    if !short.degree().le(long.degree()) || long.range() != short.range() {
        return Ok(None);
    }
    let (head, c) = g.factor(long, short.degree())?;
    Ok((head == *short && cycle_has_no_entry(g, &c)).then_some(c))
}

/// Cycline verdict for `(α, β)`: exact for 1-graphs, see [`bounded_cycline`] otherwise.
pub fn is_cycline(
    g: &KGraph,
    alpha: &Path,
    beta: &Path,
    depth: u32,
) -> Result<CyclineVerdict, CyclineError> {
    check_sources(g, alpha, beta)?;
    if g.rank() != 1 {
        return bounded_cycline(g, alpha, beta, depth);
    }
    if alpha == beta {
        return Ok(CyclineVerdict::cycline("α = β".into(), depth));
    }
    if let Some(c) = extends_by_closed_cycle(g, alpha, beta)? {
        return Ok(CyclineVerdict::cycline(
            format!("α = β·c, c = {} has no entry", g.format_path(&c)),
            depth,
        ));
    }
    if let Some(c) = extends_by_closed_cycle(g, beta, alpha)? {
        return Ok(CyclineVerdict::cycline(
            format!("β = α·c, c = {} has no entry", g.format_path(&c)),
            depth,
        ));
    }
    let witness = find_witness(g, alpha, beta, depth.max(1))?;
    Ok(CyclineVerdict {
        status: CyclineStatus::NotCycline,
        witness,
        certificate: "neither path extends the other by a cycle without entry".into(),
        depth,
    })
}

/// Every `(α, β)` with `d(α), d(β) <= bound` and `s(α) = s(β)`, with verdicts.
pub fn cycline_pairs_up_to(
    g: &KGraph,
    bound: &Degree,
    depth: u32,
) -> Result<Vec<(Path, Path, CyclineVerdict)>, CyclineError> {
    let paths = g.paths_up_to(bound);
    let mut out = Vec::new();
    for a in &paths {
        for b in paths.iter().filter(|b| b.source() == a.source()) {
            out.push((a.clone(), b.clone(), is_cycline(g, a, b, depth)?));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Yes => "yes",
            Membership::No => "no",
            Membership::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub status: Membership,
    /// The per-grade normal form that was inspected.
    pub normal_form: KpElement,
    pub terms: Vec<(SpanningTerm, CyclineVerdict)>,
}

/// `a ∈ M`: every term of the per-grade normal form is a cycline pair.
pub fn is_in_m(
    alg: &KpAlgebra,
    a: &KpElement,
    depth: u32,
) -> Result<MembershipVerdict, CyclineError> {
    let g = alg.graph();
    let nf = alg.graded_normal_form(a)?;
    let mut terms = Vec::new();
    let mut status = Membership::Yes;
    for (t, _) in nf.terms() {
        let v = is_cycline(g, t.alpha(), t.beta(), depth)?;
        match v.status {
            CyclineStatus::NotCycline => status = Membership::No,
            CyclineStatus::Unknown if status == Membership::Yes => status = Membership::Unknown,
            _ => {}
        }
        terms.push((t.clone(), v));
    }
    Ok(MembershipVerdict {
        status,
        normal_form: nf,
        terms,
    })
}

/// First `μ` (degree at most `bound`, canonical order) with
/// `a s_μ s_{μ*} != s_μ s_{μ*} a`.
pub fn commutant_witness(
    alg: &KpAlgebra,
    a: &KpElement,
    bound: &Degree,
) -> Result<Option<Path>, KpError> {
    for mu in alg.graph().paths_up_to(bound) {
        if !alg.commute(a, &alg.projection(&mu))? {
            return Ok(Some(mu));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aperiodicity {
    Aperiodic,
    NotAperiodic,
    Unknown,
}

impl fmt::Display for Aperiodicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aperiodicity::Aperiodic => "aperiodic",
            Aperiodicity::NotAperiodic => "not-aperiodic",
            Aperiodicity::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperiodicityVerdict {
    pub status: Aperiodicity,
    pub detail: String,
}

/// A cycle without entry, if the 1-graph has one (range-side entries).
pub fn cycle_without_entry(g: &KGraph) -> Option<Path> {
    let sole_in = |w: VertexId| match g.edges_into(w, 0) {
        [e] => Some(*e),
        _ => None,
    };
    for v in g.vertices() {
        let mut edges = Vec::new();
        let mut at = v;
        while let Some(e) = sole_in(at) {
            edges.push(e);
            at = g.edge_source(e);
            if at == v {
                let mut c = g.vertex_path(v);
                for &e in &edges {
                    c = g.compose(&c, &g.edge_path(e)).expect("consecutive edges");
                }
                return Some(c);
            }
            if edges.len() > g.num_vertices() {
                break;
            }
        }
    }
    None
}

/// Aperiodicity verdict. Exact for 1-graphs; for higher rank, pairs of
/// degree at most `min(depth, 2)·1` are classified.
pub fn is_aperiodic(g: &KGraph, depth: u32) -> Result<AperiodicityVerdict, CyclineError> {
    if g.rank() == 1 {
        return Ok(match cycle_without_entry(g) {
            Some(c) => AperiodicityVerdict {
                status: Aperiodicity::NotAperiodic,
                detail: format!("cycle {} has no entry", g.format_path(&c)),
            },
            None => AperiodicityVerdict {
                status: Aperiodicity::Aperiodic,
                detail: "every cycle has an entry".into(),
            },
        });
    }
    let bound = Degree::diagonal(g.rank(), depth.min(2));
    let mut undecided = 0;
    for (a, b, v) in cycline_pairs_up_to(g, &bound, depth)? {
        if a == b {
            continue;
        }
        match v.status {
            CyclineStatus::Cycline => {
                return Ok(AperiodicityVerdict {
                    status: Aperiodicity::NotAperiodic,
                    detail: format!("({}, {}) is cycline", g.format_path(&a), g.format_path(&b)),
                })
            }
            CyclineStatus::Unknown => undecided += 1,
            CyclineStatus::NotCycline => {}
        }
    }
    if undecided > 0 {
        return Ok(AperiodicityVerdict {
            status: Aperiodicity::Unknown,
            detail: format!("{undecided} pairs up to degree {bound} undecided"),
        });
    }
    Ok(AperiodicityVerdict {
        status: Aperiodicity::Aperiodic,
        detail: format!("only diagonal cycline pairs up to degree {bound}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::format::parse_element;
    use crate::ring::RingSpec;

    fn path(g: &KGraph, s: &str) -> Path {
        g.parse_path(s).unwrap()
    }

    #[test]
    fn verdict_examples() {
        let g1 = fixtures::g1();
        let v = is_cycline(&g1, &path(&g1, "e"), &path(&g1, "v"), 6).unwrap();
        assert_eq!(v.status, CyclineStatus::Cycline);
        assert_eq!(v.certificate, "α = β·c, c = e has no entry");

        let g2 = fixtures::g2();
        let v = is_cycline(&g2, &path(&g2, "e"), &path(&g2, "f"), 6).unwrap();
        assert_eq!(v.status, CyclineStatus::NotCycline);
        assert_eq!(v.witness, Some(path(&g2, "v")));

        let g3 = fixtures::g3();
        let v = is_cycline(&g3, &path(&g3, "a"), &path(&g3, "b"), 6).unwrap();
        assert_eq!(v.status, CyclineStatus::Cycline);

        let g4 = fixtures::g4();
        let v = is_cycline(&g4, &path(&g4, "e"), &path(&g4, "e"), 6).unwrap();
        assert!(v.is_cycline());
        assert!(matches!(
            is_cycline(&g4, &path(&g4, "e"), &path(&g4, "f"), 6),
            Err(CyclineError::SourceMismatch(..))
        ));
    }

    #[test]
    fn pair_enumeration() {
        let g4 = fixtures::g4();
        let pairs = cycline_pairs_up_to(&g4, &Degree(vec![2]), 6).unwrap();
        let mut off: Vec<(String, String)> = pairs
            .iter()
            .filter(|(a, b, v)| v.is_cycline() && a != b)
            .map(|(a, b, _)| (g4.format_path(a), g4.format_path(b)))
            .collect();
        off.sort();
        let want: Vec<(String, String)> = [("e.f", "u"), ("f.e", "v"), ("u", "e.f"), ("v", "f.e")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(off, want);
    }

    #[test]
    fn membership_examples() {
        let g2 = fixtures::g2();
        let alg = KpAlgebra::new(&g2, RingSpec::Integers);
        let a = parse_element("s[e]t[f]", &alg).unwrap().0;
        assert_eq!(is_in_m(&alg, &a, 6).unwrap().status, Membership::No);
        let p = parse_element("p[v]", &alg).unwrap().0;
        assert_eq!(is_in_m(&alg, &p, 6).unwrap().status, Membership::Yes);

        let g1 = fixtures::g1();
        let alg1 = KpAlgebra::new(&g1, RingSpec::Integers);
        let a = parse_element("s[e.e] - p[v]", &alg1).unwrap().0;
        assert_eq!(is_in_m(&alg1, &a, 6).unwrap().status, Membership::Yes);
    }

    #[test]
    fn commutant_examples() {
        let g2 = fixtures::g2();
        let alg = KpAlgebra::new(&g2, RingSpec::Integers);
        let a = parse_element("s[e]t[f]", &alg).unwrap().0;
        assert_eq!(
            commutant_witness(&alg, &a, &Degree(vec![3])).unwrap(),
            Some(path(&g2, "e"))
        );
        let p = parse_element("p[v]", &alg).unwrap().0;
        assert_eq!(commutant_witness(&alg, &p, &Degree(vec![3])).unwrap(), None);

        let g1 = fixtures::g1();
        let alg1 = KpAlgebra::new(&g1, RingSpec::Integers);
        let a = parse_element("s[e]", &alg1).unwrap().0;
        assert_eq!(
            commutant_witness(&alg1, &a, &Degree(vec![4])).unwrap(),
            None
        );
    }

    #[test]
    fn aperiodicity() {
        assert_eq!(
            is_aperiodic(&fixtures::g2(), 6).unwrap().status,
            Aperiodicity::Aperiodic
        );
        assert_eq!(
            is_aperiodic(&fixtures::g1(), 6).unwrap().status,
            Aperiodicity::NotAperiodic
        );
        let v = is_aperiodic(&fixtures::g4(), 6).unwrap();
        assert_eq!(v.status, Aperiodicity::NotAperiodic);
        assert_eq!(v.detail, "cycle e.f has no entry");
        assert_eq!(
            is_aperiodic(&fixtures::g3(), 6).unwrap().status,
            Aperiodicity::NotAperiodic
        );
    }
}
