//! Exact arithmetic in the Kumjian-Pask algebra `KP_R(Λ)`.
//!
//! Elements are finite combinations of spanning terms `s_α s_{β*}` with
//! `s(α) = s(β)`. Products expand through minimal common extensions,
//! equality goes through per-grade normal forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kgraph::{Degree, Direction, Grade, GraphError, KGraph, Path, VertexId};
use crate::ring::{RingElem, RingError, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KpError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),
    #[error("elements belong to different graphs")]
    GraphMismatch,
    #[error("s({0}) != s({1})")]
    SourceMismatch(String, String),
    #[error("normal form degree {0} is below the beta degree {1}")]
    DegreeTooLow(Degree, Degree),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `s_α s_{β*}`. Ordered by grade `d(α) - d(β)`, then β, then α.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningTerm {
    alpha: Path,
    beta: Path,
}

impl SpanningTerm {
    pub fn new(alpha: Path, beta: Path) -> Option<Self> {
        (alpha.source() == beta.source()).then_some(SpanningTerm { alpha, beta })
    }

    pub fn alpha(&self) -> &Path {
        &self.alpha
    }

    pub fn beta(&self) -> &Path {
        &self.beta
    }

    pub fn grade(&self) -> Grade {
        self.alpha.degree() - self.beta.degree()
    }

    /// `α = β`, i.e. a projection `s_α s_{α*}` (or `p_v`).
    pub fn is_diagonal(&self) -> bool {
        self.alpha == self.beta
    }

    pub fn swapped(&self) -> SpanningTerm {
        SpanningTerm {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }
}

impl Ord for SpanningTerm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.beta.cmp(&other.beta))
            .then_with(|| self.alpha.cmp(&other.alpha))
    }
}

impl PartialOrd for SpanningTerm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite combination `Σ r_{α,β} s_α s_{β*}` with no zero coefficients.
///
/// `PartialEq` is structural. Two elements with different stored terms can
/// still be equal in the algebra; use [`KpAlgebra::equals`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KpElement {
    ring: RingSpec,
    graph: u64,
    terms: BTreeMap<SpanningTerm, RingElem>,
}

impl KpElement {
    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SpanningTerm, &RingElem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// No stored terms. An element can be zero in the algebra without
    /// this being true.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, term: &SpanningTerm) -> Option<&RingElem> {
        self.terms.get(term)
    }

    pub fn grades(&self) -> BTreeSet<Grade> {
        self.terms.keys().map(SpanningTerm::grade).collect()
    }

    fn accumulate(&mut self, term: SpanningTerm, r: RingElem) {
        if r.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(r);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + &r;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }
}

/// `KP_R(Λ)` for a fixed graph and ring.
#[derive(Debug, Clone)]
pub struct KpAlgebra<'g> {
    graph: &'g KGraph,
    ring: RingSpec,
}

impl<'g> KpAlgebra<'g> {
    pub fn new(graph: &'g KGraph, ring: RingSpec) -> Self {
        KpAlgebra { graph, ring }
    }

    pub fn graph(&self) -> &'g KGraph {
        self.graph
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn zero(&self) -> KpElement {
        KpElement {
            ring: self.ring.clone(),
            graph: self.graph.fingerprint(),
            terms: BTreeMap::new(),
        }
    }

    /// `Σ_v p_v`, the unit.
    pub fn one(&self) -> KpElement {
        let mut out = self.zero();
        for v in self.graph.vertices() {
            let p = self.graph.vertex_path(v);
            out.accumulate(
                SpanningTerm {
                    alpha: p.clone(),
                    beta: p,
                },
                self.ring.one(),
            );
        }
        out
    }

    /// `r · s_α s_{β*}`.
    pub fn monomial(&self, r: RingElem, alpha: Path, beta: Path) -> Result<KpElement, KpError> {
        self.check_scalar(&r)?;
        if alpha.source() != beta.source() {
            return Err(KpError::SourceMismatch(
                self.graph.format_path(&alpha),
                self.graph.format_path(&beta),
            ));
        }
        let mut out = self.zero();
        out.accumulate(SpanningTerm { alpha, beta }, r);
        Ok(out)
    }

    /// `s_α s_{β*}`.
    pub fn term(&self, alpha: &Path, beta: &Path) -> Result<KpElement, KpError> {
        self.monomial(self.ring.one(), alpha.clone(), beta.clone())
    }

    /// Embeds a stored term.
    pub fn from_term(&self, t: &SpanningTerm, r: RingElem) -> Result<KpElement, KpError> {
        self.monomial(r, t.alpha.clone(), t.beta.clone())
    }

    pub fn p(&self, v: VertexId) -> KpElement {
        let p = self.graph.vertex_path(v);
        self.term(&p, &p).expect("vertex term")
    }

    /// `s_λ`.
    pub fn s(&self, lambda: &Path) -> KpElement {
        let v = self.graph.vertex_path(lambda.source());
        self.term(lambda, &v).expect("s(λ) = s(s(λ))")
    }

    /// `s_{λ*}`.
    pub fn t(&self, lambda: &Path) -> KpElement {
        let v = self.graph.vertex_path(lambda.source());
        self.term(&v, lambda).expect("s(λ) = s(s(λ))")
    }

    /// `s_λ s_{λ*}`.
    pub fn projection(&self, lambda: &Path) -> KpElement {
        self.term(lambda, lambda).expect("same path")
    }

    /// `r · 1`.
    pub fn scalar(&self, r: RingElem) -> Result<KpElement, KpError> {
        self.scale(&self.one(), &r)
    }

    fn check_scalar(&self, r: &RingElem) -> Result<(), KpError> {
        if r.spec() != self.ring {
            return Err(KpError::RingMismatch(self.ring.clone(), r.spec()));
        }
        Ok(())
    }

    fn check(&self, a: &KpElement) -> Result<(), KpError> {
        if a.ring != self.ring {
            return Err(KpError::RingMismatch(self.ring.clone(), a.ring.clone()));
        }
        if a.graph != self.graph.fingerprint() {
            return Err(KpError::GraphMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &KpElement, b: &KpElement) -> Result<KpElement, KpError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = a.clone();
        for (t, r) in &b.terms {
            out.accumulate(t.clone(), r.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, a: &KpElement, b: &KpElement) -> Result<KpElement, KpError> {
        self.add(a, &self.neg(b)?)
    }

    pub fn neg(&self, a: &KpElement) -> Result<KpElement, KpError> {
        self.check(a)?;
        let mut out = self.zero();
        for (t, r) in &a.terms {
            out.accumulate(t.clone(), -r);
        }
        Ok(out)
    }

    pub fn scale(&self, a: &KpElement, r: &RingElem) -> Result<KpElement, KpError> {
        self.check(a)?;
        self.check_scalar(r)?;
        let mut out = self.zero();
        for (t, c) in &a.terms {
            out.accumulate(t.clone(), c * r);
        }
        Ok(out)
    }

    /// Bilinear extension of
    /// `(s_α s_{β*})(s_μ s_{ν*}) = Σ_{(γ,η) ∈ mce(β,μ)} s_{αγ} s_{(νη)*}`.
    pub fn mul(&self, a: &KpElement, b: &KpElement) -> Result<KpElement, KpError> {
        self.check(a)?;
        self.check(b)?;
        let g = self.graph;
        let mut out = self.zero();
        for (t1, r1) in &a.terms {
            for (t2, r2) in &b.terms {
                let r = r1 * r2;
                if r.is_zero() {
                    continue;
                }
                for (gamma, eta) in g.mce(&t1.beta, &t2.alpha) {
                    let alpha = g.compose(&t1.alpha, &gamma)?;
                    let beta = g.compose(&t2.beta, &eta)?;
                    out.accumulate(SpanningTerm { alpha, beta }, r.clone());
                }
            }
        }
        Ok(out)
    }

    /// Product of a sequence, left to right.
    pub fn product<'a>(
        &self,
        factors: impl IntoIterator<Item = &'a KpElement>,
    ) -> Result<KpElement, KpError> {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// `a* = Σ r_{α,β} s_β s_{α*}`.
    pub fn star(&self, a: &KpElement) -> Result<KpElement, KpError> {
        self.check(a)?;
        let mut out = self.zero();
        for (t, r) in &a.terms {
            out.accumulate(t.swapped(), r.clone());
        }
        Ok(out)
    }

    /// Terms with `d(α) - d(β) = n`.
    pub fn graded_component(&self, a: &KpElement, n: &Grade) -> Result<KpElement, KpError> {
        self.check(a)?;
        let mut out = self.zero();
        for (t, r) in &a.terms {
            if t.grade() == *n {
                out.accumulate(t.clone(), r.clone());
            }
        }
        Ok(out)
    }

    /// Join of all beta degrees (zero for the empty element).
    pub fn beta_join(&self, a: &KpElement) -> Degree {
        a.terms
            .keys()
            .fold(Degree::zero(self.graph.rank()), |acc, t| {
                acc.join(t.beta.degree())
            })
    }

    /// Rewrites every term with `β` of degree exactly `m` using
    /// `s_α s_{β*} = Σ_{γ ∈ s(β)Λ^{m-d(β)}} s_{αγ} s_{(βγ)*}`.
    pub fn normal_form(&self, a: &KpElement, m: &Degree) -> Result<KpElement, KpError> {
        self.check(a)?;
        let g = self.graph;
        let mut out = self.zero();
        for (t, r) in &a.terms {
            let ext = m
                .checked_sub(t.beta.degree())
                .ok_or_else(|| KpError::DegreeTooLow(m.clone(), t.beta.degree().clone()))?;
            if ext.is_zero() {
                out.accumulate(t.clone(), r.clone());
                continue;
            }
            for gamma in g.enumerate_paths(t.beta.source(), &ext, Direction::Range)? {
                let alpha = g.compose(&t.alpha, &gamma)?;
                let beta = g.compose(&t.beta, &gamma)?;
                out.accumulate(SpanningTerm { alpha, beta }, r.clone());
            }
        }
        Ok(out)
    }

    /// Each graded component in normal form at its own beta join.
    pub fn graded_normal_form(&self, a: &KpElement) -> Result<KpElement, KpError> {
        let mut out = self.zero();
        for n in a.grades() {
            let c = self.graded_component(a, &n)?;
            let m = self.beta_join(&c);
            let nf = self.normal_form(&c, &m)?;
            out = self.add(&out, &nf)?;
        }
        Ok(out)
    }

    /// Decides `a = 0` in the algebra.
    pub fn is_zero(&self, a: &KpElement) -> Result<bool, KpError> {
        Ok(self.graded_normal_form(a)?.is_empty())
    }

    /// Decides `a = b` in the algebra.
    pub fn equals(&self, a: &KpElement, b: &KpElement) -> Result<bool, KpError> {
        self.is_zero(&self.sub(a, b)?)
    }

    /// `a b = b a`.
    pub fn commute(&self, a: &KpElement, b: &KpElement) -> Result<bool, KpError> {
        self.equals(&self.mul(a, b)?, &self.mul(b, a)?)
    }

    /// `2 s[e]t[f] - p[v]`; `0` for the empty element.
    pub fn show(&self, a: &KpElement) -> String {
        if a.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (t, r)) in a.terms.iter().enumerate() {
            let negative = r.is_negative();
            let mag = if negative { r.abs() } else { r.clone() };
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push(' ');
            }
            out.push_str(&self.show_term(t));
        }
        out
    }

    pub fn show_term(&self, t: &SpanningTerm) -> String {
        let g = self.graph;
        match (t.alpha.is_vertex(), t.beta.is_vertex()) {
            (true, true) => format!("p[{}]", g.vertex_name(t.alpha.range())),
            (false, true) => format!("s[{}]", g.format_path(&t.alpha)),
            (true, false) => format!("t[{}]", g.format_path(&t.beta)),
            (false, false) => format!(
                "s[{}]t[{}]",
                g.format_path(&t.alpha),
                g.format_path(&t.beta)
            ),
        }
    }

    pub fn display<'a>(&'a self, a: &'a KpElement) -> impl fmt::Display + 'a {
        struct D<'a, 'g>(&'a KpAlgebra<'g>, &'a KpElement);
        impl fmt::Display for D<'_, '_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.show(self.1))
            }
        }
        D(self, a)
    }
}
