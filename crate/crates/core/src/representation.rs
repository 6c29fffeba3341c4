//! Kumjian-Pask families of matrices and the homomorphisms they induce.

use std::fmt;

use crate::kgraph::{Degree, Direction, EdgeId, KGraph, Path, VertexId};
use crate::kpalg::{KpAlgebra, KpElement, KpError};
use crate::matrix::Matrix;
use crate::ring::RingSpec;

/// A generator of `KP_R(Λ)`: `p_v`, `s_e` or `s_{e*}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    P(VertexId),
    S(EdgeId),
    T(EdgeId),
}

impl Generator {
    pub fn display<'a>(&'a self, g: &'a KGraph) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Generator, &'a KGraph);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                match *self.0 {
                    Generator::P(v) => write!(f, "p[{}]", self.1.vertex_name(v)),
                    Generator::S(e) => write!(f, "s[{}]", self.1.edge_name(e)),
                    Generator::T(e) => write!(f, "t[{}]", self.1.edge_name(e)),
                }
            }
        }
        D(self, g)
    }
}

/// Matrices `Q_v`, `T_e`, `T_{e*}` of one dimension over one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixKpFamily {
    ring: RingSpec,
    dim: usize,
    graph: u64,
    q: Vec<Matrix>,
    t: Vec<Matrix>,
    t_star: Vec<Matrix>,
}

impl MatrixKpFamily {
    /// Every generator sent to the zero matrix.
    pub fn zero(g: &KGraph, ring: RingSpec, dim: usize) -> Self {
        let z = Matrix::zero(&ring, dim);
        MatrixKpFamily {
            dim,
            graph: g.fingerprint(),
            q: vec![z.clone(); g.num_vertices()],
            t: vec![z.clone(); g.num_edges()],
            t_star: vec![z; g.num_edges()],
            ring,
        }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, gen: Generator) -> &Matrix {
        match gen {
            Generator::P(v) => &self.q[v.0 as usize],
            Generator::S(e) => &self.t[e.0 as usize],
            Generator::T(e) => &self.t_star[e.0 as usize],
        }
    }

    /// Panics if `m` has the wrong dimension or ring.
    pub fn set(&mut self, gen: Generator, m: Matrix) {
        assert_eq!(m.dim(), self.dim, "dimension mismatch");
        assert_eq!(m.ring(), &self.ring, "ring mismatch");
        match gen {
            Generator::P(v) => self.q[v.0 as usize] = m,
            Generator::S(e) => self.t[e.0 as usize] = m,
            Generator::T(e) => self.t_star[e.0 as usize] = m,
        }
    }

    pub fn with(mut self, gen: Generator, m: Matrix) -> Self {
        self.set(gen, m);
        self
    }

    /// All generators in order `p`, `s`, `t`.
    pub fn generators(&self, g: &KGraph) -> Vec<(Generator, &Matrix)> {
        let mut out = Vec::new();
        out.extend(
            g.vertices()
                .map(|v| (Generator::P(v), self.get(Generator::P(v)))),
        );
        out.extend(
            g.edges()
                .map(|e| (Generator::S(e), self.get(Generator::S(e)))),
        );
        out.extend(
            g.edges()
                .map(|e| (Generator::T(e), self.get(Generator::T(e)))),
        );
        out
    }

    /// `T_λ`, the product of edge matrices along `λ` (`Q_v` for a vertex).
    pub fn path_matrix(&self, lambda: &Path) -> Matrix {
        let mut acc = self.q[lambda.range().0 as usize].clone();
        for &e in lambda.edges() {
            acc = acc.mul(&self.t[e.0 as usize]);
        }
        acc
    }

    /// `T_{λ*} = T_{e_n*} ⋯ T_{e_1*}`.
    pub fn ghost_matrix(&self, lambda: &Path) -> Matrix {
        let mut acc = self.q[lambda.range().0 as usize].clone();
        for &e in lambda.edges() {
            acc = self.t_star[e.0 as usize].mul(&acc);
        }
        acc
    }

    /// `π_{Q,T}(a) = Σ r T_α T_{β*}`.
    pub fn apply(&self, alg: &KpAlgebra, a: &KpElement) -> Result<Matrix, KpError> {
        if a.ring() != &self.ring || alg.ring() != &self.ring {
            return Err(KpError::RingMismatch(self.ring.clone(), a.ring().clone()));
        }
        if alg.graph().fingerprint() != self.graph {
            return Err(KpError::GraphMismatch);
        }
        let mut acc = Matrix::zero(&self.ring, self.dim);
        for (t, r) in a.terms() {
            let m = self
                .path_matrix(t.alpha())
                .mul(&self.ghost_matrix(t.beta()));
            acc = acc.add(&m.scale(r));
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FamilyReport {
    pub violations: Vec<String>,
}

impl FamilyReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        f.write_str("invalid:")?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Checks (KP1)-(KP4): orthogonal idempotents, edge-level composition and
/// square relations (and their ghost duals), `T_{e*}T_f = δ_{e,f} Q_{s(e)}`
/// for same-colored edges, and `Q_v = Σ_{e ∈ vΛ^{e_i}} T_e T_{e*}` per
/// color. The path-level forms of (KP3)/(KP4) are spot-checked up to
/// degree `(2,…,2)`.
pub fn validate_kp_family(fam: &MatrixKpFamily, g: &KGraph) -> FamilyReport {
    let mut report = FamilyReport::default();
    if fam.graph != g.fingerprint() {
        report
            .violations
            .push("family was built for a different graph".into());
        return report;
    }
    let name = |gen: Generator| gen.display(g).to_string();
    let zero = Matrix::zero(&fam.ring, fam.dim);
    let q = |v: VertexId| fam.get(Generator::P(v));
    let t = |e: EdgeId| fam.get(Generator::S(e));
    let ts = |e: EdgeId| fam.get(Generator::T(e));

    for v in g.vertices() {
        for w in g.vertices() {
            let prod = q(v).mul(q(w));
            let want = if v == w { q(v) } else { &zero };
            if prod != *want {
                report.violations.push(format!(
                    "(KP1) fails: Q_{} Q_{} != {}",
                    g.vertex_name(v),
                    g.vertex_name(w),
                    if v == w {
                        format!("Q_{}", g.vertex_name(v))
                    } else {
                        "0".into()
                    }
                ));
            }
        }
    }

    for e in g.edges() {
        let (r, s) = (q(g.edge_range(e)), q(g.edge_source(e)));
        let n = g.edge_name(e);
        if r.mul(t(e)) != *t(e) || t(e).mul(s) != *t(e) {
            report.violations.push(format!(
                "(KP2) fails: Q_r(e) T_e = T_e = T_e Q_s(e) for e = {n}"
            ));
        }
        if s.mul(ts(e)) != *ts(e) || ts(e).mul(r) != *ts(e) {
            report.violations.push(format!(
                "(KP2) fails: Q_s(e) T_{{e*}} = T_{{e*}} = T_{{e*}} Q_r(e) for e = {n}"
            ));
        }
    }
    for sq in &g.presentation().squares {
        let ids: Option<Vec<EdgeId>> = [&sq.e, &sq.f, &sq.f2, &sq.e2]
            .iter()
            .map(|x| g.edge(x).ok())
            .collect();
        let Some(ids) = ids else { continue };
        let (e, f, f2, e2) = (ids[0], ids[1], ids[2], ids[3]);
        if t(e).mul(t(f)) != t(f2).mul(t(e2)) {
            report.violations.push(format!(
                "(KP2) fails: T_{} T_{} != T_{} T_{}",
                sq.e, sq.f, sq.f2, sq.e2
            ));
        }
        if ts(f).mul(ts(e)) != ts(e2).mul(ts(f2)) {
            report.violations.push(format!(
                "(KP2) fails: T_{{{}*}} T_{{{}*}} != T_{{{}*}} T_{{{}*}}",
                sq.f, sq.e, sq.e2, sq.f2
            ));
        }
    }

    for e in g.edges() {
        for f in g.edges().filter(|&f| g.color(f) == g.color(e)) {
            let prod = ts(e).mul(t(f));
            let want = if e == f { q(g.edge_source(e)) } else { &zero };
            if prod != *want {
                report.violations.push(format!(
                    "(KP3) fails: {} {} != {}",
                    name(Generator::T(e)),
                    name(Generator::S(f)),
                    if e == f {
                        format!("Q_{}", g.vertex_name(g.edge_source(e)))
                    } else {
                        "0".into()
                    }
                ));
            }
        }
    }

    for v in g.vertices() {
        for c in 0..g.rank() {
            let sum = g
                .edges_into(v, c)
                .iter()
                .fold(zero.clone(), |acc, &e| acc.add(&t(e).mul(ts(e))));
            if sum != *q(v) {
                report.violations.push(format!(
                    "(KP4) fails: Q_{} != Σ T_e T_{{e*}} over color-{} edges into {}",
                    g.vertex_name(v),
                    c + 1,
                    g.vertex_name(v)
                ));
            }
        }
    }

    if report.is_valid() {
        spot_check_paths(fam, g, &mut report);
    }
    report
}

fn spot_check_paths(fam: &MatrixKpFamily, g: &KGraph, report: &mut FamilyReport) {
    let zero = Matrix::zero(&fam.ring, fam.dim);
    for n in Degree::all_below(&Degree::diagonal(g.rank(), 2)) {
        for v in g.vertices() {
            let paths = g
                .enumerate_paths(v, &n, Direction::Range)
                .expect("rank matches");
            let sum = paths.iter().fold(zero.clone(), |acc, l| {
                acc.add(&fam.path_matrix(l).mul(&fam.ghost_matrix(l)))
            });
            if sum != *fam.get(Generator::P(v)) {
                report.violations.push(format!(
                    "(KP4) fails at degree {n}, vertex {}",
                    g.vertex_name(v)
                ));
            }
            for l in &paths {
                for m in &paths {
                    let prod = fam.ghost_matrix(l).mul(&fam.path_matrix(m));
                    let want = if l == m {
                        fam.get(Generator::P(l.source())).clone()
                    } else {
                        zero.clone()
                    };
                    if prod != want {
                        report.violations.push(format!(
                            "(KP3) fails for paths {} and {}",
                            g.format_path(l),
                            g.format_path(m)
                        ));
                    }
                }
            }
        }
    }
}

/// A ring homomorphism out of `KP_R(Λ)` that can decide whether an
/// element lies in its kernel.
pub trait Representation {
    fn name(&self) -> String;
    fn annihilates(&self, alg: &KpAlgebra, a: &KpElement) -> Result<bool, KpError>;
}

impl Representation for MatrixKpFamily {
    fn name(&self) -> String {
        format!("matrix family of dimension {} over {}", self.dim, self.ring)
    }

    fn annihilates(&self, alg: &KpAlgebra, a: &KpElement) -> Result<bool, KpError> {
        Ok(self.apply(alg, a)?.is_zero())
    }
}

/// The identity map of `KP_R(Λ)`; injective.
#[derive(Debug, Clone, Copy, Default)]
pub struct Universal;

impl Representation for Universal {
    fn name(&self) -> String {
        "universal representation (identity)".into()
    }

    fn annihilates(&self, alg: &KpAlgebra, a: &KpElement) -> Result<bool, KpError> {
        alg.is_zero(a)
    }
}

/// The matrix-unit family on the 2-cycle: `Q_u = E11`, `Q_v = E22`,
/// `T_e = E12`, `T_{e*} = E21`, `T_f = E21`, `T_{f*} = E12`.
/// Expects vertices `u`, `v` and edges `e: v → u`, `f: u → v`.
pub fn two_cycle_units(g: &KGraph, ring: &RingSpec) -> Option<MatrixKpFamily> {
    let (u, v) = (g.vertex("u").ok()?, g.vertex("v").ok()?);
    let (e, f) = (g.edge("e").ok()?, g.edge("f").ok()?);
    let unit = |i, j| Matrix::unit(ring, 2, i, j);
    Some(
        MatrixKpFamily::zero(g, ring.clone(), 2)
            .with(Generator::P(u), unit(0, 0))
            .with(Generator::P(v), unit(1, 1))
            .with(Generator::S(e), unit(0, 1))
            .with(Generator::T(e), unit(1, 0))
            .with(Generator::S(f), unit(1, 0))
            .with(Generator::T(f), unit(0, 1)),
    )
}

/// The swap family on the loop: `Q_v = I`, `T_e = T_{e*} = [[0,1],[1,0]]`.
pub fn loop_swap(g: &KGraph, ring: &RingSpec) -> Option<MatrixKpFamily> {
    let v = g.vertex("v").ok()?;
    let e = g.edge("e").ok()?;
    let swap = Matrix::unit(ring, 2, 0, 1).add(&Matrix::unit(ring, 2, 1, 0));
    Some(
        MatrixKpFamily::zero(g, ring.clone(), 2)
            .with(Generator::P(v), Matrix::identity(ring, 2))
            .with(Generator::S(e), swap.clone())
            .with(Generator::T(e), swap),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::format::parse_element;

    #[test]
    fn reference_families_validate() {
        let q = RingSpec::Rationals;
        let g4 = fixtures::g4();
        assert!(validate_kp_family(&two_cycle_units(&g4, &q).unwrap(), &g4).is_valid());
        let g1 = fixtures::g1();
        assert!(validate_kp_family(&loop_swap(&g1, &q).unwrap(), &g1).is_valid());
    }

    #[test]
    fn zero_edge_matrix_breaks_kp3() {
        let q = RingSpec::Rationals;
        let g1 = fixtures::g1();
        let e = g1.edge("e").unwrap();
        let fam = loop_swap(&g1, &q)
            .unwrap()
            .with(Generator::S(e), Matrix::zero(&q, 2));
        let report = validate_kp_family(&fam, &g1);
        assert!(!report.is_valid());
        assert!(
            report
                .violations
                .iter()
                .any(|v| v.starts_with("(KP3) fails: t[e] s[e] != Q_v")),
            "{report}"
        );
    }

    #[test]
    fn apply_examples() {
        let q = RingSpec::Rationals;
        let g4 = fixtures::g4();
        let alg = KpAlgebra::new(&g4, q.clone());
        let fam = two_cycle_units(&g4, &q).unwrap();
        let a = parse_element("s[e.f] - p[u]", &alg).unwrap().0;
        assert!(fam.apply(&alg, &a).unwrap().is_zero());
        let pu = parse_element("p[u]", &alg).unwrap().0;
        assert_eq!(fam.apply(&alg, &pu).unwrap(), Matrix::unit(&q, 2, 0, 0));

        let g1 = fixtures::g1();
        let alg1 = KpAlgebra::new(&g1, q.clone());
        let fam1 = loop_swap(&g1, &q).unwrap();
        let ee = parse_element("s[e.e]", &alg1).unwrap().0;
        assert_eq!(fam1.apply(&alg1, &ee).unwrap(), Matrix::identity(&q, 2));
    }
}
