#![allow(dead_code)]

use std::collections::BTreeMap;

use kpw_core::fixtures;
use kpw_core::kgraph::Direction;
use kpw_core::sampling::Sampler;
use kpw_core::{Degree, KGraph, KpAlgebra, KpElement, Path};
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

pub fn all_fixtures() -> Vec<(&'static str, KGraph)> {
    vec![
        ("G1", fixtures::g1()),
        ("G2", fixtures::g2()),
        ("G3", fixtures::g3()),
        ("G4", fixtures::g4()),
    ]
}

pub fn deg(c: &[u32]) -> Degree {
    Degree(c.to_vec())
}

/// Commutative Laurent polynomials in `k` variables, exponent vector to
/// coefficient.
pub type Laurent = BTreeMap<Vec<i64>, BigRational>;

/// On a one-vertex graph with one loop per color, `s_α s_{β*}` goes to
/// `x^{d(α) - d(β)}`.
pub fn to_laurent(a: &KpElement) -> Laurent {
    let mut out = Laurent::new();
    for (t, r) in a.terms() {
        let e: Vec<i64> = t
            .alpha()
            .degree()
            .0
            .iter()
            .zip(&t.beta().degree().0)
            .map(|(x, y)| i64::from(*x) - i64::from(*y))
            .collect();
        let c = r.to_rational().expect("rational coefficients");
        *out.entry(e).or_insert_with(BigRational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn laurent_mul(p: &Laurent, q: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (e1, c1) in p {
        for (e2, c2) in q {
            let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
            *out.entry(e).or_insert_with(BigRational::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Every pair `(α, β)` of extensions with `λα = μβ` and `d(λα) = d(λ) ∨ d(μ)`,
/// by exhaustive search.
pub fn brute_force_mce(g: &KGraph, lambda: &Path, mu: &Path) -> Vec<(Path, Path)> {
    let join = lambda.degree().join(mu.degree());
    let da = join.checked_sub(lambda.degree()).expect("join dominates");
    let db = join.checked_sub(mu.degree()).expect("join dominates");
    let alphas = g
        .enumerate_paths(lambda.source(), &da, Direction::Range)
        .expect("valid vertex");
    let betas = g
        .enumerate_paths(mu.source(), &db, Direction::Range)
        .expect("valid vertex");
    let mut out = Vec::new();
    for a in &alphas {
        for b in &betas {
            let la = g.compose(lambda, a).expect("composable");
            let mb = g.compose(mu, b).expect("composable");
            if la == mb {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out.sort();
    out
}

/// For a 1-graph: `c` is a nontrivial cycle every vertex of which has
/// exactly one incoming edge.
pub fn cycle_without_entry_oracle(g: &KGraph, c: &Path) -> bool {
    if c.is_vertex() || c.range() != c.source() {
        return false;
    }
    c.edges()
        .iter()
        .all(|&e| g.edges_into(g.edge_range(e), 0).len() == 1)
}

/// The cycline rule for 1-graphs, checked by factoring the longer path.
pub fn k1_cycline_oracle(g: &KGraph, alpha: &Path, beta: &Path) -> bool {
    if alpha == beta {
        return true;
    }
    let (long, short) = if alpha.degree().total() >= beta.degree().total() {
        (alpha, beta)
    } else {
        (beta, alpha)
    };
    let Ok((head, tail)) = g.factor(long, short.degree()) else {
        return false;
    };
    head == *short && cycle_without_entry_oracle(g, &tail)
}

pub fn show(alg: &KpAlgebra, a: &KpElement) -> String {
    alg.show(a)
}

/// `(α, β, γ, η)` with `s(α) = s(β)` and `d(γ) = d(η)`, both starting at `s(α)`.
pub fn sandwich_quadruple(g: &KGraph, s: &mut Sampler) -> (Path, Path, Path, Path) {
    let (alpha, beta) = s.pair();
    let n: Vec<u32> = (0..g.rank()).map(|_| s.rng().random_range(0..=2)).collect();
    let ext = g
        .enumerate_paths(alpha.source(), &Degree(n), Direction::Range)
        .unwrap();
    let gamma = ext[s.rng().random_range(0..ext.len())].clone();
    let eta = if s.rng().random_bool(0.5) {
        gamma.clone()
    } else {
        ext[s.rng().random_range(0..ext.len())].clone()
    };
    (alpha, beta, gamma, eta)
}
