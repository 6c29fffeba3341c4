//! Seeded random paths and elements.

use std::collections::HashMap;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kgraph::{Degree, KGraph, Path, VertexId};
use crate::kpalg::{KpAlgebra, KpElement};
use crate::ring::{RingElem, RingSpec};

pub struct Sampler<'g> {
    g: &'g KGraph,
    rng: ChaCha8Rng,
    bound: Degree,
    paths: Vec<Path>,
    by_source: HashMap<VertexId, Vec<Path>>,
}

impl<'g> Sampler<'g> {
    /// Samples paths of degree at most `bound`.
    pub fn new(g: &'g KGraph, bound: Degree, seed: u64) -> Self {
        let paths = g.paths_up_to(&bound);
        let mut by_source: HashMap<VertexId, Vec<Path>> = HashMap::new();
        for p in &paths {
            by_source.entry(p.source()).or_default().push(p.clone());
        }
        Sampler {
            g,
            rng: ChaCha8Rng::seed_from_u64(seed),
            bound,
            paths,
            by_source,
        }
    }

    pub fn graph(&self) -> &'g KGraph {
        self.g
    }

    pub fn bound(&self) -> &Degree {
        &self.bound
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn path(&mut self) -> Path {
        self.paths
            .choose(&mut self.rng)
            .expect("every vertex is a path")
            .clone()
    }

    /// A path with the given source.
    pub fn path_with_source(&mut self, v: VertexId) -> Path {
        self.by_source[&v]
            .choose(&mut self.rng)
            .expect("the vertex itself")
            .clone()
    }

    /// `(α, β)` with `s(α) = s(β)`.
    pub fn pair(&mut self) -> (Path, Path) {
        let a = self.path();
        let b = self.path_with_source(a.source());
        (a, b)
    }

    /// A nonzero scalar of small height.
    pub fn scalar(&mut self, ring: &RingSpec) -> RingElem {
        loop {
            let mut n: i64 = self.rng.random_range(1..=3);
            if self.rng.random_bool(0.5) {
                n = -n;
            }
            let r = match ring {
                RingSpec::Rationals => {
                    let d: i64 = self.rng.random_range(1..=3);
                    ring.from_ratio(n, d).expect("nonzero denominator")
                }
                _ => ring.from_int(n),
            };
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// `Σ r_i s_{α_i} s_{β_i*}` with `1..=max_terms` terms.
    pub fn element(&mut self, alg: &KpAlgebra, max_terms: usize) -> KpElement {
        let n = self.rng.random_range(1..=max_terms.max(1));
        let mut out = alg.zero();
        for _ in 0..n {
            let (a, b) = self.pair();
            let r = self.scalar(alg.ring());
            let t = alg.monomial(r, a, b).expect("sampled from the same graph");
            out = alg.add(&out, &t).expect("same algebra");
        }
        out
    }

    /// `r · s_α s_{β*}`.
    pub fn monomial(&mut self, alg: &KpAlgebra) -> KpElement {
        let (a, b) = self.pair();
        let r = self.scalar(alg.ring());
        alg.monomial(r, a, b).expect("sampled from the same graph")
    }

    /// `Σ r_i s_{μ_i} s_{μ_i*}`.
    pub fn diagonal_element(&mut self, alg: &KpAlgebra, max_terms: usize) -> KpElement {
        let n = self.rng.random_range(1..=max_terms.max(1));
        let mut out = alg.zero();
        for _ in 0..n {
            let mu = self.path();
            let r = self.scalar(alg.ring());
            let t = alg.monomial(r, mu.clone(), mu).expect("same source");
            out = alg.add(&out, &t).expect("same algebra");
        }
        out
    }

    /// Like [`element`](Self::element) but nonzero in the algebra.
    pub fn nonzero_element(&mut self, alg: &KpAlgebra, max_terms: usize) -> KpElement {
        loop {
            let a = self.element(alg, max_terms);
            if !alg.is_zero(&a).expect("same algebra") {
                return a;
            }
        }
    }
}
