//! The diagonal subalgebra `D = span{s_μ s_{μ*}}` and its function model.
//!
//! `π(s_μ s_{μ*}) = 1_{Z(μ)}` identifies `D` with the span of cylinder
//! indicators. At a common depth the cylinders `Z(μ)`, `d(μ) = n`, are
//! pairwise disjoint, so functions compare coefficientwise there.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::infpath::{EvPeriodicPath, InfPathError};
use crate::kgraph::{Degree, Direction, Grade, GraphError, KGraph, Path};
use crate::kpalg::{KpAlgebra, KpElement, KpError};
use crate::ring::{RingElem, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagonalError {
    #[error("element is not in the diagonal")]
    NotDiagonal,
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),
    #[error(transparent)]
    Algebra(#[from] KpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    InfPath(#[from] InfPathError),
}

/// `Σ r_μ 1_{Z(μ)}` with every `μ` of degree `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderFunction {
    ring: RingSpec,
    depth: Degree,
    combination: BTreeMap<Path, RingElem>,
}

impl CylinderFunction {
    pub fn zero(ring: &RingSpec, k: usize) -> Self {
        CylinderFunction {
            ring: ring.clone(),
            depth: Degree::zero(k),
            combination: BTreeMap::new(),
        }
    }

    /// `1_{Z(μ)}`.
    pub fn indicator(ring: &RingSpec, mu: &Path) -> Self {
        CylinderFunction {
            ring: ring.clone(),
            depth: mu.degree().clone(),
            combination: BTreeMap::from([(mu.clone(), ring.one())]),
        }
    }

    /// `Σ_{v} 1_{Z(v)}`, the constant function 1.
    pub fn one(g: &KGraph, ring: &RingSpec) -> Self {
        let combination = g
            .vertices()
            .map(|v| (g.vertex_path(v), ring.one()))
            .collect();
        CylinderFunction {
            ring: ring.clone(),
            depth: Degree::zero(g.rank()),
            combination,
        }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn depth(&self) -> &Degree {
        &self.depth
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &RingElem)> {
        self.combination.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.combination.is_empty()
    }

    fn check(&self, other: &CylinderFunction) -> Result<(), DiagonalError> {
        if self.ring != other.ring {
            return Err(DiagonalError::RingMismatch(
                self.ring.clone(),
                other.ring.clone(),
            ));
        }
        Ok(())
    }

    /// Rewrites at depth `n >= depth` via `Z(μ) = ⊔_{λ ∈ s(μ)Λ^{n-d(μ)}} Z(μλ)`.
    pub fn refine(&self, g: &KGraph, n: &Degree) -> Result<CylinderFunction, DiagonalError> {
        let ext = n
            .checked_sub(&self.depth)
            .ok_or_else(|| GraphError::DegreeNotBelow(self.depth.clone(), n.clone()))?;
        let mut combination = BTreeMap::new();
        for (mu, r) in &self.combination {
            for lambda in g.enumerate_paths(mu.source(), &ext, Direction::Range)? {
                combination.insert(g.compose(mu, &lambda)?, r.clone());
            }
        }
        Ok(CylinderFunction {
            ring: self.ring.clone(),
            depth: n.clone(),
            combination,
        })
    }

    fn aligned(
        &self,
        g: &KGraph,
        other: &CylinderFunction,
    ) -> Result<(CylinderFunction, CylinderFunction), DiagonalError> {
        self.check(other)?;
        let n = self.depth.join(&other.depth);
        Ok((self.refine(g, &n)?, other.refine(g, &n)?))
    }

    pub fn add(
        &self,
        g: &KGraph,
        other: &CylinderFunction,
    ) -> Result<CylinderFunction, DiagonalError> {
        let (mut a, b) = self.aligned(g, other)?;
        for (mu, r) in b.combination {
            let sum = a.combination.get(&mu).map_or(r.clone(), |x| x + &r);
            if sum.is_zero() {
                a.combination.remove(&mu);
            } else {
                a.combination.insert(mu, sum);
            }
        }
        Ok(a)
    }

    pub fn scale(&self, r: &RingElem) -> CylinderFunction {
        let combination = self
            .combination
            .iter()
            .map(|(mu, c)| (mu.clone(), c * r))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        CylinderFunction {
            ring: self.ring.clone(),
            depth: self.depth.clone(),
            combination,
        }
    }

    /// Pointwise product: `1_{Z(μ)} 1_{Z(ν)} = 1_{Z(μ) ∩ Z(ν)}`.
    pub fn mul(
        &self,
        g: &KGraph,
        other: &CylinderFunction,
    ) -> Result<CylinderFunction, DiagonalError> {
        let (a, b) = self.aligned(g, other)?;
        let combination = a
            .combination
            .iter()
            .filter_map(|(mu, r)| b.combination.get(mu).map(|s| (mu.clone(), r * s)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(CylinderFunction {
            ring: a.ring,
            depth: a.depth,
            combination,
        })
    }

    /// Equality as functions on `Λ^∞`.
    pub fn equals(&self, g: &KGraph, other: &CylinderFunction) -> Result<bool, DiagonalError> {
        let (a, b) = self.aligned(g, other)?;
        Ok(a.combination == b.combination)
    }

    /// Value at an infinite path.
    pub fn evaluate(&self, g: &KGraph, x: &EvPeriodicPath) -> Result<RingElem, DiagonalError> {
        let mu = x.initial(g, &self.depth)?;
        Ok(self
            .combination
            .get(&mu)
            .cloned()
            .unwrap_or_else(|| self.ring.zero()))
    }

    /// `Z[e] + 2 * Z[f]`; `0` when empty.
    pub fn display<'a>(&'a self, g: &'a KGraph) -> impl fmt::Display + 'a {
        struct D<'a>(&'a CylinderFunction, &'a KGraph);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.combination.is_empty() {
                    return f.write_str("0");
                }
                for (i, (mu, r)) in self.0.combination.iter().enumerate() {
                    let negative = r.is_negative();
                    let mag = if negative { r.abs() } else { r.clone() };
                    match (i, negative) {
                        (0, true) => f.write_str("-")?,
                        (0, false) => {}
                        (_, true) => f.write_str(" - ")?,
                        (_, false) => f.write_str(" + ")?,
                    }
                    if !mag.is_one() {
                        write!(f, "{mag} * ")?;
                    }
                    write!(f, "Z[{}]", self.1.format_path(mu))?;
                }
                Ok(())
            }
        }
        D(self, g)
    }
}

/// `a ∈ D`: every nonzero graded component vanishes and the degree-0
/// component, in normal form, has only terms with `α = β`.
pub fn is_in_diagonal(alg: &KpAlgebra, a: &KpElement) -> Result<bool, KpError> {
    let k = alg.graph().rank();
    let zero = Grade::zero(k);
    let rest = alg.sub(a, &alg.graded_component(a, &zero)?)?;
    if !alg.is_zero(&rest)? {
        return Ok(false);
    }
    let a0 = alg.graded_component(a, &zero)?;
    let nf = alg.normal_form(&a0, &alg.beta_join(&a0))?;
    let diagonal = nf.terms().all(|(t, _)| t.is_diagonal());
    Ok(diagonal)
}

/// `π: D → A_D`, `s_μ s_{μ*} ↦ 1_{Z(μ)}`.
pub fn pi(alg: &KpAlgebra, d: &KpElement) -> Result<CylinderFunction, DiagonalError> {
    if !is_in_diagonal(alg, d)? {
        return Err(DiagonalError::NotDiagonal);
    }
    let k = alg.graph().rank();
    let a0 = alg.graded_component(d, &Grade::zero(k))?;
    let m = alg.beta_join(&a0);
    let nf = alg.normal_form(&a0, &m)?;
    let combination = nf
        .terms()
        .map(|(t, r)| (t.alpha().clone(), r.clone()))
        .collect();
    Ok(CylinderFunction {
        ring: alg.ring().clone(),
        depth: m,
        combination,
    })
}

/// `π^{-1}`.
pub fn to_element(alg: &KpAlgebra, f: &CylinderFunction) -> Result<KpElement, DiagonalError> {
    let mut out = alg.zero();
    for (mu, r) in f.terms() {
        out = alg.add(&out, &alg.monomial(r.clone(), mu.clone(), mu.clone())?)?;
    }
    Ok(out)
}

/// `Z(μ) = Z(ν)` as sets.
pub fn same_cylinder(g: &KGraph, mu: &Path, nu: &Path) -> Result<bool, DiagonalError> {
    let ring = RingSpec::Integers;
    CylinderFunction::indicator(&ring, mu).equals(g, &CylinderFunction::indicator(&ring, nu))
}
