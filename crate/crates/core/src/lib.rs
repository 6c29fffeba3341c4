//! Exact symbolic computation in Kumjian-Pask algebras of finite k-graphs.
//!
//! Graphs are given by a colored skeleton plus factorization squares
//! ([`kgraph`]); elements of `KP_R(Λ)` are finite combinations of
//! `s_α s_{β*}` with exact coefficients ([`ring`], [`kpalg`]). On top of
//! that sit the diagonal ([`diagonal`]), cycline pairs and the subalgebra
//! `M` ([`cycline`]), and the uniqueness machinery ([`uniqueness`]).

pub mod cli;
pub mod cycline;
pub mod diagonal;
pub mod fixtures;
pub mod format;
pub mod infpath;
pub mod kgraph;
pub mod kpalg;
pub mod matrix;
pub mod representation;
pub mod ring;
pub mod sampling;
pub mod uniqueness;

pub use kgraph::{Degree, Grade, KGraph, KGraphPresentation, Path};
pub use kpalg::{KpAlgebra, KpElement, SpanningTerm};
pub use ring::{RingElem, RingSpec};
