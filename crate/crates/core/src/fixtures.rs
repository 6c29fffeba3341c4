//! The four reference graphs shipped under `fixtures/`.

use crate::format::parse_graph_file;
use crate::kgraph::KGraph;

pub const G1_SOURCE: &str = include_str!("../../../fixtures/G1.kg");
pub const G2_SOURCE: &str = include_str!("../../../fixtures/G2.kg");
pub const G3_SOURCE: &str = include_str!("../../../fixtures/G3.kg");
pub const G4_SOURCE: &str = include_str!("../../../fixtures/G4.kg");

fn load(src: &str) -> KGraph {
    parse_graph_file(src).expect("shipped fixture parses").graph
}

/// One vertex, one loop.
pub fn g1() -> KGraph {
    load(G1_SOURCE)
}

/// One vertex, two loops.
pub fn g2() -> KGraph {
    load(G2_SOURCE)
}

/// One vertex, a color-1 loop and a color-2 loop that commute.
pub fn g3() -> KGraph {
    load(G3_SOURCE)
}

/// A two-vertex cycle without entry.
pub fn g4() -> KGraph {
    load(G4_SOURCE)
}

/// Looks a fixture up by name (`G1`..`G4`, case-insensitive).
pub fn by_name(name: &str) -> Option<&'static str> {
    match name.to_ascii_uppercase().as_str() {
        "G1" => Some(G1_SOURCE),
        "G2" => Some(G2_SOURCE),
        "G3" => Some(G3_SOURCE),
        "G4" => Some(G4_SOURCE),
        _ => None,
    }
}
