//! Shared fixtures for the benchmarks.

use paley_core::{CharacterTable, FieldSpec, PaleyGraph};

/// Field, character and graph for the order q = p^k.
pub fn fixture(p: u64, k: u32) -> (FieldSpec, CharacterTable, PaleyGraph) {
    let field = FieldSpec::new(p, k, None).expect("valid field");
    let chi = CharacterTable::build(&field).expect("consistent character");
    let graph = PaleyGraph::build(&field, &chi).expect("q = 1 mod 4");
    (field, chi, graph)
}
