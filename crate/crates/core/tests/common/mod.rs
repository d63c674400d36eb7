//! Helpers shared by the integration tests and the acceptance harness.
#![allow(dead_code)]

pub mod formulas;
pub mod poly;

use geoinv::mappings::{generate, Flags, GenOptions, MappingInstance, MappingKind};
use geoinv::Rational;

pub fn general(dim: usize, seed: u64, flags: Flags) -> MappingInstance<Rational> {
    generate(GenOptions {
        dim,
        seed,
        flags,
        kind: MappingKind::General,
    })
    .expect("generator succeeds")
}
