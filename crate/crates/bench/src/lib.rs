//! Shared fixtures for the benchmarks.

use gl3_voronoi::characters::{enumerate_characters, primitive_characters};
use gl3_voronoi::{DirichletCharacter, HeckeCoefficientModel, ModelOptions};

/// Level-`n` model for the first character modulo `n`.
pub fn model(level: u64, seed: u64) -> HeckeCoefficientModel {
    let psi = enumerate_characters(level).expect("level ≥ 1").remove(0);
    HeckeCoefficientModel::new(&psi, seed, ModelOptions::default()).expect("valid options")
}

/// Last primitive character modulo `c`.
pub fn primitive(c: u64) -> DirichletCharacter {
    primitive_characters(c).expect("modulus ≥ 1").pop().expect("primitive characters exist")
}
