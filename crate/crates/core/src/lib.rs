//! Coformer screening: molecular graphs, descriptors, gradient-boosted
//! property models, multi-objective evolution and generation metrics.

pub mod dataset;
pub mod descriptors;
pub mod evolve;
pub mod gbt;
pub mod generator;
pub mod metrics;
pub mod molgraph;
pub mod pipeline;
pub mod rng;

pub use molgraph::{parse_smiles, Element, MolError, Molecule};
