//! Exact minimal log discrepancies of toric log varieties.

pub mod error;
pub mod lattice;

pub use error::{Error, Result};
pub use lattice::{Rational, RationalVector, SuperLattice};
pub mod germ;

pub use germ::{Face, LogDiscrepancyFunction, Mld, MldWitness, ToricGerm};
pub mod mld_sets;
pub use mld_sets::{
    enumerate_mld_set, extract_candidate, in_tilde_v, in_v, pairing, realize, shift,
    tilde_v1_classify, transfer_tilde_to_v, CandidatePair, CoefficientSet, EnumeratedMldSet,
    ScaledSet,
};
pub mod accumulation;
pub use accumulation::{
    accumulation_report, closedness_witness, surface_family_term, zero_family_term,
    AccumulationReport, SequenceFamily,
};
pub mod io;
