//! Algorithms for involutive index-set groups, planar pure braids, the
//! wall-crossing homomorphisms between them, geometric event tracking
//! of moving point configurations, and hyperplane-arrangement loop
//! invariants.
//!
//! Shared types are re-exported at the crate root; submodules carry the
//! algorithms and their documentation.

pub mod artin;
pub mod braid;
pub mod combi;
pub mod f2;
pub mod gamma;
pub mod geom;
pub mod gnk;
pub mod homs;
pub mod moduli;
pub mod search;
pub mod tracker;
pub mod words;

pub use artin::artin_equal;
pub use braid::{
    center_word, comb, BraidError, BraidWord, PureBraidGen, PureBraidWord, SigmaGen,
};
pub use f2::{EchelonBasis, F2Vector};
pub use gamma::{enumerate_gamma_generators, GammaGenerator, GammaPresentation, GammaRelation};
pub use gnk::{
    enumerate_generators, parity_vector, GnkGenerator, GnkPresentation, GnkRelation, GroupError,
};
pub use homs::{apply_hom, HomApplication, HomError, HomImage, HomKind, HomSpec, HomWord, Mode};
pub use moduli::{
    validate, Descent, DescentLevel, HyperplaneLoop, ModuliCertificate, ModuliError,
    RawHyperplaneLoop, Violation,
};
pub use search::{SearchBudget, SearchError, Verdict};
pub use tracker::{
    braid_word, g3_word, g4_word, gamma4_word, spherical_reduce, Event, EventKind,
    RawTrajectory, TrackError, TrackMode, TrackedBraid, TrackedWord, Trajectory,
};
pub use words::{GroupWord, Generator, Letter, WordError};
