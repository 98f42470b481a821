//! Exact-arithmetic toolkit for Jacobi-Perron continued fractions,
//! pseudo-lattices with their GL_n(Z) action, Bratteli diagrams of toric
//! AF-algebras, and stable-isomorphism verdicts between them.
//!
//! The crate is organized along the pipeline:
//!
//! * [`exact`] — rationals, real number-field elements and tracked floats
//!   with error-free floors and sign tests;
//! * [`cfrac`] — Euclid, regular continued fractions and the Jacobi-Perron
//!   algorithm in digit and matrix form, with periodicity detection;
//! * [`lattice`] — pseudo-lattices, the unimodular basis-change action,
//!   projectivization, and exact Z-module equality via Hermite normal form;
//! * [`bratteli`] — Bratteli diagrams of toric AF-algebras, telescoping,
//!   level dimensions and the K0 state;
//! * [`afstable`] — stable-isomorphism verdicts (decisive at rank 2,
//!   witness-based above);
//! * [`sampler`] — a deterministic seeded experiment measuring the JPA
//!   convergence rate over random vectors.

pub mod afstable;
pub mod bratteli;
pub mod cfrac;
pub mod error;
pub mod exact;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod sampler;

pub use afstable::{stable_iso, tail_equivalent, verify_witness, Outcome, StableIsoOptions, StableIsoVerdict, Witness};
pub use bratteli::{build_toric_af, k0_state, level_dimensions, telescope, BratteliDiagram, ToricAfAlgebra};
pub use cfrac::{
    convergence_diagnostic, convergents, detect_period, euclid, jpa_expand, jpa_expand_detecting,
    jpa_step, regular_cf, DigitVector, JpaExpansion, JpaMatrix, JpaStep, Termination,
};
pub use error::{Error, Result};
pub use exact::{parse::parse_exact_real, parse::parse_exact_vector, ExactReal, FieldContext, TrackedFloat};
pub use lattice::{
    basis_change, hnf, lift, module_coords, module_equal, projectivize, BasisChange, ModuleCoords,
    ProjectivePseudoLattice, PseudoLattice,
};
pub use matrix::IntMatrix;
pub use sampler::{sample_genericity, GenericityParams, GenericityReport};
