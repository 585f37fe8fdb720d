//! Spectra, composition, brightness, dipole moments and lifetimes of the
//! hybrid light-matter states of a tunnel-coupled double quantum dot
//! embedded in an optical microcavity.
//!
//! One rung of the ladder spans three bare states (the indirect exciton,
//! the direct exciton and the cavity photon) coupled by interdot
//! tunneling J and the radiation-matter constant g. A bias field tunes the
//! indirect exciton through the others; sweeping it maps out avoided
//! crossings, dark and bright dipolariton regimes, and the decay-rate
//! landscape of the open system.
//!
//! The crate is organized as:
//!
//! * [`units`]: dimension-tagged scalars and the ħ/e conversion chain;
//! * [`model`]: device parameters and the two 3×3 rung matrices
//!   (closed-system and open-system);
//! * [`spectral`]: a certified 3×3 complex eigensolver and eigenvector
//!   overlap tracking;
//! * [`polariton`]: Hopfield fractions, bright polariton degree, exciton
//!   dipole moment, decay rates, lifetimes, regime tags;
//! * [`sweep`]: parallel bias sweeps (rayon behind the default
//!   `parallel` feature, with a sequential twin), resonance location and
//!   anticrossing gap refinement;
//! * [`config`] / [`output`]: the `key = value` config format and the
//!   deterministic CSV emitter;
//! * [`validate`]: the built-in invariant suite behind the CLI
//!   `validate` subcommand.

pub mod config;
pub mod error;
pub mod mat3;
pub mod model;
pub mod output;
pub mod polariton;
pub mod spectral;
pub mod sweep;
pub mod units;
pub mod validate;

pub use error::{Error, Result};
