//! Workbench for small-time controllability of the bilinear Schrödinger
//! equation on the unit sphere.
//!
//! The crate has two halves that check each other:
//!
//! * an exact half: [`poly`] implements rational polynomial algebra in the
//!   quotient ring of S² (tangential gradients, the squared-gradient form,
//!   the Laplace-Beltrami operator, iterated commutators) and [`saturation`]
//!   builds the non-decreasing chain of phase spaces H₁ ⊂ H₂ ⊂ … generated
//!   from the dipole potentials x, y, z, with membership certificates and
//!   synthesis plans for target phases;
//!
//! * a numeric half: [`spectral`] provides truncated spherical-harmonic
//!   states, multiplication operators and grid transforms, and
//!   [`propagator`] evolves states under piecewise-constant controls, runs
//!   the conjugated pulse compositions and their convergence studies,
//!   executes synthesis plans, and performs the harmonic transfer
//!   experiments.
//!
//! [`experiments`] wires both halves into reproducible command-line runs
//! with CSV/JSON/SVG outputs and checksummed manifests.
//!
//! Every capability has a runnable example under `examples/`; start with
//! `exact_identities` and `convergence_study`.

pub mod experiments;
pub mod poly;
pub mod propagator;
pub mod saturation;
pub mod spectral;
