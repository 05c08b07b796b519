//! Desk-scale stable transfer: abstract Paley–Wiener and Schwartz spaces on
//! component families, Fourier isomorphisms, pullback operators, elliptic
//! character blocks with pseudocoefficients, and fully explicit transfer
//! kernels for split tori, complex-group descent, and SL2(R).
//!
//! The crate is `no_std`-compatible (with `alloc`); all floating point
//! transcendentals go through `num-traits`/`libm` when the `std` feature is
//! disabled. Everything here is pure computation: IO, configuration, and the
//! command line live in the companion `stk-cli` crate.
//!
//! Determinism contract: all summations run in a fixed order (lexicographic
//! over lattice points or grid indices), so results are bitwise independent
//! of threading and iteration order in callers.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod abelian;
pub mod elliptic;
pub mod fourier;
pub mod functions;
pub mod mat;
pub mod pullback;
pub mod quad;
pub mod sl2;
pub mod snf;
pub mod spaces;
pub mod torus;

pub use num_complex::Complex64;

/// Shared scalar alias; every transform and character in this crate is
/// complex-valued.
pub type C64 = Complex64;
