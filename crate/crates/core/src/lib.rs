//! Exact simulation of the two-site Bose–Hubbard hopping Hamiltonian.
//!
//! The crate works in the two-site Fock space with basis kets `|2^α 3^β⟩`
//! ([`fock`]), applies the hopping Hamiltonian `H = â_2†â_3 + â_3†â_2` block
//! by block ([`hamiltonian`]), and builds its eigensystem in closed form
//! ([`eigensystem`]): on the `k`-particle block the vectors
//! `(ĉ†)^m (d̂†)^(k−m)|vac⟩` are eigenvectors with eigenvalue `2m − k`, where
//! `ĉ, d̂ = (â_2 ± â_3)/√2`.
//!
//! On top of that sit two-mode coherent states with their energy statistics
//! ([`coherent`]) and the `e^{iH²t}` dynamics that turn coherent states into
//! cat states at quarter periods ([`dynamics`]). The [`oracle`] module is an
//! independent Jacobi eigensolver used to check the closed forms.
//!
//! ```
//! use dimer::eigensystem::{eigenvalue, eigenvector_normalized};
//! use dimer::hamiltonian::apply_hopping;
//!
//! let v = eigenvector_normalized(4, 3).unwrap();
//! let hv = apply_hopping(&v);
//! let lambda = eigenvalue(4, 3).unwrap() as f64;
//! assert!(hv.max_abs_diff(&v.scale_real(lambda)) < 1e-12);
//! ```
//!
//! A guide with the derivations lives in the `book/` directory of the
//! repository; its code listings are compiled as doc-tests of this crate.

pub mod coherent;
pub mod dense;
pub mod dynamics;
pub mod eigensystem;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod oracle;

pub use num_complex::Complex64;

pub use coherent::{CoherentParams, Convention, EnergyDistribution, TruncationPolicy};
pub use dense::DenseMatrix;
pub use eigensystem::{EigenBasisCoeffs, EigenIndex, Eigenbasis};
pub use error::{Error, Result};
pub use fock::{BasisState, FockVector, KVector, Site};

// Compiles the listings of the guide and the READMEs as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fock-space.md")]
    mod fock_space {}
    #[doc = include_str!("../../../book/src/hamiltonian.md")]
    mod hamiltonian {}
    #[doc = include_str!("../../../book/src/eigensystem.md")]
    mod eigensystem {}
    #[doc = include_str!("../../../book/src/cascade.md")]
    mod cascade {}
    #[doc = include_str!("../../../book/src/coherent-states.md")]
    mod coherent_states {}
    #[doc = include_str!("../../../book/src/cat-states.md")]
    mod cat_states {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod workspace_readme {}
    #[doc = include_str!("../README.md")]
    mod crate_readme {}
}
