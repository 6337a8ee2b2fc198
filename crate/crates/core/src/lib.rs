//! Low-energy spectra and ground-state distributions of `N` attracting bosons
//! on an `M`-site ring with a single-site well at site 0.
//!
//! Three solvers share the same parameters:
//!
//! * [`exact`] diagonalizes the full Fock-space Hamiltonian;
//! * [`si`] treats the strongly interacting, localized regime as a one-body
//!   problem in an effective well of depth `w = UN + V0`;
//! * [`sf`] expands around the `k = 0` condensate (Bogoliubov scheme).

pub mod error;
pub mod exact;
mod levels;
pub mod model;
pub mod numerics;
pub mod sf;
pub mod si;

pub use error::{Error, Result};
pub use model::{
    classify_regime, fock_dimension, mode_grid, DerivedParams, ModeGrid, ModelParams, RegimeReport,
    SeparatrixSide,
};
