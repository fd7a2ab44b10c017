//! Analysis of strictly passive linear time-invariant systems.
//!
//! The crate computes spectral zeros from the passivity Hamiltonian,
//! extremal solutions of the positive-real Riccati equation, positive-real
//! balanced and quasi-balanced realizations, pole/zero/spectral-zero
//! interlacing certificates, and symmetric realizations and Foster networks
//! for functions with interlaced poles and zeros.

pub mod balancing;
pub mod error;
pub mod fmt;
pub mod interlace;
pub mod linops;
pub mod model;
pub mod oracle;
pub mod passivity;
pub mod poly;
pub mod random;
pub mod synth;

pub use balancing::{BalanceForm, BalancedRealization};
pub use error::{Error, Result};
pub use interlace::{EtaScanRow, InterlacingReport, Orientation};
pub use model::{
    order_reals, validate_realization, OrderedReals, PoleResidue, PortSign, RationalFunction, Realization, ResidueSign,
    Spectrum, SymmetryCertificate, SYMMETRY_TOL,
};
pub use oracle::EvenPolynomial;
pub use passivity::{Hamiltonian, StoragePair};
pub use synth::{FosterKind, FosterNetwork};
