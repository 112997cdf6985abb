//! Lower bounds on the error probability of adaptive quantum channel
//! discrimination, obtained by simulating channels with port-based
//! teleportation (PBT).
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex Hermitian linear algebra (eigensolves, matrix
//!   functions, trace norm, fidelity, relative entropy, partial trace).
//! - [`channels`]: Kraus channels and their Choi matrices.
//! - [`pbt`]: closed-form PBT numbers, entanglement fidelity and simulation
//!   errors, plus the Choi matrix of a PBT-simulated channel.
//! - [`pbt_oracle`]: a brute-force construction of qubit PBT used to
//!   cross-check the closed forms.
//! - [`discrimination`]: the universal lower bound, its trace-distance
//!   estimators, port-number optimisation and block-protocol bounds.
//! - [`applications`]: optical resolution, quantum illumination, metrology and
//!   key-rate bounds.
//!
//! All quantities are deterministic; nothing in the crate draws random numbers.

#![forbid(unsafe_code)]

pub mod applications;
pub mod channels;
pub mod discrimination;
mod error;
pub mod linalg;
pub mod pbt;
pub mod pbt_oracle;

pub use channels::{ChoiMatrix, KrausChannel};
pub use discrimination::{BoundReport, ParamValue};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, C64};
pub use pbt::{PbtQuantities, Provenance};
pub use pbt_oracle::PbtEnsemble;
