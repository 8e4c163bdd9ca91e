//! Exact Fourier-growth computations for query algorithms in the BQP,
//! DQC(k) and ½BQP models.

pub mod bounds;
pub mod decomposition;
pub mod error;
pub mod forrelation;
pub mod fourier;
pub mod linalg;
pub mod models;
pub mod sampling;

pub use error::{Error, Result};
pub use fourier::{FourierSpectrum, SignFamily};
pub use linalg::{ComplexMatrix, IndexSpace, C64};
pub use models::{AlgorithmSpec, HybridSpec, Model, Restriction};
