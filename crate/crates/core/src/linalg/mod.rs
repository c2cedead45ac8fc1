//! Dense matrices, orthogonality checks, a symmetric eigensolver and
//! eigenvalue-cosine extraction.

pub mod dd;
pub mod eigen;
pub mod group;
pub mod io;
pub mod lu;
pub mod matrix;
pub mod signed_log;
pub mod spectrum;

pub use dd::DoubleDouble;
pub use eigen::{jacobi_eigen, symmetric_eigenvalues, EigenWorkspace};
pub use group::{validate_group_element, GroupElement, GroupType, ORTHOGONALITY_TOL};
pub use io::{read_samples, write_samples};
pub use matrix::Matrix;
pub use signed_log::SignedLog;
pub use spectrum::{
    cos_spectrum, cos_spectrum_with, relative_spectrum, relative_spectrum_with, CosSpectrum,
    PAIRING_TOL,
};
