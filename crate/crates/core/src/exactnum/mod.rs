//! Exact rationals, complex scalars and the small dense kernels shared by the
//! coin, walk and period code.

pub mod dense;
pub mod eig3;
pub mod mat3;
pub mod rational;

pub use dense::{
    dense_eigenvalues, dense_unitarity_defect, distance_from_identity, mat_power_norm_defect,
    multiset_distance, DenseMatrix,
};
pub use eig3::{arg_2pi, eig3_unitary, eigen_residual, eigenpairs3_unitary, CharPoly, DEFAULT_TOL};
pub use mat3::{ComplexF, Mat3, C3, Q3};
pub use rational::{approximate, approximate_by, Rational};
