//! Dense complex matrices for the 3n-dimensional walk operators.

use nalgebra::DMatrix;

use super::mat3::ComplexF;
use crate::error::{Error, Result};

pub type DenseMatrix = DMatrix<ComplexF>;

/// ‖M − I‖_F.
pub fn distance_from_identity(m: &DenseMatrix) -> f64 {
    let mut s = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            s += (m[(i, j)] - ComplexF::new(target, 0.0)).norm_sqr();
        }
    }
    s.sqrt()
}

/// ‖M†M − I‖_F.
pub fn dense_unitarity_defect(m: &DenseMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{}", m.nrows(), m.ncols())));
    }
    Ok(distance_from_identity(&(m.adjoint() * m)))
}

/// ‖Mᵗ − I‖_F using repeated squaring on the raw product.
pub fn mat_power_norm_defect(m: &DenseMatrix, t: u64) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{}", m.nrows(), m.ncols())));
    }
    let mut acc = DenseMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    let mut e = t;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    Ok(distance_from_identity(&acc))
}

/// Eigenvalues of a general dense complex matrix via nalgebra's Schur form.
///
/// The QR iteration stalls on unitary operators whose spectrum is symmetric
/// under `λ → −λ` (even `n`, odd `a`), since every eigenvalue has the same
/// modulus. Shifting by a fixed off-circle `σ` separates the moduli; `σ` is
/// subtracted again afterwards.
pub fn dense_eigenvalues(m: &DenseMatrix) -> Result<Vec<ComplexF>> {
    let sigma = ComplexF::new(0.37, 0.21);
    let shifted = m + DenseMatrix::identity(m.nrows(), m.ncols()) * sigma;
    let schur = nalgebra::Schur::try_new(shifted, 1e-15, 10_000)
        .ok_or_else(|| Error::NumericalFailure("Schur iteration did not converge".into()))?;
    let t = schur.unpack().1;
    Ok((0..t.nrows()).map(|i| t[(i, i)] - sigma).collect())
}

/// Largest pairing distance after greedily matching each value of `a` to the
/// nearest unused value of `b`. Infinite when the lengths differ.
pub fn multiset_distance(a: &[ComplexF], b: &[ComplexF]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("lengths match");
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn diag(vals: &[ComplexF]) -> DenseMatrix {
        DenseMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(vals))
    }

    #[test]
    fn identity_power_is_exact() {
        let m = DenseMatrix::identity(4, 4);
        assert_eq!(mat_power_norm_defect(&m, 7).unwrap(), 0.0);
    }

    #[test]
    fn sign_flip_squares_to_identity() {
        let m = diag(&[ComplexF::new(-1.0, 0.0), ComplexF::new(1.0, 0.0)]);
        assert_eq!(mat_power_norm_defect(&m, 2).unwrap(), 0.0);
    }

    #[test]
    fn cube_root_of_unity_squared() {
        let w = ComplexF::from_polar(1.0, 2.0 * PI / 3.0);
        let m = diag(&[w, ComplexF::new(1.0, 0.0)]);
        let d = mat_power_norm_defect(&m, 2).unwrap();
        assert!((d - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn non_square_is_rejected() {
        let m = DenseMatrix::zeros(2, 3);
        assert!(matches!(mat_power_norm_defect(&m, 1), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn schur_eigenvalues_of_diagonal() {
        let vals = [ComplexF::new(0.0, 1.0), ComplexF::new(-1.0, 0.0), ComplexF::new(1.0, 0.0)];
        let got = dense_eigenvalues(&diag(&vals)).unwrap();
        assert!(multiset_distance(&vals, &got) < 1e-14);
    }
}
