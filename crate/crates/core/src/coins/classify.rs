//! Decomposition over the permutation bases and family classification.

use super::{check_orthogonal, entry_scale, layout, Basis, Coin3, CoinFamily, Scalar, LAYOUT_TOL};
use crate::error::{Error, Result};
use crate::exactnum::{ComplexF, Mat3, Rational};

/// What [`classify`] learns about a coin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassReport {
    pub family: CoinFamily,
    pub params: [Scalar; 3],
    /// `C` is one of the six permutation matrices.
    pub is_permutation: bool,
    /// `C = (2/3)J − P` for some permutation `P`.
    pub is_grover_type: bool,
    /// `−C` is a permutation matrix.
    pub is_negated_permutation: bool,
    /// `C = P − (2/3)J` for some permutation `P`.
    pub is_negated_grover_type: bool,
    /// Every entry is rational (exactly, or to within `1e-10` with denominator ≤ 10⁴).
    pub is_rational: bool,
    pub det: f64,
}

fn close(a: ComplexF, b: ComplexF, tol: f64) -> bool {
    (a - b).norm() <= tol
}

fn matches_layout(m: &Mat3, basis: Basis, tol: f64) -> bool {
    match m {
        Mat3::Exact(q) => {
            let [x, y, z] = q[0];
            layout(basis, x, y, z) == *q
        }
        Mat3::Float(c) => {
            let [x, y, z] = c[0];
            let want = layout(basis, x, y, z);
            (0..3).all(|i| (0..3).all(|j| close(c[i][j], want[i][j], tol)))
        }
    }
}

/// Writes `M` as `xP1 + yP2 + zP3` or `xP4 + yP5 + zP6`.
///
/// Fails with [`Error::NotPermutative`] when `M` is orthogonal but fits neither
/// layout, which means it is not a linear sum of permutation matrices at all.
pub fn decompose_linear_sum(m: &Mat3) -> Result<crate::coins::LinearSumCoefficients> {
    check_orthogonal(m)?;
    let tol = LAYOUT_TOL * entry_scale(m).sqrt();
    let basis = [Basis::Cyclic, Basis::Transposition]
        .into_iter()
        .find(|&b| matches_layout(m, b, tol))
        .ok_or(Error::NotPermutative)?;
    let [x, y, z] = first_row(m);
    validate_coefficients(&[x, y, z])?;
    Ok(crate::coins::LinearSumCoefficients { basis, x, y, z })
}

fn first_row(m: &Mat3) -> [Scalar; 3] {
    match m {
        Mat3::Exact(q) => q[0].map(Scalar::Exact),
        Mat3::Float(c) => c[0].map(Scalar::Float),
    }
}

/// `x + y + z = ±1` and `x² + y² + z² = 1`, exactly or to `LAYOUT_TOL`.
fn validate_coefficients(p: &[Scalar; 3]) -> Result<i32> {
    if let [Scalar::Exact(x), Scalar::Exact(y), Scalar::Exact(z)] = *p {
        let sum = x.checked_add(&y)?.checked_add(&z)?;
        let sq = x
            .checked_mul(&x)?
            .checked_add(&y.checked_mul(&y)?)?
            .checked_add(&z.checked_mul(&z)?)?;
        let sign = if sum == Rational::ONE {
            1
        } else if sum == Rational::from_integer(-1) {
            -1
        } else {
            return Err(Error::InternalInconsistency(format!("x + y + z = {sum}")));
        };
        if sq != Rational::ONE {
            return Err(Error::InternalInconsistency(format!("x² + y² + z² = {sq}")));
        }
        return Ok(sign);
    }
    let [x, y, z] = p.map(Scalar::to_complex);
    let scale = 1.0 + x.norm_sqr() + y.norm_sqr() + z.norm_sqr();
    let sum = x + y + z;
    let sign = if close(sum, ComplexF::new(1.0, 0.0), LAYOUT_TOL * scale) {
        1
    } else if close(sum, ComplexF::new(-1.0, 0.0), LAYOUT_TOL * scale) {
        -1
    } else {
        return Err(Error::InternalInconsistency(format!("x + y + z = {sum}")));
    };
    let sq = x * x + y * y + z * z;
    if !close(sq, ComplexF::new(1.0, 0.0), LAYOUT_TOL * scale) {
        return Err(Error::InternalInconsistency(format!("x² + y² + z² = {sq}")));
    }
    Ok(sign)
}

/// Is `(x, y, z)` a rearrangement of `target` (exactly for rationals)?
fn is_arrangement(p: &[Scalar; 3], target: [Rational; 3]) -> bool {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    perms.iter().any(|s| {
        (0..3).all(|i| match p[i] {
            Scalar::Exact(v) => v == target[s[i]],
            Scalar::Float(c) => close(c, ComplexF::new(target[s[i]].to_f64(), 0.0), LAYOUT_TOL),
        })
    })
}

fn looks_rational(v: ComplexF) -> bool {
    v.im.abs() <= LAYOUT_TOL && crate::exactnum::approximate(v.re, 10_000, 1e-10).is_some()
}

/// Family, parameters and special-case flags for an orthogonal linear sum.
///
/// The family is read from the basis and the sign of `x + y + z`; the
/// determinant must then agree (+1 for X and W, −1 for Y and Z).
pub fn classify(m: &Mat3) -> Result<ClassReport> {
    let dec = decompose_linear_sum(m)?;
    let params = dec.xyz();
    let sign = validate_coefficients(&params)?;
    let family = CoinFamily::from_parts(dec.basis, sign);

    let det = m.det();
    let want = family.det_sign() as f64;
    if (det - ComplexF::new(want, 0.0)).norm() > 1e-8 * entry_scale(m).powf(1.5) {
        return Err(Error::InternalInconsistency(format!(
            "{family} coin has determinant {det}"
        )));
    }

    let q = |n, d| Rational::new(n, d).expect("nonzero denominator");
    let one = Rational::ONE;
    let zero = Rational::ZERO;
    let is_permutation = is_arrangement(&params, [one, zero, zero]);
    let is_negated_permutation = is_arrangement(&params, [-one, zero, zero]);
    let is_grover_type = is_arrangement(&params, [q(-1, 3), q(2, 3), q(2, 3)]);
    let is_negated_grover_type = is_arrangement(&params, [q(1, 3), q(-2, 3), q(-2, 3)]);
    let is_rational = match m {
        Mat3::Exact(_) => true,
        Mat3::Float(c) => c.iter().flatten().all(|&v| looks_rational(v)),
    };
    Ok(ClassReport {
        family,
        params,
        is_permutation,
        is_grover_type,
        is_negated_permutation,
        is_negated_grover_type,
        is_rational,
        det: det.re,
    })
}

/// Every row is a rearrangement of the first row, entrywise within `tol`.
pub fn is_permutative(m: &Mat3, tol: f64) -> bool {
    let c = m.to_c3();
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    c.iter().skip(1).all(|row| {
        perms
            .iter()
            .any(|s| (0..3).all(|j| close(row[j], c[0][s[j]], tol)))
    })
}

/// Product `AB`, checked against the closure table: cyclic·cyclic and
/// transposition·transposition land in the cyclic basis, mixed products in
/// the transposition basis, and the sum signs multiply.
pub fn multiply(a: &Coin3, b: &Coin3) -> Result<Coin3> {
    let (fa, fb) = match (a.family, b.family) {
        (Some(fa), Some(fb)) => (fa, fb),
        _ => return Err(Error::NotPermutative),
    };
    let matrix = a.matrix.mul(&b.matrix)?;
    check_orthogonal(&matrix)?;
    let report = classify(&matrix)?;
    let basis = if fa.basis() == fb.basis() {
        Basis::Cyclic
    } else {
        Basis::Transposition
    };
    let expected = CoinFamily::from_parts(basis, fa.sum_sign() * fb.sum_sign());
    if report.family != expected {
        return Err(Error::InternalInconsistency(format!(
            "{fa}·{fb} classified as {} instead of {expected}",
            report.family
        )));
    }
    let turns = match (fa, fb, a.turns, b.turns) {
        (CoinFamily::X, CoinFamily::X, Some(s), Some(t)) => Some(s.checked_add(&t)?.fract_floor()),
        _ => None,
    };
    Ok(Coin3 {
        matrix,
        family: Some(report.family),
        params: Some(report.params),
        turns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::{coin_from_theta, grover_type, perm_matrix, PermIndex};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn grover_decomposes_over_the_cyclic_basis() {
        let g = grover_type(PermIndex::P1, false);
        let d = decompose_linear_sum(g.matrix()).unwrap();
        assert_eq!(d.basis, Basis::Cyclic);
        assert_eq!(d.xyz().map(|s| s.exact().unwrap()), [q(-1, 3), q(2, 3), q(2, 3)]);
    }

    #[test]
    fn p4_decomposes_over_the_transposition_basis() {
        let d = decompose_linear_sum(perm_matrix(PermIndex::P4).matrix()).unwrap();
        assert_eq!(d.basis, Basis::Transposition);
        assert_eq!(d.xyz().map(|s| s.exact().unwrap()), [q(1, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn plane_rotation_is_not_permutative() {
        let (s, c) = FRAC_PI_4.sin_cos();
        let rot = Mat3::from_real([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(decompose_linear_sum(&rot), Err(Error::NotPermutative));
        assert!(!is_permutative(&rot, 1e-10));
        let coin = Coin3::from_matrix(rot).unwrap();
        assert_eq!(coin.family(), None);
    }

    #[test]
    fn non_orthogonal_is_rejected() {
        let m = Mat3::from_real([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(decompose_linear_sum(&m), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn classification_flags() {
        let g = classify(grover_type(PermIndex::P1, false).matrix()).unwrap();
        assert_eq!(g.family, CoinFamily::X);
        assert!(g.is_grover_type && !g.is_permutation && g.is_rational);

        let p4 = classify(perm_matrix(PermIndex::P4).matrix()).unwrap();
        assert_eq!(p4.family, CoinFamily::Z);
        assert!(p4.is_permutation);
        assert_eq!(p4.det, -1.0);

        let d1 = classify(coin_from_theta(CoinFamily::X, FRAC_PI_2).matrix()).unwrap();
        assert_eq!(d1.family, CoinFamily::X);
        assert!(!d1.is_permutation && !d1.is_grover_type && !d1.is_rational);

        let ng = classify(grover_type(PermIndex::P2, true).matrix()).unwrap();
        assert!(ng.is_negated_grover_type && !ng.is_grover_type);
        assert_eq!(ng.family.sum_sign(), -1);
        assert_eq!(ng.det, -1.0);
    }

    #[test]
    fn delta_squared_is_grover() {
        let d1 = coin_from_theta(CoinFamily::X, FRAC_PI_2);
        let sq = multiply(&d1, &d1).unwrap();
        assert!(sq.matrix().distance(grover_type(PermIndex::P1, false).matrix()) < 1e-12);
        assert_eq!(sq.family(), Some(CoinFamily::X));
    }

    #[test]
    fn transposition_squares_to_identity() {
        let p4 = perm_matrix(PermIndex::P4);
        let sq = multiply(&p4, &p4).unwrap();
        assert_eq!(*sq.matrix(), Mat3::identity());
        assert_eq!(sq.family(), Some(CoinFamily::X));
    }

    #[test]
    fn mixed_products_land_in_the_transposition_basis() {
        let x = coin_from_theta(CoinFamily::X, 0.4);
        let w = coin_from_theta(CoinFamily::W, 2.2);
        assert_eq!(multiply(&x, &w).unwrap().family(), Some(CoinFamily::W));
        assert_eq!(multiply(&w, &x).unwrap().family(), Some(CoinFamily::W));
        let y = coin_from_theta(CoinFamily::Y, 1.0);
        assert_eq!(multiply(&y, &w).unwrap().family(), Some(CoinFamily::Z));
        assert_eq!(multiply(&w, &w).unwrap().family(), Some(CoinFamily::X));
    }
}
