//! Orthogonal 3×3 coins that are linear sums of permutation matrices.
//!
//! Every such coin is `x P1 + y P2 + z P3` (cyclic basis) or
//! `x P4 + y P5 + z P6` (transposition basis) with `x + y + z = ±1` and
//! `x² + y² + z² = 1`, which splits them into the four families
//! X (cyclic, +1), Y (cyclic, −1), Z (transposition, +1) and W
//! (transposition, −1).

mod classify;
mod json;

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::mat3::q3_mul;
use crate::exactnum::{ComplexF, Mat3, Rational, Q3};

pub use classify::{classify, decompose_linear_sum, is_permutative, multiply, ClassReport};
pub use json::{CoinDocument, Entry, ParamsDocument};

/// Orthogonality tolerance for floating coins.
pub const ORTHO_TOL: f64 = 1e-10;
/// Ellipse membership tolerance for floating parameters.
pub const ELLIPSE_TOL: f64 = 1e-10;
/// Tolerance on `z = ±1 − x − y`.
pub const SUM_TOL: f64 = 1e-12;
/// Entry comparison tolerance for layout matching.
pub const LAYOUT_TOL: f64 = 1e-10;

/// The six 3×3 permutation matrices, `p_ij = 1` iff `π(i) = j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PermIndex {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
}

impl PermIndex {
    pub const ALL: [PermIndex; 6] = [
        PermIndex::P1,
        PermIndex::P2,
        PermIndex::P3,
        PermIndex::P4,
        PermIndex::P5,
        PermIndex::P6,
    ];

    /// Zero-based images `π(0), π(1), π(2)`.
    pub fn images(self) -> [usize; 3] {
        match self {
            PermIndex::P1 => [0, 1, 2],
            PermIndex::P2 => [1, 2, 0], // (123)
            PermIndex::P3 => [2, 0, 1], // (132)
            PermIndex::P4 => [0, 2, 1], // (23)
            PermIndex::P5 => [1, 0, 2], // (12)
            PermIndex::P6 => [2, 1, 0], // (13)
        }
    }

    pub fn exact_matrix(self) -> Q3 {
        let mut m = [[Rational::ZERO; 3]; 3];
        for (i, j) in self.images().into_iter().enumerate() {
            m[i][j] = Rational::ONE;
        }
        m
    }
}

impl fmt::Display for PermIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for PermIndex {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        PermIndex::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown permutation `{s}` (expected P1..P6)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// `{P1, P2, P3}`
    Cyclic,
    /// `{P4, P5, P6}`
    Transposition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoinFamily {
    X,
    Y,
    Z,
    W,
}

impl CoinFamily {
    pub const ALL: [CoinFamily; 4] = [CoinFamily::X, CoinFamily::Y, CoinFamily::Z, CoinFamily::W];

    pub fn basis(self) -> Basis {
        match self {
            CoinFamily::X | CoinFamily::Y => Basis::Cyclic,
            CoinFamily::Z | CoinFamily::W => Basis::Transposition,
        }
    }

    /// The value of `x + y + z`.
    pub fn sum_sign(self) -> i32 {
        match self {
            CoinFamily::X | CoinFamily::Z => 1,
            CoinFamily::Y | CoinFamily::W => -1,
        }
    }

    /// `det C`: the sum sign, flipped for the transposition basis since
    /// `Z = P4·X` and `W = P4·Y` with `det P4 = −1`.
    pub fn det_sign(self) -> i32 {
        match self {
            CoinFamily::X | CoinFamily::W => 1,
            CoinFamily::Y | CoinFamily::Z => -1,
        }
    }

    pub fn from_parts(basis: Basis, sign: i32) -> Self {
        match (basis, sign > 0) {
            (Basis::Cyclic, true) => CoinFamily::X,
            (Basis::Cyclic, false) => CoinFamily::Y,
            (Basis::Transposition, true) => CoinFamily::Z,
            (Basis::Transposition, false) => CoinFamily::W,
        }
    }

    /// Closed interval of real `x` for which the family's ellipse has real points.
    pub fn real_range(self) -> (f64, f64) {
        match self.sum_sign() {
            1 => (-1.0 / 3.0, 1.0),
            _ => (-1.0, 1.0 / 3.0),
        }
    }
}

impl fmt::Display for CoinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for CoinFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "X" => Ok(CoinFamily::X),
            "Y" => Ok(CoinFamily::Y),
            "Z" => Ok(CoinFamily::Z),
            "W" => Ok(CoinFamily::W),
            _ => Err(format!("unknown coin family `{s}` (expected X, Y, Z or W)")),
        }
    }
}

/// A coin parameter, exact or complex floating.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(ComplexF),
}

impl Scalar {
    pub fn to_complex(self) -> ComplexF {
        match self {
            Scalar::Exact(r) => ComplexF::new(r.to_f64(), 0.0),
            Scalar::Float(c) => c,
        }
    }

    pub fn re(self) -> f64 {
        self.to_complex().re
    }

    pub fn exact(self) -> Option<Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Float(ComplexF::new(v, 0.0))
    }
}

impl From<ComplexF> for Scalar {
    fn from(c: ComplexF) -> Self {
        Scalar::Float(c)
    }
}

/// Coefficients of a coin over one of the two permutation bases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearSumCoefficients {
    pub basis: Basis,
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

impl LinearSumCoefficients {
    pub fn xyz(&self) -> [Scalar; 3] {
        [self.x, self.y, self.z]
    }
}

/// Choice of sign in the rational parametrization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i128 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// Parses a two-character pattern such as `"+-"`.
    pub fn parse_pair(s: &str) -> std::result::Result<(Sign, Sign), String> {
        let signs: Vec<Sign> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                _ => Err(format!("bad sign `{c}` in `{s}`")),
            })
            .collect::<std::result::Result<_, _>>()?;
        match signs[..] {
            [a, b] => Ok((a, b)),
            _ => Err(format!("expected two signs like `++`, got `{s}`")),
        }
    }
}

/// A 3×3 orthogonal coin.
#[derive(Clone, Debug, PartialEq)]
pub struct Coin3 {
    matrix: Mat3,
    family: Option<CoinFamily>,
    params: Option<[Scalar; 3]>,
    turns: Option<Rational>,
}

impl Coin3 {
    /// Wraps an orthogonal matrix, filling in family and parameters when the
    /// matrix decomposes over a permutation basis.
    pub fn from_matrix(matrix: Mat3) -> Result<Self> {
        check_orthogonal(&matrix)?;
        let (family, params) = match classify(&matrix) {
            Ok(report) => (Some(report.family), Some(report.params)),
            Err(Error::NotPermutative) => (None, None),
            Err(e) => return Err(e),
        };
        Ok(Coin3 {
            matrix,
            family,
            params,
            turns: None,
        })
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn family(&self) -> Option<CoinFamily> {
        self.family
    }

    pub fn params(&self) -> Option<[Scalar; 3]> {
        self.params
    }

    /// `θ / 2π` reduced to `[0, 1)` when the coin was built from an exact angle.
    pub fn turns(&self) -> Option<Rational> {
        self.turns
    }

    pub fn is_exact(&self) -> bool {
        self.matrix.is_exact()
    }

    pub fn classify(&self) -> Result<ClassReport> {
        classify(&self.matrix)
    }

    pub fn neg(&self) -> Result<Coin3> {
        Coin3::from_matrix(self.matrix.neg()?)
    }

    /// The inverse, `Cᵀ`.
    pub fn transpose(&self) -> Result<Coin3> {
        Coin3::from_matrix(self.matrix.transpose())
    }
}

fn check_orthogonal(m: &Mat3) -> Result<()> {
    match m.is_exactly_orthogonal() {
        Some(true) => Ok(()),
        Some(false) => Err(Error::NotOrthogonal {
            defect: m.orthogonality_defect(),
            tol: 0.0,
        }),
        None => {
            let defect = m.orthogonality_defect();
            let tol = ORTHO_TOL * entry_scale(m);
            if defect.is_finite() && defect <= tol {
                Ok(())
            } else {
                Err(Error::NotOrthogonal { defect, tol })
            }
        }
    }
}

/// `max(1, max |m_ij|²)`; complex coins can have large entries.
pub(crate) fn entry_scale(m: &Mat3) -> f64 {
    let c = m.to_c3();
    c.iter().flatten().map(|v| v.norm_sqr()).fold(1.0, f64::max)
}

/// Places `(x, y, z)` into the basis layout.
pub fn layout<T: Copy>(basis: Basis, x: T, y: T, z: T) -> [[T; 3]; 3] {
    match basis {
        Basis::Cyclic => [[x, y, z], [z, x, y], [y, z, x]],
        Basis::Transposition => [[x, y, z], [y, z, x], [z, x, y]],
    }
}

pub fn perm_matrix(p: PermIndex) -> Coin3 {
    Coin3::from_matrix(Mat3::Exact(p.exact_matrix())).expect("permutation matrices are orthogonal")
}

/// `(2/3)J − P`, or `P − (2/3)J` when `negate` is set.
pub fn grover_type(p: PermIndex, negate: bool) -> Coin3 {
    let two_thirds = Rational::new(2, 3).unwrap();
    let pm = p.exact_matrix();
    let mut m = [[Rational::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let v = two_thirds - pm[i][j];
            m[i][j] = if negate { -v } else { v };
        }
    }
    Coin3::from_matrix(Mat3::Exact(m)).expect("Grover-type matrices are orthogonal")
}

/// Ellipse polynomial `x² + y² + xy ∓ (x + y)`; zero on the family's variety.
fn ellipse<T>(family: CoinFamily, x: T, y: T) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<Output = T>,
{
    let quad = x * x + y * y + x * y;
    if family.sum_sign() > 0 {
        quad - (x + y)
    } else {
        quad + (x + y)
    }
}

/// Builds the family's matrix from `(x, y, z)`.
///
/// All-exact inputs give an exact coin and are checked exactly; anything
/// floating is checked to `SUM_TOL` / `ELLIPSE_TOL`. Without `allow_complex`
/// the parameters must be real and inside the family's real range.
pub fn coin_from_xyz(
    family: CoinFamily,
    x: impl Into<Scalar>,
    y: impl Into<Scalar>,
    z: impl Into<Scalar>,
    allow_complex: bool,
) -> Result<Coin3> {
    let (x, y, z) = (x.into(), y.into(), z.into());
    let sign = Rational::from_integer(family.sum_sign() as i128);
    if let (Some(xe), Some(ye), Some(ze)) = (x.exact(), y.exact(), z.exact()) {
        if ze != sign.checked_sub(&xe)?.checked_sub(&ye)? {
            return Err(Error::ConstraintViolated(format!(
                "z = {ze} but {family} requires z = {sign} - x - y"
            )));
        }
        let quad = xe
            .checked_mul(&xe)?
            .checked_add(&ye.checked_mul(&ye)?)?
            .checked_add(&xe.checked_mul(&ye)?)?;
        let lin = xe.checked_add(&ye)?;
        let e = if family.sum_sign() > 0 {
            quad.checked_sub(&lin)?
        } else {
            quad.checked_add(&lin)?
        };
        if !e.is_zero() {
            return Err(Error::ConstraintViolated(format!(
                "({xe}, {ye}) is off the {family} ellipse (residual {e})"
            )));
        }
        let m = layout(family.basis(), xe, ye, ze);
        return Ok(Coin3 {
            matrix: Mat3::Exact(m),
            family: Some(family),
            params: Some([x, y, z]),
            turns: None,
        });
    }

    let (xc, yc, zc) = (x.to_complex(), y.to_complex(), z.to_complex());
    let s = ComplexF::new(family.sum_sign() as f64, 0.0);
    let sum_err = (zc - (s - xc - yc)).norm();
    if !(sum_err <= SUM_TOL * (1.0 + xc.norm() + yc.norm())) {
        return Err(Error::ConstraintViolated(format!(
            "z misses {s} - x - y by {sum_err:.3e}"
        )));
    }
    let e = ellipse(family, xc, yc).norm();
    if !(e <= ELLIPSE_TOL * (1.0 + xc.norm_sqr() + yc.norm_sqr())) {
        return Err(Error::ConstraintViolated(format!(
            "({xc}, {yc}) is off the {family} ellipse (residual {e:.3e})"
        )));
    }
    if !allow_complex {
        let imag = [xc, yc, zc].iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        if imag > SUM_TOL {
            return Err(Error::RangeViolated(format!(
                "complex parameters need allow_complex (max |Im| = {imag:.3e})"
            )));
        }
        let (lo, hi) = family.real_range();
        if xc.re < lo - SUM_TOL || xc.re > hi + SUM_TOL {
            return Err(Error::RangeViolated(format!(
                "x = {} outside [{lo:.6}, {hi:.6}] for {family}",
                xc.re
            )));
        }
    }
    Ok(Coin3 {
        matrix: Mat3::Float(layout(family.basis(), xc, yc, zc)),
        family: Some(family),
        params: Some([Scalar::Float(xc), Scalar::Float(yc), Scalar::Float(zc)]),
        turns: None,
    })
}

/// Both roots in `y` of the family ellipse at a real `x`, larger first.
pub fn solve_y(family: CoinFamily, x: f64) -> Result<(f64, f64)> {
    let (b, disc) = ellipse_quadratic(family, x);
    let disc = if disc < 0.0 && disc > -1e-12 { 0.0 } else { disc };
    if disc < 0.0 || !disc.is_finite() {
        return Err(Error::OutOfRange(format!(
            "x = {x} gives no real y on the {family} ellipse"
        )));
    }
    let r = disc.sqrt();
    Ok(((-b + r) / 2.0, (-b - r) / 2.0))
}

/// Complex roots in `y` of the family ellipse.
pub fn solve_y_complex(family: CoinFamily, x: ComplexF) -> (ComplexF, ComplexF) {
    let s = family.sum_sign() as f64;
    // y² + (x − s) y + (x² − s x) = 0
    let b = x - s;
    let c = x * x - x * s;
    let r = (b * b - c * 4.0).sqrt();
    ((-b + r) / 2.0, (-b - r) / 2.0)
}

/// Linear coefficient and discriminant of the ellipse viewed as a quadratic in `y`.
fn ellipse_quadratic(family: CoinFamily, x: f64) -> (f64, f64) {
    if family.sum_sign() > 0 {
        (x - 1.0, (1.0 - x) * (1.0 + 3.0 * x))
    } else {
        (x + 1.0, (1.0 + x) * (1.0 - 3.0 * x))
    }
}

/// First-row parameters of the one-parameter family at angle `theta`.
pub fn theta_params(family: CoinFamily, theta: f64) -> [f64; 3] {
    let (s, c) = theta.rem_euclid(TAU).sin_cos();
    let r3 = 3f64.sqrt();
    if family.sum_sign() > 0 {
        let base = (1.0 - c) / 3.0;
        [(2.0 * c + 1.0) / 3.0, base + s / r3, base - s / r3]
    } else {
        let base = -(1.0 + c) / 3.0;
        [(2.0 * c - 1.0) / 3.0, base + s / r3, base - s / r3]
    }
}

pub fn coin_from_theta(family: CoinFamily, theta: f64) -> Coin3 {
    let [x, y, z] = theta_params(family, theta);
    let c = |v: f64| ComplexF::new(v, 0.0);
    Coin3 {
        matrix: Mat3::Float(layout(family.basis(), c(x), c(y), c(z))),
        family: Some(family),
        params: Some([x.into(), y.into(), z.into()]),
        turns: None,
    }
}

/// Coin at `θ = 2π·turns`, remembering the exact angle.
pub fn coin_from_turns(family: CoinFamily, turns: Rational) -> Coin3 {
    let turns = turns.fract_floor();
    let mut coin = coin_from_theta(family, TAU * turns.to_f64());
    coin.turns = Some(turns);
    coin
}

/// Exact rational coin from the Pell parametrization.
///
/// With `o = 1/3` for X, Z and `o = −1/3` for Y, W:
/// `x = o + s1·2(r² − 3)/(3(r² + 3))` and
/// `y = o − s1·(r² − 3 + s2·6r)/(3(r² + 3))`.
/// Z and W coins are the X and Y coins with rows 2 and 3 exchanged.
pub fn coin_from_rational(family: CoinFamily, r: Rational, sign1: Sign, sign2: Sign) -> Result<Coin3> {
    let s1 = Rational::from_integer(sign1.value());
    let s2 = Rational::from_integer(sign2.value());
    let offset = Rational::new(family.sum_sign() as i128, 3)?;
    let three = Rational::from_integer(3);
    let r2 = r.checked_mul(&r)?;
    let den = three.checked_mul(&r2.checked_add(&three)?)?;
    let x = offset.checked_add(
        &s1.checked_mul(&Rational::from_integer(2).checked_mul(&r2.checked_sub(&three)?)?)?
            .checked_div(&den)?,
    )?;
    let inner = r2
        .checked_sub(&three)?
        .checked_add(&s2.checked_mul(&Rational::from_integer(6).checked_mul(&r)?)?)?;
    let y = offset.checked_sub(&s1.checked_mul(&inner)?.checked_div(&den)?)?;
    let sum = Rational::from_integer(family.sum_sign() as i128);
    let z = sum.checked_sub(&x)?.checked_sub(&y)?;
    coin_from_xyz(family, x, y, z, false)
}

/// Rational point `(X, Y)` on `X² − 3Y² = 1`.
pub fn pell_point(r: Rational) -> Result<(Rational, Rational)> {
    let three = Rational::from_integer(3);
    let r2 = r.checked_mul(&r)?;
    let den = r2.checked_sub(&three)?;
    let x = r2.checked_add(&three)?.checked_div(&den)?;
    let y = Rational::from_integer(-2).checked_mul(&r)?.checked_div(&den)?;
    Ok((x, y))
}

/// `(1 − x)(3x + 1)` for X, Z and `(1 + x)(1 − 3x)` for Y, W: the discriminant
/// whose rational squareness makes `y` rational.
pub fn pell_discriminant(family: CoinFamily, x: Rational) -> Result<Rational> {
    let one = Rational::ONE;
    let three = Rational::from_integer(3);
    let tx = three.checked_mul(&x)?;
    if family.sum_sign() > 0 {
        one.checked_sub(&x)?.checked_mul(&tx.checked_add(&one)?)
    } else {
        one.checked_add(&x)?.checked_mul(&one.checked_sub(&tx)?)
    }
}

/// Exact product of two rational coins (used by the closure checks).
pub fn exact_product(a: &Q3, b: &Q3) -> Result<Q3> {
    q3_mul(a, b)
}
