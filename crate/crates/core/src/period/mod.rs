//! Walk periods: the smallest `T > 0` with `Uᵗ = I`.
//!
//! Three independent routes are provided and cross-checked:
//! closed-form case analysis over the coin families ([`period_analytic`]),
//! the lcm of multiplicative orders of the block eigenvalues
//! ([`period_spectral`]) and direct powering of `U` ([`period_bruteforce`]).
//! Only the analytic route may conclude that no period exists.

mod analytic;
mod report;

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::exactnum::{approximate_by, arg_2pi, ComplexF, Rational, DEFAULT_TOL};
use crate::walk::{spectrum, WalkSpec, DENSE_GUARD};

pub use analytic::{identity_coin_period, period_analytic, CoinAngle};
pub use report::{cross_validate, CrossReport, PeriodReport, ResultDocument};

pub const DEFAULT_TMAX: u64 = 10_000;
pub const DEFAULT_QMAX: u64 = 1_000_000;
/// `‖Uᵗ − I‖_F` at or below this counts as the identity.
pub const IDENTITY_TOL: f64 = 1e-8;
/// `‖Uᵗ − I‖_F` above this counts as clearly not the identity.
pub const SEPARATION_TOL: f64 = 1e-6;
/// Largest allowed `|θ/2π − p/q|` for a rational angle.
pub const ANGLE_TOL: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Analytic,
    Spectral,
    BruteForce,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Spectral => "spectral",
            Method::BruteForce => "bruteforce",
        }
    }
}

/// The closed-form result that settled an analytic period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Periods of walks with coins `X_θ`.
    XFamily,
    /// Periods of walks with coins `Y_θ`.
    YFamily,
    /// Periods of walks with coins `Z_θ`.
    ZFamily,
    /// Periods of walks with coins `W_θ`.
    WFamily,
    /// Rational coins are periodic only when `±C` is a permutation or Grover-type matrix.
    RationalCoins,
}

impl Theorem {
    pub fn tag(self) -> &'static str {
        match self {
            Theorem::XFamily => "x_family",
            Theorem::YFamily => "y_family",
            Theorem::ZFamily => "z_family",
            Theorem::WFamily => "w_family",
            Theorem::RationalCoins => "rational_coins",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PeriodStatus {
    Finite(u64),
    /// No period was found among candidates up to the bound.
    NoPeriodUpTo(u64),
    ProvenInfinite,
    NotApplicable(String),
}

impl PeriodStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            PeriodStatus::Finite(_) => "finite",
            PeriodStatus::NoPeriodUpTo(_) => "no_period_up_to",
            PeriodStatus::ProvenInfinite => "proven_infinite",
            PeriodStatus::NotApplicable(_) => "not_applicable",
        }
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            PeriodStatus::Finite(t) => Some(*t),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodResult {
    pub method: Method,
    pub status: PeriodStatus,
    pub theorem: Option<Theorem>,
}

impl PeriodResult {
    fn new(method: Method, status: PeriodStatus) -> Self {
        PeriodResult {
            method,
            status,
            theorem: None,
        }
    }
}

/// `θ/2π` as a reduced `p/q` in `[0, 1)`, or irrational as far as `Qmax` can tell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AngleKind {
    Rational(Rational),
    IrrationalUpToBound(u64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleClass {
    pub value: f64,
    pub kind: AngleKind,
}

/// Acceptance window for a convergent with denominator `q`: at most
/// [`ANGLE_TOL`], and tight enough that `e^{2πi q·f}` is within
/// [`IDENTITY_TOL`] of 1. Without the second bound almost every real number
/// has some convergent with `q ≤ 10⁶` inside `10⁻¹¹`.
fn angle_window(q: i128) -> f64 {
    ANGLE_TOL.min(IDENTITY_TOL / (TAU * q as f64))
}

/// Classifies `f = θ/2π` (already in turns) by continued fractions.
pub fn classify_turns(f: f64, qmax: u64) -> AngleKind {
    let f = f.rem_euclid(1.0);
    match approximate_by(f, qmax, angle_window) {
        Some(r) => AngleKind::Rational(r.fract_floor()),
        None => AngleKind::IrrationalUpToBound(qmax),
    }
}

pub fn classify_angle(theta: f64, qmax: u64) -> AngleClass {
    AngleClass {
        value: theta,
        kind: classify_turns(theta / TAU, qmax),
    }
}

/// Multiplicative order of a unit complex number, if its angle is rational
/// with denominator at most `qmax`.
pub fn order_of_unit(lambda: ComplexF, qmax: u64, tol: f64) -> Result<Option<u64>> {
    let modulus = lambda.norm();
    if !((modulus - 1.0).abs() <= tol) {
        return Err(Error::NotUnitModulus(modulus));
    }
    Ok(match classify_turns(arg_2pi(lambda) / TAU, qmax) {
        AngleKind::Rational(r) => Some(r.denom() as u64),
        AngleKind::IrrationalUpToBound(_) => None,
    })
}

pub(crate) fn checked_lcm(a: u64, b: u64) -> Result<u64> {
    use num_integer::Integer;
    (a / a.gcd(&b))
        .checked_mul(b)
        .ok_or(Error::Overflow("lcm"))
}

/// lcm of the orders of all block eigenvalues.
pub fn period_spectral(spec: &WalkSpec, qmax: u64) -> Result<PeriodResult> {
    let mut period = 1u64;
    for entry in spectrum(spec)? {
        match order_of_unit(entry.eigenvalue, qmax, DEFAULT_TOL)? {
            Some(q) => period = checked_lcm(period, q)?,
            None => {
                return Ok(PeriodResult::new(
                    Method::Spectral,
                    PeriodStatus::NoPeriodUpTo(qmax),
                ))
            }
        }
    }
    Ok(PeriodResult::new(Method::Spectral, PeriodStatus::Finite(period)))
}

/// Running powers `Uᵗ`, stored column-major and advanced by the sparse
/// structure of `U` (each column costs `O(9n)`).
struct Powers<'a> {
    spec: &'a WalkSpec,
    cols: Vec<ComplexF>,
    scratch: Vec<ComplexF>,
}

impl<'a> Powers<'a> {
    fn new(spec: &'a WalkSpec) -> Result<Self> {
        if spec.n() > DENSE_GUARD {
            return Err(Error::GuardExceeded {
                n: spec.n(),
                limit: DENSE_GUARD,
            });
        }
        let d = spec.dim();
        let mut cols = vec![ComplexF::new(0.0, 0.0); d * d];
        for j in 0..d {
            cols[j * d + j] = ComplexF::new(1.0, 0.0);
        }
        let mut p = Powers {
            spec,
            cols,
            scratch: vec![ComplexF::new(0.0, 0.0); d],
        };
        p.step();
        Ok(p)
    }

    fn step(&mut self) {
        let d = self.spec.dim();
        for col in self.cols.chunks_mut(d) {
            self.spec.apply_into(col, &mut self.scratch);
            col.copy_from_slice(&self.scratch);
        }
    }

    /// `‖Uᵗ − I‖_F`, or `None` once it is known to exceed `cap`.
    fn defect_capped(&self, cap: f64) -> Option<f64> {
        let d = self.spec.dim();
        let cap2 = cap * cap;
        let mut s = 0.0;
        for (j, col) in self.cols.chunks(d).enumerate() {
            for (i, v) in col.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                s += (v - ComplexF::new(target, 0.0)).norm_sqr();
            }
            if s > cap2 {
                return None;
            }
        }
        Some(s.sqrt())
    }
}

/// First `t ≤ tmax` with `‖Uᵗ − I‖_F ≤ tol`.
pub fn period_bruteforce(spec: &WalkSpec, tmax: u64, tol: f64) -> Result<PeriodResult> {
    let mut powers = Powers::new(spec)?;
    for t in 1..=tmax {
        if powers.defect_capped(tol).is_some() {
            return Ok(PeriodResult::new(Method::BruteForce, PeriodStatus::Finite(t)));
        }
        powers.step();
    }
    Ok(PeriodResult::new(
        Method::BruteForce,
        PeriodStatus::NoPeriodUpTo(tmax),
    ))
}

/// `‖Uᵗ − I‖_F` for `t = 1..=tmax`.
pub fn identity_defects(spec: &WalkSpec, tmax: u64) -> Result<Vec<f64>> {
    let mut powers = Powers::new(spec)?;
    let mut out = Vec::with_capacity(tmax as usize);
    for _ in 1..=tmax {
        out.push(powers.defect_capped(f64::INFINITY).expect("uncapped"));
        powers.step();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::{coin_from_theta, grover_type, perm_matrix, CoinFamily, PermIndex};

    fn spec(n: usize, a: usize, coin: crate::coins::Coin3) -> WalkSpec {
        WalkSpec::new(n, a, coin).unwrap()
    }

    #[test]
    fn order_examples() {
        let one = ComplexF::new(1.0, 0.0);
        assert_eq!(order_of_unit(one, DEFAULT_QMAX, 1e-10).unwrap(), Some(1));
        let w = ComplexF::from_polar(1.0, TAU / 3.0);
        assert_eq!(order_of_unit(w, DEFAULT_QMAX, 1e-10).unwrap(), Some(3));
        assert_eq!(order_of_unit(w.conj(), DEFAULT_QMAX, 1e-10).unwrap(), Some(3));
        let r = ComplexF::from_polar(1.0, 1.0);
        assert_eq!(order_of_unit(r, DEFAULT_QMAX, 1e-10).unwrap(), None);
        assert!(matches!(
            order_of_unit(ComplexF::new(1.1, 0.0), DEFAULT_QMAX, 1e-10),
            Err(Error::NotUnitModulus(_))
        ));
    }

    #[test]
    fn angle_classes() {
        let q = |n, d| Rational::new(n, d).unwrap();
        assert_eq!(classify_angle(TAU * 0.2, 100).kind, AngleKind::Rational(q(1, 5)));
        assert_eq!(classify_angle(-TAU / 6.0, 100).kind, AngleKind::Rational(q(5, 6)));
        assert_eq!(classify_angle(TAU - 1e-14, 100).kind, AngleKind::Rational(q(0, 1)));
        assert_eq!(classify_angle(0.7, DEFAULT_QMAX).kind, AngleKind::IrrationalUpToBound(DEFAULT_QMAX));
    }

    #[test]
    fn spectral_examples() {
        let g = spec(3, 0, grover_type(PermIndex::P1, false));
        assert_eq!(period_spectral(&g, DEFAULT_QMAX).unwrap().status, PeriodStatus::Finite(6));
        let d1 = spec(3, 0, coin_from_theta(CoinFamily::X, std::f64::consts::FRAC_PI_2));
        assert_eq!(period_spectral(&d1, DEFAULT_QMAX).unwrap().status, PeriodStatus::Finite(12));
        let g5 = spec(5, 0, grover_type(PermIndex::P1, false));
        assert_eq!(
            period_spectral(&g5, DEFAULT_QMAX).unwrap().status,
            PeriodStatus::NoPeriodUpTo(DEFAULT_QMAX)
        );
    }

    #[test]
    fn bruteforce_examples() {
        let p2 = spec(3, 0, perm_matrix(PermIndex::P2));
        assert_eq!(period_bruteforce(&p2, 100, IDENTITY_TOL).unwrap().status, PeriodStatus::Finite(3));
        let id = spec(4, 0, perm_matrix(PermIndex::P1));
        assert_eq!(period_bruteforce(&id, 100, IDENTITY_TOL).unwrap().status, PeriodStatus::Finite(4));
        let g5 = spec(3, 0, grover_type(PermIndex::P5, false));
        assert_eq!(period_bruteforce(&g5, 100, IDENTITY_TOL).unwrap().status, PeriodStatus::Finite(4));
        let g4 = spec(4, 0, grover_type(PermIndex::P1, false));
        assert_eq!(
            period_bruteforce(&g4, 500, IDENTITY_TOL).unwrap().status,
            PeriodStatus::NoPeriodUpTo(500)
        );
    }

    #[test]
    fn defects_match_dense_powers() {
        let s = spec(4, 1, coin_from_theta(CoinFamily::Y, 0.9));
        let u = crate::walk::evolution_operator(&s).unwrap();
        let defects = identity_defects(&s, 5).unwrap();
        for (t, d) in defects.iter().enumerate() {
            let dense = crate::exactnum::mat_power_norm_defect(&u, t as u64 + 1).unwrap();
            assert!((d - dense).abs() < 1e-12);
        }
    }
}
