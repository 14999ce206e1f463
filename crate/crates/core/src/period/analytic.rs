//! Closed-form periods for the lazy walk (`a ≡ 0 mod n`).
//!
//! Each family is written as a one-parameter group in `θ = 2πf`; the period
//! depends only on `n` and which of a handful of special angles `f` is.
//! Outside those angles the walk is periodic only at `n = 3`, with period
//! an lcm involving the denominator of `f`.

use std::f64::consts::TAU;

use num_integer::Integer;

use super::{checked_lcm, classify_turns, AngleKind, Method, PeriodResult, PeriodStatus, Theorem};
use crate::coins::{CoinFamily, Scalar};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::walk::WalkSpec;

/// How the coin's angle is known.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CoinAngle {
    /// `θ/2π` exactly, in `[0, 1)`.
    Turns(Rational),
    /// An exact rational coin whose `cos θ` is not in `{0, ±1/2, ±1}`, so
    /// `θ/π` is irrational.
    IrrationalRational,
    /// A floating coin whose angle did not classify as rational.
    Unresolved,
}

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

impl CoinAngle {
    /// Recovers the angle from a classified coin.
    ///
    /// X, Z: `cos θ = (3x − 1)/2`, `sin θ = √3 (y − (1 − cos θ)/3)`.
    /// Y, W: `cos θ = (3x + 1)/2`, `sin θ = √3 (y + (1 + cos θ)/3)`.
    pub fn of(spec: &WalkSpec, qmax: u64) -> Result<CoinAngle> {
        let coin = spec.coin();
        if let Some(t) = coin.turns() {
            return Ok(CoinAngle::Turns(t.fract_floor()));
        }
        let family = spec.family();
        let [x, y, _] = coin.params().expect("classified coin has parameters");
        let plus = family.sum_sign() > 0;
        if let (Scalar::Exact(x), Scalar::Exact(y)) = (x, y) {
            let one = Rational::ONE;
            let three = Rational::from_integer(3);
            let tx = three.checked_mul(&x)?;
            let cos = if plus { tx.checked_sub(&one)? } else { tx.checked_add(&one)? }
                .checked_div(&Rational::from_integer(2))?;
            let sin_part = if plus {
                y.checked_sub(&one.checked_sub(&cos)?.checked_div(&three)?)?
            } else {
                y.checked_add(&one.checked_add(&cos)?.checked_div(&three)?)?
            };
            let upper = sin_part.signum() > 0;
            let f = if cos == one {
                q(0, 1)
            } else if cos == -one {
                q(1, 2)
            } else if cos == q(1, 2) {
                if upper { q(1, 6) } else { q(5, 6) }
            } else if cos == q(-1, 2) {
                if upper { q(1, 3) } else { q(2, 3) }
            } else {
                return Ok(CoinAngle::IrrationalRational);
            };
            return Ok(CoinAngle::Turns(f));
        }
        let (x, y) = (x.re(), y.re());
        let cos = if plus { (3.0 * x - 1.0) / 2.0 } else { (3.0 * x + 1.0) / 2.0 };
        let sin = 3f64.sqrt() * if plus { y - (1.0 - cos) / 3.0 } else { y + (1.0 + cos) / 3.0 };
        Ok(match classify_turns(sin.atan2(cos) / TAU, qmax) {
            AngleKind::Rational(f) => CoinAngle::Turns(f),
            AngleKind::IrrationalUpToBound(_) => CoinAngle::Unresolved,
        })
    }
}

/// `lcm{c_l p_l : 0 < l < n}` where `2l/n = m_l/p_l` in lowest terms and
/// `c_l` is 1 for even `m_l`, 2 for odd. This is the period of the walk with
/// the identity coin, and equals `n`.
pub fn identity_coin_period(n: u64) -> Result<u64> {
    let mut t = 1u64;
    for l in 1..n {
        let g = (2 * l).gcd(&n);
        let (m, p) = (2 * l / g, n / g);
        let c = if m % 2 == 0 { 1 } else { 2 };
        t = checked_lcm(t, c * p)?;
    }
    Ok(t)
}

/// `lcm{2, 2·den(s·l/n) : 0 < l < n}`.
fn doubled_denominator_lcm(n: u64, s: u64) -> Result<u64> {
    let mut t = 2u64;
    for l in 1..n {
        let den = n / (s * l).gcd(&n);
        t = checked_lcm(t, 2 * den)?;
    }
    Ok(t)
}

fn den(r: Rational) -> u64 {
    r.denom() as u64
}

/// Period (or `None` for no period) of the lazy walk with the family coin at `θ = 2πf`.
fn family_period(family: CoinFamily, f: Rational, n: u64) -> Result<Option<u64>> {
    let is = |a: i128, b: i128| f == q(a, b);
    let shifted = |d: Rational| -> Result<u64> { Ok(den(f.checked_add(&d)?.fract_floor())) };
    Ok(match family {
        CoinFamily::X => {
            if is(0, 1) {
                Some(identity_coin_period(n)?)
            } else if is(1, 3) || is(2, 3) {
                Some(3)
            } else if n == 3 {
                Some(checked_lcm(3, den(f))?)
            } else {
                None
            }
        }
        CoinFamily::Z => {
            if is(0, 1) || is(2, 3) {
                Some(doubled_denominator_lcm(n, 1)?)
            } else if is(1, 3) {
                Some(2)
            } else if n == 3 {
                Some(checked_lcm(2, 2 * shifted(q(-1, 3))?)?)
            } else {
                None
            }
        }
        CoinFamily::Y => {
            if is(1, 2) {
                Some(doubled_denominator_lcm(n, 2)?)
            } else if is(1, 6) || is(5, 6) {
                Some(6)
            } else if n == 3 {
                let twice = f.checked_mul(&Rational::from_integer(2))?.fract_floor();
                Some(checked_lcm(6, 2 * den(twice))?)
            } else {
                None
            }
        }
        CoinFamily::W => {
            if is(1, 2) || is(1, 6) {
                Some(doubled_denominator_lcm(n, 1)?)
            } else if is(5, 6) {
                Some(2)
            } else if n == 3 {
                Some(checked_lcm(2, 2 * shifted(q(1, 6))?)?)
            } else {
                None
            }
        }
    })
}

fn family_theorem(family: CoinFamily) -> Theorem {
    match family {
        CoinFamily::X => Theorem::XFamily,
        CoinFamily::Y => Theorem::YFamily,
        CoinFamily::Z => Theorem::ZFamily,
        CoinFamily::W => Theorem::WFamily,
    }
}

/// Closed-form period of the lazy walk.
///
/// Fails with [`Error::NotApplicable`] when `a ≢ 0 (mod n)` or when a
/// floating coin's angle is not recognisably rational and `n = 3`, the only
/// case where the answer depends on the angle's denominator.
pub fn period_analytic(spec: &WalkSpec, qmax: u64) -> Result<PeriodResult> {
    let (n, a) = (spec.n() as u64, spec.a() as u64);
    if a % n != 0 {
        return Err(Error::NotApplicable(format!(
            "closed forms need e^(-ika) = 1 on every block; n = {n} does not divide a = {a}"
        )));
    }
    let family = spec.family();
    let (status, theorem) = match CoinAngle::of(spec, qmax)? {
        CoinAngle::IrrationalRational => (PeriodStatus::ProvenInfinite, Theorem::RationalCoins),
        CoinAngle::Turns(f) => match family_period(family, f, n)? {
            Some(t) => (PeriodStatus::Finite(t), family_theorem(family)),
            None if spec.coin().is_exact() && spec.coin().turns().is_none() => {
                (PeriodStatus::ProvenInfinite, Theorem::RationalCoins)
            }
            None => (PeriodStatus::ProvenInfinite, family_theorem(family)),
        },
        CoinAngle::Unresolved if n != 3 => (PeriodStatus::ProvenInfinite, family_theorem(family)),
        CoinAngle::Unresolved => {
            return Err(Error::NotApplicable(format!(
                "coin angle is not rational with denominator <= {qmax}"
            )))
        }
    };
    Ok(PeriodResult {
        method: Method::Analytic,
        status,
        theorem: Some(theorem),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::{coin_from_rational, coin_from_theta, coin_from_turns, grover_type, perm_matrix, PermIndex, Sign};
    use crate::period::DEFAULT_QMAX;
    use std::f64::consts::PI;

    fn analytic(n: usize, coin: crate::coins::Coin3) -> PeriodStatus {
        let spec = WalkSpec::new(n, 0, coin).unwrap();
        period_analytic(&spec, DEFAULT_QMAX).unwrap().status
    }

    #[test]
    fn identity_formula_is_n() {
        for n in 2..=40 {
            assert_eq!(identity_coin_period(n).unwrap(), n);
        }
    }

    #[test]
    fn rational_angle_examples_at_n3() {
        assert_eq!(analytic(3, coin_from_theta(CoinFamily::X, TAU / 5.0)), PeriodStatus::Finite(15));
        assert_eq!(analytic(3, coin_from_turns(CoinFamily::X, q(1, 5))), PeriodStatus::Finite(15));
        assert_eq!(analytic(3, coin_from_turns(CoinFamily::X, q(1, 6))), PeriodStatus::Finite(6));
        assert_eq!(analytic(3, coin_from_turns(CoinFamily::X, q(2, 7))), PeriodStatus::Finite(21));
        assert_eq!(analytic(3, coin_from_theta(CoinFamily::X, 3.0 * PI / 2.0)), PeriodStatus::Finite(12));
    }

    #[test]
    fn grover_type_table_at_n3() {
        let want = [
            (PermIndex::P1, 6),
            (PermIndex::P2, 6),
            (PermIndex::P3, 6),
            (PermIndex::P4, 12),
            (PermIndex::P5, 4),
            (PermIndex::P6, 12),
        ];
        for (p, t) in want {
            for negate in [false, true] {
                assert_eq!(analytic(3, grover_type(p, negate)), PeriodStatus::Finite(t), "{p} {negate}");
            }
        }
    }

    #[test]
    fn infinite_cases() {
        assert_eq!(analytic(7, coin_from_theta(CoinFamily::X, PI / 4.0)), PeriodStatus::ProvenInfinite);
        assert_eq!(analytic(4, grover_type(PermIndex::P1, false)), PeriodStatus::ProvenInfinite);
        let r = coin_from_rational(CoinFamily::X, q(1, 2), Sign::Plus, Sign::Plus).unwrap();
        let spec = WalkSpec::new(3, 0, r).unwrap();
        let res = period_analytic(&spec, DEFAULT_QMAX).unwrap();
        assert_eq!(res.status, PeriodStatus::ProvenInfinite);
        assert_eq!(res.theorem, Some(Theorem::RationalCoins));
    }

    #[test]
    fn not_applicable_cases() {
        let lively = WalkSpec::new(3, 1, perm_matrix(PermIndex::P1)).unwrap();
        assert!(matches!(period_analytic(&lively, DEFAULT_QMAX), Err(Error::NotApplicable(_))));
        let unresolved = WalkSpec::new(3, 0, coin_from_theta(CoinFamily::X, 0.7)).unwrap();
        assert!(matches!(period_analytic(&unresolved, DEFAULT_QMAX), Err(Error::NotApplicable(_))));
    }
}
