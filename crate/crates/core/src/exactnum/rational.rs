//! Exact rationals over `i128` with checked arithmetic.
//!
//! Every operation either returns a reduced value or an [`Error::Overflow`];
//! nothing wraps. The `std::ops` impls panic on overflow and are meant for
//! places where the operands are known to be small.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = num.checked_neg().ok_or(Error::Overflow("new"))?;
            den = den.checked_neg().ok_or(Error::Overflow("new"))?;
        }
        Ok(Rational { num, den })
    }

    pub const fn from_integer(n: i128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn signum(&self) -> i32 {
        self.num.signum() as i32
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(&self, rhs: &Rational) -> Result<Rational> {
        // a/b + c/d = (a*(l/b) + c*(l/d)) / l with l = lcm(b, d)
        let g = self.den.gcd(&rhs.den);
        let lhs_scale = rhs.den / g;
        let rhs_scale = self.den / g;
        let den = self
            .den
            .checked_mul(lhs_scale)
            .ok_or(Error::Overflow("add"))?;
        let a = self.num.checked_mul(lhs_scale).ok_or(Error::Overflow("add"))?;
        let b = rhs.num.checked_mul(rhs_scale).ok_or(Error::Overflow("add"))?;
        let num = a.checked_add(b).ok_or(Error::Overflow("add"))?;
        Rational::new(num, den)
    }

    pub fn checked_neg(&self) -> Result<Rational> {
        Ok(Rational {
            num: self.num.checked_neg().ok_or(Error::Overflow("neg"))?,
            den: self.den,
        })
    }

    pub fn checked_sub(&self, rhs: &Rational) -> Result<Rational> {
        self.checked_add(&rhs.checked_neg()?)
    }

    pub fn checked_mul(&self, rhs: &Rational) -> Result<Rational> {
        // cross-reduce first so the products stay as small as possible
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (g1, g2) = (g1.max(1), g2.max(1));
        let num = (self.num / g1)
            .checked_mul(rhs.num / g2)
            .ok_or(Error::Overflow("mul"))?;
        let den = (self.den / g2)
            .checked_mul(rhs.den / g1)
            .ok_or(Error::Overflow("mul"))?;
        Rational::new(num, den)
    }

    pub fn checked_recip(&self) -> Result<Rational> {
        if self.num == 0 {
            return Err(Error::DivisionByZero);
        }
        Rational::new(self.den, self.num)
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        self.checked_mul(&rhs.checked_recip()?)
    }

    pub fn checked_pow(&self, exp: u32) -> Result<Rational> {
        let mut acc = Rational::ONE;
        for _ in 0..exp {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract_floor(&self) -> Rational {
        let r = self.num.rem_euclid(self.den);
        Rational { num: r, den: self.den }
    }

    /// Square root when `self` is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.num < 0 {
            return None;
        }
        let n = isqrt(self.num)?;
        let d = isqrt(self.den)?;
        Some(Rational { num: n, den: d })
    }
}

fn isqrt(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let mut r = (v as f64).sqrt() as i128;
    while r > 0 && r.checked_mul(r).map_or(true, |sq| sq > v) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= v) {
        r += 1;
    }
    (r * r == v).then_some(r)
}

/// Best rational approximation `p/q` with `q <= qmax` among the continued
/// fraction convergents of `x`, accepted only when `|x - p/q| < tol`.
pub fn approximate(x: f64, qmax: u64, tol: f64) -> Option<Rational> {
    approximate_by(x, qmax, |_| tol)
}

/// As [`approximate`], with the acceptance window depending on the denominator.
pub fn approximate_by(x: f64, qmax: u64, tol: impl Fn(i128) -> f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h_prev, mut h) = (1i128, x.floor() as i128);
    let (mut k_prev, mut k) = (0i128, 1i128);
    let mut frac = x - x.floor();
    loop {
        let approx = h as f64 / k as f64;
        if (x - approx).abs() < tol(k) {
            return Rational::new(h, k).ok();
        }
        if frac.abs() < 1e-300 {
            return None;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if a > 1e18 {
            return None;
        }
        let a = a as i128;
        frac = inv - inv.floor();
        let h_next = a.checked_mul(h)?.checked_add(h_prev)?;
        let k_next = a.checked_mul(k)?.checked_add(k_prev)?;
        if k_next as u128 > qmax as u128 {
            return None;
        }
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n as i128)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (
            self.num.checked_mul(other.den),
            other.num.checked_mul(self.den),
        ) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(Ordering::Equal),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i128 = n.trim().parse().map_err(|_| bad())?;
                let d: i128 = d.trim().parse().map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$checked(&rhs)
                    .unwrap_or_else(|e| panic!("{self} {} {rhs}: {e}", stringify!($method)))
            }
        }
    };
}

panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);
panicking_op!(Div, div, checked_div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.checked_neg().expect("rational negation overflow")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn normalizes_sign_and_gcd() {
        let r = q(4, -6);
        assert_eq!((r.numer(), r.denom()), (-2, 3));
        assert_eq!(q(0, -5), Rational::ZERO);
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(Rational::new(1, 0), Err(Error::DivisionByZero));
        assert_eq!(Rational::ONE.checked_div(&Rational::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn overflow_is_reported_not_wrapped() {
        let big = Rational::from_integer(i128::MAX / 2 + 1);
        assert!(matches!(big.checked_add(&big), Err(Error::Overflow(_))));
        assert!(matches!(big.checked_mul(&big), Err(Error::Overflow(_))));
        let min = Rational::from_integer(i128::MIN);
        assert!(matches!(min.checked_neg(), Err(Error::Overflow(_))));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("-2/3".parse::<Rational>().unwrap(), q(-2, 3));
        assert_eq!("7".parse::<Rational>().unwrap(), q(7, 1));
        assert_eq!(q(6, 4).to_string(), "3/2");
        assert!("1/x".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(q(4, 9).sqrt_exact(), Some(q(2, 3)));
        assert_eq!(q(2, 9).sqrt_exact(), None);
        assert_eq!(q(-1, 4).sqrt_exact(), None);
    }

    #[test]
    fn continued_fraction_approximation() {
        assert_eq!(approximate(2.0 / 7.0, 100, 1e-12), Some(q(2, 7)));
        assert_eq!(approximate(-0.5, 10, 1e-12), Some(q(-1, 2)));
        assert_eq!(approximate(0.0, 10, 1e-12), Some(Rational::ZERO));
        // a fixed window admits a spurious convergent; a 1/q-shrinking one does not
        let x = 1.0 / std::f64::consts::TAU;
        assert_eq!(approximate(x, 1_000_000, 1e-11), Some(q(49766, 312689)));
        assert_eq!(approximate_by(x, 1_000_000, |d| 1e-9 / d as f64), None);
        assert_eq!(approximate(std::f64::consts::PI, 1000, 1e-12), None);
    }

    #[test]
    fn fractional_part() {
        assert_eq!(q(-1, 6).fract_floor(), q(5, 6));
        assert_eq!(q(7, 3).fract_floor(), q(1, 3));
    }

    proptest! {
        #[test]
        fn addition_matches_cross_multiplication(
            a in -1_000_000i128..1_000_000, b in 1i128..1_000_000,
            c in -1_000_000i128..1_000_000, d in 1i128..1_000_000,
        ) {
            let s = q(a, b).checked_add(&q(c, d)).unwrap();
            // s = (ad + cb) / bd  <=>  s.num * bd == (ad + cb) * s.den
            prop_assert_eq!(s.numer() * (b * d), (a * d + c * b) * s.denom());
            prop_assert!(s.denom() > 0);
            prop_assert_eq!(s.numer().gcd(&s.denom()), 1);
        }

        #[test]
        fn mul_div_roundtrip(a in -10_000i128..10_000, b in 1i128..10_000, c in 1i128..10_000, d in 1i128..10_000) {
            let x = q(a, b);
            let y = q(c, d);
            prop_assert_eq!(x.checked_mul(&y).unwrap().checked_div(&y).unwrap(), x);
        }
    }
}
