//! Exact evaluation of `⌊r·n⌋` for a double-precision multiplier `r`.
//!
//! A double is an exact dyadic rational, so `r·n` can always be floored without
//! rounding by working in 128-bit integers. The one remaining hazard is
//! intent: `0.7` is stored as `0.69999999999999995559…`, and `⌊0.7·10⌋` taken
//! literally is 6. When `r` is the double nearest to a fraction `p/q` with
//! `q ≤ MAX_GUARD_DENOMINATOR`, the multiplier is treated as that fraction for
//! every `n`, so the floor agrees with the rational the caller wrote.

use crate::error::{Error, Result};

/// Largest denominator accepted when snapping a multiplier to a fraction.
pub const MAX_GUARD_DENOMINATOR: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Repr {
    Rational { num: i64, den: i64 },
    /// `mantissa · 2^exp`, exact.
    Dyadic { mantissa: i64, exp: i32 },
}

/// A finite real multiplier with exact floor arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloorMultiplier {
    value: f64,
    repr: Repr,
}

impl FloorMultiplier {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite(value));
        }
        let (mantissa, exp) = decompose(value);
        let repr = match small_fraction(value, mantissa, exp) {
            Some((num, den)) => Repr::Rational { num, den },
            None => Repr::Dyadic { mantissa, exp },
        };
        Ok(Self { value, repr })
    }

    /// Like [`FloorMultiplier::new`], but snaps to the simplest fraction
    /// `p/q` with `q ≤ max_den` and `|value − p/q| ≤ tol` when one exists.
    pub fn near(value: f64, tol: f64, max_den: i64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite(value));
        }
        let max_den = max_den.clamp(1, MAX_GUARD_DENOMINATOR);
        let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
        let mut x = value;
        for _ in 0..64 {
            let t = x.floor();
            if t.abs() > 1e15 {
                break;
            }
            let (p2, q2) = (t as i128 * p1 + p0, t as i128 * q1 + q0);
            if q2 > max_den as i128 {
                break;
            }
            if (value - p2 as f64 / q2 as f64).abs() <= tol {
                return Ok(Self {
                    value,
                    repr: Repr::Rational {
                        num: p2 as i64,
                        den: q2 as i64,
                    },
                });
            }
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let frac = x - t;
            if frac == 0.0 {
                break;
            }
            x = 1.0 / frac;
        }
        Self::new(value)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// The fraction this multiplier was snapped to, if any.
    pub fn as_fraction(&self) -> Option<(i64, i64)> {
        match self.repr {
            Repr::Rational { num, den } => Some((num, den)),
            Repr::Dyadic { .. } => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        match self.repr {
            Repr::Rational { den, .. } => den == 1,
            Repr::Dyadic { exp, .. } => exp >= 0,
        }
    }

    /// `⌊r·n⌋`, the true mathematical floor (never truncation).
    pub fn floor_mul(&self, n: i64) -> Result<i64> {
        let wide = match self.repr {
            Repr::Rational { num, den } => (num as i128 * n as i128).div_euclid(den as i128),
            Repr::Dyadic { mantissa, exp } => {
                let prod = mantissa as i128 * n as i128;
                if exp >= 0 {
                    if exp >= 64 || prod.unsigned_abs() >= (1u128 << (126 - exp as u32)) {
                        return Err(Error::Overflow("floor(r*n)"));
                    }
                    prod << exp
                } else if exp <= -127 {
                    if prod < 0 {
                        -1
                    } else {
                        0
                    }
                } else {
                    // arithmetic shift rounds toward negative infinity
                    prod >> (-exp) as u32
                }
            }
        };
        i64::try_from(wide).map_err(|_| Error::Overflow("floor(r*n)"))
    }

    /// Fractional part of `r·n` in `[0, 1)`, computed from the exact floor.
    pub fn frac_mul(&self, n: i64) -> Result<f64> {
        let fl = self.floor_mul(n)?;
        let f = match self.repr {
            Repr::Rational { num, den } => {
                let rem = num as i128 * n as i128 - fl as i128 * den as i128;
                rem as f64 / den as f64
            }
            Repr::Dyadic { mantissa, exp } => {
                if exp >= 0 {
                    0.0
                } else if exp <= -127 {
                    (mantissa as f64 * n as f64 * 2f64.powi(exp)).rem_euclid(1.0)
                } else {
                    let k = (-exp) as u32;
                    let rem = mantissa as i128 * n as i128 - ((fl as i128) << k);
                    rem as f64 / 2f64.powi(k as i32)
                }
            }
        };
        Ok(if f >= 1.0 { 0.0 } else { f })
    }
}

/// Split a finite double into `mantissa · 2^exp` with an odd mantissa (or zero).
fn decompose(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (mut m, mut e) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1i64 << 52), biased - 1075)
    };
    let tz = m.trailing_zeros();
    m >>= tz;
    e += tz as i32;
    (sign * m, e)
}

/// Smallest-denominator convergent `p/q` of `x` with `q ≤ MAX_GUARD_DENOMINATOR`
/// whose correctly rounded quotient is `x` itself.
fn small_fraction(x: f64, mantissa: i64, exp: i32) -> Option<(i64, i64)> {
    if exp >= 0 {
        let v = (mantissa as i128) << exp.min(64);
        return i64::try_from(v).ok().filter(|_| exp < 64).map(|p| (p, 1));
    }
    if exp < -120 {
        return None;
    }
    // continued fraction of mantissa / 2^(-exp), exact
    let (mut a, mut b) = (mantissa as i128, 1i128 << (-exp) as u32);
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    while b != 0 {
        let t = a.div_euclid(b);
        let r = a.rem_euclid(b);
        let (p2, q2) = (t * p1 + p0, t * q1 + q0);
        if q2 > MAX_GUARD_DENOMINATOR as i128 {
            break;
        }
        if let (Ok(p), Ok(q)) = (i64::try_from(p2), i64::try_from(q2)) {
            if p as f64 / q as f64 == x {
                return Some((p, q));
            }
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        (a, b) = (b, r);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn true_floor_for_negatives() {
        let r = FloorMultiplier::new(-0.5).unwrap();
        assert_eq!(r.floor_mul(1).unwrap(), -1);
        assert_eq!(r.floor_mul(-1).unwrap(), 0);
        assert_eq!(r.floor_mul(3).unwrap(), -2);
    }

    #[test]
    fn decimal_literals_snap_to_their_fraction() {
        let r = FloorMultiplier::new(0.7).unwrap();
        assert_eq!(r.as_fraction(), Some((7, 10)));
        assert_eq!(r.floor_mul(10).unwrap(), 7);
        assert_eq!(r.floor_mul(-10).unwrap(), -7);
        assert_eq!(r.floor_mul(1_000_000_000_000).unwrap(), 700_000_000_000);
        let third = FloorMultiplier::new(1.0 / 3.0).unwrap();
        assert_eq!(third.as_fraction(), Some((1, 3)));
        assert_eq!(third.floor_mul(3).unwrap(), 1);
    }

    #[test]
    fn irrational_multiplier_uses_exact_dyadic_value() {
        let r = FloorMultiplier::new(std::f64::consts::PI).unwrap();
        assert_eq!(r.as_fraction(), None);
        assert_eq!(r.floor_mul(100_000).unwrap(), 314_159);
        assert_eq!(r.floor_mul(-1).unwrap(), -4);
        // large multiples stay exact
        let n = 1i64 << 40;
        let expected = ((std::f64::consts::PI.to_bits() & ((1 << 52) - 1)) | (1 << 52)) as i128;
        assert_eq!(r.floor_mul(n).unwrap() as i128, (expected * n as i128) >> 51);
    }

    #[test]
    fn near_snaps_within_tolerance() {
        let r = FloorMultiplier::near(0.29999999999999993, 1e-12, 1000).unwrap();
        assert_eq!(r.as_fraction(), Some((3, 10)));
        assert_eq!(r.floor_mul(-30).unwrap(), -9);
        let r = FloorMultiplier::near(-2.0 / 7.0 + 1e-13, 1e-12, 1000).unwrap();
        assert_eq!(r.as_fraction(), Some((-2, 7)));
        let r = FloorMultiplier::near(std::f64::consts::PI, 1e-12, 1000).unwrap();
        assert_eq!(r.as_fraction(), None);
    }

    #[test]
    fn frac_is_in_unit_interval() {
        let r = FloorMultiplier::new(0.123456789).unwrap();
        for n in [-1000i64, -3, 0, 1, 7, 123_456] {
            let f = r.frac_mul(n).unwrap();
            assert!((0.0..1.0).contains(&f));
            let approx = (0.123456789 * n as f64).rem_euclid(1.0);
            assert!((f - approx).abs() < 1e-9 || (f - approx).abs() > 1.0 - 1e-9);
        }
    }

    #[test]
    fn huge_multiplier_overflows_instead_of_wrapping() {
        let r = FloorMultiplier::new(1e300).unwrap();
        assert!(matches!(r.floor_mul(3), Err(Error::Overflow(_))));
        assert!(FloorMultiplier::new(f64::NAN).is_err());
        let tiny = FloorMultiplier::new(-1e-310).unwrap();
        assert_eq!(tiny.floor_mul(5).unwrap(), -1);
        assert_eq!(tiny.floor_mul(0).unwrap(), 0);
    }
}
