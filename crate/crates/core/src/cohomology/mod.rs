//! Cochain calculus over the group ℤ.
//!
//! Coboundaries, cocycle checks, quasi-morphism defects and homogenization,
//! the floor cocycles `c_r`, and the identification of a bounded integral
//! 2-class on ℤ with an element of ℝ/ℤ: the class of a bounded cocycle `c`
//! is the `r ∈ [0,1)` with `[c] = −[δβ_r]`, where `β_r(n) = ⌊rn⌋`.

mod cochain;
pub mod floor;

use serde::{Deserialize, Serialize};

pub use cochain::{Eval1, Eval2, IntegerCochain1, IntegerCochain2, DEFAULT_WINDOW_HINT};
pub use floor::FloorMultiplier;

pub(crate) use cochain::Table2;
use crate::error::{Error, Result};

pub const DEFAULT_COCYCLE_WINDOW: u64 = 64;
pub const DEFAULT_DEFECT_WINDOW: u64 = 256;
pub const DEFAULT_EXTRACTION_N: u64 = 10_000;

/// An element of ℝ/ℤ, stored as its representative in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassValue {
    pub value: f64,
    pub error_radius: f64,
}

impl ClassValue {
    /// Reduce a real number mod 1.
    pub fn from_real(x: f64, error_radius: f64) -> Self {
        Self {
            value: reduce_mod1(x),
            error_radius,
        }
    }

    /// Distance to `other` on the circle ℝ/ℤ, in `[0, 1/2]`.
    pub fn distance(&self, other: &ClassValue) -> f64 {
        circle_distance(self.value, other.value)
    }

    pub fn distance_to(&self, x: f64) -> f64 {
        circle_distance(self.value, x)
    }
}

pub fn reduce_mod1(x: f64) -> f64 {
    let v = x.rem_euclid(1.0);
    // also maps −0.0 to 0.0
    if v >= 1.0 || v == 0.0 {
        0.0
    } else {
        v
    }
}

/// `|a − b|` measured in ℝ/ℤ.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = reduce_mod1(a - b);
    d.min(1.0 - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectEstimate {
    /// `max |δf|` over the scanned window.
    pub value: u64,
    pub window: u64,
    /// The scanned maximum equals the closed-form supremum over all of ℤ².
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Homogenized {
    pub value: f64,
    pub error_radius: f64,
}

/// `δf(n, m) = f(m) − f(n+m) + f(n)`, exactly.
pub fn coboundary1(f: &IntegerCochain1, n: i64, m: i64) -> Result<i64> {
    let s = n.checked_add(m).ok_or(Error::Overflow("coboundary argument"))?;
    f.eval(m)?
        .checked_sub(f.eval(s)?)
        .and_then(|v| v.checked_add(f.eval(n).ok()?))
        .ok_or(Error::Overflow("coboundary"))
}

/// `δc(a, b, d) = c(b, d) − c(a+b, d) + c(a, b+d) − c(a, b)`, exactly.
pub fn coboundary2(c: &IntegerCochain2, a: i64, b: i64, d: i64) -> Result<i64> {
    let ab = a.checked_add(b).ok_or(Error::Overflow("coboundary argument"))?;
    let bd = b.checked_add(d).ok_or(Error::Overflow("coboundary argument"))?;
    delta2([c.eval(b, d)?, c.eval(ab, d)?, c.eval(a, bd)?, c.eval(a, b)?])
}

#[inline]
fn delta2([x, y, z, w]: [i64; 4]) -> Result<i64> {
    x.checked_sub(y)
        .and_then(|v| v.checked_add(z))
        .and_then(|v| v.checked_sub(w))
        .ok_or(Error::Overflow("coboundary"))
}

/// First triple in `[-window, window]³` where `δc ≠ 0`, if any.
pub fn find_cocycle_violation(c: &IntegerCochain2, window: u64) -> Result<Option<(i64, i64, i64, i64)>> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    let w = window as i64;
    let table = Table2::build(c, 2 * w)?;
    for a in -w..=w {
        for b in -w..=w {
            for d in -w..=w {
                let v = delta2([
                    table.get(b, d),
                    table.get(a + b, d),
                    table.get(a, b + d),
                    table.get(a, b),
                ])?;
                if v != 0 {
                    return Ok(Some((a, b, d, v)));
                }
            }
        }
    }
    Ok(None)
}

/// True iff `δc` vanishes on every triple in `[-window, window]³`.
pub fn cocycle_check2(c: &IntegerCochain2, window: u64) -> Result<bool> {
    Ok(find_cocycle_violation(c, window)?.is_none())
}

/// `max |δf|` over `[-window, window]²`.
pub fn defect(f: &IntegerCochain1, window: u64) -> Result<DefectEstimate> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    let w = window as i64;
    let values = (-2 * w..=2 * w).map(|n| f.eval(n)).collect::<Result<Vec<_>>>()?;
    let at = |n: i64| values[(n + 2 * w) as usize];
    let mut max = 0u64;
    for n in -w..=w {
        for m in -w..=w {
            let v = delta2([at(m), at(n + m), at(n), 0])?;
            max = max.max(v.unsigned_abs());
        }
    }
    let exact = f.closed_form_defect() == Some(max);
    Ok(DefectEstimate {
        value: max,
        window,
        exact,
    })
}

/// Homogenization `lim f(k)/k` estimated at `k = k_max`, with the
/// quasi-morphism bound `|f(k)/k − f̄(1)| ≤ D/k`.
///
/// `D` is the closed-form defect when the cochain has one, otherwise the
/// measured defect on `min(k_max, DEFAULT_DEFECT_WINDOW)`.
pub fn homogenize(f: &IntegerCochain1, k_max: u64) -> Result<Homogenized> {
    let d = match f.closed_form_defect() {
        Some(d) => d,
        None => defect(f, k_max.clamp(1, DEFAULT_DEFECT_WINDOW))?.value,
    };
    homogenize_with_defect(f, k_max, d as f64)
}

pub fn homogenize_with_defect(f: &IntegerCochain1, k_max: u64, defect: f64) -> Result<Homogenized> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    let k = i64::try_from(k_max).map_err(|_| Error::Overflow("k_max"))?;
    Ok(Homogenized {
        value: f.eval(k)? as f64 / k_max as f64,
        error_radius: defect / k_max as f64,
    })
}

/// `c_r(n, m) = ⌊rn⌋ + ⌊rm⌋ − ⌊r(n+m)⌋ ∈ {−1, 0}`.
pub fn floor_cocycle(r: f64, n: i64, m: i64) -> Result<i64> {
    cochain::floor_cocycle_with(&FloorMultiplier::new(r)?, n, m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions {
    /// Argument at which the primitive is read off.
    pub n: u64,
    /// Window for the cocycle check and the defect of the primitive.
    pub window: u64,
    /// Extra exact doublings `f(2x) = 2f(x) − c(x, x)` applied after `n`.
    /// Only useful when the cocycle is cheap to evaluate at large arguments.
    pub doublings: u32,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            n: DEFAULT_EXTRACTION_N,
            window: DEFAULT_COCYCLE_WINDOW,
            doublings: 0,
        }
    }
}

/// The `r ∈ [0,1)` with `[c] = −[δβ_r]` in bounded cohomology of ℤ.
///
/// A primitive `f` with `δf = c` is built by `f(0) = c(0,0)`, `f(1) = 0`,
/// `f(n+1) = f(n) − c(n, 1)` and `f(−n) = c(n, −n) + f(0) − f(n)`. Pinning
/// `f(1) = 0` fixes `f` only up to a homomorphism, which changes `f(N)/N`
/// by an integer and leaves the class alone. Then `r = −f(N)/N mod 1` with
/// radius `B/N`, `B` the measured defect of `f`.
pub fn extract_class(c: &IntegerCochain2, n: u64) -> Result<ClassValue> {
    extract_class_with(
        c,
        &ExtractOptions {
            n,
            window: c.window_hint(),
            ..ExtractOptions::default()
        },
    )
}

pub fn extract_class_with(c: &IntegerCochain2, opts: &ExtractOptions) -> Result<ClassValue> {
    if opts.n == 0 || opts.window == 0 {
        return Err(Error::InvalidArgument("N and window must be positive".into()));
    }
    if let Some((a, b, d, value)) = find_cocycle_violation(c, opts.window)? {
        return Err(Error::NotCocycle { a, b, c: d, value });
    }
    let w = opts.window as i64;
    let n = i64::try_from(opts.n).map_err(|_| Error::Overflow("N"))?;
    let reach = n.max(2 * w);

    let mut positive = Vec::with_capacity(reach as usize + 1);
    positive.push(c.eval(0, 0)?);
    positive.push(0i64);
    for k in 1..reach {
        let next = positive[k as usize]
            .checked_sub(c.eval(k, 1)?)
            .ok_or(Error::Overflow("primitive recursion"))?;
        positive.push(next);
    }
    let mut negative = Vec::with_capacity(2 * w as usize + 1);
    negative.push(positive[0]);
    for k in 1..=2 * w {
        let v = c
            .eval(k, -k)?
            .checked_add(positive[0])
            .and_then(|v| v.checked_sub(positive[k as usize]))
            .ok_or(Error::Overflow("primitive recursion"))?;
        negative.push(v);
    }
    let f = |k: i64| {
        if k >= 0 {
            positive[k as usize]
        } else {
            negative[(-k) as usize]
        }
    };

    let mut bound = 0u64;
    for a in -w..=w {
        for b in -w..=w {
            bound = bound.max(delta2([f(b), f(a + b), f(a), 0])?.unsigned_abs());
        }
    }

    let (mut x, mut fx) = (n, f(n));
    for _ in 0..opts.doublings {
        fx = fx
            .checked_mul(2)
            .and_then(|v| v.checked_sub(c.eval(x, x).ok()?))
            .ok_or(Error::Overflow("primitive doubling"))?;
        x = x.checked_mul(2).ok_or(Error::Overflow("primitive doubling"))?;
    }

    let radius = bound as f64 / x as f64;
    if radius >= 0.5 {
        return Err(Error::ExtractionUnstable { radius });
    }
    Ok(ClassValue::from_real(-(fx as f64) / x as f64, radius))
}
