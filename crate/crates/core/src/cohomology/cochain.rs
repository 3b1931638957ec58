//! Integer cochains on the group ℤ, evaluated lazily.

use std::fmt;
use std::sync::Arc;

use super::floor::FloorMultiplier;
use crate::error::{Error, Result};

pub type Eval1 = Arc<dyn Fn(i64) -> Result<i64> + Send + Sync>;
pub type Eval2 = Arc<dyn Fn(i64, i64) -> Result<i64> + Send + Sync>;

/// Default evaluation window used when a cochain does not say otherwise.
pub const DEFAULT_WINDOW_HINT: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Shape1 {
    /// `n ↦ ⌊r n⌋`
    Floor(FloorMultiplier),
    /// `n ↦ a n`
    Linear(i64),
    General,
}

/// A map `ℤ → ℤ`.
#[derive(Clone)]
pub struct IntegerCochain1 {
    eval: Eval1,
    window_hint: u64,
    pub(crate) shape: Shape1,
}

impl IntegerCochain1 {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(i64) -> Result<i64> + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            window_hint: DEFAULT_WINDOW_HINT,
            shape: Shape1::General,
        }
    }

    /// The floor cochain `β_r(n) = ⌊r n⌋`.
    pub fn floor(r: f64) -> Result<Self> {
        let m = FloorMultiplier::new(r)?;
        Ok(Self {
            eval: Arc::new(move |n| m.floor_mul(n)),
            window_hint: DEFAULT_WINDOW_HINT,
            shape: Shape1::Floor(m),
        })
    }

    /// The homomorphism `n ↦ slope · n`.
    pub fn linear(slope: i64) -> Self {
        Self {
            eval: Arc::new(move |n| slope.checked_mul(n).ok_or(Error::Overflow("linear cochain"))),
            window_hint: DEFAULT_WINDOW_HINT,
            shape: Shape1::Linear(slope),
        }
    }

    pub fn with_window_hint(mut self, window: u64) -> Self {
        self.window_hint = window.max(1);
        self
    }

    pub fn window_hint(&self) -> u64 {
        self.window_hint
    }

    pub fn eval(&self, n: i64) -> Result<i64> {
        (self.eval)(n)
    }

    /// `sup |δf|` over all of ℤ², when it is known in closed form.
    pub fn closed_form_defect(&self) -> Option<u64> {
        match self.shape {
            Shape1::Floor(m) if m.is_integer() => Some(0),
            Shape1::Floor(_) => Some(1),
            Shape1::Linear(_) => Some(0),
            Shape1::General => None,
        }
    }
}

impl fmt::Debug for IntegerCochain1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegerCochain1")
            .field("shape", &self.shape)
            .field("window_hint", &self.window_hint)
            .finish()
    }
}

/// A map `ℤ² → ℤ`.
#[derive(Clone)]
pub struct IntegerCochain2 {
    eval: Eval2,
    window_hint: u64,
}

impl IntegerCochain2 {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(i64, i64) -> Result<i64> + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            window_hint: DEFAULT_WINDOW_HINT,
        }
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| Ok(0))
    }

    /// The floor cocycle `c_r(n, m) = ⌊rn⌋ + ⌊rm⌋ − ⌊r(n+m)⌋`.
    pub fn floor_cocycle(r: f64) -> Result<Self> {
        let m = FloorMultiplier::new(r)?;
        Ok(Self::from_fn(move |a, b| floor_cocycle_with(&m, a, b)))
    }

    /// The coboundary `δf` of a 1-cochain, as a 2-cochain.
    pub fn coboundary_of(f: &IntegerCochain1) -> Self {
        let f = f.clone();
        let hint = f.window_hint;
        Self::from_fn(move |n, m| super::coboundary1(&f, n, m)).with_window_hint(hint)
    }

    pub fn with_window_hint(mut self, window: u64) -> Self {
        self.window_hint = window.max(1);
        self
    }

    pub fn window_hint(&self) -> u64 {
        self.window_hint
    }

    pub fn eval(&self, n: i64, m: i64) -> Result<i64> {
        (self.eval)(n, m)
    }

    pub fn negated(&self) -> Self {
        let inner = self.eval.clone();
        Self {
            eval: Arc::new(move |n, m| {
                inner(n, m)?
                    .checked_neg()
                    .ok_or(Error::Overflow("cochain negation"))
            }),
            window_hint: self.window_hint,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Self {
            eval: Arc::new(move |n, m| {
                a(n, m)?
                    .checked_add(b(n, m)?)
                    .ok_or(Error::Overflow("cochain sum"))
            }),
            window_hint: self.window_hint.max(other.window_hint),
        }
    }
}

impl fmt::Debug for IntegerCochain2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegerCochain2")
            .field("window_hint", &self.window_hint)
            .finish()
    }
}

pub(crate) fn floor_cocycle_with(m: &FloorMultiplier, a: i64, b: i64) -> Result<i64> {
    let s = a.checked_add(b).ok_or(Error::Overflow("floor cocycle"))?;
    let v = m.floor_mul(a)? as i128 + m.floor_mul(b)? as i128 - m.floor_mul(s)? as i128;
    i64::try_from(v).map_err(|_| Error::Overflow("floor cocycle"))
}

/// Values of a 2-cochain on the square `[-r, r]²`, stored densely.
pub(crate) struct Table2 {
    radius: i64,
    side: usize,
    values: Vec<i64>,
}

impl Table2 {
    pub(crate) fn build(c: &IntegerCochain2, radius: i64) -> Result<Self> {
        let side = (2 * radius + 1) as usize;
        let mut values = Vec::with_capacity(side * side);
        for n in -radius..=radius {
            for m in -radius..=radius {
                values.push(c.eval(n, m)?);
            }
        }
        Ok(Self {
            radius,
            side,
            values,
        })
    }

    #[inline]
    pub(crate) fn get(&self, n: i64, m: i64) -> i64 {
        let i = (n + self.radius) as usize;
        let j = (m + self.radius) as usize;
        self.values[i * self.side + j]
    }

    pub(crate) fn max_abs(&self) -> u64 {
        self.values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }
}
