//! Lifts of orientation-preserving circle homeomorphisms to ℝ.
//!
//! Every lift commutes with integer translations, `F(x + 1) = F(x) + 1`;
//! periodicity is built into evaluation rather than stored.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Breakpoint cap when materializing compositions of piecewise-linear lifts.
pub const PL_BREAKPOINT_BUDGET: usize = 100_000;

/// A piecewise-linear lift given by knots `(x_i, F(x_i))` with `x_i ∈ [0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlLift {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PlLift {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidArgument("piecewise-linear lift needs at least one knot".into()));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = knots.into_iter().unzip();
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("knots must be finite".into()));
        }
        if xs[0] < 0.0 || *xs.last().unwrap() >= 1.0 {
            return Err(Error::InvalidArgument("knot abscissae must lie in [0, 1)".into()));
        }
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&xs) {
            return Err(Error::InvalidArgument("knot abscissae must be strictly increasing".into()));
        }
        if !increasing(&ys) || *ys.last().unwrap() >= ys[0] + 1.0 {
            return Err(Error::InvalidArgument("lift must be strictly increasing".into()));
        }
        Ok(Self { xs, ys })
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    fn eval(&self, x: f64) -> f64 {
        let k = x.floor();
        let u = x - k;
        let m = self.xs.len();
        let (x0, y0, x1, y1) = if u < self.xs[0] {
            (self.xs[m - 1] - 1.0, self.ys[m - 1] - 1.0, self.xs[0], self.ys[0])
        } else if u >= self.xs[m - 1] {
            (self.xs[m - 1], self.ys[m - 1], self.xs[0] + 1.0, self.ys[0] + 1.0)
        } else {
            let i = self.xs.partition_point(|&v| v <= u) - 1;
            (self.xs[i], self.ys[i], self.xs[i + 1], self.ys[i + 1])
        };
        y0 + (u - x0) * (y1 - y0) / (x1 - x0) + k
    }

    fn eval_inverse(&self, y: f64) -> f64 {
        let j = (y - self.ys[0]).floor();
        let v = y - j;
        let m = self.xs.len();
        let (x0, y0, x1, y1) = if v >= self.ys[m - 1] {
            (self.xs[m - 1], self.ys[m - 1], self.xs[0] + 1.0, self.ys[0] + 1.0)
        } else {
            let i = self.ys.partition_point(|&w| w <= v).saturating_sub(1);
            (self.xs[i], self.ys[i], self.xs[i + 1], self.ys[i + 1])
        };
        x0 + (v - y0) * (x1 - x0) / (y1 - y0) + j
    }
}

/// A lift `F: ℝ → ℝ` of an element of Homeo₊(S¹).
#[derive(Debug, Clone, PartialEq)]
pub enum CircleLift {
    /// `x ↦ x + α`
    Rigid { alpha: f64 },
    /// `x ↦ x + ω + (K/2π) sin(2πx)` with `0 ≤ K < 1`.
    Arnold { omega: f64, coupling: f64 },
    PiecewiseLinear(PlLift),
    /// Composition, applied from the last factor to the first.
    Composite(Vec<CircleLift>),
}

impl CircleLift {
    pub fn identity() -> Self {
        CircleLift::Rigid { alpha: 0.0 }
    }

    pub fn rigid(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite(alpha));
        }
        Ok(CircleLift::Rigid { alpha })
    }

    pub fn arnold(omega: f64, coupling: f64) -> Result<Self> {
        if !omega.is_finite() || !coupling.is_finite() {
            return Err(Error::InvalidArgument("Arnold parameters must be finite".into()));
        }
        if !(0.0..1.0).contains(&coupling) {
            return Err(Error::InvalidArgument(format!(
                "Arnold coupling must satisfy 0 <= K < 1, got {coupling}"
            )));
        }
        Ok(CircleLift::Arnold { omega, coupling })
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        PlLift::new(knots).map(CircleLift::PiecewiseLinear)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            CircleLift::Rigid { alpha } => x + alpha,
            CircleLift::Arnold { omega, coupling } => x + omega + coupling / TAU * (TAU * x).sin(),
            CircleLift::PiecewiseLinear(pl) => pl.eval(x),
            CircleLift::Composite(parts) => parts.iter().rev().fold(x, |acc, f| f.eval(acc)),
        }
    }

    pub fn eval_inverse(&self, y: f64) -> f64 {
        match self {
            CircleLift::Rigid { alpha } => y - alpha,
            CircleLift::Arnold { omega, coupling } => arnold_inverse(*omega, *coupling, y),
            CircleLift::PiecewiseLinear(pl) => pl.eval_inverse(y),
            CircleLift::Composite(parts) => parts.iter().fold(y, |acc, f| f.eval_inverse(acc)),
        }
    }

    fn as_pl(&self) -> Option<PlLift> {
        match self {
            CircleLift::Rigid { alpha } => Some(PlLift {
                xs: vec![0.0],
                ys: vec![*alpha],
            }),
            CircleLift::PiecewiseLinear(pl) => Some(pl.clone()),
            _ => None,
        }
    }

    /// `self ∘ inner`. Rigid and piecewise-linear factors are materialized;
    /// anything involving an Arnold map stays a formal composition.
    pub fn compose(&self, inner: &CircleLift) -> Result<CircleLift> {
        use CircleLift::*;
        match (self, inner) {
            (Rigid { alpha: a }, Rigid { alpha: b }) => Ok(Rigid { alpha: a + b }),
            (Rigid { alpha }, _) if *alpha == 0.0 => Ok(inner.clone()),
            (_, Rigid { alpha }) if *alpha == 0.0 => Ok(self.clone()),
            (PiecewiseLinear(_), Rigid { .. })
            | (Rigid { .. }, PiecewiseLinear(_))
            | (PiecewiseLinear(_), PiecewiseLinear(_)) => {
                let (outer, inner_pl) = (self.as_pl().unwrap(), inner.as_pl().unwrap());
                compose_pl(&outer, &inner_pl).map(PiecewiseLinear)
            }
            _ => {
                let mut parts = Vec::new();
                for f in [self, inner] {
                    match f {
                        Composite(p) => parts.extend(p.iter().cloned()),
                        other => parts.push(other.clone()),
                    }
                }
                Ok(Composite(parts))
            }
        }
    }
}

fn compose_pl(outer: &PlLift, inner: &PlLift) -> Result<PlLift> {
    let mut xs: Vec<f64> = inner.xs.clone();
    for &xf in &outer.xs {
        let x = inner.eval_inverse(xf);
        xs.push(x - x.floor());
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    xs.retain(|x| *x < 1.0);
    if xs.len() > PL_BREAKPOINT_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "piecewise-linear composition",
            limit: PL_BREAKPOINT_BUDGET,
        });
    }
    let ys: Vec<f64> = xs.iter().map(|&x| outer.eval(inner.eval(x))).collect();
    PlLift::new(xs.into_iter().zip(ys).collect())
}

fn arnold_inverse(omega: f64, coupling: f64, y: f64) -> f64 {
    // F(x) − x is 1-periodic with range [ω − K/2π, ω + K/2π]
    let spread = coupling / TAU;
    let (mut lo, mut hi) = (y - omega - spread, y - omega + spread);
    let f = |x: f64| x + omega + spread * (TAU * x).sin();
    let mut x = y - omega;
    for _ in 0..100 {
        let fx = f(x) - y;
        if fx == 0.0 {
            return x;
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let step = fx / (1.0 + coupling * (TAU * x).cos());
        let next = x - step;
        x = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if step.abs() <= 1e-16 * x.abs().max(1.0) || hi - lo <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// An element of the universal cover: a lift shifted by an integer deck offset.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleCoverElement {
    pub lift: CircleLift,
    pub deck_offset: i64,
}

impl CircleCoverElement {
    pub fn new(lift: CircleLift, deck_offset: i64) -> Self {
        Self { lift, deck_offset }
    }

    pub fn identity() -> Self {
        Self::new(CircleLift::identity(), 0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.lift.eval(x) + self.deck_offset as f64
    }

    pub fn shifted(&self, m: i64) -> Self {
        Self::new(self.lift.clone(), self.deck_offset + m)
    }
}

/// Group law in the cover: `(F ∘ G)(x) = F(G(x))`; deck offsets add.
pub fn compose(f: &CircleCoverElement, g: &CircleCoverElement) -> Result<CircleCoverElement> {
    Ok(CircleCoverElement::new(
        f.lift.compose(&g.lift)?,
        f.deck_offset + g.deck_offset,
    ))
}

/// The lift of `g` normalized so that `F(0) ∈ [0, 1)`.
pub fn canonical_section_circle(g: &CircleLift) -> CircleCoverElement {
    CircleCoverElement::new(g.clone(), -(g.eval(0.0).floor() as i64))
}
