use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::lift::CircleLift;
use super::{translation_number_circle, CircleCoverElement, DEFAULT_CIRCLE_ITERATIONS};
use crate::cohomology::{
    extract_class_with, ClassValue, ExtractOptions, FloorMultiplier, IntegerCochain2, Table2,
    DEFAULT_COCYCLE_WINDOW, DEFAULT_EXTRACTION_N,
};
use crate::error::Result;

/// Largest argument reached by exact doublings during extraction.
const DOUBLING_CEILING: u64 = 1 << 44;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhysOptions {
    pub window: u64,
    pub n: u64,
    pub n_iter: u64,
    /// Exact doublings for the extraction; `None` picks the maximum the
    /// cocycle supports (rigid rotations only).
    pub doublings: Option<u32>,
}

impl Default for GhysOptions {
    fn default() -> Self {
        Self {
            window: DEFAULT_COCYCLE_WINDOW,
            n: DEFAULT_EXTRACTION_N,
            n_iter: DEFAULT_CIRCLE_ITERATIONS,
            doublings: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhysReport {
    /// Class of the pulled-back bounded Euler cocycle in ℝ/ℤ.
    pub class: ClassValue,
    /// Poincaré rotation number of `g`.
    pub rho: ClassValue,
    pub difference_mod1: f64,
    /// `max |χ(g^k, g^l)|` over the window.
    pub chi_max_abs: u64,
}

impl GhysReport {
    pub fn combined_radius(&self) -> f64 {
        self.class.error_radius + self.rho.error_radius
    }
}

/// Orbit of one point under `F` and `F⁻¹`, grown on demand.
struct Orbit {
    forward: Vec<f64>,
    backward: Vec<f64>,
}

impl Orbit {
    fn new(start: f64) -> Self {
        Self {
            forward: vec![start],
            backward: vec![start],
        }
    }

    fn at(&mut self, lift: &CircleLift, k: i64) -> f64 {
        let (seq, steps) = if k >= 0 {
            (&mut self.forward, k as usize)
        } else {
            (&mut self.backward, k.unsigned_abs() as usize)
        };
        while seq.len() <= steps {
            let last = *seq.last().unwrap();
            seq.push(if k >= 0 { lift.eval(last) } else { lift.eval_inverse(last) });
        }
        seq[steps]
    }
}

struct OrbitCache {
    lift: CircleLift,
    orbit: Mutex<Orbit>,
}

impl OrbitCache {
    /// `s(g^k)(s(g^l)(0)) − s(g^{k+l})(0)` for the section `s(g^j) = F^j − d_j`,
    /// `d_j = ⌊F^j(0)⌋`.
    ///
    /// `F^k` commutes with integer translation, so `F^k(F^l(0) − d_l)` is
    /// `F^{k+l}(0) − d_l` and the value is `d_{k+l} − d_k − d_l`. Reading all
    /// three floors off one memoized orbit keeps the cocycle identity exact;
    /// iterating a second orbit from `F^l(0) − d_l` would not, since backward
    /// orbits of contracting maps amplify rounding.
    fn chi(&self, k: i64, l: i64) -> Result<i64> {
        let mut orbit = self.orbit.lock().unwrap_or_else(|e| e.into_inner());
        let kl = k.checked_add(l).ok_or(crate::Error::Overflow("power index"))?;
        let mut d = |j: i64| orbit.at(&self.lift, j).floor() as i64;
        Ok(d(kl) - d(k) - d(l))
    }
}

enum Powers {
    Rigid(FloorMultiplier),
    Iterated(OrbitCache),
}

/// `(k, l) ↦ χ(g^k, g^l)`, the Euler cocycle of the canonical section pulled
/// back along `k ↦ g^k`.
pub fn pulled_back_euler_cocycle(g: &CircleLift) -> Result<IntegerCochain2> {
    let powers = Arc::new(match g {
        // floors of kα taken exactly
        CircleLift::Rigid { alpha } => Powers::Rigid(FloorMultiplier::new(*alpha)?),
        other => Powers::Iterated(OrbitCache {
            lift: other.clone(),
            orbit: Mutex::new(Orbit::new(0.0)),
        }),
    });
    Ok(IntegerCochain2::from_fn(move |k, l| match &*powers {
        Powers::Rigid(m) => {
            let kl = k.checked_add(l).ok_or(crate::Error::Overflow("power index"))?;
            Ok(m.floor_mul(kl)? - m.floor_mul(k)? - m.floor_mul(l)?)
        }
        Powers::Iterated(cache) => cache.chi(k, l),
    }))
}

pub fn ghys_check(g: &CircleLift, window: u64, n: u64) -> Result<GhysReport> {
    ghys_check_with(
        g,
        &GhysOptions {
            window,
            n,
            ..GhysOptions::default()
        },
    )
}

/// Extract the class of `φ_g^* χ` and compare it with `ρ(g)`.
///
/// For a rigid rotation by `α` the pulled-back cocycle is `−δβ_α`, whose
/// class under `r ↦ −[δβ_r]` is `α`; the extraction is therefore applied to
/// `φ_g^* χ` itself.
pub fn ghys_check_with(g: &CircleLift, opts: &GhysOptions) -> Result<GhysReport> {
    let chi = pulled_back_euler_cocycle(g)?.with_window_hint(opts.window);
    let doublings = opts.doublings.unwrap_or_else(|| match g {
        CircleLift::Rigid { .. } => max_doublings(opts.n),
        _ => 0,
    });
    let class = extract_class_with(
        &chi,
        &ExtractOptions {
            n: opts.n,
            window: opts.window,
            doublings,
        },
    )?;
    let w = opts.window as i64;
    let chi_max_abs = Table2::build(&chi, w)?.max_abs();
    let rho = translation_number_circle(&CircleCoverElement::new(g.clone(), 0), opts.n_iter)?.rotation();
    Ok(GhysReport {
        class,
        rho,
        difference_mod1: class.distance(&rho),
        chi_max_abs,
    })
}

fn max_doublings(n: u64) -> u32 {
    let mut d = 0;
    while n > 0 && (n << (d + 1)) <= DOUBLING_CEILING {
        d += 1;
    }
    d
}
