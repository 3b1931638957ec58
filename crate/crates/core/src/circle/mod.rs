//! Orientation-preserving circle homeomorphisms: Poincaré translation and
//! rotation numbers, the canonical section `F(0) ∈ [0, 1)`, its integer
//! Euler cocycle, and the pullback check along `k ↦ g^k`.

mod ghys;
mod lift;

pub use ghys::{ghys_check, ghys_check_with, pulled_back_euler_cocycle, GhysOptions, GhysReport};
pub use lift::{
    canonical_section_circle, compose, CircleCoverElement, CircleLift, PlLift, PL_BREAKPOINT_BUDGET,
};

use crate::error::{Error, Result};
use crate::translation::{convergence_ks, ConvergenceRow, TranslationNumber};

pub const DEFAULT_CIRCLE_ITERATIONS: u64 = 100_000;

/// `τ(F) ≈ Fⁿ(0)/n` with the classical bound `|Fⁿ(0) − nτ| ≤ 1`.
///
/// Rigid rotations are answered in closed form.
pub fn translation_number_circle(f: &CircleCoverElement, n_iter: u64) -> Result<TranslationNumber> {
    if n_iter == 0 {
        return Err(Error::InvalidArgument("n_iter must be positive".into()));
    }
    if let CircleLift::Rigid { alpha } = f.lift {
        return Ok(TranslationNumber {
            lift_part: alpha,
            deck: f.deck_offset,
            error_radius: 0.0,
        });
    }
    let mut x = 0.0;
    for _ in 0..n_iter {
        x = f.lift.eval(x);
    }
    Ok(TranslationNumber {
        lift_part: x / n_iter as f64,
        deck: f.deck_offset,
        error_radius: 1.0 / n_iter as f64,
    })
}

/// `F^k(0)/k` at `k = 1, 2, 4, …, k_max`, with bound `1/k` (zero for rigid
/// rotations, which are exact).
pub fn convergence_table_circle(f: &CircleLift, k_max: u64) -> Result<Vec<ConvergenceRow>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    let ks = convergence_ks(k_max);
    let mut rows = Vec::with_capacity(ks.len());
    let (mut x, mut done) = (0.0, 0u64);
    for k in ks {
        let estimate = match f {
            CircleLift::Rigid { alpha } => *alpha,
            _ => {
                for _ in done..k {
                    x = f.eval(x);
                }
                done = k;
                x / k as f64
            }
        };
        let error_bound = if matches!(f, CircleLift::Rigid { .. }) { 0.0 } else { 1.0 / k as f64 };
        rows.push(ConvergenceRow {
            k,
            estimate,
            error_bound,
        });
    }
    Ok(rows)
}

/// Integer `m` with `s(g) ∘ s(h) = s(gh) + m` for the canonical section.
pub fn euler_cocycle_circle(g: &CircleLift, h: &CircleLift) -> Result<i64> {
    let sg = canonical_section_circle(g);
    let sh = canonical_section_circle(h);
    let sgh = canonical_section_circle(&g.compose(h)?);
    let raw = sg.eval(sh.eval(0.0)) - sgh.eval(0.0);
    round_checked(raw, "circle Euler cocycle")
}

pub(crate) fn round_checked(raw: f64, what: &'static str) -> Result<i64> {
    let m = raw.round();
    let residual = (raw - m).abs();
    if residual.is_nan() || residual > 0.1 {
        return Err(Error::Inconsistent {
            what,
            residual,
            limit: 0.1,
        });
    }
    Ok(m as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rigid(a: f64) -> CircleLift {
        CircleLift::rigid(a).unwrap()
    }

    #[test]
    fn rigid_translation_is_exact() {
        let t = translation_number_circle(&CircleCoverElement::new(rigid(0.3), 0), 7).unwrap();
        assert_eq!((t.value(), t.error_radius), (0.3, 0.0));
        let deck = CircleCoverElement::new(CircleLift::identity(), 1);
        assert_eq!(translation_number_circle(&deck, 1).unwrap().value(), 1.0);
        assert!(translation_number_circle(&deck, 0).is_err());
    }

    #[test]
    fn arnold_translation_matches_long_run() {
        let f = CircleCoverElement::new(CircleLift::arnold(0.4, 0.9).unwrap(), 0);
        let short = translation_number_circle(&f, 100_000).unwrap();
        let long = translation_number_circle(&f, 10_000_000).unwrap();
        assert!((short.value() - long.value()).abs() < 1e-4);
        assert!((short.value() - long.value()).abs() <= short.error_radius + long.error_radius);
    }

    #[test]
    fn euler_cocycle_examples() {
        assert_eq!(euler_cocycle_circle(&rigid(0.6), &rigid(0.7)).unwrap(), 1);
        assert_eq!(euler_cocycle_circle(&rigid(0.2), &rigid(0.3)).unwrap(), 0);
        let h = CircleLift::arnold(0.77, 0.5).unwrap();
        assert_eq!(euler_cocycle_circle(&CircleLift::identity(), &h).unwrap(), 0);
    }

    #[test]
    fn convergence_tables() {
        let rows = convergence_table_circle(&rigid(0.3), 64).unwrap();
        assert_eq!(rows.len(), 7);
        assert!(rows.iter().all(|r| r.estimate == 0.3 && r.error_bound == 0.0));
        let g = CircleLift::arnold(0.4, 0.9).unwrap();
        let rows = convergence_table_circle(&g, 1 << 12).unwrap();
        let last = *rows.last().unwrap();
        assert!(rows.windows(2).all(|w| w[1].error_bound <= w[0].error_bound));
        let tau = translation_number_circle(&CircleCoverElement::new(g, 0), 1 << 12).unwrap();
        assert_eq!(last.estimate, tau.value());
    }
}
