use serde::{Deserialize, Serialize};

use super::cover::{canonical_path, cover_multiply, CoverElement, DEFAULT_PATH_SAMPLES};
use super::matrix::SymplecticMatrix;
use super::rotation::{
    measured_defect, power_windings, rotation_number_sp, slope, slope_radius, translation_number_sp, DEFAULT_K_MAX,
};
use crate::cohomology::{
    circle_distance, extract_class_with, find_cocycle_violation, ClassValue, ExtractOptions, FloorMultiplier,
    IntegerCochain1, IntegerCochain2, DEFAULT_COCYCLE_WINDOW, DEFAULT_EXTRACTION_N,
};
use crate::error::{Error, Result};
use crate::translation::TranslationNumber;

pub const SIGMA_RESIDUAL_LIMIT: f64 = 0.1;

/// Entries of the pulled-back table may disagree with `c_r̂` only where
/// `r̂m` is within this many error radii of an integer.
pub const FLAG_FACTOR: f64 = 10.0;

const AMBIGUITY_FLOOR: f64 = 1e-9;
const SNAP_DENOMINATOR: i64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SectionPolicy {
    /// Fail when `τ` is within its error radius of an integer.
    #[default]
    Strict,
    /// Round to the nearest integer instead, so a lift with `τ = 0` up to
    /// noise gets deck offset `0`.
    Snap,
}

/// The lift `s(g)` with `τ(s(g)) ∈ [0, 1)` and its translation number.
pub fn canonical_section_sp(g: &SymplecticMatrix, k_max: u64) -> Result<CoverElement> {
    Ok(section_with(g, k_max, SectionPolicy::Strict)?.0)
}

pub fn section_with(
    g: &SymplecticMatrix,
    k_max: u64,
    policy: SectionPolicy,
) -> Result<(CoverElement, TranslationNumber)> {
    let path = canonical_path(g, DEFAULT_PATH_SAMPLES)?;
    let tau = translation_number_sp(&path, k_max)?;
    let deck = section_deck(tau.value(), tau.error_radius, policy)?;
    Ok((path.shifted(deck), tau.shifted(deck)))
}

fn section_deck(tau: f64, radius: f64, policy: SectionPolicy) -> Result<i64> {
    let nearest = tau.round();
    if (tau - nearest).abs() < radius {
        return match policy {
            SectionPolicy::Strict => Err(Error::SectionBoundary { tau, radius }),
            SectionPolicy::Snap => Ok(-(nearest as i64)),
        };
    }
    Ok(-(tau.floor() as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaValue {
    pub value: i64,
    /// Distance of the raw real computation from `value`.
    pub residual: f64,
}

/// `σ(g, h) = ⌊τ(s(h))⌋ − ⌊τ(s(g)s(h))⌋ + ⌊τ(s(g))⌋ = −⌊τ(s(g)s(h))⌋`.
///
/// `s(g)s(h)` and `s(gh)` lift the same matrix, so their translation numbers
/// differ by the integer deck offset between them, and `τ(s(gh)) ∈ [0, 1)`
/// makes that integer `⌊τ(s(g)s(h))⌋`. The value is read off as the rounded
/// difference, with the distance to the integer as residual.
pub fn sigma_sp(g: &SymplecticMatrix, h: &SymplecticMatrix, k_max: u64) -> Result<SigmaValue> {
    sigma_sp_with(g, h, k_max, SectionPolicy::Strict)
}

pub fn sigma_sp_with(
    g: &SymplecticMatrix,
    h: &SymplecticMatrix,
    k_max: u64,
    policy: SectionPolicy,
) -> Result<SigmaValue> {
    let (sg, _) = section_with(g, k_max, policy)?;
    let (sh, _) = section_with(h, k_max, policy)?;
    let (_, tau_gh) = section_with(&g.mul(h)?, k_max, policy)?;
    let product = translation_number_sp(&cover_multiply(&sg, &sh)?, k_max)?;
    let raw = product.value() - tau_gh.value();
    let m = raw.round();
    let residual = (raw - m).abs();
    if residual.is_nan() || residual > SIGMA_RESIDUAL_LIMIT {
        return Err(Error::Inconsistent {
            what: "symplectic Euler cocycle",
            residual,
            limit: SIGMA_RESIDUAL_LIMIT,
        });
    }
    Ok(SigmaValue {
        value: -(m as i64),
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremOptions {
    pub window: u64,
    pub n: u64,
    pub k_max: u64,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        Self {
            window: DEFAULT_COCYCLE_WINDOW,
            n: DEFAULT_EXTRACTION_N,
            k_max: DEFAULT_K_MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    /// Class of `−φ_g^*σ` in ℝ/ℤ.
    pub class: ClassValue,
    /// Rotation number from the canonical path of `g`.
    pub rho: ClassValue,
    pub difference_mod1: f64,
    /// `τ(s(g))`.
    pub r_hat: TranslationNumber,
    /// `φ_g^*σ(k, l)` for `k, l ∈ [−window, window]`, row `k + window`.
    pub sigma_table: Vec<Vec<i64>>,
    pub sigma_max_abs: u64,
    /// `D̂` of the winding along the powers of `s(g)`.
    pub defect: f64,
    /// `δ(φ_g^*σ)` vanishes on `[−window, window]³`.
    pub cocycle_holds: bool,
    /// Entries where `−φ_g^*σ ≠ −c_r̂` but `r̂` is too uncertain to decide.
    pub table_flagged: usize,
    /// Entries where `−φ_g^*σ ≠ −c_r̂` with no uncertainty to explain it.
    pub table_mismatches: usize,
    pub options: TheoremOptions,
}

impl TheoremReport {
    pub fn combined_radius(&self) -> f64 {
        self.class.error_radius + self.rho.error_radius
    }
}

/// `τ(a^k)` for `a = s(g)`, estimated from the windings of `a^{kj}`,
/// `0 ≤ j ≤ 2k_max`.
struct PowerTranslations {
    k_max: usize,
    forward: Vec<f64>,
    backward: Vec<f64>,
    radius: f64,
    defect: f64,
}

impl PowerTranslations {
    fn new(a: &CoverElement, k_max: usize, reach_forward: usize, reach_backward: usize) -> Result<Self> {
        let forward = power_windings(a, 2 * k_max * reach_forward)?;
        let backward = power_windings(&a.inverse()?, 2 * k_max * reach_backward)?;
        let defect = measured_defect(&forward[..=2 * k_max]);
        Ok(Self {
            k_max,
            forward,
            backward,
            radius: slope_radius(defect, k_max),
            defect,
        })
    }

    fn tau(&self, k: i64) -> Result<f64> {
        let step = k.unsigned_abs() as usize;
        let seq = if k >= 0 { &self.forward } else { &self.backward };
        if 2 * self.k_max * step >= seq.len() {
            return Err(Error::InvalidArgument(format!("power {k} is outside the precomputed range")));
        }
        Ok(slope(|j| seq[j * step], self.k_max))
    }
}

/// Pull the bounded Euler cocycle back along `k ↦ g^k`, extract its class
/// and compare with the rotation number of `g`.
///
/// With `a = s(g)` and `β(k) = ⌊τ(a^k)⌋`, the pullback is
/// `φ_g^*σ(k, l) = β(k) + β(l) − β(k + l)`. Homogeneity gives
/// `τ(a^k) = k τ(a)`, so the table is `c_r̂` for `r̂ = τ(a)` and the Euler
/// class `[−σ]` pulls back to `−[c_r̂]`, whose class is `r̂`.
///
/// The section snaps to the nearest integer when `τ(g̃)` is within its error
/// radius of one: for positive hyperbolic `g` the translation number is an
/// exact integer and no strict floor exists.
pub fn main_theorem_check(g: &SymplecticMatrix, window: u64, n: u64, k_max: u64) -> Result<TheoremReport> {
    main_theorem_check_with(g, &TheoremOptions { window, n, k_max })
}

pub fn main_theorem_check_with(g: &SymplecticMatrix, opts: &TheoremOptions) -> Result<TheoremReport> {
    if opts.window == 0 || opts.n == 0 || opts.k_max == 0 {
        return Err(Error::InvalidArgument("window, N and k_max must be positive".into()));
    }
    let w = usize::try_from(opts.window).map_err(|_| Error::Overflow("window"))?;
    let n = usize::try_from(opts.n).map_err(|_| Error::Overflow("N"))?;
    let k_max = usize::try_from(opts.k_max).map_err(|_| Error::Overflow("k_max"))?;

    let (a, r_hat) = section_with(g, opts.k_max, SectionPolicy::Snap)?;
    // β is read on [−4W, max(N + 1, 4W)] by the cocycle check and the extraction
    let powers = std::sync::Arc::new(PowerTranslations::new(&a, k_max, (n + 1).max(4 * w), 4 * w)?);

    let r_value = r_hat.value();
    let r_mult = std::sync::Arc::new(FloorMultiplier::near(r_value, AMBIGUITY_FLOOR, SNAP_DENOMINATOR)?);
    // τ(a^k) is measured directly, so its error does not grow with k
    let beta_band = FLAG_FACTOR * powers.radius + AMBIGUITY_FLOOR;
    // near an integer the side is settled by τ(a^k) = k τ(a)
    let beta = {
        let (powers, r_mult) = (powers.clone(), r_mult.clone());
        IntegerCochain1::from_fn(move |k| {
            let t = powers.tau(k)?;
            let nearest = t.round();
            if (t - nearest).abs() < beta_band {
                let nearest = nearest as i64;
                let below = r_mult.floor_mul(k)? < nearest;
                Ok(if below { nearest - 1 } else { nearest })
            } else {
                Ok(t.floor() as i64)
            }
        })
    };
    let point_radius = {
        let (radius, r_radius) = (powers.radius, r_hat.error_radius);
        move |m: i64| FLAG_FACTOR * (m.unsigned_abs() as f64 * r_radius + radius) + AMBIGUITY_FLOOR
    };
    let sigma = IntegerCochain2::coboundary_of(&beta).with_window_hint(opts.window);
    let euler = sigma.negated();

    let cocycle_holds = find_cocycle_violation(&sigma, opts.window)?.is_none();

    let wi = w as i64;
    let mut sigma_table = Vec::with_capacity(2 * w + 1);
    let (mut flagged, mut mismatches, mut max_abs) = (0, 0, 0u64);
    for k in -wi..=wi {
        let mut row = Vec::with_capacity(2 * w + 1);
        for l in -wi..=wi {
            let s = sigma.eval(k, l)?;
            max_abs = max_abs.max(s.unsigned_abs());
            let expected = r_mult.floor_mul(k)? + r_mult.floor_mul(l)? - r_mult.floor_mul(k + l)?;
            if -s != -expected {
                let uncertain = [k, l, k + l]
                    .iter()
                    .any(|&m| circle_distance(r_value * m as f64, 0.0) < point_radius(m));
                if uncertain {
                    flagged += 1;
                } else {
                    mismatches += 1;
                }
            }
            row.push(s);
        }
        sigma_table.push(row);
    }

    let class = extract_class_with(
        &euler,
        &ExtractOptions {
            n: opts.n,
            window: opts.window,
            doublings: 0,
        },
    )?;
    let rho = rotation_number_sp(g, opts.k_max)?;
    Ok(TheoremReport {
        class,
        rho,
        difference_mod1: class.distance(&rho),
        r_hat,
        sigma_table,
        sigma_max_abs: max_abs,
        defect: powers.defect,
        cocycle_holds,
        table_flagged: flagged,
        table_mismatches: mismatches,
        options: *opts,
    })
}
