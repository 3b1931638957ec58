//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; the process exits non-zero if any fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rotlab_core::circle::{ghys_check_with, pulled_back_euler_cocycle, CircleLift, GhysOptions};
use rotlab_core::cohomology::{
    cocycle_check2, extract_class, floor_cocycle, IntegerCochain1, IntegerCochain2,
};
use rotlab_core::symplectic::{
    canonical_path, cover_multiply, eigenvalue_rotation_number, main_theorem_check, random_symplectic,
    rotation_number_sp, translation_estimate_sp, translation_number_sp, SymplecticMatrix, TheoremReport,
};

const SEED: u64 = 7;
const WINDOW: u64 = 64;
const N_EXTRACT: u64 = 10_000;
const K_MAX: u64 = 64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: u32, name: &str, outcome: &Outcome, elapsed: Duration) -> bool {
    println!(
        "criterion {id} [{}] {name}: {} ({:.2} s)",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64()
    );
    outcome.pass
}

fn conjugate(g: &SymplecticMatrix, c: &SymplecticMatrix) -> SymplecticMatrix {
    c.mul(g).unwrap().mul(&c.inverse()).unwrap()
}

/// Cases shared by criteria 1, 2 and 4.
fn circle_family() -> (Vec<f64>, Vec<CircleLift>) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let rigid: Vec<f64> = (0..100).map(|_| rng.gen::<f64>()).collect();
    let arnold = (0..20)
        .map(|i| CircleLift::arnold(rng.gen::<f64>(), [0.3, 0.6, 0.9][i % 3]).unwrap())
        .collect();
    (rigid, arnold)
}

fn rigid_suite(alphas: &[f64]) -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &alpha in alphas {
        let r = ghys_check_with(
            &CircleLift::rigid(alpha).unwrap(),
            &GhysOptions {
                window: WINDOW,
                n: N_EXTRACT,
                ..GhysOptions::default()
            },
        )
        .unwrap();
        worst = worst.max(r.class.distance_to(alpha));
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: worst <= 1e-9 && elapsed < Duration::from_secs(5),
        detail: format!("{} rotations, max |class − α| = {worst:.2e}, limit 1e-9 in 5 s", alphas.len()),
    }
}

fn arnold_suite(maps: &[CircleLift]) -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for g in maps {
        let r = ghys_check_with(
            g,
            &GhysOptions {
                window: WINDOW,
                n: N_EXTRACT,
                n_iter: 100_000,
                doublings: None,
            },
        )
        .unwrap();
        worst = worst.max(r.difference_mod1);
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: worst <= 1e-3 && elapsed < Duration::from_secs(60),
        detail: format!("{} Arnold maps, max |class − ρ| = {worst:.2e}, limit 1e-3 in 60 s", maps.len()),
    }
}

fn theorem_suite() -> (Outcome, Vec<TheoremReport>) {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (n, count) in [(1usize, 50u64), (2, 20)] {
        for i in 0..count {
            let g = random_symplectic(n, SEED + i, 0.5).unwrap();
            let r = main_theorem_check(&g, WINDOW, N_EXTRACT, K_MAX).unwrap();
            if r.difference_mod1 > 1e-3 {
                failures.push(format!("Sp({}) #{i}: {:.2e}", 2 * n, r.difference_mod1));
            }
            reports.push(r);
        }
    }
    let elapsed = start.elapsed();
    let worst = reports.iter().map(|r| r.difference_mod1).fold(0.0, f64::max);
    let mut detail = format!(
        "{} matrices, max diff_mod1 = {worst:.2e}, limit 1e-3 in 300 s",
        reports.len()
    );
    if !failures.is_empty() {
        detail += &format!("; over limit: {}", failures.join(", "));
    }
    let outcome = Outcome {
        pass: failures.is_empty() && elapsed < Duration::from_secs(300),
        detail,
    };
    (outcome, reports)
}

fn cocycle_identities(alphas: &[f64], maps: &[CircleLift], sp: &[TheoremReport]) -> Outcome {
    let mut circle_bad = 0;
    let lifts = alphas.iter().map(|&a| CircleLift::rigid(a).unwrap()).chain(maps.iter().cloned());
    let mut circle_cases = 0;
    for g in lifts {
        circle_cases += 1;
        if !cocycle_check2(&pulled_back_euler_cocycle(&g).unwrap(), WINDOW).unwrap() {
            circle_bad += 1;
        }
    }
    let sp_bad = sp.iter().filter(|r| !r.cocycle_holds).count();
    Outcome {
        pass: circle_bad == 0 && sp_bad == 0,
        detail: format!(
            "δχ ≠ 0 in {circle_bad}/{circle_cases} circle cases, δσ ≠ 0 in {sp_bad}/{} symplectic cases",
            sp.len()
        ),
    }
}

fn table_identity(sp: &[TheoremReport]) -> Outcome {
    let mismatches: usize = sp.iter().map(|r| r.table_mismatches).sum();
    let flagged: usize = sp.iter().map(|r| r.table_flagged).sum();
    let entries: usize = sp.iter().map(|r| r.sigma_table.len() * r.sigma_table.len()).sum();
    Outcome {
        pass: mismatches == 0,
        detail: format!("{entries} entries, {mismatches} unexplained mismatches, {flagged} flagged"),
    }
}

/// Semisimple family: elliptic, hyperbolic, negative hyperbolic, and 4×4
/// direct sums of those, each conjugated by a random symplectic matrix.
fn semisimple_family() -> Vec<SymplecticMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1000);
    let block = |kind: usize, rng: &mut ChaCha8Rng| match kind {
        0 => SymplecticMatrix::rotation(rng.gen_range(-3.1..3.1)),
        1 => SymplecticMatrix::hyperbolic(rng.gen_range(1.2..3.0)).unwrap(),
        _ => SymplecticMatrix::hyperbolic(rng.gen_range(1.2..3.0)).unwrap().neg(),
    };
    let mut out = Vec::new();
    for i in 0..100u64 {
        let kind = (i % 4) as usize;
        let g = if kind < 3 {
            conjugate(&block(kind, &mut rng), &random_symplectic(1, SEED + 2000 + i, 0.5).unwrap())
        } else {
            let (a, b) = (rng.gen_range(0..3), rng.gen_range(0..3));
            let sum = block(a, &mut rng).direct_sum(&block(b, &mut rng));
            conjugate(&sum, &random_symplectic(2, SEED + 2000 + i, 0.5).unwrap())
        };
        out.push(g);
    }
    out
}

fn oracle_agreement() -> Outcome {
    let family = semisimple_family();
    let mut bad = Vec::new();
    let mut worst_excess = f64::NEG_INFINITY;
    for (i, g) in family.iter().enumerate() {
        let eig = eigenvalue_rotation_number(g).unwrap();
        let path = rotation_number_sp(g, K_MAX).unwrap();
        let excess = eig.distance(&path) - (1e-6 + eig.error_radius + path.error_radius);
        worst_excess = worst_excess.max(excess);
        if excess > 0.0 {
            bad.push(i);
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{} matrices, {} outside 1e-6 + radii (worst margin {worst_excess:.2e})",
            family.len(),
            bad.len()
        ),
    }
}

fn quasi_morphism_laws() -> Outcome {
    const CASES: u64 = 50;
    let (mut homog_bad, mut conn_bad, mut conj_bad) = (0, 0, 0);
    for i in 0..CASES {
        let n = 1 + (i % 2) as usize;
        let g = random_symplectic(n, SEED + 3000 + i, 0.5).unwrap();
        let a = canonical_path(&g, 16).unwrap();

        // τ(a) from a long run so k·τ(a) carries little estimation error
        let base = translation_estimate_sp(&a, 32 * K_MAX).unwrap();
        let defect = translation_estimate_sp(&a, K_MAX).unwrap().defect;
        let mut ak = a.clone();
        for k in 1..=32u64 {
            if k > 1 {
                ak = cover_multiply(&ak, &a).unwrap();
            }
            let tk = translation_estimate_sp(&ak, K_MAX).unwrap().value;
            if (tk - k as f64 * base.value).abs() > defect {
                homog_bad += 1;
                break;
            }
        }

        let m = (i as i64 * 7919) % 201 - 100;
        let t0 = translation_number_sp(&a, K_MAX).unwrap();
        let t1 = translation_number_sp(&a.shifted(m), K_MAX).unwrap();
        if t1.value() != t0.value() + m as f64 || t1.lift_part != t0.lift_part {
            conn_bad += 1;
        }

        let h = random_symplectic(n, SEED + 4000 + i, 0.5).unwrap();
        let x = rotation_number_sp(&g, K_MAX).unwrap();
        let y = rotation_number_sp(&conjugate(&g, &h), K_MAX).unwrap();
        if x.distance(&y) > x.error_radius + y.error_radius {
            conj_bad += 1;
        }
    }
    Outcome {
        pass: homog_bad + conn_bad + conj_bad == 0,
        detail: format!(
            "{CASES} cases each: homogeneity k ≤ 32 failed {homog_bad}, connection law failed {conn_bad}, \
             conjugation invariance failed {conj_bad}"
        ),
    }
}

fn bounded_cohomology_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5000);
    let mut worst = 0.0f64;
    let mut range_bad = 0;
    for _ in 0..20 {
        let r: f64 = rng.gen();
        let c = IntegerCochain2::coboundary_of(&IntegerCochain1::floor(r).unwrap());
        worst = worst.max(extract_class(&c, N_EXTRACT).unwrap().distance_to(-r));
        for n in -200i64..=200 {
            for m in -200i64..=200 {
                if !matches!(floor_cocycle(r, n, m).unwrap(), -1 | 0) {
                    range_bad += 1;
                }
            }
        }
    }
    Outcome {
        pass: worst <= 1e-4 && range_bad == 0,
        detail: format!(
            "20 multipliers, max |extract(δβ_r) + r| mod 1 = {worst:.2e} (limit 1e-4), \
             {range_bad} floor-cocycle values outside {{−1, 0}} on window 200"
        ),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn main() {
    let (alphas, maps) = circle_family();
    let mut all = true;

    let (o, t) = timed(|| rigid_suite(&alphas));
    all &= report(1, "rigid rotations", &o, t);
    let (o, t) = timed(|| arnold_suite(&maps));
    all &= report(2, "Arnold maps", &o, t);
    let ((o, sp), t) = timed(theorem_suite);
    all &= report(3, "symplectic class vs rotation number", &o, t);
    let (o, t) = timed(|| cocycle_identities(&alphas, &maps, &sp));
    all &= report(4, "exact cocycle identities", &o, t);
    let (o, t) = timed(|| table_identity(&sp));
    all &= report(5, "pulled-back table vs floor cocycle", &o, t);
    let (o, t) = timed(oracle_agreement);
    all &= report(6, "eigenvalue formula vs path estimate", &o, t);
    let (o, t) = timed(quasi_morphism_laws);
    all &= report(7, "quasi-morphism laws", &o, t);
    let (o, t) = timed(bounded_cohomology_engine);
    all &= report(8, "bounded cohomology engine", &o, t);

    if !all {
        std::process::exit(1);
    }
}
