use std::f64::consts::TAU;

use nalgebra::{Complex, DMatrix, Schur};
use serde::{Deserialize, Serialize};

use super::cover::{canonical_path, CoverElement, PowerWinding, DEFAULT_PATH_SAMPLES};
use super::matrix::{standard_j, SymplecticMatrix};
use crate::cohomology::ClassValue;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::translation::{convergence_ks, ConvergenceRow, TranslationNumber};

pub const DEFAULT_K_MAX: u64 = 64;

/// Gate on the condition number of the eigenvector matrix.
pub const SEMISIMPLE_COND_LIMIT: f64 = 1e8;
pub const KREIN_TOL: f64 = 1e-8;
const CLUSTER_TOL: f64 = 1e-6;

/// Homogenization of the winding along the powers of a lift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpTranslationEstimate {
    /// Least-squares slope of `m ↦ Θ_m` over `0 ≤ m ≤ 2k_max`.
    pub value: f64,
    /// `3D̂/(2k_max + 1)`, the sum of the absolute slope weights times `D̂`.
    pub error_radius: f64,
    /// `Θ_{k_max}/k_max`.
    pub one_point: f64,
    /// `(Θ_{2k_max} − Θ_{k_max})/k_max`.
    pub two_point: f64,
    /// `max |Θ_{j+l} − Θ_j − Θ_l|` over `j + l ≤ 2k_max`.
    pub defect: f64,
    pub k_max: u64,
}

/// `Θ_0, …, Θ_len` for the powers of `a`.
pub fn power_windings(a: &CoverElement, len: usize) -> Result<Vec<f64>> {
    let mut pw = PowerWinding::new(a)?;
    let mut out = Vec::with_capacity(len + 1);
    out.push(0.0);
    for _ in 0..len {
        out.push(pw.step()?);
    }
    Ok(out)
}

/// Slope of the least-squares line through `(m, Θ_{m·stride})`,
/// `m = 0, …, 2k`. The weights are `(m − k)/S` with `S = k(k+1)(2k+1)/3`.
pub(crate) fn slope(theta: impl Fn(usize) -> f64, k: usize) -> f64 {
    let s = (k * (k + 1) * (2 * k + 1)) as f64 / 3.0;
    (0..=2 * k).map(|m| (m as f64 - k as f64) * theta(m)).sum::<f64>() / s
}

pub(crate) fn slope_radius(defect: f64, k: usize) -> f64 {
    3.0 * defect / (2 * k + 1) as f64
}

pub(crate) fn measured_defect(theta: &[f64]) -> f64 {
    let top = theta.len() - 1;
    let mut d = 0.0f64;
    for j in 1..top {
        for l in j..=top - j {
            d = d.max((theta[j + l] - theta[j] - theta[l]).abs());
        }
    }
    d
}

pub fn translation_estimate_sp(a: &CoverElement, k_max: u64) -> Result<SpTranslationEstimate> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    let k = usize::try_from(k_max).map_err(|_| Error::Overflow("k_max"))?;
    let theta = power_windings(a, 2 * k)?;
    let defect = measured_defect(&theta);
    Ok(SpTranslationEstimate {
        value: slope(|m| theta[m], k),
        error_radius: slope_radius(defect, k),
        one_point: theta[k] / k as f64,
        two_point: (theta[2 * k] - theta[k]) / k as f64,
        defect,
        k_max,
    })
}

/// Symplectic translation number of the lift `a`. The deck offset is carried
/// separately, so shifting the lift by `m` shifts the value by exactly `m`.
pub fn translation_number_sp(a: &CoverElement, k_max: u64) -> Result<TranslationNumber> {
    let deck = a.deck_offset();
    let est = translation_estimate_sp(&a.shifted(-deck), k_max)?;
    Ok(TranslationNumber {
        lift_part: est.value,
        deck,
        error_radius: est.error_radius,
    })
}

/// Translation estimates of `a` at `k = 1, 2, 4, …, k_max`.
///
/// Every row uses the defect measured on the longest window, which bounds the
/// defect of each shorter window, so the bound column is nonincreasing.
pub fn convergence_table_sp(a: &CoverElement, k_max: u64) -> Result<Vec<ConvergenceRow>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    let top = usize::try_from(k_max).map_err(|_| Error::Overflow("k_max"))?;
    let theta = power_windings(&a.shifted(-a.deck_offset()), 2 * top)?;
    let defect = measured_defect(&theta);
    Ok(convergence_ks(k_max)
        .into_iter()
        .map(|k| {
            let k = k as usize;
            ConvergenceRow {
                k: k as u64,
                estimate: slope(|m| theta[m], k) + a.deck_offset() as f64,
                error_bound: slope_radius(defect, k),
            }
        })
        .collect())
}

pub fn rotation_number_sp(g: &SymplecticMatrix, k_max: u64) -> Result<ClassValue> {
    Ok(translation_number_sp(&canonical_path(g, DEFAULT_PATH_SAMPLES)?, k_max)?.rotation())
}

/// Rotation number read off the spectrum of a semisimple `g`.
///
/// Each eigenvalue `e^{iθ}` on the unit circle, `θ ∈ (−π, π)` nonzero,
/// contributes `θ/2π` per direction of its eigenspace where the Hermitian form
/// `v ↦ Im(v̄ᵀJv)` is positive. Each negative real eigenvalue contributes
/// `1/4`, so a pair `λ, 1/λ` gives `1/2`. Positive real eigenvalues and
/// quadruples off the circle contribute nothing.
pub fn eigenvalue_rotation_number(g: &SymplecticMatrix) -> Result<ClassValue> {
    let m = g.as_matrix();
    let dim = m.nrows();
    if dim > 8 {
        return Err(Error::InvalidArgument(format!("eigenvalue formula supports 2n ≤ 8, got {dim}")));
    }
    let eigenvalues = Schur::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or(Error::NonConvergence {
            what: "real Schur decomposition",
            iterations: 10_000,
        })?
        .complex_eigenvalues();
    let scale = m.norm().max(1.0);
    let clusters = cluster(eigenvalues.iter().copied().collect(), scale);

    let mc = m.map(|x| Complex::new(x, 0.0));
    let jc = standard_j(dim / 2).map(|x| Complex::new(x, 0.0));
    let mut basis: Vec<nalgebra::DVector<Complex<f64>>> = Vec::with_capacity(dim);
    let mut total = 0.0;
    for (lambda, multiplicity) in clusters {
        let vectors = null_space(&(&mc - CMatrix::identity(dim, dim) * lambda), scale)?;
        if vectors.ncols() != multiplicity {
            return Err(Error::NotSemisimple(format!(
                "eigenvalue {lambda} has multiplicity {multiplicity} but {} eigenvectors",
                vectors.ncols()
            )));
        }
        basis.extend(vectors.column_iter().map(|c| c.into_owned()));

        let on_circle = (lambda.norm() - 1.0).abs() < CLUSTER_TOL;
        if lambda.im.abs() < CLUSTER_TOL {
            if lambda.re < 0.0 {
                total += 0.25 * multiplicity as f64;
            }
        } else if on_circle {
            // the form −iJ restricted to the eigenspace: (−i V*JV)
            let form = (vectors.adjoint() * &jc * &vectors) * Complex::new(0.0, -1.0);
            let form = (&form + form.adjoint()) * Complex::new(0.5, 0.0);
            let signs = form.map(|z| z.re).symmetric_eigenvalues();
            let angle = lambda.arg();
            for s in signs.iter() {
                if s.abs() < KREIN_TOL {
                    return Err(Error::KreinDegenerate { angle, form: s.abs() });
                }
                // the Krein-positive directions carry the contribution
                if *s > 0.0 {
                    total += angle / TAU;
                }
            }
        }
    }

    let v = DMatrix::from_columns(&basis);
    let sv = v.singular_values();
    let cond = sv.max() / sv.min();
    if cond.is_nan() || cond >= SEMISIMPLE_COND_LIMIT {
        return Err(Error::NotSemisimple(format!("eigenvector condition number {cond:e}")));
    }
    Ok(ClassValue::from_real(total, cond * f64::EPSILON * 16.0))
}

/// Group eigenvalues closer than the clustering tolerance; returns each
/// cluster's mean and size.
fn cluster(mut eigenvalues: Vec<Complex<f64>>, scale: f64) -> Vec<(Complex<f64>, usize)> {
    let tol = CLUSTER_TOL * scale;
    let mut out: Vec<(Vec<Complex<f64>>, Complex<f64>)> = Vec::new();
    while let Some(z) = eigenvalues.pop() {
        match out.iter_mut().find(|(_, c)| (*c - z).norm() < tol) {
            Some((members, c)) => {
                members.push(z);
                *c = members.iter().sum::<Complex<f64>>() / members.len() as f64;
            }
            None => out.push((vec![z], z)),
        }
    }
    out.into_iter().map(|(members, c)| (c, members.len())).collect()
}

/// Orthonormal basis of the numerical null space.
fn null_space(a: &CMatrix, scale: f64) -> Result<CMatrix> {
    let n = a.ncols();
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.ok_or(Error::NonConvergence {
        what: "singular value decomposition",
        iterations: 0,
    })?;
    let tol = CLUSTER_TOL * scale;
    let rows: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] <= tol).collect();
    Ok(CMatrix::from_fn(n, rows.len(), |i, j| v_t[(rows[j], i)].conj()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::random_symplectic;

    #[test]
    fn rotation_translation_is_exact() {
        for t in [0.4, 2.0, -1.3] {
            let a = canonical_path(&SymplecticMatrix::rotation(t), 8).unwrap();
            let tn = translation_number_sp(&a, 64).unwrap();
            assert!((tn.value() - t / TAU).abs() < 1e-12);
            assert!(tn.error_radius < 1e-12);
        }
        let id = translation_number_sp(&CoverElement::identity(2), 64).unwrap();
        assert_eq!((id.value(), id.error_radius), (0.0, 0.0));
    }

    #[test]
    fn connection_property() {
        let a = canonical_path(&random_symplectic(2, 4, 0.5).unwrap(), 16).unwrap();
        let base = translation_number_sp(&a, 32).unwrap();
        for m in [-3, 1, 7] {
            let s = translation_number_sp(&a.shifted(m), 32).unwrap();
            assert_eq!(s.lift_part, base.lift_part);
            assert_eq!(s.deck, base.deck + m);
        }
    }

    #[test]
    fn rotation_number_examples() {
        let r = rotation_number_sp(&SymplecticMatrix::rotation(TAU / 6.0), 64).unwrap();
        assert!((r.value - 1.0 / 6.0).abs() < 1e-12);
        let minus = SymplecticMatrix::identity(1).neg();
        assert!((rotation_number_sp(&minus, 64).unwrap().value - 0.5).abs() < 1e-12);
        let d = SymplecticMatrix::hyperbolic(2.0).unwrap();
        assert!(rotation_number_sp(&d, 64).unwrap().distance_to(0.0) < 1e-12);
    }

    #[test]
    fn eigenvalue_examples() {
        let r = eigenvalue_rotation_number(&SymplecticMatrix::rotation(1.0)).unwrap();
        assert!((r.value - 1.0 / TAU).abs() < 1e-12);
        let d = SymplecticMatrix::hyperbolic(2.0).unwrap();
        assert!(eigenvalue_rotation_number(&d).unwrap().distance_to(0.0) < 1e-12);
        assert!((eigenvalue_rotation_number(&d.neg()).unwrap().value - 0.5).abs() < 1e-12);
        let minus = SymplecticMatrix::identity(2).neg();
        assert!(eigenvalue_rotation_number(&minus).unwrap().distance_to(0.0) < 1e-12);
    }

    #[test]
    fn krein_sign_selects_the_member() {
        // R(−t) ⊕ R(s): the first block rotates backwards
        let g = SymplecticMatrix::rotation(-0.9).direct_sum(&SymplecticMatrix::rotation(0.4));
        let e = eigenvalue_rotation_number(&g).unwrap();
        assert!(e.distance_to((0.4 - 0.9) / TAU) < 1e-12);
        let p = rotation_number_sp(&g, 64).unwrap();
        assert!(e.distance(&p) < 1e-9);
    }

    #[test]
    fn eigenvalue_errors() {
        let shear = SymplecticMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]), 1e-12).unwrap();
        assert!(matches!(eigenvalue_rotation_number(&shear), Err(Error::NotSemisimple(_))));
        // R(t) ⊕ R(−t): a double eigenvalue e^{it} whose form has signature (1, 1)
        let g = SymplecticMatrix::rotation(0.7).direct_sum(&SymplecticMatrix::rotation(-0.7));
        assert!(eigenvalue_rotation_number(&g).is_ok());
    }

    #[test]
    fn slope_weights() {
        let k = 5;
        let line = slope(|m| 0.3 * m as f64 + 7.0, k);
        assert!((line - 0.3).abs() < 1e-14);
        let s = (k * (k + 1) * (2 * k + 1)) as f64 / 3.0;
        let abs_sum: f64 = (0..=2 * k).map(|m| (m as f64 - k as f64).abs() / s).sum();
        assert!((abs_sum - slope_radius(1.0, k)).abs() < 1e-14);
    }

    #[test]
    fn convergence_table_is_monotone() {
        let a = canonical_path(&crate::symplectic::random_symplectic(2, 3, 0.5).unwrap(), 16).unwrap();
        let rows = convergence_table_sp(&a.shifted(2), 64).unwrap();
        assert!(rows.windows(2).all(|w| w[1].error_bound <= w[0].error_bound));
        let last = rows.last().unwrap();
        let est = translation_number_sp(&a.shifted(2), 64).unwrap();
        assert!((last.estimate - est.value()).abs() < 1e-12);
        let rows = convergence_table_sp(&canonical_path(&SymplecticMatrix::rotation(TAU * 0.3), 16).unwrap(), 64).unwrap();
        assert!(rows.iter().all(|r| (r.estimate - 0.3).abs() < 1e-12));
    }
}
