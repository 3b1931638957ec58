//! Elements of the universal cover of `Sp(2n; ℝ)` as sampled paths from the
//! identity, with the winding `η = (1/2π)·arg det(γ_L)` carried along.
//!
//! `γ_L` is the complex-linear part of `γ`; its argument agrees with that of
//! `det_ℂ` of the polar unitary factor, because the positive factor has a
//! Hermitian positive-definite complex-linear part.
//!
//! For `x̃, ỹ` over `X, Y` the winding of the product is
//! `η(x̃ỹ) = η(x̃) + η(ỹ) + (1/2π) Σ Arg(1 + μ)`, the sum over the
//! eigenvalues `μ` of `Z_X W_Y` with `Z_X = X_L⁻¹X_A` and `W_Y = Ȳ_A Y_L⁻¹`.
//! Both have operator norm below one, so every `1 + μ` lies in the right
//! half-plane and the principal branch is the continuous one.

use std::f64::consts::{PI, TAU};

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use super::matrix::{polar_parts, standard_j, SymplecticMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

pub const DEFAULT_PATH_SAMPLES: usize = 16;
pub const MAX_PATH_SAMPLES: usize = 1_000_000;

/// Largest phase step allowed between consecutive samples.
const MAX_PHASE_STEP: f64 = PI / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathKind {
    /// `t ↦ U^t P^t`.
    #[default]
    Geodesic,
    /// `P^s` followed by `U^s P`.
    PositiveThenUnitary,
}

/// A lift `g̃`: a sampled path `I = g₀, …, g_L = g`, its unwrapped winding
/// and an integer deck offset. The winding of the lift is `theta + deck_offset`.
#[derive(Debug, Clone)]
pub struct CoverElement {
    n: usize,
    samples: Vec<DMatrix<f64>>,
    theta: f64,
    deck_offset: i64,
}

impl CoverElement {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            samples: vec![DMatrix::identity(2 * n, 2 * n)],
            theta: 0.0,
            deck_offset: 0,
        }
    }

    /// The loop `t ↦ R(2πt)` in `Sp(2)`, the generator of the deck group.
    pub fn full_loop(samples: usize) -> Result<Self> {
        let samples = samples.max(5);
        let path = (0..=samples)
            .map(|k| {
                if k == samples {
                    DMatrix::identity(2, 2)
                } else {
                    SymplecticMatrix::rotation(TAU * k as f64 / samples as f64).into_matrix()
                }
            })
            .collect::<Vec<_>>();
        Self::from_samples(path)
    }

    /// Lift along an explicit path; the first sample must be the identity.
    pub fn from_samples(samples: Vec<DMatrix<f64>>) -> Result<Self> {
        let first = samples
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty path".into()))?;
        let n = first.nrows() / 2;
        if linalg::max_abs(&(first - DMatrix::identity(2 * n, 2 * n))) > 1e-12 {
            return Err(Error::InvalidArgument("path must start at the identity".into()));
        }
        let theta = sampled_winding(&samples)?;
        Ok(Self {
            n,
            samples,
            theta,
            deck_offset: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &[DMatrix<f64>] {
        &self.samples
    }

    pub fn endpoint(&self) -> SymplecticMatrix {
        SymplecticMatrix::from_trusted(self.samples.last().expect("paths are non-empty").clone())
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn deck_offset(&self) -> i64 {
        self.deck_offset
    }

    /// `η` of this lift.
    pub fn winding(&self) -> f64 {
        self.theta + self.deck_offset as f64
    }

    /// The same path acted on by the deck generator `m` times.
    pub fn shifted(&self, m: i64) -> Self {
        Self {
            deck_offset: self.deck_offset + m,
            ..self.clone()
        }
    }

    /// Pointwise inverse path.
    pub fn inverse(&self) -> Result<Self> {
        let j = standard_j(self.n);
        let samples: Vec<_> = self.samples.iter().map(|m| -(&j * m.transpose() * &j)).collect();
        let end = self.endpoint();
        let theta = -self.theta - winding_defect(&end.inverse(), &end)?;
        Ok(Self {
            n: self.n,
            samples,
            theta,
            deck_offset: -self.deck_offset,
        })
    }
}

fn det_linear(m: &DMatrix<f64>) -> Complex<f64> {
    linalg::complex_parts(m).0.determinant()
}

/// Unwrapped `(1/2π)·arg det(γ_L)` along the samples.
///
/// Fails when two consecutive samples differ in phase by `π/2` or more,
/// which means the sampling is too coarse to unwrap.
pub fn sampled_winding(samples: &[DMatrix<f64>]) -> Result<f64> {
    let mut total = 0.0;
    let mut prev = match samples.first() {
        Some(m) => det_linear(m),
        None => return Ok(0.0),
    };
    for m in &samples[1..] {
        let d = det_linear(m);
        let step = (d / prev).arg();
        if step.abs() >= MAX_PHASE_STEP {
            return Err(Error::Inconsistent {
                what: "path sampling",
                residual: step.abs(),
                limit: MAX_PHASE_STEP,
            });
        }
        total += step;
        prev = d;
    }
    Ok(total / TAU)
}

/// `Z = X_L⁻¹ X_A` and `W = X̄_A X_L⁻¹`.
fn siegel_pair(m: &DMatrix<f64>) -> Result<(CMatrix, CMatrix)> {
    let (l, a) = linalg::complex_parts(m);
    let inv = l
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("complex-linear part is singular".into()))?;
    Ok((&inv * &a, a.conjugate() * inv))
}

/// `(1/2π) Σ Arg(1 + μ)` over the eigenvalues `μ` of `Z W`.
fn siegel_phase(z: &CMatrix, w: &CMatrix) -> Result<f64> {
    let sum: f64 = linalg::complex_eigenvalues(&(z * w))?
        .into_iter()
        .map(|mu| (Complex::new(1.0, 0.0) + mu).arg())
        .sum();
    Ok(sum / TAU)
}

/// `η(x̃ỹ) − η(x̃) − η(ỹ)`, which depends only on the endpoints `X, Y`.
pub fn winding_defect(x: &SymplecticMatrix, y: &SymplecticMatrix) -> Result<f64> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch(x.n(), y.n()));
    }
    let (z, _) = siegel_pair(x.as_matrix())?;
    let (_, w) = siegel_pair(y.as_matrix())?;
    siegel_phase(&z, &w)
}

/// Group law: `a`'s path followed by `endpoint(a)·(b's path)`.
pub fn cover_multiply(a: &CoverElement, b: &CoverElement) -> Result<CoverElement> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    let len = a.samples.len() + b.samples.len() - 1;
    if len > MAX_PATH_SAMPLES {
        return Err(Error::BudgetExceeded {
            what: "path samples",
            limit: MAX_PATH_SAMPLES,
        });
    }
    let end = a.samples.last().expect("paths are non-empty");
    let mut samples = Vec::with_capacity(len);
    samples.extend(a.samples.iter().cloned());
    samples.extend(b.samples[1..].iter().map(|m| end * m));
    let theta = a.theta + b.theta + winding_defect(&a.endpoint(), &b.endpoint())?;
    Ok(CoverElement {
        n: a.n,
        samples,
        theta,
        deck_offset: a.deck_offset + b.deck_offset,
    })
}

/// The polar lift of `g` with at least `l` samples, refined by doubling until
/// consecutive phases differ by less than `π/2`.
pub fn canonical_path(g: &SymplecticMatrix, l: usize) -> Result<CoverElement> {
    canonical_path_with(g, l, PathKind::Geodesic)
}

pub fn canonical_path_with(g: &SymplecticMatrix, l: usize, kind: PathKind) -> Result<CoverElement> {
    let n = g.n();
    let parts = polar_parts(g)?;
    let (q, t) = linalg::complex_schur(&parts.unitary.as_complex())?;
    let angles: Vec<f64> = t.diagonal().iter().map(|z| z.arg()).collect();
    let sym = SymmetricEigen::new(parts.positive.clone());
    if let Some(&bad) = sym.eigenvalues.iter().find(|&&x| x <= 0.0) {
        return Err(Error::InvalidArgument(format!("polar factor has eigenvalue {bad}")));
    }
    let log_p = sym.eigenvalues.map(f64::ln);

    let unitary_power = |t: f64| {
        let d = CMatrix::from_diagonal(&angles.iter().map(|&a| Complex::from_polar(1.0, a * t)).collect::<Vec<_>>().into());
        let w = &q * d * q.adjoint();
        linalg::realify(&w, &CMatrix::zeros(n, n))
    };
    let positive_power = |t: f64| {
        let d = DMatrix::from_diagonal(&log_p.map(|x| (x * t).exp()));
        &sym.eigenvectors * d * sym.eigenvectors.transpose()
    };
    let at = |s: f64| match kind {
        PathKind::Geodesic => unitary_power(s) * positive_power(s),
        PathKind::PositiveThenUnitary if s <= 0.5 => positive_power(2.0 * s),
        PathKind::PositiveThenUnitary => unitary_power(2.0 * s - 1.0) * &parts.positive,
    };

    let mut count = l.max(1);
    loop {
        let mut samples: Vec<_> = (0..count).map(|k| at(k as f64 / count as f64)).collect();
        samples[0] = DMatrix::identity(2 * n, 2 * n);
        samples.push(g.as_matrix().clone());
        match sampled_winding(&samples) {
            Ok(theta) => {
                return Ok(CoverElement {
                    n,
                    samples,
                    theta,
                    deck_offset: 0,
                })
            }
            Err(Error::Inconsistent { .. }) if 2 * count <= MAX_PATH_SAMPLES => count *= 2,
            Err(Error::Inconsistent { .. }) => {
                return Err(Error::BudgetExceeded {
                    what: "path refinement",
                    limit: MAX_PATH_SAMPLES,
                })
            }
            Err(e) => return Err(e),
        }
    }
}

/// `Θ_m = η(a^m)` for `m = 0, 1, 2, …`, one multiplication at a time.
///
/// Only the Siegel coordinate `Z_m = (A^m)_L⁻¹ (A^m)_A` is carried, which
/// stays bounded even when `A^m` does not.
pub struct PowerWinding {
    step_l: CMatrix,
    step_a: CMatrix,
    step_w: CMatrix,
    eta: f64,
    z: CMatrix,
    theta: f64,
    power: u64,
}

impl PowerWinding {
    pub fn new(a: &CoverElement) -> Result<Self> {
        let end = a.endpoint();
        let (l, anti) = end.complex_parts();
        let (_, w) = siegel_pair(end.as_matrix())?;
        Ok(Self {
            step_l: l,
            step_a: anti,
            step_w: w,
            eta: a.winding(),
            z: CMatrix::zeros(a.n, a.n),
            theta: 0.0,
            power: 0,
        })
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Advance from `Θ_m` to `Θ_{m+1}` and return it.
    pub fn step(&mut self) -> Result<f64> {
        self.theta += self.eta + siegel_phase(&self.z, &self.step_w)?;
        let lhs = &self.step_l + &self.z * self.step_a.conjugate();
        let rhs = &self.step_a + &self.z * self.step_l.conjugate();
        self.z = lhs
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidArgument("singular Siegel update".into()))?;
        self.power += 1;
        Ok(self.theta)
    }
}
