//! Small dense helpers: matrix exponential, polar factor, and the split of a
//! real `2n × 2n` matrix into parts that commute and anticommute with `J`.

use nalgebra::{Complex, DMatrix, Schur};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex<f64>>;

const TAYLOR_DEGREE: u32 = 18;
pub const POLAR_TOL: f64 = 1e-12;
pub const POLAR_MAX_STEPS: usize = 200;

/// `exp(A)` by scaling and squaring around a degree-18 Taylor kernel.
///
/// The argument is scaled to `‖A‖₁ ≤ 1/2`, where the truncated tail is below
/// `2⁻¹⁹/19!`.
pub fn expm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !a.is_square() {
        return Err(Error::BadDimension {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if let Some(&x) = a.iter().find(|x| !x.is_finite()) {
        return Err(Error::NonFinite(x));
    }
    let norm = norm1(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings);
    let id = DMatrix::<f64>::identity(a.nrows(), a.ncols());
    let mut p = id.clone();
    for k in (1..=TAYLOR_DEGREE).rev() {
        p = &id + &scaled * p / k as f64;
    }
    for _ in 0..squarings {
        p = &p * &p;
    }
    Ok(p)
}

/// Maximum absolute column sum.
pub fn norm1(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Debug, Clone)]
pub struct Polar {
    /// Orthogonal factor.
    pub u: DMatrix<f64>,
    /// Symmetric positive-definite factor, `g = U P`.
    pub p: DMatrix<f64>,
    pub iterations: usize,
}

/// Polar decomposition by the iteration `X ← (X + X⁻ᵀ)/2`.
///
/// The unscaled iteration keeps every iterate inside any automorphism group
/// of a bilinear form with orthogonal Gram matrix, so iterates of a
/// symplectic matrix stay symplectic.
pub fn polar(g: &DMatrix<f64>, tol: f64, max_steps: usize) -> Result<Polar> {
    if !g.is_square() {
        return Err(Error::BadDimension {
            rows: g.nrows(),
            cols: g.ncols(),
        });
    }
    let mut x = g.clone();
    for step in 1..=max_steps {
        let inv = x
            .clone()
            .try_inverse()
            .ok_or(Error::InvalidArgument("polar decomposition of a singular matrix".into()))?;
        let next = (&x + inv.transpose()) * 0.5;
        let change = (&next - &x).norm() / next.norm();
        x = next;
        if change <= tol {
            let p = x.transpose() * g;
            let p = (&p + p.transpose()) * 0.5;
            return Ok(Polar {
                u: x,
                p,
                iterations: step,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "polar decomposition",
        iterations: max_steps,
    })
}

/// `(M_L, M_A)` with `M z = M_L z + M_A z̄` under `(q, p) ↔ q + i p`.
///
/// For `M = [[A, B], [C, D]]`: `M_L = ((A + D) + i(C − B))/2` and
/// `M_A = ((A − D) + i(C + B))/2`.
pub fn complex_parts(m: &DMatrix<f64>) -> (CMatrix, CMatrix) {
    let n = m.nrows() / 2;
    let a = m.view((0, 0), (n, n));
    let b = m.view((0, n), (n, n));
    let c = m.view((n, 0), (n, n));
    let d = m.view((n, n), (n, n));
    let l = CMatrix::from_fn(n, n, |i, j| {
        Complex::new(a[(i, j)] + d[(i, j)], c[(i, j)] - b[(i, j)]) * 0.5
    });
    let anti = CMatrix::from_fn(n, n, |i, j| {
        Complex::new(a[(i, j)] - d[(i, j)], c[(i, j)] + b[(i, j)]) * 0.5
    });
    (l, anti)
}

/// Inverse of [`complex_parts`].
pub fn realify(l: &CMatrix, anti: &CMatrix) -> DMatrix<f64> {
    let n = l.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (l[(i, j)], anti[(i, j)]);
            m[(i, j)] = x.re + y.re;
            m[(i, j + n)] = y.im - x.im;
            m[(i + n, j)] = x.im + y.im;
            m[(i + n, j + n)] = x.re - y.re;
        }
    }
    m
}

/// Eigenvalues of a small complex matrix; closed form up to `2 × 2`.
pub fn complex_eigenvalues(m: &CMatrix) -> Result<Vec<Complex<f64>>> {
    match m.nrows() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![m[(0, 0)]]),
        2 => {
            let half_tr = (m[(0, 0)] + m[(1, 1)]) * 0.5;
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            let root = (half_tr * half_tr - det).sqrt();
            // avoid cancellation in the smaller root
            let big = if (half_tr + root).norm() >= (half_tr - root).norm() {
                half_tr + root
            } else {
                half_tr - root
            };
            let small = if big.norm() > 0.0 { det / big } else { Complex::new(0.0, 0.0) };
            Ok(vec![big, small])
        }
        n => {
            if m.iter().all(|z| z.norm() == 0.0) {
                return Ok(vec![Complex::new(0.0, 0.0); n]);
            }
            // retry with a diagonal shift when the QR sweep stalls
            let shift = Complex::new(0.5 * m.norm(), 0.0);
            for c in [Complex::new(0.0, 0.0), shift] {
                let shifted = m + CMatrix::identity(n, n) * c;
                if let Some(schur) = Schur::try_new(shifted, 1e-14, 10_000) {
                    let (_, t) = schur.unpack();
                    return Ok(t.diagonal().iter().map(|z| z - c).collect());
                }
            }
            Err(Error::NonConvergence {
                what: "complex Schur decomposition",
                iterations: 10_000,
            })
        }
    }
}

/// Complex Schur form `W = Q T Q*`, `T` upper triangular.
pub fn complex_schur(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    Schur::try_new(m.clone(), 1e-14, 10_000)
        .map(Schur::unpack)
        .ok_or(Error::NonConvergence {
            what: "complex Schur decomposition",
            iterations: 10_000,
        })
}
