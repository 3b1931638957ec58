use nalgebra::{Complex, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

pub const DEFAULT_SYMPLECTIC_TOL: f64 = 1e-9;
const UNITARY_TOL: f64 = 1e-8;

/// `J = [[0, −I], [I, 0]]` in coordinates `(q₁…q_n, p₁…p_n)`.
pub fn standard_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, i + n)] = -1.0;
        j[(i + n, i)] = 1.0;
    }
    j
}

fn half_dimension(m: &DMatrix<f64>) -> Result<usize> {
    let (rows, cols) = m.shape();
    if rows != cols || rows == 0 || rows % 2 != 0 {
        return Err(Error::BadDimension { rows, cols });
    }
    Ok(rows / 2)
}

/// `‖MᵀJM − J‖_max`.
pub fn symplectic_deviation(m: &DMatrix<f64>) -> Result<f64> {
    let j = standard_j(half_dimension(m)?);
    Ok(linalg::max_abs(&(m.transpose() * &j * m - j)))
}

pub fn check_symplectic(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    Ok(symplectic_deviation(m)? <= tol)
}

/// A real `2n × 2n` matrix preserving the standard symplectic form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    m: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn new(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        let n = half_dimension(&m)?;
        if let Some(&x) = m.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(x));
        }
        let deviation = symplectic_deviation(&m)?;
        if deviation > tol || m.determinant() <= 0.0 {
            return Err(Error::NotSymplectic { deviation, tol });
        }
        Ok(Self { n, m })
    }

    /// Wraps a product or power of symplectic matrices without re-checking.
    pub(crate) fn from_trusted(m: DMatrix<f64>) -> Self {
        Self { n: m.nrows() / 2, m }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_trusted(DMatrix::identity(2 * n, 2 * n))
    }

    /// `R(θ) = [[cos θ, −sin θ], [sin θ, cos θ]]` in `Sp(2)`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_trusted(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
    }

    /// `diag(λ, 1/λ)` in `Sp(2)`.
    pub fn hyperbolic(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda == 0.0 {
            return Err(Error::InvalidArgument(format!("hyperbolic eigenvalue {lambda}")));
        }
        Ok(Self::from_trusted(DMatrix::from_row_slice(2, 2, &[lambda, 0.0, 0.0, 1.0 / lambda])))
    }

    /// Unitary `A + iB` realized as `[[A, −B], [B, A]]`.
    pub fn from_unitary(w: &CMatrix) -> Result<Self> {
        let n = w.nrows();
        let dev = (w.adjoint() * w - CMatrix::identity(n, n)).norm();
        if dev > UNITARY_TOL {
            return Err(Error::InvalidArgument(format!("matrix is not unitary (deviation {dev:e})")));
        }
        Ok(Self::from_trusted(linalg::realify(w, &CMatrix::zeros(n, n))))
    }

    /// Symplectic direct sum, interleaving the `q` and `p` blocks.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n1, n2) = (self.n, other.n);
        let n = n1 + n2;
        let mut out = DMatrix::zeros(2 * n, 2 * n);
        let place = |out: &mut DMatrix<f64>, src: &DMatrix<f64>, k: usize, offset: usize| {
            let idx = |i: usize| if i < k { offset + i } else { n + offset + i - k };
            for i in 0..2 * k {
                for j in 0..2 * k {
                    out[(idx(i), idx(j))] = src[(i, j)];
                }
            }
        };
        place(&mut out, &self.m, n1, 0);
        place(&mut out, &other.m, n2, n1);
        Self::from_trusted(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(Self::from_trusted(&self.m * &other.m))
    }

    /// `g⁻¹ = −J gᵀ J`, exact up to the sign flips.
    pub fn inverse(&self) -> Self {
        let j = standard_j(self.n);
        Self::from_trusted(-(&j * self.m.transpose() * &j))
    }

    pub fn neg(&self) -> Self {
        Self::from_trusted(-&self.m)
    }

    pub fn deviation(&self) -> f64 {
        symplectic_deviation(&self.m).unwrap_or(f64::INFINITY)
    }

    /// Complex-linear and anti-linear parts with respect to `J`.
    pub fn complex_parts(&self) -> (CMatrix, CMatrix) {
        linalg::complex_parts(&self.m)
    }

    /// SHA-256 over the little-endian bytes of the row-major entries.
    pub fn hash_hex(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.n as u64).to_le_bytes());
        for i in 0..self.m.nrows() {
            for j in 0..self.m.ncols() {
                hasher.update(self.m[(i, j)].to_le_bytes());
            }
        }
        hex::encode(hasher.finalize())
    }
}

/// `exp(J S)` for `S = scale · (A + Aᵀ)/2`, `A` standard normal from a
/// ChaCha8 stream seeded with `seed`.
pub fn random_symplectic(n: usize, seed: u64, scale: f64) -> Result<SymplecticMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if !scale.is_finite() {
        return Err(Error::NonFinite(scale));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::<f64>::from_fn(2 * n, 2 * n, |_, _| StandardNormal.sample(&mut rng));
    let s = (&a + a.transpose()) * (0.5 * scale);
    let g = linalg::expm(&(standard_j(n) * s))?;
    SymplecticMatrix::new(g, DEFAULT_SYMPLECTIC_TOL)
}

/// `A, B` with `U = [[A, −B], [B, A]]` orthogonal symplectic.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryBlock {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
}

impl UnitaryBlock {
    pub fn as_complex(&self) -> CMatrix {
        CMatrix::from_fn(self.a.nrows(), self.a.ncols(), |i, j| {
            Complex::new(self.a[(i, j)], self.b[(i, j)])
        })
    }

    pub fn to_real(&self) -> DMatrix<f64> {
        let n = self.a.nrows();
        linalg::realify(&self.as_complex(), &CMatrix::zeros(n, n))
    }
}

#[derive(Debug, Clone)]
pub struct PolarParts {
    pub unitary: UnitaryBlock,
    /// Symmetric positive-definite symplectic factor, `g = U P`.
    pub positive: DMatrix<f64>,
    pub iterations: usize,
}

/// Polar decomposition `g = U P`; both factors are symplectic.
pub fn polar_parts(g: &SymplecticMatrix) -> Result<PolarParts> {
    let polar = linalg::polar(&g.m, linalg::POLAR_TOL, linalg::POLAR_MAX_STEPS)?;
    let n = g.n;
    let u = &polar.u;
    // average the two copies of each block to land exactly on the form [[A, −B], [B, A]]
    let a = (u.view((0, 0), (n, n)) + u.view((n, n), (n, n))) * 0.5;
    let b = (u.view((n, 0), (n, n)) - u.view((0, n), (n, n))) * 0.5;
    Ok(PolarParts {
        unitary: UnitaryBlock { a, b },
        positive: polar.p,
        iterations: polar.iterations,
    })
}

pub fn unitary_part(g: &SymplecticMatrix) -> Result<UnitaryBlock> {
    Ok(polar_parts(g)?.unitary)
}

/// `det_ℂ(A + iB)`, normalized onto the unit circle.
pub fn det_circle(u: &UnitaryBlock) -> Complex<f64> {
    let d = u.as_complex().determinant();
    d / d.norm()
}
