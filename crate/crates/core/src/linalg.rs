//! Small fixed-size complex matrices.
//!
//! Everything here is sized at compile time: gate matrices are 2×2 and the
//! reduced density matrices used by the analytics are 2×2 or 4×4, so a plain
//! array-of-arrays is both simpler and faster than a heap matrix type.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// `e^{iθ}`
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Dense `D×D` complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareMatrix<const D: usize>(pub [[C64; D]; D]);

pub type Mat2 = SquareMatrix<2>;
pub type Mat4 = SquareMatrix<4>;

impl<const D: usize> SquareMatrix<D> {
    pub fn zeros() -> Self {
        Self([[ZERO; D]; D])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..D {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: [C64; D]) -> Self {
        let mut m = Self::zeros();
        for i in 0..D {
            m.0[i][i] = diag[i];
        }
        m
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..D {
            for j in 0..D {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z = z.conj());
        m
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= factor);
        m
    }

    pub fn trace(&self) -> C64 {
        (0..D).map(|i| self.0[i][i]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// `‖U†U − I‖_max`
    pub fn unitarity_error(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    /// Largest deviation from `A = A†`.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Row and column of the first entry of largest modulus (row-major scan).
    pub fn argmax_abs(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_norm = -1.0;
        for i in 0..D {
            for j in 0..D {
                let n = self.0[i][j].norm();
                if n > best_norm {
                    best_norm = n;
                    best = (i, j);
                }
            }
        }
        best
    }

    /// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Only the upper triangle drives the rotations; the input is
    /// assumed Hermitian. Eigenvalues come back ascending with matching
    /// eigenvector columns.
    pub fn hermitian_eigen(&self) -> HermitianEigen<D> {
        const MAX_SWEEPS: usize = 64;
        const TOL: f64 = 1e-15;

        let mut a = *self;
        let mut v = Self::identity();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);

        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..D)
                .flat_map(|p| ((p + 1)..D).map(move |q| (p, q)))
                .map(|(p, q)| a.0[p][q].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= TOL * scale {
                break;
            }
            for p in 0..D {
                for q in (p + 1)..D {
                    let apq = a.0[p][q];
                    let mag = apq.norm();
                    if mag <= TOL * scale * 1e-3 {
                        continue;
                    }
                    let phase = apq / mag;
                    let app = a.0[p][p].re;
                    let aqq = a.0[q][q].re;
                    // Real Jacobi angle for the phase-corrected pair.
                    let theta = (aqq - app) / (2.0 * mag);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;

                    let mut rot = Self::identity();
                    rot.0[p][p] = C64::new(c, 0.0);
                    rot.0[p][q] = C64::new(s, 0.0);
                    rot.0[q][p] = -phase.conj() * s;
                    rot.0[q][q] = phase.conj() * c;

                    a = rot.adjoint() * a * rot;
                    // Kill rounding residue so the iteration stays Hermitian.
                    a.0[p][q] = ZERO;
                    a.0[q][p] = ZERO;
                    for i in 0..D {
                        a.0[i][i].im = 0.0;
                    }
                    v = v * rot;
                }
            }
        }

        let mut order: [usize; D] = std::array::from_fn(|i| i);
        order.sort_by(|&i, &j| a.0[i][i].re.total_cmp(&a.0[j][j].re));
        let values = std::array::from_fn(|k| a.0[order[k]][order[k]].re);
        let mut vectors = Self::zeros();
        for (k, &src) in order.iter().enumerate() {
            for row in 0..D {
                vectors.0[row][k] = v.0[row][src];
            }
        }
        HermitianEigen { values, vectors }
    }
}

impl<const D: usize> SquareMatrix<D> {
    /// Singular values, descending, by one-sided (Hestenes) Jacobi sweeps over
    /// the columns. Works on the matrix directly rather than on `A†A`, so small
    /// singular values keep absolute accuracy near `ε‖A‖`.
    pub fn singular_values(&self) -> [f64; D] {
        const MAX_SWEEPS: usize = 64;
        const TOL: f64 = 1e-15;

        // columns as rows for convenient access
        let mut cols = self.adjoint().conj().0;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..D {
                for q in (p + 1)..D {
                    let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                    let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                    let g = gamma.norm();
                    if g <= TOL * (alpha * beta).sqrt() || g == 0.0 {
                        continue;
                    }
                    rotated = true;
                    let phase = (gamma / g).conj();
                    let zeta = (beta - alpha) / (2.0 * g);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let t = if zeta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for k in 0..D {
                        let a = cols[p][k];
                        let b = cols[q][k] * phase;
                        cols[p][k] = a * c - b * s;
                        cols[q][k] = a * s + b * c;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: [f64; D] = std::array::from_fn(|k| cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }
}

/// Result of [`SquareMatrix::hermitian_eigen`].
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen<const D: usize> {
    /// Ascending.
    pub values: [f64; D],
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: SquareMatrix<D>,
}

impl<const D: usize> HermitianEigen<D> {
    /// `V f(Λ) V†`
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> SquareMatrix<D> {
        let diag = SquareMatrix::from_diagonal(self.values.map(|x| C64::new(f(x), 0.0)));
        self.vectors * diag * self.vectors.adjoint()
    }
}

impl<const D: usize> Mul for SquareMatrix<D> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..D {
            for j in 0..D {
                let mut acc = ZERO;
                for k in 0..D {
                    acc += self.0[i][k] * rhs.0[k][j];
                }
                out.0[i][j] = acc;
            }
        }
        out
    }
}

impl<const D: usize> Add for SquareMatrix<D> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..D {
            for j in 0..D {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl<const D: usize> Sub for SquareMatrix<D> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..D {
            for j in 0..D {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

impl Mat2 {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self([[a, b], [c, d]])
    }

    /// Largest singular value, in closed form via the eigenvalues of `A†A`.
    pub fn spectral_norm(&self) -> f64 {
        let g = self.adjoint() * *self;
        let p = g.0[0][0].re;
        let q = g.0[1][1].re;
        let r = g.0[0][1].norm();
        let disc = ((p - q) * (p - q) / 4.0 + r * r).sqrt();
        ((p + q) / 2.0 + disc).max(0.0).sqrt()
    }
}
