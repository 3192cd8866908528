//! Shared dense complex linear algebra: Cholesky with pivot reporting,
//! Hermitian spectra, spectral norms and Haar-random unitaries.

pub mod dd;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Outcome of a left-looking Cholesky attempt on a Hermitian matrix.
pub struct Cholesky {
    /// Lower-triangular factor with real positive diagonal. Only the rows
    /// before `failed_at` are meaningful when the factorisation stopped.
    pub factor: CMatrix,
    /// Elimination pivots s_i = L_ii² in order; on failure the last entry
    /// is the offending value.
    pub pivots: Vec<f64>,
    /// Row at which the pivot dropped to `floor` or below, if any.
    pub failed_at: Option<usize>,
}

impl Cholesky {
    pub fn succeeded(&self) -> bool {
        self.failed_at.is_none()
    }

    pub fn min_pivot(&self) -> f64 {
        self.pivots.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn log_det(&self) -> Option<f64> {
        if self.succeeded() {
            Some(self.pivots.iter().map(|p| p.ln()).sum())
        } else {
            None
        }
    }
}

/// Cholesky factorisation of a Hermitian matrix, stopping as soon as a
/// pivot is `floor` or smaller. Imaginary parts on the diagonal are
/// discarded; the strict upper triangle of `a` is never read.
///
/// The elimination runs in double-double internally: moment kernel blocks
/// get close enough to singular at desk scale that plain f64 pivots lose
/// most of their digits, and everything downstream keys off these pivots.
pub fn cholesky(a: &CMatrix, floor: f64) -> Cholesky {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "cholesky needs a square matrix");
    let (l, pivots, failed_at) = dd::cholesky_dd(&dd::CddMatrix::from_c64(a), floor);
    Cholesky { factor: l.to_c64(), pivots, failed_at }
}

/// Cholesky factor together with its inverse A = L⁻¹, both carried in
/// double-double until the final rounding. Returns the failing row on a
/// pivot at or below `floor`.
pub fn cholesky_inverse(a: &CMatrix, floor: f64) -> Result<(Cholesky, CMatrix), (usize, f64)> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "cholesky needs a square matrix");
    let (l, pivots, failed_at) = dd::cholesky_dd(&dd::CddMatrix::from_c64(a), floor);
    if let Some(row) = failed_at {
        return Err((row, pivots[row]));
    }
    let inv = dd::lower_triangular_inverse_dd(&l).to_c64();
    Ok((Cholesky { factor: l.to_c64(), pivots, failed_at: None }, inv))
}

/// (m + m*)/2; used to scrub roundoff off matrices that are Hermitian by
/// construction before a spectral routine sees them.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * cr(0.5)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let eig = nalgebra::SymmetricEigen::new(hermitize(m));
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    *hermitian_eigenvalues(m).first().expect("empty matrix")
}

pub fn max_eigenvalue(m: &CMatrix) -> f64 {
    *hermitian_eigenvalues(m).last().expect("empty matrix")
}

/// Largest singular value, via the Hermitian spectrum of m*m.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    max_eigenvalue(&gram).max(0.0).sqrt()
}

/// One sample of the standard complex Gaussian (variance 1 overall).
pub fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * cr(std::f64::consts::FRAC_1_SQRT_2)
}

/// k×k matrix of standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(k: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(k, k, |_, _| standard_complex(rng))
}

/// Haar-distributed n×n unitary: QR of a Ginibre matrix with the phases of
/// the R diagonal pushed into Q.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / cr(rjj.norm()) } else { cr(1.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cholesky_recovers_factor() {
        // LL* with a known lower-triangular L.
        let l0 = CMatrix::from_row_slice(
            3,
            3,
            &[
                cr(2.0),
                cr(0.0),
                cr(0.0),
                c(1.0, 0.5),
                cr(1.5),
                cr(0.0),
                c(-0.25, 1.0),
                c(0.5, -0.5),
                cr(0.75),
            ],
        );
        let a = &l0 * l0.adjoint();
        let chol = cholesky(&a, 0.0);
        assert!(chol.succeeded());
        assert_abs_diff_eq!((&chol.factor - &l0).norm(), 0.0, epsilon = 1e-12);
        let det: f64 = chol.pivots.iter().product();
        assert_abs_diff_eq!(det, (2.0f64 * 1.5 * 0.75).powi(2), epsilon = 1e-10);
    }

    #[test]
    fn cholesky_reports_failure() {
        let a = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(1.0), cr(1.0), cr(1.0)]);
        let chol = cholesky(&a, 0.0);
        assert_eq!(chol.failed_at, Some(1));
        assert!(chol.pivots[1] <= 0.0);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = haar_unitary(5, &mut rng);
        let gram = &u * u.adjoint();
        let id = CMatrix::identity(5, 5);
        assert_abs_diff_eq!((gram - id).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(0.0, 3.0),
            cr(-2.0),
            cr(1.0),
        ]));
        assert_abs_diff_eq!(spectral_norm(&m), 3.0, epsilon = 1e-12);
    }
}
