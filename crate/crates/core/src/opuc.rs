//! Independent univariate oracle: trigonometric moment sequences, a direct
//! Toeplitz-solve route to the classical Verblunsky coefficients, and
//! periodic quadrature helpers. Used to cross-validate the d=1 reduction
//! of the main pipeline, so nothing here may touch the crate's own
//! Cholesky code path — all solves go through nalgebra.
//!
//! Conventions are pinned to the artifact's gauge: a sequence carries
//! c_k = ∫ e^{−ikθ} w(θ) dθ/2π, the induced kernel is K(i,j) = m_{i−j}
//! with word moments m_k = conj(c_k), the monic polynomial Φ_n solves the
//! Yule–Walker-type system against K, and γ_n = −Φ_n(0). Under this gauge
//! the list below matches `verblunsky::extract` at d = 1 elementwise, with
//! the oracle's γ_n sitting at the length-(n+1) word.

use num_complex::Complex64;

use crate::freemonoid::Word;
use crate::linalg::{cr, CMatrix};
use crate::moments::MomentFamily;
use crate::{Error, Result};

/// Trigonometric moments c_0..c_n of a probability density on the circle,
/// with c_0 = 1.
#[derive(Clone, Debug)]
pub struct CircleMomentSeq {
    c: Vec<Complex64>,
}

impl CircleMomentSeq {
    pub fn new(c: Vec<Complex64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidInput("moment sequence must contain c_0".into()));
        }
        if (c[0] - cr(1.0)).norm() > 1e-10 {
            return Err(Error::NotNormalized { got: format!("{}", c[0]) });
        }
        let mut c = c;
        c[0] = cr(1.0);
        Ok(CircleMomentSeq { c })
    }

    /// Highest stored index n.
    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn moment(&self, k: usize) -> Complex64 {
        self.c[k]
    }

    pub fn moments(&self) -> &[Complex64] {
        &self.c
    }

    /// Kernel entry K(i,j) of the induced Toeplitz matrix.
    fn kernel(&self, i: usize, j: usize) -> Complex64 {
        if i >= j {
            self.c[i - j].conj()
        } else {
            self.c[j - i]
        }
    }

    /// The d=1 moment family with m_k = conj(c_k) at the length-k word.
    pub fn to_moment_family(&self) -> Result<MomentFamily> {
        let n = self.order();
        let mut entries = std::collections::BTreeMap::new();
        for k in 1..=n {
            entries.insert(Word::sigma(k, 1), self.c[k].conj());
        }
        MomentFamily::new(1, Word::sigma(n, 1), entries)
    }

    /// Classical Verblunsky coefficients γ_0..γ_{n−1} by a direct Toeplitz
    /// solve per order: the monic Φ_n is obtained from the Yule–Walker-type
    /// orthogonality system via LU, and γ_{n−1} = −Φ_n(0). Positivity is
    /// checked with nalgebra's own Cholesky so agreement with the main
    /// pipeline stays evidence rather than tautology.
    pub fn levinson_verblunsky(&self) -> Result<Vec<Complex64>> {
        let n = self.order();
        let full = CMatrix::from_fn(n + 1, n + 1, |i, j| self.kernel(i, j));
        if nalgebra::Cholesky::new(full).is_none() {
            return Err(Error::Degenerate(
                "trigonometric moment matrix is not positive definite".into(),
            ));
        }
        let mut gammas = Vec::with_capacity(n);
        for order in 1..=n {
            // Σ_{j<order} b_j K(j,m) = −K(order,m) for m = 0..order−1.
            let system = CMatrix::from_fn(order, order, |m, j| self.kernel(j, m));
            let rhs = nalgebra::DVector::from_fn(order, |m, _| -self.kernel(order, m));
            let b = system
                .lu()
                .solve(&rhs)
                .ok_or_else(|| Error::Degenerate("Toeplitz system is singular".into()))?;
            gammas.push(-b[0]);
        }
        Ok(gammas)
    }
}

/// c_k = ∫ e^{−ikθ} w(θ) dθ/2π for k = 0..n by the trapezoid rule on
/// `nodes` uniform points; spectrally accurate for smooth w. Errors unless
/// the same quadrature gives total mass 1 within 1e−10, then normalises
/// exactly.
pub fn quadrature_moments(
    density: impl Fn(f64) -> f64,
    n: usize,
    nodes: usize,
) -> Result<CircleMomentSeq> {
    assert!(nodes > 0, "quadrature needs at least one node");
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    let step = std::f64::consts::TAU / nodes as f64;
    for j in 0..nodes {
        let theta = step * j as f64;
        let w = density(theta);
        for (k, ck) in c.iter_mut().enumerate() {
            *ck += Complex64::from_polar(w, -(k as f64) * theta);
        }
    }
    for ck in c.iter_mut() {
        *ck /= cr(nodes as f64);
    }
    let mass = c[0].re;
    if (mass - 1.0).abs() > 1e-10 || c[0].im.abs() > 1e-10 {
        return Err(Error::NormalizationFailure { mass });
    }
    for ck in c.iter_mut() {
        *ck /= cr(mass);
    }
    CircleMomentSeq::new(c)
}

/// exp(∫ log w dθ/2π) by the same trapezoid rule; zero when the density
/// vanishes on a node.
pub fn szego_integral(density: impl Fn(f64) -> f64, nodes: usize) -> f64 {
    let step = std::f64::consts::TAU / nodes as f64;
    let mean_log: f64 = (0..nodes).map(|j| density(step * j as f64).ln()).sum::<f64>() / nodes as f64;
    mean_log.exp()
}

/// Bernstein–Szegő density (1 − a²)/|1 − a e^{iθ}|² for real |a| < 1.
pub fn bernstein_szego_density(a: f64) -> impl Fn(f64) -> f64 {
    move |theta: f64| (1.0 - a * a) / (1.0 - 2.0 * a * theta.cos() + a * a)
}

/// The polynomial density 1 + cos θ.
pub fn fejer_density() -> impl Fn(f64) -> f64 {
    |theta: f64| 1.0 + theta.cos()
}
