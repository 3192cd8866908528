//! Row-ball geometry of matrix tuples, the summation identity for the
//! recurrence polynomials, and the determinantal-zero forms evaluated on
//! interior, boundary and exterior points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::freemonoid::{words_of_length, Word};
use crate::linalg::{ginibre, haar_unitary, hermitian_eigenvalues, hermitize, max_eigenvalue, spectral_norm, CMatrix};
use crate::tuple::{MatrixTuple, TupleEvaluator};
use crate::verblunsky::RecurrencePair;
use crate::{Error, Result};

/// Where a tuple sits relative to the closed row-ball. The trichotomy
/// interior / distinguished boundary / strict exterior is not exhaustive
/// over all tuples; everything else is reported as Indefinite and carries
/// no theorem claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallClass {
    Interior,
    Boundary,
    Exterior,
    Indefinite,
}

impl std::fmt::Display for BallClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BallClass::Interior => "interior",
            BallClass::Boundary => "boundary",
            BallClass::Exterior => "exterior",
            BallClass::Indefinite => "indefinite",
        };
        write!(f, "{s}")
    }
}

/// Classification verdict with the extreme eigenvalues of I − ΣZ_jZ_j^* as
/// witness.
#[derive(Clone, Copy, Debug)]
pub struct BallClassification {
    pub class: BallClass,
    pub witness_min: f64,
    pub witness_max: f64,
}

pub fn classify_point(z: &MatrixTuple, tol: f64) -> BallClassification {
    let eigs = hermitian_eigenvalues(&z.row_gram());
    let lambda_min = *eigs.first().expect("nonempty tuple");
    let lambda_max = *eigs.last().expect("nonempty tuple");
    let class = if lambda_max < 1.0 - tol {
        BallClass::Interior
    } else if (lambda_min - 1.0).abs() <= tol && (lambda_max - 1.0).abs() <= tol {
        BallClass::Boundary
    } else if lambda_min > 1.0 + tol {
        BallClass::Exterior
    } else {
        BallClass::Indefinite
    };
    BallClassification { class, witness_min: 1.0 - lambda_max, witness_max: 1.0 - lambda_min }
}

/// Default absolute tolerance for boundary membership; samples constructed
/// here satisfy ΣZZ^* = I to this accuracy.
pub const BOUNDARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug)]
pub enum SampleKind {
    /// Gaussian tuple rescaled so λ_max(ΣZZ^*) = r².
    Interior(f64),
    /// Rows of a Haar unitary split into d blocks: ΣZZ^* = I exactly.
    Boundary,
    /// Boundary sample scaled by s > 1: ΣZZ^* = s²·I.
    Exterior(f64),
}

/// Deterministic sample for a given seed.
pub fn sample_tuple(kind: SampleKind, k: usize, d: u8, seed: u64) -> MatrixTuple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        SampleKind::Interior(r) => {
            assert!(0.0 < r && r < 1.0, "interior radius must satisfy 0 < r < 1");
            let components: Vec<CMatrix> = (0..d).map(|_| ginibre(k, &mut rng)).collect();
            let tuple = MatrixTuple::new(components).expect("square components");
            let top = max_eigenvalue(&tuple.row_gram()).max(f64::MIN_POSITIVE);
            tuple.scale(r / top.sqrt())
        }
        SampleKind::Boundary => {
            let u = haar_unitary(k * d as usize, &mut rng);
            let components: Vec<CMatrix> = (0..d as usize)
                .map(|j| CMatrix::from_fn(k, k, |r, c| u[(r, j * k + c)]))
                .collect();
            MatrixTuple::new(components).expect("square components")
        }
        SampleKind::Exterior(s) => {
            assert!(s > 1.0, "exterior scale must exceed 1");
            sample_tuple(SampleKind::Boundary, k, d, seed).scale(s)
        }
    }
}

/// A Hermitian PSD form together with its smallest eigenvalue and its
/// determinant as sign and log-magnitude (large n has the determinant far
/// outside f64 range).
pub struct QuadraticForm {
    pub matrix: CMatrix,
    pub min_eig: f64,
    pub det_sign: i8,
    pub log_abs_det: f64,
}

fn form_report(matrix: CMatrix) -> QuadraticForm {
    let eigs = hermitian_eigenvalues(&matrix);
    let min_eig = *eigs.first().expect("nonempty");
    let mut sign = 1i8;
    let mut log_abs = 0.0f64;
    for lambda in &eigs {
        if *lambda == 0.0 {
            sign = 0;
        } else if *lambda < 0.0 {
            sign = -sign;
        }
        log_abs += lambda.abs().ln();
    }
    QuadraticForm { matrix, min_eig, det_sign: sign, log_abs_det: log_abs }
}

fn check_range(pair: &RecurrencePair, n: usize) -> Result<usize> {
    pair.index_of(&Word::sigma(n, pair.alphabet()))
}

/// M = φ^#_{σ(n)}(Z^*)^*·φ^#_{σ(n)}(Z^*); positive definite on the open
/// row-ball, so its determinantal zeros lie outside.
pub fn reverse_form(pair: &RecurrencePair, n: usize, z: &MatrixTuple) -> Result<QuadraticForm> {
    let idx = check_range(pair, n)?;
    let zstar = z.adjoint();
    let at = pair.phi_sharp(idx).evaluate(&zstar)?;
    Ok(form_report(hermitize(&(at.adjoint() * &at))))
}

/// S = Σ_{|σ|=n} φ_σ(Z^*)^*·φ_σ(Z^*); positive definite on the strict
/// exterior of the closed row-ball.
pub fn level_form(pair: &RecurrencePair, n: usize, z: &MatrixTuple) -> Result<QuadraticForm> {
    check_range(pair, n)?;
    let zstar = z.adjoint();
    let mut eval = TupleEvaluator::new(&zstar);
    let k = z.level();
    let mut acc = CMatrix::zeros(k, k);
    for word in words_of_length(n, pair.alphabet()) {
        let at = pair.phi(word.shortlex_index()?.0 as usize).evaluate_with(&mut eval)?;
        acc += at.adjoint() * at;
    }
    Ok(form_report(hermitize(&acc)))
}

/// Relative spectral-norm residual of the summation identity
///
///   φ^#_{σ(n)}(Z)^*φ^#_{σ(n)}(W) − Σ_{|σ|≤n} φ_σ(Z)^*φ_σ(W)
///       = −Σ_{k=1}^d Σ_{|σ|≤n−1} φ_σ(Z)^*·Z_k^*·W_k·φ_σ(W),
///
/// normalised by max(1, ‖lhs‖, ‖rhs‖).
pub fn summation_residual(
    pair: &RecurrencePair,
    n: usize,
    z: &MatrixTuple,
    w: &MatrixTuple,
) -> Result<f64> {
    if z.level() != w.level() {
        return Err(Error::DimensionMismatch(format!(
            "tuple levels differ: {} vs {}",
            z.level(),
            w.level()
        )));
    }
    let top = check_range(pair, n)?;
    let k = z.level();
    let mut eval_z = TupleEvaluator::new(z);
    let mut eval_w = TupleEvaluator::new(w);

    let sharp_z = pair.phi_sharp(top).evaluate_with(&mut eval_z)?;
    let sharp_w = pair.phi_sharp(top).evaluate_with(&mut eval_w)?;
    let mut lhs = sharp_z.adjoint() * sharp_w;
    for i in 0..=top {
        let at_z = pair.phi(i).evaluate_with(&mut eval_z)?;
        let at_w = pair.phi(i).evaluate_with(&mut eval_w)?;
        lhs -= at_z.adjoint() * at_w;
    }

    let mut rhs = CMatrix::zeros(k, k);
    if n > 0 {
        let prev_top = pair.index_of(&Word::sigma(n - 1, pair.alphabet()))?;
        for i in 0..=prev_top {
            let at_z = pair.phi(i).evaluate_with(&mut eval_z)?;
            let at_w = pair.phi(i).evaluate_with(&mut eval_w)?;
            for letter in 1..=pair.alphabet() {
                rhs -= at_z.adjoint()
                    * z.component(letter).adjoint()
                    * w.component(letter)
                    * &at_w;
            }
        }
    }

    let scale = spectral_norm(&lhs).max(spectral_norm(&rhs)).max(1.0);
    Ok(spectral_norm(&(lhs - rhs)) / scale)
}

/// Residual of the interior decomposition
///
///   M = S_n + (I − ΣZZ^*) + Σ_{1≤|σ|≤n−1} φ_σ(Z^*)^*(I − ΣZZ^*)φ_σ(Z^*),
///
/// in spectral norm.
pub fn interior_decomposition_residual(
    pair: &RecurrencePair,
    n: usize,
    z: &MatrixTuple,
) -> Result<f64> {
    let m = reverse_form(pair, n, z)?.matrix;
    let s = level_form(pair, n, z)?.matrix;
    let k = z.level();
    let defect = CMatrix::identity(k, k) - z.row_gram();
    let zstar = z.adjoint();
    let mut eval = TupleEvaluator::new(&zstar);
    let mut middle = CMatrix::zeros(k, k);
    for len in 1..n {
        for word in words_of_length(len, pair.alphabet()) {
            let at = pair.phi(word.shortlex_index()?.0 as usize).evaluate_with(&mut eval)?;
            middle += at.adjoint() * &defect * at;
        }
    }
    Ok(spectral_norm(&(m - s - defect - middle)))
}
