//! NC Christoffel–Darboux kernels, Christoffel approximates Λ_n, the
//! explicit minimiser of the constrained quadratic functional, and the
//! monotone limit Λ∞.

use std::collections::BTreeMap;


use rand::Rng;

use crate::freemonoid::Word;
use crate::linalg::{self, dd, hermitize, spectral_norm, CMatrix};
use crate::moments::MomentFamily;
use crate::orthopoly::{gram_schmidt, OrthonormalFamily};
use crate::tuple::{MatrixTuple, TupleEvaluator};
use crate::{Error, Result};

/// A k×k matrix of nc polynomials Σ_σ Z^σ ⊗ B_σ, with the coefficient
/// acting on the right: evaluation at a level-k tuple A is Σ_σ A^σ·B_σ.
#[derive(Clone, Debug)]
pub struct MatrixNcPolynomial {
    d: u8,
    level: usize,
    terms: BTreeMap<Word, CMatrix>,
}

impl MatrixNcPolynomial {
    pub fn new(d: u8, level: usize) -> Self {
        MatrixNcPolynomial { d, level, terms: BTreeMap::new() }
    }

    /// The constant polynomial 1 ⊗ I_k.
    pub fn constant_identity(d: u8, level: usize) -> Self {
        let mut p = Self::new(d, level);
        p.terms.insert(Word::empty(d), CMatrix::identity(level, level));
        p
    }

    pub fn alphabet(&self) -> u8 {
        self.d
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn set_term(&mut self, word: Word, coeff: CMatrix) -> Result<()> {
        if word.alphabet() != self.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: word.alphabet() });
        }
        if coeff.nrows() != self.level || coeff.ncols() != self.level {
            return Err(Error::DimensionMismatch(format!(
                "coefficient is {}×{}, polynomial level is {}",
                coeff.nrows(),
                coeff.ncols(),
                self.level
            )));
        }
        self.terms.insert(word, coeff);
        Ok(())
    }

    pub fn term(&self, word: &Word) -> Option<&CMatrix> {
        self.terms.get(word)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CMatrix)> {
        self.terms.iter()
    }

    /// Σ_σ A^σ·B_σ at a tuple of the same level.
    pub fn evaluate(&self, a: &MatrixTuple) -> Result<CMatrix> {
        if a.alphabet() != self.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: a.alphabet() });
        }
        if a.level() != self.level {
            return Err(Error::DimensionMismatch(format!(
                "tuple level {} vs polynomial level {}",
                a.level(),
                self.level
            )));
        }
        let mut eval = TupleEvaluator::new(a);
        let mut acc = CMatrix::zeros(self.level, self.level);
        for (word, coeff) in &self.terms {
            acc += eval.word_power(word)? * coeff;
        }
        Ok(acc)
    }
}

fn check_levels(a: &MatrixTuple, b: &MatrixTuple) -> Result<()> {
    if a.level() != b.level() {
        return Err(Error::DimensionMismatch(format!(
            "tuple levels differ: {} vs {}",
            a.level(),
            b.level()
        )));
    }
    Ok(())
}

/// κ_{μ,n}(A,B) = Σ_{σ ⪯ σ(n)} φ_σ(A)·φ_σ(B)^*.
pub fn cd_kernel(
    f: &OrthonormalFamily,
    n: usize,
    a: &MatrixTuple,
    b: &MatrixTuple,
) -> Result<CMatrix> {
    check_levels(a, b)?;
    let top = f.index_of(&Word::sigma(n, f.alphabet()))?;
    let mut eval_a = TupleEvaluator::new(a);
    let same = a == b;
    let mut eval_b = TupleEvaluator::new(b);
    let k = a.level();
    let mut acc = CMatrix::zeros(k, k);
    for i in 0..=top {
        let at_a = f.phi(i).evaluate_with(&mut eval_a)?;
        let at_b = if same { at_a.clone() } else { f.phi(i).evaluate_with(&mut eval_b)? };
        acc += at_a * at_b.adjoint();
    }
    Ok(acc)
}

/// Λ_n(A; μ) = κ_{μ,n}(A,A)⁻¹. The ∅ term puts κ ⪰ I_k, so the inverse
/// always exists.
pub fn christoffel_approx(f: &OrthonormalFamily, n: usize, a: &MatrixTuple) -> Result<CMatrix> {
    let kappa = hermitize(&cd_kernel(f, n, a, a)?);
    kappa
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("CD kernel unexpectedly singular".into()))
}

/// The explicit minimiser Q_n = Σ_{σ ⪯ σ(n)} φ_σ ⊗ φ_σ(A)^*·Λ_n(A; μ),
/// which satisfies Q_n(A) = I_k and attains the quadratic functional
/// minimum Λ_n(A; μ).
pub fn minimizer_q(f: &OrthonormalFamily, n: usize, a: &MatrixTuple) -> Result<MatrixNcPolynomial> {
    let lambda = christoffel_approx(f, n, a)?;
    let top = f.index_of(&Word::sigma(n, f.alphabet()))?;
    let k = a.level();
    let mut eval = TupleEvaluator::new(a);
    let coeff = f.coeff_matrix();
    let mut sums: Vec<CMatrix> = vec![CMatrix::zeros(k, k); top + 1];
    for i in 0..=top {
        let c_i = f.phi(i).evaluate_with(&mut eval)?.adjoint() * &lambda;
        for (j, sum) in sums.iter_mut().enumerate().take(i + 1) {
            let a_ij = coeff[(i, j)];
            if a_ij != linalg::cr(0.0) {
                *sum += &c_i * a_ij;
            }
        }
    }
    let mut q = MatrixNcPolynomial::new(f.alphabet(), k);
    for (j, sum) in sums.into_iter().enumerate() {
        q.set_term(f.word(j).clone(), sum)?;
    }
    Ok(q)
}

/// (μ ⊗ Id_k)(Q*Q) = Σ_{σ,τ} K(τ,σ)·B_σ^*·B_τ, Hermitian PSD. Entries are
/// accumulated in double-double; near the minimum the sum cancels down
/// from coefficient products far above the result.
pub fn quadratic_functional(m: &MomentFamily, q: &MatrixNcPolynomial) -> Result<CMatrix> {
    if q.alphabet() != m.alphabet() {
        return Err(Error::AlphabetMismatch { left: m.alphabet(), right: q.alphabet() });
    }
    let k = q.level();
    let mut acc = vec![dd::Cdd::ZERO; k * k];
    for (sigma, b_sigma) in q.terms() {
        for (tau, b_tau) in q.terms() {
            let kernel = m.kernel_entry(tau, sigma)?;
            if kernel == linalg::cr(0.0) {
                continue;
            }
            let product = b_sigma.adjoint() * b_tau;
            let kernel = dd::Cdd::from_c64(kernel);
            for r in 0..k {
                for c in 0..k {
                    acc[r * k + c] = acc[r * k + c] + kernel * dd::Cdd::from_c64(product[(r, c)]);
                }
            }
        }
    }
    Ok(hermitize(&CMatrix::from_fn(k, k, |r, c| acc[r * k + c].to_c64())))
}

/// How an approximate-limit run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitOutcome {
    /// Relative spectral change below tolerance on two consecutive steps.
    Converged { at_n: usize },
    /// Still shrinking geometrically when the horizon ran out; Λ∞ = 0 is
    /// the meaningful reading (singularity signal). Heuristic call.
    DecayedToZero,
    /// Horizon exhausted without either signal; best value returned.
    HorizonExhausted,
}

pub struct ChristoffelLimit {
    pub value: CMatrix,
    pub outcome: LimitOutcome,
    /// Λ_0, Λ_1, … as far as they were computed.
    pub trace: Vec<CMatrix>,
}

impl ChristoffelLimit {
    pub fn converged(&self) -> bool {
        matches!(self.outcome, LimitOutcome::Converged { .. })
    }
}

/// Iterates Λ_n(A; μ) for n = 0..=max_n until the relative spectral-norm
/// step drops below `tol` twice in a row. The existence of the limit is a
/// theorem; a rate is not, so any finite-n convergence call is heuristic.
pub fn christoffel_function(
    m: &MomentFamily,
    a: &MatrixTuple,
    tol: f64,
    max_n: usize,
) -> Result<ChristoffelLimit> {
    let f = gram_schmidt(m, &Word::sigma(max_n, m.alphabet()))?;
    let k = a.level();
    let mut eval = TupleEvaluator::new(a);
    let mut kappa = CMatrix::zeros(k, k);
    let mut trace: Vec<CMatrix> = Vec::with_capacity(max_n + 1);
    let mut next_index = 0usize;
    let mut small_steps = 0usize;
    for n in 0..=max_n {
        let level_top = f.index_of(&Word::sigma(n, m.alphabet()))?;
        while next_index <= level_top {
            let at_a = f.phi(next_index).evaluate_with(&mut eval)?;
            kappa += &at_a * at_a.adjoint();
            next_index += 1;
        }
        let lambda = hermitize(&kappa)
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("CD kernel unexpectedly singular".into()))?;
        if let Some(prev) = trace.last() {
            let step = spectral_norm(&(&lambda - prev)) / spectral_norm(&lambda).max(f64::MIN_POSITIVE);
            small_steps = if step < tol { small_steps + 1 } else { 0 };
        }
        trace.push(lambda.clone());
        if small_steps >= 2 {
            return Ok(ChristoffelLimit { value: lambda, outcome: LimitOutcome::Converged { at_n: n }, trace });
        }
    }
    let value = trace.last().expect("max_n >= 0").clone();
    let first = spectral_norm(&trace[0]);
    let last = spectral_norm(&value);
    let decaying = trace.len() >= 2 && {
        let prev = spectral_norm(&trace[trace.len() - 2]);
        last < 0.5 * first && last <= 0.9 * prev
    };
    let outcome = if decaying { LimitOutcome::DecayedToZero } else { LimitOutcome::HorizonExhausted };
    Ok(ChristoffelLimit { value, outcome, trace })
}

/// Random matrix polynomial of degree ⪯ σ(n) satisfying Q(A) = I_k: free
/// Gaussian coefficients with the ∅ coefficient corrected to meet the
/// constraint. Where the monomials Z^σ(A) are large the correction is
/// correspondingly large; samples stay admissible either way.
pub fn random_admissible<R: Rng + ?Sized>(
    d: u8,
    n: usize,
    a: &MatrixTuple,
    rng: &mut R,
) -> Result<MatrixNcPolynomial> {
    let k = a.level();
    let mut q = MatrixNcPolynomial::new(d, k);
    let mut eval = TupleEvaluator::new(a);
    let mut at_a = CMatrix::zeros(k, k);
    for word in crate::freemonoid::shortlex_range(&Word::sigma(n, d)).skip(1) {
        let coeff = CMatrix::from_fn(k, k, |_, _| linalg::standard_complex(rng));
        at_a += eval.word_power(&word)? * &coeff;
        q.set_term(word, coeff)?;
    }
    q.set_term(Word::empty(d), CMatrix::identity(k, k) - at_a)?;
    Ok(q)
}
