//! Moment families of probability nc measures and the multi-Toeplitz
//! kernels they induce: blocks, determinants, positivity and the inner
//! product on nc polynomials.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::freemonoid::{shortlex_range, Reduction, Word};
use crate::linalg::{self, cholesky, CMatrix};
use crate::orthopoly::NcPolynomial;
use crate::{Error, Result};

/// Relative pivot threshold for positive-definiteness checks: a block
/// counts as invertible when every Cholesky pivot exceeds
/// `tol · trace/N`.
pub const DEFAULT_PIVOT_TOL: f64 = 1e-10;

/// A probability nc measure given by its moments c(σ) = μ(L^σ), stored for
/// every word up to a declared horizon. Reads outside the stored range fail
/// loudly rather than assuming zero.
#[derive(Clone, Debug)]
pub struct MomentFamily {
    d: u8,
    horizon: Word,
    c: BTreeMap<Word, Complex64>,
}

impl MomentFamily {
    /// Builds a family from explicit entries. The empty word may be omitted
    /// (it is pinned to 1) but must equal 1 if present; all entries must lie
    /// within the horizon.
    pub fn new(d: u8, horizon: Word, entries: BTreeMap<Word, Complex64>) -> Result<Self> {
        if horizon.alphabet() != d {
            return Err(Error::AlphabetMismatch { left: d, right: horizon.alphabet() });
        }
        let mut c = BTreeMap::new();
        for (word, value) in entries {
            if word.alphabet() != d {
                return Err(Error::AlphabetMismatch { left: d, right: word.alphabet() });
            }
            if word > horizon {
                return Err(Error::HorizonExceeded { word, horizon });
            }
            if word.is_empty() {
                if (value - linalg::cr(1.0)).norm() > 1e-12 {
                    return Err(Error::NotNormalized { got: format!("{value}") });
                }
                continue;
            }
            c.insert(word, value);
        }
        c.insert(Word::empty(d), linalg::cr(1.0));
        Ok(MomentFamily { d, horizon, c })
    }

    /// The measure with c(σ) = δ_{σ,∅}, stored densely up to `horizon`.
    pub fn free(d: u8, horizon: Word) -> Self {
        let mut c = BTreeMap::new();
        for word in shortlex_range(&horizon) {
            c.insert(word, linalg::cr(0.0));
        }
        c.insert(Word::empty(d), linalg::cr(1.0));
        MomentFamily { d, horizon, c }
    }

    /// Fills every unstored word within the horizon with zero.
    pub fn fill_zero(&mut self) {
        for word in shortlex_range(&self.horizon.clone()) {
            self.c.entry(word).or_insert_with(|| linalg::cr(0.0));
        }
    }

    pub fn alphabet(&self) -> u8 {
        self.d
    }

    pub fn horizon(&self) -> &Word {
        &self.horizon
    }

    /// Stored moments in shortlex order, including the empty word.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.c.iter()
    }

    pub fn moment(&self, word: &Word) -> Result<Complex64> {
        if word.alphabet() != self.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: word.alphabet() });
        }
        if *word > self.horizon {
            return Err(Error::HorizonExceeded { word: word.clone(), horizon: self.horizon.clone() });
        }
        self.c
            .get(word)
            .copied()
            .ok_or_else(|| Error::MissingMoment { word: word.clone() })
    }

    /// Kernel entry K(σ, τ) under the suffix-reduction rule: c(α) when
    /// σ = τα, the conjugate moment when τ = σα, and an exact zero on
    /// orthogonal pairs.
    pub fn kernel_entry(&self, sigma: &Word, tau: &Word) -> Result<Complex64> {
        if sigma.alphabet() != self.d || tau.alphabet() != self.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: sigma.alphabet().max(tau.alphabet()) });
        }
        match sigma.reduce_pair(tau) {
            Reduction::LeftRemainder(alpha) => self.moment(&alpha),
            Reduction::RightRemainder(alpha) => Ok(self.moment(&alpha)?.conj()),
            Reduction::Orthogonal => Ok(linalg::cr(0.0)),
        }
    }

    /// The Hermitian block [K(σ,τ)] over all words σ, τ ⪯ σ0.
    pub fn kernel_block(&self, sigma0: &Word) -> Result<KernelBlock> {
        if *sigma0 > self.horizon {
            return Err(Error::HorizonExceeded { word: sigma0.clone(), horizon: self.horizon.clone() });
        }
        let words: Vec<Word> = shortlex_range(sigma0).collect();
        let n = words.len();
        let mut matrix = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                matrix[(i, j)] = self.kernel_entry(&words[i], &words[j])?;
            }
        }
        Ok(KernelBlock { top: sigma0.clone(), matrix })
    }

    /// Cholesky positivity check of the block at σ0 with the relative pivot
    /// threshold `tol · trace/N`; failure is a `false` verdict, not an error.
    pub fn check_nontrivial(&self, sigma0: &Word, tol: f64) -> Result<PositivityCheck> {
        let block = self.kernel_block(sigma0)?;
        let n = block.matrix.nrows();
        let trace: f64 = (0..n).map(|i| block.matrix[(i, i)].re).sum();
        let floor = tol * trace / n as f64;
        let chol = cholesky(&block.matrix, floor);
        Ok(PositivityCheck {
            nontrivial: chol.succeeded(),
            min_pivot: chol.min_pivot(),
            failed_row: chol.failed_at,
        })
    }

    /// Multi-Toeplitz determinant D_{σ0} as the product of Cholesky pivots;
    /// zero when the factorisation fails.
    pub fn determinant(&self, sigma0: &Word) -> Result<f64> {
        let chol = cholesky(&self.kernel_block(sigma0)?.matrix, 0.0);
        if chol.succeeded() {
            Ok(chol.pivots.iter().product())
        } else {
            Ok(0.0)
        }
    }

    /// ln D_{σ0}, or None when the block is singular. Ratios of successive
    /// determinants should be formed from these to dodge underflow.
    pub fn determinant_log(&self, sigma0: &Word) -> Result<Option<f64>> {
        let chol = cholesky(&self.kernel_block(sigma0)?.matrix, 0.0);
        Ok(chol.log_det())
    }

    /// ⟨P, Q⟩_K = Σ K(σ,τ) a_σ conj(b_τ) over the supports of P and Q.
    /// Accumulated in double-double: orthogonality makes the sum cancel
    /// down from coefficients that can dwarf the result.
    pub fn inner_product(&self, p: &NcPolynomial, q: &NcPolynomial) -> Result<Complex64> {
        if p.alphabet() != self.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: p.alphabet() });
        }
        if q.alphabet() != self.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: q.alphabet() });
        }
        let mut acc = linalg::dd::Cdd::ZERO;
        for (sigma, a) in p.terms() {
            for (tau, b) in q.terms() {
                let term = linalg::dd::Cdd::from_c64(self.kernel_entry(sigma, tau)?)
                    * linalg::dd::Cdd::from_c64(*a)
                    * linalg::dd::Cdd::from_c64(b.conj());
                acc = acc + term;
            }
        }
        Ok(acc.to_c64())
    }

    /// Random spot checks of the multi-Toeplitz axioms on the kernel view:
    /// left-translation invariance, Hermitian symmetry and exact structural
    /// zeros on orthogonal pairs.
    pub fn axiom_spot_check<R: Rng + ?Sized>(&self, triples: usize, rng: &mut R) -> Result<AxiomReport> {
        let top = self.horizon.shortlex_index()?.0;
        let sample_word = |rng: &mut R| {
            Word::from_index(crate::freemonoid::ShortlexIndex(rng.gen_range(0..=top)), self.d)
        };
        let mut report = AxiomReport::default();
        for _ in 0..triples {
            let sigma = sample_word(rng);
            let sigma2 = sample_word(rng);
            // Find a translator that keeps both products within the horizon;
            // the empty word always qualifies.
            let mut tau = Word::empty(self.d);
            for _ in 0..50 {
                let cand = sample_word(rng);
                if cand.concat(&sigma)? <= self.horizon && cand.concat(&sigma2)? <= self.horizon {
                    tau = cand;
                    break;
                }
            }
            let lhs = self.kernel_entry(&tau.concat(&sigma)?, &tau.concat(&sigma2)?)?;
            let rhs = self.kernel_entry(&sigma, &sigma2)?;
            report.max_translation_dev = report.max_translation_dev.max((lhs - rhs).norm());

            let fwd = self.kernel_entry(&sigma, &sigma2)?;
            let bwd = self.kernel_entry(&sigma2, &sigma)?;
            report.max_hermitian_dev = report.max_hermitian_dev.max((fwd - bwd.conj()).norm());

            if let Reduction::Orthogonal = sigma.reduce_pair(&sigma2) {
                report.orthogonal_pairs += 1;
                if fwd != linalg::cr(0.0) {
                    report.structural_zero_violations += 1;
                }
            }
            report.triples += 1;
        }
        Ok(report)
    }
}

/// A materialised kernel block [K(σ,τ)]_{σ,τ ⪯ top}.
pub struct KernelBlock {
    pub top: Word,
    pub matrix: CMatrix,
}

impl KernelBlock {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Verdict of a positive-definiteness check together with the smallest
/// Cholesky pivot seen.
#[derive(Clone, Copy, Debug)]
pub struct PositivityCheck {
    pub nontrivial: bool,
    pub min_pivot: f64,
    pub failed_row: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AxiomReport {
    pub triples: usize,
    pub max_translation_dev: f64,
    pub max_hermitian_dev: f64,
    pub orthogonal_pairs: usize,
    pub structural_zero_violations: usize,
}
