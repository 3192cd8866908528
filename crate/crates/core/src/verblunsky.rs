//! Verblunsky coefficients of an nc measure: the Favard synthesis direction
//! (coefficients → recurrence polynomials → moments) and the extraction
//! direction (moments → coefficients). The two directions round-trip and
//! that round trip is the backbone of the test suite.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::freemonoid::{shortlex_range, Reduction, Word};
use crate::linalg::{self, CMatrix};
use crate::moments::MomentFamily;
use crate::orthopoly::{self, gram_schmidt, NcPolynomial, OrthonormalFamily};
use crate::{Error, Result};

/// A disc-valued family γ: words → 𝔻 with γ_∅ = 0. Words missing from the
/// map count as zero inside the horizon; queries beyond the horizon fail.
#[derive(Clone, Debug)]
pub struct VerblunskyFamily {
    d: u8,
    horizon: Word,
    gamma: BTreeMap<Word, Complex64>,
}

impl VerblunskyFamily {
    pub fn new(d: u8, horizon: Word, entries: BTreeMap<Word, Complex64>) -> Result<Self> {
        if horizon.alphabet() != d {
            return Err(Error::AlphabetMismatch { left: d, right: horizon.alphabet() });
        }
        let mut gamma = BTreeMap::new();
        for (word, value) in entries {
            if word.alphabet() != d {
                return Err(Error::AlphabetMismatch { left: d, right: word.alphabet() });
            }
            if word > horizon {
                return Err(Error::HorizonExceeded { word, horizon });
            }
            if word.is_empty() {
                if value != linalg::cr(0.0) {
                    return Err(Error::InvalidVerblunsky { word, modulus: value.norm() });
                }
                continue;
            }
            if value.norm() >= 1.0 {
                return Err(Error::InvalidVerblunsky { word, modulus: value.norm() });
            }
            if value != linalg::cr(0.0) {
                gamma.insert(word, value);
            }
        }
        Ok(VerblunskyFamily { d, horizon, gamma })
    }

    /// The identically-zero family (the free measure's coefficients).
    pub fn free(d: u8, horizon: Word) -> Self {
        VerblunskyFamily { d, horizon, gamma: BTreeMap::new() }
    }

    /// Independent draws with modulus uniform in [0, `max_modulus`] and
    /// uniform phase, on every nonempty word up to the horizon.
    pub fn random<R: Rng + ?Sized>(
        d: u8,
        horizon: Word,
        max_modulus: f64,
        rng: &mut R,
    ) -> Self {
        assert!((0.0..1.0).contains(&max_modulus));
        let mut gamma = BTreeMap::new();
        for word in shortlex_range(&horizon) {
            if word.is_empty() {
                continue;
            }
            let r = max_modulus * rng.gen_range(0.0f64..1.0);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            gamma.insert(word, Complex64::from_polar(r, theta));
        }
        VerblunskyFamily { d, horizon, gamma }
    }

    pub fn alphabet(&self) -> u8 {
        self.d
    }

    pub fn horizon(&self) -> &Word {
        &self.horizon
    }

    /// Stored nonzero coefficients in shortlex order.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.gamma.iter()
    }

    pub fn gamma(&self, word: &Word) -> Result<Complex64> {
        if word.alphabet() != self.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: word.alphabet() });
        }
        if *word > self.horizon {
            return Err(Error::HorizonExceeded { word: word.clone(), horizon: self.horizon.clone() });
        }
        Ok(self.gamma.get(word).copied().unwrap_or_else(|| linalg::cr(0.0)))
    }

    /// The defect d_σ = √(1 − |γ_σ|²).
    pub fn defect(&self, word: &Word) -> Result<f64> {
        Ok((1.0 - self.gamma(word)?.norm_sqr()).sqrt())
    }

    /// Partial product ∏(1−|γ|²), square sum Σ|γ|² over all words ⪯ `upto`,
    /// and the same product restricted to the σ(n) line.
    pub fn product_and_sum(&self, upto: &Word) -> Result<ProductSum> {
        if *upto > self.horizon {
            return Err(Error::HorizonExceeded { word: upto.clone(), horizon: self.horizon.clone() });
        }
        let mut out = ProductSum { partial_product: 1.0, square_sum: 0.0, sigma_line_product: 1.0 };
        for word in shortlex_range(upto) {
            let g2 = self.gamma(&word)?.norm_sqr();
            out.partial_product *= 1.0 - g2;
            out.square_sum += g2;
            if word.letters().iter().all(|&l| l == self.d) {
                out.sigma_line_product *= 1.0 - g2;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ProductSum {
    pub partial_product: f64,
    pub square_sum: f64,
    pub sigma_line_product: f64,
}

/// Orthonormal polynomials φ and reverse polynomials φ^# generated by the
/// Szegő-type recurrences, both indexed by the shortlex interval [∅, σ0].
pub struct RecurrencePair {
    d: u8,
    sigma0: Word,
    words: Vec<Word>,
    phi: Vec<NcPolynomial>,
    phi_sharp: Vec<NcPolynomial>,
}

impl RecurrencePair {
    pub fn alphabet(&self) -> u8 {
        self.d
    }

    pub fn sigma0(&self) -> &Word {
        &self.sigma0
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn index_of(&self, word: &Word) -> Result<usize> {
        if word.alphabet() != self.d || *word > self.sigma0 {
            return Err(Error::OutOfRange { word: word.clone(), upto: self.sigma0.clone() });
        }
        Ok(word.shortlex_index()?.0 as usize)
    }

    pub fn phi(&self, i: usize) -> &NcPolynomial {
        &self.phi[i]
    }

    pub fn phi_sharp(&self, i: usize) -> &NcPolynomial {
        &self.phi_sharp[i]
    }

    pub fn phis(&self) -> &[NcPolynomial] {
        &self.phi
    }

    pub fn phi_sharps(&self) -> &[NcPolynomial] {
        &self.phi_sharp
    }

    /// Repackages the φ rows as an orthonormal family (the recurrences keep
    /// supports triangular with positive real leading coefficients).
    pub fn to_family(&self) -> Result<OrthonormalFamily> {
        let n = self.words.len();
        let mut coeff = CMatrix::zeros(n, n);
        for (i, p) in self.phi.iter().enumerate() {
            for (word, c) in p.terms() {
                let j = word.shortlex_index()?.0 as usize;
                coeff[(i, j)] = *c;
            }
        }
        orthopoly::family_from_rows(self.d, self.sigma0.clone(), self.words.clone(), coeff)
    }
}

/// Runs the normal and reverse recurrences in shortlex order:
///
///   φ_{kσ}   = (Z_k φ_σ − γ_{kσ} φ^#_{kσ−1}) / d_{kσ}
///   φ^#_{kσ} = (−conj(γ_{kσ}) Z_k φ_σ + φ^#_{kσ−1}) / d_{kσ}
///
/// with φ_∅ = φ^#_∅ = 1. Both σ and kσ−1 precede kσ, so the iteration is
/// well-founded.
pub fn synthesize(g: &VerblunskyFamily, sigma0: &Word) -> Result<RecurrencePair> {
    if *sigma0 > *g.horizon() {
        return Err(Error::HorizonExceeded { word: sigma0.clone(), horizon: g.horizon().clone() });
    }
    let d = g.alphabet();
    let words: Vec<Word> = shortlex_range(sigma0).collect();
    let mut phi: Vec<NcPolynomial> = Vec::with_capacity(words.len());
    let mut phi_sharp: Vec<NcPolynomial> = Vec::with_capacity(words.len());
    phi.push(NcPolynomial::one(d));
    phi_sharp.push(NcPolynomial::one(d));
    for word in words.iter().skip(1) {
        let gamma = g.gamma(word)?;
        if gamma.norm() >= 1.0 {
            return Err(Error::InvalidVerblunsky { word: word.clone(), modulus: gamma.norm() });
        }
        let defect = (1.0 - gamma.norm_sqr()).sqrt();
        let (k, sigma) = word.split_first().expect("nonempty");
        let pred = word.predecessor()?;
        let shifted = phi[sigma.shortlex_index()?.0 as usize].prepend_letter(k)?;
        let sharp_pred = &phi_sharp[pred.shortlex_index()?.0 as usize];
        let scale = linalg::cr(1.0 / defect);
        phi.push(shifted.add_scaled(sharp_pred, -gamma).scale(scale));
        phi_sharp.push(sharp_pred.add_scaled(&shifted, -gamma.conj()).scale(scale));
    }
    Ok(RecurrencePair { d, sigma0: sigma0.clone(), words, phi, phi_sharp })
}

/// Rebuilds the moment family of the unique measure orthonormalising the
/// recurrence polynomials: with A the triangular coefficient matrix of the
/// φ rows, the kernel block is K = A⁻¹·A⁻*, and the moments are its first
/// column. The block is checked against the multi-Toeplitz axioms before
/// the column is read off, which numerically witnesses uniqueness.
pub fn moments_from_polys(pair: &RecurrencePair) -> Result<MomentFamily> {
    let n = pair.len();
    let mut a = linalg::dd::CddMatrix::zeros(n, n);
    for i in 0..n {
        for (word, c) in pair.phi(i).terms() {
            let j = word.shortlex_index()?.0 as usize;
            a.set(i, j, linalg::dd::Cdd::from_c64(*c));
        }
    }
    // K = A⁻¹·A⁻*, carried in double-double: the kernel can be nearly
    // singular while its entries must still identify the measure.
    let a_inv = linalg::dd::lower_triangular_inverse_dd(&a);
    let kernel = linalg::dd::times_adjoint_dd(&a_inv).to_c64();

    let words = pair.words();
    for i in 0..n {
        for j in 0..n {
            let expected = match words[i].reduce_pair(&words[j]) {
                Reduction::LeftRemainder(alpha) => kernel[(alpha.shortlex_index()?.0 as usize, 0)],
                Reduction::RightRemainder(alpha) => {
                    kernel[(alpha.shortlex_index()?.0 as usize, 0)].conj()
                }
                Reduction::Orthogonal => linalg::cr(0.0),
            };
            let dev = (kernel[(i, j)] - expected).norm();
            if dev > 1e-9 {
                return Err(Error::Degenerate(format!(
                    "synthesised kernel violates the multi-Toeplitz axioms at ({}, {}): dev {dev:.3e}",
                    words[i], words[j]
                )));
            }
        }
    }

    let mut entries = BTreeMap::new();
    for (i, word) in words.iter().enumerate().skip(1) {
        entries.insert(word.clone(), kernel[(i, 0)]);
    }
    MomentFamily::new(pair.alphabet(), pair.sigma0().clone(), entries)
}

/// Extraction output: the coefficients plus any words whose modulus came
/// out within 1e−10 of the unit circle — finite moment data cannot certify
/// non-triviality there.
pub struct Extraction {
    pub gamma: VerblunskyFamily,
    pub near_trivial: Vec<Word>,
}

/// Recovers the Verblunsky coefficients of a non-trivial measure by
/// shortlex induction over the Gram-Schmidt data:
///
///   d_τ = a_{σ,σ} / a_{τ,τ}          for τ = kσ,
///   γ_τ = −d_τ · φ_τ(0) · ∏_{τ′ ⪯ τ−1} d_{τ′},
///
/// using that φ^#_{τ−1}(0) = ∏_{τ′ ⪯ τ−1} d_{τ′}^{−1}. A modulus
/// consistency check |γ_τ|² ≈ 1 − d_τ² guards the inversion.
pub fn extract(m: &MomentFamily, sigma0: &Word) -> Result<Extraction> {
    let family = gram_schmidt(m, sigma0)?;
    extract_from_family(&family)
}

/// Extraction from a precomputed orthonormal family.
pub fn extract_from_family(family: &OrthonormalFamily) -> Result<Extraction> {
    let d = family.alphabet();
    let words = family.words();
    let mut gamma = BTreeMap::new();
    let mut near_trivial = Vec::new();
    // Running ∏_{τ′ ⪯ words[i]} d_{τ′}; starts at d_∅ = 1.
    let mut defect_product = 1.0f64;
    for (i, word) in words.iter().enumerate().skip(1) {
        let (_, sigma) = word.split_first().expect("nonempty");
        let a_parent = family.leading(family.index_of(&sigma)?);
        let a_here = family.leading(i);
        let mut defect = a_parent / a_here;
        if defect > 1.0 {
            // Roundoff near the free measure: 1 − d² ∈ (−1e−12, 0) clamps
            // to a unit defect, anything worse is a genuine inconsistency.
            if 1.0 - defect * defect > -1e-12 {
                defect = 1.0;
            } else {
                return Err(Error::Degenerate(format!(
                    "defect at {word} exceeds 1: d = {defect}"
                )));
            }
        }
        let value = -linalg::cr(defect * defect_product) * family.phi_at_zero(i);
        let consistency = (value.norm_sqr() - (1.0 - defect * defect)).abs();
        if consistency > 1e-8 {
            return Err(Error::Degenerate(format!(
                "modulus consistency violated at {word}: | |γ|² − (1 − d²) | = {consistency:.3e}"
            )));
        }
        if value.norm() >= 1.0 - 1e-10 {
            near_trivial.push(word.clone());
        }
        let clamped = if value.norm() >= 1.0 {
            value * linalg::cr((1.0 - 1e-12) / value.norm())
        } else {
            value
        };
        gamma.insert(word.clone(), clamped);
        defect_product *= defect;
    }
    let family_out = VerblunskyFamily::new(d, family.sigma0().clone(), gamma)?;
    Ok(Extraction { gamma: family_out, near_trivial })
}
