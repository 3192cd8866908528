//! Noncommutative polynomials, Gram-Schmidt orthonormalisation against a
//! moment kernel, monic rescaling and evaluation at matrix tuples.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::freemonoid::{shortlex_range, Word};
use crate::linalg::{self, cholesky_inverse, CMatrix};
use crate::moments::{MomentFamily, DEFAULT_PIVOT_TOL};
use crate::tuple::{MatrixTuple, TupleEvaluator};
use crate::{Error, Result};

/// A polynomial in d noncommuting variables: finitely many complex
/// coefficients indexed by words. Exact-zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct NcPolynomial {
    d: u8,
    coeffs: BTreeMap<Word, Complex64>,
}

impl NcPolynomial {
    pub fn zero(d: u8) -> Self {
        NcPolynomial { d, coeffs: BTreeMap::new() }
    }

    /// The constant polynomial 1.
    pub fn one(d: u8) -> Self {
        Self::monomial(Word::empty(d), linalg::cr(1.0))
    }

    pub fn monomial(word: Word, coeff: Complex64) -> Self {
        let d = word.alphabet();
        let mut coeffs = BTreeMap::new();
        if coeff != linalg::cr(0.0) {
            coeffs.insert(word, coeff);
        }
        NcPolynomial { d, coeffs }
    }

    pub fn from_terms(
        d: u8,
        terms: impl IntoIterator<Item = (Word, Complex64)>,
    ) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (word, coeff) in terms {
            if word.alphabet() != d {
                return Err(Error::AlphabetMismatch { left: d, right: word.alphabet() });
            }
            if coeff != linalg::cr(0.0) {
                coeffs.insert(word, coeff);
            }
        }
        Ok(NcPolynomial { d, coeffs })
    }

    pub fn alphabet(&self) -> u8 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Support in shortlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, word: &Word) -> Complex64 {
        self.coeffs.get(word).copied().unwrap_or_else(|| linalg::cr(0.0))
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&Word::empty(self.d))
    }

    /// Shortlex-maximal support word; None for the zero polynomial.
    pub fn top(&self) -> Option<&Word> {
        self.coeffs.keys().next_back()
    }

    pub fn scale(&self, factor: Complex64) -> NcPolynomial {
        if factor == linalg::cr(0.0) {
            return NcPolynomial::zero(self.d);
        }
        NcPolynomial {
            d: self.d,
            coeffs: self.coeffs.iter().map(|(w, c)| (w.clone(), c * factor)).collect(),
        }
    }

    /// self + factor · other.
    pub fn add_scaled(&self, other: &NcPolynomial, factor: Complex64) -> NcPolynomial {
        let mut coeffs = self.coeffs.clone();
        for (word, c) in &other.coeffs {
            let entry = coeffs.entry(word.clone()).or_insert_with(|| linalg::cr(0.0));
            *entry += c * factor;
            if *entry == linalg::cr(0.0) {
                coeffs.remove(word);
            }
        }
        NcPolynomial { d: self.d, coeffs }
    }

    /// Left multiplication by the generator Z_k.
    pub fn prepend_letter(&self, k: u8) -> Result<NcPolynomial> {
        let mut coeffs = BTreeMap::new();
        for (word, c) in &self.coeffs {
            coeffs.insert(word.prepend(k)?, *c);
        }
        Ok(NcPolynomial { d: self.d, coeffs })
    }

    /// Σ_σ coeff(σ)·Z^σ at the tuple, with Z^∅ the identity.
    pub fn evaluate(&self, z: &MatrixTuple) -> Result<CMatrix> {
        self.evaluate_with(&mut TupleEvaluator::new(z))
    }

    /// Evaluation through a shared evaluator so word powers are memoised
    /// across a family.
    pub fn evaluate_with(&self, eval: &mut TupleEvaluator<'_>) -> Result<CMatrix> {
        let k = eval.tuple().level();
        let mut acc = CMatrix::zeros(k, k);
        for (word, coeff) in &self.coeffs {
            acc += eval.word_power(word)? * *coeff;
        }
        Ok(acc)
    }
}

/// √⟨P, P⟩ under the measure.
pub fn norm_mu(m: &MomentFamily, p: &NcPolynomial) -> Result<f64> {
    Ok(m.inner_product(p, p)?.re.max(0.0).sqrt())
}

/// The Gram-Schmidt output over the monomial basis up to σ0: orthonormal
/// polynomials φ_σ as rows of a lower-triangular coefficient matrix with
/// positive real diagonal.
pub struct OrthonormalFamily {
    d: u8,
    sigma0: Word,
    words: Vec<Word>,
    coeff_matrix: CMatrix,
    leading: Vec<f64>,
    polys: Vec<NcPolynomial>,
}

/// Orthonormalises {Z^σ : σ ⪯ σ0} against the kernel of `m`, computed as
/// the inverse Cholesky factor of the kernel block. The gauge is fixed by
/// positive real leading coefficients.
pub fn gram_schmidt(m: &MomentFamily, sigma0: &Word) -> Result<OrthonormalFamily> {
    let block = m.kernel_block(sigma0)?;
    let words: Vec<Word> = shortlex_range(sigma0).collect();
    let n = words.len();
    let trace: f64 = (0..n).map(|i| block.matrix[(i, i)].re).sum();
    let floor = DEFAULT_PIVOT_TOL * trace / n as f64;
    let (_, coeff_matrix) = cholesky_inverse(&block.matrix, floor).map_err(|(row, pivot)| {
        Error::NotNontrivial { word: sigma0.clone(), row, pivot }
    })?;
    family_from_rows(m.alphabet(), sigma0.clone(), words, coeff_matrix)
}

/// Packs a lower-triangular coefficient matrix into a family; shared by
/// Gram-Schmidt and by the recurrence synthesis.
pub(crate) fn family_from_rows(
    d: u8,
    sigma0: Word,
    words: Vec<Word>,
    coeff_matrix: CMatrix,
) -> Result<OrthonormalFamily> {
    let n = words.len();
    let mut leading = Vec::with_capacity(n);
    let mut polys = Vec::with_capacity(n);
    for i in 0..n {
        let diag = coeff_matrix[(i, i)];
        if diag.re <= 0.0 || diag.im != 0.0 {
            return Err(Error::Degenerate(format!(
                "leading coefficient at {} is {diag}, expected positive real",
                words[i]
            )));
        }
        leading.push(diag.re);
        let terms = (0..=i).map(|j| (words[j].clone(), coeff_matrix[(i, j)]));
        polys.push(NcPolynomial::from_terms(d, terms)?);
    }
    Ok(OrthonormalFamily { d, sigma0, words, coeff_matrix, leading, polys })
}

impl OrthonormalFamily {
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

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    /// Shortlex position of a word within the family.
    pub fn index_of(&self, word: &Word) -> Result<usize> {
        if word.alphabet() != self.d || *word > self.sigma0 {
            return Err(Error::OutOfRange { word: word.clone(), upto: self.sigma0.clone() });
        }
        Ok(word.shortlex_index()?.0 as usize)
    }

    pub fn phi(&self, i: usize) -> &NcPolynomial {
        &self.polys[i]
    }

    pub fn phi_of(&self, word: &Word) -> Result<&NcPolynomial> {
        Ok(&self.polys[self.index_of(word)?])
    }

    pub fn polys(&self) -> &[NcPolynomial] {
        &self.polys
    }

    /// Leading coefficient a_{σ,σ} of φ_σ.
    pub fn leading(&self, i: usize) -> f64 {
        self.leading[i]
    }

    pub fn leadings(&self) -> &[f64] {
        &self.leading
    }

    /// φ_σ(0), the constant coefficient.
    pub fn phi_at_zero(&self, i: usize) -> Complex64 {
        self.coeff_matrix[(i, 0)]
    }

    /// Lower-triangular coefficient matrix; row i holds φ over the word
    /// basis.
    pub fn coeff_matrix(&self) -> &CMatrix {
        &self.coeff_matrix
    }

    /// The monic orthogonal polynomial Φ_σ = φ_σ / a_{σ,σ}.
    pub fn monic(&self, word: &Word) -> Result<NcPolynomial> {
        let i = self.index_of(word)?;
        Ok(self.polys[i].scale(linalg::cr(1.0 / self.leading[i])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cr};
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeMap;

    fn w(d: u8, letters: &[u8]) -> Word {
        Word::new(d, letters.to_vec()).unwrap()
    }

    #[test]
    fn free_measure_reproduces_monomials() {
        let m = MomentFamily::free(2, Word::sigma(2, 2));
        let fam = gram_schmidt(&m, &Word::sigma(2, 2)).unwrap();
        for (i, word) in fam.words().iter().enumerate() {
            assert_eq!(*fam.phi(i), NcPolynomial::monomial(word.clone(), cr(1.0)));
            assert_abs_diff_eq!(fam.leading(i), 1.0);
            assert_eq!(fam.monic(word).unwrap(), *fam.phi(i));
        }
    }

    #[test]
    fn orthonormality_against_the_kernel() {
        // d=1 atom/Lebesgue mixture c_n = t·a^n.
        let (t, a) = (0.5f64, 0.8f64);
        let mut entries = BTreeMap::new();
        for n in 1..=3 {
            entries.insert(Word::sigma(n, 1), cr(t * a.powi(n as i32)));
        }
        let m = MomentFamily::new(1, Word::sigma(3, 1), entries).unwrap();
        let fam = gram_schmidt(&m, &Word::sigma(3, 1)).unwrap();

        assert!(fam.leading(1) > 0.0);
        let one = NcPolynomial::one(1);
        let ip = m.inner_product(fam.phi(1), &one).unwrap();
        assert_abs_diff_eq!(ip.norm(), 0.0, epsilon = 1e-12);

        for i in 0..fam.len() {
            for j in 0..fam.len() {
                let ip = m.inner_product(fam.phi(i), fam.phi(j)).unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!((ip - cr(expected)).norm(), 0.0, epsilon = 1e-10);
            }
        }

        // ‖Φ_σ‖ = 1/a_{σ,σ}.
        let monic = fam.monic(&Word::sigma(2, 1)).unwrap();
        let idx = fam.index_of(&Word::sigma(2, 1)).unwrap();
        assert_abs_diff_eq!(
            norm_mu(&m, &monic).unwrap(),
            1.0 / fam.leading(idx),
            epsilon = 1e-12
        );
    }

    #[test]
    fn evaluate_examples() {
        // P = 1 gives the identity at any tuple.
        let z1 = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
        let z2 = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(0.0), cr(1.0), cr(0.0)]);
        let z = MatrixTuple::new(vec![z1, z2]).unwrap();
        let one = NcPolynomial::one(2);
        assert_eq!(one.evaluate(&z).unwrap(), CMatrix::identity(2, 2));

        // Z1·Z2 at the shift pair lands on the rank-one [[1,0],[0,0]].
        let p = NcPolynomial::monomial(w(2, &[1, 2]), cr(1.0));
        let expect = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(0.0)]);
        assert_eq!(p.evaluate(&z).unwrap(), expect);

        // At the scalar origin only the constant term survives.
        let q = NcPolynomial::from_terms(
            2,
            vec![(Word::empty(2), c(0.25, -1.0)), (w(2, &[2, 1]), cr(3.0))],
        )
        .unwrap();
        let at0 = q.evaluate(&MatrixTuple::scalar_zero(2)).unwrap();
        assert_eq!(at0[(0, 0)], c(0.25, -1.0));
    }

    #[test]
    fn evaluation_is_multiplicative_on_monomials() {
        // Integer-entry tuples make both sides exact.
        let z1 = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(1.0), cr(0.0), cr(1.0)]);
        let z2 = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(2.0), cr(1.0), cr(0.0)]);
        let z = MatrixTuple::new(vec![z1, z2]).unwrap();
        let sigma = w(2, &[1, 2]);
        let tau = w(2, &[2, 2, 1]);
        let concat = sigma.concat(&tau).unwrap();
        let lhs = NcPolynomial::monomial(concat, cr(1.0)).evaluate(&z).unwrap();
        let rhs = NcPolynomial::monomial(sigma, cr(1.0)).evaluate(&z).unwrap()
            * NcPolynomial::monomial(tau, cr(1.0)).evaluate(&z).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn monic_of_empty_word_is_one() {
        let m = MomentFamily::free(3, Word::sigma(1, 3));
        let fam = gram_schmidt(&m, &Word::sigma(1, 3)).unwrap();
        assert_eq!(fam.monic(&Word::empty(3)).unwrap(), NcPolynomial::one(3));
        assert!(fam.monic(&Word::sigma(2, 3)).is_err());
    }
}
