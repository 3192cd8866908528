//! JSON file schemas shared by the library and the CLI. Words serialise as
//! arrays of 1-based letters, complex values as separate re/im fields, and
//! matrix entries as [re, im] pairs.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::freemonoid::Word;
use crate::linalg::CMatrix;
use crate::moments::MomentFamily;
use crate::orthopoly::NcPolynomial;
use crate::tuple::MatrixTuple;
use crate::verblunsky::VerblunskyFamily;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexEntry {
    pub word: Vec<u8>,
    pub re: f64,
    pub im: f64,
}

impl ComplexEntry {
    fn new(word: &Word, value: Complex64) -> Self {
        ComplexEntry { word: word.letters().to_vec(), re: value.re, im: value.im }
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Moment file: `{"d": 2, "horizon": [2,2], "moments": [{"word": [1],
/// "re": 0.1, "im": 0.0}, …]}`. Words missing from a file within the
/// horizon are an error on load unless `fill_zero` is set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentFile {
    pub d: u8,
    pub horizon: Vec<u8>,
    pub moments: Vec<ComplexEntry>,
    #[serde(default)]
    pub fill_zero: bool,
}

impl MomentFile {
    pub fn from_family(m: &MomentFamily) -> Self {
        MomentFile {
            d: m.alphabet(),
            horizon: m.horizon().letters().to_vec(),
            moments: m
                .entries()
                .filter(|(w, _)| !w.is_empty())
                .map(|(w, v)| ComplexEntry::new(w, *v))
                .collect(),
            fill_zero: false,
        }
    }

    pub fn to_family(&self) -> Result<MomentFamily> {
        let horizon = Word::new(self.d, self.horizon.clone())?;
        let mut entries = BTreeMap::new();
        for entry in &self.moments {
            let word = Word::new(self.d, entry.word.clone())?;
            if entries.insert(word.clone(), entry.value()).is_some() {
                return Err(Error::InvalidInput(format!("duplicate moment entry for {word}")));
            }
        }
        let mut family = MomentFamily::new(self.d, horizon, entries)?;
        if self.fill_zero {
            family.fill_zero();
        }
        Ok(family)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Verblunsky file: `{"d": 2, "gamma": [{"word": [1], "re": 0.5,
/// "im": 0.0}, …]}`; γ_∅ is implicit and absent words count as zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaFile {
    pub d: u8,
    pub gamma: Vec<ComplexEntry>,
}

impl GammaFile {
    pub fn from_family(g: &VerblunskyFamily) -> Self {
        GammaFile {
            d: g.alphabet(),
            gamma: g.entries().map(|(w, v)| ComplexEntry::new(w, *v)).collect(),
        }
    }

    /// Builds the family over an explicit horizon; every listed word must
    /// fit under it.
    pub fn to_family(&self, horizon: Word) -> Result<VerblunskyFamily> {
        let mut entries = BTreeMap::new();
        for entry in &self.gamma {
            let word = Word::new(self.d, entry.word.clone())?;
            if entries.insert(word.clone(), entry.value()).is_some() {
                return Err(Error::InvalidInput(format!("duplicate gamma entry for {word}")));
            }
        }
        VerblunskyFamily::new(self.d, horizon, entries)
    }

    /// Shortlex-maximal word mentioned in the file, as a default horizon.
    pub fn max_word(&self) -> Result<Word> {
        let mut max = Word::empty(self.d);
        for entry in &self.gamma {
            let word = Word::new(self.d, entry.word.clone())?;
            if word > max {
                max = word;
            }
        }
        Ok(max)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Polynomial file: `{"d": 2, "coeffs": [{"word": [1,2], "re": …,
/// "im": …}, …]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub d: u8,
    pub coeffs: Vec<ComplexEntry>,
}

impl PolynomialFile {
    pub fn from_polynomial(p: &NcPolynomial) -> Self {
        PolynomialFile {
            d: p.alphabet(),
            coeffs: p.terms().map(|(w, v)| ComplexEntry::new(w, *v)).collect(),
        }
    }

    pub fn to_polynomial(&self) -> Result<NcPolynomial> {
        NcPolynomial::from_terms(
            self.d,
            self.coeffs
                .iter()
                .map(|e| Word::new(self.d, e.word.clone()).map(|w| (w, e.value())))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Matrix tuple file: `{"k": 2, "d": 2, "components": [[[ [re,im], … ] ×k
/// rows] ×d]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TupleFile {
    pub k: usize,
    pub d: u8,
    pub components: Vec<Vec<Vec<[f64; 2]>>>,
}

impl TupleFile {
    pub fn from_tuple(t: &MatrixTuple) -> Self {
        TupleFile {
            k: t.level(),
            d: t.alphabet(),
            components: t
                .components()
                .iter()
                .map(|m| {
                    (0..m.nrows())
                        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_tuple(&self) -> Result<MatrixTuple> {
        if self.components.len() != self.d as usize {
            return Err(Error::InvalidInput(format!(
                "tuple file declares d={} but lists {} components",
                self.d,
                self.components.len()
            )));
        }
        let mut matrices = Vec::with_capacity(self.components.len());
        for rows in &self.components {
            if rows.len() != self.k || rows.iter().any(|r| r.len() != self.k) {
                return Err(Error::InvalidInput(format!(
                    "tuple file component is not {k}×{k}",
                    k = self.k
                )));
            }
            matrices.push(CMatrix::from_fn(self.k, self.k, |i, j| {
                Complex64::new(rows[i][j][0], rows[i][j][1])
            }));
        }
        MatrixTuple::new(matrices)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
