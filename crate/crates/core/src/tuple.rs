//! Tuples of square matrices — points of the nc space — and memoised
//! evaluation of word monomials at a tuple.

use std::collections::HashMap;

use crate::freemonoid::Word;
use crate::linalg::CMatrix;
use crate::{Error, Result};

/// A d-tuple of k×k complex matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    components: Vec<CMatrix>,
    level: usize,
}

impl MatrixTuple {
    pub fn new(components: Vec<CMatrix>) -> Result<Self> {
        if components.is_empty() || components.len() > 255 {
            return Err(Error::DimensionMismatch(format!(
                "tuple must have between 1 and 255 components, got {}",
                components.len()
            )));
        }
        let level = components[0].nrows();
        for (j, m) in components.iter().enumerate() {
            if m.nrows() != m.ncols() || m.nrows() != level {
                return Err(Error::DimensionMismatch(format!(
                    "component {} is {}×{}, expected {level}×{level}",
                    j + 1,
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(MatrixTuple { components, level })
    }

    /// The d-tuple of k×k zero matrices.
    pub fn zeros(d: u8, level: usize) -> Self {
        MatrixTuple {
            components: (0..d).map(|_| CMatrix::zeros(level, level)).collect(),
            level,
        }
    }

    /// The scalar origin 0^{(d)}: d zero entries at level 1.
    pub fn scalar_zero(d: u8) -> Self {
        Self::zeros(d, 1)
    }

    pub fn alphabet(&self) -> u8 {
        self.components.len() as u8
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn component(&self, k: u8) -> &CMatrix {
        &self.components[(k - 1) as usize]
    }

    pub fn components(&self) -> &[CMatrix] {
        &self.components
    }

    /// The tuple of adjoints (Z_1^*, …, Z_d^*).
    pub fn adjoint(&self) -> MatrixTuple {
        MatrixTuple {
            components: self.components.iter().map(|m| m.adjoint()).collect(),
            level: self.level,
        }
    }

    pub fn scale(&self, factor: f64) -> MatrixTuple {
        let f = crate::linalg::cr(factor);
        MatrixTuple {
            components: self.components.iter().map(|m| m * f).collect(),
            level: self.level,
        }
    }

    /// The row gram Z_1Z_1^* + ⋯ + Z_dZ_d^*.
    pub fn row_gram(&self) -> CMatrix {
        let mut acc = CMatrix::zeros(self.level, self.level);
        for m in &self.components {
            acc += m * m.adjoint();
        }
        acc
    }

    /// Block-diagonal direct sum of two tuples over the same alphabet.
    pub fn direct_sum(&self, other: &MatrixTuple) -> Result<MatrixTuple> {
        if self.alphabet() != other.alphabet() {
            return Err(Error::AlphabetMismatch { left: self.alphabet(), right: other.alphabet() });
        }
        let k = self.level + other.level;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| {
                let mut m = CMatrix::zeros(k, k);
                m.view_mut((0, 0), (self.level, self.level)).copy_from(a);
                m.view_mut((self.level, self.level), (other.level, other.level)).copy_from(b);
                m
            })
            .collect();
        Ok(MatrixTuple { components, level: k })
    }
}

/// Evaluates word monomials at a fixed tuple, memoising powers along the
/// way so families of polynomials share the work.
pub struct TupleEvaluator<'a> {
    tuple: &'a MatrixTuple,
    cache: HashMap<Word, CMatrix>,
}

impl<'a> TupleEvaluator<'a> {
    pub fn new(tuple: &'a MatrixTuple) -> Self {
        TupleEvaluator { tuple, cache: HashMap::new() }
    }

    pub fn tuple(&self) -> &MatrixTuple {
        self.tuple
    }

    /// Z^σ, with Z^∅ the identity.
    pub fn word_power(&mut self, word: &Word) -> Result<CMatrix> {
        if word.alphabet() != self.tuple.alphabet() {
            return Err(Error::AlphabetMismatch {
                left: self.tuple.alphabet(),
                right: word.alphabet(),
            });
        }
        if let Some(hit) = self.cache.get(word) {
            return Ok(hit.clone());
        }
        let value = match word.split_first() {
            None => CMatrix::identity(self.tuple.level, self.tuple.level),
            Some((k, rest)) => self.tuple.component(k) * self.word_power(&rest)?,
        };
        self.cache.insert(word.clone(), value.clone());
        Ok(value)
    }
}
