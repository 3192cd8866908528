//! Double-double arithmetic for the kernel-side linear algebra. The moment
//! kernels this crate factorises are positive definite but can sit within a
//! few hundred ulps of singularity at desk scale; carrying the Cholesky
//! chain in roughly 32 significant digits keeps the extracted quantities
//! accurate to f64 round-off. Algorithms follow the classic QD library
//! (Hida, Li, Bailey).

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Unevaluated sum hi + lo with |lo| ≤ ½ ulp(hi).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * rhs);
        Dd { hi, lo }
    }

    /// Square root of a non-negative value (Karp's method).
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative double-double");
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let err = (self - Dd::from_f64(ax) * Dd::from_f64(ax)).hi * (x * 0.5);
        let (hi, lo) = quick_two_sum(ax, err);
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;

    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;

    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;

    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;

    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;

    #[inline]
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs.mul_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }
}

/// Complex number with double-double components.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: Cdd = Cdd { re: Dd::ONE, im: Dd::ZERO };

    #[inline]
    pub fn from_c64(z: Complex64) -> Cdd {
        Cdd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    #[inline]
    pub fn from_dd(re: Dd) -> Cdd {
        Cdd { re, im: Dd::ZERO }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn conj(self) -> Cdd {
        Cdd { re: self.re, im: -self.im }
    }

    /// Division by a real double-double.
    #[inline]
    pub fn div_dd(self, rhs: Dd) -> Cdd {
        Cdd { re: self.re / rhs, im: self.im / rhs }
    }

    #[inline]
    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }
}

impl Add for Cdd {
    type Output = Cdd;

    #[inline]
    fn add(self, rhs: Cdd) -> Cdd {
        Cdd { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for Cdd {
    type Output = Cdd;

    #[inline]
    fn sub(self, rhs: Cdd) -> Cdd {
        Cdd { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for Cdd {
    type Output = Cdd;

    #[inline]
    fn neg(self) -> Cdd {
        Cdd { re: -self.re, im: -self.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;

    #[inline]
    fn mul(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

/// Dense row-major matrix of complex double-doubles.
#[derive(Clone)]
pub struct CddMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<Cdd>,
}

impl CddMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CddMatrix { n_rows, n_cols, data: vec![Cdd::ZERO; n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Cdd::ONE);
        }
        m
    }

    pub fn from_c64(m: &nalgebra::DMatrix<Complex64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, Cdd::from_c64(m[(i, j)]));
            }
        }
        out
    }

    pub fn to_c64(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.n_rows, self.n_cols, |i, j| self.get(i, j).to_c64())
    }

    pub fn nrows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cdd {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Cdd) {
        self.data[i * self.n_cols + j] = v;
    }
}

/// Cholesky of a Hermitian positive definite matrix in double-double. The
/// returned pivot list carries the offending value when a pivot falls to
/// `floor` or below, mirroring the f64 variant.
pub fn cholesky_dd(a: &CddMatrix, floor: f64) -> (CddMatrix, Vec<f64>, Option<usize>) {
    let n = a.nrows();
    let mut l = CddMatrix::zeros(n, n);
    let mut pivots = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..i {
            let mut s = a.get(i, j);
            for k in 0..j {
                s = s - l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, s.div_dd(l.get(j, j).re));
        }
        let mut s = a.get(i, i).re;
        for k in 0..i {
            s = s - l.get(i, k).norm_sqr();
        }
        pivots.push(s.to_f64());
        if s.to_f64() <= floor {
            return (l, pivots, Some(i));
        }
        l.set(i, i, Cdd::from_dd(s.sqrt()));
    }
    (l, pivots, None)
}

/// Inverse of a lower-triangular matrix with real positive diagonal, by
/// forward substitution on each unit column.
pub fn lower_triangular_inverse_dd(l: &CddMatrix) -> CddMatrix {
    let n = l.nrows();
    let mut inv = CddMatrix::zeros(n, n);
    for col in 0..n {
        for i in col..n {
            let mut s = if i == col { Cdd::ONE } else { Cdd::ZERO };
            for k in col..i {
                s = s - l.get(i, k) * inv.get(k, col);
            }
            inv.set(i, col, s.div_dd(l.get(i, i).re));
        }
    }
    inv
}

/// m · m* for a square double-double matrix.
pub fn times_adjoint_dd(m: &CddMatrix) -> CddMatrix {
    let n = m.nrows();
    let mut out = CddMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = Cdd::ZERO;
            for k in 0..n {
                s = s + m.get(i, k) * m.get(j, k).conj();
            }
            out.set(i, j, s);
            out.set(j, i, s.conj());
        }
    }
    out
}
