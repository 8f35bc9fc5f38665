//! Exact characteristic polynomials and integer polynomial helpers.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Dense square matrix of big integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BigMatrix {
    pub n: usize,
    pub data: Vec<BigInt>,
}

impl BigMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(m: &DMatrix<i64>) -> Self {
        let n = m.nrows();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = BigInt::from(m[(i, j)]);
            }
        }
        out
    }

    pub fn mul(&self, rhs: &BigMatrix) -> BigMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `self + c·I`
    pub fn add_diag(&mut self, c: &BigInt) {
        for i in 0..self.n {
            self.data[i * self.n + i] += c;
        }
    }

    pub fn scaled_add(&self, k: &BigInt, rhs: &BigMatrix) -> BigMatrix {
        BigMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + k * b).collect() }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| &self.data[i * self.n + i]).sum()
    }
}

/// Monic characteristic polynomial `det(xI - M)` by Faddeev–LeVerrier.
///
/// Coefficients are returned lowest degree first, so `coeffs[n] == 1`.
pub fn char_poly(m: &DMatrix<i64>) -> Vec<BigInt> {
    assert!(m.is_square(), "characteristic polynomial needs a square matrix");
    let n = m.nrows();
    let a = BigMatrix::from_i64(m);
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // M_1 = I, c_{n-k} = -tr(A M_k)/k, M_{k+1} = A M_k + c_{n-k} I
    let mut mk = BigMatrix::identity(n);
    for k in 1..=n {
        let am = a.mul(&mk);
        let tr = am.trace();
        let (c, rem) = (-tr).div_rem(&BigInt::from(k));
        debug_assert!(rem.is_zero(), "Faddeev–LeVerrier division must be exact over ℤ");
        coeffs[n - k] = c.clone();
        mk = am;
        mk.add_diag(&c);
    }
    coeffs
}

/// Horner evaluation at an integer.
pub fn eval(poly: &[BigInt], x: &BigInt) -> BigInt {
    poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Exact division by a monic divisor. Returns the quotient when the remainder
/// vanishes.
pub(crate) fn div_exact(poly: &[BigInt], divisor: &[BigInt]) -> Option<Vec<BigInt>> {
    let dd = divisor.len() - 1;
    debug_assert!(divisor[dd].is_one());
    if poly.len() <= dd {
        return None;
    }
    let mut rem = poly.to_vec();
    let mut quot = vec![BigInt::zero(); poly.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in divisor.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    rem[..dd].iter().all(Zero::is_zero).then_some(quot)
}
