use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::surd::{squarefree_kernel, Surd};

/// An eigenvalue: an integer, a quadratic integer `(a + b√Δ)/2`, or a
/// floating-point value with an error bound.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactScalar {
    Integer(BigInt),
    Quadratic { a: BigInt, b: BigInt, delta: u64 },
    Float { value: f64, err: f64 },
}

impl ExactScalar {
    pub fn int(x: i64) -> Self {
        ExactScalar::Integer(BigInt::from(x))
    }

    /// `(a + b√Δ)/2`, validated to be an algebraic integer of a real
    /// quadratic field.
    pub fn quadratic(a: BigInt, b: BigInt, delta: u64) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::InvalidParams("quadratic scalar needs b != 0".into()));
        }
        let (kernel, _) = squarefree_kernel(delta as i128)?;
        if delta <= 1 || kernel != delta {
            return Err(Error::InvalidParams(format!("Δ = {delta} is not square-free and > 1")));
        }
        let integral = if delta % 4 == 1 {
            (&a - &b).is_even()
        } else {
            a.is_even() && b.is_even()
        };
        if !integral {
            return Err(Error::InvalidParams(format!(
                "({a} + {b}√{delta})/2 is not an algebraic integer"
            )));
        }
        Ok(ExactScalar::Quadratic { a, b, delta })
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExactScalar::Float { .. })
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactScalar::Integer(z) => z.to_f64().unwrap_or(f64::NAN),
            ExactScalar::Quadratic { a, b, delta } => {
                (a.to_f64().unwrap_or(f64::NAN) + b.to_f64().unwrap_or(f64::NAN) * (*delta as f64).sqrt())
                    / 2.0
            }
            ExactScalar::Float { value, .. } => *value,
        }
    }

    /// Exact value, `None` on the float path.
    pub fn to_surd(&self) -> Option<Surd> {
        match self {
            ExactScalar::Integer(z) => Some(Surd::from_bigint(z.clone())),
            ExactScalar::Quadratic { a, b, delta } => {
                let half = |x: &BigInt| BigRational::new(x.clone(), BigInt::from(2));
                Some(&Surd::from_rational(half(a)) + &Surd::term(*delta, half(b)))
            }
            ExactScalar::Float { .. } => None,
        }
    }

    /// Writes the value as `(a + b√Δ)/2`, returning `(a, b, Δ)`. Integers use
    /// `Δ = 1` and `b = 0`.
    pub fn half_form(&self) -> Option<(BigInt, BigInt, u64)> {
        match self {
            ExactScalar::Integer(z) => Some((z * 2, BigInt::zero(), 1)),
            ExactScalar::Quadratic { a, b, delta } => Some((a.clone(), b.clone(), *delta)),
            ExactScalar::Float { .. } => None,
        }
    }

    /// Square-free `Δ` of the field the value lives in (1 for integers).
    pub fn delta(&self) -> Option<u64> {
        self.half_form().map(|(_, _, d)| d)
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            ExactScalar::Integer(z) => Some(z),
            _ => None,
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        if let (Some(x), Some(y)) = (self.to_surd(), other.to_surd()) {
            return match (&x - &y).signum() {
                0 => Ordering::Equal,
                s if s > 0 => Ordering::Greater,
                _ => Ordering::Less,
            };
        }
        self.to_f64().total_cmp(&other.to_f64())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Integer(z) => write!(f, "{z}"),
            ExactScalar::Quadratic { a, b, delta } => {
                let sign = if b.is_negative() { '-' } else { '+' };
                let mag = b.abs();
                if mag == BigInt::from(1) {
                    write!(f, "({a}{sign}√{delta})/2")
                } else {
                    write!(f, "({a}{sign}{mag}√{delta})/2")
                }
            }
            ExactScalar::Float { value, .. } => write!(f, "~{value}"),
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
