//! Exact scalars over the rationals and over prime fields.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("malformed scalar {0:?}: expected -?digits(/digits)?")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("denominator of {text:?} vanishes modulo {p}")]
    DenominatorVanishes { text: String, p: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(Field, Field),
}

/// A prime modulus, checked by trial division at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The base field of an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    PrimeField(Prime),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Prime::new(p).map(Field::PrimeField)
    }

    /// The modulus for prime fields.
    pub fn modulus(self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::PrimeField(p) => Some(p.get()),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Field::PrimeField(_))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::PrimeField(p) => Scalar::Residue {
                value: (n as i128).rem_euclid(p.get() as i128) as u64,
                modulus: p,
            },
        }
    }

    /// The element with the given residue; `PrimeField` only.
    pub fn residue(self, value: u64) -> Option<Scalar> {
        match self {
            Field::Rationals => None,
            Field::PrimeField(p) => Some(Scalar::Residue {
                value: value % p.get(),
                modulus: p,
            }),
        }
    }

    /// All field elements in ascending residue order; `None` over the rationals.
    pub fn elements(self) -> Option<impl Iterator<Item = Scalar>> {
        let p = match self {
            Field::Rationals => return None,
            Field::PrimeField(p) => p,
        };
        Some((0..p.get()).map(move |value| Scalar::Residue { value, modulus: p }))
    }

    pub fn parse_scalar(self, text: &str) -> Result<Scalar, FieldError> {
        Scalar::parse(text, self)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::PrimeField(p) => write!(f, "F_{}", p.get()),
        }
    }
}

/// An exact field element in canonical form.
///
/// Rationals are kept in lowest terms with a positive denominator and residues
/// are reduced, so structural equality is field equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: Prime },
}

impl Scalar {
    /// Parses `-?digits(/digits)?`, reducing modulo `p` for prime fields.
    pub fn parse(text: &str, field: Field) -> Result<Scalar, FieldError> {
        let malformed = || FieldError::Malformed(text.to_string());
        let (num_text, den_text) = match text.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (text, None),
        };
        let digits = num_text.strip_prefix('-').unwrap_or(num_text);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        if let Some(d) = den_text {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
        }
        let num: BigInt = num_text.parse().map_err(|_| malformed())?;
        let den: BigInt = match den_text {
            Some(d) => d.parse().map_err(|_| malformed())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator(text.to_string()));
        }
        match field {
            Field::Rationals => Ok(Scalar::Rational(BigRational::new(num, den))),
            Field::PrimeField(p) => {
                let n = reduce_bigint(&num, p);
                let d = reduce_bigint(&den, p);
                if d == 0 {
                    return Err(FieldError::DenominatorVanishes {
                        text: text.to_string(),
                        p: p.get(),
                    });
                }
                let n = Scalar::Residue { value: n, modulus: p };
                let d = Scalar::Residue { value: d, modulus: p };
                n.checked_div(&d)
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Residue { modulus, .. } => Field::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Re-establishes canonical form; the identity on every value built by this module.
    pub fn canonicalize(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(BigRational::new(r.numer().clone(), r.denom().clone())),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: value % modulus.get(),
                modulus: *modulus,
            },
        }
    }

    /// Reduces a rational modulo `p`; fails when `p` divides the denominator.
    pub fn reduce_mod(&self, p: Prime) -> Result<Scalar, FieldError> {
        match self {
            Scalar::Rational(r) => {
                let n = Scalar::Residue {
                    value: reduce_bigint(r.numer(), p),
                    modulus: p,
                };
                let d = reduce_bigint(r.denom(), p);
                if d == 0 {
                    return Err(FieldError::DenominatorVanishes {
                        text: self.to_string(),
                        p: p.get(),
                    });
                }
                n.checked_div(&Scalar::Residue { value: d, modulus: p })
            }
            Scalar::Residue { modulus, .. } if *modulus == p => Ok(self.clone()),
            Scalar::Residue { .. } => Err(FieldError::Mismatch(self.field(), Field::PrimeField(p))),
        }
    }

    /// Integer value for rationals with denominator one.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(r) if r.is_integer() => Some(r.numer().clone()),
            _ => None,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<(), FieldError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.field(), other.field()))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                let p = modulus.get() as u128;
                Scalar::Residue {
                    value: ((*a as u128 + *b as u128) % p) as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        self.checked_add(&other.negate())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => Scalar::Residue {
                value: ((*a as u128 * *b as u128) % modulus.get() as u128) as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    pub fn negate(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus.get() - value) % modulus.get(),
                modulus: *modulus,
            },
        }
    }

    pub fn inverse(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: mod_inverse(*value, modulus.get()),
                modulus: *modulus,
            },
        })
    }
}

fn reduce_bigint(n: &BigInt, p: Prime) -> u64 {
    let m = BigInt::from(p.get());
    n.mod_floor(&m).to_u64().expect("residue fits in u64")
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(p as i128) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

// Operator forms panic on a field mismatch; they are used where both operands
// are known to come from the same presentation.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect(concat!("scalar ", stringify!($method)))
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.negate()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.negate()
    }
}
