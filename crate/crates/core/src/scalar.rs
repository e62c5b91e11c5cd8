//! Exact coefficient fields: rationals with a machine-word fast path, and
//! residues modulo a prime.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("mixed coefficient fields: {0} and {1}")]
    MixedFields(ScalarField, ScalarField),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("denominator of {value} vanishes modulo {modulus}")]
    DenominatorVanishes { value: Rational, modulus: u64 },
}

/// An exact rational number in lowest terms.
///
/// Values whose numerator and denominator fit in an `i64` are kept in the
/// `Small` variant; arithmetic promotes to `Big` on overflow and demotes
/// again when the result fits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rational {
    pub fn from_integer(v: i64) -> Self {
        Rational::Small(Ratio::from_integer(v))
    }

    /// `num / den`, reduced. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Rational::Small(Ratio::new(num, den))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_zero(),
            Rational::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_one(),
            Rational::Big(r) => r.is_one(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_negative(),
            Rational::Big(r) => r.is_negative(),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(r) => {
                BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
            }
            Rational::Big(r) => r.clone(),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(Ratio::new_raw(n, d)),
            _ => Rational::Big(r),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.numer()),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(r) => BigInt::from(*r.denom()),
            Rational::Big(r) => r.denom().clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if let (Rational::Small(a), Rational::Small(b)) = (self, other) {
            if let Some(c) = a.checked_add(b) {
                return Rational::Small(c);
            }
        }
        Self::from_big(self.to_big() + other.to_big())
    }

    pub fn sub(&self, other: &Self) -> Self {
        if let (Rational::Small(a), Rational::Small(b)) = (self, other) {
            if let Some(c) = a.checked_sub(b) {
                return Rational::Small(c);
            }
        }
        Self::from_big(self.to_big() - other.to_big())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if let (Rational::Small(a), Rational::Small(b)) = (self, other) {
            if let Some(c) = a.checked_mul(b) {
                return Rational::Small(c);
            }
        }
        Self::from_big(self.to_big() * other.to_big())
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let (Rational::Small(a), Rational::Small(b)) = (self, other) {
            if let Some(c) = a.checked_div(b) {
                return Ok(Rational::Small(c));
            }
        }
        Ok(Self::from_big(self.to_big() / other.to_big()))
    }

    pub fn neg(&self) -> Self {
        match self {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(-r),
            _ => Self::from_big(-self.to_big()),
        }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        Self::one().div(self)
    }

    /// Image in `Z/p`, failing when `p` divides the denominator.
    pub fn mod_p(&self, p: u64) -> Result<u64, ScalarError> {
        let pb = BigInt::from(p);
        let n = self.numer().mod_floor(&pb).to_u64().unwrap();
        let d = self.denom().mod_floor(&pb).to_u64().unwrap();
        if d == 0 {
            return Err(ScalarError::DenominatorVanishes {
                value: self.clone(),
                modulus: p,
            });
        }
        Ok(mul_mod(n, inv_mod(d, p), p))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(r) => write!(f, "{}", r),
            Rational::Big(r) => write!(f, "{}", r),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ScalarError;

    /// Accepts `"n"` or `"n/d"` with arbitrary-size decimal integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarError::Parse(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Self::from_big(BigRational::new(n, d)))
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Which field a [`Scalar`] lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarField {
    Rational,
    Prime(u64),
}

impl ScalarField {
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(ScalarField::Prime(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            ScalarField::Rational => Scalar::Rational(Rational::from_integer(v)),
            ScalarField::Prime(p) => Scalar::Mod {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Maps a rational into this field.
    pub fn from_rational(self, r: &Rational) -> Result<Scalar, ScalarError> {
        match self {
            ScalarField::Rational => Ok(Scalar::Rational(r.clone())),
            ScalarField::Prime(p) => Ok(Scalar::Mod {
                value: r.mod_p(p)?,
                modulus: p,
            }),
        }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Rational => write!(f, "QQ"),
            ScalarField::Prime(p) => write!(f, "GF({})", p),
        }
    }
}

/// A field element: exact rational, or a residue carrying its modulus.
///
/// Binary operations between different fields fail with
/// [`ScalarError::MixedFields`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Mod { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> ScalarField {
        match self {
            Scalar::Rational(_) => ScalarField::Rational,
            Scalar::Mod { modulus, .. } => ScalarField::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    fn mixed(&self, other: &Self) -> ScalarError {
        ScalarError::MixedFields(self.field(), other.field())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a.add(b))),
            (
                Scalar::Mod {
                    value: a,
                    modulus: p,
                },
                Scalar::Mod {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Ok(Scalar::Mod {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                modulus: *p,
            }),
            _ => Err(self.mixed(other)),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a.mul(b))),
            (
                Scalar::Mod {
                    value: a,
                    modulus: p,
                },
                Scalar::Mod {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Ok(Scalar::Mod {
                value: mul_mod(*a, *b, *p),
                modulus: *p,
            }),
            _ => Err(self.mixed(other)),
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.try_mul(&other.inv()?)
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.neg()),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        match self {
            Scalar::Rational(r) => Ok(Scalar::Rational(r.inv()?)),
            Scalar::Mod { value: 0, .. } => Err(ScalarError::DivisionByZero),
            Scalar::Mod { value, modulus } => Ok(Scalar::Mod {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            }),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", r),
            Scalar::Mod { value, .. } => write!(f, "{}", value),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", r),
            Scalar::Mod { value, modulus } => write!(f, "{} (mod {})", value, modulus),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Rational(Rational::from_integer(v))
    }
}
