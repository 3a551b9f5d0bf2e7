//! Exact scalar fields: arbitrary-precision rationals and prime fields.
//!
//! Every computation in the crate is generic over [`Field`]. There is no
//! floating point anywhere; `f32`/`f64` deliberately do not implement it.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{ArcError, Result};

/// Arbitrary-precision rationals, the default field.
pub type Rational = BigRational;

/// An exact field scalar.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// 0 for the rationals, otherwise the prime modulus.
    const CHARACTERISTIC: u64;

    fn from_i64(v: i64) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    /// Exact textual form: `"3/2"` over the rationals, `"5 mod 7"` over F_7.
    fn to_exact_string(&self) -> String;

    fn parse_exact(s: &str) -> Result<Self>;

    /// Short human-readable name of the field.
    fn name() -> String {
        if Self::CHARACTERISTIC == 0 {
            "Q".to_string()
        } else {
            format!("F_{}", Self::CHARACTERISTIC)
        }
    }
}

impl Field for BigRational {
    const CHARACTERISTIC: u64 = 0;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn to_exact_string(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse_exact(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || ArcError::Parse(format!("not a rational number: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

/// Residues modulo the prime `P` (`P < 2^63`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
/// The Mersenne prime 2^61 - 1.
pub type FMersenne61 = Fp<2_305_843_009_213_693_951>;

impl<const P: u64> Fp<P> {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.0, P)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 as u128 + rhs.0 as u128;
        Fp((s % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in prime field")
    }
}

impl<const P: u64> Field for Fp<P> {
    const CHARACTERISTIC: u64 = P;

    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            // Fermat; P is prime.
            Some(self.pow(P - 2))
        }
    }

    fn to_exact_string(&self) -> String {
        format!("{} mod {}", self.0, P)
    }

    fn parse_exact(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || ArcError::Parse(format!("not an element of F_{P}: {s:?}"));
        let (v, p) = match s.split_once("mod") {
            Some((v, p)) => (v.trim(), Some(p.trim())),
            None => (s, None),
        };
        if let Some(p) = p {
            if p.parse::<u64>().map_err(|_| bad())? != P {
                return Err(bad());
            }
        }
        let v: i64 = v.parse().map_err(|_| bad())?;
        Ok(Self::from_i64(v))
    }
}

/// Returns true when `p` is prime (trial division; `p` is a CLI-sized input).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
