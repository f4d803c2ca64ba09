//! Arithmetic in the prime field `F_p` for `2 <= p < 2^31`.

use std::fmt;

use crate::error::{Error, Result};

/// A prime modulus `p < 2^31`, verified prime at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeModulus(u32);

/// A residue in `[0, p)`.
///
/// Scalars do not carry their modulus; arithmetic goes through
/// [`PrimeModulus`], which keeps them in canonical reduced form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p >= (1 << 31) || !is_prime_u32(p as u32) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus(p as u32))
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn reduce(self, v: i64) -> Scalar {
        Scalar(v.rem_euclid(self.0 as i64) as u32)
    }

    /// Reduces an arbitrary unsigned integer into `[0, p)`.
    pub fn reduce_u64(self, v: u64) -> Scalar {
        Scalar((v % self.0 as u64) as u32)
    }

    #[inline]
    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        let s = a.0 + b.0;
        Scalar(if s >= self.0 { s - self.0 } else { s })
    }

    #[inline]
    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.0 - b.0 })
    }

    #[inline]
    pub fn neg(self, a: Scalar) -> Scalar {
        Scalar(if a.0 == 0 { 0 } else { self.0 - a.0 })
    }

    #[inline]
    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(((a.0 as u64 * b.0 as u64) % self.0 as u64) as u32)
    }

    pub fn pow(self, a: Scalar, mut e: u64) -> Scalar {
        let mut base = a;
        let mut acc = Scalar::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero in F_{}", self.0);
        let (mut r0, mut r1) = (self.0 as i64, a.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let qt = r0 / r1;
            (r0, r1) = (r1, r0 - qt * r1);
            (t0, t1) = (t1, t0 - qt * t1);
        }
        self.reduce(t0)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
