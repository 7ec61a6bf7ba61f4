//! Arithmetic modulo a 64-bit prime.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::error::{Error, Result};

/// 2^61 - 1.
pub const DEFAULT_PRIME: u64 = 2_305_843_009_213_693_951;

/// A prime modulus. Construction runs a deterministic Miller-Rabin test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn zero(self) -> Fp {
        Fp { value: 0, p: self.p }
    }

    pub fn one(self) -> Fp {
        Fp {
            value: 1 % self.p,
            p: self.p,
        }
    }

    pub fn from_u64(self, v: u64) -> Fp {
        Fp {
            value: v % self.p,
            p: self.p,
        }
    }

    pub fn from_i64(self, v: i64) -> Fp {
        let r = (v as i128).rem_euclid(self.p as i128);
        Fp {
            value: r as u64,
            p: self.p,
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Fp {
        let r = v.mod_floor(&BigInt::from(self.p));
        Fp {
            value: r.to_u64().expect("residue fits in u64"),
            p: self.p,
        }
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> Fp {
        self.from_u64(rng.gen_range(0..self.p))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> Fp {
        self.from_u64(rng.gen_range(1..self.p))
    }
}

/// An element of `Z/pZ`. The modulus travels with the value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    p: u64,
}

impl Fp {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn field(self) -> PrimeField {
        PrimeField { p: self.p }
    }

    fn check(self, other: Fp) {
        assert_eq!(self.p, other.p, "mixed moduli {} and {}", self.p, other.p);
    }

    pub fn add(self, other: Fp) -> Fp {
        self.check(other);
        let s = (self.value as u128 + other.value as u128) % self.p as u128;
        Fp { value: s as u64, p: self.p }
    }

    pub fn sub(self, other: Fp) -> Fp {
        self.check(other);
        let s = (self.value as u128 + self.p as u128 - other.value as u128) % self.p as u128;
        Fp { value: s as u64, p: self.p }
    }

    pub fn mul(self, other: Fp) -> Fp {
        self.check(other);
        let s = (self.value as u128 * other.value as u128) % self.p as u128;
        Fp { value: s as u64, p: self.p }
    }

    pub fn neg(self) -> Fp {
        if self.value == 0 {
            self
        } else {
            Fp {
                value: self.p - self.value,
                p: self.p,
            }
        }
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(self) -> Option<Fp> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.p - 2))
        }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
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
