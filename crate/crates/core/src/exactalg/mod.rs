//! Exact scalars, Laurent polynomials and determinants.

pub mod det;
pub mod field;
pub mod poly;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use det::{det_bareiss_int, det_expansion, det_expansion_poly, det_gauss_field, MAX_EXPANSION_DIM};
pub use field::{is_prime, Fp, PrimeField, DEFAULT_PRIME};
pub use poly::{arc_var, edge_var, LaurentMonomial, MultiPoly, VarId, VarRegistry};

/// Commutative ring operations shared by the scalar types.
///
/// Constants are produced relative to an existing value so that field
/// elements can carry their modulus.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn is_unity(&self) -> bool;

    fn int_like(&self, k: i64) -> Self;
}

impl Scalar for MultiPoly {
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn zero_like(&self) -> Self {
        MultiPoly::zero()
    }
    fn one_like(&self) -> Self {
        MultiPoly::one()
    }
    fn vanishes(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn is_unity(&self) -> bool {
        MultiPoly::is_one(self)
    }
    fn int_like(&self, k: i64) -> Self {
        MultiPoly::constant(k)
    }
}

impl Scalar for Fp {
    fn plus(&self, other: &Self) -> Self {
        self.add(*other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(*other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(*other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn vanishes(&self) -> bool {
        Fp::is_zero(*self)
    }
    fn is_unity(&self) -> bool {
        *self == self.field().one()
    }
    fn int_like(&self, k: i64) -> Self {
        self.field().from_i64(k)
    }
}

impl Scalar for BigInt {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unity(&self) -> bool {
        One::is_one(self)
    }
    fn int_like(&self, k: i64) -> Self {
        BigInt::from(k)
    }
}

/// Evaluates every entry of a polynomial matrix.
pub fn eval_matrix<F>(m: &[Vec<MultiPoly>], field: PrimeField, lookup: F) -> crate::Result<Vec<Vec<Fp>>>
where
    F: Fn(VarId) -> Option<Fp> + Copy,
{
    m.iter()
        .map(|row| row.iter().map(|p| p.eval(field, lookup)).collect())
        .collect()
}
