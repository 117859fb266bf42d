//! Finite fields F_q = F_p[x]/(m(x)) and the quadratic tower F_{q^2} = F_q(w).
//!
//! Every field is built deterministically: the modulus is the monic
//! irreducible of degree m with the smallest coefficient encoding, so two
//! builds of the same `(p, m)` agree bit for bit. Elements are carried as
//! their canonical integer encodings:
//!
//! * `FqElem`: `sum c_i p^i` over the polynomial-basis coefficients;
//! * `Fq2Elem`: `enc(u0) + q * enc(u1)` for `u0 + u1 w`.
//!
//! Elements do not hold a reference to their context; all arithmetic goes
//! through the context, which validates encodings at the boundary
//! ([`FieldCtx::elem`], [`QuadExtCtx::decode`]).

mod cache;
mod ext;
mod field;
pub(crate) mod fp_poly;
pub mod prime;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

pub use cache::ModulusCache;
pub use ext::{ExtKind, Fq2Elem, QuadExtCtx};
pub use field::{FieldCtx, FqElem};

/// Default ceiling on the order of any constructed field (base or extension).
pub const DEFAULT_SIZE_BOUND: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field order {order} exceeds the size bound {bound}")]
    SizeBoundExceeded { order: u128, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("encoding {enc} does not belong to a field of order {order}")]
    CtxMismatch { enc: u64, order: u64 },
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("operation is only defined in odd characteristic")]
    EvenCharacteristic,
    #[error("operation is only defined in characteristic 2")]
    OddCharacteristic,
    #[error("modulus {enc} is not a monic irreducible of degree {m} over F_{p}")]
    BadModulus { p: u32, m: u32, enc: u64 },
    #[error("modulus cache: {0}")]
    Cache(String),
}

/// Arithmetic shared by the flat fields F_{p^k} and the tower F_{q^2}.
///
/// Exponentiation follows `0^0 = 1`; for a nonzero base the exponent is
/// reduced modulo the multiplicative group order.
pub trait FieldArith {
    type Elem: Copy + Eq + Ord + Hash + Debug;

    fn characteristic(&self) -> u32;
    fn order(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Image of an integer under Z -> F_p -> this field.
    fn embed_int(&self, k: i64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Result<Self::Elem, GfError>;
    fn pow_u64(&self, a: Self::Elem, k: u64) -> Self::Elem;
    fn encode(&self, a: Self::Elem) -> u64;
    fn decode(&self, enc: u64) -> Result<Self::Elem, GfError>;

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    fn div(&self, a: Self::Elem, b: Self::Elem) -> Result<Self::Elem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn pow_big(&self, a: Self::Elem, k: &BigUint) -> Self::Elem {
        if k.is_zero() {
            return self.one();
        }
        if self.is_zero(a) {
            return self.zero();
        }
        let group = BigUint::from(self.order() - 1);
        let r = (k % group).to_u64().expect("reduced exponent fits in u64");
        self.pow_u64(a, r)
    }

    /// All elements in canonical encoding order.
    fn elements(&self) -> Vec<Self::Elem> {
        (0..self.order())
            .map(|e| self.decode(e).expect("encoding in range"))
            .collect()
    }
}

pub(crate) fn check_bound(order: u128, bound: u64) -> Result<(), GfError> {
    if order > bound as u128 {
        Err(GfError::SizeBoundExceeded { order, bound })
    } else {
        Ok(())
    }
}
