use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::fp_poly::{self, Poly};
use super::prime::{is_prime, prime_divisors};
use super::{check_bound, FieldArith, GfError, DEFAULT_SIZE_BOUND};

const NO_LOG: u32 = u32::MAX;

/// An element of F_q, stored as its canonical encoding `sum c_i p^i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn enc(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// F_q = F_p[x]/(modulus), with log/antilog/Zech tables over a fixed
/// primitive element.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    /// Lowest degree first, monic, length m + 1.
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `NO_LOG` when `1 + g^k = 0`.
    zech: Vec<u32>,
    bound: u64,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds F_{p^m} under the default size bound.
    pub fn new(p: u32, m: u32) -> Result<Self, GfError> {
        Self::with_bound(p, m, DEFAULT_SIZE_BOUND)
    }

    pub fn with_bound(p: u32, m: u32, bound: u64) -> Result<Self, GfError> {
        Self::validate(p, m, bound)?;
        let modulus = fp_poly::minimal_irreducible(p as u64, m);
        Ok(Self::from_modulus(p, m, modulus, bound))
    }

    /// Builds F_{p^m} from an explicit modulus encoding (non-leading
    /// coefficients, `sum c_i p^i`). The modulus must be irreducible.
    pub fn with_modulus_encoding(p: u32, m: u32, enc: u64, bound: u64) -> Result<Self, GfError> {
        Self::validate(p, m, bound)?;
        let pp = p as u64;
        if enc >= pp.pow(m) {
            return Err(GfError::BadModulus { p, m, enc });
        }
        let mut f = fp_poly::digits(enc, pp, m as usize);
        f.push(1);
        if !fp_poly::is_irreducible(&f, pp) {
            return Err(GfError::BadModulus { p, m, enc });
        }
        Ok(Self::from_modulus(p, m, f, bound))
    }

    fn validate(p: u32, m: u32, bound: u64) -> Result<(), GfError> {
        if !is_prime(p as u64) {
            return Err(GfError::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(GfError::DegreeZero);
        }
        let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        check_bound(order, bound.min(u32::MAX as u64))
    }

    fn from_modulus(p: u32, m: u32, modulus: Poly, bound: u64) -> Self {
        let pp = p as u64;
        let q = pp.pow(m);
        let md = m as usize;
        let n = q - 1;

        let to_poly = |enc: u64| fp_poly::trim(fp_poly::digits(enc, pp, md));
        let to_enc = |poly: &Poly| {
            let mut d = poly.clone();
            d.resize(md, 0);
            fp_poly::undigits(&d, pp)
        };

        // smallest-encoding primitive element
        let divisors = prime_divisors(n);
        let generator = (1..q)
            .find(|&g| {
                let gp = to_poly(g);
                divisors
                    .iter()
                    .all(|&r| to_enc(&fp_poly::pow_mod(&gp, n / r, &modulus, pp)) != 1)
            })
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0u32; n as usize];
        let mut log = vec![NO_LOG; q as usize];
        let gp = to_poly(generator);
        let mut cur: Poly = vec![1];
        for (k, slot) in exp.iter_mut().enumerate() {
            let e = to_enc(&cur);
            *slot = e as u32;
            log[e as usize] = k as u32;
            cur = fp_poly::mul_mod(&cur, &gp, &modulus, pp);
        }

        let zech = exp
            .iter()
            .map(|&e| {
                let d0 = e % p;
                let bumped = e - d0 + (d0 + 1) % p;
                log[bumped as usize]
            })
            .collect();

        FieldCtx {
            p,
            m,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            generator: generator as u32,
            exp,
            log,
            zech,
            bound,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn size_bound(&self) -> u64 {
        self.bound
    }

    /// Modulus coefficients, lowest degree first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Encoding `sum c_i p^i` of the non-leading modulus coefficients.
    pub fn modulus_encoding(&self) -> u64 {
        let d: Vec<u64> = self.modulus[..self.m as usize]
            .iter()
            .map(|&c| c as u64)
            .collect();
        fp_poly::undigits(&d, self.p as u64)
    }

    pub fn generator(&self) -> FqElem {
        FqElem(self.generator)
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    pub fn elem(&self, enc: u64) -> Result<FqElem, GfError> {
        if enc < self.q as u64 {
            Ok(FqElem(enc as u32))
        } else {
            Err(GfError::CtxMismatch {
                enc,
                order: self.q as u64,
            })
        }
    }

    pub fn coeffs(&self, x: FqElem) -> Vec<u32> {
        fp_poly::digits(x.0 as u64, self.p as u64, self.m as usize)
            .into_iter()
            .map(|c| c as u32)
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem, GfError> {
        if coeffs.len() != self.m as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(GfError::CtxMismatch {
                enc: u64::MAX,
                order: self.q as u64,
            });
        }
        let d: Vec<u64> = coeffs.iter().map(|&c| c as u64).collect();
        Ok(FqElem(fp_poly::undigits(&d, self.p as u64) as u32))
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    pub fn embed_int(&self, k: i64) -> FqElem {
        FqElem(k.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.m == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return FqElem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = self.q - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let k = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[k as usize];
        if z == NO_LOG {
            return FqElem::ZERO;
        }
        FqElem(self.exp[((la as u64 + z as u64) % n as u64) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        if a.0 == 0 || self.p == 2 {
            return a;
        }
        if self.m == 1 {
            return FqElem(self.p - a.0);
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        FqElem(self.exp[((l + n / 2) % n) as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        if self.m == 1 {
            return FqElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let n = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FqElem(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn square(&self, a: FqElem) -> FqElem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem, GfError> {
        if a.0 == 0 {
            return Err(GfError::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FqElem(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, k: u64) -> FqElem {
        if k == 0 {
            return FqElem::ONE;
        }
        if a.0 == 0 {
            return FqElem::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FqElem(self.exp[((l * (k % n)) % n) as usize])
    }

    pub fn pow_big(&self, a: FqElem, k: &BigUint) -> FqElem {
        FieldArith::pow_big(self, a, k)
    }

    /// Discrete logarithm to the context's generator; `None` for zero.
    pub fn log(&self, a: FqElem) -> Option<u32> {
        match self.log[a.0 as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    /// Euler's criterion: `x^((q-1)/2) == 1`.
    pub fn is_square(&self, x: FqElem) -> Result<bool, GfError> {
        if !self.is_odd() {
            return Err(GfError::EvenCharacteristic);
        }
        if x.is_zero() {
            return Err(GfError::ZeroInput);
        }
        Ok(self.pow(x, ((self.q - 1) / 2) as u64) == FqElem::ONE)
    }

    /// `true` iff `x` is a nonzero square. Total version of [`Self::is_square`]
    /// for odd q.
    pub fn is_nonzero_square(&self, x: FqElem) -> Result<bool, GfError> {
        if x.is_zero() {
            if !self.is_odd() {
                return Err(GfError::EvenCharacteristic);
            }
            return Ok(false);
        }
        self.is_square(x)
    }

    /// Absolute trace `Tr_{q/2}(x) = x + x^2 + ... + x^(q/2)`, returned as 0 or 1.
    pub fn abs_trace_half(&self, x: FqElem) -> Result<u8, GfError> {
        if self.is_odd() {
            return Err(GfError::OddCharacteristic);
        }
        let mut acc = FqElem::ZERO;
        let mut cur = x;
        for _ in 0..self.m {
            acc = self.add(acc, cur);
            cur = self.square(cur);
        }
        debug_assert!(acc.0 <= 1, "absolute trace lands in F_2");
        Ok(acc.0 as u8)
    }

    /// Elements in encoding order, starting from zero.
    pub fn iter(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(FqElem)
    }

    /// Nonzero elements in encoding order.
    pub fn nonzero(&self) -> impl Iterator<Item = FqElem> + '_ {
        (1..self.q).map(FqElem)
    }
}

impl FieldArith for FieldCtx {
    type Elem = FqElem;

    fn characteristic(&self) -> u32 {
        self.p
    }
    fn order(&self) -> u64 {
        self.q as u64
    }
    fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    fn one(&self) -> FqElem {
        FqElem::ONE
    }
    fn embed_int(&self, k: i64) -> FqElem {
        FieldCtx::embed_int(self, k)
    }
    fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FieldCtx::add(self, a, b)
    }
    fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        FieldCtx::sub(self, a, b)
    }
    fn neg(&self, a: FqElem) -> FqElem {
        FieldCtx::neg(self, a)
    }
    fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        FieldCtx::mul(self, a, b)
    }
    fn inv(&self, a: FqElem) -> Result<FqElem, GfError> {
        FieldCtx::inv(self, a)
    }
    fn pow_u64(&self, a: FqElem, k: u64) -> FqElem {
        FieldCtx::pow(self, a, k)
    }
    fn encode(&self, a: FqElem) -> u64 {
        a.0 as u64
    }
    fn decode(&self, enc: u64) -> Result<FqElem, GfError> {
        self.elem(enc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_mul_mod(ctx: &FieldCtx, a: FqElem, b: FqElem) -> FqElem {
        // schoolbook route through the modulus, independent of the tables
        let p = ctx.p as u64;
        let f: Vec<u64> = ctx.modulus.iter().map(|&c| c as u64).collect();
        let pa = fp_poly::trim(fp_poly::digits(a.0 as u64, p, ctx.m as usize));
        let pb = fp_poly::trim(fp_poly::digits(b.0 as u64, p, ctx.m as usize));
        let mut r = fp_poly::mul_mod(&pa, &pb, &f, p);
        r.resize(ctx.m as usize, 0);
        FqElem(fp_poly::undigits(&r, p) as u32)
    }

    fn digit_add(ctx: &FieldCtx, a: FqElem, b: FqElem) -> FqElem {
        let ca = ctx.coeffs(a);
        let cb = ctx.coeffs(b);
        let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % ctx.p).collect();
        ctx.from_coeffs(&s).unwrap()
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.q(), 3);
    }

    #[test]
    fn f4_modulus() {
        let f = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn f9_modulus_is_minimal_rootless_quadratic() {
        // enumerate monic quadratics over F_3 by encoding; first without a root
        let expected = (0..9u32)
            .find(|&e| {
                let (c0, c1) = (e % 3, e / 3);
                (0..3).all(|x| (x * x + c1 * x + c0) % 3 != 0)
            })
            .unwrap();
        let f = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f.modulus_encoding(), expected as u64);
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(FieldCtx::new(3, 0).unwrap_err(), GfError::DegreeZero);
        assert!(matches!(
            FieldCtx::with_bound(2, 11, 1024),
            Err(GfError::SizeBoundExceeded {
                order: 2048,
                bound: 1024
            })
        ));
        assert!(FieldCtx::with_bound(2, 10, 1024).is_ok());
    }

    #[test]
    fn deterministic_rebuild() {
        for (p, m) in [(2, 5), (3, 3), (5, 2), (7, 2)] {
            let a = FieldCtx::new(p, m).unwrap();
            let b = FieldCtx::new(p, m).unwrap();
            assert_eq!(a.modulus(), b.modulus());
            assert_eq!(a.exp, b.exp);
            assert_eq!(a.generator, b.generator);
        }
    }

    #[test]
    fn explicit_modulus_encoding() {
        let f = FieldCtx::new(2, 4).unwrap();
        let g = FieldCtx::with_modulus_encoding(2, 4, f.modulus_encoding(), DEFAULT_SIZE_BOUND)
            .unwrap();
        assert_eq!(f, g);
        // x^4 + 1 is reducible
        assert!(matches!(
            FieldCtx::with_modulus_encoding(2, 4, 1, DEFAULT_SIZE_BOUND),
            Err(GfError::BadModulus { .. })
        ));
    }

    #[test]
    fn tables_agree_with_schoolbook_arithmetic() {
        for (p, m) in [
            (2, 1),
            (2, 3),
            (2, 4),
            (3, 1),
            (3, 2),
            (3, 3),
            (5, 2),
            (7, 2),
            (2, 5),
        ] {
            let f = FieldCtx::new(p, m).unwrap();
            for a in f.iter() {
                for b in f.iter() {
                    assert_eq!(
                        f.mul(a, b),
                        poly_mul_mod(&f, a, b),
                        "F_{}: {a:?}*{b:?}",
                        f.q
                    );
                    assert_eq!(f.add(a, b), digit_add(&f, a, b), "F_{}: {a:?}+{b:?}", f.q);
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, m) in [
            (2, 1),
            (2, 2),
            (3, 1),
            (2, 3),
            (5, 1),
            (7, 1),
            (3, 2),
            (2, 4),
            (13, 1),
        ] {
            let f = FieldCtx::new(p, m).unwrap();
            for a in f.iter() {
                assert_eq!(f.add(a, f.neg(a)), FqElem::ZERO);
                assert_eq!(f.pow(a, f.q() as u64), a, "x^q = x");
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FqElem::ONE);
                }
                for b in f.iter() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.iter() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_and_pow_conventions() {
        let f = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f.inv(f.one()).unwrap(), f.one());
        assert_eq!(f.inv(FqElem::ZERO), Err(GfError::DivisionByZero));
        assert_eq!(f.pow(FqElem::ZERO, 0), FqElem::ONE);
        assert_eq!(f.pow(FqElem::ZERO, 5), FqElem::ZERO);
        let big = BigUint::from(8u32) * BigUint::from(10u64).pow(30) + 3u32;
        let x = f.elem(5).unwrap();
        let r = (&big % 8u32).try_into().unwrap();
        assert_eq!(f.pow_big(x, &big), f.pow(x, r));
        assert_eq!(f.pow_big(FqElem::ZERO, &BigUint::from(8u32)), FqElem::ZERO);
    }

    #[test]
    fn squares() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert!(f5.is_square(f5.one()).unwrap());
        assert!(!f5.is_square(f5.embed_int(2)).unwrap());
        assert!(f5.is_square(f5.embed_int(4)).unwrap());
        assert_eq!(f5.is_square(FqElem::ZERO), Err(GfError::ZeroInput));
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f4.is_square(f4.one()), Err(GfError::EvenCharacteristic));
        for (p, m) in [(3, 1), (5, 1), (3, 2), (7, 2), (5, 2), (3, 3)] {
            let f = FieldCtx::new(p, m).unwrap();
            let sq: std::collections::BTreeSet<FqElem> = f.nonzero().map(|y| f.mul(y, y)).collect();
            for x in f.nonzero() {
                assert_eq!(f.is_square(x).unwrap(), sq.contains(&x));
            }
            assert_eq!(sq.len() as u32, (f.q() - 1) / 2);
        }
    }

    #[test]
    fn absolute_trace() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f4.abs_trace_half(FqElem::ZERO).unwrap(), 0);
        // omega = x, with x^2 + x + 1 = 0
        let w = f4.elem(2).unwrap();
        assert_eq!(f4.add(w, f4.mul(w, w)), f4.one());
        assert_eq!(f4.abs_trace_half(w).unwrap(), 1);
        for m in 1..=6 {
            let f = FieldCtx::new(2, m).unwrap();
            let zeros = f
                .iter()
                .filter(|&x| f.abs_trace_half(x).unwrap() == 0)
                .count();
            assert_eq!(zeros as u32, f.q() / 2);
        }
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f3.abs_trace_half(f3.one()), Err(GfError::OddCharacteristic));
    }

    #[test]
    fn enumeration_and_encoding() {
        for (p, m, q) in [(2, 1, 2), (3, 1, 3), (2, 2, 4)] {
            let f = FieldCtx::new(p, m).unwrap();
            let all: Vec<FqElem> = f.iter().collect();
            assert_eq!(all.len(), q);
            assert_eq!(all[0], FqElem::ZERO);
            let set: std::collections::BTreeSet<_> = all.iter().collect();
            assert_eq!(set.len(), q);
        }
        let f = FieldCtx::new(5, 2).unwrap();
        for x in f.iter() {
            assert_eq!(f.from_coeffs(&f.coeffs(x)).unwrap(), x);
        }
        assert!(f.elem(25).is_err());
        assert_eq!(f.embed_int(-1), f.elem(4).unwrap());
    }
}
