use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::field::{FieldCtx, FqElem};
use super::{check_bound, FieldArith, GfError};

/// How `w` is adjoined to F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtKind {
    /// Odd q: `w^2 = d` with `d` the least nonsquare of F_q.
    NonsquareRoot,
    /// Even q: `w^2 + w = d` with `d` the least element of absolute trace 1.
    ArtinSchreier,
}

/// `u0 + u1 w` in F_{q^2}.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fq2Elem {
    pub u0: FqElem,
    pub u1: FqElem,
}

impl Fq2Elem {
    pub const ZERO: Fq2Elem = Fq2Elem {
        u0: FqElem::ZERO,
        u1: FqElem::ZERO,
    };
    pub const ONE: Fq2Elem = Fq2Elem {
        u0: FqElem::ONE,
        u1: FqElem::ZERO,
    };

    pub fn new(u0: FqElem, u1: FqElem) -> Self {
        Fq2Elem { u0, u1 }
    }

    pub fn from_base(c: FqElem) -> Self {
        Fq2Elem {
            u0: c,
            u1: FqElem::ZERO,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    /// `true` iff the element lies in the base field.
    pub fn in_base(self) -> bool {
        self.u1.is_zero()
    }
}

impl fmt::Debug for Fq2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}w)", self.u0, self.u1)
    }
}

/// F_{q^2} as a quadratic extension of F_q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExtCtx {
    base: FieldCtx,
    kind: ExtKind,
    d: FqElem,
}

impl QuadExtCtx {
    pub fn new(base: FieldCtx) -> Result<Self, GfError> {
        let q = base.q() as u128;
        check_bound(q * q, base.size_bound())?;
        let (kind, d) = if base.is_odd() {
            let d = base
                .nonzero()
                .find(|&x| !base.is_square(x).expect("odd q, nonzero"))
                .expect("odd q has nonsquares");
            (ExtKind::NonsquareRoot, d)
        } else {
            let d = base
                .iter()
                .find(|&x| base.abs_trace_half(x).expect("even q") == 1)
                .expect("trace is onto F_2");
            (ExtKind::ArtinSchreier, d)
        };
        Ok(QuadExtCtx { base, kind, d })
    }

    /// Builds F_q for `q = p^m` and its quadratic extension in one step.
    pub fn build(p: u32, m: u32) -> Result<Self, GfError> {
        Self::new(FieldCtx::new(p, m)?)
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn kind(&self) -> ExtKind {
        self.kind
    }

    pub fn d(&self) -> FqElem {
        self.d
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    /// Order of F_{q^2}.
    pub fn order(&self) -> u64 {
        let q = self.q() as u64;
        q * q
    }

    /// The adjoined generator `w`.
    pub fn w(&self) -> Fq2Elem {
        Fq2Elem::new(FqElem::ZERO, FqElem::ONE)
    }

    pub fn embed(&self, c: FqElem) -> Fq2Elem {
        Fq2Elem::from_base(c)
    }

    pub fn encode(&self, x: Fq2Elem) -> u64 {
        x.u0.enc() as u64 + self.q() as u64 * x.u1.enc() as u64
    }

    pub fn decode(&self, enc: u64) -> Result<Fq2Elem, GfError> {
        let q = self.q() as u64;
        if enc >= q * q {
            return Err(GfError::CtxMismatch { enc, order: q * q });
        }
        Ok(Fq2Elem::new(
            self.base.elem(enc % q)?,
            self.base.elem(enc / q)?,
        ))
    }

    /// Elements in canonical encoding order.
    pub fn iter(&self) -> impl Iterator<Item = Fq2Elem> + '_ {
        let q = self.q();
        (0..q).flat_map(move |u1| (0..q).map(move |u0| Fq2Elem::new(FqElem(u0), FqElem(u1))))
    }

    #[inline]
    pub fn add(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        let f = &self.base;
        Fq2Elem::new(f.add(x.u0, y.u0), f.add(x.u1, y.u1))
    }

    #[inline]
    pub fn neg(&self, x: Fq2Elem) -> Fq2Elem {
        Fq2Elem::new(self.base.neg(x.u0), self.base.neg(x.u1))
    }

    #[inline]
    pub fn sub(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        let f = &self.base;
        let hi = f.mul(x.u1, y.u1);
        let u0 = f.add(f.mul(x.u0, y.u0), f.mul(self.d, hi));
        let cross = f.add(f.mul(x.u0, y.u1), f.mul(x.u1, y.u0));
        let u1 = match self.kind {
            ExtKind::NonsquareRoot => cross,
            // w^2 = w + d
            ExtKind::ArtinSchreier => f.add(cross, hi),
        };
        Fq2Elem::new(u0, u1)
    }

    /// `c * x` for `c` in the base field.
    #[inline]
    pub fn scale(&self, c: FqElem, x: Fq2Elem) -> Fq2Elem {
        Fq2Elem::new(self.base.mul(c, x.u0), self.base.mul(c, x.u1))
    }

    /// `x -> x^q`, using `w^q = -w` (odd q) or `w^q = w + 1` (even q).
    #[inline]
    pub fn frobenius(&self, x: Fq2Elem) -> Fq2Elem {
        match self.kind {
            ExtKind::NonsquareRoot => Fq2Elem::new(x.u0, self.base.neg(x.u1)),
            ExtKind::ArtinSchreier => Fq2Elem::new(self.base.add(x.u0, x.u1), x.u1),
        }
    }

    /// Relative trace `x + x^q`.
    pub fn trace_rel(&self, x: Fq2Elem) -> FqElem {
        let t = self.add(x, self.frobenius(x));
        debug_assert!(t.in_base());
        t.u0
    }

    /// Relative norm `x * x^q`.
    pub fn norm_rel(&self, x: Fq2Elem) -> FqElem {
        let n = self.mul(x, self.frobenius(x));
        debug_assert!(n.in_base());
        n.u0
    }

    pub fn inv(&self, x: Fq2Elem) -> Result<Fq2Elem, GfError> {
        let n = self.norm_rel(x);
        let ninv = self.base.inv(n)?;
        Ok(self.scale(ninv, self.frobenius(x)))
    }

    pub fn div(&self, x: Fq2Elem, y: Fq2Elem) -> Result<Fq2Elem, GfError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Fq2Elem, k: u64) -> Fq2Elem {
        if k == 0 {
            return Fq2Elem::ONE;
        }
        if x.is_zero() {
            return Fq2Elem::ZERO;
        }
        let mut e = k % (self.order() - 1);
        let mut base = x;
        let mut acc = Fq2Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, x: Fq2Elem, k: &BigUint) -> Fq2Elem {
        FieldArith::pow_big(self, x, k)
    }
}

impl FieldArith for QuadExtCtx {
    type Elem = Fq2Elem;

    fn characteristic(&self) -> u32 {
        self.base.p()
    }
    fn order(&self) -> u64 {
        QuadExtCtx::order(self)
    }
    fn zero(&self) -> Fq2Elem {
        Fq2Elem::ZERO
    }
    fn one(&self) -> Fq2Elem {
        Fq2Elem::ONE
    }
    fn embed_int(&self, k: i64) -> Fq2Elem {
        Fq2Elem::from_base(self.base.embed_int(k))
    }
    fn add(&self, a: Fq2Elem, b: Fq2Elem) -> Fq2Elem {
        QuadExtCtx::add(self, a, b)
    }
    fn sub(&self, a: Fq2Elem, b: Fq2Elem) -> Fq2Elem {
        QuadExtCtx::sub(self, a, b)
    }
    fn neg(&self, a: Fq2Elem) -> Fq2Elem {
        QuadExtCtx::neg(self, a)
    }
    fn mul(&self, a: Fq2Elem, b: Fq2Elem) -> Fq2Elem {
        QuadExtCtx::mul(self, a, b)
    }
    fn inv(&self, a: Fq2Elem) -> Result<Fq2Elem, GfError> {
        QuadExtCtx::inv(self, a)
    }
    fn pow_u64(&self, a: Fq2Elem, k: u64) -> Fq2Elem {
        QuadExtCtx::pow(self, a, k)
    }
    fn encode(&self, a: Fq2Elem) -> u64 {
        QuadExtCtx::encode(self, a)
    }
    fn decode(&self, enc: u64) -> Result<Fq2Elem, GfError> {
        QuadExtCtx::decode(self, enc)
    }
}
