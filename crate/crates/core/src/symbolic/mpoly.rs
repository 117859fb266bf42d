use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SymbolicError;
use crate::gf::FieldArith;

/// Coefficient domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coeffs {
    Integers,
    ModTwo,
}

/// An ordered variable list plus coefficient domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    names: Vec<String>,
    coeffs: Coeffs,
}

impl Ring {
    pub fn new(names: &[&str], coeffs: Coeffs) -> Arc<Ring> {
        Arc::new(Ring {
            names: names.iter().map(|s| s.to_string()).collect(),
            coeffs,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn coeffs(&self) -> Coeffs {
        self.coeffs
    }

    pub fn index_of(&self, name: &str) -> Result<usize, SymbolicError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| SymbolicError::UnknownVariable(name.to_string()))
    }
}

fn normalize(coeffs: Coeffs, c: BigInt) -> BigInt {
    match coeffs {
        Coeffs::Integers => c,
        Coeffs::ModTwo => c.mod_floor(&BigInt::from(2)),
    }
}

/// Sparse polynomial: exponent vector to nonzero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        MPoly {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: i64) -> Self {
        let mut p = MPoly::zero(ring);
        p.add_term(vec![0; ring.names.len()], BigInt::from(c));
        p
    }

    pub fn var(ring: &Arc<Ring>, name: &str) -> Result<Self, SymbolicError> {
        let idx = ring.index_of(name)?;
        let mut exps = vec![0; ring.names.len()];
        exps[idx] = 1;
        let mut p = MPoly::zero(ring);
        p.add_term(exps, BigInt::one());
        Ok(p)
    }

    pub fn from_terms(
        ring: &Arc<Ring>,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Self {
        let mut p = MPoly::zero(ring);
        for (e, c) in terms {
            assert_eq!(e.len(), ring.names.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    fn normalize(&self, c: BigInt) -> BigInt {
        normalize(self.ring.coeffs, c)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        let coeffs = self.ring.coeffs;
        match self.terms.entry(exps) {
            Entry::Occupied(mut slot) => {
                let v = normalize(coeffs, slot.get() + c);
                if v.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = v;
                }
            }
            Entry::Vacant(slot) => {
                let v = normalize(coeffs, c);
                if !v.is_zero() {
                    slot.insert(v);
                }
            }
        }
    }

    fn same_ring(&self, other: &MPoly) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "polynomials from different rings"
        );
    }

    pub fn scale(&self, k: i64) -> MPoly {
        let k = BigInt::from(k);
        let mut out = MPoly::zero(&self.ring);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), self.normalize(c * &k));
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::constant(&self.ring, 1);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Coefficient of `var^k`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, var: usize, k: u32) -> MPoly {
        let mut out = MPoly::zero(&self.ring);
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut e = e.clone();
                e[var] = 0;
                out.add_term(e, c.clone());
            }
        }
        out
    }

    /// Replaces the named variable by `value`.
    pub fn substitute(&self, name: &str, value: &MPoly) -> Result<MPoly, SymbolicError> {
        self.same_ring(value);
        let var = self.ring.index_of(name)?;
        let mut powers = vec![MPoly::constant(&self.ring, 1)];
        let mut out = MPoly::zero(&self.ring);
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            while powers.len() <= k {
                let next = powers.last().expect("nonempty") * value;
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[var] = 0;
            let mono = MPoly::from_terms(&self.ring, [(rest, c.clone())]);
            out = &out + &(&mono * &powers[k]);
        }
        Ok(out)
    }

    /// Evaluation at a point of a field of characteristic p, one value per
    /// variable in ring order.
    pub fn eval<F: FieldArith>(&self, field: &F, values: &[F::Elem]) -> F::Elem {
        assert_eq!(
            values.len(),
            self.ring.names.len(),
            "one value per variable"
        );
        let p = BigInt::from(field.characteristic());
        self.terms.iter().fold(field.zero(), |acc, (e, c)| {
            let c = c.mod_floor(&p).to_i64().expect("residue fits");
            let mono = e
                .iter()
                .zip(values)
                .fold(field.embed_int(c), |m, (&k, &v)| {
                    field.mul(m, field.pow_u64(v, k as u64))
                });
            field.add(acc, mono)
        })
    }
}

impl fmt::Display for MPoly {
    /// Canonical form: terms in descending exponent order, `*` between factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let factors: Vec<String> = e
                .iter()
                .zip(&self.ring.names)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, n)| {
                    if k == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{k}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(-1)
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.same_ring(rhs);
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        MPoly::from_terms(&self.ring, acc)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly { (&self).$m(&rhs) }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly { (&self).$m(rhs) }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

/// The rewrite `var^2 -> replacement`, with `replacement` free of `var`.
#[derive(Debug, Clone)]
pub struct Relation {
    var: usize,
    replacement: MPoly,
}

impl Relation {
    pub fn new(var_name: &str, replacement: MPoly) -> Result<Self, SymbolicError> {
        let var = replacement.ring().index_of(var_name)?;
        assert_eq!(
            replacement.degree_in(var),
            0,
            "replacement must not contain the rewritten variable"
        );
        Ok(Relation { var, replacement })
    }

    /// `b^2 -> a^2 + 3a`.
    pub fn odd(ring: &Arc<Ring>) -> Result<Self, SymbolicError> {
        let a = MPoly::var(ring, "a")?;
        Relation::new("b", &a.pow(2) + &a.scale(3))
    }

    /// `b^2 -> a^2 + a`.
    pub fn even(ring: &Arc<Ring>) -> Result<Self, SymbolicError> {
        let a = MPoly::var(ring, "a")?;
        Relation::new("b", &a.pow(2) + &a)
    }

    /// Normal form with degree at most 1 in the rewritten variable.
    pub fn reduce(&self, poly: &MPoly) -> MPoly {
        let ring = poly.ring();
        let mut out = MPoly::zero(ring);
        let mut pending: Vec<(Vec<u32>, BigInt)> =
            poly.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        while let Some((mut e, c)) = pending.pop() {
            if e[self.var] < 2 {
                out.add_term(e, c);
                continue;
            }
            e[self.var] -= 2;
            let mono = MPoly::from_terms(ring, [(e, c)]);
            pending.extend((&mono * &self.replacement).terms);
        }
        out
    }
}
