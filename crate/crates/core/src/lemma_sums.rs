//! Generalized binomial coefficients and the finite sums
//! `Σ w(l) binom(-l, l + shift) z^l` with their closed forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldCtx, FqElem, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LemmaError {
    #[error("z must be nonzero")]
    ZeroInput,
    #[error("{sum} requires x^2 + x - z to have two distinct roots in F_q, found {found:?}")]
    HypothesisViolated { sum: LemmaSum, found: SplitKind },
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// `upper (upper-1) ... (upper-lower+1) / lower!` over the integers.
pub fn gen_binom_exact(upper: i64, lower: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..lower {
        // the running product over (i+1)! stays integral at every step
        acc = acc * BigInt::from(upper - i as i64) / BigInt::from(i + 1);
    }
    acc
}

/// The generalized binomial reduced into `[0, p)`.
pub fn gen_binom(upper: i64, lower: u32, p: u32) -> u32 {
    gen_binom_exact(upper, lower)
        .mod_floor(&BigInt::from(p))
        .to_u32()
        .expect("residue below p")
}

/// `binom(n, k) mod p` for `0 <= n` by Lucas' theorem.
pub fn lucas_binom(mut n: u64, mut k: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    while k > 0 {
        let (nd, kd) = (n % p64, k % p64);
        if kd > nd {
            return 0;
        }
        acc = acc * gen_binom(nd as i64, kd as u32, p) as u64 % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}

/// Factorization pattern of `x^2 + x - z` over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitKind {
    DoubleRoot,
    TwoRoots,
    Irreducible,
}

pub fn quad_split_kind(f: &FieldCtx, z: FqElem) -> Result<SplitKind, LemmaError> {
    if z.is_zero() {
        return Err(LemmaError::ZeroInput);
    }
    let kind = if f.is_odd() {
        let disc = f.add(f.one(), f.mul(f.embed_int(4), z));
        if disc.is_zero() {
            SplitKind::DoubleRoot
        } else if f.is_square(disc)? {
            SplitKind::TwoRoots
        } else {
            SplitKind::Irreducible
        }
    } else if f.abs_trace_half(z)? == 0 {
        SplitKind::TwoRoots
    } else {
        SplitKind::Irreducible
    };
    Ok(kind)
}

/// The six sums. Each is `Σ_{0 <= l <= bound} weight(l) binom(-l, l + shift) z^l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaSum {
    /// `Σ_{l <= q/2} binom(-l, l) z^l`
    Central,
    /// `Σ_{l <= (q-1)/2} binom(-l, l+1) z^l`
    Shifted,
    /// `Σ_{l <= (q-1)/2} (l+1) binom(-l, l+1) z^l`
    WeightedShifted,
    /// `Σ_{l <= q/2} (l+1) binom(-l, l) z^l`
    WeightedCentral,
    /// `Σ_{l <= q/2} binom(l+2, 2) binom(-l, l) z^l`
    TriangularCentral,
    /// `Σ_{l <= (q-1)/2} binom(l+2, 2) binom(-l, l+1) z^l`
    TriangularShifted,
}

impl LemmaSum {
    pub const ALL: [LemmaSum; 6] = [
        LemmaSum::Central,
        LemmaSum::Shifted,
        LemmaSum::WeightedShifted,
        LemmaSum::WeightedCentral,
        LemmaSum::TriangularCentral,
        LemmaSum::TriangularShifted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaSum::Central => "central",
            LemmaSum::Shifted => "shifted",
            LemmaSum::WeightedShifted => "weighted-shifted",
            LemmaSum::WeightedCentral => "weighted-central",
            LemmaSum::TriangularCentral => "triangular-central",
            LemmaSum::TriangularShifted => "triangular-shifted",
        }
    }

    fn shift(self) -> u32 {
        match self {
            LemmaSum::Central | LemmaSum::WeightedCentral | LemmaSum::TriangularCentral => 0,
            _ => 1,
        }
    }

    /// Upper summation index: `floor(q/2)` for the central sums,
    /// `floor((q-1)/2)` for the shifted ones.
    pub fn bound(self, q: u32) -> u32 {
        if self.shift() == 0 {
            q / 2
        } else {
            (q - 1) / 2
        }
    }

    fn weight(self, l: u32) -> i64 {
        let l = l as i64;
        match self {
            LemmaSum::Central | LemmaSum::Shifted => 1,
            LemmaSum::WeightedShifted | LemmaSum::WeightedCentral => l + 1,
            LemmaSum::TriangularCentral | LemmaSum::TriangularShifted => (l + 2) * (l + 1) / 2,
        }
    }
}

impl fmt::Display for LemmaSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Termwise evaluation in F_q.
pub fn lemma_sum(f: &FieldCtx, which: LemmaSum, z: FqElem) -> Result<FqElem, LemmaError> {
    if z.is_zero() {
        return Err(LemmaError::ZeroInput);
    }
    let p = f.p();
    let mut acc = FqElem::ZERO;
    let mut zl = f.one();
    for l in 0..=which.bound(f.q()) {
        let coeff = gen_binom(-(l as i64), l + which.shift(), p) as i64 * which.weight(l);
        acc = f.add(acc, f.mul(f.embed_int(coeff), zl));
        zl = f.mul(zl, z);
    }
    Ok(acc)
}

/// Closed-form value. The central sum is valid for every `z`; the others
/// need `x^2 + x - z` to have two distinct roots in F_q.
pub fn lemma_closed(f: &FieldCtx, which: LemmaSum, z: FqElem) -> Result<FqElem, LemmaError> {
    let kind = quad_split_kind(f, z)?;
    let k = |v: i64| f.embed_int(v);
    if which == LemmaSum::Central {
        return Ok(match kind {
            SplitKind::DoubleRoot => f.inv(k(2))?,
            SplitKind::TwoRoots => f.one(),
            SplitKind::Irreducible => FqElem::ZERO,
        });
    }
    if kind != SplitKind::TwoRoots {
        return Err(LemmaError::HypothesisViolated {
            sum: which,
            found: kind,
        });
    }
    let one_4z = f.add(f.one(), f.mul(k(4), z));
    let value = match which {
        LemmaSum::Central => unreachable!(),
        LemmaSum::Shifted => f.one(),
        LemmaSum::WeightedShifted => f.div(f.mul(k(2), z), one_4z)?,
        LemmaSum::WeightedCentral => f.div(f.add(f.one(), f.mul(k(3), z)), one_4z)?,
        LemmaSum::TriangularCentral if f.q() == 2 => f.add(f.one(), z),
        LemmaSum::TriangularCentral => {
            let num = f.add(f.add(f.one(), f.mul(k(6), z)), f.mul(k(11), f.square(z)));
            f.div(num, f.square(one_4z))?
        }
        LemmaSum::TriangularShifted if f.q() == 2 => FqElem::ZERO,
        LemmaSum::TriangularShifted => {
            let num = f.mul(f.mul(k(3), z), f.add(f.one(), f.mul(k(2), z)));
            f.div(num, f.square(one_4z))?
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_binom_known_rows() {
        for p in [2u32, 3, 5, 7] {
            for k in 0..=20u32 {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let expect2 = (sign * (k as i64 + 1)).rem_euclid(p as i64) as u32;
                assert_eq!(gen_binom(-2, k, p), expect2);
                let tri = (k as i64 + 2) * (k as i64 + 1) / 2;
                assert_eq!(
                    gen_binom(-3, k, p),
                    (sign * tri).rem_euclid(p as i64) as u32
                );
            }
            assert_eq!(gen_binom(17, 0, p), 1);
            assert_eq!(gen_binom(-17, 0, p), 1);
        }
    }

    #[test]
    fn gen_binom_exact_small() {
        assert_eq!(gen_binom_exact(5, 2), BigInt::from(10));
        assert_eq!(gen_binom_exact(2, 5), BigInt::from(0));
        assert_eq!(gen_binom_exact(-1, 7), BigInt::from(-1));
        assert_eq!(gen_binom_exact(-4, 3), BigInt::from(-20));
    }

    #[test]
    fn lucas_matches_exact() {
        for p in [2u32, 3, 5, 7] {
            for n in 0..60u64 {
                for k in 0..=n {
                    assert_eq!(
                        lucas_binom(n, k, p),
                        gen_binom(n as i64, k as u32, p),
                        "{n} {k} {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn split_kinds() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(
            quad_split_kind(&f5, f5.embed_int(2)).unwrap(),
            SplitKind::TwoRoots
        );
        let quarter = f5.neg(f5.inv(f5.embed_int(4)).unwrap());
        assert_eq!(
            quad_split_kind(&f5, quarter).unwrap(),
            SplitKind::DoubleRoot
        );
        assert_eq!(
            quad_split_kind(&f5, FqElem::ZERO),
            Err(LemmaError::ZeroInput)
        );
        let f4 = FieldCtx::new(2, 2).unwrap();
        let w = f4.elem(2).unwrap();
        assert_eq!(f4.abs_trace_half(w).unwrap(), 1);
        assert_eq!(quad_split_kind(&f4, w).unwrap(), SplitKind::Irreducible);
        assert_eq!(quad_split_kind(&f4, f4.one()).unwrap(), SplitKind::TwoRoots);
    }

    #[test]
    fn split_kind_matches_root_count() {
        for (p, m) in [(3, 1), (5, 1), (2, 3), (3, 2), (2, 4)] {
            let f = FieldCtx::new(p, m).unwrap();
            for z in f.nonzero() {
                let roots = f.iter().filter(|&r| f.add(f.square(r), r) == z).count();
                let kind = quad_split_kind(&f, z).unwrap();
                let expect = match roots {
                    0 => SplitKind::Irreducible,
                    1 => SplitKind::DoubleRoot,
                    _ => SplitKind::TwoRoots,
                };
                assert_eq!(kind, expect);
            }
        }
    }

    #[test]
    fn q2_branches() {
        let f = FieldCtx::new(2, 1).unwrap();
        let z = f.one();
        assert_eq!(
            lemma_sum(&f, LemmaSum::TriangularCentral, z).unwrap(),
            f.add(f.one(), z)
        );
        assert_eq!(lemma_sum(&f, LemmaSum::Central, z).unwrap(), FqElem::ZERO);
        assert_eq!(
            lemma_closed(&f, LemmaSum::Central, z).unwrap(),
            FqElem::ZERO
        );
        assert!(matches!(
            lemma_closed(&f, LemmaSum::Shifted, z),
            Err(LemmaError::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn double_root_central_is_half() {
        let f = FieldCtx::new(7, 1).unwrap();
        let z = f.neg(f.inv(f.embed_int(4)).unwrap());
        let half = f.inv(f.embed_int(2)).unwrap();
        assert_eq!(lemma_sum(&f, LemmaSum::Central, z).unwrap(), half);
        assert_eq!(lemma_closed(&f, LemmaSum::Central, z).unwrap(), half);
    }

    #[test]
    fn all_sums_match_closed_forms_small_fields() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let f = FieldCtx::new(p, m).unwrap();
            for z in f.nonzero() {
                for which in LemmaSum::ALL {
                    if let Ok(closed) = lemma_closed(&f, which, z) {
                        assert_eq!(
                            lemma_sum(&f, which, z).unwrap(),
                            closed,
                            "q={} {which} z={z:?}",
                            f.q()
                        );
                    }
                }
            }
        }
    }
}
