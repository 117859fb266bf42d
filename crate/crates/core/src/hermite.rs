//! Power sums `Σ_{x in F_{q^2}} f(x)^s` of the monic trinomial, computed
//! directly, through the binomial expansion over `(i, j, k, l)`, and through
//! the rational closed forms at `s = α + (q-1-α) q` for `α ∈ {0, 1, 2}`.

use num_bigint::BigUint;
use thiserror::Error;

use crate::gf::{FieldCtx, Fq2Elem, FqElem, GfError, QuadExtCtx};
use crate::lemma_sums::{lucas_binom, quad_split_kind, LemmaError, SplitKind};
use crate::trinomial::{eval_trinomial, TrinomialParams};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HermiteError {
    #[error("exponent split alpha={alpha}, beta={beta} must satisfy alpha + beta = q - 1 = {}", q - 1)]
    BadExponentSplit { alpha: u32, beta: u32, q: u32 },
    #[error("closed forms need a b != 0")]
    ZeroCoefficient,
    #[error("x^2 + x + a/b^2 must have two distinct roots in F_q, found {0:?}")]
    PreconditionRootSplit(SplitKind),
    #[error("b^2 - 4a vanishes")]
    ZeroDenominator,
    #[error(transparent)]
    Lemma(#[from] LemmaError),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// `α + (q - 1 - α) q`.
pub fn split_exponent(q: u32, alpha: u32) -> u64 {
    let q = q as u64;
    alpha as u64 + (q - 1 - alpha as u64) * q
}

/// `Σ_x f(x)^s` with `0^0 = 1`, so `s = 0` gives `q^2 = 0`.
pub fn power_sum_direct(ext: &QuadExtCtx, params: &TrinomialParams, s: &BigUint) -> Fq2Elem {
    ext.iter()
        .map(|x| ext.pow_big(eval_trinomial(ext, params, x), s))
        .fold(Fq2Elem::ZERO, |acc, v| ext.add(acc, v))
}

/// Binomial coefficients mod p for `0 <= k <= n < rows`.
struct PascalMod {
    rows: Vec<Vec<u32>>,
}

impl PascalMod {
    fn new(rows: u32, p: u32) -> Self {
        let rows = (0..rows as u64)
            .map(|n| (0..=n).map(|k| lucas_binom(n, k, p)).collect())
            .collect();
        PascalMod { rows }
    }

    fn get(&self, n: u32, k: u32) -> u32 {
        self.rows[n as usize][k as usize]
    }
}

/// The expansion
/// `-Σ binom(α,i) binom(i,k) binom(β,j) binom(j,l) a^(q-1-i-j) b^(i+j-k-l)`
/// over `0<=k<=i<=α`, `0<=l<=j<=β` with `q-α+i+k-j-l ∈ {0, q+1}`.
///
/// Every exponent of `a` here is `(α-i) + (β-j) >= 0`, so `a = 0` is covered
/// with `0^0 = 1`.
pub fn power_sum_expansion(
    f: &FieldCtx,
    a: FqElem,
    b: FqElem,
    alpha: u32,
    beta: u32,
) -> Result<FqElem, HermiteError> {
    let q = f.q();
    if alpha as u64 + beta as u64 != q as u64 - 1 {
        return Err(HermiteError::BadExponentSplit { alpha, beta, q });
    }
    let pascal = PascalMod::new(q, f.p());
    let target = (q + 1) as i64;
    let mut acc = FqElem::ZERO;
    for i in 0..=alpha {
        for k in 0..=i {
            let left = pascal.get(alpha, i) * pascal.get(i, k) % f.p();
            if left == 0 {
                continue;
            }
            for j in 0..=beta {
                for l in 0..=j {
                    let shift = q as i64 - alpha as i64 + (i + k) as i64 - (j + l) as i64;
                    if shift != 0 && shift != target {
                        continue;
                    }
                    let coeff = left as i64 * (pascal.get(beta, j) * pascal.get(j, l)) as i64;
                    if coeff % f.p() as i64 == 0 {
                        continue;
                    }
                    let term = f.mul(
                        f.pow(a, (q - 1 - i - j) as u64),
                        f.pow(b, (i + j - k - l) as u64),
                    );
                    acc = f.add(acc, f.mul(f.embed_int(coeff), term));
                }
            }
        }
    }
    Ok(f.neg(acc))
}

/// Closed forms for `α = 0, 1, 2` when `ab != 0` and `x^2 + x + a/b^2`
/// has two distinct roots in F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndpointSums {
    /// Always zero.
    pub alpha0: FqElem,
    /// `2(1-a)(b^2-a^2-3a) / (a^2 (b^2-4a))`
    pub alpha1: FqElem,
    /// `3b(1-a)(b^2-a^2-3a)(9a-6a^2+a^3-2b^2+ab^2) / (a^4 (b^2-4a)^2)`, for `q >= 3`.
    pub alpha2: Option<FqElem>,
}

impl EndpointSums {
    pub fn get(&self, alpha: u32) -> Option<FqElem> {
        match alpha {
            0 => Some(self.alpha0),
            1 => Some(self.alpha1),
            2 => self.alpha2,
            _ => None,
        }
    }
}

pub fn closed_form_endpoints(
    f: &FieldCtx,
    a: FqElem,
    b: FqElem,
) -> Result<EndpointSums, HermiteError> {
    if a.is_zero() || b.is_zero() {
        return Err(HermiteError::ZeroCoefficient);
    }
    let z = f.neg(f.div(a, f.square(b))?);
    let kind = quad_split_kind(f, z)?;
    if kind != SplitKind::TwoRoots {
        return Err(HermiteError::PreconditionRootSplit(kind));
    }
    let k = |v: i64| f.embed_int(v);
    let a2 = f.square(a);
    let b2 = f.square(b);
    let disc = f.sub(b2, f.mul(k(4), a));
    if disc.is_zero() {
        return Err(HermiteError::ZeroDenominator);
    }
    let one_minus_a = f.sub(f.one(), a);
    let relation = f.sub(f.sub(b2, a2), f.mul(k(3), a));
    let shared = f.mul(one_minus_a, relation);

    let alpha1 = f.div(f.mul(k(2), shared), f.mul(a2, disc))?;
    let alpha2 = if f.q() >= 3 {
        let cubic = [
            f.mul(k(9), a),
            f.mul(k(-6), a2),
            f.mul(a2, a),
            f.mul(k(-2), b2),
            f.mul(a, b2),
        ]
        .into_iter()
        .fold(FqElem::ZERO, |acc, t| f.add(acc, t));
        let num = f.mul(f.mul(k(3), b), f.mul(shared, cubic));
        Some(f.div(num, f.mul(f.square(a2), f.square(disc)))?)
    } else {
        None
    };
    Ok(EndpointSums {
        alpha0: FqElem::ZERO,
        alpha1,
        alpha2,
    })
}

/// The power sum at `s = α + β q` by every available route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerSumReport {
    pub a: FqElem,
    pub b: FqElem,
    pub alpha: u32,
    pub beta: u32,
    pub direct: Fq2Elem,
    pub expansion: Fq2Elem,
    pub closed_form: Option<FqElem>,
}

impl PowerSumReport {
    pub fn consistent(&self, ext: &QuadExtCtx) -> bool {
        self.direct == self.expansion
            && self.closed_form.is_none_or(|c| ext.embed(c) == self.direct)
    }
}

pub fn power_sum_report(
    ext: &QuadExtCtx,
    a: FqElem,
    b: FqElem,
    alpha: u32,
) -> Result<PowerSumReport, HermiteError> {
    let q = ext.q();
    if alpha >= q {
        return Err(HermiteError::BadExponentSplit { alpha, beta: 0, q });
    }
    let beta = q - 1 - alpha;
    let f = ext.base();
    let s = BigUint::from(split_exponent(q, alpha));
    let direct = power_sum_direct(ext, &TrinomialParams::monic(a, b), &s);
    let expansion = ext.embed(power_sum_expansion(f, a, b, alpha, beta)?);
    let closed_form = closed_form_endpoints(f, a, b)
        .ok()
        .and_then(|c| c.get(alpha));
    Ok(PowerSumReport {
        a,
        b,
        alpha,
        beta,
        direct,
        expansion,
        closed_form,
    })
}

/// Every inconsistent report over the field. With `all_ab`, all `a != 0`,
/// all `b` and all `α` are swept; otherwise only the `(a, b)` pairs that
/// admit closed forms, at `α ∈ {0, 1, 2}`.
pub fn hermite_mismatches(
    ext: &QuadExtCtx,
    all_ab: bool,
) -> Result<Vec<PowerSumReport>, HermiteError> {
    let f = ext.base();
    let mut out = Vec::new();
    for a in f.nonzero() {
        for b in f.iter() {
            let endpoints = closed_form_endpoints(f, a, b).is_ok();
            let alphas = if all_ab {
                0..ext.q()
            } else if endpoints {
                0..ext.q().min(3)
            } else {
                continue;
            };
            for alpha in alphas {
                let report = power_sum_report(ext, a, b, alpha)?;
                if !report.consistent(ext) {
                    out.push(report);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(p: u32, m: u32) -> QuadExtCtx {
        QuadExtCtx::build(p, m).unwrap()
    }

    #[test]
    fn split_exponents() {
        assert_eq!(split_exponent(5, 0), 20);
        assert_eq!(split_exponent(5, 1), 16);
        assert_eq!(split_exponent(5, 2), 12);
    }

    #[test]
    fn identity_power_sums_vanish() {
        let e = ext(3, 1);
        let id = TrinomialParams {
            a: FqElem::ONE,
            b: FqElem::ZERO,
            c: FqElem::ZERO,
        };
        for s in 0..8u32 {
            assert_eq!(power_sum_direct(&e, &id, &BigUint::from(s)), Fq2Elem::ZERO);
        }
        assert_eq!(
            power_sum_direct(&e, &id, &BigUint::from(8u32)),
            e.embed(e.base().embed_int(-1))
        );
    }

    #[test]
    fn sums_vanish_off_the_split_line() {
        let e = ext(5, 1);
        let f = e.base();
        let params = TrinomialParams::monic(f.embed_int(2), f.embed_int(3));
        for s in 1..24u64 {
            if s % 4 != 0 {
                assert_eq!(
                    power_sum_direct(&e, &params, &BigUint::from(s)),
                    Fq2Elem::ZERO,
                    "s={s}"
                );
            }
        }
    }

    #[test]
    fn zero_a_gives_inverse_b() {
        for (p, m) in [(3, 1), (5, 1), (2, 2), (7, 1)] {
            let e = ext(p, m);
            let f = e.base();
            let s = BigUint::from(f.q() - 1);
            for b in f.nonzero() {
                let got = power_sum_direct(&e, &TrinomialParams::monic(FqElem::ZERO, b), &s);
                assert_eq!(got, e.embed(f.inv(b).unwrap()));
                let via = power_sum_expansion(f, FqElem::ZERO, b, f.q() - 1, 0).unwrap();
                assert_eq!(via, f.inv(b).unwrap());
            }
        }
    }

    #[test]
    fn expansion_matches_direct_small_q() {
        for (p, m) in [(3, 1), (5, 1), (2, 2)] {
            let e = ext(p, m);
            let f = e.base();
            for a in f.iter() {
                for b in f.iter() {
                    for alpha in 0..f.q() {
                        let r = power_sum_report(&e, a, b, alpha).unwrap();
                        assert_eq!(
                            r.direct,
                            r.expansion,
                            "q={} a={a:?} b={b:?} alpha={alpha}",
                            f.q()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn bad_split_rejected() {
        let f = FieldCtx::new(5, 1).unwrap();
        assert_eq!(
            power_sum_expansion(&f, f.one(), f.one(), 2, 3),
            Err(HermiteError::BadExponentSplit {
                alpha: 2,
                beta: 3,
                q: 5
            })
        );
    }

    #[test]
    fn closed_forms_vanish_on_relation() {
        let z = FqElem::ZERO;
        let mut seen = 0;
        for p in [7, 11, 13] {
            let f = FieldCtx::new(p, 1).unwrap();
            for a in f.nonzero() {
                for b in f.nonzero() {
                    if f.square(b) != f.add(f.square(a), f.mul(f.embed_int(3), a)) {
                        continue;
                    }
                    if let Ok(c) = closed_form_endpoints(&f, a, b) {
                        assert_eq!((c.alpha0, c.alpha1, c.alpha2), (z, z, Some(z)));
                        seen += 1;
                    }
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn closed_form_q7_a1_b1() {
        let f = FieldCtx::new(7, 1).unwrap();
        let c = closed_form_endpoints(&f, f.one(), f.one()).unwrap();
        assert_eq!(c.alpha1, FqElem::ZERO);
        assert_eq!(
            closed_form_endpoints(&f, FqElem::ZERO, f.one()),
            Err(HermiteError::ZeroCoefficient)
        );
    }

    #[test]
    fn closed_forms_match_direct_q5_and_q4() {
        for (p, m) in [(5, 1), (2, 2), (7, 1)] {
            let e = ext(p, m);
            assert!(hermite_mismatches(&e, false).unwrap().is_empty());
        }
    }
}
