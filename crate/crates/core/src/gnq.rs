//! The polynomials `g_{n,q} ∈ F_p[x]` defined by
//! `Σ_{c ∈ F_q} (x + c)^n = g_{n,q}(x^q - x)`, and the classification of the
//! exponents `n = q^α - q^β - 1` for which `g_{n,q}` permutes F_{q^2}.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldArith, FieldCtx, Fq2Elem, FqElem, GfError, QuadExtCtx};
use crate::trinomial::{eval_trinomial, TrinomialParams};

pub const DEFAULT_COEFF_BOUND: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GnqError {
    #[error("g_{{n,q}} for n={n} needs about {needed} coefficients, bound is {bound}")]
    MemoryBound { n: u64, needed: u64, bound: usize },
    #[error("(beta, alpha) = ({beta}, {alpha}) outside 0 <= beta < alpha < {limit}")]
    RangeViolation { alpha: u32, beta: u32, limit: u32 },
    #[error("q must be even")]
    OddQ,
    #[error("q must be odd")]
    EvenQ,
    #[error("change of variable needs {0}")]
    PreconditionViolated(&'static str),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// Polynomial over F_p, coefficient `i` at degree `i`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensePoly {
    p: u32,
    coeffs: Vec<u32>,
}

impl DensePoly {
    pub fn new(p: u32, mut coeffs: Vec<u32>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        DensePoly { p, coeffs }
    }

    pub fn zero(p: u32) -> Self {
        DensePoly {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation in any field of characteristic p.
    pub fn eval<F: FieldArith>(&self, field: &F, x: F::Elem) -> F::Elem {
        self.coeffs.iter().rev().fold(field.zero(), |acc, &c| {
            field.add(field.mul(acc, x), field.embed_int(c as i64))
        })
    }
}

fn add_shifted(p: u32, low: &[u32], shifted: &[u32]) -> Vec<u32> {
    let len = low.len().max(shifted.len() + 1);
    let mut out = vec![0u32; len];
    out[..low.len()].copy_from_slice(low);
    for (i, &c) in shifted.iter().enumerate() {
        out[i + 1] = (out[i + 1] + c) % p;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Coefficients of `g_{n,q}` from `g_n = g_{n-q+1} + x g_{n-q}`,
/// `g_{q-1} = -1`, `g_n = 0` below `q - 1`.
pub fn gnq_coeffs(n: u64, q: u32, p: u32, bound: usize) -> Result<DensePoly, GnqError> {
    let needed = n / q as u64 + 1;
    if needed > bound as u64 {
        return Err(GnqError::MemoryBound { n, needed, bound });
    }
    let qn = q as u64;
    if n < qn - 1 {
        return Ok(DensePoly::zero(p));
    }
    // ring buffer: slot k % q holds g_k for the last q indices
    let mut window: Vec<Vec<u32>> = vec![Vec::new(); q as usize];
    window[(qn - 1) as usize] = vec![p - 1];
    for k in qn..=n {
        let older = &window[(k % qn) as usize];
        let newer = &window[((k + 1) % qn) as usize];
        let next = add_shifted(p, newer, older);
        window[(k % qn) as usize] = next;
    }
    Ok(DensePoly::new(
        p,
        std::mem::take(&mut window[(n % qn) as usize]),
    ))
}

/// Elements `y` of the field with `y^q = y`, in encoding order.
pub fn subfield_elements<F: FieldArith>(field: &F, q: u32) -> Vec<F::Elem> {
    field
        .elements()
        .into_iter()
        .filter(|&y| field.pow_u64(y, q as u64) == y)
        .collect()
}

/// `Σ_{c ∈ subfield} (x + c)^n`.
pub fn gnq_eval_functional<F: FieldArith>(
    field: &F,
    subfield: &[F::Elem],
    x: F::Elem,
    n: &BigUint,
) -> F::Elem {
    subfield
        .iter()
        .map(|&c| field.pow_big(field.add(x, c), n))
        .fold(field.zero(), |acc, v| field.add(acc, v))
}

/// `g_{n,q}(y)` without expanding coefficients: `g_n` is the linear
/// recurrence with characteristic polynomial `λ^q - λ - y`, so
/// `g_n(y) = -[λ^(q-1)] (λ^n mod (λ^q - λ - y))`.
pub fn gnq_eval_at<F: FieldArith>(field: &F, q: u32, y: F::Elem, n: &BigUint) -> F::Elem {
    let q = q as usize;
    let mulmod = |lhs: &[F::Elem], rhs: &[F::Elem]| -> Vec<F::Elem> {
        let mut prod = vec![field.zero(); 2 * q - 1];
        for (i, &u) in lhs.iter().enumerate() {
            if field.is_zero(u) {
                continue;
            }
            for (j, &v) in rhs.iter().enumerate() {
                prod[i + j] = field.add(prod[i + j], field.mul(u, v));
            }
        }
        for k in (q..2 * q - 1).rev() {
            let c = prod[k];
            if field.is_zero(c) {
                continue;
            }
            prod[k - q + 1] = field.add(prod[k - q + 1], c);
            prod[k - q] = field.add(prod[k - q], field.mul(c, y));
        }
        prod.truncate(q);
        prod
    };
    let mut acc = vec![field.zero(); q];
    acc[0] = field.one();
    let mut base = vec![field.zero(); q];
    if q == 1 {
        unreachable!("q is a prime power");
    }
    base[1] = field.one();
    for bit in (0..n.bits()).rev() {
        acc = mulmod(&acc, &acc);
        if n.bit(bit) {
            acc = mulmod(&acc, &base);
        }
    }
    field.neg(acc[q - 1])
}

/// `q^α - q^β - 1`.
pub fn exponent_n(q: u32, alpha: u32, beta: u32) -> BigUint {
    let q = BigUint::from(q);
    q.pow(alpha) - q.pow(beta) - BigUint::from(1u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictSource {
    BruteForce,
    TheoremC,
    TheoremD,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesirabilityRecord {
    pub n: BigUint,
    pub e: u32,
    pub q: u32,
    pub verdict: bool,
    pub source: VerdictSource,
    /// Encodings of the first colliding pair in F_{q^e}.
    pub witness: Option<(u64, u64)>,
}

/// Brute-force test of whether `g_{n,q}` permutes F_{q^e}, `q = p^m`.
pub fn is_desirable(p: u32, m: u32, n: &BigUint, e: u32) -> Result<DesirabilityRecord, GnqError> {
    let field = FieldCtx::new(p, m * e)?;
    is_desirable_in(&field, p.pow(m), n, e)
}

/// As [`is_desirable`] over an already built F_{q^e}.
pub fn is_desirable_in(
    field: &FieldCtx,
    q: u32,
    n: &BigUint,
    e: u32,
) -> Result<DesirabilityRecord, GnqError> {
    let order = field.q() as usize;
    let mut preimage = vec![u32::MAX; order];
    let mut witness = None;
    for y in field.iter() {
        let img = gnq_eval_at(field, q, y, n).enc() as usize;
        if preimage[img] != u32::MAX {
            witness = Some((preimage[img] as u64, y.enc() as u64));
            break;
        }
        preimage[img] = y.enc();
    }
    Ok(DesirabilityRecord {
        n: n.clone(),
        e,
        q,
        verdict: witness.is_none(),
        source: VerdictSource::BruteForce,
        witness,
    })
}

/// `α - β = a0 + 2 a1` with `a0 ∈ {0, 1}`, and `β = 1 + 2 b1` for odd `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AlphaBetaDecomp {
    pub alpha: u32,
    pub beta: u32,
    pub a0: u32,
    pub a1: u32,
    pub b1: Option<u32>,
}

impl AlphaBetaDecomp {
    pub fn new(alpha: u32, beta: u32, limit: u32) -> Result<Self, GnqError> {
        if beta >= alpha || alpha >= limit {
            return Err(GnqError::RangeViolation { alpha, beta, limit });
        }
        let diff = alpha - beta;
        let b1 = (beta % 2 == 1).then(|| (beta - 1) / 2);
        Ok(AlphaBetaDecomp {
            alpha,
            beta,
            a0: diff % 2,
            a1: diff / 2,
            b1,
        })
    }
}

/// Which coefficient fills the middle slot of `a0 + 2·_ + b1 ≡ 0 (mod p)`
/// in the fourth family's second condition. The printed condition names a
/// coefficient that is never defined; `Zero` treats it as absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MiddleTerm {
    #[default]
    HalfDifference,
    Zero,
}

impl MiddleTerm {
    pub const ALL: [MiddleTerm; 2] = [MiddleTerm::HalfDifference, MiddleTerm::Zero];

    pub fn name(self) -> &'static str {
        match self {
            MiddleTerm::HalfDifference => "half-difference",
            MiddleTerm::Zero => "zero",
        }
    }
}

impl fmt::Display for MiddleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MiddleTerm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MiddleTerm::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown middle-term reading {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DesirableClause {
    #[serde(rename = "C(i)")]
    CI,
    #[serde(rename = "C(ii)")]
    CII,
    #[serde(rename = "D(i)")]
    DI,
    #[serde(rename = "D(ii)")]
    DII,
    #[serde(rename = "D(iii)")]
    DIII,
    #[serde(rename = "D(iv.1)")]
    DIV1,
    #[serde(rename = "D(iv.2)")]
    DIV2,
    #[serde(rename = "D(iv.3)")]
    DIV3,
    #[serde(rename = "D(iv.4)")]
    DIV4,
}

impl fmt::Display for DesirableClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DesirableClause::CI => "C(i)",
            DesirableClause::CII => "C(ii)",
            DesirableClause::DI => "D(i)",
            DesirableClause::DII => "D(ii)",
            DesirableClause::DIII => "D(iii)",
            DesirableClause::DIV1 => "D(iv.1)",
            DesirableClause::DIV2 => "D(iv.2)",
            DesirableClause::DIV3 => "D(iv.3)",
            DesirableClause::DIV4 => "D(iv.4)",
        };
        f.write_str(s)
    }
}

/// Even q, `0 <= β < α < 4`.
pub fn theorem_c_clauses(q: u32, alpha: u32, beta: u32) -> Result<Vec<DesirableClause>, GnqError> {
    if q % 2 == 1 {
        return Err(GnqError::OddQ);
    }
    AlphaBetaDecomp::new(alpha, beta, 4)?;
    let mut out = Vec::new();
    if q % 3 == 1 && matches!((beta, alpha), (0, 2) | (1, 2) | (1, 3)) {
        out.push(DesirableClause::CI);
    }
    if q == 2 && (beta, alpha) == (0, 3) {
        out.push(DesirableClause::CII);
    }
    Ok(out)
}

pub fn theorem_c_predicate(q: u32, alpha: u32, beta: u32) -> Result<bool, GnqError> {
    Ok(!theorem_c_clauses(q, alpha, beta)?.is_empty())
}

fn divisible(value: i64, p: u32) -> bool {
    value.rem_euclid(p as i64) == 0
}

/// Odd q, `0 <= β < α < 2p`. Every clause is evaluated; the result lists
/// all that hold.
pub fn theorem_d_clauses(
    f: &FieldCtx,
    alpha: u32,
    beta: u32,
    middle: MiddleTerm,
) -> Result<Vec<DesirableClause>, GnqError> {
    if !f.is_odd() {
        return Err(GnqError::EvenQ);
    }
    let p = f.p();
    let q = f.q();
    let d = AlphaBetaDecomp::new(alpha, beta, 2 * p)?;
    let mut out = Vec::new();
    if q % 3 == 1 && (beta, alpha) == (0, 2) {
        out.push(DesirableClause::DI);
    }
    if beta > 0 && beta.is_multiple_of(2) && alpha.is_multiple_of(2) {
        out.push(DesirableClause::DII);
    }
    if beta == p {
        let i = alpha - p;
        let sign = if i.is_multiple_of(2) { 1 } else { -1 };
        if 0 < i && i < p && !divisible(2 * i as i64 - sign, p) {
            out.push(DesirableClause::DIII);
        }
    }
    if let (Some(b1), true) = (d.b1, beta != p) {
        let (a0, a1, b1) = (d.a0 as i64, d.a1 as i64, b1 as i64);
        let quad = (a1 + b1) * (2 * a1 + b1) + a0 * (a1 - 2 * a1 * b1 - b1 * b1);
        let lin =
            1 + 2 * b1 + 2 * a1 * a1 + a1 * b1 + a0 * (-1 - 2 * b1 + b1 * b1 + a1 * (3 + 2 * b1));
        if f.is_nonzero_square(f.embed_int(quad))? && divisible(lin, p) {
            out.push(DesirableClause::DIV1);
        }
        let middle_coeff = match middle {
            MiddleTerm::HalfDifference => a1,
            MiddleTerm::Zero => 0,
        };
        let disc =
            (1 + b1).pow(2) - 4 * a1 * a1 - a0 * (5 + 10 * b1 + 4 * b1 * b1 + 8 * a1 * (1 + b1));
        if divisible(a0 + 2 * middle_coeff + b1, p) && divisible(disc, p) {
            out.push(DesirableClause::DIV2);
        }
        if a0 == 1 && b1 == 0 && divisible(4 * a1 + 3, p) && q % 6 == 5 {
            out.push(DesirableClause::DIV3);
        }
        if a0 == 1 && a1 == 0 && b1 == 0 && matches!(q % 6, 1 | 3) {
            out.push(DesirableClause::DIV4);
        }
    }
    Ok(out)
}

pub fn theorem_d_predicate(
    f: &FieldCtx,
    alpha: u32,
    beta: u32,
    middle: MiddleTerm,
) -> Result<bool, GnqError> {
    Ok(!theorem_d_clauses(f, alpha, beta, middle)?.is_empty())
}

/// The older parity-split form for `β = p`, `α = p + j`: for `j = 2i` the
/// triple is desirable iff `4i ≢ 1`, for `j = 2i - 1` iff `4i ≢ 3 (mod p)`,
/// `0 < i <= (p-1)/2`.
pub fn beta_p_parity_split(p: u32, j: u32) -> Option<bool> {
    if j == 0 || j >= p {
        return None;
    }
    let i = j.div_ceil(2);
    let forbidden = if j.is_multiple_of(2) { 1 } else { 3 };
    Some(!divisible(4 * i as i64 - forbidden, p))
}

/// Coefficients making `g_{n,q} = A φ + B φ^q + C φ^(2q-1)` on F_{q^2},
/// with `φ(x) = (b1 + 1) y^q + b1 y`, `y = 1/x`, `φ(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChangeOfVariable {
    pub alpha: u32,
    pub beta: u32,
    pub a: FqElem,
    pub b: FqElem,
    pub c: FqElem,
    pub b1: u32,
}

impl ChangeOfVariable {
    pub fn phi(&self, ext: &QuadExtCtx, x: Fq2Elem) -> Fq2Elem {
        let Ok(y) = ext.inv(x) else {
            return Fq2Elem::ZERO;
        };
        let f = ext.base();
        let b1 = f.embed_int(self.b1 as i64);
        ext.add(
            ext.scale(f.add(b1, f.one()), ext.frobenius(y)),
            ext.scale(b1, y),
        )
    }

    pub fn params(&self) -> TrinomialParams {
        TrinomialParams {
            a: self.a,
            b: self.b,
            c: self.c,
        }
    }
}

pub fn lemma61_transform(
    f: &FieldCtx,
    alpha: u32,
    beta: u32,
) -> Result<ChangeOfVariable, GnqError> {
    if !f.is_odd() {
        return Err(GnqError::EvenQ);
    }
    if f.q() <= 2 {
        return Err(GnqError::PreconditionViolated("q > 2"));
    }
    let p = f.p();
    if beta == 0 {
        return Err(GnqError::PreconditionViolated("beta > 0"));
    }
    let d = AlphaBetaDecomp::new(alpha, beta, 2 * p)?;
    let Some(b1) = d.b1 else {
        return Err(GnqError::PreconditionViolated("odd beta"));
    };
    if beta == p {
        return Err(GnqError::PreconditionViolated("beta != p"));
    }
    let k = |v: i64| f.embed_int(v);
    let inv_beta = f.inv(k(beta as i64))?;
    let (a0, a1, b1i) = (d.a0 as i64, d.a1 as i64, b1 as i64);
    let a = f.mul(inv_beta, k(-a0 * b1i + b1i + a1));
    let b = f.sub(k(a0), f.mul(inv_beta, k(b1i + 1)));
    let c = f.neg(f.mul(inv_beta, k(a0 * b1i + a0 + a1)));
    Ok(ChangeOfVariable {
        alpha,
        beta,
        a,
        b,
        c,
        b1,
    })
}

/// Points of F_{q^2} where the change-of-variable identity fails.
pub fn change_of_variable_failures(ext: &QuadExtCtx, cv: &ChangeOfVariable) -> Vec<Fq2Elem> {
    let n = exponent_n(ext.q(), cv.alpha, cv.beta);
    let params = cv.params();
    ext.iter()
        .filter(|&x| {
            gnq_eval_at(ext, ext.q(), x, &n) != eval_trinomial(ext, &params, cv.phi(ext, x))
        })
        .collect()
}

/// One row of the `(α, β)` classification table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationRow {
    pub q: u32,
    pub alpha: u32,
    pub beta: u32,
    pub n: String,
    pub clauses: Vec<DesirableClause>,
    pub predicate: bool,
    pub bruteforce: bool,
}

impl ClassificationRow {
    pub fn agree(&self) -> bool {
        self.predicate == self.bruteforce
    }
}

/// Exclusive upper limit on `α`: 4 for even q, `2p` for odd q.
pub fn alpha_limit(base: &FieldCtx) -> u32 {
    if base.is_odd() {
        2 * base.p()
    } else {
        4
    }
}

/// Criterion against brute force over F_{q^2} (`big` must be the flat field
/// of order `q^2`).
pub fn classify_pair(
    base: &FieldCtx,
    big: &FieldCtx,
    alpha: u32,
    beta: u32,
    middle: MiddleTerm,
) -> Result<ClassificationRow, GnqError> {
    let q = base.q();
    let clauses = if base.is_odd() {
        theorem_d_clauses(base, alpha, beta, middle)?
    } else {
        theorem_c_clauses(q, alpha, beta)?
    };
    let n = exponent_n(q, alpha, beta);
    let record = is_desirable_in(big, q, &n, 2)?;
    Ok(ClassificationRow {
        q,
        alpha,
        beta,
        n: n.to_string(),
        predicate: !clauses.is_empty(),
        clauses,
        bruteforce: record.verdict,
    })
}

/// All `(α, β)` with `0 <= β < α < limit`, sorted by `(α, β)`.
pub fn classification_pairs(limit: u32) -> Vec<(u32, u32)> {
    (1..limit)
        .flat_map(|alpha| (0..alpha).map(move |beta| (alpha, beta)))
        .collect()
}
