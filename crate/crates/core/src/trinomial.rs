//! The trinomials `f = a x + b x^q + c x^(2q-1)` over F_{q^2}.
//!
//! Brute-force permutation testing, the closed-form criteria for `c = 1`
//! (odd and even q), the projective set of all permuting triples, and the
//! trace/norm resolvent cubics used to show uniqueness of preimages.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{FieldCtx, Fq2Elem, FqElem, GfError, QuadExtCtx};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrinomialError {
    #[error("[0:0:0] is not a projective point")]
    ZeroTriple,
    #[error("norm must be nonzero")]
    ZeroNorm,
    #[error("sigma must be nonzero")]
    ZeroSigma,
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// The projective coefficient triple `[a : b : c]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrinomialParams {
    pub a: FqElem,
    pub b: FqElem,
    pub c: FqElem,
}

impl TrinomialParams {
    pub fn new(a: FqElem, b: FqElem, c: FqElem) -> Result<Self, TrinomialError> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(TrinomialError::ZeroTriple);
        }
        Ok(TrinomialParams { a, b, c })
    }

    /// `a x + b x^q + x^(2q-1)`.
    pub fn monic(a: FqElem, b: FqElem) -> Self {
        TrinomialParams {
            a,
            b,
            c: FqElem::ONE,
        }
    }

    /// Scales so that the last nonzero coordinate is 1.
    pub fn normalized(&self, f: &FieldCtx) -> Self {
        let lead = [self.c, self.b, self.a]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("constructed triples are nonzero");
        let s = f.inv(lead).expect("nonzero");
        TrinomialParams {
            a: f.mul(s, self.a),
            b: f.mul(s, self.b),
            c: f.mul(s, self.c),
        }
    }

    pub fn encodings(&self) -> [u32; 3] {
        [self.a.enc(), self.b.enc(), self.c.enc()]
    }
}

impl fmt::Display for TrinomialParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.a, self.b, self.c)
    }
}

/// Outcome of a brute-force permutation test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PpVerdict {
    pub is_pp: bool,
    /// First collision in encoding order: `x1 < x2` with `f(x1) = f(x2)`.
    pub witness: Option<(Fq2Elem, Fq2Elem)>,
}

/// Evaluates the trinomial; `f(0) = 0`, and `x^(2q-1)` is formed as
/// `x^q * x^q / x` for nonzero `x`.
pub fn eval_trinomial(ext: &QuadExtCtx, params: &TrinomialParams, x: Fq2Elem) -> Fq2Elem {
    if x.is_zero() {
        return Fq2Elem::ZERO;
    }
    let xq = ext.frobenius(x);
    let top = ext.mul(ext.mul(xq, xq), ext.inv(x).expect("nonzero"));
    combine(ext, params, x, xq, top)
}

#[inline]
fn combine(
    ext: &QuadExtCtx,
    p: &TrinomialParams,
    x: Fq2Elem,
    xq: Fq2Elem,
    top: Fq2Elem,
) -> Fq2Elem {
    ext.add(
        ext.add(ext.scale(p.a, x), ext.scale(p.b, xq)),
        ext.scale(p.c, top),
    )
}

/// The monomials `x`, `x^q`, `x^(2q-1)` tabulated over all of F_{q^2}, so that
/// sweeps over many coefficient triples only pay for the linear combination.
pub struct MonomialTable<'a> {
    ext: &'a QuadExtCtx,
    x: Vec<Fq2Elem>,
    xq: Vec<Fq2Elem>,
    top: Vec<Fq2Elem>,
}

impl<'a> MonomialTable<'a> {
    pub fn new(ext: &'a QuadExtCtx) -> Self {
        let x: Vec<Fq2Elem> = ext.iter().collect();
        let xq: Vec<Fq2Elem> = x.iter().map(|&v| ext.frobenius(v)).collect();
        let top = x
            .iter()
            .zip(&xq)
            .map(|(&v, &vq)| match ext.inv(v) {
                Ok(vi) => ext.mul(ext.mul(vq, vq), vi),
                Err(_) => Fq2Elem::ZERO,
            })
            .collect();
        MonomialTable { ext, x, xq, top }
    }

    pub fn ext(&self) -> &QuadExtCtx {
        self.ext
    }

    /// `f(x)` for the element with encoding `idx`.
    #[inline]
    pub fn eval_at(&self, params: &TrinomialParams, idx: usize) -> Fq2Elem {
        combine(self.ext, params, self.x[idx], self.xq[idx], self.top[idx])
    }

    pub fn verdict(&self, params: &TrinomialParams) -> PpVerdict {
        const UNSEEN: u32 = u32::MAX;
        let mut preimage = vec![UNSEEN; self.x.len()];
        for idx in 0..self.x.len() {
            let y = self.ext.encode(self.eval_at(params, idx)) as usize;
            if preimage[y] != UNSEEN {
                let first = self.x[preimage[y] as usize];
                return PpVerdict {
                    is_pp: false,
                    witness: Some((first, self.x[idx])),
                };
            }
            preimage[y] = idx as u32;
        }
        PpVerdict {
            is_pp: true,
            witness: None,
        }
    }
}

pub fn is_pp_bruteforce(ext: &QuadExtCtx, params: &TrinomialParams) -> PpVerdict {
    MonomialTable::new(ext).verdict(params)
}

/// The clause of the classification theorem that a monic trinomial meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Clause {
    #[serde(rename = "A(i)")]
    AI,
    #[serde(rename = "A(ii)")]
    AII,
    #[serde(rename = "A(iii)")]
    AIII,
    #[serde(rename = "A(iv)")]
    AIV,
    #[serde(rename = "B(i)")]
    BI,
    #[serde(rename = "B(ii)")]
    BII,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::AI => "A(i)",
            Clause::AII => "A(ii)",
            Clause::AIII => "A(iii)",
            Clause::AIV => "A(iv)",
            Clause::BI => "B(i)",
            Clause::BII => "B(ii)",
        };
        f.write_str(s)
    }
}

/// First clause (in order (i)..(iv)) of the odd-q criterion met by `(a, b)`,
/// for `a x + b x^q + x^(2q-1)`.
pub fn theorem_a_clause(f: &FieldCtx, a: FqElem, b: FqElem) -> Result<Option<Clause>, GfError> {
    if !f.is_odd() {
        return Err(GfError::EvenCharacteristic);
    }
    let one = f.one();
    let q = f.q();
    let b2 = f.square(b);

    // (i) a(a-1) a nonzero square and b^2 = a^2 + 3a
    let a_am1 = f.mul(a, f.sub(a, one));
    if f.is_nonzero_square(a_am1)? && b2 == f.add(f.square(a), f.mul(f.embed_int(3), a)) {
        return Ok(Some(Clause::AI));
    }
    // (ii) a = 1 and b^2 - 4 a nonzero square
    if a == one && f.is_nonzero_square(f.sub(b2, f.embed_int(4)))? {
        return Ok(Some(Clause::AII));
    }
    // (iii) a = 3, b = 0, q = -1 (mod 6)
    if a == f.embed_int(3) && b.is_zero() && q % 6 == 5 {
        return Ok(Some(Clause::AIII));
    }
    // (iv) a = b = 0, q = 1, 3 (mod 6)
    if a.is_zero() && b.is_zero() && matches!(q % 6, 1 | 3) {
        return Ok(Some(Clause::AIV));
    }
    Ok(None)
}

pub fn theorem_a_predicate(f: &FieldCtx, a: FqElem, b: FqElem) -> Result<bool, GfError> {
    Ok(theorem_a_clause(f, a, b)?.is_some())
}

/// First clause of the even-q criterion met by `(a, b)`.
pub fn theorem_b_clause(f: &FieldCtx, a: FqElem, b: FqElem) -> Result<Option<Clause>, GfError> {
    if f.is_odd() {
        return Err(GfError::OddCharacteristic);
    }
    if f.q() <= 2 {
        return Ok(None);
    }
    let one = f.one();
    if a != one {
        let a1 = f.add(a, one);
        let tr = f.abs_trace_half(f.inv(a1)?)?;
        if tr == 0 && f.square(b) == f.add(f.square(a), a) {
            return Ok(Some(Clause::BI));
        }
    } else if !b.is_zero() && f.abs_trace_half(f.inv(b)?)? == 0 {
        return Ok(Some(Clause::BII));
    }
    Ok(None)
}

pub fn theorem_b_predicate(f: &FieldCtx, a: FqElem, b: FqElem) -> Result<bool, GfError> {
    Ok(theorem_b_clause(f, a, b)?.is_some())
}

/// Dispatches to the criterion matching the characteristic.
pub fn criterion_clause(f: &FieldCtx, a: FqElem, b: FqElem) -> Option<Clause> {
    let r = if f.is_odd() {
        theorem_a_clause(f, a, b)
    } else {
        theorem_b_clause(f, a, b)
    };
    r.expect("dispatch matches the characteristic")
}

/// All points of PG(2, F_q), normalized (last nonzero coordinate 1), in the
/// order `[a:b:1]`, `[a:1:0]`, `[1:0:0]`.
pub fn projective_points(f: &FieldCtx) -> Vec<TrinomialParams> {
    let mut out = Vec::with_capacity((f.q() as usize).pow(2) + f.q() as usize + 1);
    for a in f.iter() {
        for b in f.iter() {
            out.push(TrinomialParams::monic(a, b));
        }
    }
    for a in f.iter() {
        out.push(TrinomialParams {
            a,
            b: FqElem::ONE,
            c: FqElem::ZERO,
        });
    }
    out.push(TrinomialParams {
        a: FqElem::ONE,
        b: FqElem::ZERO,
        c: FqElem::ZERO,
    });
    out
}

/// The set of normalized `[a:b:c]` for which the trinomial permutes F_{q^2}.
pub fn compute_x_set(ext: &QuadExtCtx) -> BTreeSet<TrinomialParams> {
    let table = MonomialTable::new(ext);
    projective_points(ext.base())
        .into_iter()
        .filter(|p| table.verdict(p).is_pp)
        .collect()
}

/// The even-q parametrization of the permuting set as a union of four
/// families indexed by `d`.
pub fn x_set_parametrized(f: &FieldCtx) -> Result<BTreeSet<TrinomialParams>, GfError> {
    if f.is_odd() {
        return Err(GfError::OddCharacteristic);
    }
    let one = f.one();
    let mut out = BTreeSet::new();
    let outside_f2 = f.iter().filter(|d| d.enc() > 1);
    for d in outside_f2 {
        let d2 = f.square(d);
        let d4 = f.square(d2);
        let fam1 = TrinomialParams {
            a: f.add(f.add(one, d2), d4),
            b: f.add(f.add(one, d), d2),
            c: f.add(d2, d4),
        };
        let dd = f.add(d, d2);
        let fam2 = TrinomialParams {
            a: dd,
            b: one,
            c: dd,
        };
        out.insert(fam1.normalized(f));
        out.insert(fam2.normalized(f));
    }
    for d in f.iter().filter(|&d| d != one) {
        out.insert(TrinomialParams {
            a: d,
            b: one,
            c: FqElem::ZERO,
        });
    }
    out.insert(TrinomialParams {
        a: one,
        b: FqElem::ZERO,
        c: FqElem::ZERO,
    });
    Ok(out)
}

/// Trace and norm of `f(x)` expressed through `t = T(x)` and `n = N(x)`:
/// returns `(tau, eta)` with
/// `tau = t^3/n + (a+b-3) t` and
/// `eta = a t^4/n + (ab-4a+b) t^2 + (a-b+1)^2 n`.
pub fn trace_norm_image(
    f: &FieldCtx,
    a: FqElem,
    b: FqElem,
    t: FqElem,
    n: FqElem,
) -> Result<(FqElem, FqElem), TrinomialError> {
    if !f.is_odd() {
        return Err(GfError::EvenCharacteristic.into());
    }
    let ninv = f.inv(n).map_err(|_| TrinomialError::ZeroNorm)?;
    let k = |v: i64| f.embed_int(v);
    let t2 = f.square(t);
    let t3 = f.mul(t2, t);
    let t4 = f.square(t2);
    let tau = f.add(f.mul(t3, ninv), f.mul(f.add(f.add(a, b), k(-3)), t));
    let ab = f.mul(a, b);
    let mid = f.add(f.sub(ab, f.mul(k(4), a)), b);
    let amb1 = f.add(f.sub(a, b), f.one());
    let eta = f.add(
        f.add(f.mul(a, f.mul(t4, ninv)), f.mul(mid, t2)),
        f.mul(f.square(amb1), n),
    );
    Ok((tau, eta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CharKind {
    Odd,
    Even,
}

/// Monic cubic `s^3 + c2 s^2 + c1 s + c0` in `s = t^2/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolventCubic {
    pub kind: CharKind,
    pub sigma: FqElem,
    pub c2: FqElem,
    pub c1: FqElem,
    pub c0: FqElem,
}

impl ResolventCubic {
    pub fn eval(&self, f: &FieldCtx, s: FqElem) -> FqElem {
        let acc = f.add(s, self.c2);
        let acc = f.add(f.mul(acc, s), self.c1);
        f.add(f.mul(acc, s), self.c0)
    }

    /// Roots in F_q by exhaustive evaluation.
    pub fn roots(&self, f: &FieldCtx) -> Vec<FqElem> {
        f.iter().filter(|&s| self.eval(f, s).is_zero()).collect()
    }
}

/// Odd q:
/// `s^3 + (-a sigma + 2a + 2b - 6) s^2 + ((4a - b - ab) sigma + (a+b-3)^2) s - (a-b+1)^2 sigma`.
/// Even q:
/// `s^3 + a sigma s^2 + (a+1)(b sigma + 1) s + (a+1) sigma`.
pub fn build_resolvent(
    f: &FieldCtx,
    a: FqElem,
    b: FqElem,
    sigma: FqElem,
) -> Result<ResolventCubic, TrinomialError> {
    if sigma.is_zero() {
        return Err(TrinomialError::ZeroSigma);
    }
    let k = |v: i64| f.embed_int(v);
    let one = f.one();
    let cubic = if f.is_odd() {
        let c2 = f.add(
            f.neg(f.mul(a, sigma)),
            f.add(f.add(f.mul(k(2), a), f.mul(k(2), b)), k(-6)),
        );
        let lin = f.sub(f.sub(f.mul(k(4), a), b), f.mul(a, b));
        let abm3 = f.add(f.add(a, b), k(-3));
        let c1 = f.add(f.mul(lin, sigma), f.square(abm3));
        let amb1 = f.add(f.sub(a, b), one);
        let c0 = f.neg(f.mul(f.square(amb1), sigma));
        ResolventCubic {
            kind: CharKind::Odd,
            sigma,
            c2,
            c1,
            c0,
        }
    } else {
        let a1 = f.add(a, one);
        ResolventCubic {
            kind: CharKind::Even,
            sigma,
            c2: f.mul(a, sigma),
            c1: f.mul(a1, f.add(f.mul(b, sigma), one)),
            c0: f.mul(a1, sigma),
        }
    };
    Ok(cubic)
}

/// `18 c2 c1 c0 - 4 c2^3 c0 + c2^2 c1^2 - 4 c1^3 - 27 c0^2`.
pub fn cubic_discriminant(f: &FieldCtx, c2: FqElem, c1: FqElem, c0: FqElem) -> FqElem {
    let k = |v: i64| f.embed_int(v);
    let c2sq = f.square(c2);
    let terms = [
        f.mul(k(18), f.mul(c2, f.mul(c1, c0))),
        f.mul(k(-4), f.mul(f.mul(c2sq, c2), c0)),
        f.mul(c2sq, f.square(c1)),
        f.mul(k(-4), f.mul(f.square(c1), c1)),
        f.mul(k(-27), f.square(c0)),
    ];
    terms.into_iter().fold(FqElem::ZERO, |acc, t| f.add(acc, t))
}

pub fn cubic_discriminant_value(f: &FieldCtx, cubic: &ResolventCubic) -> Result<FqElem, GfError> {
    if !f.is_odd() {
        return Err(GfError::EvenCharacteristic);
    }
    Ok(cubic_discriminant(f, cubic.c2, cubic.c1, cubic.c0))
}

/// `a^3 (a-1)^3 sigma (sigma - 4) (sigma - (2a^2 + 2ab - 3b)/a^2)^2`, the
/// factored discriminant valid when `b^2 = a^2 + 3a` and `a != 0`.
pub fn factored_discriminant(
    f: &FieldCtx,
    a: FqElem,
    b: FqElem,
    sigma: FqElem,
) -> Result<FqElem, GfError> {
    let k = |v: i64| f.embed_int(v);
    let a2 = f.square(a);
    let am1 = f.sub(a, f.one());
    let num = f.sub(
        f.add(f.mul(k(2), a2), f.mul(k(2), f.mul(a, b))),
        f.mul(k(3), b),
    );
    let shift = f.sub(sigma, f.div(num, a2)?);
    let cube = |x: FqElem| f.mul(f.square(x), x);
    Ok(f.mul(
        f.mul(cube(a), cube(am1)),
        f.mul(f.mul(sigma, f.sub(sigma, k(4))), f.square(shift)),
    ))
}
