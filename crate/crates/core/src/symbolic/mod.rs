//! Exact multivariate polynomials over Z (or F_2) with a single quadratic
//! rewrite rule, and a catalog of polynomial identities behind the
//! resolvent-cubic arguments, each checked symbolically and pointwise.

mod mpoly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldCtx, FqElem, GfError};
use crate::trinomial::{build_resolvent, cubic_discriminant, factored_discriminant};

pub use mpoly::{Coeffs, MPoly, Relation, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolicError {
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// `18 c2 c1 c0 - 4 c2^3 c0 + c2^2 c1^2 - 4 c1^3 - 27 c0^2` for the monic
/// cubic `s^3 + c2 s^2 + c1 s + c0`.
pub fn cubic_discriminant_sym(c2: &MPoly, c1: &MPoly, c0: &MPoly) -> MPoly {
    let t1 = (c2 * c1 * c0).scale(18);
    let t2 = (&c2.pow(3) * c0).scale(-4);
    let t3 = &c2.pow(2) * &c1.pow(2);
    let t4 = c1.pow(3).scale(-4);
    let t5 = c0.pow(2).scale(-27);
    t1 + t2 + t3 + t4 + t5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// `(a+b+1)(a-b+1) = (a+1)^2 - b^2`, and `= 1 - a` under `b^2 = a^2 + 3a`.
    ProductRelation,
    /// Discriminant of the odd resolvent factors as `(a-1)^2 σ(σ-4) h(σ)`,
    /// with `a`, `b` independent.
    DiscriminantFactorization,
    /// `h(σ)` collapses to a square multiple under the relation.
    SquareFactor,
    /// The fully factored discriminant under the relation.
    ReducedDiscriminant,
    /// At the exceptional `σ` the resolvent is a perfect cube; its
    /// derivative has zero discriminant.
    DerivativeDiscriminant,
    /// The trace-argument decomposition for even q under `b^2 = a^2 + a`.
    EvenResolvent,
    /// The quadratic with roots `r1^2 r2 + r2^2 r3 + r3^2 r1` and its
    /// conjugate, sharing the cubic's discriminant.
    ConradResolvent,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::ProductRelation,
        Identity::DiscriminantFactorization,
        Identity::SquareFactor,
        Identity::ReducedDiscriminant,
        Identity::DerivativeDiscriminant,
        Identity::EvenResolvent,
        Identity::ConradResolvent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::ProductRelation => "product-relation",
            Identity::DiscriminantFactorization => "discriminant-factorization",
            Identity::SquareFactor => "square-factor",
            Identity::ReducedDiscriminant => "reduced-discriminant",
            Identity::DerivativeDiscriminant => "derivative-discriminant",
            Identity::EvenResolvent => "even-resolvent",
            Identity::ConradResolvent => "conrad-resolvent",
        }
    }

    /// Whether the pointwise check runs over even-characteristic fields.
    pub fn wants_even_q(self) -> bool {
        self == Identity::EvenResolvent
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Required checks decide the verdict; diagnostic checks only inform it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Required,
    Diagnostic,
}

/// One `lhs - rhs` difference; it passes when identically zero.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub label: &'static str,
    pub kind: CheckKind,
    pub difference: MPoly,
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub id: Identity,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.kind == CheckKind::Required)
            .all(|c| c.difference.is_zero())
    }
}

struct Vars {
    ring: Arc<Ring>,
}

impl Vars {
    fn new(names: &[&str], coeffs: Coeffs) -> Self {
        Vars {
            ring: Ring::new(names, coeffs),
        }
    }

    fn v(&self, name: &str) -> MPoly {
        MPoly::var(&self.ring, name).expect("catalog variable")
    }

    fn k(&self, c: i64) -> MPoly {
        MPoly::constant(&self.ring, c)
    }
}

/// Coefficients `(c2, c1, c0)` of the odd-q resolvent in `a`, `b`, `sigma`.
fn odd_resolvent(x: &Vars) -> (MPoly, MPoly, MPoly) {
    let (a, b, sigma) = (x.v("a"), x.v("b"), x.v("sigma"));
    let c2 = -(&a * &sigma) + a.scale(2) + b.scale(2) - x.k(6);
    let c1 = (a.scale(4) - &b - &a * &b) * &sigma + (&a + &b - x.k(3)).pow(2);
    let c0 = -((&a - &b + x.k(1)).pow(2) * &sigma);
    (c2, c1, c0)
}

/// Constant term of `h(σ)`: the printed `(a+b+1)(a+b-3)` or the
/// `(a+b+1)(a+b-3)^3` that the discriminant actually requires.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum HConstant {
    Printed,
    Cubed,
}

/// `h(σ) = a^2(b^2-4a)σ^2 - 2(ab(a+b)^2 - 8a^3 - 6a^2 b - 2b^3 + 9ab)σ + (a+b+1)(a+b-3)^e`.
fn h_sigma(x: &Vars, constant: HConstant) -> MPoly {
    let (a, b, sigma) = (x.v("a"), x.v("b"), x.v("sigma"));
    let lead = a.pow(2) * (b.pow(2) - a.scale(4)) * sigma.pow(2);
    let mid = &a * &b * (&a + &b).pow(2)
        - a.pow(3).scale(8)
        - (a.pow(2) * &b).scale(6)
        - b.pow(3).scale(2)
        + (&a * &b).scale(9);
    let power = match constant {
        HConstant::Printed => 1,
        HConstant::Cubed => 3,
    };
    let tail = (&a + &b + x.k(1)) * (&a + &b - x.k(3)).pow(power);
    lead - (mid * &sigma).scale(2) + tail
}

/// `2a^2 + 2ab - 3b`.
fn exceptional_numerator(x: &Vars) -> MPoly {
    let (a, b) = (x.v("a"), x.v("b"));
    a.pow(2).scale(2) + (&a * &b).scale(2) - b.scale(3)
}

fn check(label: &'static str, difference: MPoly) -> IdentityCheck {
    IdentityCheck {
        label,
        kind: CheckKind::Required,
        difference,
    }
}

fn diagnostic(label: &'static str, difference: MPoly) -> IdentityCheck {
    IdentityCheck {
        label,
        kind: CheckKind::Diagnostic,
        difference,
    }
}

pub fn verify_identity(id: Identity) -> IdentityReport {
    let checks = match id {
        Identity::ProductRelation => {
            let x = Vars::new(&["a", "b"], Coeffs::Integers);
            let (a, b) = (x.v("a"), x.v("b"));
            let rel = Relation::odd(&x.ring).expect("a, b present");
            let lhs = (&a + &b + x.k(1)) * (&a - &b + x.k(1));
            vec![
                check(
                    "difference of squares",
                    &lhs - ((&a + x.k(1)).pow(2) - b.pow(2)),
                ),
                check("under relation", rel.reduce(&(&lhs - (x.k(1) - &a)))),
            ]
        }
        Identity::DiscriminantFactorization => {
            let x = Vars::new(&["a", "b", "sigma"], Coeffs::Integers);
            let (a, sigma) = (x.v("a"), x.v("sigma"));
            let (c2, c1, c0) = odd_resolvent(&x);
            let disc = cubic_discriminant_sym(&c2, &c1, &c0);
            let prefix = (&a - x.k(1)).pow(2) * &sigma * (&sigma - x.k(4));
            vec![
                check(
                    "no relation",
                    &disc - &prefix * h_sigma(&x, HConstant::Printed),
                ),
                diagnostic(
                    "no relation, cubed constant term",
                    &disc - &prefix * h_sigma(&x, HConstant::Cubed),
                ),
            ]
        }
        Identity::SquareFactor => {
            let x = Vars::new(&["a", "b", "sigma"], Coeffs::Integers);
            let (a, sigma) = (x.v("a"), x.v("sigma"));
            let rel = Relation::odd(&x.ring).expect("a, b present");
            let shifted = a.pow(2) * &sigma - exceptional_numerator(&x);
            // a * h = (a - 1)(a^2 σ - N)^2
            let square = (&a - x.k(1)) * shifted.pow(2);
            let printed = &a * h_sigma(&x, HConstant::Printed) - &square;
            let cubed = &a * h_sigma(&x, HConstant::Cubed) - &square;
            vec![
                check("cleared by a", rel.reduce(&printed)),
                diagnostic("cleared by a, cubed constant term", rel.reduce(&cubed)),
            ]
        }
        Identity::ReducedDiscriminant => {
            let x = Vars::new(&["a", "b", "sigma"], Coeffs::Integers);
            let (a, sigma) = (x.v("a"), x.v("sigma"));
            let rel = Relation::odd(&x.ring).expect("a, b present");
            let (c2, c1, c0) = odd_resolvent(&x);
            let disc = cubic_discriminant_sym(&c2, &c1, &c0);
            let shifted = a.pow(2) * &sigma - exceptional_numerator(&x);
            let rhs = (&a - x.k(1)).pow(3) * &sigma * (&sigma - x.k(4)) * shifted.pow(2);
            vec![check("cleared by a", rel.reduce(&(&a * disc - rhs)))]
        }
        Identity::DerivativeDiscriminant => derivative_checks(),
        Identity::EvenResolvent => even_resolvent_checks(),
        Identity::ConradResolvent => conrad_checks(),
    };
    IdentityReport { id, checks }
}

fn derivative_checks() -> Vec<IdentityCheck> {
    let x = Vars::new(&["a", "b", "sigma", "s"], Coeffs::Integers);
    let (a, b, s) = (x.v("a"), x.v("b"), x.v("s"));
    let rel = Relation::odd(&x.ring).expect("a, b present");
    let sig = x.ring.index_of("sigma").expect("sigma present");
    let n = exceptional_numerator(&x);
    let (c2, c1, c0) = odd_resolvent(&x);
    // a^2 c at σ = N / a^2, using that each coefficient is linear in σ
    let at_exceptional =
        |c: &MPoly| a.pow(2) * c.coefficient_of(sig, 0) + &n * c.coefficient_of(sig, 1);
    let cubic = a.pow(2) * s.pow(3)
        + at_exceptional(&c2) * s.pow(2)
        + at_exceptional(&c1) * &s
        + at_exceptional(&c0);
    let b_minus_2a = &b - a.scale(2);
    let stated = a.pow(2) * s.pow(3)
        + (&a * &b_minus_2a).scale(3) * s.pow(2)
        + (&a * (a.scale(5) - b.scale(4) + x.k(3))).scale(3) * &s
        + (a.pow(2).scale(-14) + (&a * &b).scale(13) - a.scale(18) + b.scale(3));
    // a^2 D(g') = (2(b - 2a))^2 - 4a(5a - 4b + 3)
    let deriv_disc =
        b_minus_2a.scale(2).pow(2) - (&a * (a.scale(5) - b.scale(4) + x.k(3))).scale(4);
    let cube = (&a * &s + &b_minus_2a).pow(3);
    vec![
        check(
            "cubic at exceptional sigma",
            rel.reduce(&(&cubic - &stated)),
        ),
        check("derivative discriminant", rel.reduce(&deriv_disc)),
        check("perfect cube", rel.reduce(&(&a * &cubic - cube))),
    ]
}

fn even_resolvent_checks() -> Vec<IdentityCheck> {
    let x = Vars::new(&["a", "b", "u"], Coeffs::ModTwo);
    let (a, b, u) = (x.v("a"), x.v("b"), x.v("u"));
    let rel = Relation::even(&x.ring).expect("a, b present");
    let a1 = &a + x.k(1);
    // A = b + u, B = a/(a+1), C = u/(a+1)
    let big_a = &b + &u;
    let lin = &a1 * &u + &a * &b;
    let num = a1.pow(2) * big_a.pow(3) * &u + a.pow(3) + &a1 * u.pow(2);
    let second = &b * &u + a.pow(2);
    // (a+1)^3 (A^3 C + B^3 + C^2) and (a+1)(AB + C)
    let cubic_part = big_a.pow(3) * &u * a1.pow(2) + a.pow(3) + u.pow(2) * &a1;
    let linear_part = &big_a * &a + &u;
    // both sides of the decomposition times (a+1)^2 ((a+1)u + ab)^2 (bu + a^2)^2
    let lhs = &num * &a1 * second.pow(2);
    let p2q2 = lin.pow(2) * second.pow(2);
    let rhs = u.pow(2) * a1.pow(2) * &p2q2
        + &a1 * &p2q2
        + &b * &u * &a1 * &p2q2
        + b.pow(2) * u.pow(2) * &p2q2
        + a.pow(2) * &a1 * lin.pow(2) * &second
        + a.pow(4) * lin.pow(2);
    vec![
        check("cubic coefficient combination", &cubic_part - &num),
        check("linear coefficient combination", &linear_part - &lin),
        check("trace decomposition", rel.reduce(&(lhs - rhs))),
    ]
}

fn conrad_checks() -> Vec<IdentityCheck> {
    let x = Vars::new(&["r1", "r2", "r3"], Coeffs::Integers);
    let (r1, r2, r3) = (x.v("r1"), x.v("r2"), x.v("r3"));
    let big_a = -(&r1 + &r2 + &r3);
    let big_b = &r1 * &r2 + &r1 * &r3 + &r2 * &r3;
    let big_c = -(&r1 * &r2 * &r3);
    let p = r1.pow(2) * &r2 + r2.pow(2) * &r3 + r3.pow(2) * &r1;
    let q = r2.pow(2) * &r1 + r1.pow(2) * &r3 + r3.pow(2) * &r2;
    let lin = &big_a * &big_b - big_c.scale(3);
    let constant = big_a.pow(3) * &big_c + big_b.pow(3) + big_c.pow(2).scale(9)
        - (&big_a * &big_b * &big_c).scale(6);
    let disc = cubic_discriminant_sym(&big_a, &big_b, &big_c);
    let vandermonde = ((&r1 - &r2) * (&r1 - &r3) * (&r2 - &r3)).pow(2);
    vec![
        check("linear coefficient", -(&p + &q) - lin),
        check("constant coefficient", &p * &q - constant),
        check("shared discriminant", (&p - &q).pow(2) - &disc),
        check("discriminant as root differences", disc - vandermonde),
    ]
}

/// Outcome of evaluating an identity's field transcription pointwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShadowReport {
    pub id: Identity,
    pub q: u32,
    pub points: usize,
    pub failures: usize,
}

/// Pointwise check of the identity, written directly in field arithmetic
/// (and, where available, against the resolvent code in `trinomial`).
pub fn numeric_shadow(id: Identity, f: &FieldCtx) -> Result<ShadowReport, SymbolicError> {
    if id.wants_even_q() == f.is_odd() {
        return Err(if f.is_odd() {
            GfError::OddCharacteristic
        } else {
            GfError::EvenCharacteristic
        }
        .into());
    }
    let k = |v: i64| f.embed_int(v);
    let one = f.one();
    let mut points = 0usize;
    let mut failures = 0usize;
    let mut tally = |ok: bool| {
        points += 1;
        if !ok {
            failures += 1;
        }
    };
    let on_relation =
        |a: FqElem, b: FqElem, c: i64| f.square(b) == f.add(f.square(a), f.mul(k(c), a));
    let h = |a: FqElem, b: FqElem, s: FqElem| {
        let (a2, b2) = (f.square(a), f.square(b));
        let apb = f.add(a, b);
        let lead = f.mul(f.mul(a2, f.sub(b2, f.mul(k(4), a))), f.square(s));
        let mid = [
            f.mul(f.mul(a, b), f.square(apb)),
            f.mul(k(-8), f.mul(a2, a)),
            f.mul(k(-6), f.mul(a2, b)),
            f.mul(k(-2), f.mul(b2, b)),
            f.mul(k(9), f.mul(a, b)),
        ]
        .into_iter()
        .fold(FqElem::ZERO, |acc, t| f.add(acc, t));
        let tail = f.mul(f.add(apb, one), f.sub(apb, k(3)));
        f.add(f.sub(lead, f.mul(k(2), f.mul(mid, s))), tail)
    };
    match id {
        Identity::ProductRelation => {
            for a in f.iter() {
                for b in f.iter() {
                    let lhs = f.mul(f.add(f.add(a, b), one), f.add(f.sub(a, b), one));
                    tally(lhs == f.sub(f.square(f.add(a, one)), f.square(b)));
                    if on_relation(a, b, 3) {
                        tally(lhs == f.sub(one, a));
                    }
                }
            }
        }
        Identity::DiscriminantFactorization => {
            for a in f.iter() {
                for b in f.iter() {
                    for s in f.nonzero() {
                        let g = build_resolvent(f, a, b, s).expect("sigma nonzero");
                        let lhs = cubic_discriminant(f, g.c2, g.c1, g.c0);
                        let rhs = f.mul(
                            f.mul(f.square(f.sub(a, one)), f.mul(s, f.sub(s, k(4)))),
                            h(a, b, s),
                        );
                        tally(lhs == rhs);
                    }
                }
            }
        }
        Identity::SquareFactor | Identity::ReducedDiscriminant => {
            for a in f.nonzero() {
                for b in f.iter().filter(|&b| on_relation(a, b, 3)) {
                    for s in f.nonzero() {
                        let ok = if id == Identity::SquareFactor {
                            let a2 = f.square(a);
                            let n = f.sub(
                                f.add(f.mul(k(2), a2), f.mul(k(2), f.mul(a, b))),
                                f.mul(k(3), b),
                            );
                            let shift = f.sub(s, f.div(n, a2)?);
                            h(a, b, s) == f.mul(f.mul(f.mul(a2, a), f.sub(a, one)), f.square(shift))
                        } else {
                            let g = build_resolvent(f, a, b, s).expect("sigma nonzero");
                            cubic_discriminant(f, g.c2, g.c1, g.c0)
                                == factored_discriminant(f, a, b, s)?
                        };
                        tally(ok);
                    }
                }
            }
        }
        Identity::DerivativeDiscriminant => {
            for a in f.nonzero() {
                for b in f.iter().filter(|&b| on_relation(a, b, 3)) {
                    let a2 = f.square(a);
                    let n = f.sub(
                        f.add(f.mul(k(2), a2), f.mul(k(2), f.mul(a, b))),
                        f.mul(k(3), b),
                    );
                    let sigma = f.div(n, a2)?;
                    let shift = f.div(f.sub(b, f.mul(k(2), a)), a)?;
                    // derivative 3s^2 + 2 c2 s + c1 has discriminant 4 c2^2 - 12 c1
                    let c2 = f.mul(k(3), shift);
                    let c1 = f.div(
                        f.mul(k(3), f.add(f.sub(f.mul(k(5), a), f.mul(k(4), b)), k(3))),
                        a,
                    )?;
                    tally(f.sub(f.mul(k(4), f.square(c2)), f.mul(k(12), c1)).is_zero());
                    if sigma.is_zero() {
                        continue;
                    }
                    let g = build_resolvent(f, a, b, sigma).expect("sigma nonzero");
                    for s in f.iter() {
                        let cube = f.square(f.add(s, shift));
                        tally(g.eval(f, s) == f.mul(cube, f.add(s, shift)));
                    }
                }
            }
        }
        Identity::EvenResolvent => {
            for a in f.iter().filter(|&a| a != one) {
                let a1 = f.add(a, one);
                for b in f.iter().filter(|&b| on_relation(a, b, 1)) {
                    for u in f.iter() {
                        let lin = f.add(f.mul(a1, u), f.mul(a, b));
                        let second = f.add(f.mul(b, u), f.square(a));
                        if lin.is_zero() || second.is_zero() {
                            continue;
                        }
                        // A = b + u, B = a/(a+1), C = u/(a+1)
                        let big_a = f.add(b, u);
                        let big_b = f.div(a, a1)?;
                        let big_c = f.div(u, a1)?;
                        let top = f.add(
                            f.add(
                                f.mul(f.mul(f.square(big_a), big_a), big_c),
                                f.mul(f.square(big_b), big_b),
                            ),
                            f.square(big_c),
                        );
                        let lhs = f.div(top, f.square(f.add(f.mul(big_a, big_b), big_c)))?;
                        let bu = f.div(f.mul(b, u), a1)?;
                        let last = f.div(f.square(a), f.mul(a1, second))?;
                        let rhs = [
                            f.square(u),
                            f.inv(a1)?,
                            bu,
                            f.square(bu),
                            last,
                            f.square(last),
                        ]
                        .into_iter()
                        .fold(FqElem::ZERO, |acc, t| f.add(acc, t));
                        tally(lhs == rhs);
                    }
                }
            }
        }
        Identity::ConradResolvent => {
            for r1 in f.iter() {
                for r2 in f.iter() {
                    for r3 in f.iter() {
                        let big_a = f.neg(f.add(f.add(r1, r2), r3));
                        let big_b = f.add(f.add(f.mul(r1, r2), f.mul(r1, r3)), f.mul(r2, r3));
                        let big_c = f.neg(f.mul(f.mul(r1, r2), r3));
                        let cyc = |x: FqElem, y: FqElem, z: FqElem| {
                            f.add(
                                f.add(f.mul(f.square(x), y), f.mul(f.square(y), z)),
                                f.mul(f.square(z), x),
                            )
                        };
                        let p = cyc(r1, r2, r3);
                        let q = cyc(r2, r1, r3);
                        let lin = f.sub(f.mul(big_a, big_b), f.mul(k(3), big_c));
                        let abc = f.mul(f.mul(big_a, big_b), big_c);
                        let constant = [
                            f.mul(f.mul(f.square(big_a), big_a), big_c),
                            f.mul(f.square(big_b), big_b),
                            f.mul(k(9), f.square(big_c)),
                            f.mul(k(-6), abc),
                        ]
                        .into_iter()
                        .fold(FqElem::ZERO, |acc, t| f.add(acc, t));
                        let disc = cubic_discriminant(f, big_a, big_b, big_c);
                        tally(f.neg(f.add(p, q)) == lin);
                        tally(f.mul(p, q) == constant);
                        tally(f.square(f.sub(p, q)) == disc);
                    }
                }
            }
        }
    }
    Ok(ShadowReport {
        id,
        q: f.q(),
        points,
        failures,
    })
}
