//! Exhaustive verification sweeps. Each returns a serializable report whose
//! lists are sorted, so the JSON form does not depend on scheduling.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use trinoperm_core::gf::prime::prime_divisors;
use trinoperm_core::gnq::{self, ClassificationRow, MiddleTerm};
use trinoperm_core::hermite::{closed_form_endpoints, power_sum_report};
use trinoperm_core::lemma_sums::{lemma_closed, lemma_sum, LemmaError, LemmaSum};
use trinoperm_core::symbolic::{
    numeric_shadow, verify_identity, CheckKind, Identity, ShadowReport,
};
use trinoperm_core::trinomial::{
    compute_x_set, criterion_clause, x_set_parametrized, Clause, MonomialTable, TrinomialParams,
};
use trinoperm_core::{FieldCtx, QuadExtCtx};

use crate::artifacts::ModulusRecord;
use crate::error::CliError;

pub trait Verdict {
    fn passed(&self) -> bool;
}

impl<T: Verdict> Verdict for [T] {
    fn passed(&self) -> bool {
        self.iter().all(Verdict::passed)
    }
}

impl<T: Verdict> Verdict for Vec<T> {
    fn passed(&self) -> bool {
        self.as_slice().passed()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSelfTest {
    pub field: ModulusRecord,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl Verdict for FieldSelfTest {
    fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Inverses, Frobenius, generator order, and trace/norm landing in F_q.
pub fn field_self_test(ext: &QuadExtCtx) -> FieldSelfTest {
    let f = ext.base();
    let q = f.q() as u64;
    let mut checks = 0u64;
    let mut failures = Vec::new();
    let mut expect = |ok: bool, what: String| {
        checks += 1;
        if !ok {
            failures.push(what);
        }
    };
    for x in f.nonzero() {
        let inv = f.inv(x).map(|i| f.mul(x, i));
        expect(inv == Ok(f.one()), format!("inverse of {}", x.enc()));
        expect(f.pow(x, q) == x, format!("x^q of {}", x.enc()));
    }
    let g = f.generator();
    for r in prime_divisors(q - 1) {
        expect(
            f.pow(g, (q - 1) / r) != f.one(),
            format!("generator order divides (q-1)/{r}"),
        );
    }
    for x in ext.iter() {
        let xq = ext.frobenius(x);
        expect(
            xq == ext.pow(x, q),
            format!("frobenius of {}", ext.encode(x)),
        );
        expect(
            ext.embed(ext.trace_rel(x)) == ext.add(x, xq)
                && ext.embed(ext.norm_rel(x)) == ext.mul(x, xq),
            format!("trace/norm of {}", ext.encode(x)),
        );
    }
    FieldSelfTest {
        field: ModulusRecord::of(ext),
        checks,
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TrinomialMismatch {
    pub a: u32,
    pub b: u32,
    pub predicate: Option<Clause>,
    pub bruteforce: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrinomialSweep {
    pub field: ModulusRecord,
    pub pairs: u64,
    pub permutations: u64,
    pub mismatches: Vec<TrinomialMismatch>,
}

impl Verdict for TrinomialSweep {
    fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Classification criterion against brute force for every monic `(a, b)`.
pub fn trinomial_sweep(ext: &QuadExtCtx) -> TrinomialSweep {
    let f = ext.base();
    let table = MonomialTable::new(ext);
    let coeffs: Vec<_> = f.iter().collect();
    let per_a: Vec<(u64, Vec<TrinomialMismatch>)> = coeffs
        .par_iter()
        .map(|&a| {
            let mut hits = 0u64;
            let mut bad = Vec::new();
            for &b in &coeffs {
                let brute = table.verdict(&TrinomialParams::monic(a, b)).is_pp;
                let predicate = criterion_clause(f, a, b);
                hits += brute as u64;
                if brute != predicate.is_some() {
                    bad.push(TrinomialMismatch {
                        a: a.enc(),
                        b: b.enc(),
                        predicate,
                        bruteforce: brute,
                    });
                }
            }
            (hits, bad)
        })
        .collect();
    let permutations = per_a.iter().map(|(h, _)| h).sum();
    let mut mismatches: Vec<_> = per_a.into_iter().flat_map(|(_, m)| m).collect();
    mismatches.sort();
    TrinomialSweep {
        field: ModulusRecord::of(ext),
        pairs: (coeffs.len() * coeffs.len()) as u64,
        permutations,
        mismatches,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermutingSetCheck {
    pub field: ModulusRecord,
    pub size: usize,
    pub only_bruteforce: Vec<[u32; 3]>,
    pub only_families: Vec<[u32; 3]>,
}

impl Verdict for PermutingSetCheck {
    fn passed(&self) -> bool {
        self.only_bruteforce.is_empty() && self.only_families.is_empty()
    }
}

/// Exhaustive permuting set against the four-family union (even q).
pub fn permuting_set_check(ext: &QuadExtCtx) -> Result<PermutingSetCheck, CliError> {
    let brute = compute_x_set(ext);
    let families = x_set_parametrized(ext.base())?;
    let encode = |s: &std::collections::BTreeSet<TrinomialParams>,
                  t: &std::collections::BTreeSet<TrinomialParams>| {
        s.difference(t).map(|p| p.encodings()).collect()
    };
    Ok(PermutingSetCheck {
        field: ModulusRecord::of(ext),
        size: brute.len(),
        only_bruteforce: encode(&brute, &families),
        only_families: encode(&families, &brute),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HermiteMismatch {
    pub a: u32,
    pub b: u32,
    pub alpha: u32,
    pub beta: u32,
    pub direct: u64,
    pub expansion: u64,
    pub closed_form: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HermiteSweep {
    pub field: ModulusRecord,
    pub all_ab: bool,
    pub expansion_checks: u64,
    pub closed_form_checks: u64,
    pub mismatches: Vec<HermiteMismatch>,
}

impl Verdict for HermiteSweep {
    fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Power sums of `f^s`, `s = α + (q-1-α) q`, by direct summation, by the
/// binomial expansion, and by the closed forms where they apply. With
/// `all_ab` every `a != 0`, `b`, `α` is swept; otherwise only pairs admitting
/// closed forms, at `α <= 2`.
pub fn hermite_sweep(ext: &QuadExtCtx, all_ab: bool) -> Result<HermiteSweep, CliError> {
    let f = ext.base();
    let q = f.q();
    let pairs: Vec<_> = f
        .nonzero()
        .flat_map(|a| f.iter().map(move |b| (a, b)))
        .filter(|&(a, b)| all_ab || closed_form_endpoints(f, a, b).is_ok())
        .collect();
    let alphas = if all_ab { q } else { q.min(3) };
    let reports = pairs
        .par_iter()
        .flat_map_iter(|&(a, b)| (0..alphas).map(move |alpha| power_sum_report(ext, a, b, alpha)))
        .collect::<Result<Vec<_>, _>>()?;
    let closed_form_checks = reports.iter().filter(|r| r.closed_form.is_some()).count() as u64;
    let mut mismatches: Vec<_> = reports
        .iter()
        .filter(|r| !r.consistent(ext))
        .map(|r| HermiteMismatch {
            a: r.a.enc(),
            b: r.b.enc(),
            alpha: r.alpha,
            beta: r.beta,
            direct: ext.encode(r.direct),
            expansion: ext.encode(r.expansion),
            closed_form: r.closed_form.map(|c| c.enc()),
        })
        .collect();
    mismatches.sort();
    Ok(HermiteSweep {
        field: ModulusRecord::of(ext),
        all_ab,
        expansion_checks: reports.len() as u64,
        closed_form_checks,
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaTally {
    pub sum: LemmaSum,
    pub checked: u64,
    pub skipped: u64,
    pub mismatches: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaSweep {
    pub field: ModulusRecord,
    pub tallies: Vec<LemmaTally>,
}

impl Verdict for LemmaSweep {
    fn passed(&self) -> bool {
        self.tallies.iter().all(|t| t.mismatches.is_empty())
    }
}

/// Termwise value against closed form for every `z != 0` meeting each
/// sum's hypothesis.
pub fn lemma_sweep(ext: &QuadExtCtx) -> Result<LemmaSweep, CliError> {
    let f = ext.base();
    let mut tallies = Vec::new();
    for which in LemmaSum::ALL {
        let mut tally = LemmaTally {
            sum: which,
            checked: 0,
            skipped: 0,
            mismatches: Vec::new(),
        };
        for z in f.nonzero() {
            match lemma_closed(f, which, z) {
                Ok(closed) => {
                    tally.checked += 1;
                    if lemma_sum(f, which, z)? != closed {
                        tally.mismatches.push(z.enc());
                    }
                }
                Err(LemmaError::HypothesisViolated { .. }) => tally.skipped += 1,
                Err(e) => return Err(e.into()),
            }
        }
        tallies.push(tally);
    }
    Ok(LemmaSweep {
        field: ModulusRecord::of(ext),
        tallies,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GnqMismatch {
    pub n: u64,
    pub x: u64,
    pub route: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GnqConsistency {
    pub field: ModulusRecord,
    pub flat_modulus: u64,
    pub n_max: u64,
    pub evaluations: u64,
    pub mismatches: Vec<GnqMismatch>,
}

impl Verdict for GnqConsistency {
    fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `Σ_{c ∈ F_q} (x+c)^n` against the expanded `g_{n,q}` at `x^q - x`, and
/// the recurrence evaluator against the same, over every `x ∈ F_{q^2}`.
pub fn gnq_consistency(
    ext: &QuadExtCtx,
    flat: &FieldCtx,
    n_max: u64,
    coeff_bound: usize,
) -> Result<GnqConsistency, CliError> {
    let (p, q) = (flat.p(), ext.q());
    let subfield = gnq::subfield_elements(flat, q);
    let points: Vec<_> = flat.iter().collect();
    let per_n = (0..=n_max)
        .into_par_iter()
        .map(|n| -> Result<Vec<GnqMismatch>, CliError> {
            let poly = gnq::gnq_coeffs(n, q, p, coeff_bound)?;
            let big_n = BigUint::from(n);
            let mut bad = Vec::new();
            for &x in &points {
                let y = flat.sub(flat.pow(x, q as u64), x);
                let expanded = poly.eval(flat, y);
                let mut flag = |route| {
                    bad.push(GnqMismatch {
                        n,
                        x: x.enc() as u64,
                        route,
                    })
                };
                if gnq::gnq_eval_functional(flat, &subfield, x, &big_n) != expanded {
                    flag("functional");
                }
                if gnq::gnq_eval_at(flat, q, y, &big_n) != expanded {
                    flag("recurrence");
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut mismatches: Vec<_> = per_n.into_iter().flatten().collect();
    mismatches.sort();
    Ok(GnqConsistency {
        field: ModulusRecord::of(ext),
        flat_modulus: flat.modulus_encoding(),
        n_max,
        evaluations: (n_max + 1) * points.len() as u64,
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesirabilitySweep {
    pub field: ModulusRecord,
    pub flat_modulus: u64,
    /// Only meaningful in odd characteristic.
    pub middle_term: Option<MiddleTerm>,
    pub rows: Vec<ClassificationRow>,
}

impl DesirabilitySweep {
    pub fn mismatches(&self) -> impl Iterator<Item = &ClassificationRow> {
        self.rows.iter().filter(|r| !r.agree())
    }
}

impl Verdict for DesirabilitySweep {
    fn passed(&self) -> bool {
        self.mismatches().next().is_none()
    }
}

/// Desirability criterion against brute force over F_{q^2}, for every
/// `0 <= β < α < limit`.
pub fn desirability_sweep(
    ext: &QuadExtCtx,
    flat: &FieldCtx,
    limit: u32,
    middle: MiddleTerm,
) -> Result<DesirabilitySweep, CliError> {
    let base = ext.base();
    let rows = gnq::classification_pairs(limit)
        .into_par_iter()
        .map(|(alpha, beta)| gnq::classify_pair(base, flat, alpha, beta, middle))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DesirabilitySweep {
        field: ModulusRecord::of(ext),
        flat_modulus: flat.modulus_encoding(),
        middle_term: base.is_odd().then_some(middle),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubstitutionCase {
    pub alpha: u32,
    pub beta: u32,
    pub coefficients: [u32; 3],
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubstitutionSweep {
    pub field: ModulusRecord,
    pub points: u64,
    pub cases: Vec<SubstitutionCase>,
}

impl Verdict for SubstitutionSweep {
    fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.failures == 0)
    }
}

/// The change of variable turning `g_{n,q}(x^q - x)` into a trinomial, at
/// every admissible `(α, β)` with `α < 2p`.
pub fn substitution_sweep(ext: &QuadExtCtx) -> Result<SubstitutionSweep, CliError> {
    let base = ext.base();
    let admissible: Vec<_> = gnq::classification_pairs(gnq::alpha_limit(base))
        .into_iter()
        .filter_map(|(alpha, beta)| gnq::lemma61_transform(base, alpha, beta).ok())
        .collect();
    let cases: Vec<_> = admissible
        .par_iter()
        .map(|cv| SubstitutionCase {
            alpha: cv.alpha,
            beta: cv.beta,
            coefficients: [cv.a.enc(), cv.b.enc(), cv.c.enc()],
            failures: gnq::change_of_variable_failures(ext, cv).len(),
        })
        .collect();
    Ok(SubstitutionSweep {
        field: ModulusRecord::of(ext),
        points: ext.order() * cases.len() as u64,
        cases,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub label: &'static str,
    pub kind: CheckKind,
    pub vanishes: bool,
    pub difference: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub identity: Identity,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    pub shadows: Vec<ShadowReport>,
}

impl Verdict for IdentityOutcome {
    fn passed(&self) -> bool {
        self.passed
    }
}

/// Symbolic reduction of every identity, plus pointwise shadows over the
/// given fields of matching parity.
pub fn identity_suite(shadow_fields: &[FieldCtx]) -> Result<Vec<IdentityOutcome>, CliError> {
    Identity::ALL
        .into_par_iter()
        .map(|id| {
            let report = verify_identity(id);
            let checks = report
                .checks
                .iter()
                .map(|c| CheckOutcome {
                    label: c.label,
                    kind: c.kind,
                    vanishes: c.difference.is_zero(),
                    difference: c.difference.to_string(),
                })
                .collect();
            let shadows = shadow_fields
                .iter()
                .filter(|f| f.is_odd() != id.wants_even_q())
                .map(|f| numeric_shadow(id, f))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(IdentityOutcome {
                identity: id,
                passed: report.passed(),
                checks,
                shadows,
            })
        })
        .collect()
}
