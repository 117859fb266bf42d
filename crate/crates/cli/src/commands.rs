//! Subcommand implementations. Each returns its standard output and exit
//! status; artifacts go to the results directory.

use std::fmt::Write as _;

use serde::Serialize;
use trinoperm_core::gf::ModulusCache;
use trinoperm_core::gnq::{self, GnqError, MiddleTerm};
use trinoperm_core::trinomial::{
    compute_x_set, criterion_clause, is_pp_bruteforce, Clause, TrinomialParams,
};
use trinoperm_core::{ExtKind, FieldCtx, QuadExtCtx};

use crate::args::{FieldArgs, GnqCmd, OptionalFieldArgs, PpCmd, VerifyCmd};
use crate::artifacts::{
    to_json, ArtifactEntry, CsvTable, FieldFactory, ModulusRecord, ResultsDir, SCHEMA_VERSION,
};
use crate::config::{FieldSpec, Format, RunConfig};
use crate::error::{CliError, ExitStatus};
use crate::suites::{self, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: ExitStatus,
    pub stdout: String,
}

impl Outcome {
    fn new(passed: bool, stdout: String) -> Self {
        Outcome {
            status: if passed {
                ExitStatus::Pass
            } else {
                ExitStatus::CheckFailed
            },
            stdout,
        }
    }
}

/// A results directory together with the cached field factory.
struct Session {
    results: ResultsDir,
    factory: FieldFactory,
}

impl Session {
    fn open(cfg: &RunConfig) -> Result<Self, CliError> {
        let results = ResultsDir::open(&cfg.results_dir)?;
        let factory = results.factory(cfg.size_bound)?;
        Ok(Session { results, factory })
    }

    fn finish(self) -> Result<(), CliError> {
        self.results.finish(&self.factory)
    }
}

fn entry(
    command: impl Into<String>,
    fields: impl IntoIterator<Item = ModulusRecord>,
) -> ArtifactEntry {
    let mut fields: Vec<_> = fields.into_iter().collect();
    fields.sort();
    fields.dedup();
    ArtifactEntry {
        command: command.into(),
        fields,
    }
}

fn spec_of(args: FieldArgs) -> Result<FieldSpec, CliError> {
    args.spec().map_err(CliError::Usage)
}

fn transient_factory(cfg: &RunConfig) -> FieldFactory {
    FieldFactory::new(ModulusCache::new(), cfg.size_bound)
}

#[derive(Debug, Serialize)]
struct FieldInfo {
    field: ModulusRecord,
    modulus_coefficients: Vec<u32>,
    generator: u32,
    extension: &'static str,
    extension_order: u64,
}

pub fn field_info(cfg: &RunConfig, args: FieldArgs) -> Result<Outcome, CliError> {
    let ext = transient_factory(cfg).ext(spec_of(args)?)?;
    let f = ext.base();
    let info = FieldInfo {
        field: ModulusRecord::of(&ext),
        modulus_coefficients: f.modulus().to_vec(),
        generator: f.generator().enc(),
        extension: match ext.kind() {
            ExtKind::NonsquareRoot => "w^2 = d",
            ExtKind::ArtinSchreier => "w^2 + w = d",
        },
        extension_order: ext.order(),
    };
    Ok(Outcome::new(true, to_json(&info)))
}

#[derive(Debug, Serialize)]
struct PpCheckReport {
    field: ModulusRecord,
    a: u32,
    b: u32,
    c: u32,
    is_pp: bool,
    /// The criterion only covers `c != 0`.
    criterion_applies: bool,
    predicate: Option<Clause>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<[u64; 2]>,
}

pub fn pp(cfg: &RunConfig, cmd: PpCmd) -> Result<Outcome, CliError> {
    match cmd {
        PpCmd::Check { field, a, b, c } => pp_check(cfg, field, [a, b, c]),
        PpCmd::Enumerate { field } => pp_enumerate(cfg, field),
    }
}

fn pp_check(cfg: &RunConfig, args: FieldArgs, encs: [u64; 3]) -> Result<Outcome, CliError> {
    let ext = transient_factory(cfg).ext(spec_of(args)?)?;
    let f = ext.base();
    let [a, b, c] = [f.elem(encs[0])?, f.elem(encs[1])?, f.elem(encs[2])?];
    let params = TrinomialParams::new(a, b, c)?;
    let verdict = is_pp_bruteforce(&ext, &params);
    let criterion_applies = !c.is_zero();
    let predicate = if criterion_applies {
        criterion_clause(f, f.div(a, c)?, f.div(b, c)?)
    } else {
        None
    };
    let report = PpCheckReport {
        field: ModulusRecord::of(&ext),
        a: a.enc(),
        b: b.enc(),
        c: c.enc(),
        is_pp: verdict.is_pp,
        criterion_applies,
        predicate,
        witness: verdict.witness.map(|(x, y)| [ext.encode(x), ext.encode(y)]),
    };
    let agrees = !criterion_applies || predicate.is_some() == verdict.is_pp;
    Ok(Outcome::new(agrees, to_json(&report)))
}

#[derive(Debug, Serialize)]
struct PermutingSetReport {
    schema: &'static str,
    version: u32,
    field: ModulusRecord,
    count: usize,
    triples: Vec<[u32; 3]>,
}

fn pp_enumerate(cfg: &RunConfig, args: FieldArgs) -> Result<Outcome, CliError> {
    let spec = spec_of(args)?;
    let mut session = Session::open(cfg)?;
    let ext = session.factory.ext(spec)?;
    let record = ModulusRecord::of(&ext);
    let triples: Vec<[u32; 3]> = compute_x_set(&ext).iter().map(|t| t.encodings()).collect();
    let format = cfg.format.unwrap_or(Format::Json);
    let text = match format {
        Format::Json => to_json(&PermutingSetReport {
            schema: "x-set",
            version: SCHEMA_VERSION,
            field: record,
            count: triples.len(),
            triples,
        }),
        Format::Csv => CsvTable {
            schema: "x-set",
            comments: vec![
                record.csv_comment(),
                "normalized projective triples [a:b:c], last nonzero coordinate 1".into(),
            ],
            columns: &["a", "b", "c"],
            rows: triples
                .iter()
                .map(|t| t.iter().map(u32::to_string).collect())
                .collect(),
        }
        .render(),
    };
    let rel = format!("pp-enumerate/x-set-q{}.{}", spec.q(), extension(format));
    let command = format!(
        "pp enumerate --p {} --m {} --format {}",
        spec.p,
        spec.m,
        extension(format)
    );
    session
        .results
        .write_text(&rel, &text, entry(command, [record]))?;
    session.finish()?;
    Ok(Outcome::new(true, text))
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

pub fn gnq(cfg: &RunConfig, cmd: GnqCmd) -> Result<Outcome, CliError> {
    match cmd {
        GnqCmd::Coeffs { field, n } => gnq_coeffs(cfg, field, n),
        GnqCmd::Desirable {
            field,
            alpha_max,
            e,
        } => gnq_desirable(cfg, field, alpha_max, e),
    }
}

#[derive(Debug, Serialize)]
struct CoeffsReport {
    field: ModulusRecord,
    n: u64,
    degree: Option<usize>,
    coefficients: Vec<u32>,
}

fn gnq_coeffs(cfg: &RunConfig, args: FieldArgs, n: u64) -> Result<Outcome, CliError> {
    let spec = spec_of(args)?;
    let mut session = Session::open(cfg)?;
    let ext = session.factory.ext(spec)?;
    let record = ModulusRecord::of(&ext);
    let poly = gnq::gnq_coeffs(n, spec.q(), spec.p, cfg.coeff_bound)?;
    let format = cfg.format.unwrap_or(Format::Json);
    let text = match format {
        Format::Json => to_json(&CoeffsReport {
            field: record,
            n,
            degree: poly.degree(),
            coefficients: poly.coeffs().to_vec(),
        }),
        Format::Csv => CsvTable {
            schema: "gnq-coefficients",
            comments: vec![record.csv_comment(), format!("n={n}, coefficients in F_p")],
            columns: &["degree", "coefficient"],
            rows: poly
                .coeffs()
                .iter()
                .enumerate()
                .map(|(d, c)| vec![d.to_string(), c.to_string()])
                .collect(),
        }
        .render(),
    };
    let rel = format!("gnq-coeffs/q{}-n{n}.{}", spec.q(), extension(format));
    let command = format!(
        "gnq coeffs --p {} --m {} --n {n} --format {}",
        spec.p,
        spec.m,
        extension(format)
    );
    session
        .results
        .write_text(&rel, &text, entry(command, [record]))?;
    session.finish()?;
    Ok(Outcome::new(true, text))
}

#[derive(Debug, Clone, Serialize)]
struct DesirableRow {
    q: u32,
    alpha: u32,
    beta: u32,
    n: String,
    predicate: Option<bool>,
    bruteforce: bool,
}

impl DesirableRow {
    fn agree(&self) -> Option<bool> {
        self.predicate.map(|p| p == self.bruteforce)
    }

    fn cells(&self) -> Vec<String> {
        let opt = |v: Option<bool>| v.map(|b| b.to_string()).unwrap_or_default();
        vec![
            self.q.to_string(),
            self.alpha.to_string(),
            self.beta.to_string(),
            self.n.clone(),
            opt(self.predicate),
            self.bruteforce.to_string(),
            opt(self.agree()),
        ]
    }
}

#[derive(Debug, Serialize)]
struct DesirableReport {
    field: ModulusRecord,
    flat_modulus: u64,
    e: u32,
    middle_term: Option<MiddleTerm>,
    rows: Vec<DesirableRow>,
}

const DESIRABLE_COLUMNS: &[&str] = &[
    "q",
    "alpha",
    "beta",
    "n",
    "predicate",
    "bruteforce",
    "agree",
];

/// Criterion verdict where it is defined: `e = 2` and `α` inside the
/// classified range.
fn desirable_predicate(
    base: &FieldCtx,
    e: u32,
    alpha: u32,
    beta: u32,
    middle: MiddleTerm,
) -> Result<Option<bool>, CliError> {
    if e != 2 {
        return Ok(None);
    }
    let verdict = if base.is_odd() {
        gnq::theorem_d_predicate(base, alpha, beta, middle)
    } else {
        gnq::theorem_c_predicate(base.q(), alpha, beta)
    };
    match verdict {
        Ok(v) => Ok(Some(v)),
        Err(GnqError::RangeViolation { .. }) => Ok(None),
        Err(err) => Err(err.into()),
    }
}

fn gnq_desirable(
    cfg: &RunConfig,
    args: FieldArgs,
    alpha_max: Option<u32>,
    e: u32,
) -> Result<Outcome, CliError> {
    use rayon::prelude::*;

    if e == 0 {
        return Err(CliError::Usage("--e must be at least 1".into()));
    }
    let spec = spec_of(args)?;
    let mut session = Session::open(cfg)?;
    let ext = session.factory.ext(spec)?;
    let base = ext.base();
    let flat = session.factory.flat(spec.p, spec.m * e)?;
    let alpha_max = alpha_max.unwrap_or(gnq::alpha_limit(base) - 1);
    let q = spec.q();
    let rows = gnq::classification_pairs(alpha_max + 1)
        .into_par_iter()
        .map(|(alpha, beta)| -> Result<DesirableRow, CliError> {
            let n = gnq::exponent_n(q, alpha, beta);
            let brute = gnq::is_desirable_in(&flat, q, &n, e)?;
            Ok(DesirableRow {
                q,
                alpha,
                beta,
                n: n.to_string(),
                predicate: desirable_predicate(base, e, alpha, beta, cfg.middle_term)?,
                bruteforce: brute.verdict,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let passed = rows.iter().all(|r| r.agree() != Some(false));
    let record = ModulusRecord::of(&ext);
    let middle_term = base.is_odd().then_some(cfg.middle_term);
    let format = cfg.format.unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => CsvTable {
            schema: "desirability",
            comments: vec![
                record.csv_comment(),
                format!(
                    "brute force over F_(q^{e}) modulus={}; middle-term={}",
                    flat.modulus_encoding(),
                    middle_term.map_or("n/a", MiddleTerm::name)
                ),
            ],
            columns: DESIRABLE_COLUMNS,
            rows: rows.iter().map(DesirableRow::cells).collect(),
        }
        .render(),
        Format::Json => to_json(&DesirableReport {
            field: record,
            flat_modulus: flat.modulus_encoding(),
            e,
            middle_term,
            rows,
        }),
    };
    let rel = format!(
        "gnq-desirable/q{q}-e{e}-alpha{alpha_max}.{}",
        extension(format)
    );
    let command = format!(
        "gnq desirable --p {} --m {} --alpha-max {alpha_max} --e {e} --middle-term {} --format {}",
        spec.p,
        spec.m,
        cfg.middle_term,
        extension(format)
    );
    session
        .results
        .write_text(&rel, &text, entry(command, [record]))?;
    session.finish()?;
    Ok(Outcome::new(passed, text))
}

pub fn verify(cfg: &RunConfig, cmd: VerifyCmd) -> Result<Outcome, CliError> {
    match cmd {
        VerifyCmd::Lemmas { field } => verify_lemmas(cfg, field),
        VerifyCmd::Hermite { field, all_ab } => verify_hermite(cfg, field, all_ab),
        VerifyCmd::Identities => verify_identities(cfg),
        VerifyCmd::All { small } => {
            let plan = if small {
                VerifyPlan::small()
            } else {
                VerifyPlan::full()
            };
            verify_all(
                cfg,
                &plan,
                if small {
                    "verify all --small"
                } else {
                    "verify all"
                },
            )
        }
    }
}

fn selected_fields(cfg: &RunConfig, args: OptionalFieldArgs) -> Result<Vec<FieldSpec>, CliError> {
    Ok(match args.spec().map_err(CliError::Usage)? {
        Some(spec) => vec![spec],
        None => cfg.canonical_fields(),
    })
}

fn build_exts(
    factory: &mut FieldFactory,
    specs: &[FieldSpec],
) -> Result<Vec<QuadExtCtx>, CliError> {
    specs.iter().map(|&s| factory.ext(s)).collect()
}

fn field_list(specs: &[FieldSpec]) -> String {
    specs
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn verify_lemmas(cfg: &RunConfig, args: OptionalFieldArgs) -> Result<Outcome, CliError> {
    let specs = selected_fields(cfg, args)?;
    let mut session = Session::open(cfg)?;
    let exts = build_exts(&mut session.factory, &specs)?;
    let sweeps = exts
        .iter()
        .map(suites::lemma_sweep)
        .collect::<Result<Vec<_>, _>>()?;
    let command = format!("verify lemmas --fields {}", field_list(&specs));
    let fields = sweeps.iter().map(|s| s.field);
    session.results.write_json(
        "verify-lemmas/lemma-sums.json",
        &sweeps,
        entry(command, fields),
    )?;
    session.finish()?;
    Ok(Outcome::new(sweeps.passed(), to_json(&sweeps)))
}

fn verify_hermite(
    cfg: &RunConfig,
    args: OptionalFieldArgs,
    all_ab: bool,
) -> Result<Outcome, CliError> {
    let specs = selected_fields(cfg, args)?;
    let mut session = Session::open(cfg)?;
    let exts = build_exts(&mut session.factory, &specs)?;
    let sweeps = exts
        .iter()
        .map(|ext| suites::hermite_sweep(ext, all_ab))
        .collect::<Result<Vec<_>, _>>()?;
    let mode = if all_ab { " --all-ab" } else { "" };
    let command = format!("verify hermite --fields {}{mode}", field_list(&specs));
    let fields = sweeps.iter().map(|s| s.field);
    let rel = if all_ab {
        "verify-hermite/power-sums-all.json"
    } else {
        "verify-hermite/power-sums.json"
    };
    session
        .results
        .write_json(rel, &sweeps, entry(command, fields))?;
    session.finish()?;
    let mismatches: Vec<_> = sweeps
        .iter()
        .flat_map(|s| {
            s.mismatches
                .iter()
                .map(move |m| serde_json::json!({ "q": s.field.q, "mismatch": m }))
        })
        .collect();
    Ok(Outcome::new(sweeps.passed(), to_json(&mismatches)))
}

/// Fields over which identities are also checked pointwise.
fn shadow_specs() -> Vec<FieldSpec> {
    [(2, 2), (2, 3), (3, 2), (5, 1), (7, 1)]
        .into_iter()
        .map(|(p, m)| FieldSpec { p, m })
        .collect()
}

fn identity_lines(outcomes: &[suites::IdentityOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{tag} {}", o.identity.name());
        for c in &o.checks {
            if !c.vanishes {
                let kind = match c.kind {
                    trinoperm_core::symbolic::CheckKind::Required => "required",
                    trinoperm_core::symbolic::CheckKind::Diagnostic => "diagnostic",
                };
                let _ = writeln!(out, "    {kind} {}: {}", c.label, c.difference);
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let _ = writeln!(out, "{passed}/{} identities pass", outcomes.len());
    out
}

fn run_identities(factory: &mut FieldFactory) -> Result<Vec<suites::IdentityOutcome>, CliError> {
    let shadows = shadow_specs()
        .into_iter()
        .map(|s| factory.base(s))
        .collect::<Result<Vec<_>, _>>()?;
    suites::identity_suite(&shadows)
}

fn verify_identities(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut session = Session::open(cfg)?;
    let outcomes = run_identities(&mut session.factory)?;
    let exts = build_exts(&mut session.factory, &shadow_specs())?;
    let fields = exts.iter().map(ModulusRecord::of);
    session.results.write_json(
        "verify-identities/identities.json",
        &outcomes,
        entry("verify identities", fields),
    )?;
    session.finish()?;
    Ok(Outcome::new(outcomes.passed(), identity_lines(&outcomes)))
}

/// Field lists for `verify all`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyPlan {
    pub odd_criterion: Vec<FieldSpec>,
    pub even_criterion: Vec<FieldSpec>,
    pub permuting_sets: Vec<FieldSpec>,
    pub lemma_sums: Vec<FieldSpec>,
    pub power_sums_all: Vec<FieldSpec>,
    pub power_sums_closed: Vec<FieldSpec>,
    pub gnq: Vec<FieldSpec>,
    pub gnq_n_max: u64,
    pub desirability: Vec<FieldSpec>,
    pub substitution: Vec<FieldSpec>,
}

fn specs(list: &[(u32, u32)]) -> Vec<FieldSpec> {
    list.iter().map(|&(p, m)| FieldSpec { p, m }).collect()
}

impl VerifyPlan {
    pub fn small() -> Self {
        VerifyPlan {
            odd_criterion: specs(&[(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)]),
            even_criterion: specs(&[(2, 1), (2, 2), (2, 3), (2, 4), (2, 5)]),
            permuting_sets: specs(&[(2, 1), (2, 2), (2, 3), (2, 4)]),
            lemma_sums: specs(&[
                (2, 1),
                (3, 1),
                (2, 2),
                (5, 1),
                (7, 1),
                (2, 3),
                (3, 2),
                (11, 1),
                (13, 1),
                (2, 4),
                (5, 2),
                (3, 3),
                (2, 5),
            ]),
            power_sums_all: specs(&[(3, 1), (5, 1), (7, 1), (3, 2)]),
            power_sums_closed: specs(&[(5, 1), (7, 1), (3, 2), (11, 1), (13, 1), (2, 3), (2, 4)]),
            gnq: specs(&[(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)]),
            gnq_n_max: 200,
            desirability: specs(&[
                (2, 1),
                (2, 2),
                (2, 3),
                (2, 4),
                (3, 1),
                (5, 1),
                (7, 1),
                (3, 2),
            ]),
            substitution: specs(&[(3, 1), (5, 1), (7, 1), (3, 2)]),
        }
    }

    pub fn full() -> Self {
        let mut plan = Self::small();
        plan.odd_criterion.extend(specs(&[(5, 2), (3, 3), (7, 2)]));
        plan
    }

    fn all_fields(&self) -> Vec<FieldSpec> {
        let mut v: Vec<FieldSpec> = [
            &self.odd_criterion,
            &self.even_criterion,
            &self.permuting_sets,
            &self.lemma_sums,
            &self.power_sums_all,
            &self.power_sums_closed,
            &self.gnq,
            &self.desirability,
            &self.substitution,
        ]
        .into_iter()
        .flatten()
        .copied()
        .collect();
        v.sort();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepSummary {
    pub step: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn pick<'a>(exts: &'a [(FieldSpec, QuadExtCtx)], wanted: &[FieldSpec]) -> Vec<&'a QuadExtCtx> {
    wanted
        .iter()
        .filter_map(|w| exts.iter().find(|(s, _)| s == w).map(|(_, e)| e))
        .collect()
}

fn verify_all(cfg: &RunConfig, plan: &VerifyPlan, command: &str) -> Result<Outcome, CliError> {
    let mut session = Session::open(cfg)?;
    let exts: Vec<(FieldSpec, QuadExtCtx)> = plan
        .all_fields()
        .into_iter()
        .map(|s| Ok((s, session.factory.ext(s)?)))
        .collect::<Result<_, CliError>>()?;
    let mut steps = Vec::new();
    let mut put = |session: &mut Session,
                   name: &'static str,
                   value: &dyn erased::Report,
                   fields: Vec<ModulusRecord>|
     -> Result<(), CliError> {
        let rel = format!("verify-all/{name}.json");
        session
            .results
            .write_text(&rel, &value.json(), entry(command, fields))?;
        steps.push(StepSummary {
            step: name,
            passed: value.passed(),
            detail: value.detail(),
        });
        Ok(())
    };

    let self_tests: Vec<_> = exts
        .iter()
        .map(|(_, e)| suites::field_self_test(e))
        .collect();
    let fields = self_tests.iter().map(|r| r.field).collect();
    put(&mut session, "field-arithmetic", &self_tests, fields)?;

    for (name, list) in [
        ("odd-criterion", &plan.odd_criterion),
        ("even-criterion", &plan.even_criterion),
    ] {
        let sweeps: Vec<_> = pick(&exts, list)
            .into_iter()
            .map(suites::trinomial_sweep)
            .collect();
        let fields = sweeps.iter().map(|r| r.field).collect();
        put(&mut session, name, &sweeps, fields)?;
    }

    let sets = pick(&exts, &plan.permuting_sets)
        .into_iter()
        .map(suites::permuting_set_check)
        .collect::<Result<Vec<_>, _>>()?;
    let fields = sets.iter().map(|r| r.field).collect();
    put(&mut session, "permuting-sets", &sets, fields)?;

    let lemmas = pick(&exts, &plan.lemma_sums)
        .into_iter()
        .map(suites::lemma_sweep)
        .collect::<Result<Vec<_>, _>>()?;
    let fields = lemmas.iter().map(|r| r.field).collect();
    put(&mut session, "lemma-sums", &lemmas, fields)?;

    let mut power = pick(&exts, &plan.power_sums_all)
        .into_iter()
        .map(|e| suites::hermite_sweep(e, true))
        .collect::<Result<Vec<_>, _>>()?;
    for e in pick(&exts, &plan.power_sums_closed) {
        power.push(suites::hermite_sweep(e, false)?);
    }
    let fields = power.iter().map(|r| r.field).collect();
    put(&mut session, "power-sums", &power, fields)?;

    let mut gnq_reports = Vec::new();
    for e in pick(&exts, &plan.gnq) {
        let flat = session.factory.flat(e.base().p(), 2 * e.base().m())?;
        gnq_reports.push(suites::gnq_consistency(
            e,
            &flat,
            plan.gnq_n_max,
            cfg.coeff_bound,
        )?);
    }
    let fields = gnq_reports.iter().map(|r| r.field).collect();
    put(&mut session, "gnq-consistency", &gnq_reports, fields)?;

    let mut desirability = Vec::new();
    for e in pick(&exts, &plan.desirability) {
        let flat = session.factory.flat(e.base().p(), 2 * e.base().m())?;
        let limit = gnq::alpha_limit(e.base());
        desirability.push(suites::desirability_sweep(
            e,
            &flat,
            limit,
            cfg.middle_term,
        )?);
    }
    let table = CsvTable {
        schema: "desirability",
        comments: desirability
            .iter()
            .map(|d| format!("{} flat-modulus={}", d.field.csv_comment(), d.flat_modulus))
            .chain([format!("middle-term={} (odd q only)", cfg.middle_term)])
            .collect(),
        columns: DESIRABLE_COLUMNS,
        rows: desirability
            .iter()
            .flat_map(|d| &d.rows)
            .map(|r| {
                vec![
                    r.q.to_string(),
                    r.alpha.to_string(),
                    r.beta.to_string(),
                    r.n.clone(),
                    r.predicate.to_string(),
                    r.bruteforce.to_string(),
                    r.agree().to_string(),
                ]
            })
            .collect(),
    };
    let fields: Vec<_> = desirability.iter().map(|r| r.field).collect();
    session.results.write_text(
        "verify-all/desirability.csv",
        &table.render(),
        entry(command, fields.clone()),
    )?;
    put(&mut session, "desirability", &desirability, fields)?;

    let substitution = pick(&exts, &plan.substitution)
        .into_iter()
        .map(suites::substitution_sweep)
        .collect::<Result<Vec<_>, _>>()?;
    let fields = substitution.iter().map(|r| r.field).collect();
    put(&mut session, "change-of-variable", &substitution, fields)?;

    let identities = run_identities(&mut session.factory)?;
    let shadow_exts = build_exts(&mut session.factory, &shadow_specs())?;
    let fields = shadow_exts.iter().map(ModulusRecord::of).collect();
    put(&mut session, "identities", &identities, fields)?;

    let all_fields: Vec<_> = exts.iter().map(|(_, e)| ModulusRecord::of(e)).collect();
    session.results.write_json(
        "verify-all/summary.json",
        &steps,
        entry(command, all_fields),
    )?;
    session.finish()?;

    let mut out = String::new();
    for s in &steps {
        let tag = if s.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{tag} {}: {}", s.step, s.detail);
    }
    let passed = steps.iter().filter(|s| s.passed).count();
    let _ = writeln!(out, "{passed}/{} steps pass", steps.len());
    Ok(Outcome::new(passed == steps.len(), out))
}

/// Uniform access to the per-step report lists.
mod erased {
    use serde::Serialize;

    use crate::artifacts::to_json;
    use crate::suites::{
        DesirabilitySweep, FieldSelfTest, GnqConsistency, HermiteSweep, IdentityOutcome,
        LemmaSweep, PermutingSetCheck, SubstitutionSweep, TrinomialSweep, Verdict,
    };

    pub trait Report {
        fn json(&self) -> String;
        fn passed(&self) -> bool;
        fn detail(&self) -> String;
    }

    /// Per-item failure count used in the summary line.
    pub trait Failures {
        fn failures(&self) -> usize;
    }

    impl<T: Serialize + Verdict + Failures> Report for Vec<T> {
        fn json(&self) -> String {
            to_json(self)
        }

        fn passed(&self) -> bool {
            Verdict::passed(self)
        }

        fn detail(&self) -> String {
            let failures: usize = self.iter().map(Failures::failures).sum();
            format!("{} items, {failures} mismatches", self.len())
        }
    }

    impl Failures for FieldSelfTest {
        fn failures(&self) -> usize {
            self.failures.len()
        }
    }

    impl Failures for TrinomialSweep {
        fn failures(&self) -> usize {
            self.mismatches.len()
        }
    }

    impl Failures for PermutingSetCheck {
        fn failures(&self) -> usize {
            self.only_bruteforce.len() + self.only_families.len()
        }
    }

    impl Failures for LemmaSweep {
        fn failures(&self) -> usize {
            self.tallies.iter().map(|t| t.mismatches.len()).sum()
        }
    }

    impl Failures for HermiteSweep {
        fn failures(&self) -> usize {
            self.mismatches.len()
        }
    }

    impl Failures for GnqConsistency {
        fn failures(&self) -> usize {
            self.mismatches.len()
        }
    }

    impl Failures for DesirabilitySweep {
        fn failures(&self) -> usize {
            self.mismatches().count()
        }
    }

    impl Failures for SubstitutionSweep {
        fn failures(&self) -> usize {
            self.cases.iter().filter(|c| c.failures > 0).count()
        }
    }

    impl Failures for IdentityOutcome {
        fn failures(&self) -> usize {
            usize::from(!self.passed)
        }
    }
}
