//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons
//! throughout. Exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use trinoperm_cli::suites::{self, Verdict};
use trinoperm_core::gnq::{self, MiddleTerm};
use trinoperm_core::lemma_sums::LemmaSum;
use trinoperm_core::{FieldCtx, QuadExtCtx};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn prime_power(q: u32) -> (u32, u32) {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2");
    let mut m = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    assert_eq!(rest, 1, "{q} is not a prime power");
    (p, m)
}

fn tower(q: u32) -> QuadExtCtx {
    let (p, m) = prime_power(q);
    QuadExtCtx::build(p, m).expect("tower")
}

fn flat_square(q: u32) -> FieldCtx {
    let (p, m) = prime_power(q);
    FieldCtx::new(p, 2 * m).expect("flat field")
}

fn trinomial_criterion(qs: &[u32]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &q in qs {
        let sweep = suites::trinomial_sweep(&tower(q));
        ok &= sweep.passed() && sweep.pairs == (q as u64).pow(2);
        parts.push(format!("q={q}:{}/{}", sweep.mismatches.len(), sweep.pairs));
    }
    (ok, format!("mismatches/pairs {}", parts.join(" ")))
}

fn odd_classification() -> Outcome {
    let (ok, detail) = trinomial_criterion(&[3, 5, 7, 9, 11, 13, 25, 27, 49]);
    outcome(ok, detail)
}

fn even_classification() -> Outcome {
    let (mut ok, detail) = trinomial_criterion(&[2, 4, 8, 16, 32]);
    let mut sets = Vec::new();
    for q in [2, 4, 8, 16] {
        let check = suites::permuting_set_check(&tower(q)).expect("even field");
        ok &= check.passed();
        sets.push(format!(
            "q={q}:|X|={} extra={}+{}",
            check.size,
            check.only_bruteforce.len(),
            check.only_families.len()
        ));
    }
    outcome(ok, format!("{detail}; {}", sets.join(" ")))
}

fn power_sums() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [3, 5, 7, 9] {
        let sweep = suites::hermite_sweep(&tower(q), true).expect("sweep");
        ok &= sweep.passed() && sweep.expansion_checks > 0;
        parts.push(format!(
            "q={q}:{}/{}",
            sweep.mismatches.len(),
            sweep.expansion_checks
        ));
    }
    for q in [5, 7, 9, 11, 13, 8, 16] {
        let sweep = suites::hermite_sweep(&tower(q), false).expect("sweep");
        ok &= sweep.passed() && sweep.closed_form_checks > 0;
        parts.push(format!(
            "q={q}:{}/{}cf",
            sweep.mismatches.len(),
            sweep.closed_form_checks
        ));
    }
    outcome(ok, format!("mismatches/checks {}", parts.join(" ")))
}

fn lemma_sums() -> Outcome {
    let mut ok = true;
    let mut checked: BTreeMap<&'static str, u64> = BTreeMap::new();
    let mut bad = 0usize;
    for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32] {
        let sweep = suites::lemma_sweep(&tower(q)).expect("sweep");
        ok &= sweep.passed();
        for t in &sweep.tallies {
            *checked.entry(t.sum.name()).or_default() += t.checked;
            bad += t.mismatches.len();
        }
    }
    ok &= LemmaSum::ALL
        .iter()
        .all(|s| checked.get(s.name()).copied().unwrap_or(0) > 0);
    let counts: Vec<_> = checked.iter().map(|(k, v)| format!("{k}={v}")).collect();
    outcome(
        ok,
        format!("{bad} mismatches; checked {}", counts.join(" ")),
    )
}

fn gnq_consistency() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [2, 3, 4, 5, 7, 9] {
        let report =
            suites::gnq_consistency(&tower(q), &flat_square(q), 200, gnq::DEFAULT_COEFF_BOUND)
                .expect("consistency");
        ok &= report.passed();
        parts.push(format!(
            "q={q}:{}/{}",
            report.mismatches.len(),
            report.evaluations
        ));
    }
    outcome(ok, format!("mismatches/evaluations {}", parts.join(" ")))
}

fn describe_rows(sweep: &suites::DesirabilitySweep) -> Vec<String> {
    sweep
        .mismatches()
        .map(|r| {
            format!(
                "q={} (beta,alpha)=({},{}) predicate={} bruteforce={}",
                r.q, r.beta, r.alpha, r.predicate, r.bruteforce
            )
        })
        .collect()
}

fn even_desirability() -> Outcome {
    let mut rows = Vec::new();
    let mut total = 0;
    for q in [2, 4, 8, 16] {
        let sweep =
            suites::desirability_sweep(&tower(q), &flat_square(q), 4, MiddleTerm::default())
                .expect("sweep");
        total += sweep.rows.len();
        rows.extend(describe_rows(&sweep));
    }
    let detail = format!(
        "{} mismatches over {total} pairs [{}]",
        rows.len(),
        rows.join("; ")
    );
    outcome(rows.is_empty(), detail)
}

fn odd_desirability() -> Outcome {
    let mut zero_readings = Vec::new();
    let mut parts = Vec::new();
    for reading in MiddleTerm::ALL {
        let mut rows = Vec::new();
        for q in [3, 5, 7, 9] {
            let ext = tower(q);
            let limit = gnq::alpha_limit(ext.base());
            let sweep =
                suites::desirability_sweep(&ext, &flat_square(q), limit, reading).expect("sweep");
            rows.extend(describe_rows(&sweep));
        }
        if rows.is_empty() {
            zero_readings.push(reading);
        }
        parts.push(format!(
            "{reading}: {} mismatches [{}]",
            rows.len(),
            rows.join("; ")
        ));
    }
    let verdict = match zero_readings.as_slice() {
        [only] => format!("reading {only} is exact"),
        [] => "no reading is exact".to_string(),
        _ => "both readings exact".to_string(),
    };
    outcome(
        zero_readings.len() == 1,
        format!("{verdict}; {}", parts.join(" | ")),
    )
}

fn change_of_variable() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [3, 5, 7, 9] {
        let sweep = suites::substitution_sweep(&tower(q)).expect("sweep");
        let failing = sweep.cases.iter().filter(|c| c.failures > 0).count();
        ok &= sweep.passed() && !sweep.cases.is_empty();
        parts.push(format!("q={q}:{failing}/{}", sweep.cases.len()));
    }
    outcome(ok, format!("failing/admissible pairs {}", parts.join(" ")))
}

fn identities() -> Outcome {
    let shadows: Vec<FieldCtx> = [(2, 2), (2, 3), (3, 2), (5, 1), (7, 1)]
        .into_iter()
        .map(|(p, m)| FieldCtx::new(p, m).expect("field"))
        .collect();
    let outcomes = suites::identity_suite(&shadows).expect("identities");
    let failing: Vec<_> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| {
            let labels: Vec<_> = o
                .checks
                .iter()
                .filter(|c| !c.vanishes)
                .map(|c| format!("{:?} {}", c.kind, c.label))
                .collect();
            format!("{} ({})", o.identity.name(), labels.join(", "))
        })
        .collect();
    let passed = outcomes.len() - failing.len();
    outcome(
        failing.is_empty(),
        format!(
            "{passed}/{} reduce to zero; failing: [{}]",
            outcomes.len(),
            failing.join("; ")
        ),
    )
}

fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).expect("read dir") {
            let path = entry.expect("entry").path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                out.insert(rel, std::fs::read(&path).expect("read file"));
            }
        }
    }
    out
}

fn determinism() -> Outcome {
    let run = |threads: &str| {
        let dir = tempfile::tempdir().expect("tempdir");
        let root = dir.path().to_str().expect("utf-8 path").to_string();
        let args = [
            "trinoperm",
            "--threads",
            threads,
            "--results-dir",
            &root,
            "verify",
            "all",
            "--small",
        ];
        let status = trinoperm_cli::execute_args(args).map(|o| o.status.code());
        (snapshot(dir.path()), status.ok())
    };
    let (first, code_a) = run("1");
    let (second, code_b) = run("4");
    let differing: Vec<_> = first
        .keys()
        .chain(second.keys())
        .filter(|k| first.get(*k) != second.get(*k))
        .cloned()
        .collect();
    let sane = matches!(code_a, Some(0 | 1)) && code_a == code_b && first.len() > 2;
    outcome(
        sane && differing.is_empty(),
        format!(
            "{} artifacts, {} differ, exit codes {:?}/{:?}",
            first.len(),
            differing.len(),
            code_a,
            code_b
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 10] = [
    (
        1,
        "odd trinomial criterion vs brute force",
        odd_classification,
    ),
    (
        2,
        "even trinomial criterion and permuting sets",
        even_classification,
    ),
    (3, "power sums: direct, expansion, closed forms", power_sums),
    (4, "binomial-sum closed forms", lemma_sums),
    (
        5,
        "g_{n,q} coefficients vs functional form",
        gnq_consistency,
    ),
    (
        6,
        "even desirability criterion vs brute force",
        even_desirability,
    ),
    (
        7,
        "odd desirability criterion vs brute force",
        odd_desirability,
    ),
    (8, "change of variable to a trinomial", change_of_variable),
    (9, "symbolic identities", identities),
    (10, "byte-identical artifacts across runs", determinism),
];

fn main() {
    let mut failed = 0;
    for (id, name, check) in CRITERIA {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|err| {
            let msg = err
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| err.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let tag = if result.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!result.passed);
        println!(
            "{tag} criterion {id:>2} {name} ({:.2}s): {}",
            start.elapsed().as_secs_f64(),
            result.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria pass",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
