use num_bigint::BigUint;
use trinoperm_core::gnq::{self, MiddleTerm};
use trinoperm_core::hermite::{power_sum_direct, split_exponent};
use trinoperm_core::trinomial::{
    compute_x_set, criterion_clause, x_set_parametrized, MonomialTable, TrinomialParams,
};
use trinoperm_core::{FieldCtx, Fq2Elem, QuadExtCtx};

fn mismatches(p: u32, m: u32) -> Vec<(u32, u32)> {
    let ext = QuadExtCtx::build(p, m).unwrap();
    let f = ext.base();
    let table = MonomialTable::new(&ext);
    let mut out = Vec::new();
    for a in f.iter() {
        for b in f.iter() {
            let brute = table.verdict(&TrinomialParams::monic(a, b)).is_pp;
            if brute != criterion_clause(f, a, b).is_some() {
                out.push((a.enc(), b.enc()));
            }
        }
    }
    out
}

#[test]
fn odd_criterion_matches_brute_force() {
    for (p, m) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
        assert_eq!(mismatches(p, m), vec![], "q = {p}^{m}");
    }
}

#[test]
fn even_criterion_matches_brute_force() {
    for m in 1..=4 {
        assert_eq!(mismatches(2, m), vec![], "q = 2^{m}");
    }
}

#[test]
fn even_permuting_set_matches_families() {
    for m in 1..=3 {
        let ext = QuadExtCtx::build(2, m).unwrap();
        assert_eq!(compute_x_set(&ext), x_set_parametrized(ext.base()).unwrap());
    }
}

#[test]
fn permutations_have_vanishing_power_sums() {
    for (p, m) in [(3, 1), (5, 1), (2, 2), (7, 1), (3, 2)] {
        let ext = QuadExtCtx::build(p, m).unwrap();
        let f = ext.base();
        let top = ext.order() - 1;
        for a in f.iter() {
            for b in f.iter() {
                if criterion_clause(f, a, b).is_none() {
                    continue;
                }
                let params = TrinomialParams::monic(a, b);
                for alpha in 0..f.q() {
                    let s = BigUint::from(split_exponent(f.q(), alpha));
                    assert_eq!(power_sum_direct(&ext, &params, &s), Fq2Elem::ZERO);
                }
                if f.q() <= 5 {
                    for s in 1..top {
                        assert_eq!(
                            power_sum_direct(&ext, &params, &BigUint::from(s)),
                            Fq2Elem::ZERO
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn theorem_c_matches_brute_force_small() {
    let mut disagreements = Vec::new();
    for m in 1..=2 {
        let base = FieldCtx::new(2, m).unwrap();
        let big = FieldCtx::new(2, 2 * m).unwrap();
        for (alpha, beta) in gnq::classification_pairs(4) {
            let row =
                gnq::classify_pair(&base, &big, alpha, beta, MiddleTerm::HalfDifference).unwrap();
            if !row.agree() {
                disagreements.push((row.q, beta, alpha, row.bruteforce));
            }
        }
    }
    // g_3 = y + 1 permutes F_4 but no clause covers (beta, alpha) = (2, 3) at q = 2
    assert_eq!(disagreements, vec![(2, 2, 3, true)]);
}

#[test]
fn change_of_variable_holds_q3_q5() {
    for p in [3u32, 5] {
        let ext = QuadExtCtx::build(p, 1).unwrap();
        for (alpha, beta) in gnq::classification_pairs(2 * p) {
            let Ok(cv) = gnq::lemma61_transform(ext.base(), alpha, beta) else {
                continue;
            };
            assert!(!cv.c.is_zero());
            assert!(
                gnq::change_of_variable_failures(&ext, &cv).is_empty(),
                "p={p} ({beta},{alpha})"
            );
        }
    }
}
