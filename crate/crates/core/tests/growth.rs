use lda_core::growth::{
    bound_compare, ct_value, parse_bound, verify_induction_lemmas, verify_section4_chain,
    verify_section4_chain_with, BoundExpr, Growth, GrowthError, StepStatus, Value, VerdictKind,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use std::cmp::Ordering;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// `F_0(m) = m + 1`, `F_{k+1}(m) = F_k^{m+1}(1)`, iterated literally.
fn f_oracle(k: u32, m: u128) -> Option<u128> {
    if k == 0 {
        return m.checked_add(1);
    }
    let mut v = 1u128;
    for _ in 0..=m {
        v = f_oracle(k - 1, v)?;
        if v > 1 << 100 {
            return None;
        }
    }
    Some(v)
}

#[test]
fn f_matches_iteration_and_is_monotone() {
    let g = Growth::default();
    for k in 0..=3 {
        for m in 0..=12u64 {
            let v = g.f_exact(k, &big(m)).unwrap();
            if let Some(o) = f_oracle(k, m as u128) {
                assert_eq!(v, BigUint::from(o), "F_{k}({m})");
            }
            assert!(g.f_exact(k, &big(m + 1)).unwrap() > v);
            assert!(g.f_exact(k + 1, &big(m)).map_or(true, |w| w > v));
        }
    }
    assert_eq!(g.f_exact(4, &big(1)), Some(big(65533)));
}

#[test]
fn f3_closed_form() {
    let g = Growth::default();
    for m in 0..=20u64 {
        let mut v = 1u64;
        for _ in 0..=m {
            v = 2 * v + 3;
        }
        assert_eq!(g.f_exact(3, &big(m)), Some(big(v)));
        assert_eq!(v, (1 << (m + 3)) - 3);
    }
}

#[test]
fn known_counting_values() {
    let exact = |n, m| ct_value(n, m).unwrap().exact().cloned();
    assert_eq!(exact(4, 1), Some(big(8)));
    assert_eq!(exact(5, 1), Some(big(2)));
    assert_eq!(exact(2, 0), Some(big(0)));
    assert_eq!(exact(2, 1), Some(big(1)));
    assert_eq!(exact(2, 2), Some(big(3)));
    assert_eq!(exact(2, 3), Some(big(11)));
    assert_eq!(exact(2, 4), Some(big(2059)));
    for n in [0, 1, 3, 6, 8] {
        for m in 3..=40u64 {
            assert_eq!(exact(n, m), Some(big(1) << m));
        }
    }
    assert_eq!(ct_value(11, 1), Err(GrowthError::UndefinedCt(11)));
}

#[test]
fn counting_functions_increase_where_exact() {
    let g = Growth::default();
    for n in 0..=10u8 {
        let vals: Vec<BigUint> = (0..=6u64).map_while(|m| g.ct_exact(n, &big(m))).collect();
        assert!(vals.len() >= 2 || n >= 7, "Ct_{n}: {} exact points", vals.len());
        for w in vals.windows(2) {
            assert!(w[1] > w[0], "Ct_{n}");
        }
    }
}

#[test]
fn induction_rows() {
    let r = verify_induction_lemmas();
    for n in 0..=10 {
        assert!(r.rows.iter().any(|row| row.row == n), "row {n}");
    }
    assert!(r.passed());
    for row in &r.rows {
        assert_ne!(row.base, StepStatus::Failed, "row {}", row.row);
        if row.step == StepStatus::Verified {
            assert!(!row.trace.is_empty(), "row {}", row.row);
        }
    }
}

#[test]
fn chain_is_proven_with_closed_traces() {
    let steps = verify_section4_chain();
    assert_eq!(steps.len(), 10);
    for s in &steps {
        assert!(s.ok, "{}: {:?}", s.claim, s.verdict);
    }
    assert_eq!(steps.last().unwrap().claim, "F[4](F[4](254)) > F[5](1)");
}

#[test]
fn chain_survives_a_small_budget() {
    for s in verify_section4_chain_with(&Growth::new(64)) {
        assert!(s.ok, "{}: {:?}", s.claim, s.verdict);
    }
}

#[test]
fn injected_value_is_caught() {
    let g = Growth::default().with_value(4, 1, big(9));
    assert_eq!(g.ct_exact(4, &big(1)), Some(big(9)));
    let steps = verify_section4_chain_with(&g);
    assert!(!steps[0].ok);
    // Closed-form rows cannot be overridden.
    let g = Growth::default().with_value(3, 5, big(7));
    assert_eq!(g.ct_exact(3, &big(5)), Some(big(32)));
}

#[test]
fn huge_values_stay_symbolic() {
    let g = Growth::new(64);
    assert!(g.f(4, &big(2)).is_symbolic());
    assert!(g.ct(4, &big(2)).unwrap().is_symbolic());
    let v = bound_compare(&parse_bound("F[5](1)").unwrap(), &parse_bound("F[4](65533)").unwrap());
    assert!(matches!(v.kind, VerdictKind::ProvenEQ | VerdictKind::ProvenLE), "{:?}", v.trace);
    let v = bound_compare(&parse_bound("F[4](3)").unwrap(), &parse_bound("F[4](2) + 1").unwrap());
    assert_eq!(v.kind, VerdictKind::ProvenGT);
    assert!(v.trace_is_closed());
}

#[test]
fn parse_errors() {
    assert!(matches!(parse_bound("F[4](1"), Err(GrowthError::Syntax { .. })));
    assert!(matches!(parse_bound("Ct[12](1)"), Err(GrowthError::UndefinedCt(12))));
    assert!(matches!(parse_bound("Ctfunc[5,3](1)"), Err(GrowthError::BadChain { n: 5, m: 3 })));
    assert!(matches!(parse_bound("1 2"), Err(GrowthError::Syntax { .. })));
}

fn arb_expr() -> impl Strategy<Value = BoundExpr> {
    let leaf = (0u64..6).prop_map(BoundExpr::num);
    leaf.prop_recursive(3, 8, 1, |inner| {
        prop_oneof![
            (0u32..5, inner.clone()).prop_map(|(k, x)| BoundExpr::f(k, x)),
            (0u8..=10, inner.clone()).prop_map(|(n, x)| BoundExpr::ct(n, x)),
            (0u8..10, 1u8..=3, inner.clone()).prop_map(|(n, d, x)| BoundExpr::chain(n, (n + d).min(11), x)),
            (0i64..20, inner).prop_map(|(c, x)| x.plus(c)),
        ]
    })
}

fn exact(g: &Growth, e: &BoundExpr) -> Option<BigUint> {
    match g.eval(e) {
        Ok(Value::Exact(v)) => Some(v),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn display_parse_roundtrip(e in arb_expr()) {
        prop_assert_eq!(parse_bound(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn small_budget_agrees_with_large(e in arb_expr()) {
        let (small, large) = (Growth::new(64), Growth::new(1 << 16));
        if let Some(v) = exact(&small, &e) {
            prop_assert_eq!(Some(v), exact(&large, &e));
        } else if let Some(v) = exact(&large, &e) {
            prop_assert!(v.bits() > 64);
        }
    }

    // Verdicts reached under a tiny budget must agree with big-integer truth.
    #[test]
    fn symbolic_verdicts_are_sound(a in arb_expr(), b in arb_expr()) {
        let large = Growth::new(1 << 16);
        let (Some(x), Some(y)) = (exact(&large, &a), exact(&large, &b)) else { return Ok(()) };
        let v = Growth::new(64).compare(&a, &b);
        let ok = match (v.kind, x.cmp(&y)) {
            (VerdictKind::Unknown, _) => true,
            (VerdictKind::ProvenLT, o) => o == Ordering::Less,
            (VerdictKind::ProvenLE, o) => o != Ordering::Greater,
            (VerdictKind::ProvenEQ, o) => o == Ordering::Equal,
            (VerdictKind::ProvenGE, o) => o != Ordering::Less,
            (VerdictKind::ProvenGT, o) => o == Ordering::Greater,
        };
        prop_assert!(ok, "{} vs {}: {:?} {:?}", a, b, v.kind, v.trace);
    }
}
