use lda_core::construction::{
    audit_grid, init_grid, run_grid, Extension, GridConfig, GridError, Named, SideCondition,
    COLUMNS,
};
use lda_core::laver::TableSet;
use lda_core::term::{parse_term, render_compact, NameTable, Term};
use proptest::prelude::*;

fn caps(pairs: &[(usize, usize)]) -> GridConfig {
    let mut c = [0; COLUMNS];
    for &(n, v) in pairs {
        c[n] = v;
    }
    GridConfig::with_caps(c)
}

#[test]
fn seed_identities_at_cap_three() {
    let st = run_grid(GridConfig::uniform(3)).unwrap();
    assert!(st.label_is(4, 0, Named::Kappa3));
    let a41 = st.label(4, 1).unwrap();
    assert!(st.same_label(a41, st.label(5, 0).unwrap()));
    assert!(st.label_is(5, 0, Named::Mu));

    // a(5,1) is ẽ6_0(κ3), and ẽ6_0 is k
    let k = st.column(6).entries[0].emb;
    assert_eq!(st.emb_name(k), "k");
    let k_kappa3 = st
        .lookup_app(k, st.named_label(Named::Kappa3))
        .expect("k(kappa_3) built");
    assert!(st.same_label(st.label(5, 1).unwrap(), k_kappa3));
    assert!(st.same_label(st.label(5, 2).unwrap(), st.label(6, 1).unwrap()));

    // column 1 and 3 seeds
    assert!(st.label_is(1, 0, Named::Kappa1) && st.label_is(1, 1, Named::Kappa2));
    assert!(st.label_is(3, 0, Named::Kappa2) && st.label_is(3, 1, Named::Kappa3));
    assert!(st.label_is(6, 1, Named::Nu) && st.label_is(8, 1, Named::Xi));
}

#[test]
fn column_eleven_is_kpp_over_column_six() {
    let st = run_grid(GridConfig::uniform(4)).unwrap();
    let kpp = st.kpp();
    let kpp_term = parse_term("k''", &NameTable::prelude()).unwrap();
    assert_eq!(st.emb_term(kpp), kpp_term);
    for i in 0..st.len(11) {
        let e6 = st.column(6).entries[i].emb;
        let e11 = st.column(11).entries[i].emb;
        assert_eq!(
            st.emb_term(e11),
            Term::apply(kpp_term.clone(), st.emb_term(e6))
        );
        let l = st.lookup_app(kpp, st.label(6, i).unwrap()).unwrap();
        assert!(st.same_label(st.label(11, i).unwrap(), l));
    }
}

#[test]
fn column_four_first_step_gives_eight() {
    let mut st = init_grid(caps(&[(4, 100), (5, 1), (6, 1)])).unwrap();
    assert_eq!(st.extend_column(4).unwrap(), Extension::Appended(8));
    assert_eq!(st.len(4), 8);
    assert_eq!(st.extend_column(4).unwrap(), Extension::Exhausted);
}

#[test]
fn column_five_from_one_column_six_entry() {
    let mut c = caps(&[(5, 50), (6, 1)]);
    c.caps[11] = 0;
    let st = run_grid(c).unwrap();
    assert_eq!(st.len(5), 2);
    let audit = audit_grid(&st, &TableSet::default(), 8).unwrap();
    assert!(audit.passed(), "{:?}", audit.failures());
    assert!(!audit.columns[5].truncated);
}

#[test]
fn column_four_length_is_min_of_cap_and_count() {
    for cap in [1, 3, 8, 12] {
        let st = run_grid(caps(&[(4, cap), (5, 1), (6, 1)])).unwrap();
        assert_eq!(st.len(4), cap.min(8), "cap {cap}");
    }
}

#[test]
fn column_two_reaches_ct2_of_three() {
    let st = run_grid(caps(&[(2, 100), (3, 3), (4, 2), (5, 1), (6, 1)])).unwrap();
    assert_eq!(st.len(2), 11);
    let audit = audit_grid(&st, &TableSet::default(), 8).unwrap();
    assert_eq!(audit.columns[2].count_law, Some(true));
    assert!(audit.passed(), "{:?}", audit.failures());
}

#[test]
fn column_seven_truncates_below_its_count() {
    let st = run_grid(caps(&[(7, 5), (8, 1)])).unwrap();
    assert_eq!(st.len(7), 5);
    let audit = audit_grid(&st, &TableSet::default(), 8).unwrap();
    let c7 = &audit.columns[7];
    assert!(c7.truncated && c7.count_law == Some(true));
    assert!(c7.count_detail[0].contains("Ct_7(1)"));
}

#[test]
fn missing_side_conditions_are_errors() {
    let mut cfg = GridConfig::uniform(3);
    cfg.side_conditions.remove(&SideCondition::E10MuXi);
    assert_eq!(
        run_grid(cfg).unwrap_err(),
        GridError::MissingSideCondition {
            column: 9,
            condition: SideCondition::E10MuXi
        }
    );
    let mut cfg = GridConfig::uniform(3);
    cfg.side_conditions.remove(&SideCondition::KjKappa1);
    assert!(matches!(
        run_grid(cfg).unwrap_err(),
        GridError::MissingSideCondition { column: 4, .. }
    ));
}

#[test]
fn entry_budget_is_enforced() {
    let mut cfg = GridConfig::uniform(20);
    cfg.max_entries = 50;
    assert_eq!(run_grid(cfg).unwrap_err(), GridError::Budget { limit: 50 });
}

#[test]
fn column_one_indices_from_tables() {
    let st = run_grid(GridConfig::uniform(3)).unwrap();
    let audit = audit_grid(&st, &TableSet::default(), 10).unwrap();
    assert!(audit.passed(), "{:?}", audit.failures());
    let exact: Vec<u32> = audit
        .column1_indices
        .iter()
        .filter_map(|c| c.exact())
        .collect();
    // κ1, κ2, κ3 = γ4, then κ2^14 = γ8
    assert_eq!(exact, vec![1, 2, 4, 8]);
}

#[test]
fn renderings_reparse() {
    let st = run_grid(GridConfig::uniform(3)).unwrap();
    let names = NameTable::empty();
    for n in 0..COLUMNS {
        for e in &st.column(n).entries {
            let t = st.emb_term(e.emb);
            assert_eq!(parse_term(&render_compact(&t), &names).unwrap(), t);
        }
    }
}

#[test]
fn dump_is_deterministic() {
    let a = run_grid(GridConfig::uniform(3)).unwrap().dump_json();
    let b = run_grid(GridConfig::uniform(3)).unwrap().dump_json();
    assert_eq!(a, b);
    assert_eq!(a.as_array().unwrap().len(), COLUMNS);
    assert_eq!(a[4]["entries"][0]["crit_label"], "a(4,0)");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prefix_stable(small in prop::array::uniform12(0usize..5), extra in prop::array::uniform12(0usize..4)) {
        let mut big = small;
        for (b, e) in big.iter_mut().zip(extra) {
            *b += e;
        }
        let s = run_grid(GridConfig::with_caps(small)).unwrap();
        let l = run_grid(GridConfig::with_caps(big)).unwrap();
        for n in 0..COLUMNS {
            prop_assert!(s.len(n) <= l.len(n));
            for i in 0..s.len(n) {
                prop_assert_eq!(
                    s.emb_term(s.column(n).entries[i].emb),
                    l.emb_term(l.column(n).entries[i].emb)
                );
            }
        }
        let audit = audit_grid(&l, &TableSet::default(), 6).unwrap();
        prop_assert!(audit.passed(), "{:?}", audit.failures());
    }
}
