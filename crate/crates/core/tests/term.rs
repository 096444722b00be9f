use lda_core::term::{j_sub, parse_j_index, parse_term, render_compact, render_term, NameTable, Term, TermError};
use proptest::prelude::*;

/// Every term of depth at most `d`, optionally without composition.
fn all_terms(d: usize, compose: bool) -> Vec<Term> {
    let mut all = vec![Term::Generator];
    for _ in 0..d {
        let mut next = vec![Term::Generator];
        for l in &all {
            for r in &all {
                next.push(Term::apply(l.clone(), r.clone()));
                if compose {
                    next.push(Term::compose(l.clone(), r.clone()));
                }
            }
        }
        all = next;
    }
    all
}

#[test]
fn term_counts() {
    // t(d) = 1 + k·t(d-1)^2 with k operators.
    assert_eq!(all_terms(3, true).len(), 723);
    assert_eq!(all_terms(4, false).len(), 677);
}

#[test]
fn exhaustive_roundtrip_with_composition() {
    let names = NameTable::empty();
    let terms = all_terms(4, true);
    assert_eq!(terms.len(), 1 + 2 * 723 * 723);
    for t in &terms {
        assert_eq!(&parse_term(&render_term(t), &names).unwrap(), t, "{}", render_term(t));
    }
}

#[test]
fn exhaustive_roundtrip_application_only() {
    let names = NameTable::empty();
    let mut n = 0;
    for t in all_terms(5, false) {
        let s = render_compact(&t);
        assert_eq!(parse_term(&s, &names).unwrap(), t, "{s}");
        n += 1;
    }
    assert_eq!(n, 458_330);
}

fn arb_term(depth: u32) -> impl Strategy<Value = Term> {
    Just(Term::Generator).prop_recursive(depth, 64, 2, |inner| {
        (inner.clone(), inner, any::<bool>()).prop_map(|(l, r, c)| {
            if c {
                Term::compose(l, r)
            } else {
                Term::apply(l, r)
            }
        })
    })
}

proptest! {
    #[test]
    fn deep_roundtrip(t in arb_term(6)) {
        let names = NameTable::empty();
        prop_assert_eq!(parse_term(&render_term(&t), &names).unwrap(), t.clone());
        prop_assert_eq!(parse_term(&render_compact(&t), &names).unwrap(), t.clone());
        prop_assert!(!render_term(&t).contains(char::is_numeric));
    }

    #[test]
    fn names_expand_once(t in arb_term(4)) {
        let mut names = NameTable::prelude();
        names.bind("x", &render_compact(&t)).unwrap();
        names.bind("y", "x(x) o k").unwrap();
        let y = parse_term("y", &names).unwrap();
        let k = names.get("k").unwrap().clone();
        prop_assert_eq!(&y, &Term::compose(Term::apply(t.clone(), t.clone()), k));
        // Rebinding x does not disturb y.
        names.bind("x", "j").unwrap();
        prop_assert_eq!(&parse_term("y", &names).unwrap(), &y);
    }
}

#[test]
fn j_sub_is_left_nested() {
    let names = NameTable::empty();
    let mut expect = Term::Generator;
    for n in 1..=64 {
        let t = j_sub(n).unwrap();
        assert_eq!(t, expect);
        assert_eq!(t.j_index(), Some(n));
        assert_eq!(t.leaves() as u64, n);
        assert_eq!(parse_term(&format!("j{n}"), &names).unwrap(), t);
        assert_eq!(render_compact(&t), if n == 1 { "j".to_string() } else { format!("j{n}") });
        expect = Term::apply(expect, Term::Generator);
    }
    assert_eq!(j_sub(0), Err(TermError::ZeroIndex));
}

#[test]
fn concrete_syntax() {
    let names = NameTable::prelude();
    let p = |s: &str| parse_term(s, &names).unwrap();
    assert_eq!(p("jjj"), j_sub(3).unwrap());
    assert_eq!(p("j(j)(j)"), j_sub(3).unwrap());
    assert_eq!(p("j(jj)"), Term::apply(Term::Generator, j_sub(2).unwrap()));
    assert_eq!(p("j o j j"), Term::compose(Term::Generator, j_sub(2).unwrap()));
    assert_eq!(p("k''"), p("j9(j14)"));
    assert_eq!(p("kpp"), p("k''"));
    assert_eq!(p("k'"), Term::apply(j_sub(10).unwrap(), j_sub(11).unwrap()));
    assert_eq!(render_compact(&p("k''")), "j9j14");
    assert_eq!(parse_j_index("j07"), None);
    assert_eq!(parse_j_index("j12"), Some(12));
}

#[test]
fn parse_errors() {
    let names = NameTable::prelude();
    for bad in ["", "j(", "j)", "o j", "j o", "(j o)"] {
        assert!(matches!(parse_term(bad, &names), Err(TermError::Syntax { .. } | TermError::ZeroIndex)), "{bad:?}");
    }
    assert!(parse_term("j0", &names).is_err());
    assert!(matches!(parse_term("j(zz)", &names), Err(TermError::UnknownName { pos: 2, .. })));
    let mut n = NameTable::empty();
    assert_eq!(n.bind("x", "x(j)"), Err(TermError::CyclicBinding("x".into())));
    assert!(n.bind("j3", "j").is_err());
}
