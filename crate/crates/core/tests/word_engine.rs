mod common;

use common::*;
use coxfold::classify::{classify_component, Classification};
use coxfold::coxeter::{CoxeterMatrix, GenSet, Label, Word};
use proptest::prelude::*;

fn finite_order(m: &CoxeterMatrix) -> usize {
    match classify_component(m, m.all()) {
        Classification::Finite(t) => t.group_order.try_into().unwrap(),
        Classification::Infinite => panic!("expected a finite type"),
    }
}

#[test]
fn group_orders_match_root_image_search() {
    let mut systems = vec![type_a(1), type_a(2), type_a(3), type_b(2), type_b(3), type_h(3), type_d(4)];
    systems.extend((3..=24).map(|m| dihedral(F(m))));
    for m in systems {
        let sys = system(m.clone());
        let expected = finite_order(&m);
        assert_eq!(order_by_root_images(&sys, 10_000), expected, "{m:?}");
        // the ShortLex ball covers the group too
        let (ball, complete) = sys.ball(usize::MAX, 10_000);
        assert!(complete);
        assert_eq!(ball.len(), expected);
    }
}

const LABELS: [Label; 6] = [F(2), F(3), F(4), F(5), F(6), Inf];

#[test]
fn automaton_matches_root_tracking_rank_at_most_3() {
    let mut systems = vec![type_a(1)];
    systems.extend(LABELS.iter().map(|&m| dihedral(m)));
    for &a in &LABELS {
        for &b in &LABELS {
            for &c in &LABELS {
                systems.push(triangle(a, b, c));
            }
        }
    }
    for m in systems {
        let sys = system(m.clone());
        assert_eq!(compare_all_words(&sys, 8), 0, "{m:?}");
    }
}

#[test]
fn automaton_matches_root_tracking_extra_systems() {
    let mut systems = vec![type_b(2), type_a(3), type_d(4)];
    systems.extend((3..=24).map(|m| dihedral(F(m))));
    for m in systems {
        let sys = system(m.clone());
        assert_eq!(compare_all_words(&sys, 8), 0, "{m:?}");
    }
}

#[test]
fn bourbaki_oracle_on_finite_trees() {
    let mut systems: Vec<CoxeterMatrix> = (1..=7).map(type_a).collect();
    systems.extend((2..=6).map(type_b));
    systems.extend((4..=7).map(type_d));
    systems.extend([type_e(6), type_e(7), type_e(8), type_f4(), type_h(3), type_h(4)]);
    systems.extend((3..=24).map(|m| dihedral(F(m))));
    for m in &systems {
        assert_eq!(bourbaki_violations(m), 0, "{m:?}");
    }
}

#[test]
fn speyer_oracle_on_infinite_systems() {
    for m in [dihedral(Inf), affine_a2(), triangle(F(3), F(3), F(4)), triangle(F(2), F(3), F(7)), path(&[F(3), F(3), F(3), Inf])] {
        let sys = system(m.clone());
        let c = product(0..m.rank());
        assert_eq!(sys.all_powers_reduced(&c), Ok(true), "{m:?}");
        for k in 1..=12 {
            let w = power(&c, k);
            assert!(sys.is_reduced_by_roots(&w), "{m:?} power {k}");
        }
    }
    // a finite group: some power of the Coxeter element stops being reduced
    let a3 = system(type_a(3));
    assert_eq!(a3.all_powers_reduced(&product(0..3)), Ok(false));
}

/// Positive roots of the affine A2 system that lie below `delta = a0 + a1 + a2`
/// are exactly its minimal roots: the six roots with 0/1 coefficients.
#[test]
fn affine_a2_minimal_roots() {
    let sys = system(affine_a2());
    let table = sys.minimal_roots().unwrap();
    let as_ints: Vec<Vec<i64>> = table
        .roots()
        .iter()
        .map(|r| r.coords.iter().map(|c| c.to_f64().round() as i64).collect())
        .collect();
    let mut got = as_ints.clone();
    got.sort();
    let mut expected = vec![
        vec![0, 0, 1],
        vec![0, 1, 0],
        vec![0, 1, 1],
        vec![1, 0, 0],
        vec![1, 0, 1],
        vec![1, 1, 0],
    ];
    expected.sort();
    assert_eq!(got, expected);
}

#[test]
fn finite_minimal_roots_are_all_positive_roots() {
    for m in [type_a(2), type_b(2), type_a(3), type_h(3), type_d(4), type_b(3), dihedral(F(7))] {
        let n = match classify_component(&m, m.all()) {
            Classification::Finite(t) => t.positive_roots as usize,
            Classification::Infinite => unreachable!(),
        };
        assert_eq!(system(m.clone()).minimal_roots().unwrap().len(), n, "{m:?}");
    }
}

#[test]
fn a4_displayed_computation() {
    // s1 - t1 - t2 - s2
    let m = CoxeterMatrix::from_named_edges(
        &["s1", "t1", "t2", "s2"],
        &[("s1", "t1", F(3)), ("t1", "t2", F(3)), ("t2", "s2", F(3))],
    )
    .unwrap();
    let sys = system(m.clone());
    let idx = |n: &str| m.index_of(n).unwrap();
    let ws = Word(vec![idx("s2"), idx("s1")]);
    let wt = Word(vec![idx("t2"), idx("t1"), idx("t2")]);
    let alt = coxfold::coxeter::alternating_word(&ws, &wt, 4);
    assert_eq!(alt.len(), 10);
    assert!(sys.is_reduced(&alt));
    assert_eq!(sys.right_descents(&alt), m.all());
    let u = sys.normal_form(&ws.concat(&wt));
    assert!(sys.order_exactly(&u, 4));
    let square = sys.power(&u, 2);
    assert_eq!(square, sys.longest_element(m.all()).unwrap());
}

#[test]
fn parabolic_decomposition() {
    let sys = system(type_b(3));
    let (w, _) = sys.ball(usize::MAX, 100);
    let j = GenSet::from_iter([0, 1]);
    for x in &w {
        let (y, z) = sys.parabolic_decompose(x, j);
        assert!(sys.right_descents(y.word()).intersection(j).is_empty());
        assert!(z.word().letters().iter().all(|&s| j.contains(s)));
        assert_eq!(y.len() + z.len(), x.len());
        assert_eq!(&sys.multiply(&y, &z), x);
    }
}

fn any_word(rank: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..rank, 0..max).prop_map(Word)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn length_is_subadditive(a in any_word(4, 12), b in any_word(4, 12), which in 0usize..3) {
        let m = [type_b(4), path(&[F(3), F(5), Inf]), path(&[F(4), F(2), F(6)])][which].clone();
        let sys = system(m);
        let (x, y) = (sys.normal_form(&a), sys.normal_form(&b));
        let xy = sys.multiply(&x, &y);
        prop_assert!(xy.len() <= x.len() + y.len());
        prop_assert_eq!(xy.len() == x.len() + y.len(), sys.is_reduced(&x.word().concat(y.word())));
        prop_assert!(sys.is_reduced(xy.word()));
        prop_assert_eq!(sys.normal_form(xy.word()), xy.clone());
        prop_assert_eq!(sys.multiply(&xy, &sys.inverse(&y)), x);
    }

    #[test]
    fn descents_are_consistent(a in any_word(4, 14)) {
        let sys = system(type_d(4));
        let x = sys.normal_form(&a);
        for s in 0..4 {
            let xs = sys.multiply(&x, &sys.element(&[s]));
            prop_assert_eq!(sys.right_descents(x.word()).contains(s), xs.len() < x.len());
            let sx = sys.multiply(&sys.element(&[s]), &x);
            prop_assert_eq!(sys.left_descents(x.word()).contains(s), sx.len() < x.len());
        }
    }
}
