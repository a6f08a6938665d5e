use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::glue::{primitive_embedding_length_obstruction, EmbeddingStatus};
use crate::lattice::catalog;

fn inv(r: usize, a: usize, delta: u8) -> InvolutionInvariants {
    InvolutionInvariants::new(r, a, delta).unwrap()
}

#[test]
fn invariant_validation() {
    assert!(InvolutionInvariants::new(0, 0, 0).is_err());
    assert!(InvolutionInvariants::new(21, 1, 1).is_err());
    assert!(InvolutionInvariants::new(20, 3, 1).is_err());
    assert!(InvolutionInvariants::new(10, 6, 2).is_err());
    assert!(InvolutionInvariants::new(10, 11, 1).is_err());
    assert_eq!(InvolutionInvariants::grid().count(), 2 * (1..=20usize).map(|r| r.min(22 - r) + 1).sum::<usize>());
}

#[test]
fn fixed_locus_examples() {
    let fl = involution_invariants_to_fixed_locus(inv(10, 6, 0)).unwrap();
    assert_eq!((fl.k, fl.g, fl.rational_curves()), (3, 3, 2));
    let fl = involution_invariants_to_fixed_locus(inv(9, 9, 1)).unwrap();
    assert_eq!((fl.k, fl.g), (1, 2));
    let fl = involution_invariants_to_fixed_locus(inv(18, 0, 0)).unwrap();
    assert_eq!((fl.k, fl.g, fl.rational_curves()), (10, 2, 9));
    assert_eq!(
        involution_invariants_to_fixed_locus(inv(10, 10, 0)).unwrap().kind,
        FixedLocusKind::Empty
    );
    assert_eq!(
        involution_invariants_to_fixed_locus(inv(10, 8, 0)).unwrap().kind,
        FixedLocusKind::TwoElliptic
    );
    assert!(matches!(
        involution_invariants_to_fixed_locus(inv(13, 1, 1)),
        Err(FamilyError::InvalidTriple { .. })
    ));
}

#[test]
fn fixed_locus_matches_two_torsion_table() {
    let table = Registry::builtin().fixture("order-2-two-torsion").unwrap();
    for row in &table.rows {
        let nums: Vec<usize> = row[0]
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|x| x.parse().unwrap())
            .collect();
        let fl = involution_invariants_to_fixed_locus(inv(nums[0], nums[1], nums[2] as u8)).unwrap();
        assert_eq!(fl.rational_curves().to_string(), row[3], "{row:?}");
        let g = if fl.g == 0 { "-".to_string() } else { fl.g.to_string() };
        assert_eq!(g, row[4], "{row:?}");
    }
}

#[test]
fn symplectic_involution_examples() {
    assert!(admits_symplectic_involution(inv(9, 9, 1)));
    assert!(!admits_symplectic_involution(inv(14, 2, 1)));
    assert!(admits_symplectic_involution(inv(10, 6, 0)));
    assert!(!admits_symplectic_involution(inv(10, 6, 1)));
    assert!(!admits_symplectic_involution(inv(8, 8, 1)));
}

/// Closure of `(9, 9, 1)` under `(r, a) → (r + 1, a ± 1)` inside the
/// realizable triples with `δ = 1`.
fn odd_closure() -> BTreeSet<InvolutionInvariants> {
    let mut seen = BTreeSet::from([inv(9, 9, 1)]);
    let mut stack = vec![inv(9, 9, 1)];
    while let Some(x) = stack.pop() {
        for a in [x.a + 1, x.a.wrapping_sub(1)] {
            if let Ok(y) = InvolutionInvariants::new(x.r + 1, a, 1) {
                if y.is_realizable() && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    seen
}

#[test]
fn odd_criterion_is_the_closure_of_nine_nine_one() {
    let criterion: BTreeSet<_> = InvolutionInvariants::grid()
        .filter(|x| x.delta == 1 && x.is_realizable() && admits_symplectic_involution(*x))
        .collect();
    assert_eq!(criterion, odd_closure());
}

#[test]
fn positive_triples_pass_the_length_tests() {
    let e8_2 = catalog::omega(2).unwrap().invariants();
    let mut checked = 0;
    for x in InvolutionInvariants::grid() {
        if !admits_symplectic_involution(x) || !x.is_realizable() {
            continue;
        }
        let (_, s) = catalog::s_lattice(x.r, x.a, x.delta).unwrap();
        let v = primitive_embedding_length_obstruction(&e8_2, &s.invariants()).unwrap();
        assert_ne!(v.status, EmbeddingStatus::Obstructed, "{x}: {}", v.reason);
        checked += 1;
    }
    assert_eq!(checked, 38);
}

proptest! {
    #[test]
    fn positive_set_closed_under_adding_a_minus_two(r in 1usize..=19, a in 0usize..=11) {
        let Ok(x) = InvolutionInvariants::new(r, a, 1) else { return Ok(()) };
        prop_assume!(x.is_realizable() && admits_symplectic_involution(x));
        for a2 in [a + 1, a.wrapping_sub(1)] {
            if let Ok(y) = InvolutionInvariants::new(r + 1, a2, 1) {
                if y.is_realizable() {
                    prop_assert!(admits_symplectic_involution(y));
                }
            }
        }
    }
}

#[test]
fn order_three_examples() {
    let f = |n, k| admits_symplectic_order3(FixedLocusP3 { n, k });
    assert_eq!(f(6, 3), Ok(true));
    assert_eq!(f(9, 6), Ok(true));
    assert_eq!(f(8, 6), Ok(false));
    assert_eq!(f(5, 2), Ok(false));
    assert_eq!(f(3, 0), Ok(false));
    assert!(matches!(f(10, 7), Err(FamilyError::UnknownFamily(_))));
    assert!(matches!(f(4, 0), Err(FamilyError::UnknownFamily(_))));
    assert_eq!(FixedLocusP3 { n: 0, k: 1 }.genus(), Some(4));
    assert_eq!(FixedLocusP3 { n: 8, k: 6 }.genus(), Some(1));
    assert_eq!(FixedLocusP3 { n: 6, k: 3 }.genus(), None);
    let trues: Vec<(usize, usize)> = (0..=12)
        .flat_map(|n| (0..=8).map(move |k| (n, k)))
        .filter(|&(n, k)| f(n, k) == Ok(true))
        .collect();
    assert_eq!(trues, vec![(6, 3), (7, 4), (8, 5), (9, 6)]);
}

#[test]
fn order_three_table_loci_are_admissible() {
    let table = Registry::builtin().fixture("order-3-elliptic").unwrap();
    for row in &table.rows {
        for cell in &row[2..] {
            let v: Vec<usize> = cell
                .trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .map(|x| x.parse().unwrap())
                .collect();
            assert!(FixedLocusP3 { n: v[0], k: v[1] }.is_admissible(), "{cell}");
        }
    }
}

#[test]
fn coexistence_verdicts() {
    use CoexistenceVerdict::*;
    assert_eq!(same_order_coexistence(7).unwrap().verdict, Impossible);
    assert_eq!(same_order_coexistence(8).unwrap().verdict, Impossible);
    assert_eq!(same_order_coexistence(5).unwrap().verdict, AtMostCountable);
    let six = same_order_coexistence(6).unwrap();
    assert_eq!(six.verdict, GenericImpossible);
    assert!(six.example.is_some());
    assert_eq!(same_order_coexistence(4).unwrap().verdict, GenericTwoDimImpossible);
    assert_eq!(same_order_coexistence(3).unwrap().verdict, CriterionByInvariants);
    assert!(same_order_coexistence(9).is_err());
    assert!(same_order_coexistence(1).is_err());
    for m in 2..=8 {
        if let Some((order, key)) = same_order_coexistence(m).unwrap().example {
            let fam = registry_lookup(order, &key).unwrap();
            assert_eq!(fam.symplectic_same_order.unwrap().value, true);
        }
    }
}

#[test]
fn moduli_examples() {
    assert_eq!(moduli_dimension(4, 5), Ok(0));
    assert_eq!(moduli_dimension(13, 2), Ok(11));
    assert_eq!(moduli_dimension(8, 3), Ok(3));
    for m in 3..=30 {
        assert_eq!(moduli_dimension(euler_phi(m) as usize, m), Ok(0), "m = {m}");
    }
    assert!(matches!(moduli_dimension(1, 2), Err(FamilyError::OutOfRange { .. })));
    assert!(matches!(moduli_dimension(6, 5), Err(FamilyError::NotDivisible { .. })));
    assert!(matches!(moduli_dimension(0, 3), Err(FamilyError::NotDivisible { .. })));
}

#[test]
fn table_rows_match_fixture() {
    let table = Registry::builtin().fixture("table-rank").unwrap();
    assert_eq!(table.rows.len(), 7);
    for (m, row) in (2..=8u64).zip(&table.rows) {
        let computed = tablerank_row(m).unwrap();
        assert_eq!(computed.cells().to_vec(), *row, "m = {m}");
    }
    let five = tablerank_row(5).unwrap();
    assert_eq!((five.rho.clone(), five.rank_t.clone(), five.moduli.clone()), (vec![18], vec![4], vec![0]));
    assert!(tablerank_row(7).unwrap().rho.is_empty());
    assert!(tablerank_row(9).is_err());
}

#[test]
fn omega_ranks_agree_with_catalog() {
    for m in 2..=5 {
        let rank = catalog::omega(m).unwrap().rank();
        assert_eq!(Registry::builtin().omega_rank(m).unwrap().rank, rank);
        let (_, perp) = catalog::omega_perp(m).unwrap();
        assert_eq!(perp.rank() + rank, 22);
    }
}

#[test]
fn extension_to_twice_the_order() {
    for p in [5, 13, 17, 19] {
        assert_eq!(p_to_2p_extension(p, false), Ok(true));
        assert_eq!(p_to_2p_extension(p, true), Ok(true));
    }
    for p in [7, 11] {
        assert_eq!(p_to_2p_extension(p, false), Ok(false));
        assert_eq!(p_to_2p_extension(p, true), Ok(true));
    }
    assert_eq!(p_to_2p_extension(3, true), Err(FamilyError::UnsupportedPrime(3)));
}

#[test]
fn fixed_point_counts() {
    assert_eq!(symplectic_fixed_points(2), Ok(8));
    assert_eq!(symplectic_fixed_points(3), Ok(6));
    assert_eq!(symplectic_fixed_points(5), Ok(4));
    assert_eq!(symplectic_fixed_points(4), Err(FamilyError::Unsupported(4)));
}

#[test]
fn registry_lookups() {
    let f = registry_lookup(3, "(6, 3)").unwrap();
    assert_eq!(f.t.as_ref().unwrap().value, "U + U(3) + A2*2");
    assert_eq!((f.ns_rank.value, f.moduli.value), (14, 3));
    assert_eq!(f.symplectic_same_order.as_ref().unwrap().value, true);
    let f = registry_lookup(7, "isolated-points").unwrap();
    assert_eq!(f.ns.as_ref().unwrap().value, "U(7) + K7");
    assert_eq!(f.t.as_ref().unwrap().value, "U(7) + U + E8 + A6");
    let f = registry_lookup(2, "10,10,0").unwrap();
    assert!(f.fixed_locus.value.starts_with("empty"));
    assert!(matches!(registry_lookup(3, "1,1"), Err(FamilyError::UnknownFamily(_))));
}

#[test]
fn registry_families_are_consistent() {
    let reg = Registry::builtin();
    for f in &reg.families {
        assert_eq!(f.ns_rank.value + f.t_rank.value, 22);
        assert_eq!(moduli_dimension(f.t_rank.value, f.order), Ok(f.moduli.value));
        if f.order == 2 {
            let v: Vec<usize> = f.fixed.split(',').map(|x| x.parse().unwrap()).collect();
            let x = inv(v[0], v[1], v[2] as u8);
            assert_eq!(f.symplectic_same_order.as_ref().unwrap().value, admits_symplectic_involution(x));
            let ns = crate::expr::make_named(&f.ns.as_ref().unwrap().value).unwrap();
            let e = ns.two_elementary_invariants().unwrap();
            assert_eq!((e.r, e.a, e.delta), (x.r, x.a, Some(x.delta)));
        }
        if f.order == 3 {
            let v: Vec<usize> = f.fixed.split(',').map(|x| x.parse().unwrap()).collect();
            let fl = FixedLocusP3 { n: v[0], k: v[1] };
            assert_eq!(f.symplectic_same_order.as_ref().unwrap().value, admits_symplectic_order3(fl).unwrap());
        }
        if let Some(p2p) = &f.p_to_2p {
            assert_eq!(p_to_2p_extension(f.order, false), Ok(p2p.value));
        }
    }
}

#[test]
fn corrupted_registry_is_rejected() {
    let src = include_str!("../../data/registry.json");
    let mut json: serde_json::Value = serde_json::from_str(src).unwrap();
    json["families"][0]["moduli"]["value"] = 5.into();
    assert!(matches!(
        Registry::from_json(&json.to_string()),
        Err(FamilyError::Registry(_))
    ));
    let mut json: serde_json::Value = serde_json::from_str(src).unwrap();
    json["families"][0]["ns_rank"]["value"] = 3.into();
    assert!(Registry::from_json(&json.to_string()).is_err());
    let mut json: serde_json::Value = serde_json::from_str(src).unwrap();
    json["version"] = 2.into();
    assert!(Registry::from_json(&json.to_string()).is_err());
    assert!(Registry::from_json("{").is_err());
}

#[test]
fn every_record_has_a_source() {
    let reg = Registry::builtin();
    for f in &reg.families {
        for s in [&f.fixed_locus.source, &f.ns_rank.source, &f.t_rank.source, &f.moduli.source] {
            assert!(!s.is_empty());
        }
    }
    assert!(reg.fixtures.iter().all(|t| !t.source.is_empty()));
}
