use super::catalog::{self, a, e, h5, hyperbolic, k7, nikulin, rank_one};
use super::*;
use crate::exactmath::{Int, IntMatrix, Rat, Signature};
use num_traits::Signed;
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn u() -> Lattice {
    hyperbolic(1).unwrap()
}

fn e8() -> Lattice {
    e(8).unwrap()
}

#[test]
fn direct_sum_examples() {
    let uu = u().direct_sum(&u());
    assert_eq!(uu.rank(), 4);
    assert_eq!(uu.gram().det(), Int::from(1));

    let t6 = u()
        .direct_sum(&hyperbolic(3).unwrap())
        .direct_sum(&a(2).unwrap())
        .direct_sum(&a(2).unwrap());
    let parts = [u(), hyperbolic(3).unwrap(), a(2).unwrap(), a(2).unwrap()];
    let product: Int = parts.iter().map(|p| p.gram().det()).product();
    assert_eq!(t6.rank(), 8);
    assert_eq!(t6.gram().det(), product);
    assert_eq!(t6.det().magnitude().to_string(), "81");
}

#[test]
fn constructor_rejections() {
    assert_eq!(Lattice::new(IntMatrix::zeros(0, 0)), Err(LatticeError::Empty));
    assert_eq!(
        Lattice::from_i64(&[&[1, 0], &[0, 2]]),
        Err(LatticeError::Odd("1".into()))
    );
    assert_eq!(
        Lattice::from_i64(&[&[2, 1], &[0, 2]]),
        Err(LatticeError::NotSymmetric)
    );
    assert_eq!(
        Lattice::from_i64(&[&[2, 2], &[2, 2]]),
        Err(LatticeError::Singular)
    );
}

#[test]
fn rescale_examples() {
    let u5 = u().rescale(5).unwrap();
    assert_eq!(u5.gram(), &IntMatrix::from_i64(&[&[0, 5], &[5, 0]]));
    let e82 = e8().rescale(2).unwrap();
    assert_eq!(e82.det(), &Int::from(256));
    assert_eq!(e82.gram().det(), Int::from(256));
    let a2 = a(2).unwrap();
    assert_eq!(a2.signature(), Signature::new(0, 2));
    assert_eq!(a2.rescale(-1).unwrap().signature(), Signature::new(2, 0));
    assert_eq!(u().rescale(0), Err(LatticeError::ZeroScale));
}

#[test]
fn root_lattice_determinants() {
    // |det A_n| = n + 1, |det D_n| = 4, |det E_n| = 9 − n
    for n in 1..=8 {
        assert_eq!(a(n).unwrap().det().magnitude().to_string(), (n + 1).to_string());
    }
    for n in 4..=8 {
        assert_eq!(catalog::d(n).unwrap().det().magnitude().to_string(), "4");
    }
    for n in 6..=8 {
        assert_eq!(e(n).unwrap().det().magnitude().to_string(), (9 - n).to_string());
        assert_eq!(e(n).unwrap().signature(), Signature::new(0, n));
    }
}

#[test]
fn discriminant_group_examples() {
    assert!(u().discriminant_group().is_trivial());
    assert_eq!(u().rescale(5).unwrap().invariant_factors(), ints(&[5, 5]));
    assert_eq!(e8().rescale(2).unwrap().invariant_factors(), ints(&[2; 8]));
}

#[test]
fn discriminant_form_examples() {
    let qa2 = a(2).unwrap().discriminant_form();
    assert_eq!(qa2.group().invariant_factors(), &ints(&[3])[..]);
    // −2/3 mod 2ℤ
    assert_eq!(qa2.q_values(), &[rat(4, 3)]);

    let q2 = rank_one(2).unwrap().discriminant_form();
    assert_eq!(q2.q_values(), &[rat(1, 2)]);
}

#[test]
fn nikulin_form_matches_u2_cubed() {
    let n = nikulin();
    assert_eq!(n.rank(), 8);
    assert_eq!(n.signature(), Signature::new(0, 8));
    assert_eq!(n.invariant_factors(), ints(&[2; 6]));
    let u2 = hyperbolic(2).unwrap();
    let u2_cubed = u2.direct_sum(&u2).direct_sum(&u2);
    assert!(n
        .discriminant_form()
        .is_isometric(&u2_cubed.discriminant_form())
        .unwrap());
    // ⟨−2⟩⁶ has the same group but a non-integral form
    let minus2 = rank_one(-2).unwrap();
    let six = (1..6).fold(minus2.clone(), |acc, _| acc.direct_sum(&minus2));
    assert!(!n
        .discriminant_form()
        .is_isometric(&six.discriminant_form())
        .unwrap());
}

#[test]
fn isometry_distinguishes_signs() {
    // q_{A2} takes 4/3 on generators, q_{A2(-1)} takes 2/3
    let qa = a(2).unwrap().discriminant_form();
    let qb = a(2).unwrap().rescale(-1).unwrap().discriminant_form();
    assert!(!qa.is_isometric(&qb).unwrap());
    assert!(qa.negated().is_isometric(&qb).unwrap());
    // U(3) is isometric to A2 ⊕ A2(−1) on discriminant forms
    let mixed = a(2).unwrap().direct_sum(&a(2).unwrap().rescale(-1).unwrap());
    assert!(hyperbolic(3)
        .unwrap()
        .discriminant_form()
        .is_isometric(&mixed.discriminant_form())
        .unwrap());
}

#[test]
fn length_examples() {
    assert_eq!(k7().det(), &Int::from(7));
    assert_eq!(k7().length(Some(7)), 1);
    assert_eq!(hyperbolic(3).unwrap().length(None), 2);
    let (_, perp4) = catalog::omega_perp(4).unwrap();
    assert_eq!(perp4.invariants().length(Some(4)), 4);
    assert_eq!(perp4.invariants().length(Some(2)), 6);
}

#[test]
fn p_elementary_examples() {
    assert!(e8().rescale(2).unwrap().is_p_elementary(2));
    let uh5 = u().direct_sum(&h5());
    assert!(uh5.is_p_elementary(5));
    assert_eq!(uh5.p_elementary_invariants(5).unwrap().a, 1);
    let mixed = hyperbolic(3).unwrap().direct_sum(&rank_one(2).unwrap());
    for p in [2, 3, 5, 7] {
        assert!(!mixed.is_p_elementary(p));
    }
    assert_eq!(mixed.elementary_prime(), None);
    assert_eq!(uh5.elementary_prime(), Some(5));
}

#[test]
fn delta_examples() {
    let u2e82 = hyperbolic(2).unwrap().direct_sum(&e8().rescale(2).unwrap());
    assert_eq!(u2e82.delta_invariant(), Ok(0));
    let l = rank_one(2).unwrap().direct_sum(&e8().rescale(2).unwrap());
    assert_eq!(l.delta_invariant(), Ok(1));
    assert_eq!(u().direct_sum(&nikulin()).delta_invariant(), Ok(0));
    assert_eq!(a(2).unwrap().delta_invariant(), Err(LatticeError::Not2Elementary));
}

#[test]
fn delta_large_group_path() {
    // |d| = 2^14 forces the generator-and-pairs path
    let l = e8()
        .rescale(2)
        .unwrap()
        .direct_sum(&hyperbolic(2).unwrap())
        .direct_sum(&hyperbolic(2).unwrap())
        .direct_sum(&hyperbolic(2).unwrap());
    assert_eq!(l.delta_invariant(), Ok(0));
    assert_eq!(l.direct_sum(&rank_one(-2).unwrap()).delta_invariant(), Ok(1));
}

#[test]
fn two_elementary_examples() {
    let inv = u().direct_sum(&nikulin()).two_elementary_invariants().unwrap();
    assert_eq!((inv.r, inv.a, inv.delta), (10, 6, Some(0)));
    let inv = rank_one(2)
        .unwrap()
        .direct_sum(&e8().rescale(2).unwrap())
        .two_elementary_invariants()
        .unwrap();
    assert_eq!((inv.r, inv.a, inv.delta), (9, 9, Some(1)));
    let inv = u()
        .direct_sum(&e8().rescale(2).unwrap())
        .two_elementary_invariants()
        .unwrap();
    assert_eq!((inv.r, inv.a, inv.delta), (10, 8, Some(0)));
}

#[test]
fn hyperbolic_p_elementary_examples() {
    assert_eq!(exists_hyperbolic_p_elementary(3, 6, 6), Ok(false));
    assert_eq!(exists_hyperbolic_p_elementary(7, 4, 3), Ok(true));
    assert_eq!(exists_hyperbolic_p_elementary(11, 2, 2), Ok(true));
    assert_eq!(
        exists_hyperbolic_p_elementary(2, 2, 2),
        Err(LatticeError::EvenPrime(2))
    );
}

#[test]
fn hyperbolic_witnesses_are_consistent() {
    let witnesses = [
        hyperbolic(7).unwrap().direct_sum(&k7()),
        hyperbolic(11).unwrap(),
        hyperbolic(3).unwrap(),
        hyperbolic(5).unwrap(),
        u().direct_sum(&a(2).unwrap()),
        hyperbolic(3).unwrap().direct_sum(&a(2).unwrap()),
        hyperbolic(3).unwrap().direct_sum(&a(2).unwrap()).direct_sum(&a(2).unwrap()),
        u().direct_sum(&e(6).unwrap()),
        hyperbolic(5).unwrap().direct_sum(&a(4).unwrap()),
        u().direct_sum(&a(6).unwrap()),
    ];
    for w in witnesses {
        assert!(w.signature().is_hyperbolic());
        let p = w.elementary_prime().expect("witness is p-elementary");
        let inv = w.p_elementary_invariants(p).unwrap();
        assert_eq!(
            exists_hyperbolic_p_elementary(p, inv.r, inv.a),
            Ok(true),
            "witness {} with p={p}",
            w.gram()
        );
    }
}

#[test]
fn two_elementary_existence_matches_catalog() {
    for (r, a, d) in [(9, 9, 1), (10, 10, 0), (10, 8, 0), (10, 6, 0), (18, 0, 0), (14, 4, 0)] {
        let (_, l) = catalog::s_lattice(r, a, d).unwrap();
        let inv = l.two_elementary_invariants().unwrap();
        assert!(exists_two_elementary(inv.signature, inv.a, d));
    }
    // signature index −11 is not ±1 mod 8
    assert!(!exists_two_elementary(Signature::new(1, 12), 1, 1));
}

#[test]
fn s_lattice_representatives() {
    let expected = [
        ((9, 9, 1), "<2> + E8(2)"),
        ((10, 10, 0), "U(2) + E8(2)"),
        ((10, 8, 0), "U + E8(2)"),
        ((10, 6, 0), "U + N"),
        ((18, 0, 0), "U + E8 + E8"),
    ];
    for ((r, a, d), expr) in expected {
        let (got, l) = catalog::s_lattice(r, a, d).unwrap();
        assert_eq!(got, expr);
        assert_eq!(l.rank(), r);
    }
    assert!(matches!(
        catalog::s_lattice(13, 1, 1),
        Err(LatticeError::UnrealizableInvariants(_))
    ));
}

#[test]
fn every_valid_hyperbolic_triple_has_a_representative() {
    for r in 1..=20usize {
        for a in 0..=r.min(22 - r) {
            for d in 0..=1u8 {
                let sig = Signature::new(1, r - 1);
                let got = catalog::s_lattice(r, a, d);
                assert_eq!(
                    got.is_ok(),
                    exists_two_elementary(sig, a, d),
                    "({r},{a},{d})"
                );
            }
        }
    }
}

#[test]
fn delta_of_sum_with_minus_two() {
    for r in 1..=19usize {
        for a in 0..=r.min(21 - r) {
            for d in 0..=1u8 {
                let Ok((_, l)) = catalog::s_lattice(r, a, d) else {
                    continue;
                };
                let bigger = l.direct_sum(&rank_one(-2).unwrap());
                assert_eq!(bigger.delta_invariant(), Ok(1));
            }
        }
    }
}

#[test]
fn overlattice_index_and_determinant() {
    let n = rank_one(-2).unwrap();
    let base = (1..8).fold(n.clone(), |acc, _| acc.direct_sum(&n));
    let over = base.overlattice(&[vec![rat(1, 2); 8]]).unwrap();
    assert_eq!(over.index, Int::from(2));
    assert_eq!(over.lattice.det() * Int::from(4), *base.det());
    // a non-isotropic class gives an odd lattice
    let mut v = vec![rat(0, 1); 8];
    v[0] = rat(1, 2);
    v[1] = rat(1, 2);
    assert!(matches!(base.overlattice(&[v]), Err(LatticeError::Odd(_))));
}

#[test]
fn json_round_trip() {
    let l = k7().with_name("K7");
    let json = serde_json::to_string(&l.to_json()).unwrap();
    assert_eq!(json, r#"{"gram":[[-4,1],[1,-2]],"name":"K7"}"#);
    let back: LatticeJson = serde_json::from_str(&json).unwrap();
    assert_eq!(Lattice::from_json(&back).unwrap(), l);
}

pub(crate) fn even_lattice(max_rank: usize, bound: i64) -> impl Strategy<Value = Lattice> {
    (1..=max_rank)
        .prop_flat_map(move |n| {
            (
                proptest::collection::vec(-bound..=bound, n * (n + 1) / 2),
                Just(n),
            )
        })
        .prop_filter_map("singular", |(v, n)| {
            let mut g = IntMatrix::zeros(n, n);
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    let x = if i == j { 2 * (v[k] / 2) } else { v[k] };
                    g[(i, j)] = Int::from(x);
                    g[(j, i)] = Int::from(x);
                    k += 1;
                }
            }
            Lattice::new(g).ok()
        })
}

proptest! {
    #[test]
    fn form_polarization(l in even_lattice(5, 6)) {
        let f = l.discriminant_form();
        let n = f.q_values().len();
        for i in 0..n {
            for j in 0..n {
                let mut x = vec![0i64; n];
                let mut y = vec![0i64; n];
                x[i] += 1;
                y[j] += 1;
                let mut s = x.clone();
                s[j] += 1;
                let lhs = reduce_mod(&(f.q(&s) - f.q(&x) - f.q(&y)), 2);
                let rhs = reduce_mod(&(f.b(&x, &y) * Int::from(2)), 2);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn group_order_is_determinant(l in even_lattice(6, 8)) {
        prop_assert_eq!(l.discriminant_group().order(), l.det().abs());
    }

    #[test]
    fn generators_have_their_orders(l in even_lattice(5, 6)) {
        // d·gᵢ lies in L and (d/p)·gᵢ does not
        let g = l.discriminant_group();
        for (x, d) in g.generators().iter().zip(g.invariant_factors()) {
            prop_assert!(x.iter().all(|c| (c * d).is_integer()));
            for (p, _) in crate::exactmath::factorize(d) {
                let smaller = d / p;
                prop_assert!(!x.iter().all(|c| (c * &smaller).is_integer()));
            }
        }
    }
}
