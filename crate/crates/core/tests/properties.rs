//! Invariants as property tests.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;

use itmlab::cocycles::{a_matrix, cnorm, product, recursion_sequences, verify_column_growth, z_matrix};
use itmlab::constructions::{length_ledger, locate};
use itmlab::galois::{charpoly, discriminant, resultant};
use itmlab::group::{elementary_t, evaluate_word};
use itmlab::induction::{height_step, itinerary, params_from_itinerary, r_step, z_step, CaseTag};
use itmlab::rational::{fmt_rat, parse_rat};
use itmlab::sadic::{abelianization, chi, compose, tower_heights, tower_names_d};
use itmlab::{BtParams, Classification, Exit, Expr, Family, IntMatrix, IntervalSet, Itm, PolyZ, Rat, SuspensionState, ZOutcome};

fn ks_strategy(max_len: usize, kmax: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1..=kmax, 1..=max_len)
}

fn positive_lambda(d: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(1i64..200, d).prop_map(|v| {
        let s: i64 = v.iter().sum();
        v.into_iter().map(|x| Rat::new(x.into(), s.into())).collect()
    })
}

/// BT parameters on a grid of step `1/den`.
fn bt_grid() -> impl Strategy<Value = (i64, i64, i64)> {
    (2i64..13).prop_flat_map(|den| (Just(den), 0..=den)).prop_flat_map(|(den, a)| (Just(den), Just(a), 0..=a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_strings_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = Rat::new(p.into(), q.into());
        prop_assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
    }

    #[test]
    fn interval_set_algebra(a in prop::collection::vec((0i64..60, 1i64..20), 0..6),
                            b in prop::collection::vec((0i64..60, 1i64..20), 0..6)) {
        let mk = |v: &[(i64, i64)]| IntervalSet::from_intervals(
            v.iter().map(|&(s, l)| (Rat::new(s.into(), 80.into()), Rat::new((s + l).into(), 80.into()))).collect());
        let (x, y) = (mk(&a), mk(&b));
        let i = x.intersect(&y);
        prop_assert!(i.is_subset_of(&x) && i.is_subset_of(&y));
        let u = x.union(&y);
        prop_assert!(x.is_subset_of(&u) && y.is_subset_of(&u));
        prop_assert!(i.total_length() + u.total_length() == x.total_length() + y.total_length());
    }

    #[test]
    fn attractors_are_nested((den, a, b) in bt_grid()) {
        let p = BtParams::new(Rat::new(a.into(), den.into()), Rat::new(b.into(), den.into())).unwrap();
        let t = Itm::from_bt(&p).unwrap();
        let mut prev = IntervalSet::full();
        for n in 1..6 {
            let cur = t.attractor(n);
            prop_assert!(cur.is_subset_of(&prev));
            // one more image of the previous attractor, intersected, gives the same set
            prop_assert_eq!(&prev.intersect(&t.image(&prev)), &cur);
            prev = cur;
        }
    }

    #[test]
    fn grid_maps_are_finite_type((den, a, b) in bt_grid()) {
        // cells of width 1/den translate rigidly, so the attractor must
        // stabilise within den steps
        let p = BtParams::new(Rat::new(a.into(), den.into()), Rat::new(b.into(), den.into())).unwrap();
        let c = Itm::from_bt(&p).unwrap().classify(den as usize + 2);
        let is_finite = matches!(c, Classification::FiniteType { .. });
        prop_assert!(is_finite);
    }

    #[test]
    fn evaluate_lands_in_image((den, a, b) in bt_grid(), x in 0i64..1000) {
        let p = BtParams::new(Rat::new(a.into(), den.into()), Rat::new(b.into(), den.into())).unwrap();
        let t = Itm::from_bt(&p).unwrap();
        let pt = Rat::new(x.into(), 1000.into());
        let y = t.evaluate(&pt).unwrap();
        prop_assert!(t.image(&IntervalSet::full()).contains(&y));
    }

    #[test]
    fn induction_step_inverts(lambda in positive_lambda(4)) {
        match r_step(&lambda, 4) {
            Ok(s) if s.case_tag != CaseTag::Reduce => {
                prop_assert_eq!(s.length_matrix.mul_rat_vec(&s.new_lambda), lambda);
            }
            _ => {}
        }
    }

    #[test]
    fn accelerated_step_matches_z(lambda in positive_lambda(3)) {
        if let Ok(ZOutcome::Step { k, lambda: next }) = z_step(&lambda, 3) {
            let back = z_matrix(3, k).unwrap().mul_rat_vec(&next);
            let s: Rat = back.iter().sum();
            let back: Vec<Rat> = back.iter().map(|x| x / &s).collect();
            prop_assert_eq!(back, lambda);
        }
    }

    #[test]
    fn itinerary_round_trip(ks in prop::collection::vec(1u64..=10, 1..=10), d in 3usize..=5) {
        let (lambda, diam) = params_from_itinerary(&ks, d, ks.len()).unwrap();
        let (back, exit) = itinerary(&lambda, d, ks.len()).unwrap();
        prop_assert_eq!(exit, Exit::Completed);
        prop_assert_eq!(&back[..], &ks[..]);
        prop_assert!(diam > Rat::zero());
    }

    #[test]
    fn heights_follow_transpose(ks in prop::collection::vec(1u64..=5, 1..=8)) {
        let (lambda, _) = params_from_itinerary(&ks, 3, ks.len()).unwrap();
        let mut s = SuspensionState::unit(lambda).unwrap();
        for &k in &ks {
            s = height_step(&s, k, 3).unwrap();
        }
        let want = tower_heights(&ks, ks.len(), 3).unwrap();
        let got: Vec<BigUint> = s.h.iter().map(|x| x.to_biguint().unwrap()).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn determinants(ks in ks_strategy(8, 9), d in 3usize..=7) {
        let det = product(Family::A, &ks, d).unwrap().det();
        let sign = if (d * ks.len()) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        prop_assert_eq!(det, sign);
    }

    #[test]
    fn cnorm_submultiplicative(k1 in 1u64..30, k2 in 1u64..30, d in 3usize..6) {
        let (m, n) = (a_matrix(d, k1).unwrap(), a_matrix(d, k2).unwrap());
        prop_assert!(cnorm(&(&m * &n)).unwrap() <= cnorm(&m).unwrap() * cnorm(&n).unwrap());
    }

    #[test]
    fn column_growth_random(ks in ks_strategy(12, 10)) {
        prop_assert!(verify_column_growth(&ks).unwrap().passed());
        prop_assert!(recursion_sequences(&ks).is_ok());
    }

    #[test]
    fn substitution_incidence_is_a(ks in ks_strategy(5, 4), d in 3usize..=5) {
        let mut s = chi(d, ks[0]).unwrap();
        for &k in &ks[1..] {
            s = compose(&s, &chi(d, k).unwrap()).unwrap();
        }
        prop_assert_eq!(abelianization(&s), product(Family::A, &ks, d).unwrap());
        let names = tower_names_d(&ks, ks.len(), d, 0).unwrap();
        prop_assert_eq!(names.heights, tower_heights(&ks, ks.len(), d).unwrap());
    }

    #[test]
    fn locate_agrees_with_names(ks in prop::collection::vec(1u64..=4, 2..=6), j in 0usize..3,
                                lo_frac in 0.0f64..1.0, frac in 0.0f64..1.0) {
        let hi = ks.len();
        let lo = ((hi as f64) * lo_frac) as usize;
        let top = itmlab::sadic::tower_names(&ks, hi, 1 << 16).unwrap();
        let bottom = itmlab::sadic::tower_names(&ks, lo, 1 << 16).unwrap();
        let big: Vec<BigUint> = ks.iter().map(|&k| BigUint::from(k)).collect();
        let ledger = length_ledger(&big);
        let name = top.name(j).unwrap();
        let p = ((name.len() as f64) * frac) as usize;
        let (t, l) = locate(&ledger, hi, j, &BigUint::from(p), lo);
        let l: usize = l.try_into().unwrap();
        // a level-hi name is a concatenation of level-lo names over the same letters
        prop_assert_eq!(bottom.name(t).unwrap()[l], name[p]);
    }

    #[test]
    fn cubic_discriminant_matches_formula(b in -20i64..20, c in -20i64..20, d in -20i64..20) {
        let p = PolyZ::from_desc(&[1, b, c, d]);
        let (b, c, d) = (BigInt::from(b), BigInt::from(c), BigInt::from(d));
        let oracle = &b * &b * &c * &c - 4 * &c * &c * &c - 4 * &b * &b * &b * &d - 27 * &d * &d + 18 * &b * &c * &d;
        prop_assert_eq!(discriminant(&p).unwrap(), oracle);
    }

    #[test]
    fn resultant_vanishes_on_common_root(r in -6i64..6, s in -6i64..6, t in -6i64..6) {
        let p = PolyZ::x_minus(r).mul(&PolyZ::x_minus(s));
        let q = PolyZ::x_minus(r).mul(&PolyZ::x_minus(t));
        prop_assert!(resultant(&p, &q).is_zero());
    }

    #[test]
    fn cayley_hamilton(ks in ks_strategy(4, 6), d in 3usize..=5) {
        let m = product(Family::A, &ks, d).unwrap();
        let p = charpoly(&m);
        let mut acc = IntMatrix::zeros(d);
        let mut pw = IntMatrix::identity(d);
        for i in 0..=p.degree() {
            acc = acc.add(&pw.scale(&p.coeff(i))).unwrap();
            pw = &pw * &m;
        }
        prop_assert_eq!(acc, IntMatrix::zeros(d));
    }

    #[test]
    fn words_parse_and_evaluate(atoms in prop::collection::vec((1u64..5, any::<bool>()), 1..6), d in 3usize..=5) {
        let parts: Vec<std::sync::Arc<Expr>> = atoms
            .iter()
            .map(|&(k, inv)| if inv { Expr::inv(&Expr::atom(k)) } else { Expr::atom(k) })
            .collect();
        let refs: Vec<&std::sync::Arc<Expr>> = parts.iter().collect();
        let w = Expr::prod(&refs);
        let parsed: Expr = w.to_string().parse().unwrap();
        let v = evaluate_word(&w, d).unwrap();
        prop_assert_eq!(evaluate_word(&parsed, d).unwrap(), v.clone());
        let mut direct = IntMatrix::identity(d);
        for &(k, inv) in &atoms {
            let a = a_matrix(d, k).unwrap();
            direct = &direct * &if inv { a.inverse().unwrap() } else { a };
        }
        prop_assert_eq!(v, direct);
    }

    #[test]
    fn elementary_commutators(d in 3usize..=6, i in 1usize..=6, j in 1usize..=6, k in 1usize..=6) {
        prop_assume!(i <= d && j <= d && k <= d && i != j && j != k && i != k);
        let t = |a, b| elementary_t(d, a, b).unwrap();
        let c = &(&(&t(i, j) * &t(j, k)) * &t(i, j).inverse().unwrap()) * &t(j, k).inverse().unwrap();
        prop_assert_eq!(c, t(i, k));
    }
}

#[test]
fn zero_length_is_boundary() {
    let lam = vec![Rat::new(1.into(), 2.into()), Rat::zero(), Rat::new(1.into(), 2.into())];
    assert!(itinerary(&lam, 3, 3).is_err());
}
