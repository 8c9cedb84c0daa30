//! Worked examples checked against independent computations, plus
//! determinism and serialisation contracts.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use itmlab::cocycles::{a_matrix, b3_matrix, conjugation_check_d3, o_matrix, pf_table};
use itmlab::constructions::{build_irrational, build_minus_one, convergents, gamma_eigen_residual, minus_one_residual};
use itmlab::galois::{charpoly, count_real_roots, is_pinching, p_k};
use itmlab::induction::{bt_first_k, itinerary};
use itmlab::lyapunov::{spectrum, top_exponent};
use itmlab::rational::{parse_rat_list, rat};
use itmlab::sadic::{balanced_times, chi, strong_coincidence, tower_heights, tower_names, veech_components, Side};
use itmlab::{
    BruinParams, BtParams, Classification, Coincidence, Family, IntMatrix, Itm, KSequence, Rat, Report, SamplingSpec,
};

#[test]
fn classify_worked_examples() {
    let bt = |a, b| Itm::from_bt(&BtParams::new(a, b).unwrap()).unwrap();
    assert_eq!(bt(rat(2, 3), rat(1, 3)).classify(10), Classification::FiniteType { n: 1 });
    // α = β makes the map a rotation, which is onto
    assert_eq!(bt(rat(1, 3), rat(1, 3)).classify(5), Classification::FiniteType { n: 0 });
    let quarter = Itm::from_bruin(&BruinParams::new(parse_rat_list("1/4,1/4,1/4,1/4").unwrap()).unwrap()).unwrap();
    let c = quarter.classify(8);
    // every branch starts on a multiple of 1/4, so the cell dynamics settle
    assert!(matches!(c, Classification::FiniteType { .. }), "{c:?}");
    assert!(BtParams::new(rat(1, 3), rat(1, 2)).is_err());
}

#[test]
fn unresolved_carries_the_attractor() {
    // a long constant itinerary gives a map whose attractor keeps shrinking
    let ks = vec![2u64; 30];
    let (lambda, _) = itmlab::induction::params_from_itinerary(&ks, 3, 30).unwrap();
    let t = Itm::from_bruin(&BruinParams::new(lambda).unwrap()).unwrap();
    match t.classify(4) {
        Classification::Unresolved { depth, attractor } => {
            assert_eq!(depth, 4);
            assert_eq!(attractor, t.attractor(4));
        }
        other => panic!("expected unresolved, got {other:?}"),
    }
}

#[test]
fn first_k_reads_off_alpha() {
    assert_eq!(bt_first_k(&rat(2, 7)).unwrap(), 3);
    assert_eq!(bt_first_k(&rat(1, 3)).unwrap(), 3);
    assert_eq!(bt_first_k(&rat(1, 1)).unwrap(), 1);
    assert!(bt_first_k(&rat(0, 1)).is_err());
}

#[test]
fn itinerary_of_a_periodic_point() {
    // the Perron eigenvector of Z_3(2) is fixed by the step; a rational
    // approximation reproduces 2, 2, 2, ...
    let (lambda, diam) = itmlab::induction::params_from_itinerary(&[2; 12], 3, 12).unwrap();
    let (ks, _) = itinerary(&lambda, 3, 12).unwrap();
    assert_eq!(ks, KSequence::constant(2, 12).unwrap());
    assert!(diam < rat(1, 1000));
}

#[test]
fn b3_is_conjugate_transpose_inverse() {
    let o = o_matrix();
    let oi = o.inverse().unwrap();
    for k in 1..=50 {
        let lhs = &(&o * &a_matrix(3, k).unwrap().inverse().unwrap()) * &oi;
        assert_eq!(lhs, b3_matrix(k).unwrap().transpose(), "k = {k}");
        assert_eq!(charpoly(&b3_matrix(k).unwrap()), charpoly(&itmlab::cocycles::z_matrix(3, k).unwrap()));
    }
    assert!(conjugation_check_d3(2).unwrap().passed());
    // B_3(2)(e_1 + e_2) = (1, 1, 1)
    let b = b3_matrix(2).unwrap();
    assert_eq!(b.mul_vec(&[BigInt::one(), BigInt::one(), BigInt::zero()]), vec![BigInt::one(); 3]);
}

#[test]
fn pf_first_power_floor() {
    let t = pf_table(1);
    assert_eq!(t[0].max_a, BigInt::from(2));
    assert_eq!(t[0].min_b, BigInt::zero());
}

#[test]
fn p_k_roots_and_pinching() {
    // p_1 = (x - 1)^2 (x + 1)
    assert_eq!(count_real_roots(&p_k(1)), Err(itmlab::Error::NotSquarefree));
    for k in 2..40 {
        assert_eq!(count_real_roots(&p_k(k)).unwrap(), 3, "k = {k}");
    }
    assert!(is_pinching(&a_matrix(3, 3).unwrap()).unwrap().pinching);
    // k = 2 gives the heptagonal cubic, whose Galois group is cyclic
    let r = is_pinching(&a_matrix(3, 2).unwrap()).unwrap();
    assert!(r.disc_is_square && !r.pinching);
}

#[test]
fn spectrum_of_constant_itinerary() {
    let est = spectrum(Family::A, &SamplingSpec::periodic(vec![2]), 3, 10_000, 1).unwrap();
    let want = [0.58890, 0.22064, -0.80958];
    for i in 0..3 {
        assert!((est.exponents[i] - want[i]).abs() < 1e-4, "{:?}", est.exponents);
    }
    let one = top_exponent(Family::A, &SamplingSpec::periodic(vec![5]), 4, 1, 1).unwrap();
    let cn = itmlab::cocycles::cnorm(&a_matrix(4, 5).unwrap()).unwrap();
    assert!((one.exponents[0] - (cn.to_string().parse::<f64>().unwrap()).ln()).abs() < 1e-12);
}

#[test]
fn lyapunov_is_independent_of_thread_count() {
    let spec = SamplingSpec::geometric(0.5, 12, 41);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| spectrum(Family::A, &spec, 4, 3_000, 9).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a.exponents.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), b.exponents.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
    assert_eq!(a.ci95, b.ci95);
    let c = spectrum(Family::A, &SamplingSpec::geometric(0.5, 12, 42), 4, 3_000, 9).unwrap();
    assert_ne!(a.exponents, c.exponents);
}

#[test]
fn construction_residuals_are_deterministic() {
    let plan = build_minus_one(4, 3).unwrap();
    let r1 = minus_one_residual(&plan, 3, 500, 5).unwrap();
    let r2 = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| minus_one_residual(&plan, 3, 500, 5).unwrap());
    assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
    assert_eq!(r1.residual, 0.0);
    // the parity of the residual function fails off the certified set
    assert!(r1.residual_all > 0.0);
}

#[test]
fn minus_one_veech_components() {
    let plan = build_minus_one(4, 1).unwrap();
    for n in 1..=4 {
        let v = veech_components(&plan.ks, &rat(1, 2), 2 * n).unwrap();
        assert_eq!(v, vec![rat(0, 1), rat(1, 2), rat(0, 1)], "level {}", 2 * n);
    }
}

#[test]
fn irrational_convergents() {
    let plan = build_irrational(2).unwrap();
    let conv = convergents(&plan.y);
    let dens: Vec<BigUint> = conv.iter().map(|c| c.denom().to_biguint().unwrap()).collect();
    assert_eq!(dens, plan.q);
    // [0; 5, 67] = 67/336
    assert_eq!(conv[2], rat(67, 336));
    let r = gamma_eigen_residual(&build_irrational(3).unwrap(), 1, 2000, 3).unwrap();
    assert!(r.residual <= r.tolerance, "{r:?}");
}

#[test]
fn coincidence_examples() {
    assert_eq!(
        strong_coincidence(&chi(3, 2).unwrap(), 3).unwrap(),
        Coincidence::Yes { power: 2, letter: 1, side: Side::Prefix }
    );
    let names = tower_names(&[3, 1, 4], 3, 64).unwrap();
    assert_eq!(
        names.heights,
        tower_heights(&[3, 1, 4], 3, 3).unwrap(),
    );
    // u_1 = v_0 = 2, v_1 = 3 1^3, w_1 = 3 1^2
    let one = tower_names(&[3], 1, 64).unwrap();
    assert_eq!(one.name_string(0).unwrap(), "2");
    assert_eq!(one.name_string(1).unwrap(), "3111");
    assert_eq!(one.name_string(2).unwrap(), "311");
}

#[test]
fn huge_powers_stay_symbolic() {
    let big = 1u64 << 62;
    let fam = tower_names(&[big, 3, big], 3, 16).unwrap();
    assert!(fam.name(1).is_none());
    assert_eq!(fam.heights, tower_heights(&[big, 3, big], 3, 3).unwrap());
    assert!(fam.common_prefix().is_ok());
}

#[test]
fn balanced_times_for_constant_two() {
    let ks = vec![2u64; 40];
    let got = balanced_times(&ks, 20, &rat(1, 20), &rat(0, 1)).unwrap();
    assert_eq!(got, (0..=20).collect::<Vec<_>>());
    assert!(balanced_times(&ks, 40, &rat(1, 20), &rat(0, 1)).is_err());
}

#[test]
fn serde_contracts() {
    let spec = SamplingSpec::geometric(0.5, 20, 9);
    let json = serde_json::to_string(&spec).unwrap();
    assert_eq!(serde_json::from_str::<SamplingSpec>(&json).unwrap(), spec);
    assert!(serde_json::from_str::<SamplingSpec>(r#"{"distribution":{"kind":"geometric","p":0.5},"extra":1}"#).is_err());
    let rep = itmlab::galois::galois_suite(5).unwrap();
    let back: Report = serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
    assert_eq!(back, rep);
    // big integers go out as strings
    let m = IntMatrix::from_rows(&[[1, 2], [3, 4]]).pow(200);
    let v = serde_json::to_value(&m).unwrap();
    assert_eq!(v[0][0], serde_json::Value::String(m.get(0, 0).to_string()));
    assert_eq!(serde_json::from_value::<IntMatrix>(v).unwrap(), m);
    assert!(serde_json::from_str::<IntMatrix>(r#"[["1","2"],["3"]]"#).is_err());
    let s = itmlab::SuspensionState::unit(vec![rat(1, 3), rat(2, 3)]).unwrap();
    let json = serde_json::to_string(&s).unwrap();
    assert_eq!(json, r#"{"lambda":["1/3","2/3"],"h":["1","1"]}"#);
    assert_eq!(serde_json::from_str::<itmlab::SuspensionState>(&json).unwrap(), s);
    let omega = Itm::from_bt(&BtParams::new(rat(2, 3), rat(1, 3)).unwrap()).unwrap().attractor(1);
    let back: itmlab::IntervalSet = serde_json::from_str(&serde_json::to_string(&omega).unwrap()).unwrap();
    assert_eq!(back, omega);
    let r: Rat = rat(7, 3);
    assert_eq!(itmlab::rational::fmt_rat(&r), "7/3");
}
