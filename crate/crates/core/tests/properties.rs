//! Randomized invariants across modules.

use proptest::prelude::*;
use proptest::sample::select;

use rayclass::bounds::{g_q, hasse_weil, oesterle_nbar, serre_bound, theta, theta_inv, QSqrtNum};
use rayclass::ffield::FieldCtx;
use rayclass::harness::verify::{verify, VerifyOptions};
use rayclass::harness::{generate_table, with_jobs, GoldenCorpus, Ground, RationalOracle, RowGroup, SetFamily, TableRow};
use rayclass::lambda::Description;
use rayclass::method_a::{e_profile, lambda_seq_a, orbit_lengths, RationalSet};
use rayclass::method_b::lambda_seq_b;
use rayclass::raygenus::{genus_l, genus_via_different, genus_via_discriminant, n_points_lower};

const ORDERS: [u32; 14] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49];

/// A field order and a subset of `{1, .., q-1}` drawn from `mask`.
fn field_and_set() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (select(&ORDERS[..]), any::<u64>()).prop_map(|(q, mask)| {
        let exps = (1..q).filter(|j| mask.rotate_left(*j) & 1 == 1).collect();
        (q, exps)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn dlog_inverts_powers(q in select(&ORDERS[..]), k in 1u32..10_000) {
        let f = FieldCtx::with_order(u64::from(q)).unwrap();
        let z = f.omega_pow(i64::from(k));
        prop_assert_eq!(f.omega_pow(i64::from(f.dlog(z).unwrap())), z);
        prop_assert_eq!(f.dlog(z).unwrap(), (k - 1) % (q - 1) + 1);
    }

    #[test]
    fn orbits_partition_the_exponents(q in select(&ORDERS[..])) {
        let f = FieldCtx::with_order(u64::from(q)).unwrap();
        let lengths = orbit_lengths(&f);
        prop_assert_eq!(lengths.iter().sum::<u32>(), q - 1);
        prop_assert!(lengths.iter().all(|&l| l == 0 || f.e().is_multiple_of(l)));
    }

    #[test]
    fn bounds_are_ordered(q in select(&ORDERS[..]), g in 1u64..100) {
        let hw = hasse_weil(u64::from(q), g);
        prop_assert!(serre_bound(u64::from(q), g) <= hw);
        prop_assert!(oesterle_nbar(u64::from(q), g) <= hw);
    }

    #[test]
    fn theta_inverse_round_trips(q in select(&ORDERS[..]), num in 0i64..997) {
        let t = QSqrtNum::from_parts(num, 997, 0, 1, u64::from(q));
        let n = theta_inv(u64::from(q), &t).unwrap().to_f64();
        prop_assert!((theta(u64::from(q), n).unwrap() - num as f64 / 997.0).abs() <= 1e-9);
    }

    #[test]
    fn oesterle_genus_grows(q in select(&ORDERS[..]), k in 0u32..400) {
        let n = f64::from(q + 1 + k);
        prop_assert!(g_q(u64::from(q), n + 1.0).unwrap() > g_q(u64::from(q), n).unwrap());
    }

    #[test]
    fn profile_is_bounded_by_orbit_lengths((q, exps) in field_and_set()) {
        let f = FieldCtx::with_order(u64::from(q)).unwrap();
        let lengths = orbit_lengths(&f);
        let prof = e_profile(&f, &RationalSet::from_exponents(&f, &exps).unwrap());
        for n in 1..u64::from(q) {
            prop_assert!(prof.e_s(n) <= lengths[n as usize]);
        }
    }

    #[test]
    fn lambda_grows_by_at_most_e((q, exps) in field_and_set()) {
        let f = FieldCtx::with_order(u64::from(q)).unwrap();
        let set = RationalSet::from_exponents(&f, &exps).unwrap();
        let desc = RationalOracle::new(f.clone()).description(&set).unwrap().0;
        let lam = lambda_seq_b(&desc, f.p(), f.e(), 40);
        let v = lam.values();
        prop_assert_eq!((v[0], v[1]), (0, 0));
        for w in v.windows(2) {
            prop_assert!(w[0] <= w[1] && w[1] - w[0] <= f.e());
        }
        for (n, &value) in v.iter().enumerate().skip(1).filter(|(_, &x)| x > 0) {
            prop_assert!(lam.conductor_exponent(value).unwrap() <= n);
        }
    }

    #[test]
    fn methods_agree_where_a_is_proven((q, exps) in field_and_set()) {
        let f = FieldCtx::with_order(u64::from(q)).unwrap();
        let set = RationalSet::from_exponents(&f, &exps).unwrap();
        let (_, a) = lambda_seq_a(&f, &set, 32);
        let desc = RationalOracle::new(f.clone()).description_b(&set).unwrap();
        let b = lambda_seq_b(&desc, f.p(), f.e(), 32);
        let upto = a.computed_to();
        prop_assert_eq!(&a.values()[..=upto], &b.values()[..=upto]);
    }

    #[test]
    fn genus_paths_agree((q, exps) in field_and_set(), l in 1u32..8, g_k in 0u64..4, h_s in 1u64..6) {
        let f = FieldCtx::with_order(u64::from(q)).unwrap();
        let set = RationalSet::from_exponents(&f, &exps).unwrap();
        let lam = RationalOracle::new(f.clone()).lambda_reaching(&set, l).unwrap();
        let a = genus_l(g_k, h_s, &lam, l).unwrap();
        prop_assert_eq!(a, genus_via_discriminant(g_k, h_s, &lam, l).unwrap());
        prop_assert_eq!(a, genus_via_different(g_k, h_s, &lam, l).unwrap());
        prop_assert!(a >= 0);
    }

    #[test]
    fn descriptions_print_and_parse(exps in prop::collection::vec(1u32..40, 0..8)) {
        let d = Description::new(exps);
        prop_assert_eq!(Description::parse(&d.to_string()), Some(d));
    }
}

fn rows() -> Vec<TableRow> {
    let mut out = Vec::new();
    for q in [2u32, 3, 4, 5, 8, 9] {
        let ground = Ground::Rational { q, family: SetFamily::Sizes((1..=q).collect()) };
        out.extend(generate_table(&ground, 1..=5).unwrap());
    }
    out
}

#[test]
fn rows_survive_a_json_round_trip() {
    let rows = rows();
    let text = serde_json::to_string(&rows).unwrap();
    let back: Vec<TableRow> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, rows);
    for r in &back {
        r.revalidate().unwrap();
    }
}

#[test]
fn rows_respect_the_bound() {
    for r in rows() {
        assert!(r.n_lower <= oesterle_nbar(u64::from(r.q), r.g), "{r:?}");
        let (p, _) = rayclass::ffield::prime_power(u64::from(r.q)).unwrap();
        assert_eq!(r.n_lower, n_points_lower(r.h_s, p, r.l, u64::from(r.s1), r.eps));
    }
}

#[test]
fn verify_is_deterministic_across_pools() {
    let corpus = GoldenCorpus::bundled();
    let opts = VerifyOptions { groups: vec![RowGroup::RationalQ4, RowGroup::Example], census: false, ..Default::default() };
    let one = with_jobs(Some(1), || verify(&corpus, &opts)).unwrap().unwrap();
    let two = with_jobs(Some(3), || verify(&corpus, &opts)).unwrap().unwrap();
    let again = verify(&corpus, &opts).unwrap();
    assert_eq!(one, two);
    assert_eq!(one, again);
}
