use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use toric_mld::accumulation::{accumulation_report, SequenceFamily};
use toric_mld::lattice::{index_of, int, ratio, Rational, RationalVector, SuperLattice};
use toric_mld::mld_sets::{
    enumerate_values, extract_candidate, in_tilde_v, in_v, pairing, transfer_tilde_to_v,
    CandidatePair, CoefficientSet, ScaledSet,
};
use toric_mld::ToricGerm;

fn coefficient() -> impl Strategy<Value = Rational> {
    prop::sample::select(vec![(0i64, 1i64), (1, 4), (1, 3), (1, 2), (2, 3), (1, 1)])
        .prop_map(|(p, q)| ratio(p, q))
}

fn small_vector(dim: usize, q: i64) -> impl Strategy<Value = RationalVector> {
    prop::collection::vec(-2 * q..=2 * q, dim)
        .prop_map(move |v| v.into_iter().map(|k| ratio(k, q)).collect())
}

/// `Z^d + Z g` with standard rays and random boundary coefficients.
fn standard_germ() -> impl Strategy<Value = ToricGerm> {
    (2usize..=3, 1i64..=6).prop_flat_map(|(d, q)| {
        (
            prop::collection::vec(1..=q, d),
            prop::collection::vec(coefficient(), d),
        )
            .prop_filter_map("standard rays must stay primitive", move |(g, b)| {
                let gen: RationalVector = g.into_iter().map(|k| ratio(k, q)).collect();
                let lattice = SuperLattice::new(d, vec![gen]).ok()?;
                ToricGerm::standard(lattice, b).ok()
            })
    })
}

/// Four-ray cone over `Z^3 + Z g` with coefficients making `ψ` linear.
fn four_ray_germ() -> impl Strategy<Value = ToricGerm> {
    (
        1i64..=4,
        prop::collection::vec(0i64..=4, 3),
        prop::collection::vec(coefficient(), 3),
    )
        .prop_filter_map("valid four-ray germ", |(q, g, b)| {
            let gen: RationalVector = g.into_iter().map(|k| ratio(k, q)).collect();
            let lattice = SuperLattice::new(3, vec![gen]).ok()?;
            // ψ(e_4) = ψ(e_1) + ψ(e_2) - ψ(e_3) must lie in [0, 1]
            let a: Vec<Rational> = b.iter().map(|v| Rational::one() - v).collect();
            let a4 = &a[0] + &a[1] - &a[2];
            let mut b = b;
            b.push(Rational::one() - a4);
            let rays = vec![
                RationalVector::from_ints(&[1, 0, 0]),
                RationalVector::from_ints(&[0, 1, 0]),
                RationalVector::from_ints(&[0, 0, 1]),
                RationalVector::from_ints(&[1, 1, -1]),
            ];
            ToricGerm::new(lattice, rays, b).ok()
        })
}

fn pair_strategy(max_s: usize, max_q: i64) -> impl Strategy<Value = CandidatePair> {
    (1..=max_s, 1..=max_q).prop_flat_map(|(s, q)| {
        (
            prop::collection::vec(1..=q, s),
            prop::collection::vec(coefficient(), s),
        )
            .prop_map(move |(n, a)| {
                CandidatePair::new(n.into_iter().map(|k| ratio(k, q)).collect(), a).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_is_least_clearing_multiplier(v in small_vector(3, 12)) {
        let n = index_of(&v);
        let clears = |k: &BigInt| v.iter().all(|t| (t * Rational::from_integer(k.clone())).is_integer());
        prop_assert!(clears(&n));
        let mut k = BigInt::one();
        while k < n {
            prop_assert!(!clears(&k));
            k += 1;
        }
    }

    #[test]
    fn psi_matches_rays(g in prop_oneof![standard_germ(), four_ray_germ()]) {
        let psi = g.compute_psi().unwrap();
        for (e, b) in g.rays().iter().zip(g.coefficients()) {
            prop_assert_eq!(psi.eval(e), Rational::one() - b);
        }
    }

    #[test]
    fn mld_is_nonnegative_and_witnessed(g in prop_oneof![standard_germ(), four_ray_germ()]) {
        let m = g.mld_at_origin().unwrap();
        prop_assert!(!m.value.is_negative());
        prop_assert_eq!(g.compute_psi().unwrap().eval(&m.witness.point), m.value.clone());
        prop_assert!(g.in_relint(&m.witness.point));
        prop_assert!(g.lattice().is_member(&m.witness.point));
    }

    #[test]
    fn face_restriction_rays_are_primitive(g in four_ray_germ(), pick in 0usize..6) {
        let faces = [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 3]];
        if let Ok(face) = g.face(&faces[pick]) {
            let r = g.face_restriction(&face).unwrap();
            for e in r.rays() {
                prop_assert!(r.lattice().is_primitive(e).unwrap());
            }
        }
    }

    #[test]
    fn extraction_from_random_germs(g in prop_oneof![standard_germ(), four_ray_germ()]) {
        let e = extract_candidate(&g).unwrap();
        prop_assert_eq!(pairing(&e.pair), g.mld_at_origin().unwrap().value);
        if e.pair.arity() >= 2 {
            prop_assert!(in_v(&e.pair));
        }
    }

    #[test]
    fn transfer_preserves_value(p in pair_strategy(3, 8)) {
        if in_tilde_v(&p) && p.a().iter().all(|a| !a.is_zero()) {
            let t = transfer_tilde_to_v(&p).unwrap();
            prop_assert_eq!(pairing(&t.pair), pairing(&p));
            let q: u64 = p.index().try_into().unwrap();
            let base = CoefficientSet::new(p.a().iter().cloned().chain([int(1)])).unwrap();
            prop_assert!(t.pair.a_in(&ScaledSet::new(base, q).unwrap().to_set()));
            if p.arity() >= 2 {
                prop_assert!(in_v(&t.pair));
            }
        }
    }

    #[test]
    fn padded_family_terms_in_v(p in pair_strategy(2, 6), extra in 1usize..3, n in 1u64..10) {
        if p.arity() == 2 && in_v(&p) {
            let set = CoefficientSet::new(p.a().iter().cloned().chain([int(1)])).unwrap();
            let fam = SequenceFamily::padded(p.clone(), 2 + extra, set).unwrap();
            let t = fam.term(n).unwrap();
            prop_assert!(in_v(&t));
            prop_assert!(t.a_in(&fam.declared_set(n)));
            prop_assert_eq!(pairing(&t) - fam.limit(), Rational::new((extra as u64).into(), n.into()));
        }
    }
}

#[test]
fn zero_in_set_attains_every_scaled_value() {
    for a in ["0,1", "0,1/2,1"] {
        let set: CoefficientSet = a.parse().unwrap();
        let q_max = 8;
        let values = enumerate_values(2, &set, q_max);
        for v in ScaledSet::new(set.clone(), q_max)
            .unwrap()
            .to_set()
            .values()
        {
            assert!(values.contains(v), "{v} missing for A={{{a}}}");
        }
    }
}

#[test]
fn reports_over_small_sets_stay_inside_prediction() {
    for a in ["1", "0,1", "1/2,1", "0,1/2,1"] {
        let set: CoefficientSet = a.parse().unwrap();
        let r = accumulation_report(2, &set, &[4, 8, 12], &ratio(1, 8)).unwrap();
        assert!(r.flags().is_empty(), "{}", r.summary());
    }
}

#[test]
fn three_dimensional_report_stays_inside_prediction() {
    let set: CoefficientSet = "1".parse().unwrap();
    let r = accumulation_report(3, &set, &[2, 3, 4], &ratio(1, 8)).unwrap();
    assert!(r.flags().is_empty(), "{}", r.summary());
    assert!(!r.equality_expected());
}
