use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plshadow::plmap::{core, golden_core, make_tent, IntervalMap};
use plshadow::shadow::{
    asymptotic_orbit, chain_connect, default_ladder, eps_linked, halving_schedule, has_linking, perturbed_orbit,
    shadow_set, slimit_trace, ChainOutcome, Ladders, LinkingVerdict, SLimitConfig,
};
use plshadow::{PseudoOrbit, Scalar};

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn tent(num: i64, den: i64) -> plshadow::PLMap {
    make_tent(&q(num, den)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shadow_sets_grow_with_eps(x0 in 0i64..=1024, len in 1usize..8, seed: u64, three_halves: bool) {
        let t = if three_halves { tent(3, 2) } else { tent(2, 1) };
        let po = perturbed_orbit(&t, &q(x0, 1024), len, &q(1, 32), seed).unwrap();
        let small = shadow_set(&t, &po, &q(1, 64)).unwrap();
        let large = shadow_set(&t, &po, &q(1, 16)).unwrap();
        prop_assert!(small.is_subset(&large).unwrap());
        let prefix = PseudoOrbit::uniform(po.points[..len].to_vec(), po.bound_at(0));
        let shorter = shadow_set(&t, &prefix, &q(1, 64)).unwrap();
        prop_assert!(small.is_subset(&shorter).unwrap());
    }

    #[test]
    fn periodic_points_link_to_themselves(den in 1i64..16, k in 0i64..64, e in 1i64..20) {
        // rationals with odd denominator are eventually periodic under tent(2)
        let t = tent(2, 1);
        let d = 2 * den + 1;
        let mut orbit = vec![q(k % d, d)];
        let (start, period) = loop {
            let next = t.eval(orbit.last().unwrap()).unwrap();
            if let Some(i) = orbit.iter().position(|x| *x == next) {
                break (i, orbit.len() - i);
            }
            orbit.push(next);
        };
        let x = &orbit[start];
        let out = eps_linked(&t, x, x, &Scalar::pow2(-e), period).unwrap();
        prop_assert!(out.is_linked());
    }

    #[test]
    fn chains_are_verified(a in 0i64..=256, b in 0i64..=256, e in 3i64..7) {
        let t = tent(2, 1);
        let delta = Scalar::pow2(-e);
        let res = &delta * &q(1, 8);
        if let ChainOutcome::Found(po) = chain_connect(&t, &q(a, 256), &q(b, 256), &delta, &res).unwrap() {
            prop_assert!(po.verify(&t).unwrap());
            prop_assert_eq!(po.points.first().unwrap(), &q(a, 256));
            prop_assert_eq!(po.points.last().unwrap(), &q(b, 256));
        }
    }
}

#[test]
fn slimit_certificates_nest_and_bound() {
    let eps = q(1, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for m in [tent(2, 1), golden_core(), tent(19, 10)] {
        let m = match core(&m) {
            Ok((lo, hi)) if m.constant_slope() != Some(&Scalar::int(2)) => m.restrict(&lo, &hi).unwrap(),
            _ => m,
        };
        let cfg = SLimitConfig::for_map(&m, 8).unwrap();
        let lad = Ladders::new(&eps, m.constant_slope().unwrap(), &cfg).unwrap();
        let schedule = halving_schedule(&lad.delta(0), 40);
        for seed in 0..8 {
            let x0 = m.lo() + &(&(m.hi() - m.lo()) * &q(rng.gen_range(0..=1000), 1000));
            let po = asymptotic_orbit(&m, &x0, 40, &schedule, seed).unwrap();
            let cert = slimit_trace(&m, &po, &eps, &cfg).unwrap();
            for w in cert.stages.windows(2) {
                assert!(w[1].w.is_subset(&w[0].w).unwrap());
            }
            let orbit = m.orbit(&cert.z, cert.covered()).unwrap();
            for (i, b) in cert.bounds.iter().enumerate() {
                assert!(orbit[i].dist(&po.points[i]).certainly_le(b), "bound {i}");
            }
            cert.verify(&m).unwrap();
        }
    }
}

fn is_yes(v: &LinkingVerdict) -> bool {
    matches!(v, LinkingVerdict::YesCertified | LinkingVerdict::YesUpToLadder)
}

#[test]
fn tent_linking_matches_its_core() {
    let mut slopes = vec![Scalar::int(2), Scalar::golden()];
    for (n, d) in [
        (3, 2),
        (8, 5),
        (5, 3),
        (7, 4),
        (9, 5),
        (10, 7),
        (13, 9),
        (11, 7),
        (17, 10),
        (19, 10),
        (29, 20),
        (31, 20),
        (33, 20),
        (37, 20),
        (39, 20),
        (15, 8),
        (13, 8),
        (23, 16),
    ] {
        slopes.push(q(n, d));
    }
    assert_eq!(slopes.len(), 20);
    for s in &slopes {
        let t = make_tent(s).unwrap();
        let (lo, hi) = core(&t).unwrap();
        let c = t.restrict(&lo, &hi).unwrap();
        let whole = has_linking(&t, &default_ladder(), 30).unwrap();
        let inner = has_linking(&c, &default_ladder(), 30).unwrap();
        assert_eq!(is_yes(&whole.verdict), is_yes(&inner.verdict), "slope {s}: {} vs {}", whole.verdict, inner.verdict);
    }
}
