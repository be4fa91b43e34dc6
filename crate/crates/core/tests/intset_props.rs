use proptest::prelude::*;

use plshadow::intset::{bowen_ball, image, preimage, range, tube, Interval};
use plshadow::plmap::{make_tent, IntervalMap};
use plshadow::{IntervalSet, PLMap, Scalar};

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

/// Up to four intervals with endpoints on the grid `k/64` in `[0, 1]`.
fn sets() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((0i64..=64, 0i64..=16), 0..4).prop_map(|v| {
        let parts = v.into_iter().map(|(a, w)| Interval { lo: q(a, 64), hi: q((a + w).min(64), 64) }).collect();
        IntervalSet::from_intervals(parts).unwrap()
    })
}

/// Continuous PL self-maps of `[0, 1]` with breakpoints and values on the grid `k/32`.
fn maps() -> impl Strategy<Value = PLMap> {
    (prop::collection::btree_set(1i64..32, 1..5), prop::collection::vec(0i64..=32, 6)).prop_map(|(inner, vals)| {
        let mut pts = vec![Scalar::zero()];
        pts.extend(inner.iter().map(|&k| q(k, 32)));
        pts.push(Scalar::one());
        let values = vals.iter().take(pts.len()).map(|&v| q(v, 32)).collect();
        PLMap::new(pts, values).unwrap()
    })
}

/// Grid points including every possible endpoint and the midpoints between them.
fn probes() -> Vec<Scalar> {
    (0..=128).map(|k| q(k, 128)).collect()
}

fn member(s: &IntervalSet, x: &Scalar) -> bool {
    s.contains_point(x).unwrap()
}

proptest! {
    #[test]
    fn boolean_operations_match_membership(a in sets(), b in sets()) {
        let (u, i) = (a.union(&b).unwrap(), a.intersect(&b).unwrap());
        for x in probes() {
            prop_assert_eq!(member(&u, &x), member(&a, &x) || member(&b, &x));
            prop_assert_eq!(member(&i, &x), member(&a, &x) && member(&b, &x));
        }
        prop_assert!(i.is_subset(&a).unwrap() && i.is_subset(&u).unwrap());
    }

    #[test]
    fn difference_is_closure_of_set_difference(a in sets(), b in sets()) {
        let d = a.difference(&b).unwrap();
        prop_assert!(d.is_subset(&a).unwrap());
        // off the grid of endpoints the closure changes nothing
        for k in 0..128 {
            let x = q(2 * k + 1, 256);
            prop_assert_eq!(member(&d, &x), member(&a, &x) && !member(&b, &x));
        }
    }

    #[test]
    fn components_are_sorted_and_separated(a in sets()) {
        for w in a.intervals().windows(2) {
            prop_assert!(w[0].hi.try_lt(&w[1].lo).unwrap());
        }
        prop_assert_eq!(a.union(&a).unwrap(), a.clone());
    }

    #[test]
    fn preimage_is_exact(m in maps(), s in sets()) {
        let p = preimage(&m, &s).unwrap();
        for x in probes() {
            prop_assert_eq!(member(&p, &x), member(&s, &m.eval(&x).unwrap()));
        }
    }

    #[test]
    fn image_is_exact(m in maps(), s in sets()) {
        let im = image(&m, &s).unwrap();
        for x in probes() {
            if member(&s, &x) {
                prop_assert!(member(&im, &m.eval(&x).unwrap()));
            }
        }
        for y in probes() {
            let back = preimage(&m, &IntervalSet::point(y.clone())).unwrap().intersect(&s).unwrap();
            prop_assert_eq!(member(&im, &y), !back.is_empty());
        }
    }

    #[test]
    fn image_and_preimage_are_adjoint(m in maps(), s in sets()) {
        let back = preimage(&m, &image(&m, &s).unwrap()).unwrap();
        prop_assert!(s.is_subset(&back).unwrap());
        let forth = image(&m, &preimage(&m, &s).unwrap()).unwrap();
        prop_assert_eq!(forth, s.intersect(&range(&m).unwrap()).unwrap());
    }

    #[test]
    fn set_algebra_laws(a in sets(), b in sets(), c in sets()) {
        prop_assert_eq!(a.union(&b).unwrap(), b.union(&a).unwrap());
        prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
        prop_assert_eq!(a.union(&b).unwrap().union(&c).unwrap(), a.union(&b.union(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.intersect(&b).unwrap().intersect(&c).unwrap(),
            a.intersect(&b.intersect(&c).unwrap()).unwrap()
        );
        let again = IntervalSet::from_intervals(a.intervals().to_vec()).unwrap();
        prop_assert_eq!(again, a);
    }

    #[test]
    fn bowen_balls_shrink(k0 in 0i64..=1024, k in 0usize..8, r in 1i64..64, three_halves: bool) {
        let t = if three_halves { make_tent(&q(3, 2)).unwrap() } else { make_tent(&Scalar::int(2)).unwrap() };
        let x = q(k0, 1024);
        let eps = q(r, 1024);
        let outer = bowen_ball(&t, &x, &eps, k).unwrap();
        let inner = bowen_ball(&t, &x, &eps, k + 1).unwrap();
        prop_assert!(inner.is_subset(&outer).unwrap());
    }

    #[test]
    fn tube_matches_pointwise_check(k0 in 0i64..=128, len in 1usize..6, r in 1i64..16) {
        let t = make_tent(&Scalar::int(2)).unwrap();
        let centers = t.orbit(&q(k0, 128), len - 1).unwrap();
        let radius = q(r, 128);
        let set = tube(&t, &centers, &vec![radius.clone(); len]).unwrap();
        for z in probes() {
            let orbit = t.orbit(&z, len - 1).unwrap();
            let inside = orbit.iter().zip(&centers).all(|(a, c)| a.dist(c).try_le(&radius).unwrap());
            prop_assert_eq!(member(&set, &z), inside);
        }
    }
}

#[test]
fn bowen_ball_radius_away_from_breakpoints() {
    // the orbit of 1/7 under slope 2 stays at distance >= 1/14 from 0, 1/2 and 1
    let t = make_tent(&Scalar::int(2)).unwrap();
    let x = q(1, 7);
    let eps = q(1, 100);
    for k in 0..6 {
        let ball = bowen_ball(&t, &x, &eps, k).unwrap();
        let r = &eps * &Scalar::pow2(-(k as i64));
        assert_eq!(ball, IntervalSet::interval(&x - &r, &x + &r).unwrap(), "k = {k}");
    }
    let half = bowen_ball(&t, &q(1, 2), &q(1, 8), 1).unwrap();
    assert_eq!(half, IntervalSet::interval(q(7, 16), q(9, 16)).unwrap());
}
