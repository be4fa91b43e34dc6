use proptest::prelude::*;

use plshadow::plmap::{core, golden_core, golden_d, golden_restriction, make_tent, make_two_sided};
use plshadow::{PLMap, Scalar};

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn maps() -> impl Strategy<Value = PLMap> {
    (prop::collection::btree_set(1i64..64, 1..6), prop::collection::vec(-64i64..=64, 7)).prop_map(|(inner, vals)| {
        let mut pts = vec![q(-1, 1)];
        pts.extend(inner.iter().map(|&k| q(2 * k - 64, 64)));
        pts.push(Scalar::one());
        let values = vals.iter().take(pts.len()).map(|&v| q(v, 64)).collect();
        PLMap::new(pts, values).unwrap()
    })
}

fn slopes() -> impl Strategy<Value = Scalar> {
    prop_oneof![(1001i64..=2000).prop_map(|n| q(n, 1000)), Just(Scalar::golden())]
}

proptest! {
    #[test]
    fn breakpoints_evaluate_to_stored_values(m in maps()) {
        for (p, v) in m.points().iter().zip(m.values()) {
            prop_assert_eq!(&m.eval(p).unwrap(), v);
        }
    }

    #[test]
    fn laps_are_monotone(m in maps(), t in prop::collection::vec(0i64..=16, 2)) {
        for i in 0..m.laps() {
            let (a, b) = (&m.points()[i], &m.points()[i + 1]);
            let at = |k: i64| a + &(&(b - a) * &q(k, 16));
            let (x, y) = (at(t[0].min(t[1])), at(t[0].max(t[1])));
            let (fx, fy) = (m.eval(&x).unwrap(), m.eval(&y).unwrap());
            let rising = m.values()[i].try_le(&m.values()[i + 1]).unwrap();
            let ordered = if rising { fx.try_le(&fy).unwrap() } else { fy.try_le(&fx).unwrap() };
            prop_assert!(ordered);
        }
    }

    #[test]
    fn tents_are_symmetric(s in slopes(), xs in prop::collection::vec(0i64..=1 << 20, 20)) {
        let t = make_tent(&s).unwrap();
        for k in xs {
            let x = q(k, 1 << 20);
            prop_assert_eq!(t.eval(&x).unwrap(), t.eval(&(&Scalar::one() - &x)).unwrap());
        }
    }

    #[test]
    fn restricting_twice_is_restricting_once(n in 1415i64..=2000) {
        let t = make_tent(&q(n, 1000)).unwrap();
        let (lo, hi) = core(&t).unwrap();
        let once = t.restrict(&lo, &hi).unwrap();
        prop_assert_eq!(once.restrict(&lo, &hi).unwrap(), once);
    }
}

#[test]
fn golden_restrictions_compose() {
    let outer = golden_restriction();
    assert_eq!(outer.lo(), &golden_d());
    let inner = golden_core();
    assert_eq!(outer.restrict(inner.lo(), inner.hi()).unwrap(), inner);
}

#[test]
fn two_sided_maps_are_odd() {
    for depth in 0..5 {
        let g = make_two_sided(depth).unwrap();
        for p in g.points() {
            let (a, b) = (g.eval(&p.neg()).unwrap(), g.eval(p).unwrap().neg());
            assert!(a.to_enclosure(256).intersect(&b.to_enclosure(256)).is_some(), "depth {depth} at {p}");
        }
    }
}
