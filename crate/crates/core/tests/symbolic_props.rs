use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use plshadow::symbolic::{
    closedness_neighborhood, ladder_shadow, projection_pi, random_ladder_pseudo_orbit, random_pseudo_orbit, random_sft,
    walters_delta, walters_shadow, LadderPoint, Level, SymSeq,
};
use plshadow::Scalar;

fn binary_seq() -> impl Strategy<Value = SymSeq> {
    (prop::collection::vec(0u8..2, 0..16), prop::collection::vec(0u8..2, 1..6))
        .prop_map(|(p, c)| SymSeq::new(p, c).unwrap())
}

/// Sparse sequences, so that the finite levels are actually populated.
fn sparse_seq() -> impl Strategy<Value = SymSeq> {
    (prop::collection::vec(prop::bool::weighted(0.15), 0..24), prop::collection::vec(prop::bool::weighted(0.1), 1..14))
        .prop_map(|(p, c)| {
            let bits = |v: Vec<bool>| v.into_iter().map(u8::from).collect();
            SymSeq::new(bits(p), bits(c)).unwrap()
        })
}

fn heights() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        (0i64..14).prop_map(|k| Scalar::pow2(-k)),
        Just(Scalar::zero()),
        (-200i64..4400).prop_map(|n| Scalar::ratio(n, 4096)),
    ]
}

fn in_ladder(a: &Scalar, x: &SymSeq) -> bool {
    if a.is_zero() {
        return Level::Infinite.contains(x);
    }
    (0..64).map(Level::Finite).any(|l| l.a() == *a && l.contains(x))
}

proptest! {
    #[test]
    fn levels_are_nested(x in sparse_seq()) {
        for k in 0..=10 {
            if Level::Finite(k + 1).contains(&x) {
                prop_assert!(Level::Finite(k).contains(&x), "{} at level {}", x, k + 1);
            }
        }
        if Level::Infinite.contains(&x) {
            prop_assert!((0..=10).all(|k| Level::Finite(k).contains(&x)));
        }
    }

    #[test]
    fn closedness_neighborhoods_avoid_the_ladder(a in heights(), x in sparse_seq(), others in prop::collection::vec(sparse_seq(), 8)) {
        match closedness_neighborhood(&a, &x).unwrap() {
            None => prop_assert!(in_ladder(&a, &x), "({}, {}) reported inside", a, x),
            Some(nb) => {
                prop_assert!(!in_ladder(&a, &x));
                prop_assert!(nb.contains(&a, &x));
                prop_assert!(nb.misses_ladder());
                for y in others.iter().chain([&x]) {
                    for j in 0..20 {
                        let l = Level::Finite(j);
                        prop_assert!(!(l.contains(y) && nb.contains(&l.a(), y)), "level {} point {} inside", j, y);
                    }
                    prop_assert!(!(Level::Infinite.contains(y) && nb.contains(&Scalar::zero(), y)));
                }
            }
        }
    }

    #[test]
    fn shifts_compose(x in binary_seq(), j in 0usize..20, k in 0usize..20) {
        prop_assert_eq!(x.shift_by(j).shift_by(k), x.shift_by(j + k));
        let mut y = x.clone();
        for _ in 0..k {
            y = y.shift();
        }
        prop_assert_eq!(&y, &x.shift_by(k));
        for i in 0..20 {
            prop_assert_eq!(y.at(i), x.at(i + k));
        }
        prop_assert!(x.forward_orbit().contains(&y));
    }

    #[test]
    fn sequences_are_canonical(p in prop::collection::vec(0u8..3, 0..8), c in prop::collection::vec(0u8..3, 1..5), reps in 1usize..4) {
        let x = SymSeq::new(p.clone(), c.clone()).unwrap();
        let mut longer = p.clone();
        longer.extend_from_slice(&c);
        prop_assert_eq!(SymSeq::new(longer, c.clone()).unwrap(), x.clone());
        prop_assert_eq!(SymSeq::new(p, c.repeat(reps)).unwrap(), x.clone());
        let back: SymSeq = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn sequence_metric_is_an_ultrametric(x in binary_seq(), y in binary_seq(), z in binary_seq(), w in prop::collection::vec(0u8..2, 0..6)) {
        prop_assert_eq!(x.dist(&y), y.dist(&x));
        prop_assert_eq!(x.dist(&x), Scalar::zero());
        let (xy, yz, xz) = (x.dist(&y), y.dist(&z), x.dist(&z));
        prop_assert!(xz.certainly_le(&xy) || xz.certainly_le(&yz));
        prop_assert_eq!(x.prepend(&w).shift_by(w.len()), x.clone());
        prop_assert_eq!(x.prepend(&w).window(w.len()), w);
    }

    #[test]
    fn projection_commutes_and_contracts(x in sparse_seq(), y in sparse_seq(), n in 1u32..6, i in 0u32..8, j in 0u32..8) {
        let at = |seq: &SymSeq, k: u32| {
            let l = if k == 7 { Level::Infinite } else { Level::Finite(k) };
            LadderPoint::new(l, seq.clone()).ok()
        };
        if let (Some(p), Some(q)) = (at(&x, i), at(&y, j)) {
            let (pp, pq) = (projection_pi(n, &p).unwrap(), projection_pi(n, &q).unwrap());
            prop_assert!(pp.dist(&pq).certainly_le(&p.dist(&q)));
            prop_assert_eq!(projection_pi(n, &p.apply()).unwrap(), pp.apply());
            prop_assert_eq!(projection_pi(n, &pp).unwrap(), pp);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn walters_shadows_are_valid(seed: u64, e in 1i64..8, len in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_sft(&mut rng, 3, 3);
        let delta = walters_delta(&s, &Scalar::pow2(-e));
        let po = random_pseudo_orbit(&s, &delta, len, &mut rng).unwrap();
        let cert = walters_shadow(&s, &po, &delta).unwrap();
        prop_assert!(s.contains(&cert.z));
        for (i, x) in po.iter().enumerate() {
            prop_assert!(cert.z.shift_by(i).dist(x).certainly_le(&delta), "step {}", i);
        }
    }

    #[test]
    fn ladder_shadows_are_valid(seed: u64, e in 1i64..7, len in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eps = Scalar::pow2(-e);
        let po = random_ladder_pseudo_orbit(&eps, len, &mut rng).unwrap();
        let sh = ladder_shadow(&po, &eps).unwrap();
        let mut z = sh.point.clone();
        for p in &po {
            prop_assert!(z.dist(p).try_lt(&eps).unwrap());
            z = z.apply();
        }
    }
}

#[test]
fn projection_examples() {
    let origin = LadderPoint::new(Level::Infinite, SymSeq::zeros()).unwrap();
    let p = projection_pi(3, &origin).unwrap();
    assert_eq!(p.level, Level::Finite(2));
    assert_eq!(p.a(), Scalar::ratio(1, 4));
    assert_eq!(p.seq, SymSeq::zeros());

    for n in 1..6 {
        for k in 0..n {
            let q = LadderPoint::new(Level::Finite(k), SymSeq::single_one(3)).unwrap();
            assert_eq!(projection_pi(n, &q).unwrap(), q);
        }
    }

    let x: LadderPoint = "inf:001(0)".parse().unwrap();
    let px = projection_pi(2, &x).unwrap();
    assert_eq!(px.to_string(), "1:001(0)");
    assert_eq!(projection_pi(2, &x.apply()).unwrap(), px.apply());
    assert!(projection_pi(0, &x).is_err());
}
