use proptest::prelude::*;
use rand::Rng;
use rtk_core::convex::{self, PointSpec};
use rtk_core::{gen, laws};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixture_and_hull_lemmas(seed in any::<u64>()) {
        let r = laws::convexity(seed, 16, 4);
        prop_assert!(r.ok(), "{}", r);
    }

    #[test]
    fn hull_is_a_quasi_endomorphism(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let dim = rng.gen_range(1..=3);
        let shared = gen::point_spec(&mut rng, dim, 3);
        let v = shared.union(&gen::point_spec(&mut rng, dim, 3)).unwrap();
        let w = shared.union(&gen::point_spec(&mut rng, dim, 3)).unwrap();
        let (ev, ew) = (convex::extreme_points(&v), convex::extreme_points(&w));
        let union = v.union(&w).unwrap();
        prop_assert!(convex::prob_equivalent(&union, &ev.union(&ew).unwrap()).unwrap());
        // Mixtures of common points lie in both hulls.
        let common: Vec<_> = v.points().iter().filter(|p| w.contains(p)).cloned().collect();
        let cut = PointSpec::new(common).unwrap();
        let x = convex::weighted_sum(&gen::distribution(&mut rng, cut.len()), cut.points()).unwrap();
        prop_assert!(convex::hull_contains(&v, &x).unwrap());
        prop_assert!(convex::hull_contains(&w, &x).unwrap());
    }

    #[test]
    fn hull_membership_is_witnessed(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let dim = rng.gen_range(1..=3);
        let v = gen::point_spec(&mut rng, dim, 5);
        let x = gen::point(&mut rng, dim);
        match convex::hull_weights(v.points(), &x).unwrap() {
            Some(p) => prop_assert_eq!(convex::weighted_sum(&p, v.points()).unwrap(), x),
            None => prop_assert!(!v.contains(&x)),
        }
    }
}
