use proptest::prelude::*;
use rand::Rng;
use rtk_core::approx::{self, ApproximationStructure};
use rtk_core::{gen, laws, GaloisInsertion};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn approximations_of_combinations(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let h = ApproximationStructure::hamming(rng.gen_range(1..=3));
        let s = h.space().clone();
        let (v, w) = (gen::spec(&mut rng, &s), gen::spec(&mut rng, &s));
        if let Ok(vw) = v.combine(&w) {
            for e in h.index().labels() {
                let both = h.approximate(&v, e).unwrap().bits().intersection(h.approximate(&w, e).unwrap().bits());
                prop_assert!(h.approximate(&vw, e).unwrap().bits().is_subset(&both));
            }
        }
    }

    #[test]
    fn robustness_transfers(seed in any::<u64>()) {
        let r = laws::robustness(seed, 2);
        prop_assert!(r.ok(), "{}", r);
    }

    #[test]
    fn preserved_triangle_survives_reduction(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let h = ApproximationStructure::hamming(rng.gen_range(1..=3));
        let ins = GaloisInsertion::from_lumping(&gen::partition_lumping(&mut rng, h.space())).unwrap();
        if approx::preserves_structure(&h, &ins).unwrap() && approx::check_triangle(&h, seed).unwrap().ok() {
            let red = approx::reduce_structure(&h, &ins).unwrap();
            let r = approx::check_triangle(&red.structure, seed).unwrap();
            prop_assert!(r.ok(), "{}", r);
            prop_assert!(approx::verify_structure(&red.structure).ok());
        }
    }
}
