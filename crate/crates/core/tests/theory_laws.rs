use proptest::prelude::*;
use rtk_core::gen;
use rtk_core::ResourceTheory;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn reach_is_a_preorder(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let t = gen::theory(&mut rng, 5, 20);
        let s = t.space().clone();
        let (v, w, z) = (gen::spec(&mut rng, &s), gen::spec(&mut rng, &s), gen::spec(&mut rng, &s));
        prop_assert!(t.reaches(&v, &v).unwrap().found);
        if t.reaches(&v, &w).unwrap().found && t.reaches(&w, &z).unwrap().found {
            prop_assert!(t.reaches(&v, &z).unwrap().found);
        }
        if let Ok(vw) = v.combine(&w) {
            if t.reaches(&v, &z).unwrap().found {
                prop_assert!(t.reaches(&vw, &z).unwrap().found);
            }
        }
        let up = v.forget(&w).unwrap();
        prop_assert!(t.reaches(&v, &up).unwrap().found);
    }

    #[test]
    fn witnesses_are_genuine(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let t = gen::theory(&mut rng, 5, 20);
        let s = t.space().clone();
        let (v, w) = (gen::spec(&mut rng, &s), gen::spec(&mut rng, &s));
        let r = t.reaches(&v, &w).unwrap();
        if r.found {
            prop_assert!(r.map.unwrap().apply(&v).unwrap().is_subset(&w));
        } else {
            prop_assert!(t.monoid().elements().iter().all(|f| !f.apply(&v).unwrap().is_subset(&w)));
        }
    }

    #[test]
    fn combined_theory_reach_implies_both(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let t = gen::theory(&mut rng, 4, 20);
        let s = t.space().clone();
        let gens = (0..2).map(|_| gen::map(&mut rng, &s)).collect();
        let Ok(m) = rtk_core::TransformationMonoid::close(&s, gens, 20) else { return Ok(()) };
        let f = ResourceTheory::new(m);
        let both = t.combine(&f).unwrap();
        let (v, w) = (gen::spec(&mut rng, &s), gen::spec(&mut rng, &s));
        if both.reaches(&v, &w).unwrap().found {
            prop_assert!(t.reaches(&v, &w).unwrap().found);
            prop_assert!(f.reaches(&v, &w).unwrap().found);
        }
    }

    #[test]
    fn quotient_matches_pairwise_scan(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let t = gen::theory(&mut rng, 4, 20);
        let s = t.space().clone();
        let cands: Vec<_> = (0..6).map(|_| gen::spec(&mut rng, &s)).collect();
        let q = t.quotient(&cands).unwrap();
        let class_of = |v: &rtk_core::Specification| q.classes.iter().position(|c| c.contains(v)).unwrap();
        for a in &cands {
            for b in &cands {
                let fwd = t.reaches(a, b).unwrap().found;
                let back = t.reaches(b, a).unwrap().found;
                prop_assert_eq!(class_of(a) == class_of(b), fwd && back);
                prop_assert_eq!(q.reach[class_of(a)][class_of(b)], fwd);
            }
        }
    }
}
