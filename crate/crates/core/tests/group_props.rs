mod common;

use common::{apply, image, is_injective, is_surjective, small_finite, Finite};
use preresolve_core::conflation::Ambient;
use preresolve_core::group::{
    cokernel, descend_along_epi, factor_through_mono, factorize, kernel, pair, pullback,
};
use preresolve_core::sample::{random_epi_onto, random_group, random_morphism, represent, rng_for, SampleConfig};
use preresolve_core::{GroupMorphism, PresentedGroup};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const TESTS: usize = 10;

fn any_group(rng: &mut ChaCha8Rng) -> PresentedGroup {
    random_group(rng, Ambient::AllGroups, &SampleConfig::default(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_universal(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 1, 0);
        let cfg = SampleConfig::default();
        let (x, y) = (any_group(&mut rng), any_group(&mut rng));
        let f = random_morphism(&mut rng, &x, &y, &cfg);
        let (k, incl) = kernel(&f);
        prop_assert!(incl.is_mono() && incl.then(&f).is_zero());
        for _ in 0..TESTS {
            let t_obj = any_group(&mut rng);
            let s = random_morphism(&mut rng, &t_obj, &k, &cfg);
            let t = s.then(&incl);
            let u = factor_through_mono(&incl, &t).expect("test map kills f");
            prop_assert!(u.equals(&s));
            let free = random_morphism(&mut rng, &t_obj, &x, &cfg);
            prop_assert_eq!(factor_through_mono(&incl, &free).is_some(), free.then(&f).is_zero());
        }
    }

    #[test]
    fn cokernel_universal(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 2, 0);
        let cfg = SampleConfig::default();
        let (x, y) = (any_group(&mut rng), any_group(&mut rng));
        let f = random_morphism(&mut rng, &x, &y, &cfg);
        let (c, q) = cokernel(&f);
        prop_assert!(q.is_epi() && f.then(&q).is_zero());
        for _ in 0..TESTS {
            let t_obj = any_group(&mut rng);
            let s = random_morphism(&mut rng, &c, &t_obj, &cfg);
            let u = descend_along_epi(&q, &q.then(&s)).expect("test map kills f");
            prop_assert!(u.equals(&s));
            let free = random_morphism(&mut rng, &y, &t_obj, &cfg);
            prop_assert_eq!(descend_along_epi(&q, &free).is_some(), f.then(&free).is_zero());
        }
    }

    #[test]
    fn pullback_universal(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 3, 0);
        let cfg = SampleConfig::default();
        let (x, y, z) = (any_group(&mut rng), any_group(&mut rng), any_group(&mut rng));
        let f = random_morphism(&mut rng, &x, &z, &cfg);
        let g = random_morphism(&mut rng, &y, &z, &cfg);
        let pb = pullback(&f, &g);
        prop_assert!(pb.left.then(&f).equals(&pb.right.then(&g)));
        let into = pair(&pb.left, &pb.right);
        prop_assert!(into.is_mono());
        for _ in 0..TESTS {
            let t_obj = any_group(&mut rng);
            let u = random_morphism(&mut rng, &t_obj, &pb.object, &cfg);
            let cone = pair(&u.then(&pb.left), &u.then(&pb.right));
            let back = factor_through_mono(&into, &cone).expect("commuting cone factors");
            prop_assert!(back.equals(&u));
        }
    }

    #[test]
    fn factorize_recomposes(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 4, 0);
        let (x, y) = (any_group(&mut rng), any_group(&mut rng));
        let f = random_morphism(&mut rng, &x, &y, &SampleConfig::default());
        let fz = factorize(&f);
        prop_assert!(fz.deflation.is_epi() && fz.inflation.is_mono());
        prop_assert!(fz.deflation.then(&fz.inflation).equals(&f));
    }

    #[test]
    fn invariants_survive_representation(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 5, 0);
        let g = any_group(&mut rng);
        let (h, to, from) = represent(&mut rng, &g);
        prop_assert_eq!(g.invariants(), h.invariants());
        prop_assert!(to.is_iso() && from.is_iso());
    }

    #[test]
    fn pullback_of_epi(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 6, 0);
        let cfg = SampleConfig::default();
        let (z, w, y) = (any_group(&mut rng), any_group(&mut rng), any_group(&mut rng));
        let f = random_epi_onto(&mut rng, &z, &w, &cfg);
        let g = random_morphism(&mut rng, &y, &z, &cfg);
        let pb = pullback(&f, &g);
        prop_assert!(pb.right.is_epi());
        prop_assert!(kernel(&pb.right).0.is_isomorphic(&kernel(&f).0));
    }

    #[test]
    fn oracle_kernel_cokernel(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 7, 0);
        let x = small_finite(&mut rng, 64);
        let y = small_finite(&mut rng, 64);
        let f = random_morphism(&mut rng, &x, &y, &SampleConfig::default());
        let (fx, fy) = (Finite::new(&x).unwrap(), Finite::new(&y).unwrap());
        let ker_set: Vec<_> = fx.elements().into_iter().filter(|e| fy.is_zero(&apply(&f, &fy, e))).collect();
        let (k, incl) = kernel(&f);
        let fk = Finite::new(&k).unwrap();
        prop_assert!(is_injective(&incl, &fk, &fx));
        let img: Vec<_> = image(&incl, &fk, &fx).into_iter().collect();
        let mut expected = ker_set.clone();
        expected.sort();
        prop_assert_eq!(&img, &expected);
        prop_assert_eq!(fk.histogram(), fx.order_histogram(&ker_set));

        let (c, q) = cokernel(&f);
        let fc = Finite::new(&c).unwrap();
        let im_f = image(&f, &fx, &fy);
        prop_assert_eq!(fc.order() * im_f.len(), fy.order());
        prop_assert!(is_surjective(&q, &fy, &fc));
        let q_kernel: std::collections::BTreeSet<_> =
            fy.elements().into_iter().filter(|e| fc.is_zero(&apply(&q, &fc, e))).collect();
        prop_assert_eq!(q_kernel, im_f);
    }
}

#[test]
fn random_maps_are_deterministic_per_seed() {
    let mut a = rng_for(9, 0, 0);
    let mut b = rng_for(9, 0, 0);
    assert_eq!(a.gen::<u64>(), b.gen::<u64>());
    let x = common::group("Z/4+Z");
    let f: GroupMorphism = random_morphism(&mut a, &x, &x, &SampleConfig::default());
    let g = random_morphism(&mut b, &x, &x, &SampleConfig::default());
    assert!(f.equals(&g));
}
