use preresolve_core::complex::{is_acyclic, is_quasi_iso};
use preresolve_core::conflation::Ambient;
use preresolve_core::resolve::{
    dominate_resolutions, pad_to_relative_acyclic, replace_bounded, replace_bounded_above, resdim, resolve_object,
    Resolution, ResdimValue,
};
use preresolve_core::sample::{random_acyclic_complex, random_complex, random_group, rng_for, SampleConfig};
use preresolve_core::{ConflationStructure, Subcategory};
use proptest::prelude::*;

fn isbell() -> Subcategory {
    Subcategory::isbell(2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resolutions_are_exact(seed in any::<u64>()) {
        let i = isbell();
        let mut rng = rng_for(seed, 41, 0);
        let e = random_group(&mut rng, Ambient::AllGroups, &SampleConfig::default(), 3);
        let r = resolve_object(&i, &e, 2).unwrap();
        prop_assert!(r.verify(&i));
        prop_assert!(is_acyclic(&r.augmented(), &ConflationStructure::abelian(), None).is_some());
        let expected = usize::from(!i.member(&e));
        prop_assert_eq!(r.length(), expected);
        prop_assert_eq!(resdim(&i, &e, 4).unwrap().finite(), Some(expected));
    }

    #[test]
    fn replacement_is_member_quasi_iso(seed in any::<u64>(), len in 1usize..=6) {
        let i = isbell();
        let s = ConflationStructure::abelian();
        let mut rng = rng_for(seed, 42, 0);
        let e = random_complex(&mut rng, &s, &SampleConfig::default(), 0, len, 3);
        let r = replace_bounded_above(&i, &e, 8).unwrap();
        prop_assert!(r.members && r.quasi_iso);
        prop_assert!(is_quasi_iso(&r.map, &s).unwrap().quasi_iso);
        let b = replace_bounded(&i, &e).unwrap();
        prop_assert!(b.members && b.quasi_iso);
        prop_assert!(b.window_growth <= 1, "growth {}", b.window_growth);
    }

    #[test]
    fn domination_propagates(seed in any::<u64>()) {
        let i = isbell();
        let mut rng = rng_for(seed, 43, 0);
        let e = random_group(&mut rng, Ambient::KilledBy(12), &SampleConfig::default(), 2);
        let minimal = resolve_object(&i, &e, 2).unwrap();
        // A longer resolution of the same object: cover the minimal one's
        // augmentation again through the free cover of its first term.
        let cover = i.cover(&minimal.term(0)).unwrap();
        let aug = cover.then(&minimal.augmentation);
        let longer = preresolve_core::resolve::resolve_from(&i, &aug, 3).unwrap();
        prop_assert!(longer.verify(&i));
        for (a, c) in [(&longer, &minimal), (&minimal, &longer), (&minimal, &minimal)] {
            let d = dominate_resolutions(&i, a, c).unwrap();
            prop_assert!(d.verified(&i));
            for l in &d.kernel_levels {
                prop_assert!(!l.a_member || l.b_member, "level {}", l.level);
            }
        }
    }

    #[test]
    fn padding_of_acyclic_member_complexes(seed in any::<u64>(), len in 1usize..=5) {
        let i = isbell();
        let mut rng = rng_for(seed, 44, 0);
        let e = random_acyclic_complex(&mut rng, &ConflationStructure::induced(&i), &SampleConfig::default(), 0, len, 2);
        let p = pad_to_relative_acyclic(&i, &e).unwrap();
        prop_assert!(p.homotopy_replays && p.relatively_acyclic());
    }
}

#[test]
fn resolution_json_round_trip_shape() {
    let i = isbell();
    let r: Resolution = resolve_object(&i, &preresolve_core::PresentedGroup::cyclic(4), 2).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert!(v.get("terms").is_some() && v.get("augmentation").is_some());
    let add = Subcategory::add_ring(4).unwrap();
    let z2 = preresolve_core::PresentedGroup::cyclic(2);
    assert!(matches!(resdim(&add, &z2, 8).unwrap(), ResdimValue::InfiniteEvidence { .. }));
}
