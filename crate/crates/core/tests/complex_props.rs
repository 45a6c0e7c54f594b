use preresolve_core::complex::{cone_image_conflations, cone_inclusion, is_acyclic, ChainComplex, ChainMap};
use preresolve_core::conflation::verify_conflation;
use preresolve_core::group::{factorize, GroupMorphism};
use preresolve_core::sample::{random_acyclic_complex, random_complex, rng_for, SampleConfig};
use preresolve_core::{ConflationStructure, PresentedGroup, Subcategory};
use proptest::prelude::*;

fn isbell() -> (Subcategory, ConflationStructure) {
    let i = Subcategory::isbell(2).unwrap();
    let s = ConflationStructure::induced(&i);
    (i, s)
}

fn sample(seed: u64, acyclic: bool, len: usize) -> ChainComplex {
    let (_, s) = isbell();
    let mut rng = rng_for(seed, 21, 0);
    let lo = -(len as i64) + 1;
    if acyclic {
        random_acyclic_complex(&mut rng, &s, &SampleConfig::default(), lo, len, 2)
    } else {
        random_complex(&mut rng, &s, &SampleConfig::default(), lo, len, 3)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cone_of_identity_is_acyclic(seed in any::<u64>(), acyclic in any::<bool>(), len in 1usize..5) {
        let c = sample(seed, acyclic, len);
        let cone = ChainMap::identity(&c).cone().unwrap();
        prop_assert!(cone.validate());
        prop_assert!(is_acyclic(&cone, &ConflationStructure::abelian(), None).is_some());
        let zero_cone = ChainMap::zero(&c, &c).cone().unwrap();
        prop_assert!(zero_cone.validate());
    }

    #[test]
    fn absolute_and_relative_agree(seed in any::<u64>(), acyclic in any::<bool>(), len in 1usize..6) {
        let (i, _) = isbell();
        let c = sample(seed, acyclic, len);
        let s = ConflationStructure::abelian();
        let absolute = is_acyclic(&c, &s, None).is_some();
        let relative = is_acyclic(&c, &ConflationStructure::induced(&i), Some(&i)).is_some();
        prop_assert_eq!(absolute, relative);
        if acyclic {
            prop_assert!(absolute);
        }
    }

    #[test]
    fn cone_image_conflations_verify(seed in any::<u64>(), len in 2usize..5) {
        let c = sample(seed, true, len);
        let s = ConflationStructure::abelian();
        let id = ChainMap::identity(&c);
        for f in [id.clone(), ChainMap::zero(&c, &c), cone_inclusion(&id).unwrap()] {
            for d in cone_image_conflations(&f, &s).unwrap() {
                prop_assert!(verify_conflation(&s, &d.first), "degree {}", d.degree);
                prop_assert!(verify_conflation(&s, &d.second), "degree {}", d.degree);
            }
        }
    }
}

#[test]
fn periodic_counterexample_pinned() {
    let z4 = PresentedGroup::cyclic(4);
    let e = ChainComplex::periodic(vec![z4.clone()], vec![GroupMorphism::scalar(&z4, 2)]).unwrap();
    let a = Subcategory::add_ring(4).unwrap();
    assert!(is_acyclic(&e, &ConflationStructure::killed_by(4), None).is_some());
    assert!(is_acyclic(&e, &ConflationStructure::killed_by(4), Some(&a)).is_none());
    let im = factorize(&e.diff(0)).image;
    assert!(im.is_isomorphic(&PresentedGroup::cyclic(2)));
}
