use kalai3d_core::io::{parse_polytope, PolytopeFile};
use kalai3d_core::{
    brute_force_faces, certify, enumerate_faces, facets_from_vrep, random_reflection_symmetric, vertices_from_hrep,
    OrthoBasis, Polytope,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn representations_roundtrip(d in 2usize..=3, m in 1usize..=3, seed in 0u64..10_000) {
        let p = random_reflection_symmetric(d, m, seed).unwrap();
        let h = facets_from_vrep(p.vrep()).unwrap();
        let v = vertices_from_hrep(&h).unwrap();
        prop_assert_eq!(v.vertices(), p.vertices());
        let q = Polytope::from_vrep(p.vrep()).unwrap();
        prop_assert_eq!(q.incidence(), p.incidence());
    }

    #[test]
    fn text_format_roundtrip(d in 2usize..=3, m in 1usize..=3, seed in 0u64..10_000) {
        let p = random_reflection_symmetric(d, m, seed).unwrap();
        for file in [PolytopeFile::H(p.hrep().clone()), PolytopeFile::V(p.vrep().clone())] {
            let back = parse_polytope(&file.to_text()).unwrap().build().unwrap();
            prop_assert_eq!(back.vertices(), p.vertices());
        }
    }

    #[test]
    fn certified_face_count(d in 2usize..=3, m in 1usize..=3, seed in 0u64..10_000) {
        let p = random_reflection_symmetric(d, m, seed).unwrap();
        let c = certify(&p, &OrthoBasis::standard(d));
        prop_assert!(c.verdict);
        prop_assert!(c.total >= 3usize.pow(d as u32));
        prop_assert_eq!(c.total, enumerate_faces(&p).total());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn incidence_lattice_matches_oracle(m in 1usize..=2, seed in 0u64..10_000) {
        let p = random_reflection_symmetric(2, m, seed).unwrap();
        let oracle = brute_force_faces(&p).unwrap();
        let lattice = enumerate_faces(&p);
        prop_assert_eq!(oracle.faces(), lattice.faces());
    }
}
