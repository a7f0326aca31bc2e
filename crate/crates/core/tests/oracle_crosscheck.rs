use koszul_core::finlength::FinModule;
use koszul_core::koszul::euler_profile;
use koszul_core::lab::{
    combinatorial_length, enumerated_length, generate, generate_one, oracle_homology,
    p_monomial_system, GeneratorSpec, PMonomialGenerator, Provenance, Shape, DEFAULT_MODULE_BOUND,
    DEFAULT_SUBGROUP_CAP,
};
use koszul_core::{ActionSystem, CoeffRing, Error};
use proptest::prelude::*;

fn all_configs(seed: u64, max_length: usize, shape: Shape) -> GeneratorSpec {
    GeneratorSpec {
        seed,
        primes: vec![2, 3, 5],
        ks: vec![1, 2, 3],
        ns: vec![1, 2, 3],
        max_length,
        shape,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pipeline_matches_enumeration(seed in any::<u64>(), index in 0u64..1_000_000) {
        let instance = generate_one(&all_configs(seed, 12, Shape::Mixed), index);
        let sys = &instance.system;
        prop_assume!(sys.module().order().unwrap() <= DEFAULT_MODULE_BOUND);
        let ours = euler_profile(sys).unwrap().homology_lengths;
        let oracle = oracle_homology(sys, DEFAULT_MODULE_BOUND, DEFAULT_SUBGROUP_CAP).unwrap();
        prop_assert_eq!(ours, oracle.homology_lengths);
    }

    #[test]
    fn closed_form_length_matches_enumeration(seed in any::<u64>(), index in 0u64..1_000_000) {
        let instance = generate_one(&all_configs(seed, 12, Shape::PMonomial), index);
        let Provenance::PMonomial { generators } = &instance.provenance else {
            panic!("p-monomial spec produced {:?}", instance.provenance);
        };
        let sys = &instance.system;
        let k = sys.ring().k();
        let closed = combinatorial_length(generators, sys.n(), k).unwrap();
        prop_assert_eq!(closed, sys.module().length());
        prop_assert_eq!(closed, enumerated_length(sys.module(), DEFAULT_SUBGROUP_CAP).unwrap());
    }
}

#[test]
fn oracle_on_larger_modules() {
    // Uniform over the first instances with 1000 < |M| <= 4096.
    let spec = all_configs(11, 12, Shape::Mixed);
    let mut checked = 0;
    for instance in generate(&spec).unwrap().take(3000) {
        let order = instance.system.module().order().unwrap();
        if order <= 1000 || order > DEFAULT_MODULE_BOUND {
            continue;
        }
        let ours = euler_profile(&instance.system).unwrap().homology_lengths;
        let oracle =
            oracle_homology(&instance.system, DEFAULT_MODULE_BOUND, DEFAULT_SUBGROUP_CAP).unwrap();
        assert_eq!(ours, oracle.homology_lengths, "instance {}", instance.index);
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} large instances");
}

#[test]
fn worked_p_monomial_example() {
    let z4 = CoeffRing::new(2, 2).unwrap();
    let gens = [
        PMonomialGenerator {
            pexp: 0,
            monomial: vec![2],
        },
        PMonomialGenerator {
            pexp: 1,
            monomial: vec![1],
        },
    ];
    let sys = p_monomial_system(z4, 1, &gens).unwrap();
    assert_eq!(sys.module().order(), Some(8));
    let oracle = oracle_homology(&sys, DEFAULT_MODULE_BOUND, DEFAULT_SUBGROUP_CAP).unwrap();
    assert_eq!(
        oracle.homology_lengths,
        euler_profile(&sys).unwrap().homology_lengths
    );
}

#[test]
fn subgroup_cap_is_enforced() {
    // (Z/2)^12 with zero actions, n = 2: im d_1 = 0 but K_1 is huge; a tiny cap
    // still suffices. With a nonzero action the image needs real room.
    let z2 = CoeffRing::new(2, 1).unwrap();
    let m = FinModule::free(z2, 12);
    let zero = vec![vec![0i64; 12]; 12];
    let mut shift = zero.clone();
    for i in 0..11 {
        shift[i + 1][i] = 1;
    }
    let sys = ActionSystem::from_matrices(m, &[shift, zero]).unwrap();
    assert!(matches!(
        oracle_homology(&sys, DEFAULT_MODULE_BOUND, 16),
        Err(Error::EnumerationBoundExceeded { .. })
    ));
    let r = oracle_homology(&sys, DEFAULT_MODULE_BOUND, DEFAULT_SUBGROUP_CAP).unwrap();
    assert_eq!(
        r.homology_lengths,
        euler_profile(&sys).unwrap().homology_lengths
    );
}
