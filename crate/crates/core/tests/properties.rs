use koszul_core::finlength::FinModule;
use koszul_core::koszul::{build_koszul, euler_profile, invariance_suite, Transform};
use koszul_core::lab::{generate_one, instance_rng, random_unimodular, GeneratorSpec, Shape};
use koszul_core::ring::{image_length, kernel_generators, smith_exponents, smith_normal_form};
use koszul_core::{CoeffRing, Matrix};
use proptest::prelude::*;

fn ring_strategy() -> impl Strategy<Value = CoeffRing> {
    (prop::sample::select(vec![2u64, 3, 5]), 1u32..=3)
        .prop_map(|(p, k)| CoeffRing::new(p, k).unwrap())
}

fn matrix_strategy() -> impl Strategy<Value = Matrix> {
    (ring_strategy(), 0usize..6, 0usize..6).prop_flat_map(|(ring, r, c)| {
        prop::collection::vec(0i64..1000, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c.max(1)).take(r).map(|row| row.to_vec()).collect();
            if c == 0 {
                Matrix::zero(ring, r, 0)
            } else {
                Matrix::from_rows(ring, &rows).unwrap()
            }
        })
    })
}

fn spec(seed: u64) -> GeneratorSpec {
    GeneratorSpec {
        seed,
        primes: vec![2, 3, 5],
        ks: vec![1, 2, 3],
        ns: vec![1, 2, 3],
        max_length: 24,
        shape: Shape::Mixed,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_reconstructs(a in matrix_strategy()) {
        let snf = smith_normal_form(&a);
        let d = snf.left.mul(&a).unwrap().mul(&snf.right).unwrap();
        prop_assert_eq!(&d, &snf.diagonal_matrix());
        prop_assert!(snf.left.is_invertible());
        prop_assert!(snf.right.is_invertible());
        prop_assert_eq!(&snf.exponents, &smith_exponents(&a));
        prop_assert!(snf.exponents.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn image_length_is_unimodular_invariant(a in matrix_strategy(), seed in any::<u64>()) {
        let ring = a.ring();
        let mut rng = instance_rng(seed, 0);
        let u = random_unimodular(ring, a.rows(), &mut rng);
        let v = random_unimodular(ring, a.cols(), &mut rng);
        let changed = u.mul(&a).unwrap().mul(&v).unwrap();
        prop_assert_eq!(image_length(&a), image_length(&changed));
    }

    #[test]
    fn kernel_plus_image_is_everything(a in matrix_strategy()) {
        let ring = a.ring();
        let kernel = kernel_generators(&a);
        prop_assert!(a.mul(&kernel).unwrap().is_zero());
        let k = ring.k() as usize;
        prop_assert_eq!(image_length(&kernel) + image_length(&a), k * a.cols());
    }

    #[test]
    fn direct_sum_is_additive(seed in any::<u64>(), index in 0u64..100_000) {
        let a = generate_one(&spec(seed), index).system;
        // Same ring and n: regenerate the partner from a one-config spec.
        let (p, k, n) = (a.ring().p(), a.ring().k(), a.n());
        let b = generate_one(&GeneratorSpec::single(seed ^ 1, p, k, n, 24, Shape::Mixed), index).system;
        let sum = euler_profile(&a.direct_sum(&b).unwrap()).unwrap();
        let (pa, pb) = (euler_profile(&a).unwrap(), euler_profile(&b).unwrap());
        for i in 0..=n {
            prop_assert_eq!(sum.homology_lengths[i], pa.homology_lengths[i] + pb.homology_lengths[i]);
            prop_assert_eq!(sum.chi(i), pa.chi(i) + pb.chi(i));
        }
    }

    #[test]
    fn euler_characteristic_of_terms(seed in any::<u64>(), index in 0u64..100_000) {
        let sys = generate_one(&spec(seed), index).system;
        let rep = build_koszul(&sys).unwrap();
        let profile = euler_profile(&sys).unwrap();
        let alternating = |f: &dyn Fn(usize) -> usize| -> i64 {
            (0..=sys.n()).map(|i| if i % 2 == 0 { f(i) as i64 } else { -(f(i) as i64) }).sum()
        };
        let terms = alternating(&|i| rep.term(i).length());
        prop_assert_eq!(terms, 0);
        prop_assert_eq!(profile.chi(0), 0);
        prop_assert!(profile.chis.iter().all(|&c| c >= 0));
        for i in 0..=sys.n() {
            prop_assert_eq!(profile.homology_lengths[i], rep.homology_length(i).unwrap());
            prop_assert_eq!(profile.homology_lengths[i], rep.homology_iso_type(i).unwrap().length());
        }
    }

    #[test]
    fn scaling_a_sequence_element_by_a_unit(seed in any::<u64>(), index in 0u64..100_000) {
        let sys = generate_one(&spec(seed), index).system;
        let ring = sys.ring();
        let n = sys.n();
        let unit = (1..ring.modulus()).find(|&c| ring.is_unit(c) && c != 1).unwrap_or(1);
        let mut diag = vec![1u64; n];
        diag[0] = unit;
        let t = Transform::Unimodular(Matrix::diagonal(ring, &diag));
        prop_assert!(invariance_suite(&sys, &t).unwrap().passed);
    }
}

#[test]
fn homology_of_power_modules() {
    // K(x, M^r) = K(x, M)^r.
    let ring = CoeffRing::new(3, 2).unwrap();
    let m = FinModule::new(ring, vec![2, 1]).unwrap();
    let sys = koszul_core::ActionSystem::from_matrices(m, &[vec![vec![3, 0], vec![1, 0]]]).unwrap();
    let single = euler_profile(&sys).unwrap();
    let triple = sys.direct_sum(&sys).unwrap().direct_sum(&sys).unwrap();
    let profile = euler_profile(&triple).unwrap();
    let expected: Vec<usize> = single.homology_lengths.iter().map(|h| 3 * h).collect();
    assert_eq!(profile.homology_lengths, expected);
}
