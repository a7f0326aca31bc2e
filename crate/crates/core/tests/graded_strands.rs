use koszul_core::graded::{
    koszul_strand_profile, lech_multiplicity_table, shift_check, strand,
    validate_multiplicity_system, variables, GradedPresentation, KoszulSequenceEntry, Ratio,
    ShiftStatus,
};
use koszul_core::koszul::euler_profile;
use koszul_core::lab::{combinatorial_length, p_monomial_system, PMonomialGenerator};
use koszul_core::poly::Poly;
use koszul_core::CoeffRing;
use proptest::prelude::*;

fn p_monomial_ideal() -> impl Strategy<Value = (CoeffRing, usize, Vec<PMonomialGenerator>)> {
    (prop::sample::select(vec![2u64, 3]), 1u32..=2, 1usize..=2).prop_flat_map(|(p, k, n)| {
        let ring = CoeffRing::new(p, k).unwrap();
        let pure = prop::collection::vec(1u32..=3, n);
        let extra = prop::collection::vec((0..k, prop::collection::vec(0u32..3, n)), 0..3);
        (pure, extra).prop_map(move |(pure, extra)| {
            let mut gens: Vec<PMonomialGenerator> = pure
                .iter()
                .enumerate()
                .map(|(i, &d)| {
                    let mut monomial = vec![0; n];
                    monomial[i] = d;
                    PMonomialGenerator { pexp: 0, monomial }
                })
                .collect();
            gens.extend(
                extra
                    .into_iter()
                    .map(|(pexp, monomial)| PMonomialGenerator { pexp, monomial }),
            );
            (ring, n, gens)
        })
    })
}

fn as_polys(ring: CoeffRing, gens: &[PMonomialGenerator]) -> Vec<Poly> {
    gens.iter()
        .map(|g| Poly::term(ring, g.monomial.clone(), ring.p_power(g.pexp) as i64))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graded_and_finite_pipelines_agree((ring, n, gens) in p_monomial_ideal()) {
        let graded = GradedPresentation::quotient_ring(ring, n, &as_polys(ring, &gens)).unwrap();
        let report = koszul_strand_profile(&graded, &variables(ring, n), None).unwrap();
        prop_assert!(report.stabilized);
        let sys = p_monomial_system(ring, n, &gens).unwrap();
        prop_assert_eq!(&report.totals, &euler_profile(&sys).unwrap().homology_lengths);

        let strand_total: usize = (0..=12).map(|d| strand(&graded, d).length()).sum();
        prop_assert_eq!(strand_total, combinatorial_length(&gens, n, ring.k()).unwrap());
        prop_assert!(validate_multiplicity_system(&graded, &variables(ring, n), None));
    }

    #[test]
    fn shift_holds_on_p_monomial_ideals((ring, _, gens) in p_monomial_ideal()) {
        prop_assume!(gens.iter().all(|g| g.monomial.len() == 2));
        let v = shift_check(ring, 2, &as_polys(ring, &gens), &variables(ring, 2), None).unwrap();
        prop_assert_eq!(v.status, ShiftStatus::Pass, "{:?}", v.mismatches);
    }
}

#[test]
fn scaling_law_on_polynomial_rings() {
    for (p, k) in [(2, 1), (2, 3), (3, 2), (5, 1)] {
        let ring = CoeffRing::new(p, k).unwrap();
        for n in 1..=2 {
            let b = GradedPresentation::free(ring, n, vec![0]);
            let table = lech_multiplicity_table(&b, &variables(ring, n), 4, None).unwrap();
            assert!(table.scaling_law, "{table:?}");
            assert_eq!(table.leading_coefficient, Some(Ratio::new(k as i64, 1)));
        }
    }
}

#[test]
fn mixed_degree_sequence() {
    // y = (X^2, Y^3) on Z/9[X, Y]: χ_0 = 2 * 6 = 12, no higher homology.
    let ring = CoeffRing::new(3, 2).unwrap();
    let b = GradedPresentation::free(ring, 2, vec![0]);
    let y = vec![
        KoszulSequenceEntry::variable(ring, 2, 0).pow(2),
        KoszulSequenceEntry::variable(ring, 2, 1).pow(3),
    ];
    let report = koszul_strand_profile(&b, &y, None).unwrap();
    assert!(report.stabilized);
    assert_eq!(report.totals, vec![12, 0, 0]);
}

#[test]
fn twisted_free_module() {
    // B(-1) ⊕ B(-3) over Z/2[X]: H_0 = Z/2 in degrees 1 and 3.
    let ring = CoeffRing::new(2, 1).unwrap();
    let m = GradedPresentation::free(ring, 1, vec![1, 3]);
    let report = koszul_strand_profile(&m, &variables(ring, 1), None).unwrap();
    assert_eq!(report.totals, vec![2, 0]);
    assert_eq!(report.homology_at(0, 1), 1);
    assert_eq!(report.homology_at(0, 3), 1);
    assert_eq!(report.homology_at(0, 2), 0);
}

#[test]
fn non_monomial_presentation() {
    // Coker of [X, Y] : B(-1)^2 -> B on Z/4[X, Y] is B/(X, Y) = Z/4.
    let ring = CoeffRing::new(2, 2).unwrap();
    let x = Poly::variable(ring, 2, 0);
    let y = Poly::variable(ring, 2, 1);
    let m = GradedPresentation::new(ring, 2, vec![0], vec![1, 1], vec![vec![x, y]]).unwrap();
    let report = koszul_strand_profile(&m, &variables(ring, 2), None).unwrap();
    assert_eq!(report.totals, vec![2, 4, 2]);
    assert!(report.stabilized);
}
