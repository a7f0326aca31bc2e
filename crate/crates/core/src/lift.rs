//! Lifting a finite-length system `(M, x)` to a polynomial ring.
//!
//! `M` is killed by `p^k`, so it is a module over `B = Z/p^k[X_1, ..., X_n]`
//! with `X_i` acting as `x_i`. Over `B` the variables form a regular system
//! of parameters, and `K(X, M)` is literally `K(x, M)`. Power series are not
//! needed: every element of the maximal ideal acts nilpotently on `M`, so
//! only finitely many degrees ever matter.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finlength::{presented_homology_length, PresentedModule, PresentedMorphism};
use crate::graded::{
    default_degree_bound, free_koszul_matrices, koszul_strand_profile, variables,
    GradedPresentation,
};
use crate::koszul::{euler_profile, ActionSystem, EulerProfile};
use crate::poly::Poly;
use crate::ring::{CoeffRing, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftChecks {
    /// `X_i` acts on `M` as `x_i`.
    pub variables_act_as_sequence: bool,
    /// `p^k M = 0`, and `p^k` is nonzero modulo `(X)` one level up.
    pub finite_over_base: bool,
    /// `H_{>0}(X, B)` vanishes strandwise up to the bound and `λ(B/(X)) = k`.
    pub regular_system_of_parameters: bool,
}

impl LiftChecks {
    pub fn all(&self) -> bool {
        self.variables_act_as_sequence && self.finite_over_base && self.regular_system_of_parameters
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftCertificate {
    pub p: u64,
    pub k: u32,
    /// Number of variables of `B`.
    pub n: usize,
    /// `B = Z/p^k[X_1..X_n]`, as text.
    pub base: String,
    pub sequence: Vec<Poly>,
    /// Valuation of `Δ = p^k`.
    pub delta_valuation: u32,
    pub justification: String,
    /// Degree up to which regularity was checked.
    pub degree_bound: i32,
    /// `λ(B/(X))`.
    pub residue_length: usize,
    pub checks: LiftChecks,
}

/// `(degree bound, λ(B/(X)), regular)`, keyed by `(p, k, n)`.
type RegularityCache = Mutex<HashMap<(u64, u32, usize), (i32, usize, bool)>>;

fn base_regularity(ring: CoeffRing, n: usize) -> (i32, usize, bool) {
    static CACHE: OnceLock<RegularityCache> = OnceLock::new();
    let key = (ring.p(), ring.k(), n);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&hit) = cache.lock().expect("cache lock").get(&key) {
        return hit;
    }
    let b = GradedPresentation::free(ring, n, vec![0]);
    let y = variables(ring, n);
    let bound = default_degree_bound(&b, &y);
    let result = match koszul_strand_profile(&b, &y, Some(bound)) {
        Ok(report) => {
            let residue = report.totals[0];
            let regular = report.higher_homology_vanishes() && residue == ring.k() as usize;
            (bound, residue, regular)
        }
        Err(_) => (bound, 0, false),
    };
    cache.lock().expect("cache lock").insert(key, result);
    result
}

pub fn construct_lift(sys: &ActionSystem) -> Result<LiftCertificate> {
    let ring = sys.ring();
    let (p, k, n) = (ring.p(), ring.k(), sys.n());
    let sequence: Vec<Poly> = (0..n).map(|i| Poly::variable(ring, n, i)).collect();

    let mut acts = true;
    for (i, y) in sequence.iter().enumerate() {
        acts &= sys.evaluate(y)?.same_map(&sys.actions()[i]);
    }

    // Exponents never exceed k, so p^k kills M. In Z/p^{k+1}[X] the constant
    // p^k survives reduction modulo (X).
    let killed = sys.module().exponents().iter().all(|&e| e <= k);
    let wider = CoeffRing::new(p, k + 1).ok();
    let not_in_x = wider.is_none_or(|w| w.p_power(k) != 0);

    let (degree_bound, residue_length, regular) = base_regularity(ring, n);
    Ok(LiftCertificate {
        p,
        k,
        n,
        base: format!("Z/{p}^{k}[X_1..X_{n}]"),
        sequence,
        delta_valuation: k,
        justification: format!(
            "Δ = {p}^{k} annihilates M and is not in (X): its residue {p}^{k} in Z/{p}^{} is nonzero",
            k + 1
        ),
        degree_bound,
        residue_length,
        checks: LiftChecks {
            variables_act_as_sequence: acts,
            finite_over_base: killed && not_in_x,
            regular_system_of_parameters: regular,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseChangeVerdict {
    /// Profile of `K(x, M)`.
    pub over_actions: EulerProfile,
    /// Profile of `K(y, B) ⊗_B M`.
    pub over_base: EulerProfile,
    pub passed: bool,
    /// System dump, present on mismatch.
    pub counterexample: Option<serde_json::Value>,
}

/// `λ(H_i)` of `K(y, B) ⊗_B M`, with the free Koszul matrices evaluated
/// entrywise through the action of `B` on `M`.
fn base_changed_homology(sys: &ActionSystem, sequence: &[Poly]) -> Result<Vec<usize>> {
    let ring = sys.ring();
    let n = sequence.len();
    let m = sys.module().presented();
    let s = m.rank();
    let matrices = free_koszul_matrices(sequence);

    let mut evaluated = Vec::with_capacity(n);
    for poly_matrix in &matrices {
        let rows = poly_matrix.len();
        let cols = poly_matrix.first().map_or(0, Vec::len);
        let mut lift = Matrix::zero(ring, rows * s, cols * s);
        for (r, row) in poly_matrix.iter().enumerate() {
            for (c, f) in row.iter().enumerate() {
                if !f.is_zero() {
                    lift.put_block(r * s, c * s, sys.evaluate(f)?.matrix());
                }
            }
        }
        evaluated.push(lift);
    }

    let term = |size: usize| PresentedModule::direct_sum(ring, &vec![m.clone(); size]);
    let sizes: Vec<usize> = std::iter::once(1)
        .chain(matrices.iter().map(|mat| mat.first().map_or(0, Vec::len)))
        .collect();
    let terms: Vec<PresentedModule> = sizes.iter().map(|&c| term(c)).collect();
    let zero = PresentedModule::new(Matrix::zero(ring, 0, 0));

    (0..=n)
        .map(|i| {
            let d_in = if i == n {
                PresentedMorphism::new(
                    zero.clone(),
                    terms[i].clone(),
                    Matrix::zero(ring, terms[i].rank(), 0),
                )?
            } else {
                PresentedMorphism::new(
                    terms[i + 1].clone(),
                    terms[i].clone(),
                    evaluated[i].clone(),
                )?
            };
            let d_out = if i == 0 {
                PresentedMorphism::new(
                    terms[0].clone(),
                    zero.clone(),
                    Matrix::zero(ring, 0, terms[0].rank()),
                )?
            } else {
                PresentedMorphism::new(
                    terms[i].clone(),
                    terms[i - 1].clone(),
                    evaluated[i - 1].clone(),
                )?
            };
            presented_homology_length(&d_in, &d_out)
        })
        .collect()
}

pub fn verify_base_change(sys: &ActionSystem, cert: &LiftCertificate) -> Result<BaseChangeVerdict> {
    let ring = sys.ring();
    if cert.p != ring.p() || cert.k != ring.k() || cert.n != sys.n() {
        return Err(Error::InvalidSpec(
            "certificate was produced for a different system".into(),
        ));
    }
    let over_actions = euler_profile(sys)?;
    let over_base =
        EulerProfile::from_homology_lengths(base_changed_homology(sys, &cert.sequence)?);
    let passed = over_actions == over_base;
    Ok(BaseChangeVerdict {
        counterexample: (!passed).then(|| sys.dump()),
        over_actions,
        over_base,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlength::FinModule;

    fn z4() -> CoeffRing {
        CoeffRing::new(2, 2).unwrap()
    }

    #[test]
    fn cyclic_example() {
        let sys =
            ActionSystem::from_matrices(FinModule::new(z4(), vec![2]).unwrap(), &[vec![vec![2]]])
                .unwrap();
        let cert = construct_lift(&sys).unwrap();
        assert!(cert.checks.all());
        assert_eq!(cert.delta_valuation, 2);
        assert_eq!(cert.residue_length, 2);
        let v = verify_base_change(&sys, &cert).unwrap();
        assert!(v.passed);
        assert_eq!(v.over_base.homology_lengths, vec![1, 1]);
    }

    #[test]
    fn zero_actions_on_z2() {
        let z2 = CoeffRing::new(2, 1).unwrap();
        let m = FinModule::new(z2, vec![1]).unwrap();
        let sys = ActionSystem::from_matrices(m, &[vec![vec![0]], vec![vec![0]]]).unwrap();
        let cert = construct_lift(&sys).unwrap();
        assert!(cert.checks.all());
        assert_eq!(cert.residue_length, 1);
        let v = verify_base_change(&sys, &cert).unwrap();
        assert!(v.passed);
        assert_eq!(v.over_base.homology_lengths, vec![1, 2, 1]);
    }

    #[test]
    fn zero_module() {
        let sys = ActionSystem::from_matrices(FinModule::zero(z4()), &[vec![], vec![]]).unwrap();
        let cert = construct_lift(&sys).unwrap();
        assert!(cert.checks.all());
        assert_eq!(cert.residue_length, 2);
        assert!(verify_base_change(&sys, &cert).unwrap().passed);
    }

    #[test]
    fn two_actions_on_a_quotient() {
        // Z/4[X]/(X^2, 2X) with X acting on basis (1, X).
        let m = FinModule::new(z4(), vec![2, 1]).unwrap();
        let sys = ActionSystem::from_matrices(
            m,
            &[vec![vec![0, 0], vec![1, 0]], vec![vec![2, 0], vec![0, 0]]],
        )
        .unwrap();
        let cert = construct_lift(&sys).unwrap();
        assert!(cert.checks.all());
        assert!(verify_base_change(&sys, &cert).unwrap().passed);
    }

    #[test]
    fn foreign_certificate_rejected() {
        let z2 = CoeffRing::new(2, 1).unwrap();
        let a = ActionSystem::from_matrices(FinModule::new(z2, vec![1]).unwrap(), &[vec![vec![0]]])
            .unwrap();
        let b =
            ActionSystem::from_matrices(FinModule::new(z4(), vec![2]).unwrap(), &[vec![vec![2]]])
                .unwrap();
        let cert = construct_lift(&a).unwrap();
        assert!(verify_base_change(&b, &cert).is_err());
    }
}
