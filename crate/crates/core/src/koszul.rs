//! Koszul complexes of commuting nilpotent actions on finite-length modules,
//! their homology lengths, and the partial Euler characteristics
//! `χ_j = Σ_{i≥j} (-1)^{i-j} λ(H_i)`.

use std::collections::HashMap;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finlength::{self, FinModule, FinMorphism, IsoType};
use crate::poly::Poly;
use crate::ring::{CoeffRing, Matrix};

/// A finite-length module with a sequence `x_1, ..., x_n` of pairwise
/// commuting nilpotent endomorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionSystem {
    module: FinModule,
    actions: Vec<FinMorphism>,
}

impl ActionSystem {
    pub fn new(module: FinModule, actions: Vec<FinMorphism>) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::EmptySequence);
        }
        for (i, x) in actions.iter().enumerate() {
            if x.source() != &module || x.target() != &module {
                return Err(Error::ShapeMismatch(format!(
                    "x_{} is not an endomorphism of the module",
                    i + 1
                )));
            }
        }
        for (i, j) in (0..actions.len()).tuple_combinations() {
            let xy = actions[i].compose(&actions[j])?;
            let yx = actions[j].compose(&actions[i])?;
            if !xy.same_map(&yx) {
                return Err(Error::ActionsDoNotCommute { i: i + 1, j: j + 1 });
            }
        }
        // A nilpotent endomorphism satisfies x^λ(M) = 0; square up past λ(M).
        let bound = module.length().max(1);
        for (i, x) in actions.iter().enumerate() {
            let mut power = x.clone();
            let mut steps = 1;
            while steps < bound && !power.is_zero() {
                power = power.compose(&power)?;
                steps *= 2;
            }
            if !power.is_zero() {
                return Err(Error::ActionNotInRadical { index: i + 1 });
            }
        }
        Ok(ActionSystem { module, actions })
    }

    /// Builds a system from integer matrices, one per action.
    pub fn from_matrices(module: FinModule, matrices: &[Vec<Vec<i64>>]) -> Result<Self> {
        let ring = module.ring();
        let actions = matrices
            .iter()
            .map(|rows| {
                let m = if rows.is_empty() {
                    Matrix::zero(ring, module.rank(), module.rank())
                } else {
                    Matrix::from_rows(ring, rows)?
                };
                FinMorphism::new(module.clone(), module.clone(), m)
            })
            .collect::<Result<Vec<_>>>()?;
        ActionSystem::new(module, actions)
    }

    pub fn module(&self) -> &FinModule {
        &self.module
    }

    pub fn actions(&self) -> &[FinMorphism] {
        &self.actions
    }

    pub fn ring(&self) -> CoeffRing {
        self.module.ring()
    }

    /// Length of the sequence.
    pub fn n(&self) -> usize {
        self.actions.len()
    }

    /// `f(x_1, ..., x_n)` as an endomorphism of the module.
    pub fn evaluate(&self, f: &Poly) -> Result<FinMorphism> {
        if f.num_vars() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "polynomial in {} variables evaluated on {} actions",
                f.num_vars(),
                self.n()
            )));
        }
        let mut total = FinMorphism::zero(&self.module, &self.module);
        for (m, c) in f.terms() {
            let mut term = FinMorphism::scalar(&self.module, c);
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    term = self.actions[i].compose(&term)?;
                }
            }
            total = total.add(&term)?;
        }
        Ok(total)
    }

    /// Replaces the sequence according to `transform`.
    pub fn transformed(&self, transform: &Transform) -> Result<ActionSystem> {
        let n = self.n();
        let actions = match transform {
            Transform::Permutation(perm) => {
                let mut seen = vec![false; n];
                if perm.len() != n
                    || perm
                        .iter()
                        .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
                {
                    return Err(Error::ShapeMismatch(format!(
                        "{perm:?} is not a permutation of 0..{n}"
                    )));
                }
                perm.iter().map(|&i| self.actions[i].clone()).collect()
            }
            Transform::Unimodular(u) => {
                if u.rows() != n || u.cols() != n {
                    return Err(Error::ShapeMismatch(format!(
                        "change of sequence must be {n}x{n}"
                    )));
                }
                if !u.is_invertible() {
                    return Err(Error::NotInvertible {
                        modulus: u.ring().modulus(),
                    });
                }
                (0..n)
                    .map(|i| {
                        (0..n).try_fold(FinMorphism::zero(&self.module, &self.module), |acc, j| {
                            acc.add(&self.actions[j].scale(u.get(i, j)))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        ActionSystem::new(self.module.clone(), actions)
    }

    /// `M ⊕ M'` with block-diagonal actions.
    pub fn direct_sum(&self, other: &ActionSystem) -> Result<ActionSystem> {
        if self.n() != other.n() {
            return Err(Error::ShapeMismatch(
                "direct sum needs equal sequence lengths".into(),
            ));
        }
        let module = self.module.direct_sum(&other.module)?;
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| {
                let m =
                    Matrix::block_diagonal(self.ring(), &[a.matrix().clone(), b.matrix().clone()]);
                FinMorphism::new(module.clone(), module.clone(), m)
            })
            .collect::<Result<Vec<_>>>()?;
        ActionSystem::new(module, actions)
    }

    /// JSON dump used in counterexample payloads.
    pub fn dump(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.ring().p(),
            "k": self.ring().k(),
            "exponents": self.module.exponents(),
            "actions": self.actions.iter().map(|x| x.matrix()).collect::<Vec<_>>(),
        })
    }
}

/// A change of the sequence `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transform {
    /// `x'_i = x_{perm[i]}`.
    Permutation(Vec<usize>),
    /// `x'_i = Σ_j U_ij x_j` for an invertible scalar matrix `U`.
    Unimodular(Matrix),
}

/// The `i`-element subsets of `{0, ..., n-1}` in lexicographic order.
pub fn subsets(n: usize, i: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(i).collect()
}

/// `K(x, M)`: `K_i = M^{C(n,i)}` indexed by sorted subsets, with
/// `d(e_S ⊗ m) = Σ_t (-1)^{t-1} e_{S∖{s_t}} ⊗ x_{s_t}(m)`.
#[derive(Debug, Clone)]
pub struct KoszulRep {
    n: usize,
    subsets: Vec<Vec<Vec<usize>>>,
    terms: Vec<FinModule>,
    /// `differentials[i - 1] = d_i : K_i -> K_{i-1}`.
    differentials: Vec<FinMorphism>,
}

pub fn build_koszul(sys: &ActionSystem) -> Result<KoszulRep> {
    let n = sys.n();
    let module = sys.module();
    let ring = sys.ring();
    let s = module.rank();
    let subsets: Vec<Vec<Vec<usize>>> = (0..=n).map(|i| subsets(n, i)).collect();
    let terms: Vec<FinModule> = subsets
        .iter()
        .map(|level| module.power(level.len()))
        .collect();

    let mut differentials = Vec::with_capacity(n);
    for i in 1..=n {
        let position: HashMap<&[usize], usize> = subsets[i - 1]
            .iter()
            .enumerate()
            .map(|(idx, t)| (t.as_slice(), idx))
            .collect();
        let mut matrix = Matrix::zero(ring, terms[i - 1].rank(), terms[i].rank());
        for (col_block, subset) in subsets[i].iter().enumerate() {
            for (t, &var) in subset.iter().enumerate() {
                let face: Vec<usize> = subset.iter().copied().filter(|&v| v != var).collect();
                let row_block = position[face.as_slice()];
                let x = sys.actions()[var].matrix();
                let block = if t % 2 == 0 { x.clone() } else { x.neg() };
                matrix.put_block(row_block * s, col_block * s, &block);
            }
        }
        differentials.push(FinMorphism::new(
            terms[i].clone(),
            terms[i - 1].clone(),
            matrix,
        )?);
    }

    let rep = KoszulRep {
        n,
        subsets,
        terms,
        differentials,
    };
    if !rep.is_complex()? {
        return Err(Error::NotAComplex);
    }
    Ok(rep)
}

impl KoszulRep {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn term(&self, i: usize) -> &FinModule {
        &self.terms[i]
    }

    pub fn subsets(&self, i: usize) -> &[Vec<usize>] {
        &self.subsets[i]
    }

    /// `d_i : K_i -> K_{i-1}` for `1 <= i <= n`.
    pub fn differential(&self, i: usize) -> &FinMorphism {
        &self.differentials[i - 1]
    }

    /// `d_{i-1} ∘ d_i = 0` for all `i`.
    pub fn is_complex(&self) -> Result<bool> {
        for i in 2..=self.n {
            if !self
                .differential(i - 1)
                .compose(self.differential(i))?
                .is_zero()
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The map into `K_i` (zero from the zero module when `i = n`).
    pub fn incoming(&self, i: usize) -> FinMorphism {
        if i == self.n {
            FinMorphism::zero(&FinModule::zero(self.terms[i].ring()), &self.terms[i])
        } else {
            self.differential(i + 1).clone()
        }
    }

    /// The map out of `K_i` (zero to the zero module when `i = 0`).
    pub fn outgoing(&self, i: usize) -> FinMorphism {
        if i == 0 {
            FinMorphism::zero(&self.terms[0], &FinModule::zero(self.terms[0].ring()))
        } else {
            self.differential(i).clone()
        }
    }

    /// `λ(H_i)` through [`finlength::homology_length_at`].
    pub fn homology_length(&self, i: usize) -> Result<usize> {
        finlength::homology_length_at(&self.incoming(i), &self.outgoing(i))
    }

    /// All `λ(H_i)`, reusing each differential's image length.
    pub fn homology_lengths(&self) -> Vec<usize> {
        let images: Vec<usize> = self
            .differentials
            .iter()
            .map(|d| d.image_length())
            .collect();
        (0..=self.n)
            .map(|i| {
                let out = if i == 0 { 0 } else { images[i - 1] };
                let inc = if i == self.n { 0 } else { images[i] };
                self.terms[i].length() - out - inc
            })
            .collect()
    }

    pub fn homology_iso_type(&self, i: usize) -> Result<IsoType> {
        finlength::iso_type(&self.incoming(i), &self.outgoing(i))
    }
}

/// `λ(H_0), ..., λ(H_n)` and `χ_0, ..., χ_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EulerProfile {
    pub n: usize,
    pub homology_lengths: Vec<usize>,
    pub chis: Vec<i64>,
}

impl EulerProfile {
    pub fn from_homology_lengths(homology_lengths: Vec<usize>) -> Self {
        let n = homology_lengths.len().saturating_sub(1);
        let mut chis = vec![0i64; homology_lengths.len()];
        let mut next = 0i64;
        for j in (0..homology_lengths.len()).rev() {
            next = homology_lengths[j] as i64 - next;
            chis[j] = next;
        }
        EulerProfile {
            n,
            homology_lengths,
            chis,
        }
    }

    /// `χ_j`, zero beyond `n`.
    pub fn chi(&self, j: usize) -> i64 {
        self.chis.get(j).copied().unwrap_or(0)
    }

    /// `(Σ_{i even} λ(H_i), Σ_{i odd} λ(H_i))`.
    pub fn parity_sums(&self) -> (usize, usize) {
        let even = self.homology_lengths.iter().step_by(2).sum();
        let odd = self.homology_lengths.iter().skip(1).step_by(2).sum();
        (even, odd)
    }
}

pub fn euler_profile(sys: &ActionSystem) -> Result<EulerProfile> {
    let rep = build_koszul(sys)?;
    Ok(EulerProfile::from_homology_lengths(rep.homology_lengths()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SerreVerdict {
    pub profile: EulerProfile,
    /// `χ_j >= 0` for each `j`.
    pub nonnegative: Vec<bool>,
    pub passed: bool,
    pub counterexample: Option<serde_json::Value>,
}

pub fn verify_serre(sys: &ActionSystem) -> Result<SerreVerdict> {
    let profile = euler_profile(sys)?;
    Ok(serre_verdict(sys, profile))
}

pub(crate) fn serre_verdict(sys: &ActionSystem, profile: EulerProfile) -> SerreVerdict {
    let nonnegative: Vec<bool> = profile.chis.iter().map(|&c| c >= 0).collect();
    let passed = nonnegative.iter().all(|&b| b);
    let counterexample =
        (!passed).then(|| serde_json::json!({ "system": sys.dump(), "profile": &profile }));
    SerreVerdict {
        profile,
        nonnegative,
        passed,
        counterexample,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyVerdict {
    pub chi0: i64,
    pub even_sum: usize,
    pub odd_sum: usize,
    pub passed: bool,
}

/// On a finite-length module `dim M = 0 < n`, so `χ_0` must vanish.
pub fn chi0_dichotomy_check(sys: &ActionSystem) -> Result<DichotomyVerdict> {
    Ok(dichotomy_verdict(&euler_profile(sys)?))
}

pub(crate) fn dichotomy_verdict(profile: &EulerProfile) -> DichotomyVerdict {
    let (even_sum, odd_sum) = profile.parity_sums();
    let chi0 = profile.chi(0);
    DichotomyVerdict {
        chi0,
        even_sum,
        odd_sum,
        passed: chi0 == 0 && even_sum == odd_sum,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryVerdict {
    pub h0: IsoType,
    /// `M / (x)M`.
    pub expected_h0: IsoType,
    pub hn: IsoType,
    /// `(0 :_M (x)) = ∩ ker x_i`.
    pub expected_hn: IsoType,
    /// `H_n ≠ 0` whenever `M ≠ 0`.
    pub hn_nonzero: bool,
    pub passed: bool,
}

pub fn boundary_identities(sys: &ActionSystem) -> Result<BoundaryVerdict> {
    let rep = build_koszul(sys)?;
    let n = sys.n();
    let module = sys.module();
    let ring = sys.ring();

    let h0 = rep.homology_iso_type(0)?;
    let mut images = Matrix::zero(ring, module.rank(), 0);
    for x in sys.actions() {
        images = images.hcat(x.matrix())?;
    }
    let expected_h0 = FinModule::cokernel(&images.hcat(&module.relation_matrix())?).iso_type();

    let hn = rep.homology_iso_type(n)?;
    let stacked = FinMorphism::stack(sys.actions())?;
    let from_zero = FinMorphism::zero(&FinModule::zero(ring), module);
    let expected_hn = finlength::iso_type(&from_zero, &stacked)?;

    let hn_nonzero = module.is_zero() || !hn.is_zero();
    let passed = h0 == expected_h0 && hn == expected_hn && hn_nonzero;
    Ok(BoundaryVerdict {
        h0,
        expected_h0,
        hn,
        expected_hn,
        hn_nonzero,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceVerdict {
    pub transform: String,
    pub original: EulerProfile,
    pub transformed: EulerProfile,
    pub passed: bool,
}

pub fn invariance_suite(sys: &ActionSystem, transform: &Transform) -> Result<InvarianceVerdict> {
    let original = euler_profile(sys)?;
    invariance_against(sys, &original, transform)
}

/// Same as [`invariance_suite`] with a precomputed profile for `sys`.
pub fn invariance_against(
    sys: &ActionSystem,
    original: &EulerProfile,
    transform: &Transform,
) -> Result<InvarianceVerdict> {
    let changed = sys.transformed(transform)?;
    let transformed = euler_profile(&changed)?;
    let description = match transform {
        Transform::Permutation(perm) => format!("permutation {perm:?}"),
        Transform::Unimodular(u) => format!("unimodular {:?}", u.to_rows()),
    };
    Ok(InvarianceVerdict {
        transform: description,
        passed: transformed.homology_lengths == original.homology_lengths,
        original: original.clone(),
        transformed,
    })
}
