//! Finite-length Z/p^k-modules, their morphisms, and homology lengths.
//!
//! A [`FinModule`] is stored in elementary-divisor form `⊕ Z/p^{e_i}`. Maps
//! between them are integer matrices subject to a congruence condition.
//! Image and homology lengths are computed by lifting to free presentations
//! and reading Smith exponents; nothing here enumerates elements.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{image_length, kernel_generators, smith_exponents, CoeffRing, Matrix};

/// `⊕_i Z/p^{e_i}` with every `e_i` in `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinModule {
    ring: CoeffRing,
    exponents: Vec<u32>,
}

impl FinModule {
    pub fn new(ring: CoeffRing, exponents: Vec<u32>) -> Result<Self> {
        if let Some(&e) = exponents.iter().find(|&&e| e == 0 || e > ring.k()) {
            return Err(Error::InvalidExponent {
                exponent: e,
                k: ring.k(),
            });
        }
        Ok(FinModule { ring, exponents })
    }

    pub fn zero(ring: CoeffRing) -> Self {
        FinModule {
            ring,
            exponents: Vec::new(),
        }
    }

    /// Z/p^k as a module over itself.
    pub fn free(ring: CoeffRing, rank: usize) -> Self {
        FinModule {
            ring,
            exponents: vec![ring.k(); rank],
        }
    }

    /// Normalizes `coker(A : (Z/p^k)^cols -> (Z/p^k)^rows)`.
    pub fn cokernel(relations: &Matrix) -> Self {
        let ring = relations.ring();
        let diag = smith_exponents(relations);
        let mut exponents: Vec<u32> = diag.into_iter().filter(|&a| a > 0).collect();
        let r = relations.rows().min(relations.cols());
        exponents.extend(std::iter::repeat_n(ring.k(), relations.rows() - r));
        FinModule { ring, exponents }
    }

    pub fn direct_sum(&self, other: &FinModule) -> Result<FinModule> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.modulus(),
                right: other.ring.modulus(),
            });
        }
        let mut exponents = self.exponents.clone();
        exponents.extend_from_slice(&other.exponents);
        Ok(FinModule {
            ring: self.ring,
            exponents,
        })
    }

    /// `self^copies`.
    pub fn power(&self, copies: usize) -> FinModule {
        FinModule {
            ring: self.ring,
            exponents: self.exponents.repeat(copies),
        }
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of cyclic summands.
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn length(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Number of elements, `p^length`, if it fits.
    pub fn order(&self) -> Option<u128> {
        (self.ring.p() as u128).checked_pow(self.length() as u32)
    }

    pub fn iso_type(&self) -> IsoType {
        IsoType::from_exponents(self.exponents.clone())
    }

    /// The diagonal relation matrix `diag(p^{e_i})` of the free cover.
    pub fn relation_matrix(&self) -> Matrix {
        let entries: Vec<u64> = self
            .exponents
            .iter()
            .map(|&e| self.ring.p_power(e))
            .collect();
        Matrix::diagonal(self.ring, &entries)
    }

    pub fn presented(&self) -> PresentedModule {
        PresentedModule {
            rank: self.rank(),
            relations: self.relation_matrix(),
        }
    }
}

/// Isomorphism type of a finite-length module: exponents in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IsoType {
    exponents: Vec<u32>,
}

impl IsoType {
    pub fn from_exponents(mut exponents: Vec<u32>) -> Self {
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        IsoType { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn length(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// A morphism `⊕ Z/p^{e_j} -> ⊕ Z/p^{f_i}` given by an integer matrix.
///
/// Well defined iff `v(a_ij) >= f_i - e_j` for all entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinMorphism {
    source: FinModule,
    target: FinModule,
    matrix: Matrix,
}

impl FinMorphism {
    pub fn new(source: FinModule, target: FinModule, matrix: Matrix) -> Result<Self> {
        if source.ring != target.ring || matrix.ring() != source.ring {
            return Err(Error::RingMismatch {
                left: source.ring.modulus(),
                right: matrix.ring().modulus(),
            });
        }
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{} but the morphism needs {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        let ring = source.ring;
        for (i, &f) in target.exponents.iter().enumerate() {
            for (j, &e) in source.exponents.iter().enumerate() {
                let required = f.saturating_sub(e);
                let entry = matrix.get(i, j);
                if required > 0 && ring.valuation(entry) < required {
                    return Err(Error::IllDefinedMorphism {
                        row: i,
                        col: j,
                        entry,
                        required,
                    });
                }
            }
        }
        Ok(FinMorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(module: &FinModule) -> Self {
        FinMorphism {
            source: module.clone(),
            target: module.clone(),
            matrix: Matrix::identity(module.ring, module.rank()),
        }
    }

    pub fn zero(source: &FinModule, target: &FinModule) -> Self {
        FinMorphism {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zero(source.ring, target.rank(), source.rank()),
        }
    }

    /// Multiplication by a scalar on `module`.
    pub fn scalar(module: &FinModule, c: u64) -> Self {
        Self::identity(module).scale(c)
    }

    pub fn source(&self) -> &FinModule {
        &self.source
    }

    pub fn target(&self) -> &FinModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FinMorphism) -> Result<FinMorphism> {
        if other.target != self.source {
            return Err(Error::ShapeMismatch(
                "composition: target of the inner map is not the source of the outer map".into(),
            ));
        }
        Ok(FinMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }

    fn same_shape(&self, other: &FinMorphism) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch(
                "morphisms have different source or target".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &FinMorphism) -> Result<FinMorphism> {
        self.same_shape(other)?;
        Ok(FinMorphism {
            matrix: self.matrix.add(&other.matrix)?,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &FinMorphism) -> Result<FinMorphism> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FinMorphism {
        FinMorphism {
            matrix: self.matrix.neg(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: u64) -> FinMorphism {
        FinMorphism {
            matrix: self.matrix.scale(c),
            ..self.clone()
        }
    }

    /// Whether this is the zero map (row `i` vanishes modulo `p^{f_i}`).
    pub fn is_zero(&self) -> bool {
        let ring = self.source.ring;
        self.target
            .exponents
            .iter()
            .enumerate()
            .all(|(i, &f)| self.matrix.row(i).iter().all(|&v| ring.valuation(v) >= f))
    }

    /// Equality as maps, not as matrices.
    pub fn same_map(&self, other: &FinMorphism) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    pub fn presented(&self) -> PresentedMorphism {
        PresentedMorphism {
            source: self.source.presented(),
            target: self.target.presented(),
            lift: self.matrix.clone(),
        }
    }

    /// `λ(im f)`.
    pub fn image_length(&self) -> usize {
        self.presented().image_length()
    }

    /// `λ(ker f) = λ(source) - λ(im f)`.
    pub fn kernel_length(&self) -> usize {
        self.source.length() - self.image_length()
    }

    /// Stacks `f_1, ..., f_m : M -> N_i` into `M -> ⊕ N_i`.
    pub fn stack(maps: &[FinMorphism]) -> Result<FinMorphism> {
        let first = maps
            .first()
            .ok_or_else(|| Error::ShapeMismatch("cannot stack zero maps".into()))?;
        let mut target = FinModule::zero(first.source.ring);
        let mut matrix = Matrix::zero(first.source.ring, 0, first.source.rank());
        for f in maps {
            if f.source != first.source {
                return Err(Error::ShapeMismatch(
                    "stacked maps need a common source".into(),
                ));
            }
            target = target.direct_sum(&f.target)?;
            matrix = matrix.vcat(&f.matrix)?;
        }
        Ok(FinMorphism {
            source: first.source.clone(),
            target,
            matrix,
        })
    }
}

/// `coker(relations)` on a free module of the given rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedModule {
    rank: usize,
    relations: Matrix,
}

impl PresentedModule {
    pub fn new(relations: Matrix) -> Self {
        PresentedModule {
            rank: relations.rows(),
            relations,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn length(&self) -> usize {
        self.relations.ring().k() as usize * self.rank - image_length(&self.relations)
    }

    pub fn normalize(&self) -> FinModule {
        FinModule::cokernel(&self.relations)
    }

    /// Direct sum of presentations (block-diagonal relations).
    pub fn direct_sum(ring: CoeffRing, parts: &[PresentedModule]) -> PresentedModule {
        let blocks: Vec<Matrix> = parts.iter().map(|p| p.relations.clone()).collect();
        PresentedModule::new(Matrix::block_diagonal(ring, &blocks))
    }
}

/// A map of presented modules given by a lift between the free covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedMorphism {
    source: PresentedModule,
    target: PresentedModule,
    lift: Matrix,
}

impl PresentedMorphism {
    /// Trusts that `lift` carries source relations into target relations;
    /// use [`PresentedMorphism::is_well_defined`] to check.
    pub fn new(source: PresentedModule, target: PresentedModule, lift: Matrix) -> Result<Self> {
        if lift.rows() != target.rank || lift.cols() != source.rank {
            return Err(Error::ShapeMismatch(format!(
                "lift is {}x{} but the map needs {}x{}",
                lift.rows(),
                lift.cols(),
                target.rank,
                source.rank
            )));
        }
        Ok(PresentedMorphism {
            source,
            target,
            lift,
        })
    }

    pub fn source(&self) -> &PresentedModule {
        &self.source
    }

    pub fn target(&self) -> &PresentedModule {
        &self.target
    }

    pub fn lift(&self) -> &Matrix {
        &self.lift
    }

    pub fn is_well_defined(&self) -> Result<bool> {
        let moved = self.lift.mul(&self.source.relations)?;
        lies_in_image(&moved, &self.target.relations)
    }

    /// `λ(im)` = `λ(im [lift | R_target]) - λ(im R_target)`.
    pub fn image_length(&self) -> usize {
        let augmented = self
            .lift
            .hcat(&self.target.relations)
            .expect("lift and target relations share rows");
        image_length(&augmented) - image_length(&self.target.relations)
    }

    pub fn is_zero(&self) -> bool {
        self.image_length() == 0
    }

    pub fn compose(&self, inner: &PresentedMorphism) -> Result<PresentedMorphism> {
        if inner.target.rank != self.source.rank {
            return Err(Error::ShapeMismatch("composition of presented maps".into()));
        }
        Ok(PresentedMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            lift: self.lift.mul(&inner.lift)?,
        })
    }
}

/// Whether every column of `vectors` lies in the column span of `span`.
pub fn lies_in_image(vectors: &Matrix, span: &Matrix) -> Result<bool> {
    let joined = span.hcat(vectors)?;
    Ok(image_length(&joined) == image_length(span))
}

/// `λ(ker d_out) - λ(im d_in)` for presented maps, after checking `d_out ∘ d_in = 0`.
pub fn presented_homology_length(
    d_in: &PresentedMorphism,
    d_out: &PresentedMorphism,
) -> Result<usize> {
    if d_in.target.rank != d_out.source.rank {
        return Err(Error::ShapeMismatch(
            "d_in does not land in the source of d_out".into(),
        ));
    }
    if !d_out.compose(d_in)?.is_zero() {
        return Err(Error::NotAComplex);
    }
    let middle = d_out.source.length();
    Ok(middle - d_out.image_length() - d_in.image_length())
}

fn check_composable(d_in: &FinMorphism, d_out: &FinMorphism) -> Result<()> {
    if d_in.target != d_out.source {
        return Err(Error::ShapeMismatch(
            "d_in does not land in the source of d_out".into(),
        ));
    }
    if !d_out.compose(d_in)?.is_zero() {
        return Err(Error::NotAComplex);
    }
    Ok(())
}

/// `λ(ker d_out / im d_in)`.
pub fn homology_length_at(d_in: &FinMorphism, d_out: &FinMorphism) -> Result<usize> {
    check_composable(d_in, d_out)?;
    let middle = d_out.source.length();
    Ok(middle - d_out.image_length() - d_in.image_length())
}

/// Elementary divisors of `ker d_out / im d_in`.
///
/// With `H` the subquotient, `λ(p^a H)` is an image length of lifted
/// generators, and `λ(p^a H) - λ(p^{a+1} H)` counts the summands of
/// exponent greater than `a`.
pub fn iso_type(d_in: &FinMorphism, d_out: &FinMorphism) -> Result<IsoType> {
    check_composable(d_in, d_out)?;
    let middle = &d_out.source;
    let ring = middle.ring;
    let k = ring.k();
    let s = middle.rank();

    // Lift of ker d_out: first s coordinates of ker [F_out | R_target].
    let augmented = d_out.matrix.hcat(&d_out.target.relation_matrix())?;
    let kernel = kernel_generators(&augmented);
    let mut lifted = Matrix::zero(ring, s, kernel.cols());
    for i in 0..s {
        for j in 0..kernel.cols() {
            lifted.set(i, j, kernel.get(i, j));
        }
    }

    let boundaries = d_in.matrix.hcat(&middle.relation_matrix())?;
    let base = image_length(&boundaries);
    let filtered: Vec<usize> = (0..=k)
        .map(|a| {
            let scaled = lifted.scale(ring.p_power(a));
            image_length(&scaled.hcat(&boundaries).expect("same row count")) - base
        })
        .collect();

    // above[a] = number of summands with exponent > a.
    let above: Vec<usize> = (0..k as usize)
        .map(|a| filtered[a] - filtered[a + 1])
        .collect();
    let mut exponents = Vec::new();
    for e in (1..=k as usize).rev() {
        let at_least_e = above[e - 1];
        let more_than_e = above.get(e).copied().unwrap_or(0);
        exponents.extend(std::iter::repeat_n(e as u32, at_least_e - more_than_e));
    }
    Ok(IsoType::from_exponents(exponents))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> CoeffRing {
        CoeffRing::new(2, 2).unwrap()
    }

    fn mult(module: &FinModule, c: i64) -> FinMorphism {
        FinMorphism::scalar(module, module.ring().reduce(c))
    }

    #[test]
    fn length_examples() {
        let r = CoeffRing::new(2, 3).unwrap();
        assert_eq!(FinModule::new(r, vec![3]).unwrap().length(), 3);
        assert_eq!(FinModule::new(r, vec![2, 1]).unwrap().length(), 3);
        assert_eq!(FinModule::zero(r).length(), 0);
        assert!(FinModule::new(r, vec![4]).is_err());
        assert!(FinModule::new(r, vec![0]).is_err());
    }

    #[test]
    fn compose_examples() {
        let r = CoeffRing::new(2, 3).unwrap();
        let z8 = FinModule::new(r, vec![3]).unwrap();
        let two = mult(&z8, 2);
        assert!(two.compose(&two).unwrap().same_map(&mult(&z8, 4)));
        let id = FinMorphism::identity(&z8);
        assert_eq!(id.compose(&two).unwrap(), two);
        let zero = FinMorphism::zero(&z8, &z8);
        assert!(zero.compose(&two).unwrap().is_zero());
    }

    #[test]
    fn well_definedness_is_enforced() {
        let r = z4();
        let z2 = FinModule::new(r, vec![1]).unwrap();
        let z4m = FinModule::new(r, vec![2]).unwrap();
        // Z/2 -> Z/4 must land in 2Z/4.
        let bad = Matrix::from_rows(r, &[vec![1]]).unwrap();
        assert!(matches!(
            FinMorphism::new(z2.clone(), z4m.clone(), bad),
            Err(Error::IllDefinedMorphism { .. })
        ));
        let good = Matrix::from_rows(r, &[vec![2]]).unwrap();
        let f = FinMorphism::new(z2.clone(), z4m.clone(), good).unwrap();
        assert_eq!(f.image_length(), 1);
        // Reduction Z/4 -> Z/2 is fine.
        let red = FinMorphism::new(z4m, z2, Matrix::from_rows(r, &[vec![1]]).unwrap()).unwrap();
        assert_eq!(red.image_length(), 1);
        assert_eq!(red.kernel_length(), 1);
    }

    #[test]
    fn homology_examples() {
        let m = FinModule::new(z4(), vec![2]).unwrap();
        let zero = FinMorphism::zero(&m, &m);
        assert_eq!(homology_length_at(&zero, &zero).unwrap(), 2);
        assert_eq!(homology_length_at(&mult(&m, 2), &zero).unwrap(), 1);
        assert_eq!(
            homology_length_at(&FinMorphism::identity(&m), &zero).unwrap(),
            0
        );
        let id = FinMorphism::identity(&m);
        assert_eq!(homology_length_at(&id, &id), Err(Error::NotAComplex));
    }

    #[test]
    fn iso_type_examples() {
        let r = z4();
        let m = FinModule::new(r, vec![2, 1]).unwrap();
        let zero = FinMorphism::zero(&m, &m);
        assert_eq!(iso_type(&zero, &zero).unwrap().exponents(), &[2, 1]);

        let c = FinModule::new(r, vec![2]).unwrap();
        let two = mult(&c, 2);
        assert!(iso_type(&two, &two).unwrap().is_zero());
        let z = FinMorphism::zero(&c, &c);
        assert_eq!(iso_type(&two, &z).unwrap().exponents(), &[1]);
    }

    #[test]
    fn iso_type_of_mixed_subquotient() {
        // (Z/8 ⊕ Z/2) / <(4, 1)> is cyclic of order 8.
        let r = CoeffRing::new(2, 3).unwrap();
        let m = FinModule::new(r, vec![3, 1]).unwrap();
        let z2 = FinModule::new(r, vec![1]).unwrap();
        // Z/2 -> Z/8 ⊕ Z/2, 1 ↦ (4, 1)
        let d_in = FinMorphism::new(
            z2.clone(),
            m.clone(),
            Matrix::from_rows(r, &[vec![4], vec![1]]).unwrap(),
        )
        .unwrap();
        let d_out = FinMorphism::zero(&m, &z2);
        let h = iso_type(&d_in, &d_out).unwrap();
        assert_eq!(h.exponents(), &[3]);
        assert_eq!(h.length(), homology_length_at(&d_in, &d_out).unwrap());
    }

    #[test]
    fn cokernel_normalizes() {
        let r = z4();
        let a = Matrix::from_rows(r, &[vec![2, 0], vec![0, 1], vec![0, 0]]).unwrap();
        let m = FinModule::cokernel(&a);
        assert_eq!(m.iso_type().exponents(), &[2, 1]);
        assert_eq!(PresentedModule::new(a).length(), 3);
    }

    #[test]
    fn presented_well_definedness() {
        let r = z4();
        let src = FinModule::new(r, vec![1]).unwrap().presented();
        let tgt = FinModule::new(r, vec![2]).unwrap().presented();
        let ok = PresentedMorphism::new(
            src.clone(),
            tgt.clone(),
            Matrix::from_rows(r, &[vec![2]]).unwrap(),
        )
        .unwrap();
        assert!(ok.is_well_defined().unwrap());
        let bad =
            PresentedMorphism::new(src, tgt, Matrix::from_rows(r, &[vec![1]]).unwrap()).unwrap();
        assert!(!bad.is_well_defined().unwrap());
    }
}
