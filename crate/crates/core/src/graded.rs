//! Graded modules over B = Z/p^k[X_1, ..., X_n] and their Koszul homology,
//! computed one degree at a time.
//!
//! Every degree-`d` piece of a finitely presented graded module is a finite
//! Z/p^k-module, and truncation to a single degree is exact, so the Koszul
//! complex `K(y, M)` splits into finite complexes of strands `(K_i)_d`.
//! These are handled with the presented-module machinery of
//! [`crate::finlength`].

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finlength::{FinModule, PresentedModule, PresentedMorphism};
use crate::koszul::{subsets, EulerProfile};
use crate::poly::{monomials_of_degree, Monomial, Poly};
use crate::ring::{image_length, CoeffRing, Matrix};

/// One element of a Koszul sequence in B.
///
/// Either of positive degree, or of degree 0 with a coefficient divisible by
/// p, so that it lies in the homogeneous maximal ideal `(p, X_1, ..., X_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoszulSequenceEntry {
    polynomial: Poly,
    degree: u32,
}

impl KoszulSequenceEntry {
    pub fn new(polynomial: Poly) -> Result<Self> {
        let degree = polynomial.homogeneous_degree()?.ok_or_else(|| {
            Error::Inhomogeneous("zero sequence entry needs an explicit degree".into())
        })?;
        Self::with_degree(polynomial, degree)
    }

    /// Allows the zero polynomial, which is homogeneous of every degree.
    pub fn with_degree(polynomial: Poly, degree: u32) -> Result<Self> {
        match polynomial.homogeneous_degree()? {
            Some(d) if d != degree => {
                return Err(Error::Inhomogeneous(format!(
                    "entry has degree {d}, declared {degree}"
                )))
            }
            Some(0) => {
                let ring = polynomial.ring();
                if polynomial.terms().any(|(_, c)| ring.is_unit(c)) {
                    return Err(Error::Inhomogeneous(
                        "degree-0 entry must lie in (p): a unit is not in the maximal ideal".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(KoszulSequenceEntry { polynomial, degree })
    }

    pub fn variable(ring: CoeffRing, n: usize, index: usize) -> Self {
        KoszulSequenceEntry {
            polynomial: Poly::variable(ring, n, index),
            degree: 1,
        }
    }

    pub fn polynomial(&self) -> &Poly {
        &self.polynomial
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn pow(&self, t: u32) -> KoszulSequenceEntry {
        KoszulSequenceEntry {
            polynomial: self.polynomial.pow(t),
            degree: self.degree * t,
        }
    }
}

/// The variables `X_1, ..., X_n` as a sequence.
pub fn variables(ring: CoeffRing, n: usize) -> Vec<KoszulSequenceEntry> {
    (0..n)
        .map(|i| KoszulSequenceEntry::variable(ring, n, i))
        .collect()
}

/// Cokernel of a homogeneous matrix between graded free B-modules.
///
/// Entry `(i, j)` is homogeneous of degree `col_degrees[j] - row_degrees[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedPresentation {
    #[serde(skip)]
    ring: CoeffRing,
    n: usize,
    row_degrees: Vec<i32>,
    col_degrees: Vec<i32>,
    entries: Vec<Vec<Poly>>,
}

impl GradedPresentation {
    pub fn new(
        ring: CoeffRing,
        n: usize,
        row_degrees: Vec<i32>,
        col_degrees: Vec<i32>,
        entries: Vec<Vec<Poly>>,
    ) -> Result<Self> {
        if entries.len() != row_degrees.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} entry rows for {} row degrees",
                entries.len(),
                row_degrees.len()
            )));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != col_degrees.len() {
                return Err(Error::ShapeMismatch(format!(
                    "entry row {i} has {} columns, expected {}",
                    row.len(),
                    col_degrees.len()
                )));
            }
            for (j, f) in row.iter().enumerate() {
                if f.num_vars() != n || f.ring() != ring {
                    return Err(Error::ShapeMismatch(format!(
                        "entry ({i}, {j}) lives in a different polynomial ring"
                    )));
                }
                let expected = col_degrees[j] - row_degrees[i];
                match f.homogeneous_degree()? {
                    None => {}
                    Some(d) if d as i32 == expected => {}
                    Some(d) => {
                        return Err(Error::Inhomogeneous(format!(
                            "entry ({i}, {j}) has degree {d}, expected {expected}"
                        )))
                    }
                }
            }
        }
        Ok(GradedPresentation {
            ring,
            n,
            row_degrees,
            col_degrees,
            entries,
        })
    }

    /// `⊕ B(-d_i)` with no relations.
    pub fn free(ring: CoeffRing, n: usize, row_degrees: Vec<i32>) -> Self {
        let entries = vec![Vec::new(); row_degrees.len()];
        GradedPresentation {
            ring,
            n,
            row_degrees,
            col_degrees: Vec::new(),
            entries,
        }
    }

    /// `B / J` for `J` generated by homogeneous polynomials (zeros are dropped).
    pub fn quotient_ring(ring: CoeffRing, n: usize, generators: &[Poly]) -> Result<Self> {
        let mut cols = Vec::new();
        let mut degrees = Vec::new();
        for g in generators {
            if let Some(d) = g.homogeneous_degree()? {
                cols.push(g.clone());
                degrees.push(d as i32);
            }
        }
        GradedPresentation::new(ring, n, vec![0], degrees, vec![cols])
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn row_degrees(&self) -> &[i32] {
        &self.row_degrees
    }

    pub fn col_degrees(&self) -> &[i32] {
        &self.col_degrees
    }

    pub fn entries(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    pub fn min_row_degree(&self) -> Option<i32> {
        self.row_degrees.iter().copied().min()
    }

    pub fn max_row_degree(&self) -> Option<i32> {
        self.row_degrees.iter().copied().max()
    }

    fn max_degree(&self) -> i32 {
        self.row_degrees
            .iter()
            .chain(&self.col_degrees)
            .copied()
            .max()
            .unwrap_or(0)
            .max(0)
    }

    /// `M / (f_1, ..., f_m) M`.
    pub fn quotient_by(&self, sequence: &[KoszulSequenceEntry]) -> Result<GradedPresentation> {
        let mut col_degrees = self.col_degrees.clone();
        let mut entries = self.entries.clone();
        for f in sequence {
            for (i, &row_degree) in self.row_degrees.iter().enumerate() {
                col_degrees.push(row_degree + f.degree as i32);
                for (r, row) in entries.iter_mut().enumerate() {
                    row.push(if r == i {
                        f.polynomial.clone()
                    } else {
                        Poly::zero(self.ring, self.n)
                    });
                }
            }
        }
        GradedPresentation::new(
            self.ring,
            self.n,
            self.row_degrees.clone(),
            col_degrees,
            entries,
        )
    }

    /// Whether this is `B/J` with `J` generated by single terms `c X^β`.
    fn monomial_quotient_generators(&self) -> Option<Vec<&Poly>> {
        if self.row_degrees != [0] {
            return None;
        }
        let gens: Vec<&Poly> = self.entries[0].iter().filter(|f| !f.is_zero()).collect();
        gens.iter().all(|f| f.num_terms() == 1).then_some(gens)
    }
}

/// Degree-by-degree access to a graded presentation.
///
/// Degree-`d` basis of the free cover: pairs `(row i, monomial μ)` with
/// `deg μ = d - row_degrees[i]`. Used both for cokernels (the module) and
/// for images (when the presentation's columns generate a submodule).
pub struct StrandEngine<'a> {
    pres: &'a GradedPresentation,
    bases: HashMap<i32, Basis>,
    relations: HashMap<i32, Matrix>,
    lengths: HashMap<i32, usize>,
}

struct Basis {
    offsets: Vec<Option<usize>>,
    index: Vec<HashMap<Monomial, usize>>,
    rank: usize,
}

impl<'a> StrandEngine<'a> {
    pub fn new(pres: &'a GradedPresentation) -> Self {
        StrandEngine {
            pres,
            bases: HashMap::new(),
            relations: HashMap::new(),
            lengths: HashMap::new(),
        }
    }

    fn basis(&mut self, d: i32) -> &Basis {
        let pres = self.pres;
        self.bases.entry(d).or_insert_with(|| {
            let mut offsets = Vec::new();
            let mut index = Vec::new();
            let mut rank = 0;
            for &rd in &pres.row_degrees {
                let mut map = HashMap::new();
                if d >= rd {
                    offsets.push(Some(rank));
                    for (pos, m) in monomials_of_degree(pres.n, (d - rd) as u32)
                        .into_iter()
                        .enumerate()
                    {
                        map.insert(m, pos);
                    }
                    rank += map.len();
                } else {
                    offsets.push(None);
                }
                index.push(map);
            }
            Basis {
                offsets,
                index,
                rank,
            }
        })
    }

    pub fn free_rank(&mut self, d: i32) -> usize {
        self.basis(d).rank
    }

    /// Writes `Σ_i f_i e_i` times the monomial `mu` into `column` of `out`.
    fn write_product(
        &mut self,
        d: i32,
        column_entries: &[(usize, &Poly)],
        mu: &[u32],
        out: &mut Matrix,
        column: usize,
    ) {
        let ring = self.pres.ring;
        let basis = self.basis(d);
        for &(row, f) in column_entries {
            let Some(offset) = basis.offsets[row] else {
                continue;
            };
            for (m, c) in f.terms() {
                let product: Monomial = m.iter().zip(mu).map(|(a, b)| a + b).collect();
                let pos = offset + basis.index[row][&product];
                out.set(pos, column, ring.add(out.get(pos, column), c));
            }
        }
    }

    /// Degree-`d` image of the presentation matrix, one column per
    /// (relation, monomial) pair.
    pub fn relations(&mut self, d: i32) -> Matrix {
        if let Some(m) = self.relations.get(&d) {
            return m.clone();
        }
        let pres = self.pres;
        let rank = self.free_rank(d);
        let mut columns: Vec<(usize, Monomial)> = Vec::new();
        for (j, &cd) in pres.col_degrees.iter().enumerate() {
            if d >= cd {
                for mu in monomials_of_degree(pres.n, (d - cd) as u32) {
                    columns.push((j, mu));
                }
            }
        }
        let mut out = Matrix::zero(pres.ring, rank, columns.len());
        for (c, (j, mu)) in columns.iter().enumerate() {
            let entries: Vec<(usize, &Poly)> = pres
                .entries
                .iter()
                .enumerate()
                .map(|(i, row)| (i, &row[*j]))
                .filter(|(_, f)| !f.is_zero())
                .collect();
            self.write_product(d, &entries, mu, &mut out, c);
        }
        self.relations.insert(d, out.clone());
        out
    }

    pub fn presented(&mut self, d: i32) -> PresentedModule {
        PresentedModule::new(self.relations(d))
    }

    /// `λ(M_d)`.
    pub fn length(&mut self, d: i32) -> usize {
        if let Some(&l) = self.lengths.get(&d) {
            return l;
        }
        let l = self.presented(d).length();
        self.lengths.insert(d, l);
        l
    }

    /// Multiplication by a homogeneous `f` of degree `e` on the free cover,
    /// from degree `d` to degree `d + e`.
    pub fn multiplication(&mut self, f: &KoszulSequenceEntry, d: i32) -> Matrix {
        let ring = self.pres.ring;
        let e = f.degree as i32;
        let target_rank = self.free_rank(d + e);
        let source: Vec<(usize, Monomial)> = {
            let basis = self.basis(d);
            let mut cells = vec![(0, Vec::new()); basis.rank];
            for (row, map) in basis.index.iter().enumerate() {
                if let Some(offset) = basis.offsets[row] {
                    for (m, &pos) in map {
                        cells[offset + pos] = (row, m.clone());
                    }
                }
            }
            cells
        };
        let mut out = Matrix::zero(ring, target_rank, source.len());
        for (c, (row, mu)) in source.iter().enumerate() {
            self.write_product(d + e, &[(*row, &f.polynomial)], mu, &mut out, c);
        }
        out
    }
}

/// `M_d` as a finite Z/p^k-module.
pub fn strand(m: &GradedPresentation, d: i32) -> FinModule {
    StrandEngine::new(m).presented(d).normalize()
}

/// Window used to declare strands stabilized.
pub fn stabilization_window(sequence: &[KoszulSequenceEntry]) -> i32 {
    sequence.iter().map(|y| y.degree as i32).max().unwrap_or(0) + 2
}

/// `max(degrees) + n * max(deg y) + 2W`.
pub fn default_degree_bound(m: &GradedPresentation, sequence: &[KoszulSequenceEntry]) -> i32 {
    let max_y = sequence.iter().map(|y| y.degree as i32).max().unwrap_or(0);
    m.max_degree() + sequence.len() as i32 * max_y + 2 * stabilization_window(sequence)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrandRow {
    pub degree: i32,
    /// `λ((K_i)_d)` for `i = 0..=n`.
    pub term_lengths: Vec<usize>,
    /// `λ(H_i(y, M)_d)` for `i = 0..=n`.
    pub homology_lengths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrandReport {
    pub degree_bound: i32,
    pub window: i32,
    pub rows: Vec<StrandRow>,
    /// `Σ_d λ(H_i)_d` over the computed degrees.
    pub totals: Vec<usize>,
    /// All homology strands vanish on the last `window` degrees.
    pub stabilized: bool,
}

impl StrandReport {
    fn assemble(n: usize, degree_bound: i32, window: i32, rows: Vec<StrandRow>) -> Self {
        let mut totals = vec![0; n + 1];
        for row in &rows {
            for (t, h) in totals.iter_mut().zip(&row.homology_lengths) {
                *t += h;
            }
        }
        let tail_start = degree_bound - window + 1;
        let covered = rows.first().is_none_or(|r| r.degree <= tail_start);
        let stabilized = covered
            && rows
                .iter()
                .filter(|r| r.degree >= tail_start)
                .all(|r| r.homology_lengths.iter().all(|&h| h == 0));
        StrandReport {
            degree_bound,
            window,
            rows,
            totals,
            stabilized,
        }
    }

    /// Profile from the totals; only final when `stabilized`.
    pub fn profile(&self) -> EulerProfile {
        EulerProfile::from_homology_lengths(self.totals.clone())
    }

    pub fn homology_at(&self, i: usize, degree: i32) -> usize {
        self.rows
            .iter()
            .find(|r| r.degree == degree)
            .map_or(0, |r| r.homology_lengths.get(i).copied().unwrap_or(0))
    }

    /// Whether `H_i` vanishes in every computed degree for all `i > 0`.
    pub fn higher_homology_vanishes(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.homology_lengths.iter().skip(1).all(|&h| h == 0))
    }
}

fn check_sequence(m: &GradedPresentation, sequence: &[KoszulSequenceEntry]) -> Result<()> {
    if sequence.is_empty() {
        return Err(Error::EmptySequence);
    }
    for y in sequence {
        if y.polynomial.num_vars() != m.n || y.polynomial.ring() != m.ring {
            return Err(Error::ShapeMismatch(
                "sequence entry lives in a different polynomial ring".into(),
            ));
        }
    }
    Ok(())
}

/// Twist `Σ_{s∈S} deg y_s` of each subset, level by level.
fn twists(sequence: &[KoszulSequenceEntry]) -> Vec<Vec<(Vec<usize>, i32)>> {
    let n = sequence.len();
    (0..=n)
        .map(|i| {
            subsets(n, i)
                .into_iter()
                .map(|s| {
                    let shift = s.iter().map(|&v| sequence[v].degree as i32).sum();
                    (s, shift)
                })
                .collect()
        })
        .collect()
}

/// Free lift of `d_i` in degree `d`: from `⊕_S F_{d - deg y_S}` to
/// `⊕_T F_{d - deg y_T}` with the Koszul signs.
fn koszul_lift(
    engine: &mut StrandEngine<'_>,
    sequence: &[KoszulSequenceEntry],
    levels: &[Vec<(Vec<usize>, i32)>],
    i: usize,
    d: i32,
) -> Matrix {
    let ring = engine.pres.ring;
    let col_ranks: Vec<usize> = levels[i]
        .iter()
        .map(|(_, w)| engine.free_rank(d - w))
        .collect();
    let row_ranks: Vec<usize> = levels[i - 1]
        .iter()
        .map(|(_, w)| engine.free_rank(d - w))
        .collect();
    let row_offsets: Vec<usize> = row_ranks
        .iter()
        .scan(0, |acc, &r| {
            let o = *acc;
            *acc += r;
            Some(o)
        })
        .collect();
    let position: HashMap<&[usize], usize> = levels[i - 1]
        .iter()
        .enumerate()
        .map(|(idx, (t, _))| (t.as_slice(), idx))
        .collect();
    let mut out = Matrix::zero(ring, row_ranks.iter().sum(), col_ranks.iter().sum());
    let mut col_offset = 0;
    for (c, (subset, shift)) in levels[i].iter().enumerate() {
        for (t, &var) in subset.iter().enumerate() {
            let face: Vec<usize> = subset.iter().copied().filter(|&v| v != var).collect();
            let r = position[face.as_slice()];
            let block = engine.multiplication(&sequence[var], d - shift);
            let block = if t % 2 == 0 { block } else { block.neg() };
            out.put_block(row_offsets[r], col_offset, &block);
        }
        col_offset += col_ranks[c];
    }
    out
}

/// Koszul homology of `M` degree by degree, for `d` from the lowest
/// generator degree up to `degree_bound` (default [`default_degree_bound`]).
pub fn koszul_strand_profile(
    m: &GradedPresentation,
    sequence: &[KoszulSequenceEntry],
    degree_bound: Option<i32>,
) -> Result<StrandReport> {
    check_sequence(m, sequence)?;
    let n = sequence.len();
    let bound = degree_bound.unwrap_or_else(|| default_degree_bound(m, sequence));
    let window = stabilization_window(sequence);
    let levels = twists(sequence);
    let mut engine = StrandEngine::new(m);
    let mut rows = Vec::new();

    if let Some(start) = m.min_row_degree() {
        for d in start..=bound {
            let terms: Vec<PresentedModule> = levels
                .iter()
                .map(|level| {
                    let parts: Vec<PresentedModule> =
                        level.iter().map(|(_, w)| engine.presented(d - w)).collect();
                    PresentedModule::direct_sum(m.ring, &parts)
                })
                .collect();
            let lifts: Vec<Matrix> = (1..=n)
                .map(|i| koszul_lift(&mut engine, sequence, &levels, i, d))
                .collect();
            for i in 1..n {
                if !lifts[i - 1].mul(&lifts[i])?.is_zero() {
                    return Err(Error::NotAComplex);
                }
            }
            let images: Vec<usize> = (1..=n)
                .map(|i| {
                    PresentedMorphism::new(
                        terms[i].clone(),
                        terms[i - 1].clone(),
                        lifts[i - 1].clone(),
                    )
                    .map(|f| f.image_length())
                })
                .collect::<Result<_>>()?;
            let term_lengths: Vec<usize> = terms.iter().map(PresentedModule::length).collect();
            let homology_lengths = (0..=n)
                .map(|i| {
                    let out = if i == 0 { 0 } else { images[i - 1] };
                    let inc = if i == n { 0 } else { images[i] };
                    term_lengths[i] - out - inc
                })
                .collect();
            rows.push(StrandRow {
                degree: d,
                term_lengths,
                homology_lengths,
            });
        }
    }
    Ok(StrandReport::assemble(n, bound, window, rows))
}

/// Koszul homology of the submodule `J ⊂ F` generated by the columns of
/// `generators` (read as a map into the free module with its row degrees).
///
/// Each `(K_i(y, J))_d` is the image of block-diagonal generator strands
/// inside `(K_i(y, F))_d`, so no kernels are needed:
/// `λ(H_i) = λ(im G_i) - λ(im D_i G_i) - λ(im D_{i+1} G_{i+1})`.
pub fn submodule_koszul_strand_profile(
    generators: &GradedPresentation,
    sequence: &[KoszulSequenceEntry],
    degree_bound: Option<i32>,
) -> Result<StrandReport> {
    check_sequence(generators, sequence)?;
    let n = sequence.len();
    let ring = generators.ring;
    let bound = degree_bound.unwrap_or_else(|| default_degree_bound(generators, sequence));
    let window = stabilization_window(sequence);
    let levels = twists(sequence);
    let mut engine = StrandEngine::new(generators);
    let mut rows = Vec::new();

    if let Some(start) = generators.min_row_degree() {
        for d in start..=bound {
            let gens: Vec<Matrix> = levels
                .iter()
                .map(|level| {
                    let blocks: Vec<Matrix> =
                        level.iter().map(|(_, w)| engine.relations(d - w)).collect();
                    Matrix::block_diagonal(ring, &blocks)
                })
                .collect();
            let lifts: Vec<Matrix> = (1..=n)
                .map(|i| koszul_lift(&mut engine, sequence, &levels, i, d))
                .collect();
            let term_lengths: Vec<usize> = gens.iter().map(image_length).collect();
            let images: Vec<usize> = (1..=n)
                .map(|i| lifts[i - 1].mul(&gens[i]).map(|m| image_length(&m)))
                .collect::<Result<_>>()?;
            let homology_lengths = (0..=n)
                .map(|i| {
                    let out = if i == 0 { 0 } else { images[i - 1] };
                    let inc = if i == n { 0 } else { images[i] };
                    term_lengths[i] - out - inc
                })
                .collect();
            rows.push(StrandRow {
                degree: d,
                term_lengths,
                homology_lengths,
            });
        }
    }
    Ok(StrandReport::assemble(n, bound, window, rows))
}

/// Exact rational number with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub numerator: i64,
    pub denominator: i64,
}

impl Ratio {
    pub fn new(numerator: i64, denominator: i64) -> Self {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(numerator, denominator).max(1);
        let sign = if denominator < 0 { -1 } else { 1 };
        Ratio {
            numerator: sign * numerator / g,
            denominator: sign * denominator / g,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.denominator == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LechTable {
    /// `(t, λ(M / (y_1^t, ..., y_n^t) M))`.
    pub rows: Vec<(u32, usize)>,
    /// `Δ^n λ / n!` over the last `n + 1` rows, when there are enough rows.
    pub leading_coefficient: Option<Ratio>,
    /// `λ(t) = t^n λ(1)` for every row.
    pub scaling_law: bool,
}

impl LechTable {
    /// Table for `n` sequence elements from `(t, λ)` rows with `t = 1, 2, ...`.
    pub fn from_rows(rows: Vec<(u32, usize)>, n: usize) -> Self {
        let leading_coefficient = (rows.len() > n).then(|| {
            let tail: Vec<i64> = rows[rows.len() - n - 1..]
                .iter()
                .map(|&(_, l)| l as i64)
                .collect();
            let mut diffs = tail;
            for _ in 0..n {
                diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
            }
            let factorial: i64 = (1..=n as i64).product();
            Ratio::new(diffs[0], factorial)
        });
        let base = rows.first().map_or(0, |&(_, l)| l);
        let scaling_law = rows
            .iter()
            .all(|&(t, l)| l == (t as usize).pow(n as u32) * base);
        LechTable {
            rows,
            leading_coefficient,
            scaling_law,
        }
    }
}

/// `λ(N)` for a graded `N` known to have finite length, certified by a run of
/// `window` zero strands starting at or above the top generator degree
/// (`N_{d+1} = B_1 N_d` there, so the run never ends).
fn finite_graded_length(n: &GradedPresentation, window: i32, budget: i32) -> Result<usize> {
    let (Some(lo), Some(hi)) = (n.min_row_degree(), n.max_row_degree()) else {
        return Ok(0);
    };
    let mut engine = StrandEngine::new(n);
    let mut total = 0;
    let mut zero_run = 0;
    for d in lo..=budget.max(hi) {
        let l = engine.length(d);
        total += l;
        if d >= hi && l == 0 {
            zero_run += 1;
            if zero_run >= window {
                return Ok(total);
            }
        } else if d >= hi {
            zero_run = 0;
        }
    }
    Err(Error::DegreeBudgetExceeded { bound: budget })
}

pub fn lech_multiplicity_table(
    m: &GradedPresentation,
    sequence: &[KoszulSequenceEntry],
    t_max: u32,
    degree_bound: Option<i32>,
) -> Result<LechTable> {
    check_sequence(m, sequence)?;
    let n = sequence.len();
    let mut rows = Vec::new();
    for t in 1..=t_max {
        let powered: Vec<KoszulSequenceEntry> = sequence.iter().map(|y| y.pow(t)).collect();
        let quotient = m.quotient_by(&powered)?;
        let window = stabilization_window(&powered);
        let budget = degree_bound.unwrap_or_else(|| default_degree_bound(m, &powered));
        rows.push((t, finite_graded_length(&quotient, window, budget)?));
    }

    Ok(LechTable::from_rows(rows, n))
}

/// Whether `M / (y) M` has finite length.
///
/// For `B/J` with `J` and `y` generated by single terms this is decided
/// combinatorially: the quotient is finite iff, for every variable, some
/// generator is a unit times a pure power of it. Otherwise strands of the
/// quotient must vanish on `window` consecutive degrees at or above the top
/// generator degree, within `degree_bound`.
pub fn validate_multiplicity_system(
    m: &GradedPresentation,
    sequence: &[KoszulSequenceEntry],
    degree_bound: Option<i32>,
) -> bool {
    if check_sequence(m, sequence).is_err() {
        return false;
    }
    if let Some(mut gens) = m.monomial_quotient_generators() {
        if sequence.iter().all(|y| y.polynomial.num_terms() <= 1) {
            gens.extend(
                sequence
                    .iter()
                    .map(|y| &y.polynomial)
                    .filter(|f| !f.is_zero()),
            );
            return (0..m.n).all(|var| {
                gens.iter().any(|g| {
                    g.terms().any(|(mono, c)| {
                        m.ring.is_unit(c)
                            && mono.iter().enumerate().all(|(i, &e)| i == var || e == 0)
                    })
                })
            });
        }
    }
    let Ok(quotient) = m.quotient_by(sequence) else {
        return false;
    };
    let window = stabilization_window(sequence);
    let budget = degree_bound.unwrap_or_else(|| default_degree_bound(m, sequence));
    finite_graded_length(&quotient, window, budget).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftMismatch {
    pub index: usize,
    pub degree: i32,
    pub quotient_side: usize,
    pub ideal_side: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftVerdict {
    pub status: ShiftStatus,
    pub degree_bound: i32,
    /// Strands of `H(y, B/J)`.
    pub quotient: StrandReport,
    /// Strands of `H(y, J)`.
    pub ideal: StrandReport,
    /// Per-degree failures of `λ(H_i(y, B/J))_d = λ(H_{i-1}(y, J))_d`, `i >= 2`.
    pub mismatches: Vec<ShiftMismatch>,
    /// `(j, χ_j(y, B/J), χ_{j-1}(y, J))` for `j >= 2`, from stabilized totals.
    pub chi_pairs: Vec<(usize, i64, i64)>,
}

/// Checks `H_i(y, B/J) ≅ H_{i-1}(y, J)` for `i >= 2` strand by strand, using
/// `0 -> J -> B -> B/J -> 0` and `H_{>0}(y, B) = 0`.
pub fn shift_check(
    ring: CoeffRing,
    n_vars: usize,
    ideal_generators: &[Poly],
    sequence: &[KoszulSequenceEntry],
    degree_bound: Option<i32>,
) -> Result<ShiftVerdict> {
    let quotient_pres = GradedPresentation::quotient_ring(ring, n_vars, ideal_generators)?;
    let bound = degree_bound.unwrap_or_else(|| default_degree_bound(&quotient_pres, sequence));

    let base = koszul_strand_profile(
        &GradedPresentation::free(ring, n_vars, vec![0]),
        sequence,
        Some(bound),
    )?;
    for row in &base.rows {
        if let Some(i) = row.homology_lengths.iter().skip(1).position(|&h| h != 0) {
            return Err(Error::NotRegular {
                index: i + 1,
                degree: row.degree,
            });
        }
    }

    let quotient = koszul_strand_profile(&quotient_pres, sequence, Some(bound))?;
    // The same matrix, read as generators of J ⊂ B.
    let ideal = submodule_koszul_strand_profile(&quotient_pres, sequence, Some(bound))?;

    let n = sequence.len();
    let mut mismatches = Vec::new();
    for d in quotient.rows.iter().map(|r| r.degree) {
        for i in 2..=n + 1 {
            let q = quotient.homology_at(i, d);
            let j = ideal.homology_at(i - 1, d);
            if q != j {
                mismatches.push(ShiftMismatch {
                    index: i,
                    degree: d,
                    quotient_side: q,
                    ideal_side: j,
                });
            }
        }
    }

    let stabilized = quotient.stabilized && ideal.stabilized;
    let chi_pairs = if stabilized {
        let (pq, pj) = (quotient.profile(), ideal.profile());
        (2..=n + 1).map(|j| (j, pq.chi(j), pj.chi(j - 1))).collect()
    } else {
        Vec::new()
    };
    let status = if !mismatches.is_empty() || chi_pairs.iter().any(|&(_, a, b)| a != b) {
        ShiftStatus::Fail
    } else if !stabilized {
        ShiftStatus::Inconclusive
    } else {
        ShiftStatus::Pass
    };
    Ok(ShiftVerdict {
        status,
        degree_bound: bound,
        quotient,
        ideal,
        mismatches,
        chi_pairs,
    })
}

/// The free Koszul complex `K(y, B)` as matrices of polynomials:
/// `result[i - 1]` is `d_i` with rows indexed by `(i-1)`-subsets and columns
/// by `i`-subsets, both in lexicographic order.
pub fn free_koszul_matrices(sequence: &[Poly]) -> Vec<Vec<Vec<Poly>>> {
    let n = sequence.len();
    let Some(first) = sequence.first() else {
        return Vec::new();
    };
    let (ring, vars) = (first.ring(), first.num_vars());
    (1..=n)
        .map(|i| {
            let rows = subsets(n, i - 1);
            let cols = subsets(n, i);
            let mut out = vec![vec![Poly::zero(ring, vars); cols.len()]; rows.len()];
            for (c, subset) in cols.iter().enumerate() {
                for (t, &var) in subset.iter().enumerate() {
                    let face: Vec<usize> = subset.iter().copied().filter(|&v| v != var).collect();
                    let r = rows
                        .iter()
                        .position(|x| *x == face)
                        .expect("face is a subset");
                    out[r][c] = if t % 2 == 0 {
                        sequence[var].clone()
                    } else {
                        sequence[var].neg()
                    };
                }
            }
            out
        })
        .collect()
}

/// Number of monomials of degree `d` in `n` variables.
pub fn monomial_count(n: usize, d: u32) -> usize {
    monomials_of_degree(n, d).len()
}
