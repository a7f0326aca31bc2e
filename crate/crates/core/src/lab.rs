//! Random instances and a brute-force oracle.
//!
//! Instances are reproducible: instance `i` of a spec is drawn from ChaCha8
//! seeded with the spec's seed, on stream `i`. Actions commute by
//! construction, either as polynomials in one nilpotent matrix or as
//! multiplication by variables on a quotient `Z/p^k[X] / J` with `J`
//! generated by terms `p^a X^β`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finlength::FinModule;
use crate::koszul::{subsets, ActionSystem, Transform};
use crate::poly::Monomial;
use crate::ring::{CoeffRing, Matrix};

pub const PRNG_NAME: &str = "ChaCha8";
/// Default bound on |M| for oracle runs.
pub const DEFAULT_MODULE_BOUND: u128 = 4096;
/// Largest subgroup the oracle will materialize.
pub const DEFAULT_SUBGROUP_CAP: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// Elementary-divisor module, actions polynomials in one nilpotent matrix.
    Nilpotent,
    /// `Z/p^k[X] / J` for p-monomial `J`, actions multiplication by `X_i`.
    PMonomial,
    /// Either of the above with equal probability.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub primes: Vec<u64>,
    pub ks: Vec<u32>,
    pub ns: Vec<usize>,
    /// Upper bound on `λ(M)`.
    pub max_length: usize,
    pub shape: Shape,
}

impl GeneratorSpec {
    pub fn single(seed: u64, p: u64, k: u32, n: usize, max_length: usize, shape: Shape) -> Self {
        GeneratorSpec {
            seed,
            primes: vec![p],
            ks: vec![k],
            ns: vec![n],
            max_length,
            shape,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.primes.is_empty() || self.ks.is_empty() || self.ns.is_empty() {
            return Err(Error::InvalidSpec("empty parameter range".into()));
        }
        if self.ns.contains(&0) {
            return Err(Error::InvalidSpec(
                "sequences need at least one element".into(),
            ));
        }
        for &p in &self.primes {
            for &k in &self.ks {
                CoeffRing::new(p, k)?;
            }
        }
        Ok(())
    }
}

/// One `p^a X^β` generator of a monomial ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PMonomialGenerator {
    pub pexp: u32,
    pub monomial: Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Provenance {
    Nilpotent { seed_matrix: Matrix },
    PMonomial { generators: Vec<PMonomialGenerator> },
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub index: u64,
    pub system: ActionSystem,
    pub provenance: Provenance,
}

/// Deterministic stream of instances.
pub struct InstanceStream {
    spec: GeneratorSpec,
    next: u64,
}

impl Iterator for InstanceStream {
    type Item = GeneratedInstance;

    fn next(&mut self) -> Option<GeneratedInstance> {
        let instance = generate_one(&self.spec, self.next);
        self.next += 1;
        Some(instance)
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<InstanceStream> {
    spec.validate()?;
    Ok(InstanceStream {
        spec: spec.clone(),
        next: 0,
    })
}

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Instance `index` of a validated spec.
pub fn generate_one(spec: &GeneratorSpec, index: u64) -> GeneratedInstance {
    let mut rng = instance_rng(spec.seed, index);
    let p = *spec.primes.choose(&mut rng).expect("nonempty primes");
    let k = *spec.ks.choose(&mut rng).expect("nonempty ks");
    let n = *spec.ns.choose(&mut rng).expect("nonempty ns");
    let ring = CoeffRing::new(p, k).expect("validated ring");
    // Skewed towards small modules; the tail still reaches max_length.
    let u: f64 = rng.gen();
    let length = (spec.max_length as f64 * u * u).round() as usize;
    let shape = match spec.shape {
        Shape::Mixed if rng.gen_bool(0.5) => Shape::Nilpotent,
        Shape::Mixed => Shape::PMonomial,
        s => s,
    };
    let (system, provenance) = match shape {
        Shape::PMonomial => {
            let generators = random_p_monomial_ideal(ring, n, length, &mut rng);
            let system =
                p_monomial_system(ring, n, &generators).expect("generated ideal is cofinite");
            (system, Provenance::PMonomial { generators })
        }
        _ => {
            let (system, seed_matrix) = random_nilpotent_system(ring, n, length, &mut rng);
            (system, Provenance::Nilpotent { seed_matrix })
        }
    };
    GeneratedInstance {
        index,
        system,
        provenance,
    }
}

fn random_exponents(k: u32, length: usize, rng: &mut impl Rng) -> Vec<u32> {
    let mut exponents = Vec::new();
    let mut remaining = length;
    while remaining > 0 {
        let e = rng.gen_range(1..=k.min(remaining as u32));
        exponents.push(e);
        remaining -= e as usize;
    }
    exponents.shuffle(rng);
    exponents
}

/// A random endomorphism of `module` that is strictly triangular modulo p
/// in a random basis order, hence nilpotent.
pub fn random_nilpotent_matrix(module: &FinModule, rng: &mut impl Rng) -> Matrix {
    let ring = module.ring();
    let e = module.exponents();
    let s = e.len();
    let mut order: Vec<usize> = (0..s).collect();
    order.shuffle(rng);
    let mut rank_of = vec![0; s];
    for (pos, &i) in order.iter().enumerate() {
        rank_of[i] = pos;
    }
    let mut m = Matrix::zero(ring, s, s);
    for i in 0..s {
        for j in 0..s {
            let entry = if i == j {
                ring.mul(ring.p_power(1), rng.gen_range(0..ring.modulus()))
            } else if rank_of[i] < rank_of[j] && rng.gen_bool(0.5) {
                rng.gen_range(0..ring.modulus())
            } else {
                0
            };
            let scale = ring.p_power(e[i].saturating_sub(e[j]));
            m.set(i, j, ring.mul(entry, scale));
        }
    }
    m
}

fn random_nilpotent_system(
    ring: CoeffRing,
    n: usize,
    length: usize,
    rng: &mut impl Rng,
) -> (ActionSystem, Matrix) {
    let module =
        FinModule::new(ring, random_exponents(ring.k(), length, rng)).expect("exponents in range");
    let seed = random_nilpotent_matrix(&module, rng);
    let powers: Vec<Matrix> =
        std::iter::successors(Some(seed.clone()), |m| Some(m.mul(&seed).expect("square")))
            .take(3)
            .collect();
    let actions: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|_| {
            let mut x = Matrix::zero(ring, module.rank(), module.rank());
            for power in &powers {
                let c = rng.gen_range(0..ring.modulus());
                x = x.add(&power.scale(c)).expect("same shape");
            }
            x.to_rows()
                .into_iter()
                .map(|row| row.into_iter().map(|v| v as i64).collect())
                .collect()
        })
        .collect();
    let system = ActionSystem::from_matrices(module, &actions)
        .expect("polynomials in a nilpotent matrix commute");
    (system, seed)
}

fn random_p_monomial_ideal(
    ring: CoeffRing,
    n: usize,
    length: usize,
    rng: &mut impl Rng,
) -> Vec<PMonomialGenerator> {
    let k = ring.k();
    for _ in 0..32 {
        let degrees: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let mut generators: Vec<PMonomialGenerator> = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut monomial = vec![0; n];
                monomial[i] = d;
                PMonomialGenerator { pexp: 0, monomial }
            })
            .collect();
        for _ in 0..rng.gen_range(0..=3) {
            let monomial = degrees.iter().map(|&d| rng.gen_range(0..d)).collect();
            generators.push(PMonomialGenerator {
                pexp: rng.gen_range(0..k),
                monomial,
            });
        }
        if combinatorial_length(&generators, n, k).is_ok_and(|l| l <= length) {
            return generators;
        }
    }
    // Fallback: (X_1, ..., X_n, p^a) with a = min(length, k).
    let mut generators: Vec<PMonomialGenerator> = (0..n)
        .map(|i| {
            let mut monomial = vec![0; n];
            monomial[i] = 1;
            PMonomialGenerator { pexp: 0, monomial }
        })
        .collect();
    let a = (length as u32).min(k);
    if a < k {
        generators.push(PMonomialGenerator {
            pexp: a,
            monomial: vec![0; n],
        });
    }
    generators
}

/// Exponent of the coordinate at `X^α`: `min(k, min{a_g : X^{β_g} | X^α})`.
fn coordinate_exponent(generators: &[PMonomialGenerator], alpha: &[u32], k: u32) -> u32 {
    generators
        .iter()
        .filter(|g| g.monomial.iter().zip(alpha).all(|(b, a)| b <= a))
        .map(|g| g.pexp)
        .fold(k, u32::min)
}

fn check_generators(generators: &[PMonomialGenerator], n: usize) -> Result<Vec<u32>> {
    if let Some(g) = generators.iter().find(|g| g.monomial.len() != n) {
        return Err(Error::ShapeMismatch(format!(
            "generator exponent vector {:?} has {} entries, expected {n}",
            g.monomial,
            g.monomial.len()
        )));
    }
    (0..n)
        .map(|var| {
            generators
                .iter()
                .filter(|g| {
                    g.pexp == 0
                        && g.monomial
                            .iter()
                            .enumerate()
                            .all(|(i, &e)| i == var || e == 0)
                })
                .map(|g| g.monomial[var])
                .min()
                .ok_or(Error::NotCofinite { variable: var + 1 })
        })
        .collect()
}

/// Standard monomials `X^α` with nonzero coordinate, in lexicographic order,
/// with their exponents.
fn standard_monomials(
    generators: &[PMonomialGenerator],
    n: usize,
    k: u32,
) -> Result<Vec<(Monomial, u32)>> {
    let bounds = check_generators(generators, n)?;
    let mut out = Vec::new();
    let mut alpha = vec![0u32; n];
    loop {
        let e = coordinate_exponent(generators, &alpha, k);
        if e > 0 {
            out.push((alpha.clone(), e));
        }
        // Odometer over the box [0, bounds).
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            alpha[i] += 1;
            if alpha[i] < bounds[i] {
                break;
            }
            alpha[i] = 0;
        }
    }
}

/// `λ(Z/p^k[X_1..X_n] / J)` for `J` generated by `p^{a_g} X^{β_g}`.
pub fn combinatorial_length(generators: &[PMonomialGenerator], n: usize, k: u32) -> Result<usize> {
    Ok(standard_monomials(generators, n, k)?
        .iter()
        .map(|&(_, e)| e as usize)
        .sum())
}

/// `Z/p^k[X] / J` with `x_i` multiplication by `X_i`.
pub fn p_monomial_system(
    ring: CoeffRing,
    n: usize,
    generators: &[PMonomialGenerator],
) -> Result<ActionSystem> {
    let basis = standard_monomials(generators, n, ring.k())?;
    let module = FinModule::new(ring, basis.iter().map(|&(_, e)| e).collect())?;
    let position: std::collections::HashMap<&[u32], usize> = basis
        .iter()
        .enumerate()
        .map(|(i, (m, _))| (m.as_slice(), i))
        .collect();
    let actions = (0..n)
        .map(|var| {
            let mut x = vec![vec![0i64; basis.len()]; basis.len()];
            for (col, (alpha, _)) in basis.iter().enumerate() {
                let mut shifted = alpha.clone();
                shifted[var] += 1;
                if let Some(&row) = position.get(shifted.as_slice()) {
                    x[row][col] = 1;
                }
            }
            x
        })
        .collect::<Vec<_>>();
    ActionSystem::from_matrices(module, &actions)
}

/// Elements of `⊕ Z/p^{e_i}` packed in mixed radix.
struct Packed {
    radices: Vec<u64>,
}

impl Packed {
    fn new(radices: Vec<u64>) -> Result<Self> {
        let order = radices
            .iter()
            .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128));
        match order {
            Some(o) if o <= u64::MAX as u128 => Ok(Packed { radices }),
            _ => Err(Error::EnumerationBoundExceeded {
                size: order.unwrap_or(u128::MAX),
                bound: u64::MAX as u128,
            }),
        }
    }

    fn pack(&self, coords: &[u64]) -> u64 {
        coords
            .iter()
            .zip(&self.radices)
            .rev()
            .fold(0, |acc, (&c, &r)| acc * r + c % r)
    }

    fn add(&self, mut a: u64, mut b: u64) -> u64 {
        let mut out = 0;
        let mut place = 1;
        for &r in &self.radices {
            let digit = (a % r + b % r) % r;
            out += digit * place;
            place *= r;
            a /= r;
            b /= r;
        }
        out
    }
}

/// Order of the subgroup generated by `generators`, by explicit closure.
fn subgroup_order(space: &Packed, generators: &[u64], cap: usize) -> Result<u128> {
    let mut elements = vec![0u64];
    let mut members: HashSet<u64> = HashSet::from([0]);
    for &g in generators {
        if members.contains(&g) {
            continue;
        }
        let old = elements.clone();
        let mut coset = g;
        // The first multiple of g already present lies in the old subgroup:
        // a hit in a coset m'g + H added earlier would give a smaller multiple.
        while !members.contains(&coset) {
            for &h in &old {
                let e = space.add(h, coset);
                if members.insert(e) {
                    elements.push(e);
                }
            }
            if elements.len() > cap {
                return Err(Error::EnumerationBoundExceeded {
                    size: elements.len() as u128,
                    bound: cap as u128,
                });
            }
            coset = space.add(coset, g);
        }
    }
    Ok(elements.len() as u128)
}

fn log_p(p: u64, mut order: u128) -> usize {
    let mut l = 0;
    while order > 1 {
        order /= p as u128;
        l += 1;
    }
    l
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub homology_lengths: Vec<usize>,
}

/// `λ(H_i(x, M))` by enumeration: `λ(H_i) = λ(K_i) - λ(im d_i) - λ(im d_{i+1})`
/// with each image materialized as a subgroup of `K_{i-1}`.
///
/// Refuses modules with more than `module_bound` elements and subgroups with
/// more than `subgroup_cap` elements.
pub fn oracle_homology(
    sys: &ActionSystem,
    module_bound: u128,
    subgroup_cap: usize,
) -> Result<OracleResult> {
    let module = sys.module();
    let ring = sys.ring();
    let p = ring.p();
    let size = module.order().unwrap_or(u128::MAX);
    if size > module_bound {
        return Err(Error::EnumerationBoundExceeded {
            size,
            bound: module_bound,
        });
    }
    let n = sys.n();
    let s = module.rank();
    let radices: Vec<u64> = module.exponents().iter().map(|&e| p.pow(e)).collect();
    let levels: Vec<Vec<Vec<usize>>> = (0..=n).map(|i| subsets(n, i)).collect();

    // Image of d_i: generated by d_i(e_S ⊗ b_j) for subsets S and basis b_j.
    let mut image_lengths = Vec::with_capacity(n);
    for i in 1..=n {
        let target: Vec<u64> = levels[i - 1]
            .iter()
            .flat_map(|_| radices.iter().copied())
            .collect();
        let space = Packed::new(target)?;
        let mut generators = Vec::new();
        for subset in &levels[i] {
            for j in 0..s {
                let mut coords = vec![0u64; levels[i - 1].len() * s];
                for (t, &var) in subset.iter().enumerate() {
                    let face: Vec<usize> = subset.iter().copied().filter(|&v| v != var).collect();
                    let block = levels[i - 1].iter().position(|f| *f == face).expect("face");
                    let x = sys.actions()[var].matrix();
                    for r in 0..s {
                        let v = x.get(r, j);
                        let v = if t % 2 == 0 { v } else { ring.neg(v) };
                        let slot = &mut coords[block * s + r];
                        *slot = (*slot + v) % radices[r];
                    }
                }
                generators.push(space.pack(&coords));
            }
        }
        image_lengths.push(log_p(p, subgroup_order(&space, &generators, subgroup_cap)?));
    }

    let module_length = module.length();
    let homology_lengths = (0..=n)
        .map(|i| {
            let term = levels[i].len() * module_length;
            let out = if i == 0 { 0 } else { image_lengths[i - 1] };
            let inc = if i == n { 0 } else { image_lengths[i] };
            term - out - inc
        })
        .collect();
    Ok(OracleResult { homology_lengths })
}

/// Counts the elements of `M` by enumeration, for checking closed forms.
pub fn enumerated_length(module: &FinModule, subgroup_cap: usize) -> Result<usize> {
    let p = module.ring().p();
    let radices: Vec<u64> = module.exponents().iter().map(|&e| p.pow(e)).collect();
    let space = Packed::new(radices.clone())?;
    let generators: Vec<u64> = (0..radices.len())
        .map(|i| {
            let mut c = vec![0; radices.len()];
            c[i] = 1;
            space.pack(&c)
        })
        .collect();
    Ok(log_p(p, subgroup_order(&space, &generators, subgroup_cap)?))
}

/// Random invertible `n x n` matrix: random unit diagonal times random
/// elementary operations.
pub fn random_unimodular(ring: CoeffRing, n: usize, rng: &mut impl Rng) -> Matrix {
    let mut m = Matrix::zero(ring, n, n);
    for i in 0..n {
        let unit = loop {
            let c = rng.gen_range(1..ring.modulus().max(2));
            if ring.is_unit(c % ring.modulus()) {
                break c % ring.modulus();
            }
        };
        m.set(i, i, unit);
    }
    if n > 1 {
        for _ in 0..3 * n {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a == b {
                continue;
            }
            let c = rng.gen_range(0..ring.modulus());
            for col in 0..n {
                let v = ring.add(m.get(a, col), ring.mul(c, m.get(b, col)));
                m.set(a, col, v);
            }
        }
    }
    m
}

pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Transform {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Transform::Permutation(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::euler_profile;

    fn gen(pexp: u32, monomial: &[u32]) -> PMonomialGenerator {
        PMonomialGenerator {
            pexp,
            monomial: monomial.to_vec(),
        }
    }

    #[test]
    fn combinatorial_examples() {
        assert_eq!(
            combinatorial_length(&[gen(0, &[2]), gen(1, &[1])], 1, 2).unwrap(),
            3
        );
        assert_eq!(combinatorial_length(&[gen(0, &[1])], 1, 3).unwrap(), 3);
        assert_eq!(combinatorial_length(&[gen(0, &[3])], 1, 2).unwrap(), 6);
        assert!(matches!(
            combinatorial_length(&[gen(0, &[2, 0])], 2, 2),
            Err(Error::NotCofinite { variable: 2 })
        ));
        assert!(combinatorial_length(&[gen(1, &[1])], 1, 2).is_err());
    }

    #[test]
    fn oracle_examples() {
        let z4 = CoeffRing::new(2, 2).unwrap();
        let sys =
            ActionSystem::from_matrices(FinModule::new(z4, vec![2]).unwrap(), &[vec![vec![2]]])
                .unwrap();
        let r = oracle_homology(&sys, DEFAULT_MODULE_BOUND, DEFAULT_SUBGROUP_CAP).unwrap();
        assert_eq!(r.homology_lengths, vec![1, 1]);

        let z2 = CoeffRing::new(2, 1).unwrap();
        let sys = ActionSystem::from_matrices(
            FinModule::new(z2, vec![1]).unwrap(),
            &[vec![vec![0]], vec![vec![0]]],
        )
        .unwrap();
        let r = oracle_homology(&sys, DEFAULT_MODULE_BOUND, DEFAULT_SUBGROUP_CAP).unwrap();
        assert_eq!(r.homology_lengths, vec![1, 2, 1]);
    }

    #[test]
    fn oracle_bound() {
        let z2 = CoeffRing::new(2, 1).unwrap();
        let sys =
            ActionSystem::from_matrices(FinModule::free(z2, 13), &[vec![vec![0; 13]; 13]]).unwrap();
        assert!(matches!(
            oracle_homology(&sys, DEFAULT_MODULE_BOUND, DEFAULT_SUBGROUP_CAP),
            Err(Error::EnumerationBoundExceeded { .. })
        ));
    }

    #[test]
    fn p_monomial_system_matches_example() {
        let z4 = CoeffRing::new(2, 2).unwrap();
        let sys = p_monomial_system(z4, 1, &[gen(0, &[2]), gen(1, &[1])]).unwrap();
        assert_eq!(sys.module().exponents(), &[2, 1]);
        assert_eq!(sys.module().length(), 3);
        assert_eq!(
            enumerated_length(sys.module(), DEFAULT_SUBGROUP_CAP).unwrap(),
            3
        );
        let profile = euler_profile(&sys).unwrap();
        assert_eq!(profile.homology_lengths, vec![2, 2]);
    }

    #[test]
    fn generation_is_reproducible() {
        let spec = GeneratorSpec::single(1, 2, 2, 2, 10, Shape::Mixed);
        let a: Vec<_> = generate(&spec).unwrap().take(20).collect();
        let b: Vec<_> = generate(&spec).unwrap().take(20).collect();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.system.dump(), y.system.dump());
            assert_eq!(x.provenance, y.provenance);
        }
        assert_eq!(generate_one(&spec, 7).system.dump(), a[7].system.dump());
    }

    #[test]
    fn zero_length_gives_zero_modules() {
        for shape in [Shape::Nilpotent, Shape::PMonomial] {
            let spec = GeneratorSpec::single(3, 3, 2, 2, 0, shape);
            assert!(generate(&spec)
                .unwrap()
                .take(10)
                .all(|i| i.system.module().is_zero()));
        }
    }

    #[test]
    fn lengths_respect_bound() {
        let spec = GeneratorSpec {
            seed: 9,
            primes: vec![2, 3, 5],
            ks: vec![1, 2, 3],
            ns: vec![1, 2, 3],
            max_length: 12,
            shape: Shape::Mixed,
        };
        assert!(generate(&spec)
            .unwrap()
            .take(200)
            .all(|i| i.system.module().length() <= 12));
    }

    #[test]
    fn invalid_specs() {
        let mut spec = GeneratorSpec::single(1, 4, 2, 2, 10, Shape::Mixed);
        assert!(generate(&spec).is_err());
        spec.primes = vec![2];
        spec.ns = vec![0];
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn unimodular_is_invertible() {
        let ring = CoeffRing::new(3, 2).unwrap();
        let mut rng = instance_rng(5, 0);
        for n in 1..=3 {
            assert!(random_unimodular(ring, n, &mut rng).is_invertible());
        }
    }
}
