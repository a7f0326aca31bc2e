//! Sparse polynomials over Z/p^k in a fixed number of variables.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::CoeffRing;

/// Exponent vector, little-endian by variable index.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: CoeffRing,
    n: usize,
    terms: BTreeMap<Monomial, u64>,
}

#[derive(Serialize)]
struct TermOut<'a> {
    coeff: u64,
    exponents: &'a [u32],
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermOut<'_>> = self
            .terms
            .iter()
            .map(|(m, &c)| TermOut {
                coeff: c,
                exponents: m,
            })
            .collect();
        terms.serialize(serializer)
    }
}

pub fn monomial_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// All monomials of total degree `d` in `n` variables, in a fixed order
/// (lexicographic on the exponent vector, largest first).
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn fill(n: usize, d: u32, prefix: &mut Monomial, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            fill(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    fill(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

impl Poly {
    pub fn zero(ring: CoeffRing, n: usize) -> Self {
        Poly {
            ring,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: CoeffRing, n: usize, c: i64) -> Self {
        Self::term(ring, vec![0; n], c)
    }

    pub fn variable(ring: CoeffRing, n: usize, index: usize) -> Self {
        let mut m = vec![0; n];
        m[index] = 1;
        Self::term(ring, m, 1)
    }

    pub fn term(ring: CoeffRing, monomial: Monomial, c: i64) -> Self {
        let n = monomial.len();
        let mut terms = BTreeMap::new();
        let c = ring.reduce(c);
        if c != 0 {
            terms.insert(monomial, c);
        }
        Poly { ring, n, terms }
    }

    pub fn from_terms(ring: CoeffRing, n: usize, terms: &[(Monomial, i64)]) -> Result<Self> {
        let mut p = Poly::zero(ring, n);
        for (m, c) in terms {
            if m.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "exponent vector {m:?} has {} entries, expected {n}",
                    m.len()
                )));
            }
            p.add_term(m, ring.reduce(*c));
        }
        Ok(p)
    }

    fn add_term(&mut self, m: &[u32], c: u64) {
        if c == 0 {
            return;
        }
        let ring = self.ring;
        let entry = self.terms.entry(m.to_vec()).or_insert(0);
        *entry = ring.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(m);
        }
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u32]) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// `Ok(None)` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut degrees = self.terms.keys().map(|m| monomial_degree(m));
        let Some(d) = degrees.next() else {
            return Ok(None);
        };
        if degrees.all(|e| e == d) {
            Ok(Some(d))
        } else {
            Err(Error::Inhomogeneous(format!(
                "polynomial {self:?} mixes degrees"
            )))
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.ring.neg(1 % self.ring.modulus()))
    }

    pub fn scale(&self, c: u64) -> Poly {
        let mut out = Poly::zero(self.ring, self.n);
        for (m, a) in self.terms() {
            out.add_term(m, self.ring.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.ring, self.n);
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(&m, self.ring.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(self.ring, self.n, 1);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(1, 5), vec![vec![5]]);
        assert_eq!(
            monomials_of_degree(2, 2),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_of_degree(0, 0).len(), 1);
        assert!(monomials_of_degree(0, 1).is_empty());
    }

    #[test]
    fn arithmetic_and_degrees() {
        let r = CoeffRing::new(2, 2).unwrap();
        let x = Poly::variable(r, 2, 0);
        let y = Poly::variable(r, 2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        // (X + Y)^2 = X^2 + 2XY + Y^2 over Z/4
        assert_eq!(sq.coefficient(&[1, 1]), 2);
        assert_eq!(sq.homogeneous_degree().unwrap(), Some(2));
        assert_eq!(s.pow(4).coefficient(&[2, 2]), 2); // 6 mod 4
        let mixed = x.add(&Poly::constant(r, 2, 1));
        assert!(mixed.homogeneous_degree().is_err());
        assert_eq!(Poly::constant(r, 2, 4).homogeneous_degree().unwrap(), None);
        assert!(x.add(&x.neg()).is_zero());
    }
}
