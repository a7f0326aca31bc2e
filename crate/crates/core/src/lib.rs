//! Koszul complexes, Koszul homology lengths and partial Euler
//! characteristics for modules over Z/p^k and Z/p^k[X_1, ..., X_n].
//!
//! The finite-length side ([`koszul`]) works with modules in
//! elementary-divisor form and commuting nilpotent actions. The graded side
//! ([`graded`]) computes Koszul homology of graded modules degree by degree.
//! [`lift`] realizes the passage from an action system to the polynomial
//! ring over Z/p^k in which the sequence becomes the variables, and [`lab`]
//! generates random instances together with a brute-force oracle.

pub mod error;
pub mod finlength;
pub mod graded;
pub mod koszul;
pub mod lab;
pub mod lift;
pub mod poly;
pub mod ring;

pub use error::{Error, Result};
pub use finlength::{FinModule, FinMorphism, IsoType, PresentedModule, PresentedMorphism};
pub use koszul::{ActionSystem, EulerProfile, KoszulRep};
pub use ring::{CoeffRing, Matrix, Scalar};
