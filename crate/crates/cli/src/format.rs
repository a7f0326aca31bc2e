//! Instance files: JSON with a `schema_version`, parsed and then validated
//! into core objects. Errors name the offending field.

use std::fmt;

use koszul_core::graded::{variables, GradedPresentation, KoszulSequenceEntry};
use koszul_core::lab::{p_monomial_system, PMonomialGenerator};
use koszul_core::poly::Poly;
use koszul_core::{ActionSystem, CoeffRing, FinModule};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

const MAX_VARIABLES: usize = 6;
const MAX_RANK: usize = 512;
const MAX_DEGREE: i32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub p: u64,
    pub k: u32,
    /// Number of variables of the polynomial ring (actions, for finite length).
    pub n: usize,
    pub backend: Backend,
    pub module: ModuleSpec,
    /// Defaults to the variables (actions) in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<SequenceEntry>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    FiniteLength,
    Graded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModuleSpec {
    /// `⊕ Z/p^{e_i}` with one matrix per action.
    Elementary {
        exponents: Vec<u32>,
        actions: Vec<Vec<Vec<i64>>>,
    },
    /// `Z/p^k[X] / J`, `J` generated by `p^a X^β`.
    PMonomialQuotient { generators: Vec<PMonomialGenerator> },
    /// Cokernel of a homogeneous matrix of polynomials.
    Graded {
        row_degrees: Vec<i32>,
        col_degrees: Vec<i32>,
        entries: Vec<Vec<Vec<TermSpec>>>,
    },
    /// `B / J` for homogeneous generators of `J`.
    QuotientRing { generators: Vec<Vec<TermSpec>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: i64,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SequenceEntry {
    /// The variable (action) with this 0-based index.
    Index(usize),
    Polynomial(Vec<TermSpec>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for InputError {}

fn err(field: impl Into<String>, message: impl fmt::Display) -> InputError {
    InputError {
        field: field.into(),
        message: message.to_string(),
    }
}

/// A validated instance.
#[derive(Debug, Clone)]
pub enum Instance {
    Finite(ActionSystem),
    Graded {
        module: GradedPresentation,
        sequence: Vec<KoszulSequenceEntry>,
        /// Generators of `J` when the module is `B / J`.
        ideal: Option<Vec<Poly>>,
    },
}

pub fn parse(text: &str) -> Result<InstanceFile, InputError> {
    serde_json::from_str(text).map_err(|e| {
        err(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string().split(" at line").next().unwrap_or_default(),
        )
    })
}

pub fn to_json(file: &InstanceFile) -> String {
    serde_json::to_string_pretty(file).expect("instance files serialize")
}

impl InstanceFile {
    pub fn ring(&self) -> Result<CoeffRing, InputError> {
        CoeffRing::new(self.p, self.k).map_err(|e| err("p, k", e))
    }

    pub fn validate(&self) -> Result<Instance, InputError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(err(
                "schema_version",
                format!(
                    "unsupported version {}, expected {SCHEMA_VERSION}",
                    self.schema_version
                ),
            ));
        }
        let ring = self.ring()?;
        if self.n == 0 || self.n > MAX_VARIABLES {
            return Err(err("n", format!("must be between 1 and {MAX_VARIABLES}")));
        }
        match self.backend {
            Backend::FiniteLength => self.validate_finite(ring).map(Instance::Finite),
            Backend::Graded => self.validate_graded(ring),
        }
    }

    fn validate_finite(&self, ring: CoeffRing) -> Result<ActionSystem, InputError> {
        let base = match &self.module {
            ModuleSpec::Elementary { exponents, actions } => {
                if exponents.len() > MAX_RANK {
                    return Err(err("module.exponents", format!("rank above {MAX_RANK}")));
                }
                let module = FinModule::new(ring, exponents.clone())
                    .map_err(|e| err("module.exponents", e))?;
                if actions.len() != self.n {
                    return Err(err(
                        "module.actions",
                        format!("{} matrices for n = {}", actions.len(), self.n),
                    ));
                }
                for (i, a) in actions.iter().enumerate() {
                    let rank = module.rank();
                    if a.len() != rank || a.iter().any(|row| row.len() != rank) {
                        return Err(err(
                            format!("module.actions[{i}]"),
                            format!("must be {rank}x{rank}"),
                        ));
                    }
                    check_entries(
                        ring,
                        a.iter().flatten().copied(),
                        &format!("module.actions[{i}]"),
                    )?;
                }
                ActionSystem::from_matrices(module, actions)
                    .map_err(|e| err("module.actions", e))?
            }
            ModuleSpec::PMonomialQuotient { generators } => {
                check_generators(generators, self.n, ring)?;
                p_monomial_system(ring, self.n, generators)
                    .map_err(|e| err("module.generators", e))?
            }
            _ => {
                return Err(err(
                    "module.type",
                    "finite-length backend takes \"elementary\" or \"p-monomial-quotient\"",
                ))
            }
        };
        let Some(sequence) = &self.sequence else {
            return Ok(base);
        };
        if sequence.is_empty() {
            return Err(err("sequence", "must not be empty"));
        }
        let actions = sequence
            .iter()
            .enumerate()
            .map(|(i, entry)| {
                let field = format!("sequence[{i}]");
                let poly = match entry {
                    SequenceEntry::Index(v) if *v < self.n => Poly::variable(ring, self.n, *v),
                    SequenceEntry::Index(v) => {
                        return Err(err(field, format!("index {v} out of range 0..{}", self.n)))
                    }
                    SequenceEntry::Polynomial(terms) => to_poly(ring, self.n, terms, &field)?,
                };
                base.evaluate(&poly).map_err(|e| err(field, e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ActionSystem::new(base.module().clone(), actions).map_err(|e| err("sequence", e))
    }

    fn validate_graded(&self, ring: CoeffRing) -> Result<Instance, InputError> {
        let n = self.n;
        let (module, ideal) = match &self.module {
            ModuleSpec::Graded {
                row_degrees,
                col_degrees,
                entries,
            } => {
                for (name, degrees) in [
                    ("module.row_degrees", row_degrees),
                    ("module.col_degrees", col_degrees),
                ] {
                    if degrees.len() > MAX_RANK || degrees.iter().any(|d| d.abs() > MAX_DEGREE) {
                        return Err(err(
                            name,
                            format!("at most {MAX_RANK} degrees within ±{MAX_DEGREE}"),
                        ));
                    }
                }
                let polys = entries
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, terms)| {
                                to_poly(ring, n, terms, &format!("module.entries[{i}][{j}]"))
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let ideal = (row_degrees.as_slice() == [0]).then(|| polys[0].clone());
                let pres = GradedPresentation::new(
                    ring,
                    n,
                    row_degrees.clone(),
                    col_degrees.clone(),
                    polys,
                )
                .map_err(|e| err("module.entries", e))?;
                (pres, ideal)
            }
            ModuleSpec::QuotientRing { generators } => {
                let polys = generators
                    .iter()
                    .enumerate()
                    .map(|(i, terms)| to_poly(ring, n, terms, &format!("module.generators[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let pres = GradedPresentation::quotient_ring(ring, n, &polys)
                    .map_err(|e| err("module.generators", e))?;
                (pres, Some(polys))
            }
            ModuleSpec::PMonomialQuotient { generators } => {
                check_generators(generators, n, ring)?;
                let polys: Vec<Poly> = generators
                    .iter()
                    .map(|g| Poly::term(ring, g.monomial.clone(), ring.p_power(g.pexp) as i64))
                    .collect();
                let pres = GradedPresentation::quotient_ring(ring, n, &polys)
                    .map_err(|e| err("module.generators", e))?;
                (pres, Some(polys))
            }
            ModuleSpec::Elementary { .. } => {
                return Err(err(
                    "module.type",
                    "graded backend takes \"graded\", \"quotient-ring\" or \"p-monomial-quotient\"",
                ))
            }
        };
        let sequence = match &self.sequence {
            None => variables(ring, n),
            Some(s) if s.is_empty() => return Err(err("sequence", "must not be empty")),
            Some(s) => s
                .iter()
                .enumerate()
                .map(|(i, entry)| {
                    let field = format!("sequence[{i}]");
                    match entry {
                        SequenceEntry::Index(v) if *v < n => {
                            Ok(KoszulSequenceEntry::variable(ring, n, *v))
                        }
                        SequenceEntry::Index(v) => {
                            Err(err(field, format!("index {v} out of range 0..{n}")))
                        }
                        SequenceEntry::Polynomial(terms) => {
                            KoszulSequenceEntry::new(to_poly(ring, n, terms, &field)?)
                                .map_err(|e| err(field, e))
                        }
                    }
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        Ok(Instance::Graded {
            module,
            sequence,
            ideal,
        })
    }
}

fn check_entries(
    ring: CoeffRing,
    values: impl Iterator<Item = i64>,
    field: &str,
) -> Result<(), InputError> {
    let modulus = ring.modulus() as i64;
    for v in values {
        if !(0..modulus).contains(&v) {
            return Err(err(field, format!("entry {v} outside [0, {modulus})")));
        }
    }
    Ok(())
}

fn check_generators(
    generators: &[PMonomialGenerator],
    n: usize,
    ring: CoeffRing,
) -> Result<(), InputError> {
    for (i, g) in generators.iter().enumerate() {
        let field = format!("module.generators[{i}]");
        if g.monomial.len() != n {
            return Err(err(
                field,
                format!("monomial has {} exponents, expected {n}", g.monomial.len()),
            ));
        }
        if g.pexp > ring.k() || g.monomial.iter().any(|&e| e as i32 > MAX_DEGREE) {
            return Err(err(
                field,
                format!("pexp must be <= {} and exponents <= {MAX_DEGREE}", ring.k()),
            ));
        }
    }
    Ok(())
}

fn to_poly(ring: CoeffRing, n: usize, terms: &[TermSpec], field: &str) -> Result<Poly, InputError> {
    check_entries(ring, terms.iter().map(|t| t.coeff), field)?;
    if terms
        .iter()
        .any(|t| t.exponents.iter().any(|&e| e as i32 > MAX_DEGREE))
    {
        return Err(err(field, format!("exponent above {MAX_DEGREE}")));
    }
    let pairs: Vec<(Vec<u32>, i64)> = terms
        .iter()
        .map(|t| (t.exponents.clone(), t.coeff))
        .collect();
    Poly::from_terms(ring, n, &pairs).map_err(|e| err(field, e))
}
