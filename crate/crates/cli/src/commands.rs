use std::time::Instant;

use koszul_core::graded::{
    koszul_strand_profile, lech_multiplicity_table, shift_check, validate_multiplicity_system,
    LechTable, ShiftStatus, StrandReport,
};
use koszul_core::koszul::{boundary_identities, chi0_dichotomy_check, verify_serre};
use koszul_core::lab::{
    generate, oracle_homology, GeneratorSpec, Shape, DEFAULT_MODULE_BOUND, DEFAULT_SUBGROUP_CAP,
    PRNG_NAME,
};
use koszul_core::lift::{construct_lift, verify_base_change};
use koszul_core::{ActionSystem, Error, EulerProfile, FinModule, FinMorphism, Matrix};
use serde_json::{json, Value};

use crate::format::{InputError, Instance, InstanceFile};
use crate::report::{profile_table, Report, Status, Verdict};

/// Input problems (exit 2) as opposed to verdicts.
#[derive(Debug)]
pub enum Failure {
    Input(InputError),
    Internal(Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Internal(e)
    }
}

type Outcome = Result<Report, Failure>;

fn finite_verdicts(sys: &ActionSystem) -> Result<(EulerProfile, Vec<Verdict>), Error> {
    let dump = || json!({ "system": sys.dump() });
    let serre = verify_serre(sys)?;
    let profile = serre.profile.clone();
    let mut verdicts = vec![Verdict {
        name: "serre".into(),
        status: if serre.passed {
            Status::Pass
        } else {
            Status::Fail
        },
        detail: format!("χ = {:?}", profile.chis),
        counterexample: serre.counterexample,
    }];

    let dichotomy = chi0_dichotomy_check(sys)?;
    verdicts.push(Verdict::check(
        "dichotomy",
        dichotomy.passed,
        format!(
            "χ_0 = {}, even {} / odd {}",
            dichotomy.chi0, dichotomy.even_sum, dichotomy.odd_sum
        ),
        dump,
    ));

    let boundary = boundary_identities(sys)?;
    verdicts.push(Verdict::check(
        "boundary",
        boundary.passed,
        format!(
            "H_0 ≅ {:?}, H_n ≅ {:?}",
            boundary.h0.exponents(),
            boundary.hn.exponents()
        ),
        || json!({ "system": sys.dump(), "verdict": &boundary }),
    ));

    let cert = construct_lift(sys)?;
    let base = verify_base_change(sys, &cert)?;
    verdicts.push(Verdict {
        name: "base-change".into(),
        status: if base.passed {
            Status::Pass
        } else {
            Status::Fail
        },
        detail: format!("over B: λ(H) = {:?}", base.over_base.homology_lengths),
        counterexample: base
            .counterexample
            .map(|c| json!({ "system": c, "over_base": base.over_base })),
    });

    Ok((profile, verdicts))
}

fn strand_table(report: &StrandReport) -> Vec<String> {
    let n = report.totals.len();
    let mut rows = vec![format!(
        "{:>4} {}",
        "d",
        (0..n)
            .map(|i| format!("{:>6}", format!("H_{i}")))
            .collect::<String>()
    )];
    for row in report
        .rows
        .iter()
        .filter(|r| r.homology_lengths.iter().any(|&h| h > 0))
    {
        rows.push(format!(
            "{:>4} {}",
            row.degree,
            row.homology_lengths
                .iter()
                .map(|h| format!("{h:>6}"))
                .collect::<String>()
        ));
    }
    rows.push(format!(
        "{:>4} {}",
        "sum",
        report
            .totals
            .iter()
            .map(|h| format!("{h:>6}"))
            .collect::<String>()
    ));
    rows
}

fn timed(timing: bool, start: Instant, mut report: Report) -> Report {
    if timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    report
}

pub fn compute(file: InstanceFile, degree_bound: Option<i32>, timing: bool) -> Outcome {
    let start = Instant::now();
    let instance = file.validate()?;
    let mut report = Report::new("compute", Some(file));
    match instance {
        Instance::Finite(sys) => {
            let (profile, verdicts) = finite_verdicts(&sys)?;
            report.table = profile_table(&profile.homology_lengths, &profile.chis);
            report.results = json!({ "profile": profile });
            report.verdicts = verdicts;
        }
        Instance::Graded {
            module, sequence, ..
        } => {
            let strands = koszul_strand_profile(&module, &sequence, degree_bound)?;
            report.table = strand_table(&strands);
            if strands.stabilized {
                let profile = strands.profile();
                report
                    .table
                    .extend(profile_table(&profile.homology_lengths, &profile.chis));
                let passed = profile.chis.iter().all(|&c| c >= 0);
                report.verdicts.push(Verdict::check(
                    "serre",
                    passed,
                    format!("χ = {:?}", profile.chis),
                    || json!({ "module": &module, "sequence": &sequence, "profile": &profile }),
                ));
            } else {
                report.verdicts.push(Verdict::new(
                    "stabilized",
                    Status::Inconclusive,
                    format!(
                        "homology does not vanish near degree {}; raise --degree-bound",
                        strands.degree_bound
                    ),
                ));
            }
            report.results = json!({ "strands": strands, "chi": strands.stabilized.then(|| strands.profile().chis) });
        }
    }
    Ok(timed(timing, start, report))
}

pub struct GeneratorFlags {
    pub samples: usize,
    pub seed: u64,
    pub primes: Vec<u64>,
    pub ks: Vec<u32>,
    pub ns: Vec<usize>,
    pub max_length: usize,
    pub shape: Shape,
}

pub fn verify_serre_batch(flags: GeneratorFlags, timing: bool) -> Outcome {
    let start = Instant::now();
    let spec = GeneratorSpec {
        seed: flags.seed,
        primes: flags.primes,
        ks: flags.ks,
        ns: flags.ns,
        max_length: flags.max_length,
        shape: flags.shape,
    };
    let stream = generate(&spec).map_err(|e| InputError {
        field: "generator flags".into(),
        message: e.to_string(),
    })?;
    let mut report = Report::new("verify-serre", None);
    report.provenance = Some(json!({ "prng": PRNG_NAME, "spec": &spec }));

    let names = ["serre", "dichotomy", "boundary", "base-change", "oracle"];
    let mut failures: Vec<Vec<Value>> = vec![Vec::new(); names.len()];
    let mut passes = vec![0usize; names.len()];
    let mut oracle_skipped = 0;
    let mut max_chi = Vec::new();

    for instance in stream.take(flags.samples) {
        let sys = &instance.system;
        let tag = |v: &Verdict| {
            json!({ "index": instance.index, "seed": flags.seed, "provenance": &instance.provenance,
                    "detail": v.detail, "counterexample": v.counterexample })
        };
        let (profile, verdicts) = finite_verdicts(sys)?;
        for (j, c) in profile.chis.iter().enumerate() {
            if max_chi.len() <= j {
                max_chi.push(0);
            }
            max_chi[j] = max_chi[j].max(*c);
        }
        for (slot, v) in verdicts.iter().enumerate() {
            match v.status {
                Status::Fail => failures[slot].push(tag(v)),
                _ => passes[slot] += 1,
            }
        }

        let small = sys
            .module()
            .order()
            .is_some_and(|o| o <= DEFAULT_MODULE_BOUND);
        if !small {
            oracle_skipped += 1;
            continue;
        }
        let ours = profile.homology_lengths;
        match oracle_homology(sys, DEFAULT_MODULE_BOUND, DEFAULT_SUBGROUP_CAP) {
            Ok(o) if o.homology_lengths == ours => passes[4] += 1,
            Ok(o) => failures[4].push(json!({
                "index": instance.index, "seed": flags.seed, "system": sys.dump(),
                "pipeline": ours, "oracle": o.homology_lengths,
            })),
            Err(Error::EnumerationBoundExceeded { .. }) => oracle_skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }

    for (slot, name) in names.iter().enumerate() {
        let fails = std::mem::take(&mut failures[slot]);
        let detail = format!("{} passed, {} failed", passes[slot], fails.len());
        report.verdicts.push(if fails.is_empty() {
            Verdict::new(name, Status::Pass, detail)
        } else {
            Verdict {
                name: name.to_string(),
                status: Status::Fail,
                detail,
                counterexample: Some(Value::Array(fails)),
            }
        });
    }
    report.table = vec![
        format!(
            "{} instances, seed {}, {PRNG_NAME}",
            flags.samples, flags.seed
        ),
        format!("largest χ_j seen: {max_chi:?}"),
        format!("oracle skipped on {oracle_skipped} instances above the enumeration bound"),
    ];
    report.results =
        json!({ "samples": flags.samples, "max_chi": max_chi, "oracle_skipped": oracle_skipped });
    Ok(timed(timing, start, report))
}

/// `λ(M / (x_1^t, ..., x_n^t) M)` for a finite-length system.
fn finite_lech(sys: &ActionSystem, t_max: u32) -> Result<LechTable, Error> {
    let module = sys.module();
    let mut rows = Vec::new();
    for t in 1..=t_max {
        let mut span: Matrix = module.relation_matrix();
        for x in sys.actions() {
            let mut power = FinMorphism::identity(module);
            for _ in 0..t {
                power = x.compose(&power)?;
            }
            span = span.hcat(power.matrix())?;
        }
        rows.push((t, FinModule::cokernel(&span).length()));
    }
    Ok(LechTable::from_rows(rows, sys.n()))
}

fn lech_table_lines(table: &LechTable) -> Vec<String> {
    let mut lines = vec![format!("{:>3} {:>12}", "t", "λ(M/y^t M)")];
    lines.extend(table.rows.iter().map(|(t, l)| format!("{t:>3} {l:>12}")));
    if let Some(r) = table.leading_coefficient {
        lines.push(format!(
            "leading coefficient {}/{}",
            r.numerator, r.denominator
        ));
    }
    lines
}

pub fn multiplicity(
    file: InstanceFile,
    t_max: u32,
    degree_bound: Option<i32>,
    timing: bool,
) -> Outcome {
    let start = Instant::now();
    if t_max == 0 {
        return Err(InputError {
            field: "--t-max".into(),
            message: "must be at least 1".into(),
        }
        .into());
    }
    let instance = file.validate()?;
    let mut report = Report::new("multiplicity", Some(file));
    match instance {
        Instance::Finite(sys) => {
            let table = finite_lech(&sys, t_max)?;
            // x_i^t = 0 once t >= λ(M), leaving M itself.
            let length = sys.module().length();
            let stable: Vec<&(u32, usize)> = table
                .rows
                .iter()
                .filter(|&&(t, _)| t as usize >= length)
                .collect();
            report.verdicts.push(if stable.is_empty() {
                Verdict::new(
                    "stable-tail",
                    Status::Skipped,
                    format!("needs --t-max >= λ(M) = {length}"),
                )
            } else {
                Verdict::check(
                    "stable-tail",
                    stable.iter().all(|&&(_, l)| l == length),
                    format!("λ(M/x^t M) = λ(M) = {length} for t >= {length}"),
                    || json!({ "system": sys.dump(), "table": &table }),
                )
            });
            let dichotomy = chi0_dichotomy_check(&sys)?;
            report.verdicts.push(Verdict::check(
                "dichotomy",
                dichotomy.passed,
                format!("χ_0 = {} (dim M = 0 < n)", dichotomy.chi0),
                || json!({ "system": sys.dump() }),
            ));
            report.table = lech_table_lines(&table);
            report.results = json!({ "table": table });
        }
        Instance::Graded {
            module, sequence, ..
        } => {
            if !validate_multiplicity_system(&module, &sequence, degree_bound) {
                return Err(InputError {
                    field: "sequence".into(),
                    message: "M/(y)M is not of finite length within the degree bound; raise --degree-bound or \
                              choose a system of parameters"
                        .into(),
                }
                .into());
            }
            let table = match lech_multiplicity_table(&module, &sequence, t_max, degree_bound) {
                Ok(t) => t,
                Err(Error::DegreeBudgetExceeded { bound }) => {
                    report.verdicts.push(Verdict::new(
                        "multiplicity",
                        Status::Inconclusive,
                        format!("quotient strands did not vanish by degree {bound}; raise --degree-bound"),
                    ));
                    return Ok(timed(timing, start, report));
                }
                Err(e) => return Err(e.into()),
            };
            let strands = koszul_strand_profile(&module, &sequence, degree_bound)?;
            let regular = strands.stabilized && strands.higher_homology_vanishes();
            report.verdicts.push(if regular {
                Verdict::check(
                    "scaling-law",
                    table.scaling_law,
                    "y regular on M: λ(M/y^t M) = t^n λ(M/yM)",
                    || json!({ "module": &module, "sequence": &sequence, "table": &table }),
                )
            } else {
                Verdict::new(
                    "scaling-law",
                    Status::Skipped,
                    "y is not M-regular up to the bound",
                )
            });
            report.table = lech_table_lines(&table);
            report.results = json!({ "table": table, "regular": regular });
        }
    }
    Ok(timed(timing, start, report))
}

pub fn shift(file: InstanceFile, degree_bound: Option<i32>, timing: bool) -> Outcome {
    let start = Instant::now();
    let instance = file.validate()?;
    let ring = file.ring()?;
    let n = file.n;
    let Instance::Graded {
        sequence,
        ideal: Some(ideal),
        ..
    } = instance
    else {
        return Err(InputError {
            field: "module".into(),
            message: "shift-check needs a graded B/J instance (quotient-ring, p-monomial-quotient, or one row in \
                      degree 0)"
                .into(),
        }
        .into());
    };
    let mut report = Report::new("shift-check", Some(file));
    let verdict = match shift_check(ring, n, &ideal, &sequence, degree_bound) {
        Ok(v) => v,
        Err(Error::NotRegular { index, degree }) => {
            return Err(InputError {
                field: "sequence".into(),
                message: format!("not regular on B: H_{index} is nonzero in degree {degree}"),
            }
            .into())
        }
        Err(e) => return Err(e.into()),
    };
    let status = match verdict.status {
        ShiftStatus::Pass => Status::Pass,
        ShiftStatus::Fail => Status::Fail,
        ShiftStatus::Inconclusive => Status::Inconclusive,
    };
    report.verdicts.push(Verdict {
        name: "shift".into(),
        status,
        detail: format!(
            "H_i(B/J) vs H_(i-1)(J) up to degree {}: {} mismatches{}",
            verdict.degree_bound,
            verdict.mismatches.len(),
            if status == Status::Inconclusive {
                ", not stabilized"
            } else {
                ""
            }
        ),
        counterexample: (status == Status::Fail).then(
            || json!({ "ideal": &ideal, "sequence": &sequence, "mismatches": &verdict.mismatches }),
        ),
    });
    report.table = strand_table(&verdict.quotient);
    report.results = serde_json::to_value(&verdict).expect("verdict serializes");
    Ok(timed(timing, start, report))
}

pub fn lift(file: InstanceFile, timing: bool) -> Outcome {
    let start = Instant::now();
    let Instance::Finite(sys) = file.validate()? else {
        return Err(InputError {
            field: "backend".into(),
            message: "lift takes a finite-length instance".into(),
        }
        .into());
    };
    let mut report = Report::new("lift", Some(file));
    let cert = construct_lift(&sys)?;
    let base = verify_base_change(&sys, &cert)?;
    let checks = [
        (
            "phi(y_i)=x_i",
            cert.checks.variables_act_as_sequence,
            "X_i acts on M as x_i".to_string(),
        ),
        (
            "finite-over-B",
            cert.checks.finite_over_base,
            format!(
                "{}^{} M = 0 and {}^{} is not in (X)",
                cert.p, cert.k, cert.p, cert.k
            ),
        ),
        (
            "regular-sop",
            cert.checks.regular_system_of_parameters,
            format!(
                "H_>0(X, B) = 0 up to degree {}, λ(B/(X)) = {}",
                cert.degree_bound, cert.residue_length
            ),
        ),
    ];
    for (name, ok, detail) in checks {
        report.verdicts.push(Verdict::check(
            name,
            ok,
            detail,
            || json!({ "system": sys.dump(), "certificate": &cert }),
        ));
    }
    report.verdicts.push(Verdict {
        name: "base-change".into(),
        status: if base.passed {
            Status::Pass
        } else {
            Status::Fail
        },
        detail: format!("λ(H) = {:?} both ways", base.over_actions.homology_lengths),
        counterexample: base.counterexample.clone(),
    });
    report.table = vec![
        format!("B = {}, Δ = {}^{}", cert.base, cert.p, cert.delta_valuation),
        cert.justification.clone(),
        format!(
            "λ(B/(X)) = {}, regularity checked to degree {}",
            cert.residue_length, cert.degree_bound
        ),
    ];
    report.results = json!({ "certificate": cert, "base_change": base });
    Ok(timed(timing, start, report))
}
