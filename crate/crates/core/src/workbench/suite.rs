use std::time::Instant;

use serde::Serialize;

use super::config::{Workbench, WorkbenchConfig};
use crate::braided_hopf::{verify_double_presentation, verify_hopf_axioms};
use crate::check::Report;
use crate::error::{Error, Result};
use crate::moment::{verify_moment_identity, verify_reduction_algebra, Reducer};
use crate::qweyl::{verify_engine, verify_power_identities, Normalization};
use crate::reduction::{
    candidate_etas, cover_fiber_points, moment_operators, reduced_endomorphism_algebra, restriction_kernel_check,
    weight_space,
};
use crate::root_of_unity::{
    azumaya_membership, build_irrep, commutant_dimension, generated_algebra_dimension, verify_center_truncation,
    verify_delta_power, verify_freeness, MatrixRep,
};
use crate::scalars::FieldKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One entry of the suite report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    /// The statement being checked, in words.
    pub anchor: String,
    pub status: Status,
    pub detail: String,
    /// Individual identities, listed only in verbose mode.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subchecks: Vec<String>,
    /// Computed objects backing the verdict, listed only in verbose mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<serde_json::Value>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub config: WorkbenchConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.failed > 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    /// Check ids or dotted prefixes such as `rep` or `rep.1`.
    pub only: Option<Vec<String>>,
    pub verbose: bool,
}

impl SuiteOptions {
    fn selects(&self, id: &str) -> bool {
        match &self.only {
            None => true,
            Some(list) => list
                .iter()
                .any(|s| id == s || id.strip_prefix(s.as_str()).is_some_and(|r| r.starts_with('.'))),
        }
    }
}

/// What a single check produced.
enum Outcome {
    Done(Report, Option<serde_json::Value>),
    Note(bool, String),
    Skip(String),
}

struct Runner<'a> {
    opts: &'a SuiteOptions,
    records: Vec<CheckRecord>,
}

impl Runner<'_> {
    fn run(&mut self, id: &str, anchor: &str, f: impl FnOnce() -> Result<Outcome>) {
        if !self.opts.selects(id) {
            return;
        }
        let start = Instant::now();
        let outcome = f();
        let elapsed_ms = start.elapsed().as_millis() as u64;
        let (status, detail, subchecks, witnesses) = match outcome {
            Ok(Outcome::Done(report, w)) => {
                let status = if report.all_passed() {
                    Status::Pass
                } else {
                    Status::Fail
                };
                let subs = if self.opts.verbose {
                    report.to_string().lines().map(str::to_string).collect()
                } else {
                    Vec::new()
                };
                (status, report.summary(), subs, w.filter(|_| self.opts.verbose))
            }
            Ok(Outcome::Note(ok, detail)) => (if ok { Status::Pass } else { Status::Fail }, detail, vec![], None),
            Ok(Outcome::Skip(reason)) => (Status::Skipped, reason, vec![], None),
            Err(e) => (Status::Fail, e.to_string(), vec![], None),
        };
        self.records.push(CheckRecord {
            check_id: id.to_string(),
            anchor: anchor.to_string(),
            status,
            detail,
            subchecks,
            witnesses,
            elapsed_ms,
        });
    }
}

fn skip(reason: &str) -> Result<Outcome> {
    Ok(Outcome::Skip(reason.to_string()))
}

/// Runs every applicable check in a fixed order. The result depends only
/// on the configuration (and its seed), apart from the `elapsed_ms` fields.
pub fn run_verification_suite(wb: &Workbench, opts: &SuiteOptions) -> VerificationReport {
    let mut r = Runner {
        opts,
        records: Vec::new(),
    };
    let spec = &wb.spec;
    let b = &wb.config.bounds;
    let seed = wb.config.seed;
    let cyclotomic = wb.field.kind() == FieldKind::Cyclotomic;
    let preset = spec.is_single_parameter() && spec.normalization() == Normalization::Rescaled;

    r.run(
        "engine.soundness",
        "products in PBW normal form are associative, confluent and graded",
        || {
            Ok(Outcome::Done(
                verify_engine(spec, b.random_cases, b.degree_bound, seed)?,
                None,
            ))
        },
    );
    r.run(
        "qweyl.power_identities",
        "power identities and Euler operator conjugation",
        || {
            Ok(Outcome::Done(
                verify_power_identities(spec, b.exponent_bound.max(1))?,
                None,
            ))
        },
    );
    r.run(
        "hopf.axioms",
        "braided Hopf algebra axioms and the radical of the pairing",
        || Ok(Outcome::Done(verify_hopf_axioms(spec, b.degree_bound)?, None)),
    );
    r.run(
        "hopf.double_presentation",
        "the Heisenberg double is presented by the q-Weyl relations",
        || {
            Ok(Outcome::Done(
                verify_double_presentation(spec, b.degree_bound.max(1))?,
                None,
            ))
        },
    );
    r.run(
        "moment.identity",
        "the Euler operators give a quantum moment map",
        || match &wb.torus {
            None => skip("no A configured"),
            Some(_) if spec.normalization() != Normalization::Rescaled => skip("needs the rescaled normalization"),
            Some(t) => Ok(Outcome::Done(verify_moment_identity(t, spec)?, None)),
        },
    );
    r.run(
        "moment.reduction_algebra",
        "reduction modulo the moment ideal and the reduced product",
        || {
            if wb.torus.is_none() || wb.eta.is_empty() {
                return skip("needs A and eta");
            }
            if spec.normalization() != Normalization::Rescaled {
                return skip("needs the rescaled normalization");
            }
            if (1..spec.n()).any(|i| spec.m()[i][i] != spec.m()[0][0]) {
                return skip("the reduced product needs equal diagonal entries of M");
            }
            let reducer = Reducer::new(spec, &wb.datum()?)?;
            Ok(Outcome::Done(
                verify_reduction_algebra(&reducer, b.random_cases, b.degree_bound, seed)?,
                None,
            ))
        },
    );
    r.run(
        "root.delta_power",
        "Delta^l = prod(1 + x_i^l d_i^l) at a root of unity",
        || {
            if !cyclotomic || !preset {
                return skip("needs the cyclotomic field and the rescaled single-parameter preset");
            }
            Ok(Outcome::Done(verify_delta_power(spec)?, None))
        },
    );
    r.run(
        "root.center",
        "the centralizer in an exponent box is spanned by l-center monomials",
        || {
            if !cyclotomic {
                return skip("needs the cyclotomic field");
            }
            Ok(Outcome::Done(verify_center_truncation(spec, b.exponent_bound)?, None))
        },
    );
    r.run(
        "root.freeness",
        "products with l-center blocks are independent (rank l^(2n))",
        || {
            if !cyclotomic {
                return skip("needs the cyclotomic field");
            }
            if spec.n() > 2 {
                return skip("limited to n <= 2");
            }
            Ok(Outcome::Done(verify_freeness(spec)?, None))
        },
    );

    let wanted = |k: usize| {
        ["rep", "reduction", "cover"]
            .iter()
            .any(|p| opts.selects(&format!("{p}.{k}")) || selects_child(opts, p, k))
    };
    let built: Vec<Option<Result<MatrixRep>>> = wb
        .reps
        .iter()
        .enumerate()
        .map(|(k, setup)| wanted(k + 1).then(|| build_irrep(&setup.slots, &wb.field)))
        .collect();

    for (k, rep) in built.iter().enumerate() {
        let id = k + 1;
        let Some(rep) = rep else { continue };
        r.run(
            &format!("rep.{id}.build"),
            "explicit l^n-dimensional representation satisfies every relation",
            || {
                let rep = rep.as_ref().map_err(Clone::clone)?;
                let chi = rep.character();
                Ok(Outcome::Note(
                    true,
                    format!(
                        "dimension {}; central character a = [{}], omega = [{}]; Delta^l = {}",
                        rep.dim(),
                        join(&chi.a),
                        join(&chi.omega),
                        chi.delta_l()
                    ),
                ))
            },
        );
        r.run(
            &format!("rep.{id}.irreducible"),
            "representations on the Azumaya locus are irreducible",
            || {
                let Ok(rep) = rep else {
                    return skip("the representation did not build");
                };
                let commutant = commutant_dimension(rep);
                let full = rep.dim() * rep.dim();
                let generated = generated_algebra_dimension(rep.spec().field(), &rep.generators())?;
                let mut report = Report::new();
                report.push(
                    "commutant is the scalars",
                    commutant == 1,
                    format!("commutant dimension {commutant}"),
                );
                report.push(
                    "generators span the full matrix algebra",
                    generated == full,
                    format!("generated algebra dimension {generated} of {full}"),
                );
                report.push(
                    "Azumaya locus membership agrees",
                    azumaya_membership(rep.character()) == (generated == full),
                    format!("Delta^l = {}", rep.character().delta_l()),
                );
                Ok(Outcome::Done(report, None))
            },
        );
        r.run(&format!("reduction.{id}.weight_space"), "restriction to the weight space and the reduced algebra", || {
            let Ok(rep) = rep else { return skip("the representation did not build") };
            let Some(torus) = &wb.torus else { return skip("no A configured") };
            if wb.eta.is_empty() {
                return skip("no eta configured");
            }
            let ops = moment_operators(rep, torus)?.ops;
            let mut report = Report::new();
            let commute = ops.iter().all(|a| ops.iter().all(|b| a.commutes_with(b).unwrap_or(false)));
            report.push("moment operators commute", commute, "");
            let ws = weight_space(rep, torus, &wb.eta)?;
            report.push(format!("dim V_eta = {}", ws.dim()), true, "");
            if ws.dim() == 0 {
                return Ok(Outcome::Done(report, None));
            }
            report.extend(restriction_kernel_check(rep, torus, &wb.eta)?);
            let red = reduced_endomorphism_algebra(rep, torus, &wb.eta)?;
            report.extend(red.report);
            let witness = serde_json::json!({
                "weight_space_basis": ws.basis.iter().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "reduced_algebra_dimension": red.dimension,
            });
            Ok(Outcome::Done(report, Some(witness)))
        });
        r.run(
            &format!("reduction.{id}.fibers"),
            "every compatible eta has dim V_eta = l^(n-d)",
            || {
                let Ok(rep) = rep else {
                    return skip("the representation did not build");
                };
                let Some(torus) = &wb.torus else {
                    return skip("no A configured");
                };
                let Some(roots) = &wb.reps[k].roots else {
                    return skip("needs a root for every slot");
                };
                let l = wb.field.l().expect("cyclotomic") as usize;
                let expected = l.pow((torus.n() - torus.d()) as u32);
                let mut report = Report::new();
                let mut total = 0;
                for eta in candidate_etas(roots, torus)? {
                    let dim = weight_space(rep, torus, &eta)?.dim();
                    total += dim;
                    report.push(
                        format!("dim V_eta = {expected} at eta = [{}]", join(&eta)),
                        dim == expected,
                        format!("got {dim}"),
                    );
                }
                report.push(
                    format!("dimensions add up to l^n = {}", rep.dim()),
                    total == rep.dim(),
                    format!("got {total}"),
                );
                Ok(Outcome::Done(report, None))
            },
        );
        r.run(
            &format!("cover.{id}"),
            "the cover has l^(n-d) points over eta, matching dim V_eta",
            || {
                let Ok(rep) = rep else {
                    return skip("the representation did not build");
                };
                let Some(torus) = &wb.torus else {
                    return skip("no A configured");
                };
                let Some(roots) = &wb.reps[k].roots else {
                    return skip("needs a root for every slot");
                };
                if wb.eta.is_empty() {
                    return skip("no eta configured");
                }
                let fiber = match cover_fiber_points(roots, torus, &wb.eta, b.enumeration_cap) {
                    Err(Error::Parameter(m)) if m.contains("cap") => return skip(&m),
                    other => other?,
                };
                let dim = weight_space(rep, torus, &wb.eta)?.dim();
                let mut report = Report::new();
                report.push(
                    format!("point count is 0 or l^(n-d) = {}", fiber.expected),
                    fiber.count_matches(),
                    format!("{} points", fiber.points.len()),
                );
                report.push(
                    "point count equals dim V_eta",
                    fiber.points.len() == dim,
                    format!("dim V_eta = {dim}"),
                );
                let witness = serde_json::json!(fiber.points.iter().map(|p| join(p)).collect::<Vec<_>>());
                Ok(Outcome::Done(report, Some(witness)))
            },
        );
    }

    let mut summary = Summary::default();
    for c in &r.records {
        match c.status {
            Status::Pass => summary.passed += 1,
            Status::Fail => summary.failed += 1,
            Status::Skipped => summary.skipped += 1,
        }
    }
    VerificationReport {
        tool: "qdiff".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: wb.config.clone(),
        checks: r.records,
        summary,
    }
}

/// Whether `--only` names something inside `prefix.k`, e.g. `rep.1.build`.
fn selects_child(opts: &SuiteOptions, prefix: &str, k: usize) -> bool {
    let head = format!("{prefix}.{k}.");
    opts.only
        .as_ref()
        .is_some_and(|l| l.iter().any(|s| s.starts_with(&head)))
        || opts.only.as_ref().is_some_and(|l| l.iter().any(|s| s == prefix))
}

fn join(v: &[crate::scalars::Scalar]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}
