//! Task execution: each scenario task maps to one library call and one
//! report document. `passed == false` means a check-style task found a
//! counterexample; the report then carries the witness.

use crate::bam::{
    self, certify_empirical, projector_certificate, BamCertificate, CertifyOutcome,
    ProductSpaceSpec, Provenance,
};
use crate::circumcenter::{circumcenter, crm_certificate, default_cc_tol, map_rate};
use crate::numkit::Vector;
use crate::operators::OperatorExpr;
use crate::sets::{friedrichs_cosine, ConvexSet};

use super::config::{
    affine_refs, vector, SamplesConfig, Scenario, ScenarioConfig, TaskConfig,
};
use super::report::{certificate_json, set_json, trace_csv, violation_json, Json};
use super::CliError;

/// What a task run produced: the report document, an optional CSV trace,
/// and whether every check inside the task held.
pub struct TaskOutcome {
    pub report: Json,
    pub trace: Option<String>,
    pub passed: bool,
    pub summary: String,
}

fn get_set<'a>(scenario: &'a Scenario, name: &str) -> Result<&'a ConvexSet, CliError> {
    scenario
        .sets
        .get(name)
        .ok_or_else(|| CliError::Validation(format!("unknown set \"{name}\"")))
}

fn get_operator<'a>(scenario: &'a Scenario, name: &str) -> Result<&'a OperatorExpr, CliError> {
    scenario
        .operators
        .get(name)
        .ok_or_else(|| CliError::Validation(format!("unknown operator \"{name}\"")))
}

/// Certificates for the compose/combine tasks: factor zero set references
/// become projector certificates, anything else an empirically-claimed one.
fn stated_certificates(
    scenario: &Scenario,
    names: &[String],
    gammas: &Option<Vec<f64>>,
) -> Result<Vec<BamCertificate>, CliError> {
    let gammas = match gammas {
        Some(g) if g.len() != names.len() => {
            return Err(CliError::Validation(format!(
                "{} gammas for {} sets",
                g.len(),
                names.len()
            )))
        }
        Some(g) => g.clone(),
        None => vec![0.0; names.len()],
    };
    names
        .iter()
        .zip(gammas)
        .map(|(name, gamma)| {
            let set = get_set(scenario, name)?.clone();
            if gamma == 0.0 {
                projector_certificate(set).map_err(CliError::from)
            } else {
                BamCertificate::new(set, gamma, Provenance::Empirical).map_err(CliError::from)
            }
        })
        .collect()
}

pub fn run_scenario(
    cfg: &ScenarioConfig,
    scenario: &Scenario,
    seed_override: Option<u64>,
) -> Result<TaskOutcome, CliError> {
    let dim = scenario.ambient_dim;
    match &cfg.task {
        TaskConfig::Project { set, point } => {
            let target = get_set(scenario, set)?;
            let x = vector(point, dim, "point")?;
            let p = target.project(&x)?;
            let report = vec![
                ("set", Json::str(set.as_str())),
                ("point", Json::vector(&x)),
                ("projection", Json::vector(&p)),
                ("distance", Json::Num(x.dist(&p))),
            ];
            Ok(TaskOutcome {
                report: Json::obj(report),
                trace: None,
                passed: true,
                summary: format!("projected onto \"{set}\" at distance {:.6}", x.dist(&p)),
            })
        }
        TaskConfig::Angle { first, second } => {
            let names = [first.clone(), second.clone()];
            let subs = affine_refs(&names, &scenario.sets)?;
            let angle = friedrichs_cosine(subs[0].par(), subs[1].par(), 1e-10)?;
            let report = vec![
                ("first", Json::str(first.as_str())),
                ("second", Json::str(second.as_str())),
                ("cosine", Json::Num(angle.cosine)),
                ("intersection_dim", Json::Int(angle.dim_intersection as i64)),
            ];
            Ok(TaskOutcome {
                report: Json::obj(report),
                trace: None,
                passed: true,
                summary: format!("angle cosine {:.12}", angle.cosine),
            })
        }
        TaskConfig::Circumcenter { points, tol } => {
            let pts = points
                .iter()
                .map(|p| vector(p, dim, "point"))
                .collect::<Result<Vec<Vector>, CliError>>()?;
            if pts.is_empty() {
                return Err(CliError::Validation("no points given".into()));
            }
            let tol = tol.unwrap_or_else(|| default_cc_tol(&pts));
            let r = circumcenter(&pts, tol)?;
            let report = vec![
                ("tol", Json::Num(tol)),
                (
                    "point",
                    r.point.as_ref().map(Json::vector).unwrap_or(Json::Null),
                ),
                ("hull_residual", Json::Num(r.hull_residual)),
                ("spread", Json::Num(r.spread)),
            ];
            let summary = match &r.point {
                Some(p) => format!("circumcenter {p}"),
                None => format!("no circumcenter (spread {:.3e})", r.spread),
            };
            Ok(TaskOutcome { report: Json::obj(report), trace: None, passed: true, summary })
        }
        TaskConfig::Certify { operator, fixed_set, samples } => {
            let op = get_operator(scenario, operator)?;
            let target = get_set(scenario, fixed_set)?;
            let spec = samples
                .clone()
                .unwrap_or_else(SamplesConfig::standard)
                .build(dim, seed_override)?;
            let outcome = certify_empirical(op, target, &spec)?;
            let mut report = vec![
                ("operator", Json::str(operator.as_str())),
                ("fixed_set", set_json(target)),
                ("sample_seed", Json::Int(spec.seed as i64)),
                ("sample_count", Json::Int(spec.count as i64)),
            ];
            match outcome {
                CertifyOutcome::Certified(cert) => {
                    report.push(("outcome", Json::str("certified")));
                    report.push(("certificate", certificate_json(&cert)));
                    Ok(TaskOutcome {
                        report: Json::obj(report),
                        trace: None,
                        passed: true,
                        summary: format!("certified with factor {:.6}", cert.gamma),
                    })
                }
                CertifyOutcome::Refuted(v) => {
                    report.push(("outcome", Json::str("refuted")));
                    report.push(("violation", violation_json(&v)));
                    Ok(TaskOutcome {
                        report: Json::obj(report),
                        trace: None,
                        passed: false,
                        summary: format!("refuted: {} ({:.3e})", v.kind, v.magnitude),
                    })
                }
            }
        }
        TaskConfig::Iterate { operator, fixed_set, start, steps, gamma, samples } => {
            let op = get_operator(scenario, operator)?;
            let target = get_set(scenario, fixed_set)?;
            let x0 = vector(start, dim, "start")?;
            if *steps == 0 {
                return Err(CliError::Validation("step count must be positive".into()));
            }
            let cert = match gamma {
                Some(g) => BamCertificate::new(target.clone(), *g, Provenance::Empirical)?,
                None => {
                    let spec = samples
                        .clone()
                        .unwrap_or_else(SamplesConfig::standard)
                        .build(dim, seed_override)?;
                    match certify_empirical(op, target, &spec)? {
                        CertifyOutcome::Certified(cert) => cert,
                        CertifyOutcome::Refuted(v) => {
                            let report = vec![
                                ("operator", Json::str(operator.as_str())),
                                ("outcome", Json::str("refuted")),
                                ("violation", violation_json(&v)),
                            ];
                            return Ok(TaskOutcome {
                                report: Json::obj(report),
                                trace: None,
                                passed: false,
                                summary: format!(
                                    "refuted before iterating: {} ({:.3e})",
                                    v.kind, v.magnitude
                                ),
                            });
                        }
                    }
                }
            };
            let trace = bam::iterate(op, &cert, &x0, *steps)?;
            let worst_ratio =
                trace.bound_ratios.iter().cloned().fold(0.0_f64, f64::max);
            let within = worst_ratio <= 1.0 + 1e-9;
            let report = vec![
                ("operator", Json::str(operator.as_str())),
                ("certificate", certificate_json(&cert)),
                ("start", Json::vector(&x0)),
                ("steps", Json::Int(*steps as i64)),
                ("initial_error", Json::Num(trace.errors[0])),
                ("final_error", Json::Num(*trace.errors.last().unwrap())),
                ("worst_bound_ratio", Json::Num(worst_ratio)),
                ("within_envelope", Json::Bool(within)),
            ];
            Ok(TaskOutcome {
                report: Json::obj(report),
                trace: Some(trace_csv(&trace)),
                passed: within,
                summary: if within {
                    format!("{steps} steps, final error {:.3e}", trace.errors.last().unwrap())
                } else {
                    format!("envelope breached: worst ratio {worst_ratio:.6}")
                },
            })
        }
        TaskConfig::Rate { subspaces, suite } => {
            let subs = affine_refs(subspaces, &scenario.sets)?;
            match suite {
                Some(kind) => {
                    let cert = crm_certificate(&subs, (*kind).into())?;
                    let report = vec![
                        ("suite", Json::str(format!("{:?}", *kind))),
                        ("certificate", certificate_json(&cert)),
                    ];
                    Ok(TaskOutcome {
                        report: Json::obj(report),
                        trace: None,
                        passed: true,
                        summary: format!("suite rate {:.12}", cert.gamma),
                    })
                }
                None => {
                    let pars: Vec<_> = subs.iter().map(|s| s.par().clone()).collect();
                    let rate = map_rate(&pars)?;
                    Ok(TaskOutcome {
                        report: Json::obj(vec![("rate", Json::Num(rate))]),
                        trace: None,
                        passed: true,
                        summary: format!("projection product rate {rate:.12}"),
                    })
                }
            }
        }
        TaskConfig::Compose { sets, gammas } => {
            let certs = stated_certificates(scenario, sets, gammas)?;
            let subs = certs
                .iter()
                .map(|c| c.affine_fixed_set())
                .collect::<crate::Result<Vec<_>>>()?;
            let (cert, steps) = bam::compose_chain(&certs, &subs)?;
            let step_rows = steps
                .iter()
                .map(|s| {
                    Json::obj(vec![
                        ("r", Json::Num(s.r)),
                        ("s", Json::Num(s.s)),
                        ("chosen", Json::Num(s.chosen)),
                    ])
                })
                .collect();
            let report = vec![
                ("sets", Json::Arr(sets.iter().map(|s| Json::str(s.as_str())).collect())),
                ("certificate", certificate_json(&cert)),
                ("steps", Json::Arr(step_rows)),
            ];
            Ok(TaskOutcome {
                report: Json::obj(report),
                trace: None,
                passed: true,
                summary: format!("composition factor {:.12}", cert.gamma),
            })
        }
        TaskConfig::Combine { sets, weights, gammas } => {
            let certs = stated_certificates(scenario, sets, gammas)?;
            let product = ProductSpaceSpec::new(weights.clone(), dim)?;
            let cert = bam::combine_n_product(&certs, &product)?;
            let report = vec![
                ("sets", Json::Arr(sets.iter().map(|s| Json::str(s.as_str())).collect())),
                ("weights", Json::Arr(weights.iter().map(|&w| Json::Num(w)).collect())),
                ("certificate", certificate_json(&cert)),
            ];
            Ok(TaskOutcome {
                report: Json::obj(report),
                trace: None,
                passed: true,
                summary: format!("combination factor {:.12}", cert.gamma),
            })
        }
    }
}
