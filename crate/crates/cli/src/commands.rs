use evtlab_core::export::{Cell, Table, ToTable};
use evtlab_core::geometric::{frac_log_search, oscillation_scan};
use evtlab_core::linear_evt::{
    classify_type, default_uv_pairs, dehaan_test, estimate_rho, limit_cdf, normalized_maxima,
    norming_constants,
};
use evtlab_core::maxima::MaxLaw;
use evtlab_core::nonlinear_evt::{convergence_diagnostic, QuantileNormalizer};
use evtlab_core::stats::{ks_one_sample, EmpiricalCdf};
use evtlab_core::{
    dist, CauchyCriterion, Distribution, EvtError, GeometricParams, HnVariant, RandomStream,
    Significance,
};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::output::{Document, Verdict};
use crate::{Command, Failure};

/// Subsample levels for the limit-law comparison table.
const LIMIT_TABLE_LEVELS: usize = 99;

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("config literals are objects"),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

fn samples_table(values: &[f64]) -> Table {
    let mut t = Table::new(&["i", "value"]);
    for (i, &v) in values.iter().enumerate() {
        t.push(vec![Cell::UInt(i as u64), Cell::Float(v)]);
    }
    t
}

fn doc(command: &'static str, seed: u64, config: Value) -> Document {
    Document {
        command,
        seed,
        config: object(config),
        summary: Map::new(),
        report: Value::Null,
        table: Table::default(),
        verdict: Verdict::Positive,
    }
}

/// Malformed specs are usage errors; invalid parameters are domain errors.
fn parse_dist(spec: &str) -> Result<Distribution, Failure> {
    spec.parse().map_err(|e| match e {
        EvtError::Parse { .. } => Failure::Usage(e.to_string()),
        e => Failure::Domain(e),
    })
}

pub(crate) fn dispatch(cmd: &Command, seed: u64) -> Result<Document, Failure> {
    match cmd {
        Command::Sample { dist, count } => {
            let dist = &parse_dist(dist)?;
            let mut d = doc(
                "sample",
                seed,
                json!({"dist": dist.to_string(), "count": count}),
            );
            let values = dist::sample_quantile_transform(
                dist,
                &mut RandomStream::new(seed),
                *count as usize,
            )?;
            d.report = json!({ "samples": values });
            d.table = samples_table(&values);
            Ok(d)
        }
        Command::Max {
            dist,
            n,
            count,
            method,
        } => {
            let dist = &parse_dist(dist)?;
            let sampler = (*method).into();
            let mut d = doc(
                "max",
                seed,
                json!({"dist": dist.to_string(), "n": n, "count": count, "method": to_value(&sampler)}),
            );
            let law = MaxLaw::new(dist.clone(), *n)?;
            let values = law.sample(&mut RandomStream::new(seed), sampler, *count as usize)?;
            d.report = json!({ "samples": values });
            d.table = samples_table(&values);
            Ok(d)
        }
        Command::Dehaan {
            dist,
            eps,
            uv,
            tol,
            window,
        } => {
            let dist = &parse_dist(dist)?;
            let uv = if uv.is_empty() {
                default_uv_pairs()
            } else {
                uv.clone()
            };
            let eps = eps.points();
            let mut d = doc(
                "dehaan",
                seed,
                json!({
                    "dist": dist.to_string(),
                    "eps": eps,
                    "uv": uv.iter().map(|&(u, v)| vec![u, v]).collect::<Vec<_>>(),
                    "tol": tol,
                    "window": window,
                }),
            );
            let report = dehaan_test(dist, &eps, &uv, CauchyCriterion::new(*tol, *window)?)?;
            d.summary
                .insert("converged".into(), json!(report.converged));
            d.summary
                .insert("limit_table".into(), json!(report.limit_table));
            if !report.verdict {
                d.verdict = Verdict::Negative("de Haan ratios did not converge".into());
            }
            d.table = report.to_table();
            d.report = to_value(&report);
            Ok(d)
        }
        Command::Rho { dist, eps, w, tol } => {
            let dist = &parse_dist(dist)?;
            let eps = eps.points();
            let mut d = doc(
                "rho",
                seed,
                json!({"dist": dist.to_string(), "eps": eps, "w": w, "tol": tol}),
            );
            let est = estimate_rho(dist, &eps, *w)?;
            let class = classify_type(est.rho, *tol)?;
            d.summary.insert("rho".into(), json!(est.rho));
            d.summary.insert("type".into(), to_value(&class.family));
            d.table = est.to_table();
            d.report = json!({ "estimate": to_value(&est), "classification": to_value(&class) });
            Ok(d)
        }
        Command::Norming { dist, n } => {
            let dist = &parse_dist(dist)?;
            let ns = n.integers();
            let mut d = doc("norming", seed, json!({"dist": dist.to_string(), "n": ns}));
            let constants = ns
                .iter()
                .map(|&n| norming_constants(dist, n))
                .collect::<Result<Vec<_>, _>>()?;
            let mut t = Table::new(&["n", "a_n", "b_n"]);
            for c in &constants {
                t.push(vec![
                    Cell::UInt(c.n),
                    Cell::Float(c.a_n),
                    Cell::Float(c.b_n),
                ]);
            }
            d.table = t;
            d.report = json!({ "constants": to_value(&constants) });
            Ok(d)
        }
        Command::LimitLaw {
            dist,
            n,
            reps,
            rho,
            max_distance,
        } => {
            let dist = &parse_dist(dist)?;
            let rho = match rho {
                Some(r) => *r,
                None => {
                    estimate_rho(
                        dist,
                        &crate::range::Range {
                            start: 1e-2,
                            stop: 1e-6,
                            count: 16,
                        }
                        .points(),
                        2.0,
                    )?
                    .rho
                }
            };
            let mut d = doc(
                "limit-law",
                seed,
                json!({"dist": dist.to_string(), "n": n, "reps": reps, "rho": rho, "max_distance": max_distance}),
            );
            let (constants, z) =
                normalized_maxima(dist, *n, *reps as usize, &mut RandomStream::new(seed))?;
            let ks = ks_one_sample(&z, |x| limit_cdf(rho, x), Significance::OnePercent)?;
            let ecdf = EmpiricalCdf::new(z)?;
            let sorted = ecdf.sorted_samples();
            let mut t = Table::new(&["x", "empirical", "limit"]);
            for i in 1..=LIMIT_TABLE_LEVELS {
                let x = sorted[(i * sorted.len()) / (LIMIT_TABLE_LEVELS + 1)];
                t.push(vec![
                    Cell::Float(x),
                    Cell::Float(ecdf.eval(x)),
                    Cell::Float(limit_cdf(rho, x)),
                ]);
            }
            d.summary.insert("ks_statistic".into(), json!(ks.statistic));
            d.summary
                .insert("limit_at_zero".into(), json!(limit_cdf(rho, 0.0)));
            if ks.statistic.is_nan() || ks.statistic > *max_distance {
                d.verdict = Verdict::Negative(format!(
                    "KS distance {} exceeds {max_distance}",
                    ks.statistic
                ));
            }
            d.table = t;
            d.report =
                json!({ "constants": to_value(&constants), "rho": rho, "ks": to_value(&ks) });
            Ok(d)
        }
        Command::Nonlinear {
            dist,
            base,
            n,
            x,
            variant,
            tol,
            window,
        } => {
            let dist = &parse_dist(dist)?;
            let base = &parse_dist(base)?;
            let variant: HnVariant = (*variant).into();
            let (ns, xs) = (n.integers(), x.points());
            let mut d = doc(
                "nonlinear",
                seed,
                json!({
                    "dist": dist.to_string(),
                    "base": base.to_string(),
                    "n": ns,
                    "x": xs,
                    "variant": variant.name(),
                    "tol": tol,
                    "window": window,
                }),
            );
            let g = QuantileNormalizer::new(dist.clone(), base.clone())?;
            let report = convergence_diagnostic(
                &g,
                base,
                &xs,
                &ns,
                variant,
                CauchyCriterion::new(*tol, *window)?,
            )?;
            d.summary
                .insert("converged".into(), json!(report.converged));
            d.summary
                .insert("nondegenerate".into(), json!(report.nondegenerate));
            if !report.verdict {
                d.verdict = Verdict::Negative(match report.nondegenerate {
                    Some(false) => "limit is degenerate".into(),
                    _ => "normalized quantiles did not converge".into(),
                });
            }
            d.table = report.to_table();
            d.report = to_value(&report);
            Ok(d)
        }
        Command::GeomOscillate { p, q, n, c, tol } => {
            let ns = n.integers();
            let mut d = doc(
                "geom-oscillate",
                seed,
                json!({"p": p, "q": q, "n": ns, "c": c, "tol": tol}),
            );
            let params = GeometricParams::new(*p)?;
            let report = oscillation_scan(&params, *q, &ns, c)?;
            let osc = report.oscillation();
            d.summary
                .insert("lim_inf_est".into(), json!(report.lim_inf_est));
            d.summary
                .insert("lim_sup_est".into(), json!(report.lim_sup_est));
            d.summary.insert("oscillation".into(), json!(osc));
            if osc > *tol {
                d.verdict = Verdict::Negative(format!("probe oscillates by {osc}"));
            }
            d.table = report.to_table();
            d.report = to_value(&report);
            Ok(d)
        }
        Command::GeomDensity {
            theta,
            p,
            x,
            y,
            n_max,
        } => {
            let theta = match (theta, p) {
                (Some(t), _) => *t,
                (None, Some(p)) => GeometricParams::new(*p)?.theta(),
                (None, None) => unreachable!("clap requires one of --theta, --p"),
            };
            let mut d = doc(
                "geom-density",
                seed,
                json!({"theta": theta, "x": x, "y": y, "n_max": n_max}),
            );
            let found = frac_log_search(theta, *x, *y, *n_max)?;
            d.summary.insert("n".into(), json!(found.n));
            d.summary.insert("frac".into(), json!(found.frac));
            let mut t = Table::new(&["n", "frac", "sufficient_horizon", "horizon_warning"]);
            t.push(vec![
                Cell::UInt(found.n),
                Cell::Float(found.frac),
                Cell::UInt(found.sufficient_horizon),
                Cell::Text(found.horizon_warning.to_string()),
            ]);
            d.table = t;
            d.report = to_value(&found);
            Ok(d)
        }
    }
}
