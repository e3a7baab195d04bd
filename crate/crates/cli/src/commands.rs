//! One function per subcommand; each fills a [`Report`].

use cycov_core::arrangement::{params_to_json, screen, sample_generic_params};
use cycov_core::charvar::{certificate_bound, first_charvar_dim, CertificateReport, CharvarResult};
use cycov_core::combinatorics::{binomial, euler_identity, hodge_closed_forms};
use cycov_core::higgs::closed_forms::{resultants, schwartz_zippel};
use cycov_core::higgs::{
    compare_coefficients, iterated_higgs_rank, quadric_count, quadric_system, verify_basic_relations,
    verify_derived_relations, FamilyReport,
};
use cycov_core::jacobian::JacobianPresentation;
use cycov_core::weights::{dimension_obstructions, highest_weight, total_multiplicity, wedge_weights, weight_symmetry_check};
use cycov_core::{Error, Field, GenericParams, Result};
use serde_json::{json, Value};
use std::collections::BTreeMap;

use crate::config::{Command, RunConfig};
use crate::report::Report;

/// Fresh draws tried when a sampled parameter fails the certificate.
pub const CERTIFICATE_RETRIES: usize = 8;
/// Default number of random points for `resultants`.
pub const DEFAULT_EVALUATIONS: usize = 50;
/// Default table size for `euler-identity` and `rep-check`.
pub const DEFAULT_N_MAX: usize = 10;
/// Range of `n` for the `C(2n, n)` obstruction table.
pub const OBSTRUCTION_N_MAX: u64 = 30;

pub fn run(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    if let Some((n, k, r)) = cfg.shape {
        report.input("n", json!(n));
        report.input("k", json!(k));
        report.input("r", json!(r));
        report.input("field", json!(cfg.field.to_string()));
        report.input("seed", json!(cfg.seed));
        if let Some(path) = &cfg.params_file {
            report.input("params_file", json!(path.display().to_string()));
        }
    }
    match cfg.command {
        Command::HodgeNumbers => hodge_numbers(cfg, report),
        Command::VerifyRelations => verify_relations(cfg, report),
        Command::VerifyCoefficients => verify_coefficients(cfg, report),
        Command::Resultants => resultant_evaluations(cfg, report),
        Command::CharvarDim => charvar_dim(cfg, report),
        Command::CertifyGeneric => certify_generic(cfg, report),
        Command::EulerIdentity => euler_table(cfg, report),
        Command::RepCheck => rep_check(cfg, report),
    }
}

fn trial_label(t: usize) -> String {
    format!("trial{t:03}")
}

/// Draws the parameter of every trial and echoes them into the inputs.
fn draws(cfg: &RunConfig, report: &mut Report) -> Result<Vec<(u64, GenericParams)>> {
    let trials = if cfg.params_file.is_some() { 1 } else { cfg.trials.unwrap_or(1) };
    report.input("trials", json!(trials));
    let mut out = Vec::with_capacity(trials);
    for t in 0..trials {
        let seed = cfg.trial_seed(t);
        out.push((seed, cfg.params(seed)?));
    }
    let echoed: Vec<Value> = out
        .iter()
        .map(|(seed, p)| json!({"seed": seed, "params": params_to_json(p)}))
        .collect();
    report.input("draws", Value::Array(echoed));
    Ok(out)
}

fn hodge_numbers(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let (n, k, _) = cfg.shape();
    let mut h_rows = Vec::new();
    for (t, (_, params)) in draws(cfg, report)?.into_iter().enumerate() {
        let label = trial_label(t);
        let pres = JacobianPresentation::new(&params, cfg.field)?;
        let entries = report.timed(&format!("{label}/pieces"), || pres.hodge_numbers(cfg.q_max));
        for e in &entries {
            report.check(
                format!("{label}/h_{}", e.q),
                e.agrees,
                json!({"dim": e.dim, "predicted": e.predicted.to_string()}),
            );
        }
        h_rows.push(json!(entries.iter().map(|e| e.dim).collect::<Vec<_>>()));
        if cfg.higgs_ranks {
            for e in entries.iter().filter(|e| e.q >= 1) {
                let hr = report.timed(&format!("{label}/higgs_rank_{}", e.q), || iterated_higgs_rank(&pres, e.q))?;
                report.check(
                    format!("{label}/higgs_rank_{}", e.q),
                    hr.surjective && binomial(n as u64, e.q as u64)
                        * binomial(k as u64 - 1, e.q as u64)
                        == hr.rank.into(),
                    json!({"rank": hr.rank, "target_dim": hr.target_dim}),
                );
            }
        }
    }
    let closed = hodge_closed_forms(n as u64, k as u64);
    report.check(
        "signature",
        closed.signature_matches,
        json!({"p": closed.p_sig.to_string(), "q": closed.q_sig.to_string(), "total": closed.total.to_string()}),
    );
    report.result("h", Value::Array(h_rows));
    report.result("predicted", json!(closed.h.iter().map(ToString::to_string).collect::<Vec<_>>()));
    Ok(())
}

fn merge_families(acc: &mut BTreeMap<String, (usize, usize, Option<String>)>, seed: u64, reports: Vec<FamilyReport>) {
    for f in reports {
        let slot = acc.entry(f.name.clone()).or_insert((0, 0, None));
        slot.0 += f.checked;
        slot.1 += f.failed;
        if slot.2.is_none() {
            slot.2 = f.first_failure.map(|s| format!("seed {seed}: {s}"));
        }
    }
}

fn verify_relations(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let mut families = BTreeMap::new();
    for (t, (seed, params)) in draws(cfg, report)?.into_iter().enumerate() {
        let pres = JacobianPresentation::new(&params, cfg.field)?;
        let label = trial_label(t);
        let basic = report.timed(&format!("{label}/basic"), || verify_basic_relations(&pres))?;
        let derived = report.timed(&format!("{label}/derived"), || verify_derived_relations(&pres))?;
        merge_families(&mut families, seed, basic);
        merge_families(&mut families, seed, derived);
    }
    for (name, (checked, failed, first)) in families {
        report.check(
            format!("relations/{name}"),
            failed == 0 && checked > 0,
            json!({"checked": checked, "failed": failed, "first_failure": first}),
        );
    }
    Ok(())
}

fn verify_coefficients(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let (n, k, _) = cfg.shape();
    let (mut tuples, mut coefficients, mut matched, mut ambiguous) = (0, 0, 0, 0);
    let mut mismatches = Vec::new();
    let mut stray = Vec::new();
    let mut counts_ok = true;
    for (t, (seed, params)) in draws(cfg, report)?.into_iter().enumerate() {
        let pres = JacobianPresentation::new(&params, cfg.field)?;
        let label = trial_label(t);
        let rep = report.timed(&label, || -> Result<_> {
            let qs = quadric_system(&pres)?;
            counts_ok &= qs.targets.len() == quadric_count(n, k);
            compare_coefficients(&qs, &params)
        })?;
        tuples += rep.tuples;
        coefficients += rep.coefficients;
        matched += rep.matched;
        ambiguous += rep.ambiguous_values;
        for m in &rep.mismatches {
            mismatches.push(json!({
                "seed": seed,
                "tuple": [m.tuple.0, m.tuple.1, m.tuple.2, m.tuple.3],
                "slot": m.slot,
                "computed": m.computed.to_string(),
                "displayed": m.displayed.as_ref().map(ToString::to_string),
            }));
        }
        for (tuple, (u, v), value) in &rep.stray {
            stray.push(json!({
                "seed": seed,
                "tuple": [tuple.0, tuple.1, tuple.2, tuple.3],
                "variables": [u, v],
                "value": value.to_string(),
            }));
        }
    }
    report.check("quadric_count", counts_ok, json!({"expected": quadric_count(n, k)}));
    report.check(
        "coefficients",
        mismatches.is_empty() && stray.is_empty() && matched == coefficients,
        json!({
            "tuples": tuples,
            "coefficients": coefficients,
            "matched": matched,
            "ambiguous_values": ambiguous,
            "mismatches": mismatches,
            "stray": stray,
        }),
    );
    Ok(())
}

fn resultant_evaluations(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let (n, k, r) = cfg.shape();
    if !matches!(cfg.field, Field::Prime(_)) {
        return Err(Error::UnsupportedField("random evaluation needs --field fp".into()));
    }
    let trials = cfg.trials.unwrap_or(DEFAULT_EVALUATIONS);
    report.input("trials", json!(trials));
    let records = report.timed("evaluations", || schwartz_zippel(n, k, r, cfg.field, trials, cfg.seed))?;
    for rec in &records {
        report.check(
            format!("nonvanishing/{}", rec.name),
            rec.certified(),
            json!({"trials": rec.trials, "nonzero": rec.nonzero, "skipped": rec.skipped}),
        );
    }
    // values at the screened draw for the same seed
    let params = cfg.params(cfg.seed)?;
    report.input("params", params_to_json(&params));
    let values: BTreeMap<String, String> =
        resultants(&params)?.iter().map(|e| (e.name(), e.value.to_string())).collect();
    report.result("values", json!(values));
    report.result("count", json!(records.len()));
    Ok(())
}

fn certificate_json(rep: &CertificateReport) -> Value {
    let steps: Vec<Value> = rep
        .steps
        .iter()
        .map(|s| {
            json!({
                "index": s.index,
                "case": s.case.to_string(),
                "added": s.added,
                "polynomials": s.polynomials.iter().map(|t| [t.0, t.1, t.2, t.3]).collect::<Vec<_>>(),
                "values": s.values.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "support_ok": s.support_ok,
                "passed": s.passed,
            })
        })
        .collect();
    json!({
        "steps": steps,
        "cone_bound": rep.cone_bound,
        "projective_bound": rep.projective_bound,
    })
}

fn charvar_json(res: &CharvarResult) -> Value {
    json!({
        "backend": res.backend.to_string(),
        "exact": res.exact,
        "bound": res.bound,
        "comparison": res.comparison,
        "verdict": res.verdict.to_string(),
        "groebner": res.groebner.as_ref().map(|g| json!({
            "cone_dim": g.cone_dim,
            "independent_set": g.independent_set,
            "basis_size": g.basis_size,
            "pairs_processed": g.pairs_processed,
        })),
        "certificate": res.certificate.as_ref().map(certificate_json),
    })
}

/// Draw for attempt `a`; attempt 0 is the configured parameter.
fn attempt_params(cfg: &RunConfig, a: usize) -> Result<(u64, GenericParams)> {
    let (n, k, r) = cfg.shape();
    if a == 0 {
        return Ok((cfg.seed, cfg.params(cfg.seed)?));
    }
    let seed = cfg.seed.wrapping_add((a as u64) << 32);
    Ok((seed, sample_generic_params(n, k, r, cfg.field, seed)?))
}

fn charvar_dim(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let retries = if cfg.params_file.is_some() { 1 } else { CERTIFICATE_RETRIES };
    let mut attempts = Vec::new();
    let mut last = None;
    for a in 0..retries {
        let (seed, params) = attempt_params(cfg, a)?;
        let res = report.timed(&format!("attempt{a}"), || first_charvar_dim(&params, cfg.field, cfg.backend))?;
        let failed_step = res.certificate.as_ref().and_then(|c| c.first_failure()).map(|s| s.index);
        attempts.push(json!({"seed": seed, "params": params_to_json(&params), "failed_step": failed_step}));
        last = Some(res);
        if failed_step.is_none() {
            break;
        }
    }
    report.input("attempts", Value::Array(attempts));
    let res = last.expect("at least one attempt");
    if let Some(c) = &res.certificate {
        report.check(
            "certificate",
            c.concluded(),
            json!({"steps": c.steps.len(), "first_failure": c.first_failure().map(|s| s.index)}),
        );
    }
    if let Some(g) = &res.groebner {
        let exact = res.exact.expect("exact value with the Gröbner backend");
        report.check(
            "groebner",
            exact <= 2,
            json!({"cone_dim": g.cone_dim, "projective_dim": exact}),
        );
    }
    report.result("charvar", charvar_json(&res));
    Ok(())
}

fn certify_generic(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let retries = if cfg.params_file.is_some() { 1 } else { CERTIFICATE_RETRIES };
    let mut attempts = Vec::new();
    let mut outcome = None;
    for a in 0..retries {
        let (seed, params) = attempt_params(cfg, a)?;
        let screened = screen(&params);
        let pres = JacobianPresentation::new(&params, cfg.field)?;
        let cert = match quadric_system(&pres) {
            Ok(qs) => Some(report.timed(&format!("attempt{a}"), || certificate_bound(&qs))?),
            Err(Error::NonGeneric(_)) => None,
            Err(e) => return Err(e),
        };
        let ok = screened.is_ok() && cert.as_ref().is_some_and(CertificateReport::concluded);
        attempts.push(json!({"seed": seed, "params": params_to_json(&params), "certified": ok}));
        outcome = Some((screened, cert));
        if ok {
            break;
        }
    }
    report.input("attempts", Value::Array(attempts));
    let (screened, cert) = outcome.expect("at least one attempt");
    report.check(
        "screen",
        screened.is_ok(),
        json!({"failure": screened.err().map(|f| f.to_string())}),
    );
    report.check("product_basis", cert.is_some(), json!(null));
    if let Some(c) = &cert {
        report.check("certificate", c.concluded(), json!({"first_failure": c.first_failure().map(|s| s.index)}));
        report.result("certificate", certificate_json(c));
    }
    Ok(())
}

fn euler_table(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let n_max = cfg.n_max.unwrap_or(DEFAULT_N_MAX);
    report.input("n_max", json!(n_max));
    let mut table = Vec::new();
    for n in 0..=n_max as i64 {
        let chains: Vec<_> = (0..=n).map(|p| euler_identity(n, p)).collect();
        let bad: Vec<Value> = chains
            .iter()
            .filter(|c| !c.all_equal())
            .map(|c| json!({"p": c.p, "stages": c.mismatches()}))
            .collect();
        report.check(format!("n={n:02}"), bad.is_empty(), json!({"mismatches": bad}));
        table.push(json!({
            "n": n,
            "values": chains.iter().map(|c| c.closed_form.to_string()).collect::<Vec<_>>(),
        }));
    }
    report.result("table", Value::Array(table));
    Ok(())
}

fn rep_check(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let n_max = cfg.n_max.unwrap_or(DEFAULT_N_MAX);
    report.input("n_max", json!(n_max));
    report.input("obstruction_n_max", json!(OBSTRUCTION_N_MAX));
    for n in 1..=n_max {
        let ws = report.timed(&format!("wedge{n:02}"), || wedge_weights(n))?;
        let total = total_multiplicity(&ws);
        let expected = binomial(2 * n as u64, n as u64);
        let symmetric = weight_symmetry_check(&ws);
        let highest = highest_weight(&ws);
        let ok = expected == total.into() && symmetric && highest == Some((vec![1; n], 1));
        report.check(
            format!("wedge/n={n:02}"),
            ok,
            json!({
                "total": total,
                "symmetric": symmetric,
                "highest_weight": highest.map(|(w, m)| json!({"weight": w, "multiplicity": m})),
                "distinct_weights": ws.len(),
            }),
        );
    }
    for row in dimension_obstructions(OBSTRUCTION_N_MAX)? {
        report.check(
            format!("dimension/n={:02}", row.n),
            !row.power_of_two,
            json!({
                "dim": row.dim.to_string(),
                "odd_m": row.odd_m.map(|m| m.to_string()),
                "even_m": row.even_m.map(|m| m.to_string()),
            }),
        );
    }
    Ok(())
}
