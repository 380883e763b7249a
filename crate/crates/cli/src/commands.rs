use anyhow::{bail, Result};
use modulikit_core::connection::{
    check_stabilizer_sums, check_torus_multirank, gauge, involution, is_hermitian, is_pure, validate_covariance,
    ConnectionData, CovarianceReport, FrameTuple,
};
use modulikit_core::jordan::spectral;
use modulikit_core::quiver::{default_max_len, equivalence_certificate, invariants, moment_map, Certificate};
use modulikit_core::selftest::{self, Fault, SelftestConfig};
use modulikit_core::weights::{chains, commutant_dim, decompose};
use modulikit_core::{scale_of, Error};
use serde_json::{json, Value};

use crate::report::Report;
use crate::schema::{self, complex_json, connection_json, matrix_json};
use crate::{Cli, Command, FaultArg};

pub struct Outcome {
    pub report: Report,
    pub ok: bool,
    /// One line for humans, written to stderr.
    pub summary: String,
}

fn inputs(cli: &Cli, want: usize) -> Result<Vec<Value>> {
    if cli.input.len() != want {
        bail!("expected {want} --input file(s), got {}", cli.input.len());
    }
    cli.input.iter().map(|p| schema::read_value(p)).collect()
}

fn one_input(cli: &Cli) -> Result<Value> {
    Ok(inputs(cli, 1)?.remove(0))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol;
    match &cli.command {
        Command::Decompose => decompose_cmd(one_input(cli)?),
        Command::Validate { samples } => validate_cmd(one_input(cli)?, *samples, tol),
        Command::Pure => pure_cmd(one_input(cli)?, tol),
        Command::Involute => {
            let c = schema::connection(one_input(cli)?)?;
            let report = Report::new("involute", connection_json(&involution(&c)));
            Ok(Outcome { report, ok: true, summary: "involute: done".into() })
        }
        Command::Hermitian => hermitian_cmd(one_input(cli)?, tol),
        Command::Gauge => gauge_cmd(inputs(cli, 2)?, tol),
        Command::Invariants => invariants_cmd(cli),
        Command::Equiv => equiv_cmd(cli),
        Command::Moment => moment_cmd(cli),
        Command::JordanSpectral => {
            let sd = spectral(&schema::matrix(one_input(cli)?)?);
            let result = json!({ "t": sd.t, "u": matrix_json(&sd.u), "v": matrix_json(&sd.v) });
            let summary = format!("jordan-spectral: rank {} triple", sd.t.len());
            Ok(Outcome { report: Report::new("jordan-spectral", result), ok: true, summary })
        }
        Command::Selftest { samples, max_dim, inject_fault } => {
            if !cli.input.is_empty() {
                bail!("selftest takes no --input");
            }
            let cfg = SelftestConfig {
                seed: cli.seed,
                samples: *samples,
                max_dim: *max_dim as usize,
                fault: inject_fault.map(|FaultArg::InvolutionSign| Fault::InvolutionSign),
            };
            Ok(selftest_cmd(&cfg))
        }
    }
}

fn decompose_cmd(v: Value) -> Result<Outcome> {
    let w = schema::parse::<schema::WeightsJson>(v, "weight vector")?.into_data()?;
    let d = decompose(&w);
    let blocks: Vec<Value> = d
        .blocks()
        .iter()
        .map(|b| json!({ "weight": b.weight, "indices": b.indices, "dim": b.dim() }))
        .collect();
    let chain_list = match chains(&d) {
        Ok(ch) => Value::Array(
            ch.chains
                .iter()
                .map(|c| json!({ "base": c.base, "dims": c.dims, "blocks": c.blocks }))
                .collect(),
        ),
        Err(Error::RankNotOne { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let summary = match &chain_list {
        Value::Array(a) => format!("decompose: {} blocks, {} chains", blocks.len(), a.len()),
        _ => format!("decompose: {} blocks", blocks.len()),
    };
    let result = json!({
        "rank": d.rank(),
        "dim": d.dim(),
        "blocks": blocks,
        "chains": chain_list,
        "commutant_dim": commutant_dim(&d),
    });
    Ok(Outcome { report: Report::new("decompose", result), ok: true, summary })
}

fn covariance_json(r: &CovarianceReport) -> (Value, Vec<Value>) {
    let mut violations: Vec<Value> = r
        .forbidden
        .iter()
        .map(|f| {
            json!({
                "kind": "forbidden_entry",
                "family": f.family.name(),
                "index": f.index,
                "row": f.row,
                "col": f.col,
                "modulus": f.modulus,
            })
        })
        .collect();
    if !r.sampled_ok() {
        violations.push(json!({ "kind": "sampled_covariance", "worst": r.worst_violation }));
    }
    let result = json!({
        "passed": r.passed(),
        "structural_ok": r.structural_ok(),
        "sampled_ok": r.sampled_ok(),
        "samples": r.samples,
        "worst_violation": r.worst_violation,
    });
    (result, violations)
}

fn validate_cmd(v: Value, samples: usize, tol: f64) -> Result<Outcome> {
    if !schema::is_frame(&v) {
        let c = schema::connection(v)?;
        let r = validate_covariance(&c, samples, tol)?;
        let (result, violations) = covariance_json(&r);
        let summary = format!("validate: {}", if r.passed() { "covariant" } else { "NOT covariant" });
        let report = Report::new("validate", result).violations(violations).tol("tol", tol);
        return Ok(Outcome { report, ok: r.passed(), summary });
    }

    let input = schema::frame(v)?;
    let t = &input.tuple;
    if t.weights().is_none() && input.witnesses.is_none() {
        bail!("a frame tuple needs \"weights\" or \"witnesses\" to validate");
    }
    let mut result = serde_json::Map::new();
    let mut violations = Vec::new();
    let mut ok = true;
    if t.weights().is_some() {
        let r = check_torus_multirank(t, samples, tol)?;
        let (res, viol) = covariance_json(&r);
        ok &= r.passed();
        result.insert("torus".into(), res);
        violations.extend(viol);
    }
    if let Some(ws) = &input.witnesses {
        let r = check_stabilizer_sums(t, ws, tol)?;
        ok &= r.passed();
        result.insert("stabilizer".into(), json!({ "passed": r.passed(), "checked": r.checked }));
        violations.extend(r.violations.iter().map(|s| {
            json!({
                "kind": "stabilizer_sum",
                "witness": s.witness,
                "family": s.family.name(),
                "residual": s.residual,
            })
        }));
    }
    result.insert("passed".into(), Value::Bool(ok));
    let summary = format!("validate: {}", if ok { "covariant" } else { "NOT covariant" });
    let report = Report::new("validate", Value::Object(result)).violations(violations).tol("tol", tol);
    Ok(Outcome { report, ok, summary })
}

fn frame_or_connection(v: Value) -> Result<FrameTuple> {
    if schema::is_frame(&v) {
        Ok(schema::frame(v)?.tuple)
    } else {
        let c = schema::connection(v)?;
        Ok(FrameTuple::new(vec![c.a().clone()], vec![c.b().clone()], None)?)
    }
}

fn pure_cmd(v: Value, tol: f64) -> Result<Outcome> {
    let t = frame_or_connection(v)?;
    let r = is_pure(&t, tol);
    let witness = r.witness.as_ref().map(|w| {
        json!({ "family": w.family.name(), "i": w.i, "j": w.j, "commutator_norm": w.norm })
    });
    let violations = witness.iter().cloned().collect();
    let result = json!({ "pure": r.pure, "rank": t.rank(), "witness": witness });
    let summary = match &r.witness {
        None => "pure: true".to_owned(),
        Some(w) => format!("pure: false, {}_{} and {}_{} do not commute", w.family.name(), w.i, w.family.name(), w.j),
    };
    let report = Report::new("pure", result).violations(violations).tol("tol", tol);
    Ok(Outcome { report, ok: r.pure, summary })
}

fn hermitian_cmd(v: Value, tol: f64) -> Result<Outcome> {
    let c = schema::connection(v)?;
    let yes = is_hermitian(&c, tol);
    let defect = (c.b() + &c.a().adjoint()).norm() / scale_of(c.a().norm());
    let violations = if yes { vec![] } else { vec![json!({ "kind": "b_plus_a_adjoint", "relative_norm": defect })] };
    let report = Report::new("hermitian", json!({ "hermitian": yes, "defect": defect }))
        .violations(violations)
        .tol("tol", tol);
    Ok(Outcome { report, ok: yes, summary: format!("hermitian: {yes}") })
}

fn gauge_cmd(mut vs: Vec<Value>, tol: f64) -> Result<Outcome> {
    let h = schema::matrix(vs.pop().expect("two inputs"))?;
    let c: ConnectionData = schema::connection(vs.pop().expect("two inputs"))?;
    let moved = gauge(&c, &h, tol)?;
    let report = Report::new("gauge", connection_json(&moved)).tol("tol", tol);
    Ok(Outcome { report, ok: true, summary: "gauge: done".into() })
}

fn max_len(cli: &Cli, total_dim: usize) -> usize {
    cli.max_len.map_or_else(|| default_max_len(total_dim), |m| m as usize)
}

fn invariants_cmd(cli: &Cli) -> Result<Outcome> {
    let rep = schema::rep(one_input(cli)?)?;
    let len = max_len(cli, rep.quiver().total_dim());
    let inv = invariants(&rep, len);
    let entries: Vec<Value> = inv
        .entries
        .iter()
        .map(|(w, t)| json!({ "cycle": w.labels(rep.quiver()), "trace": complex_json(*t) }))
        .collect();
    let summary = format!("invariants: {} cycles up to length {len}", entries.len());
    let report = Report::new("invariants", json!({ "max_len": len, "invariants": entries }));
    Ok(Outcome { report, ok: true, summary })
}

fn equiv_cmd(cli: &Cli) -> Result<Outcome> {
    let mut vs = inputs(cli, 2)?;
    let r2 = schema::rep(vs.pop().expect("two inputs"))?;
    let r1 = schema::rep(vs.pop().expect("two inputs"))?;
    let len = max_len(cli, r1.quiver().total_dim());
    let cert = equivalence_certificate(&r1, &r2, len, cli.tol)?;
    let (result, violations, ok, summary) = match cert {
        Certificate::Distinct { word, first, second } => {
            let witness = json!({
                "cycle": word.labels(r1.quiver()),
                "first": complex_json(first),
                "second": complex_json(second),
            });
            let summary = format!("equiv: distinct, traces of {} differ", word.display(r1.quiver()));
            let result = json!({ "certificate": "distinct", "max_len": len, "witness": witness.clone() });
            (result, vec![witness], false, summary)
        }
        Certificate::Indistinguishable { max_len, cycles_checked } => {
            let result = json!({
                "certificate": "indistinguishable",
                "max_len": max_len,
                "cycles_checked": cycles_checked,
                "conclusive": false,
            });
            let summary = format!("equiv: indistinguishable by {cycles_checked} traces (not a proof of equivalence)");
            (result, vec![], true, summary)
        }
    };
    let report = Report::new("equiv", result).violations(violations).tol("tol", cli.tol);
    Ok(Outcome { report, ok, summary })
}

fn moment_cmd(cli: &Cli) -> Result<Outcome> {
    let rep = schema::rep(one_input(cli)?)?;
    let mu = moment_map(&rep, cli.convention.into());
    let max_abs = mu.iter().map(|m| m.max_abs()).fold(0.0, f64::max);
    let convention = match cli.convention {
        crate::Convention::Paper => "paper",
        crate::Convention::Standard => "standard",
    };
    let result = json!({
        "convention": convention,
        "mu": mu.iter().map(matrix_json).collect::<Vec<_>>(),
        "max_abs": max_abs,
    });
    let summary = format!("moment ({convention}): max |entry| {max_abs:e}");
    Ok(Outcome { report: Report::new("moment", result), ok: true, summary })
}

fn selftest_cmd(cfg: &SelftestConfig) -> Outcome {
    let r = selftest::run(cfg);
    let properties: Vec<Value> = r
        .properties
        .iter()
        .map(|p| {
            json!({
                "module": p.module,
                "name": p.name,
                "samples": p.samples,
                "worst": p.worst,
                "tol": p.tol,
                "passed": p.passed(),
            })
        })
        .collect();
    let violations = r.failures().map(|p| json!({ "property": p.name, "worst": p.worst, "tol": p.tol })).collect();
    let mut report = Report::new(
        "selftest",
        json!({
            "seed": cfg.seed,
            "samples": cfg.samples,
            "max_dim": cfg.max_dim,
            "passed": r.passed(),
            "properties": properties,
        }),
    )
    .violations(violations);
    for p in &r.properties {
        report = report.tol(p.name, p.tol);
    }
    let failed = r.failures().count();
    let summary = if failed == 0 {
        format!("selftest: all {} properties pass (seed {})", r.properties.len(), cfg.seed)
    } else {
        format!("selftest: {failed} of {} properties FAILED (seed {})", r.properties.len(), cfg.seed)
    };
    Outcome { report, ok: r.passed(), summary }
}
