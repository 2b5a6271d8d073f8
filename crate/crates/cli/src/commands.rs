use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use flate2::write::GzEncoder;
use flate2::Compression;
use gridcable::cabling::construction_range;
use gridcable::homology::{graded_snf, PivotStrategy};
use gridcable::invariants::{
    eta_vanishes, tau as tau_of, theorem1_check, theta_hat_vanishes, theta_hat_vanishes_u_image, verify_chain_map,
    verify_local_identity, verify_splitting, CableInstance, ThetaVerdict,
};
use gridcable::{build_cable, build_fully_collapsed, build_pc, build_tilde, plan_for_q, GridDiagram, Limits};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::record::sha256_hex;
use crate::{CableArgs, Claim, ComplexKind, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerdictFalse,
}

/// What a command produced, before timings are attached.
pub struct Outcome {
    pub command: &'static str,
    pub input_digest: String,
    pub parameters: Value,
    pub verdicts: Value,
    /// Whether stdout carries a `timings` field.
    pub timed: bool,
    pub status: Status,
}

impl Outcome {
    fn new(command: &'static str, d: &GridDiagram, parameters: Value, verdicts: Value) -> Self {
        Outcome {
            command,
            input_digest: sha256_hex(d.to_text().as_bytes()),
            parameters,
            verdicts,
            timed: false,
            status: Status::Ok,
        }
    }
}

fn read_grid(path: &Path) -> Result<GridDiagram> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    GridDiagram::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn theta_json(v: &ThetaVerdict, with_witness: bool) -> Value {
    let mut j = json!({
        "vanishes": v.vanishes,
        "grading": v.grading,
        "sources": v.sources,
        "targets": v.targets,
    });
    if with_witness {
        if let Some(w) = &v.witness {
            j["witness"] = json!(w);
        }
    }
    j
}

pub fn validate(path: &Path) -> Result<Outcome> {
    let d = read_grid(path)?;
    let verdicts = json!({ "valid": true, "n": d.n(), "components": d.components().count });
    Ok(Outcome::new("validate", &d, json!({}), verdicts))
}

pub fn invariants(path: &Path) -> Result<Outcome> {
    let d = read_grid(path)?;
    Ok(Outcome::new("invariants", &d, json!({}), serde_json::to_value(d.classical_invariants())?))
}

fn instance(d: &GridDiagram, args: &CableArgs) -> Result<(CableInstance, gridcable::CablePlan)> {
    let q = args.q.unwrap_or_else(|| construction_range(d, args.p).0);
    let plan = plan_for_q(d, args.p, q, args.mode.into())?;
    Ok((CableInstance::new(d, &plan)?, plan))
}

fn cable_parameters(args: &CableArgs, q: i64) -> Value {
    json!({ "p": args.p, "q": q, "mode": value_name(args.mode) })
}

fn value_name(v: impl ValueEnum) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_owned()
}

pub fn cable(path: &Path, args: &CableArgs, out: &Path, sidecar: Option<&Path>) -> Result<Outcome> {
    let d = read_grid(path)?;
    let (inst, plan) = instance(&d, args)?;
    debug_assert_eq!(build_cable(&d, &plan)?, inst.cable);
    let sidecar: PathBuf = sidecar.map(Path::to_path_buf).unwrap_or_else(|| out.with_extension("json"));
    if sidecar == out {
        bail!("sidecar path equals the grid output path {}", out.display());
    }
    std::fs::write(out, inst.cable.to_text()).with_context(|| format!("writing {}", out.display()))?;
    let stabilizations: Vec<Value> =
        plan.pre_stabilizations.iter().map(|(row, ty)| json!({ "row": row, "type": ty.to_string() })).collect();
    let side = json!({ "p": inst.p, "q": inst.q, "plan": plan, "stabilizations": stabilizations });
    std::fs::write(&sidecar, serde_json::to_string_pretty(&side)? + "\n")
        .with_context(|| format!("writing {}", sidecar.display()))?;
    let verdicts = json!({
        "grid": out.display().to_string(),
        "sidecar": sidecar.display().to_string(),
        "n": inst.cable.n(),
        "components": inst.cable.components().count,
        "q": inst.q,
        "invariants": inst.cable.classical_invariants(),
    });
    Ok(Outcome::new("cable", &d, cable_parameters(args, inst.q), verdicts))
}

pub fn theta(path: &Path, cross_check: bool, limits: &Limits) -> Result<Outcome> {
    let d = read_grid(path)?;
    let v = theta_hat_vanishes(&d, limits)?;
    let mut verdicts = theta_json(&v, true);
    if cross_check {
        let u = theta_hat_vanishes_u_image(&d, limits)?;
        if u != v.vanishes {
            bail!("slice and U-image decisions disagree ({} vs {u})", v.vanishes);
        }
        verdicts["u_image_vanishes"] = json!(u);
    }
    Ok(Outcome::new("theta", &d, json!({ "cross_check": cross_check }), verdicts))
}

pub fn eta(path: &Path, limits: &Limits) -> Result<Outcome> {
    let d = read_grid(path)?;
    Ok(Outcome::new("eta", &d, json!({}), serde_json::to_value(eta_vanishes(&d, limits)?)?))
}

pub fn tau(path: &Path, limits: &Limits) -> Result<Outcome> {
    let d = read_grid(path)?;
    Ok(Outcome::new("tau", &d, json!({}), json!({ "tau": tau_of(&d, limits)? })))
}

pub fn homology(
    path: &Path,
    kind: ComplexKind,
    p: usize,
    format: Format,
    out: Option<&Path>,
    limits: &Limits,
) -> Result<Outcome> {
    let d = read_grid(path)?;
    let c = match kind {
        ComplexKind::Full => build_fully_collapsed(&d, limits)?,
        ComplexKind::Pc => build_pc(&d, p, limits)?,
        ComplexKind::Tilde => build_tilde(&d, limits)?,
    };
    let mut parameters = json!({ "complex": value_name(kind), "format": value_name(format) });
    if kind == ComplexKind::Pc {
        parameters["p"] = json!(p);
    }
    let verdicts = match format {
        Format::Json => {
            let h = graded_snf(&c, PivotStrategy::ColumnOrder).normalized();
            json!({ "free": h.free, "torsion": h.torsion })
        }
        Format::Gzip => {
            let out = out.context("--out is required for gzip dumps")?;
            let mut dump = Vec::new();
            c.dump(&mut dump)?;
            let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
            let mut gz = GzEncoder::new(BufWriter::new(file), Compression::default());
            gz.write_all(&dump)?;
            gz.finish()?.flush()?;
            json!({
                "out": out.display().to_string(),
                "generators": c.len(),
                "entries": c.entry_count(),
                "dump_sha256": sha256_hex(&dump),
            })
        }
    };
    Ok(Outcome::new("homology", &d, parameters, verdicts))
}

pub fn verify(claim: Claim, path: &Path, args: &CableArgs, limits: &Limits) -> Result<Outcome> {
    let d = read_grid(path)?;
    let (inst, _) = instance(&d, args)?;
    let (verdict, report, witness) = match claim {
        Claim::ChainMap => {
            let r = verify_chain_map(&inst, limits)?;
            (r.holds(&inst), serde_json::to_value(&r)?, None)
        }
        Claim::Splitting => {
            let r = verify_splitting(&inst, limits)?;
            let w = json!({ "deficits": r.deficits, "free_independent": r.free_independent });
            (r.holds(), serde_json::to_value(&r)?, Some(w))
        }
        Claim::Identity3 => {
            let reports = inst
                .special_points()
                .into_iter()
                .map(|c| verify_local_identity(&inst.cable, c, limits))
                .collect::<Result<Vec<_>, _>>()?;
            let failing: Vec<_> = reports.iter().filter(|r| !r.holds()).collect();
            let w = failing.first().map(|r| json!(r));
            (failing.is_empty(), json!(reports), w)
        }
        Claim::Theorem1 => {
            let r = theorem1_check(&inst, limits)?;
            let report = json!({ "companion": theta_json(&r.companion, false), "cable": theta_json(&r.cable, false) });
            (r.agree(), report, None)
        }
    };
    let mut verdicts = json!({
        "claim": value_name(claim),
        "instance": {
            "p": inst.p,
            "q": inst.q,
            "companion_n": inst.companion.n(),
            "cable_n": inst.cable.n(),
            "cable_components": inst.cable.components().count,
        },
        "verdict": verdict,
        "report": report,
    });
    if !verdict {
        if let Some(w) = witness {
            verdicts["witness"] = w;
        }
    }
    let mut outcome = Outcome::new("verify", &d, cable_parameters(args, inst.q), verdicts);
    outcome.timed = true;
    outcome.status = if verdict { Status::Ok } else { Status::VerdictFalse };
    Ok(outcome)
}

pub fn corpus_run_all(dir: &Path, limits: &Limits) -> Result<Outcome> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading corpus directory {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "grid"));
    paths.sort();
    let grids = paths
        .iter()
        .map(|p| Ok((p.file_stem().unwrap_or_default().to_string_lossy().into_owned(), read_grid(p)?)))
        .collect::<Result<Vec<_>>>()?;

    let entries = grids.par_iter().map(|(name, d)| corpus_entry(name, d, limits)).collect::<Result<Vec<_>>>()?;
    let mut canonical = String::new();
    for (name, d) in &grids {
        canonical.push_str(&format!("# {name}\n{}", d.to_text()));
    }
    Ok(Outcome {
        command: "corpus run-all",
        input_digest: sha256_hex(canonical.as_bytes()),
        parameters: json!({ "grids": grids.len() }),
        verdicts: json!(entries),
        timed: false,
        status: Status::Ok,
    })
}

fn corpus_entry(name: &str, d: &GridDiagram, limits: &Limits) -> Result<Value> {
    let components = d.components().count;
    let mut e = json!({
        "name": name,
        "n": d.n(),
        "components": components,
        "invariants": d.classical_invariants(),
    });
    if d.n() <= limits.enumeration {
        e["theta_vanishes"] = json!(theta_hat_vanishes(d, limits)?.vanishes);
    }
    if d.n() <= limits.materialization.min(limits.enumeration) {
        e["eta_vanishes"] = json!(eta_vanishes(d, limits)?.vanishes);
        if components == 1 {
            e["tau"] = json!(tau_of(d, limits)?);
        }
        let h = graded_snf(&build_fully_collapsed(d, limits)?, PivotStrategy::ColumnOrder);
        e["free_rank"] = json!(h.free_rank());
        e["torsion_summands"] = json!(h.torsion.len());
    }
    Ok(e)
}
