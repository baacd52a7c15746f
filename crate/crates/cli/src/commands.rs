//! Command implementations. Each writes its report to `out` and returns
//! whether the run counts as a success for the exit status.

use std::io::Write;

use moreau_pi::compare::{compare, Comparison};
use moreau_pi::hysteresis::{EvalMode, LoadingCurve, Signal};
use moreau_pi::network::{ConfigurationGeometry, SpringNetwork};
use moreau_pi::reducibility::{check_reducibility, effective_pi_curves, ReducibilityReport};
use moreau_pi::sweep::{
    default_max_dg, simulate, ProjectionConfig, Projector, Sample, SimulationConfig,
};
use moreau_pi::trace::{trace_loading_polyline, PolylineTrace, TraceConfig};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub dt_max: Option<f64>,
    pub tol: f64,
    pub projector: Projector,
}

impl SolverOptions {
    fn config(&self, geom: &ConfigurationGeometry) -> Result<SimulationConfig, CliError> {
        let max_dg = self.dt_max.unwrap_or_else(|| default_max_dg(geom));
        if !(max_dg > 0.0 && max_dg.is_finite()) {
            return Err(CliError::Parse(format!(
                "--dt-max: must be positive, got {max_dg}"
            )));
        }
        if !(self.tol > 0.0) {
            return Err(CliError::Parse(format!(
                "--tol: must be positive, got {}",
                self.tol
            )));
        }
        Ok(SimulationConfig {
            max_dg,
            projection: ProjectionConfig {
                projector: self.projector,
                tol: self.tol,
                ..Default::default()
            },
        })
    }
}

/// Column labels `i_j`; repeated pairs get `#2`, `#3`, ... appended.
pub fn spring_labels(net: &SpringNetwork) -> Vec<String> {
    let mut seen: Vec<String> = Vec::new();
    net.springs()
        .iter()
        .map(|s| {
            let base = s.label();
            let count = seen.iter().filter(|l| **l == base).count();
            seen.push(base.clone());
            if count == 0 {
                base
            } else {
                format!("{base}#{}", count + 1)
            }
        })
        .collect()
}

fn join(values: impl IntoIterator<Item = f64>) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn run_simulate(
    net: &SpringNetwork,
    signal: &Signal,
    opts: &SolverOptions,
    json_out: bool,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let geom = ConfigurationGeometry::build(net)?;
    let cfg = opts.config(&geom)?;
    let samples = simulate(net, &geom, signal, &cfg)?;
    let labels = spring_labels(net);
    if json_out {
        let rows: Vec<Value> = samples.iter().map(sample_json).collect();
        let doc = json!({ "springs": labels, "max_dg": cfg.max_dg, "samples": rows });
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).expect("plain values")
        )
        .map_err(io)?;
        return Ok(());
    }
    let header: Vec<String> = labels.iter().map(|l| format!("sigma_{l}")).collect();
    writeln!(out, "t,g,{},R", header.join(",")).map_err(io)?;
    for s in &samples {
        writeln!(
            out,
            "{},{},{},{}",
            s.t,
            s.g,
            join(s.sigma.iter().copied()),
            s.reaction
        )
        .map_err(io)?;
    }
    Ok(())
}

fn sample_json(s: &Sample) -> Value {
    json!({ "t": s.t, "g": s.g, "sigma": s.sigma, "R": s.reaction })
}

fn curve_json(c: &LoadingCurve) -> Value {
    json!({ "points": c.points(), "tail_slope": c.tail_slope() })
}

fn curve_text(c: &LoadingCurve) -> String {
    let pts: Vec<String> = c
        .points()
        .iter()
        .map(|(x, y)| format!("({x}, {y})"))
        .collect();
    format!("{} tail {}", pts.join(" "), c.tail_slope())
}

fn report_json(report: &ReducibilityReport) -> Value {
    let witnesses: Vec<Value> = report
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "condition": w.condition.name(),
                "vertex": w.vertex,
                "coordinate": w.coordinate,
                "margin": w.margin,
                "detail": w.detail,
            })
        })
        .collect();
    json!({
        "nested_faces": report.nested_faces,
        "unit_dim_drops": report.unit_dim_drops,
        "interior_vertices": report.interior_vertices,
        "omega_contained": report.omega_contained,
        "invertible": report.invertible,
        "overall": report.overall(),
        "witnesses": witnesses,
    })
}

fn trace_for(geom: &ConfigurationGeometry) -> Result<PolylineTrace, CliError> {
    Ok(trace_loading_polyline(geom, &TraceConfig::default())?)
}

/// Returns the overall verdict of the check.
pub fn run_check(
    net: &SpringNetwork,
    tol: f64,
    json_out: bool,
    out: &mut impl Write,
) -> Result<bool, CliError> {
    let geom = ConfigurationGeometry::build(net)?;
    let trace = trace_for(&geom)?;
    let report = check_reducibility(&geom, &trace, tol);
    let eff = effective_pi_curves(net, &geom, &trace)?;
    let labels = spring_labels(net);
    let overall = report.overall();

    if json_out {
        let curves: serde_json::Map<String, Value> = labels
            .iter()
            .zip(&eff.springs)
            .map(|(l, c)| (l.clone(), curve_json(c)))
            .collect();
        let doc = json!({
            "trace": {
                "links": trace.link_count(),
                "saturated": trace.saturated(),
                "distances": trace.distances(),
                "points": trace.points(),
            },
            "report": report_json(&report),
            "equivalent": overall,
            "effective_curves": curves,
            "reaction_curve": curve_json(&eff.reaction),
        });
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).expect("plain values")
        )
        .map_err(io)?;
        return Ok(overall);
    }

    writeln!(out, "links: {}", trace.link_count()).map_err(io)?;
    writeln!(out, "saturated: {}", trace.saturated()).map_err(io)?;
    for (k, (d, b)) in trace.distances().iter().zip(trace.points()).enumerate() {
        writeln!(
            out,
            "vertex {k}: d = {d}, B = [{}]",
            join(b.iter().copied())
        )
        .map_err(io)?;
    }
    for (name, flag) in [
        ("nested_faces", report.nested_faces),
        ("unit_dim_drops", report.unit_dim_drops),
        ("interior_vertices", report.interior_vertices),
        ("omega_contained", report.omega_contained),
        ("invertible", report.invertible),
        ("overall", overall),
    ] {
        writeln!(out, "{name}: {flag}").map_err(io)?;
    }
    for w in &report.witnesses {
        let coord = w
            .coordinate
            .map(|i| labels[i].clone())
            .unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "witness: {} at vertex {}, spring {coord}, margin {}: {}",
            w.condition.name(),
            w.vertex,
            w.margin,
            w.detail
        )
        .map_err(io)?;
    }
    if !overall {
        writeln!(
            out,
            "warning: the curves below do not describe the network response"
        )
        .map_err(io)?;
    }
    writeln!(out, "effective curves:").map_err(io)?;
    for (l, c) in labels.iter().zip(&eff.springs) {
        writeln!(out, "  {l}: {}", curve_text(c)).map_err(io)?;
    }
    writeln!(out, "reaction curve: {}", curve_text(&eff.reaction)).map_err(io)?;
    Ok(overall)
}

pub fn run_compare(
    net: &SpringNetwork,
    signal: &Signal,
    opts: &SolverOptions,
    allow_beyond_saturation: bool,
    json_out: bool,
    out: &mut impl Write,
    summary: &mut impl Write,
) -> Result<Comparison, CliError> {
    let geom = ConfigurationGeometry::build(net)?;
    let trace = trace_for(&geom)?;
    let cfg = opts.config(&geom)?;
    let mode = if allow_beyond_saturation {
        EvalMode::Extend
    } else {
        EvalMode::Strict
    };
    let result = compare(net, &geom, &trace, signal, &cfg, mode)?;
    if json_out {
        let rows: Vec<Value> = result
            .points
            .iter()
            .map(|p| json!({ "t": p.t, "g": p.g, "discrepancy": p.discrepancy }))
            .collect();
        let doc = json!({ "max": result.max, "max_dg": result.max_dg, "points": rows });
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&doc).expect("plain values")
        )
        .map_err(io)?;
    } else {
        writeln!(out, "t,g,discrepancy").map_err(io)?;
        for p in &result.points {
            writeln!(out, "{},{},{}", p.t, p.g, p.discrepancy).map_err(io)?;
        }
    }
    if mode == EvalMode::Extend && signal.max_abs() > trace.length() {
        writeln!(
            summary,
            "warning: input exceeds the saturation length {}; prediction extended flat",
            trace.length()
        )
        .map_err(io)?;
    }
    writeln!(
        summary,
        "max discrepancy {} with max |dg| {}",
        result.max, result.max_dg
    )
    .map_err(io)?;
    Ok(result)
}
