use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use ivpp_core::biquad::{generic, lv_symbolic, GammaSeries, ENTRY_NAMES, LV_SYMBOLS};
use ivpp_core::julia::{convergence_report, fit_slope, CONVERGENCE_CSV_HEADER};
use ivpp_core::maps::{MapError, MapId};
use ivpp_core::numeric::{MpComplex, Precision, Scalar};
use ivpp_core::periodic::{periodic_report, PeriodicError, periodic_report_with, summarize, transition_scan, TRANSITION_CSV_HEADER};
use ivpp_core::poly::MultiPoly;
use ivpp_core::variety::{verify_variety_2d, verify_variety_lv, VarietyReport};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{required, usage, ComplexArg, Format, RunConfig};

/// What a command produced, and whether a verification inside it failed.
pub struct Output {
    pub text: String,
    pub failed: Option<String>,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, failed: None }
    }
}

pub fn run(command: &str, cfg: &RunConfig) -> Result<Output> {
    match command {
        "gamma-series" => gamma_series(cfg),
        "periodic-points" => periodic(cfg),
        "transition-scan" => transition(cfg),
        "julia-scan" => julia(cfg),
        "orbit" => orbit(cfg),
        "verify-variety" => verify_variety(cfg),
        other => Err(usage(format!("unknown command `{other}`"))),
    }
}

fn c64(v: &Option<ComplexArg>, name: &str, command: &str) -> Result<Complex64> {
    Ok(required(v, name, command)?.0)
}

fn json_text(cfg: &RunConfig, command: &str, body: Value) -> String {
    let mut doc = json!({ "command": command, "config": cfg.echo() });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
}

fn csv_text(cfg: &RunConfig, command: &str, extra: &[String], header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = cfg.header(command);
    for line in extra {
        out.push_str(&format!("# {line}\n"));
    }
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

fn gamma_series(cfg: &RunConfig) -> Result<Output> {
    const CMD: &str = "gamma-series";
    cfg.check_keys(CMD, &["max_period", "ceiling", "lv"])?;
    let cfg = RunConfig {
        max_period: Some(cfg.max_period.unwrap_or(5)),
        ceiling: Some(cfg.ceiling.unwrap_or(6)),
        lv: Some(cfg.lv.unwrap_or(false)),
        format: Some(cfg.format.unwrap_or(Format::Json)),
        ..cfg.clone()
    };
    let (max, ceiling) = (cfg.max_period.unwrap(), cfg.ceiling.unwrap());
    if max < 3 {
        return Err(usage("max-period must be at least 3: the recursion first yields γ at period 3"));
    }
    if max > ceiling {
        return Err(usage(format!("max-period {max} exceeds the ceiling {ceiling}")));
    }
    if cfg.format == Some(Format::Csv) {
        return Err(usage("gamma-series writes JSON only"));
    }
    let series = GammaSeries::compute(&generic(), max).map_err(|e| anyhow!("γ series: {e}"))?;
    let mut body = json!({ "generic": series.entries });
    if cfg.lv == Some(true) {
        let bindings: Vec<(&str, MultiPoly)> = ENTRY_NAMES.iter().copied().zip(lv_symbolic().into_array()).collect();
        let lv = series.substituted(&bindings, &LV_SYMBOLS).map_err(|e| anyhow!("LV specialization: {e}"))?;
        body["lv"] = serde_json::to_value(lv)?;
    }
    Ok(Output::ok(json_text(&cfg, CMD, body)))
}

fn precision(bits: Option<u32>) -> Precision {
    match bits {
        None | Some(53) => Precision::Double,
        Some(bits) => Precision::Extended { bits },
    }
}

fn periodic(cfg: &RunConfig) -> Result<Output> {
    const CMD: &str = "periodic-points";
    cfg.check_keys(CMD, &["h", "hp", "period", "bits"])?;
    let (h, hp) = (c64(&cfg.h, "h", CMD)?, c64(&cfg.hp, "hp", CMD)?);
    let n = required(&cfg.period, "period", CMD)?;
    if n == 0 || n > ivpp_core::periodic::N_MAX {
        return Err(usage(format!("period must lie in 1..={}", ivpp_core::periodic::N_MAX)));
    }
    let report = match cfg.bits {
        None => periodic_report(h, hp, n),
        Some(b) if b < 53 => return Err(usage("bits must be at least 53")),
        Some(b) => periodic_report_with(h, hp, n, precision(Some(b))),
    }
    .map_err(|e| anyhow!("period {n}: {e}"))?;
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_text(
            cfg,
            CMD,
            &[format!("solver_bits = {}", report.bits)],
            "period,re_z,im_z,re_multiplier,im_multiplier,abs_multiplier,class",
            report.points.iter().map(|p| {
                format!(
                    "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}",
                    p.period,
                    p.z.re,
                    p.z.im,
                    p.multiplier.re,
                    p.multiplier.im,
                    p.multiplier.norm(),
                    p.class
                )
            }),
        ),
        Format::Json => json_text(cfg, CMD, json!({ "solver_bits": report.bits, "points": report.points })),
    };
    Ok(Output::ok(text))
}

fn transition(cfg: &RunConfig) -> Result<Output> {
    const CMD: &str = "transition-scan";
    cfg.check_keys(CMD, &["h", "period", "delta"])?;
    let cfg = RunConfig {
        delta: Some(cfg.delta.clone().unwrap_or_else(|| vec![1e-2, 1e-3, 1e-4, 0.0])),
        ..cfg.clone()
    };
    let h = c64(&cfg.h, "h", CMD)?;
    let n = required(&cfg.period, "period", CMD)?;
    let grid = cfg.delta.clone().unwrap();
    let rows = transition_scan(h, n, &grid).map_err(|e| match e {
        PeriodicError::Degenerate(_) | PeriodicError::Period(_) => usage(e.to_string()),
        e => anyhow!("{e}"),
    })?;
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let extra: Vec<String> = summarize(&rows, &grid)
                .iter()
                .map(|s| {
                    format!(
                        "delta = {:e}: {} points, max dist to fossils {:e}, max |multiplier| {:e}",
                        s.delta, s.count, s.max_dist, s.max_abs_multiplier
                    )
                })
                .collect();
            csv_text(&cfg, CMD, &extra, TRANSITION_CSV_HEADER, rows.iter().map(|r| r.csv_line()))
        }
        Format::Json => {
            let summary: Vec<Value> = summarize(&rows, &grid)
                .iter()
                .map(|s| json!({"delta": s.delta, "count": s.count, "max_dist": s.max_dist, "max_abs_multiplier": s.max_abs_multiplier}))
                .collect();
            json_text(&cfg, CMD, json!({ "summary": summary, "rows": rows }))
        }
    };
    Ok(Output::ok(text))
}

fn julia(cfg: &RunConfig) -> Result<Output> {
    const CMD: &str = "julia-scan";
    cfg.check_keys(CMD, &["h", "epsilon", "depth", "samples", "seed"])?;
    let cfg = RunConfig {
        epsilon: Some(cfg.epsilon.clone().unwrap_or_else(|| vec![1e-1, 1e-2, 1e-3])),
        depth: Some(cfg.depth.unwrap_or(12)),
        samples: Some(cfg.samples.unwrap_or(2000)),
        seed: Some(cfg.seed.unwrap_or(0)),
        ..cfg.clone()
    };
    let h = c64(&cfg.h, "h", CMD)?;
    let rows = convergence_report(
        h,
        cfg.epsilon.as_deref().unwrap(),
        cfg.depth.unwrap(),
        cfg.samples.unwrap(),
        cfg.seed.unwrap(),
    )
    .map_err(|e| usage(e.to_string()))?;
    let slope = fit_slope(&rows);
    let violations = rows.iter().filter(|r| !r.bound_holds()).count();
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let extra = [
                format!("fitted_slope = {}", slope.map_or("none".into(), |s| format!("{s:.6}"))),
                format!("bound_violations = {violations}"),
            ];
            csv_text(&cfg, CMD, &extra, CONVERGENCE_CSV_HEADER, rows.iter().map(|r| r.csv_line()))
        }
        Format::Json => json_text(&cfg, CMD, json!({ "fitted_slope": slope, "bound_violations": violations, "rows": rows })),
    };
    let failed = (violations > 0).then(|| format!("{violations} rows exceed R_ε/(1-|h|)"));
    Ok(Output { text, failed })
}

fn build_map(cfg: &RunConfig, command: &str) -> Result<MapId> {
    let id = required(&cfg.map, "map", command)?;
    let mut params = BTreeMap::new();
    for (name, v) in [("h", cfg.h), ("hp", cfg.hp), ("b", cfg.b), ("c", cfg.c)] {
        if let Some(v) = v {
            params.insert(name.to_string(), v.0);
        }
    }
    if let Some(q) = &cfg.q {
        if q.len() != 12 {
            return Err(usage("--q takes twelve values a1,b1,c1,d1,e1,f1,a2,b2,c2,d2,e2,f2"));
        }
        let names = MapId::parameter_names("qrt").expect("known id");
        for (n, v) in names.iter().zip(q) {
            params.insert(n.to_string(), v.0);
        }
    }
    let accepted = MapId::parameter_names(&id).map_err(|e| usage(e.to_string()))?;
    for name in params.keys() {
        if !accepted.contains(&name.as_str()) {
            return Err(usage(format!("map {id} takes no parameter `{name}`")));
        }
    }
    MapId::from_id(&id, &params).map_err(|e| usage(e.to_string()))
}

/// Per step: the point, its invariants and the largest relative drift so far.
type OrbitRow = (Vec<Complex64>, Vec<Complex64>, f64);

fn trace<S: Scalar>(map: &MapId, x0: Vec<S>, steps: usize) -> Result<Vec<OrbitRow>, (usize, MapError)> {
    let first = map.invariants_of(&x0).map_err(|e| (0, e))?;
    let mut x = x0;
    let mut drift: f64 = 0.0;
    let mut rows = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        if k > 0 {
            x = map.apply(&x).map_err(|e| (k, e))?;
        }
        let inv = map.invariants_of(&x).map_err(|e| (k, e))?;
        for (a, b) in inv.iter().zip(&first) {
            drift = drift.max((a.clone() - b.clone()).norm() / b.norm().max(f64::MIN_POSITIVE));
        }
        rows.push((x.iter().map(Scalar::to_c64).collect(), inv.iter().map(Scalar::to_c64).collect(), drift));
    }
    Ok(rows)
}

fn orbit(cfg: &RunConfig) -> Result<Output> {
    const CMD: &str = "orbit";
    cfg.check_keys(CMD, &["map", "h", "hp", "b", "c", "q", "x0", "steps", "seed", "bits"])?;
    let map = build_map(cfg, CMD)?;
    let dim = map.dimension();
    let mut cfg = RunConfig {
        steps: Some(cfg.steps.unwrap_or(1000)),
        ..cfg.clone()
    };
    if cfg.x0.is_none() {
        // a seeded generic start in the disk of radius 2
        let seed = cfg.seed.unwrap_or(0);
        cfg.seed = Some(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x0 = (0..dim)
            .map(|_| ComplexArg(Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        cfg.x0 = Some(x0);
    } else if cfg.seed.is_some() {
        return Err(usage("--seed only applies when --x0 is not given"));
    }
    let x0: Vec<Complex64> = cfg.x0.as_ref().unwrap().iter().map(|c| c.0).collect();
    if x0.len() != dim {
        return Err(usage(format!("{map} acts on {dim} coordinates, --x0 has {}", x0.len())));
    }
    let steps = cfg.steps.unwrap();
    let traced = match precision(cfg.bits) {
        Precision::Double => trace(&map, x0, steps),
        Precision::Extended { bits } if bits > 53 => {
            trace(&map, x0.into_iter().map(|z| MpComplex::new(z, bits)).collect(), steps)
        }
        Precision::Extended { .. } => return Err(usage("bits must be at least 53")),
    };
    let rows = match traced {
        Ok(rows) => rows,
        Err((k, e)) => bail!("step {k}: {e}"),
    };
    let ninv = rows.first().map_or(0, |r| r.1.len());
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut cols = vec!["step".to_string()];
            cols.extend((1..=dim).flat_map(|i| [format!("re_x{i}"), format!("im_x{i}")]));
            cols.extend((1..=ninv).flat_map(|i| [format!("re_inv{i}"), format!("im_inv{i}")]));
            cols.push("max_rel_drift".into());
            let lines = rows.iter().enumerate().map(|(k, (x, inv, d))| {
                let mut f = vec![k.to_string()];
                f.extend(x.iter().chain(inv).flat_map(|z| [format!("{:.17e}", z.re), format!("{:.17e}", z.im)]));
                f.push(format!("{d:.6e}"));
                f.join(",")
            });
            csv_text(&cfg, CMD, &[], &cols.join(","), lines)
        }
        Format::Json => {
            let pts: Vec<Value> = rows
                .iter()
                .map(|(x, inv, d)| json!({"x": x, "invariants": inv, "max_rel_drift": d}))
                .collect();
            json_text(&cfg, CMD, json!({ "orbit": pts }))
        }
    };
    Ok(Output::ok(text))
}

fn verify_variety(cfg: &RunConfig) -> Result<Output> {
    const CMD: &str = "verify-variety";
    let id = required(&cfg.map, "map", CMD)?;
    let cfg = RunConfig {
        samples: Some(cfg.samples.unwrap_or(100)),
        seed: Some(cfg.seed.unwrap_or(0)),
        format: Some(cfg.format.unwrap_or(Format::Json)),
        ..cfg.clone()
    };
    let (samples, seed) = (cfg.samples.unwrap(), cfg.seed.unwrap());
    let n = required(&cfg.period, "period", CMD)?;
    let (cfg, report): (RunConfig, VarietyReport) = match id.as_str() {
        "2d-bc" => {
            cfg.check_keys(CMD, &["map", "period", "b", "c", "k", "samples", "seed"])?;
            if cfg.c.is_some_and(|c| c.0 != Complex64::new(0.0, 0.0)) {
                return Err(usage("the 2-d variety is checked at c = 0"));
            }
            let cfg = RunConfig {
                b: Some(cfg.b.unwrap_or(ComplexArg(Complex64::new(0.5, 0.0)))),
                k: Some(cfg.k.unwrap_or(1)),
                ..cfg
            };
            let r = verify_variety_2d(n, cfg.b.unwrap().0, cfg.k.unwrap(), samples, seed).map_err(|e| usage(e.to_string()))?;
            (cfg, r)
        }
        "lv3" => {
            cfg.check_keys(CMD, &["map", "period", "samples", "seed"])?;
            let r = verify_variety_lv(n, samples, seed).map_err(|e| usage(e.to_string()))?;
            (cfg, r)
        }
        other => return Err(usage(format!("no variety check for map `{other}` (use 2d-bc or lv3)"))),
    };
    let text = match cfg.format.unwrap() {
        Format::Json => json_text(&cfg, CMD, serde_json::to_value(&report)?),
        Format::Csv => csv_text(
            &cfg,
            CMD,
            &[],
            "condition,period,samples,passes,resamples,max_return_residual,negative_control_min_distance",
            [format!(
                "{},{},{},{},{},{:e},{:e}",
                report.condition,
                report.period,
                report.samples,
                report.passes,
                report.resamples,
                report.max_return_residual,
                report.negative_control_min_distance
            )],
        ),
    };
    Ok(Output {
        text,
        failed: variety_failure(&report),
    })
}

fn variety_failure(report: &VarietyReport) -> Option<String> {
    (!report.all_pass()).then(|| {
        format!(
            "{} of {} samples returned, negative control distance {:e}, early returns {}",
            report.passes, report.samples, report.negative_control_min_distance, report.early_returns
        )
    })
}
