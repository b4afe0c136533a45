use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;
use crate::study::{CompareReport, CriticalRow, OptimizeOutput, SweepRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `%.9g`: nine significant digits, trailing zeros dropped.
pub fn fmt_g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    if !(-5..9).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, fmt_g9)
}

fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Output {
        path: "<memory>".into(),
        message: e.to_string(),
    };
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::Output {
        path: "<memory>".into(),
        message: e.to_string(),
    })
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| CliError::Output {
        path: "<memory>".into(),
        message: e.to_string(),
    })?;
    out.push(b'\n');
    Ok(out)
}

fn strings(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

pub fn render_compare(r: &CompareReport, format: Format) -> Result<Vec<u8>, CliError> {
    if format == Format::Json {
        return json_bytes(r);
    }
    let header = strings(&[
        "mass_ratio",
        "target_count",
        "architecture",
        "initial_mass_kg",
        "variable_fuel_kg",
        "servicer_fuel_kg",
        "target_fuel_kg",
        "servicer_dv_km_s",
        "target_dv_km_s",
        "recommended",
    ]);
    let rows: Vec<Vec<String>> = r
        .rows
        .iter()
        .map(|a| {
            vec![
                fmt_g9(r.mass_ratio),
                r.target_count.to_string(),
                a.architecture.clone(),
                fmt_g9(a.initial_mass_kg),
                fmt_g9(a.variable_fuel_kg),
                fmt_g9(a.servicer_fuel_kg),
                fmt_g9(a.target_fuel_kg),
                fmt_g9(a.servicer_dv_km_s),
                fmt_g9(a.target_dv_km_s),
                (a.architecture == r.recommendation).to_string(),
            ]
        })
        .collect();
    csv_bytes(&header, &rows)
}

pub fn render_critical(rows: &[CriticalRow], format: Format) -> Result<Vec<u8>, CliError> {
    if format == Format::Json {
        return json_bytes(&rows);
    }
    let header = strings(&["target_count", "pair", "critical_mass_ratio", "crossover"]);
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.target_count.to_string(),
                r.pair.clone(),
                opt(r.critical_ratio),
                r.critical_ratio.is_some().to_string(),
            ]
        })
        .collect();
    csv_bytes(&header, &rows)
}

pub fn render_sweep(rows: &[SweepRow], format: Format) -> Result<Vec<u8>, CliError> {
    if format == Format::Json {
        return json_bytes(&rows);
    }
    let labels: Vec<String> = rows
        .first()
        .map(|r| {
            r.architectures
                .iter()
                .map(|a| a.architecture.to_lowercase())
                .collect()
        })
        .unwrap_or_default();
    let mut header = strings(&[
        "target_set",
        "isp_target_s",
        "isp_servicer_s",
        "target_count",
        "mass_ratio",
    ]);
    for l in &labels {
        header.push(format!("initial_mass_{l}_kg"));
        header.push(format!("variable_fuel_{l}_kg"));
    }
    header.extend(strings(&[
        "critical_ratio_a_b",
        "critical_ratio_a_c",
        "critical_ratio_a_d",
        "recommendation",
    ]));
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![
                r.target_set.clone(),
                fmt_g9(r.isp_target_s),
                fmt_g9(r.isp_servicer_s),
                r.target_count.to_string(),
                fmt_g9(r.mass_ratio),
            ];
            for a in &r.architectures {
                v.push(fmt_g9(a.initial_mass_kg));
                v.push(fmt_g9(a.variable_fuel_kg));
            }
            v.push(opt(r.critical_ratio_a_b));
            v.push(opt(r.critical_ratio_a_c));
            v.push(opt(r.critical_ratio_a_d));
            v.push(r.recommendation.clone());
            v
        })
        .collect();
    csv_bytes(&header, &body)
}

pub fn render_optimize(o: &OptimizeOutput, format: Format) -> Result<Vec<u8>, CliError> {
    if format == Format::Json {
        return json_bytes(o);
    }
    let header = strings(&[
        "seed",
        "mass_ratio",
        "initial_mass_kg",
        "matched_architecture",
        "target",
        "inclination_deg",
        "arg_latitude_deg",
        "servicer_dv_km_s",
        "target_in_dv_km_s",
        "target_out_dv_km_s",
        "refuel_kg",
    ]);
    let matched = o.matched_architecture.clone().unwrap_or_default();
    let rows: Vec<Vec<String>> = o
        .plan
        .iter()
        .map(|p| {
            vec![
                o.seed.to_string(),
                fmt_g9(o.mass_ratio),
                fmt_g9(o.initial_mass_kg),
                matched.clone(),
                p.target.to_string(),
                fmt_g9(p.inclination_deg),
                fmt_g9(p.arg_latitude_deg),
                fmt_g9(p.servicer_dv_km_s),
                fmt_g9(p.target_in_dv_km_s),
                fmt_g9(p.target_out_dv_km_s),
                fmt_g9(p.refuel_kg),
            ]
        })
        .collect();
    csv_bytes(&header, &rows)
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// or to stdout when `path` is `None`.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::Output {
                path: "<stdout>".into(),
                message: e.to_string(),
            });
    };
    let fail = |e: std::io::Error| CliError::Output {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
