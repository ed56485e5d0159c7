//! Table, CSV and JSON rendering.

use std::fmt::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};
use swkb::solver::SpectrumRow;
use swkb::verification::CheckResult;
use swkb::{PotentialId, PotentialSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Rounds to 12 significant digits.
pub fn sig12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

fn num(v: f64) -> String {
    let r = sig12(v);
    if r != 0.0 && r.is_finite() && !(1e-4..1e12).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn json_num(v: f64) -> Value {
    // serde_json writes non-finite values as null
    json!(sig12(v))
}

/// Columns sized to fit; the first `left` are left-aligned, the rest right-aligned.
fn table(header: &[&str], rows: &[Vec<String>], left: usize) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            let gap = if i == 0 { "" } else { "  " };
            if i < left {
                write!(s, "{gap}{cell:<w$}").unwrap();
            } else {
                write!(s, "{gap}{cell:>w$}").unwrap();
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn params_object(spec: &PotentialSpec) -> Value {
    let map: Map<String, Value> =
        spec.params().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    Value::Object(map)
}

fn params_text(spec: &PotentialSpec) -> String {
    spec.params().iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

fn meta(spec: &PotentialSpec) -> Value {
    json!({
        "potential": spec.id().slug(),
        "params": params_object(spec),
        "units": "hbar=2m=1",
    })
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

pub const SPECTRUM_HEADER: [&str; 7] =
    ["n", "e_closed", "e_swkb", "e_pq", "e_oracle", "swkb_residual", "gamma"];

pub fn spectrum(spec: &PotentialSpec, rows: &[SpectrumRow], format: Format) -> String {
    let cells = |r: &SpectrumRow| {
        vec![
            r.n.to_string(),
            num(r.e_closed),
            num(r.e_swkb),
            num(r.e_pq),
            num(r.e_oracle),
            num(r.swkb_residual),
            num(r.gamma),
        ]
    };
    match format {
        Format::Csv => csv(&SPECTRUM_HEADER, &rows.iter().map(cells).collect::<Vec<_>>()),
        Format::Table => {
            let mut header = SPECTRUM_HEADER.to_vec();
            header.push("flag");
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut c = cells(r);
                    c.push(if r.flagged { "*".into() } else { String::new() });
                    c
                })
                .collect();
            let mut out = format!("{} ({})\n", spec.id().display_name(), params_text(spec));
            out.push_str(&table(&header, &body, 1));
            for r in rows.iter().filter(|r| r.flagged) {
                writeln!(out, "* n={}: {}", r.n, r.notes.join("; ")).unwrap();
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "e_closed": json_num(r.e_closed),
                        "e_swkb": json_num(r.e_swkb),
                        "e_pq": json_num(r.e_pq),
                        "e_oracle": json_num(r.e_oracle),
                        "swkb_residual": json_num(r.swkb_residual),
                        "gamma": json_num(r.gamma),
                        "flagged": r.flagged,
                        "notes": r.notes,
                    })
                })
                .collect();
            pretty(&json!({ "meta": meta(spec), "rows": rows }))
        }
    }
}

/// One check of one potential (or of the moment formulas, with no potential).
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub potential: Option<PotentialId>,
    pub check: CheckResult,
}

pub fn checks(lines: &[CheckLine], format: Format) -> String {
    let header = ["potential", "check", "worst", "tolerance", "samples", "status", "detail"];
    let cells = |l: &CheckLine| {
        vec![
            l.potential.map_or("-".to_string(), |id| id.slug().to_string()),
            l.check.name.clone(),
            format!("{:.3e}", l.check.worst),
            format!("{:.1e}", l.check.tolerance),
            l.check.samples.to_string(),
            if l.check.passed { "pass" } else { "FAIL" }.to_string(),
            l.check.detail.clone(),
        ]
    };
    match format {
        Format::Table => {
            let mut body: Vec<Vec<String>> = lines.iter().map(cells).collect();
            let details: Vec<String> = body.iter_mut().map(|row| row.pop().unwrap_or_default()).collect();
            let failed = lines.iter().filter(|l| !l.check.passed).count();
            let aligned = table(&header[..6], &body, 2);
            let mut out = String::new();
            let mut rows = aligned.lines();
            writeln!(out, "{}  {}", rows.next().unwrap_or_default(), header[6]).unwrap();
            for (row, detail) in rows.zip(&details) {
                writeln!(out, "{}", format!("{row}  {detail}").trim_end()).unwrap();
            }
            writeln!(out, "{} checks, {} failed", lines.len(), failed).unwrap();
            out
        }
        Format::Csv => {
            let body: Vec<Vec<String>> = lines
                .iter()
                .map(|l| {
                    let mut c = cells(l);
                    c[2] = num(l.check.worst);
                    c[3] = num(l.check.tolerance);
                    // keep the detail column free of separators
                    c[6] = c[6].replace(',', ";");
                    c
                })
                .collect();
            csv(&header, &body)
        }
        Format::Json => pretty(&serde_json::to_value(lines).expect("checks serialize")),
    }
}

pub fn catalog(ids: &[PotentialId], format: Format) -> String {
    let family = |id: PotentialId| {
        let f = match id.family() {
            swkb::Family::First => "first",
            swkb::Family::Second => "second",
        };
        if id.is_exceptional() {
            format!("{f}, exceptional")
        } else {
            f.to_string()
        }
    };
    match format {
        Format::Json => {
            let items: Vec<Value> = ids
                .iter()
                .map(|&id| {
                    json!({
                        "id": id.slug(),
                        "name": id.display_name(),
                        "category": id.family(),
                        "exceptional": id.is_exceptional(),
                        "params": id.param_names(),
                        "constraints": id.constraints(),
                        "spectrum": id.spectrum_formula(),
                    })
                })
                .collect();
            pretty(&Value::Array(items))
        }
        _ => {
            let header = ["id", "name", "category", "params", "constraints", "spectrum"];
            let body: Vec<Vec<String>> = ids
                .iter()
                .map(|&id| {
                    vec![
                        id.slug().to_string(),
                        id.display_name().to_string(),
                        family(id),
                        id.param_names().join(" "),
                        id.constraints().to_string(),
                        id.spectrum_formula().to_string(),
                    ]
                })
                .collect();
            if format == Format::Csv {
                let quoted: Vec<Vec<String>> = body
                    .into_iter()
                    .map(|row| row.into_iter().map(|c| format!("\"{c}\"")).collect())
                    .collect();
                csv(&header, &quoted)
            } else {
                table(&header, &body, header.len())
            }
        }
    }
}

/// Generic numeric table with a caption line for the table format.
pub fn numeric(caption: &str, header: &[&str], rows: &[Vec<f64>], format: Format, meta_of: &PotentialSpec) -> String {
    match format {
        Format::Table => {
            let body: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|v| num(*v)).collect()).collect();
            format!("{caption}\n{}", table(header, &body, 0))
        }
        Format::Csv => {
            let body: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|v| num(*v)).collect()).collect();
            csv(header, &body)
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let map: Map<String, Value> =
                        header.iter().zip(r).map(|(k, v)| (k.to_string(), json_num(*v))).collect();
                    Value::Object(map)
                })
                .collect();
            pretty(&json!({ "meta": meta(meta_of), "rows": rows }))
        }
    }
}
