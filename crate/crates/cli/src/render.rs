//! Plain-text, CSV and JSON rendering of command output.
//!
//! Text and CSV are built from [`Section`]s, JSON straight from the
//! serializable result so it keeps full precision.

use std::fmt::Write as _;

use serde::Serialize;

use crate::manifest::RunManifest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

pub enum Section {
    Fields { title: String, rows: Vec<(String, String)> },
    Table { title: String, header: Vec<String>, rows: Vec<Vec<String>> },
    Text(String),
}

impl Section {
    pub fn fields(title: &str, rows: Vec<(&str, String)>) -> Self {
        Section::Fields { title: title.into(), rows: rows.into_iter().map(|(k, v)| (k.into(), v)).collect() }
    }

    pub fn table(title: &str, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Section::Table { title: title.into(), header: header.iter().map(|s| s.to_string()).collect(), rows }
    }
}

/// Six significant digits, plain notation for moderate magnitudes.
pub fn g6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.5e}");
        match s.split_once('e') {
            Some((mant, e)) => format!("{}e{e}", trim(mant.to_string())),
            None => s,
        }
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Full round-trip precision.
pub fn full(x: f64) -> String {
    format!("{x:?}")
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn manifest_comments(out: &mut String, m: &RunManifest) {
    for line in m.comment_lines() {
        let _ = writeln!(out, "# {line}");
    }
}

pub fn render_text(manifest: &RunManifest, sections: &[Section]) -> String {
    let mut out = String::new();
    manifest_comments(&mut out, manifest);
    for s in sections {
        out.push('\n');
        match s {
            Section::Fields { title, rows } => {
                let _ = writeln!(out, "{title}");
                let w = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
                for (k, v) in rows {
                    let pad = w - k.chars().count();
                    let _ = writeln!(out, "  {k}{}  {v}", " ".repeat(pad));
                }
            }
            Section::Table { title, header, rows } => {
                let _ = writeln!(out, "{title}");
                let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
                for r in rows {
                    for (w, c) in widths.iter_mut().zip(r) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    let parts: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{}{c}", " ".repeat(w - c.chars().count())))
                        .collect();
                    format!("  {}", parts.join("  "))
                };
                let _ = writeln!(out, "{}", line(header));
                for r in rows {
                    let _ = writeln!(out, "{}", line(r));
                }
            }
            Section::Text(t) => {
                let _ = writeln!(out, "{t}");
            }
        }
    }
    out
}

pub fn render_csv(manifest: &RunManifest, sections: &[Section]) -> String {
    let mut out = String::new();
    manifest_comments(&mut out, manifest);
    let mut first = true;
    for s in sections {
        match s {
            Section::Fields { rows, .. } => {
                if !first {
                    out.push('\n');
                }
                out.push_str("field,value\n");
                for (k, v) in rows {
                    let _ = writeln!(out, "{},{}", csv_cell(k), csv_cell(v));
                }
            }
            Section::Table { header, rows, .. } => {
                if !first {
                    out.push('\n');
                }
                let h: Vec<String> = header.iter().map(|c| csv_cell(c)).collect();
                let _ = writeln!(out, "{}", h.join(","));
                for r in rows {
                    let r: Vec<String> = r.iter().map(|c| csv_cell(c)).collect();
                    let _ = writeln!(out, "{}", r.join(","));
                }
            }
            // prose has no place in a CSV stream
            Section::Text(_) => continue,
        }
        first = false;
    }
    out
}

pub fn render_json<T: Serialize>(manifest: &RunManifest, result: &T) -> serde_json::Result<String> {
    #[derive(Serialize)]
    struct Envelope<'a, T> {
        manifest: &'a RunManifest,
        result: &'a T,
    }
    let mut s = serde_json::to_string_pretty(&Envelope { manifest, result })?;
    s.push('\n');
    Ok(s)
}
