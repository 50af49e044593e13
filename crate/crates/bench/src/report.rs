//! CSV and markdown rendering of table rows.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::experiment::TableRow;
use crate::tables::ReproducedRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            _ => Err(BenchError::usage(format!("unknown format {s:?}"))),
        }
    }
}

/// One report line: `method, eps, it, reference_it, ratio`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportLine {
    pub method: String,
    pub eps: f64,
    #[serde(with = "dash")]
    pub it: Option<u64>,
    #[serde(with = "dash")]
    pub reference_it: Option<u64>,
    #[serde(with = "dash")]
    pub ratio: Option<f64>,
}

/// `None` ⇄ `-`.
mod dash {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.collect_str(x),
            None => s.serialize_str("-"),
        }
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Option<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let text = String::deserialize(d)?;
        if text == "-" {
            return Ok(None);
        }
        text.parse().map(Some).map_err(serde::de::Error::custom)
    }
}

pub fn lines_from_rows(rows: &[TableRow]) -> Vec<ReportLine> {
    rows.iter()
        .flat_map(|row| {
            row.entries.iter().map(move |e| ReportLine {
                method: row.method.clone(),
                eps: e.eps,
                it: e.it,
                reference_it: None,
                ratio: None,
            })
        })
        .collect()
}

pub fn lines_from_reproduction(rows: &[ReproducedRow]) -> Vec<ReportLine> {
    rows.iter()
        .flat_map(|r| {
            let ratios = r.ratios();
            r.row.entries.iter().zip(&r.reference.it).zip(ratios).map(
                move |((e, reference_it), ratio)| ReportLine {
                    method: r.row.method.clone(),
                    eps: e.eps,
                    it: e.it,
                    reference_it: *reference_it,
                    ratio: ratio.map(round_ratio),
                },
            )
        })
        .collect()
}

fn round_ratio(r: f64) -> f64 {
    (r * 1000.0).round() / 1000.0
}

pub fn emit_report(lines: &[ReportLine], format: Format) -> Result<String> {
    if lines.is_empty() {
        return Err(BenchError::usage("nothing to report"));
    }
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for line in lines {
                w.serialize(line)?;
            }
            let bytes = w.into_inner().map_err(|e| BenchError::Io {
                path: "<csv buffer>".into(),
                source: e.into_error(),
            })?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Markdown => {
            let mut out = String::new();
            out.push_str("| method | eps | it | reference_it | ratio |\n");
            out.push_str("|---|---:|---:|---:|---:|\n");
            for l in lines {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    l.method,
                    l.eps,
                    dash_text(l.it),
                    dash_text(l.reference_it),
                    dash_text(l.ratio)
                );
            }
            Ok(out)
        }
    }
}

fn dash_text<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

/// Final gaps and run lengths next to the published ones, as markdown.
pub fn final_gap_summary(rows: &[ReproducedRow]) -> String {
    let mut out = String::from("| method | evals | final gap | published gap @ evals |\n");
    out.push_str("|---|---:|---:|---:|\n");
    for r in rows {
        let published = r
            .reference
            .final_gap
            .map_or_else(|| "-".to_string(), |(g, n)| format!("{g} @ {n}"));
        let _ = writeln!(
            out,
            "| {} | {} | {:.6} | {} |",
            r.row.method, r.total_evals, r.final_gap, published
        );
    }
    out
}

pub fn parse_csv_report(text: &str) -> Result<Vec<ReportLine>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    Ok(reader.deserialize().collect::<Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::TableEntry;

    fn one_row() -> Vec<TableRow> {
        vec![TableRow {
            method: "sgm".into(),
            entries: vec![TableEntry {
                eps: 0.1,
                it: Some(60),
            }],
        }]
    }

    #[test]
    fn csv_has_header_and_one_line() {
        let text = emit_report(&lines_from_rows(&one_row()), Format::Csv).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(
            lines,
            vec!["method,eps,it,reference_it,ratio", "sgm,0.1,60,-,-"]
        );
    }

    #[test]
    fn markdown_is_a_pipe_table() {
        let text = emit_report(&lines_from_rows(&one_row()), Format::Markdown).unwrap();
        assert!(text.starts_with("| method | eps | it | reference_it | ratio |"));
        assert!(text.contains("| sgm | 0.1 | 60 | - | - |"));
    }

    #[test]
    fn csv_parses_back() {
        let lines = vec![
            ReportLine {
                method: "csgi".into(),
                eps: 1e-5,
                it: Some(860),
                reference_it: Some(860),
                ratio: Some(1.0),
            },
            ReportLine {
                method: "asg".into(),
                eps: 0.1,
                it: None,
                reference_it: None,
                ratio: None,
            },
        ];
        let text = emit_report(&lines, Format::Csv).unwrap();
        assert_eq!(parse_csv_report(&text).unwrap(), lines);
    }

    #[test]
    fn empty_report_rejected() {
        assert!(emit_report(&[], Format::Csv).is_err());
    }
}
