//! CSV and plain-text writers for curves, features and evaluation reports.
//!
//! Every CSV is UTF-8, comma separated and starts with a header row. Floats
//! use Rust's shortest round-trip formatting so output is byte-stable.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::crawler::{Direction, LiveAgentCurve};
use crate::descriptors::FeatureVector;
use crate::error::{Error, Result};
use crate::ml::FoldReport;

/// `t,psi_max,psi_min` (one column per curve present), one row per iteration.
pub fn curves_csv(curves: &[LiveAgentCurve]) -> String {
    let mut out = String::from("t");
    for c in curves {
        let _ = write!(out, ",psi_{}", c.direction);
    }
    out.push('\n');
    let rows = curves.iter().map(|c| c.counts.len()).max().unwrap_or(0);
    for t in 0..rows {
        let _ = write!(out, "{t}");
        for c in curves {
            match c.counts.get(t) {
                Some(v) => {
                    let _ = write!(out, ",{v}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Parses the output of [`curves_csv`] back into curves.
pub fn parse_curves_csv(text: &str) -> Result<Vec<LiveAgentCurve>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Decode("empty curve CSV".into()))?;
    let mut cols = header.split(',');
    if cols.next() != Some("t") {
        return Err(Error::Decode("curve CSV must start with column t".into()));
    }
    let mut curves = cols
        .map(|name| match name {
            "psi_max" => Ok(LiveAgentCurve {
                direction: Direction::Max,
                counts: Vec::new(),
            }),
            "psi_min" => Ok(LiveAgentCurve {
                direction: Direction::Min,
                counts: Vec::new(),
            }),
            other => Err(Error::Decode(format!("unknown curve column {other:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != curves.len() + 1 || fields[0] != row.to_string() {
            return Err(Error::Decode(format!("malformed curve row {row}: {line:?}")));
        }
        for (curve, field) in curves.iter_mut().zip(&fields[1..]) {
            let v = field
                .parse()
                .map_err(|_| Error::Decode(format!("bad count {field:?} in row {row}")))?;
            curve.counts.push(v);
        }
    }
    Ok(curves)
}

/// `label,method,param_digest,v0,...`; the header is sized by the widest row.
pub fn features_csv<'a>(rows: impl IntoIterator<Item = (&'a str, &'a FeatureVector)>) -> String {
    let rows: Vec<_> = rows.into_iter().collect();
    let width = rows.iter().map(|(_, f)| f.len()).max().unwrap_or(0);
    let mut out = String::from("label,method,param_digest");
    for i in 0..width {
        let _ = write!(out, ",v{i}");
    }
    out.push('\n');
    for (label, fv) in rows {
        let _ = write!(out, "{label},{},{}", fv.method, fv.digest);
        for v in &fv.values {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// Per-fold rows followed by a `summary` row.
pub fn fold_report_csv(report: &FoldReport) -> String {
    let mut out = String::from("fold,correct,total,accuracy,std\n");
    for (i, ((c, t), a)) in report
        .fold_correct
        .iter()
        .zip(&report.fold_total)
        .zip(&report.fold_accuracies)
        .enumerate()
    {
        let _ = writeln!(out, "{i},{c},{t},{a},");
    }
    let _ = writeln!(
        out,
        "summary,{},{},{},{}",
        report.correct, report.total, report.mean, report.std
    );
    out
}

/// One method's line in a comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub method: String,
    pub outcome: std::result::Result<FoldReport, String>,
}

pub fn benchmark_csv(rows: &[BenchmarkRow]) -> String {
    let mut out = String::from("method,correct,total,mean_accuracy,std,status\n");
    for row in rows {
        match &row.outcome {
            Ok(r) => {
                let _ = writeln!(out, "{},{},{},{},{},ok", row.method, r.correct, r.total, r.mean, r.std);
            }
            Err(e) => {
                let _ = writeln!(out, "{},,,,,error: {}", row.method, sanitize(e));
            }
        }
    }
    out
}

/// Aligned text table: method, images correctly classified, mean % (± std).
pub fn benchmark_table(rows: &[BenchmarkRow]) -> String {
    let cells: Vec<[String; 3]> = rows
        .iter()
        .map(|row| match &row.outcome {
            Ok(r) => [
                row.method.clone(),
                format!("{} / {}", r.correct, r.total),
                format!("{:.2} (± {:.2})", 100.0 * r.mean, 100.0 * r.std),
            ],
            Err(e) => [row.method.clone(), "-".into(), format!("failed: {e}")],
        })
        .collect();
    let header = [
        "Method".to_string(),
        "Images correctly classif.".to_string(),
        "Correct classification (%)".to_string(),
    ];
    let widths: Vec<usize> = (0..3)
        .map(|i| {
            std::iter::once(&header)
                .chain(&cells)
                .map(|r| r[i].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |r: &[String; 3]| {
        format!(
            "{:<w0$}  {:>w1$}  {:>w2$}\n",
            r[0],
            r[1],
            r[2],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2]
        )
    };
    let mut out = line(&header);
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 4));
    out.push('\n');
    for r in &cells {
        out.push_str(&line(r));
    }
    out
}

/// Summary of one cross-validated configuration in a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: String,
    pub value: usize,
    pub variant: String,
    pub outcome: std::result::Result<FoldReport, String>,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("axis,value,variant,mean_accuracy,std,correct,total,status\n");
    for row in rows {
        match &row.outcome {
            Ok(r) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},ok",
                    row.axis, row.value, row.variant, r.mean, r.std, r.correct, r.total
                );
            }
            Err(e) => {
                let _ = writeln!(
                    out,
                    "{},{},{},,,,,invalid: {}",
                    row.axis,
                    row.value,
                    row.variant,
                    sanitize(e)
                );
            }
        }
    }
    out
}

fn sanitize(msg: &str) -> String {
    msg.replace([',', '\n', '\r'], ";")
}

/// Writes `contents` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Parameter(format!("output path {} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    result.map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::Method;

    #[test]
    fn curve_csv_layout() {
        let curves = [
            LiveAgentCurve {
                direction: Direction::Max,
                counts: vec![3, 2, 2],
            },
            LiveAgentCurve {
                direction: Direction::Min,
                counts: vec![3, 1, 0],
            },
        ];
        let text = curves_csv(&curves);
        assert_eq!(text, "t,psi_max,psi_min\n0,3,3\n1,2,1\n2,2,0\n");
        assert_eq!(parse_curves_csv(&text).unwrap(), curves);
    }

    #[test]
    fn feature_csv_layout() {
        let fv = FeatureVector {
            values: vec![1.0, 0.25],
            method: Method::Fourier,
            digest: "rings=2".into(),
        };
        assert_eq!(
            features_csv([("bark", &fv)]),
            "label,method,param_digest,v0,v1\nbark,fourier,rings=2,1,0.25\n"
        );
    }

    #[test]
    fn failure_messages_cannot_break_rows() {
        let rows = [BenchmarkRow {
            method: "glcm".into(),
            outcome: Err("bad, very\nbad".into()),
        }];
        let csv = benchmark_csv(&rows);
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(csv.lines().nth(1).unwrap().split(',').count(), 6);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"a\n").unwrap();
        write_atomic(&path, b"b\n").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"b\n");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
