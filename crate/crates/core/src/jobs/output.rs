//! JSON, JSON-lines and CSV rendering.

use serde::Serialize;

use super::{JobError, SsReport};
use crate::khcomplex::KhReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = JobError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(JobError::Input(format!("format {other:?}: expected json or csv"))),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, JobError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| JobError::Output(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// One compact JSON object per line.
pub fn to_jsonl<T: Serialize>(items: &[T]) -> Result<String, JobError> {
    let mut s = String::new();
    for it in items {
        s.push_str(&serde_json::to_string(it).map_err(|e| JobError::Output(e.to_string()))?);
        s.push('\n');
    }
    Ok(s)
}

/// CSV with a header row taken from the field names.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, JobError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| JobError::Output(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| JobError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| JobError::Output(e.to_string()))
}

/// Flat form of a homology report: one row per nonzero `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimRow {
    pub knot: String,
    pub n: usize,
    pub i: i64,
    pub j: i64,
    pub dim: i64,
}

impl DimRow {
    pub fn from_reports(reports: &[KhReport]) -> Vec<DimRow> {
        reports
            .iter()
            .flat_map(|r| {
                r.dims.iter().map(move |&[i, j, dim]| DimRow {
                    knot: r.knot.clone().unwrap_or_default(),
                    n: r.n,
                    i,
                    j,
                    dim,
                })
            })
            .collect()
    }
}

/// Flat form of spectral-sequence pages: one row per nonzero `(r, p, deg)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageRow {
    pub knot: String,
    pub n: usize,
    pub r: usize,
    pub p: i64,
    pub deg: i64,
    pub dim: i64,
    pub stabilized_at: usize,
}

impl PageRow {
    pub fn from_reports(reports: &[SsReport]) -> Vec<PageRow> {
        let mut out = Vec::new();
        for rep in reports {
            for page in &rep.pages {
                for &[p, deg, dim] in &page.dims {
                    out.push(PageRow {
                        knot: rep.knot.clone(),
                        n: rep.n,
                        r: page.r,
                        p,
                        deg,
                        dim,
                        stabilized_at: page.stabilized_at,
                    });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::{compute, sweep, JobConfig, Subject};
    use super::*;

    #[test]
    fn csv_rows() {
        let s = Subject::from_table("3_1").unwrap();
        let (r, _) = compute(&s, 1, &JobConfig::default()).unwrap();
        let text = to_csv(&DimRow::from_reports(&[r])).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "knot,n,i,j,dim");
        assert_eq!(lines.len(), 4);

        let t = sweep(&[s], &[1], &JobConfig::default());
        let text = to_csv(&t.rows).unwrap();
        assert!(
            text.starts_with("knot,n,crossings,cable_crossings,status,total_rank,width,rank_check,chi_check,detail\n")
        );
        assert!(text.contains("3_1,1,3,3,ok,3,1,pass,pass,"));
    }

    #[test]
    fn formats() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
        assert_eq!(to_jsonl(&[1, 2]).unwrap(), "1\n2\n");
        assert_eq!(to_json(&[1]).unwrap(), "[\n  1\n]\n");
    }
}
