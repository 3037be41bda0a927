use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{DiagramError, KnotDiagram};

/// JSON form of a diagram: `{"name": ..., "pd": [[a,b,c,d], ...], "marked_edge": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub pd: Vec<[u32; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked_edge: Option<u32>,
}

impl PdRecord {
    pub fn into_diagram(self) -> Result<KnotDiagram, DiagramError> {
        KnotDiagram::from_pd(self.pd, self.marked_edge, self.name)
    }
}

impl From<&KnotDiagram> for PdRecord {
    fn from(d: &KnotDiagram) -> Self {
        PdRecord {
            name: d.name().map(str::to_string),
            pd: d.crossings().to_vec(),
            marked_edge: Some(d.marked_edge()),
        }
    }
}

fn crossing_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"X\s*[\(\[]\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*[\)\]]").expect("static regex")
    })
}

/// Parses PD text: a sequence of `X(a,b,c,d)` (or `X[a,b,c,d]`) tokens,
/// optionally wrapped in `PD[...]` and separated by whitespace or commas.
/// Empty input is the round unknot.
pub fn parse_pd(text: &str) -> Result<KnotDiagram, DiagramError> {
    let crossings = parse_crossings(text)?;
    KnotDiagram::from_pd(crossings, None, None)
}

fn parse_crossings(text: &str) -> Result<Vec<[u32; 4]>, DiagramError> {
    let mut body = text.trim();
    for prefix in ["PD[", "PD("] {
        if let Some(rest) = body.strip_prefix(prefix) {
            body = rest
                .strip_suffix(if prefix.ends_with('[') { ']' } else { ')' })
                .ok_or_else(|| DiagramError::MalformedPd("unterminated PD wrapper".into()))?;
        }
    }
    let mut crossings = Vec::new();
    let mut last = 0;
    let junk = |s: &str| s.chars().any(|c| !(c.is_whitespace() || c == ','));
    for cap in crossing_re().captures_iter(body) {
        let m = cap.get(0).expect("whole match");
        if junk(&body[last..m.start()]) {
            return Err(DiagramError::MalformedPd(format!(
                "unexpected text {:?}",
                body[last..m.start()].trim()
            )));
        }
        last = m.end();
        let mut tuple = [0u32; 4];
        for (i, slot) in tuple.iter_mut().enumerate() {
            *slot = cap[i + 1]
                .parse()
                .map_err(|e| DiagramError::MalformedPd(format!("edge label: {e}")))?;
        }
        crossings.push(tuple);
    }
    if junk(&body[last..]) {
        return Err(DiagramError::MalformedPd(format!(
            "unexpected text {:?}",
            body[last..].trim()
        )));
    }
    Ok(crossings)
}

/// Parses one line of a PD file: either `name: X(...) X(...)` or a JSON
/// [`PdRecord`] object.
pub fn parse_pd_line(line: &str) -> Result<KnotDiagram, DiagramError> {
    let line = line.trim();
    if line.starts_with('{') {
        return parse_pd_json(line);
    }
    let (name, body) = match line.split_once(':') {
        Some((name, body)) => (Some(name.trim().to_string()), body),
        None => (None, line),
    };
    KnotDiagram::from_pd(parse_crossings(body)?, None, name)
}

pub fn parse_pd_json(text: &str) -> Result<KnotDiagram, DiagramError> {
    let rec: PdRecord = serde_json::from_str(text).map_err(|e| DiagramError::MalformedPd(e.to_string()))?;
    rec.into_diagram()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_trefoil_tokens() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.edge_count(), 6);
        let d2 = parse_pd("PD[X[1, 4, 2, 5], X[3, 6, 4, 1], X[5, 2, 6, 3]]").unwrap();
        assert_eq!(d.crossings(), d2.crossings());
    }

    #[test]
    fn empty_text_is_the_unknot() {
        let d = parse_pd("").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.edge_count(), 1);
    }

    #[test]
    fn kink_convention() {
        let d = parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(d.crossing_count(), 1);
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_pd("X(1,2,3)"), Err(DiagramError::MalformedPd(_))));
        assert!(matches!(
            parse_pd("X(1,4,2,5) Y(3,6,4,1)"),
            Err(DiagramError::MalformedPd(_))
        ));
    }

    #[test]
    fn named_lines_and_json() {
        let d = parse_pd_line("3_1: X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(d.name(), Some("3_1"));
        let j = parse_pd_line(r#"{"name":"k","pd":[[1,4,2,5],[3,6,4,1],[5,2,6,3]],"marked_edge":3}"#).unwrap();
        assert_eq!(j.marked_edge(), 3);
        let back = serde_json::to_string(&PdRecord::from(&j)).unwrap();
        assert_eq!(parse_pd_json(&back).unwrap(), j);
    }
}
