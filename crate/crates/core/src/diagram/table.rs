//! Bundled table of prime knots through seven crossings, with a few extra
//! diagrams of the unknot, trefoil and figure-eight for invariance checks.
//!
//! Reference data (genus, determinant, Jones polynomial, reduced GF(2)
//! Khovanov homology) come from KnotInfo; see the header of
//! `data/knots.jsonl`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{DiagramError, KnotDiagram};
use crate::jonesoracle::{LaurentPoly, Var};

const BUNDLED: &str = include_str!("../../data/knots.jsonl");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    /// `"3_1"` for a standard diagram, `"3_1/r1"` for an alternative one.
    pub id: String,
    pub knot: String,
    pub pd: Vec<[u32; 4]>,
    pub note: String,
    pub genus: u32,
    pub determinant: u64,
    /// Jones polynomial as `[exponent of t, coefficient]` pairs.
    pub jones_t: Vec<[i64; 2]>,
    /// Reduced Khovanov homology over GF(2) as `[i, j, dim]` triples.
    pub kh_reduced_mod2: Vec<[i64; 3]>,
}

impl TableEntry {
    pub fn diagram(&self) -> Result<KnotDiagram, DiagramError> {
        KnotDiagram::from_pd(self.pd.clone(), None, Some(self.id.clone()))
    }

    pub fn is_variant(&self) -> bool {
        self.id != self.knot
    }

    pub fn is_unknot(&self) -> bool {
        self.knot == "0_1"
    }

    pub fn crossing_count(&self) -> usize {
        self.pd.len()
    }

    /// Jones polynomial rewritten in `q` with `t = q^2`.
    pub fn jones_q(&self) -> LaurentPoly {
        LaurentPoly::from_terms(Var::Q, self.jones_t.iter().map(|&[e, c]| (2 * e as i32, c)))
    }

    pub fn reference_kh(&self) -> BTreeMap<(i32, i32), u64> {
        self.kh_reduced_mod2
            .iter()
            .map(|&[i, j, d]| ((i as i32, j as i32), d as u64))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotTable {
    entries: Vec<TableEntry>,
}

impl KnotTable {
    /// Parses JSON lines, skipping blank lines and `#` comments.
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let mut entries = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let e: TableEntry = serde_json::from_str(line)
                .map_err(|err| DiagramError::MalformedPd(format!("table line {}: {err}", no + 1)))?;
            e.diagram()?;
            entries.push(e);
        }
        Ok(KnotTable { entries })
    }

    pub fn bundled() -> &'static KnotTable {
        static TABLE: OnceLock<KnotTable> = OnceLock::new();
        TABLE.get_or_init(|| KnotTable::parse(BUNDLED).expect("bundled knot table is valid"))
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Result<&TableEntry, DiagramError> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| DiagramError::UnknownKnot(id.to_string()))
    }

    /// Standard diagrams only, in table order.
    pub fn knots(&self) -> impl Iterator<Item = &TableEntry> {
        self.entries.iter().filter(|e| !e.is_variant())
    }

    pub fn variants_of<'a>(&'a self, knot: &'a str) -> impl Iterator<Item = &'a TableEntry> {
        self.entries.iter().filter(move |e| e.knot == knot && e.is_variant())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_contents() {
        let t = KnotTable::bundled();
        assert_eq!(t.knots().count(), 15);
        let tref = t.get("3_1").unwrap();
        assert_eq!((tref.genus, tref.determinant), (1, 3));
        assert_eq!(tref.diagram().unwrap().writhe(), 3);
        assert_eq!(t.variants_of("3_1").count(), 3);
        assert!(t.get("9_42").is_err());
        assert_eq!(t.get("0_1").unwrap().diagram().unwrap().crossing_count(), 0);
    }

    #[test]
    fn variants_have_expected_shape() {
        let t = KnotTable::bundled();
        let w = |id: &str| t.get(id).unwrap().diagram().unwrap().writhe();
        assert_eq!((w("0_1/k1"), w("0_1/k2")), (1, -2));
        assert_eq!((w("3_1/r1"), w("3_1/braid"), w("3_1/r2")), (4, 3, 3));
        assert_eq!((w("4_1/r1"), w("4_1/braid"), w("4_1/r2")), (-1, 0, 0));
        assert_eq!(t.get("4_1/r2").unwrap().crossing_count(), 6);
    }

    #[test]
    fn reference_ranks_equal_determinants() {
        // every knot in the table is thin, so the reduced rank is the determinant
        for e in KnotTable::bundled().entries() {
            let rank: u64 = e.reference_kh().values().sum();
            assert_eq!(rank, e.determinant, "{}", e.id);
        }
    }

    #[test]
    fn comments_and_errors() {
        let ok = KnotTable::parse("# header\n\n").unwrap();
        assert!(ok.entries().is_empty());
        assert!(KnotTable::parse("{\"id\":1}").is_err());
    }
}
