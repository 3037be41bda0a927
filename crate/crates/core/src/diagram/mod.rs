//! Knot and tangle diagrams.
//!
//! A [`KnotDiagram`] is a planar diagram code: one `[a, b, c, d]` tuple per
//! crossing, listing the four incident edges counterclockwise starting from
//! the incoming under-strand. Cutting the knot open at its marked edge gives
//! a 1-1 [`TangleDiagram`] in the strip, and [`cable`] replaces every strand
//! of a tangle by `n` blackboard-parallel copies.

mod knot;
mod moves;
mod pd;
pub mod table;
mod tangle;

pub use knot::{EdgeEnds, KnotDiagram, Slot};
pub use pd::{parse_pd, parse_pd_json, parse_pd_line, PdRecord};
pub use table::{KnotTable, TableEntry};
pub use tangle::{cable, CableSpec, End, Segment, StrandDirection, TangleDiagram};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed PD code: {0}")]
    MalformedPd(String),
    #[error("inconsistent incidence: {0}")]
    InconsistentIncidence(String),
    #[error("inconsistent orientation: {0}")]
    InconsistentOrientation(String),
    #[error("diagram has more than one link component ({visited} of {total} edges reachable from the first crossing)")]
    MultiComponent { visited: usize, total: usize },
    #[error("marked edge {0} does not occur in the diagram")]
    UnknownEdge(u32),
    #[error("cable input must be a 1-1 tangle, got {bottom}-{top}")]
    NotOneOneTangle { bottom: usize, top: usize },
    #[error("invalid cable specification: {0}")]
    InvalidCable(String),
    #[error("unknown knot {0:?}")]
    UnknownKnot(String),
}

/// Sign of an oriented crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CrossingSign {
    Positive,
    Negative,
}

impl CrossingSign {
    pub fn flip(self) -> Self {
        match self {
            CrossingSign::Positive => CrossingSign::Negative,
            CrossingSign::Negative => CrossingSign::Positive,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            CrossingSign::Positive => 1,
            CrossingSign::Negative => -1,
        }
    }
}

/// Sign of a crossing from which slots the under- and over-strands enter by.
///
/// Slots are counterclockwise positions 0..4 with the under-strand on slots
/// 0 and 2. The crossing is positive when the over-strand enters a quarter
/// turn clockwise from where the under-strand enters.
pub(crate) fn sign_from_entries(under_in: u8, over_in: u8) -> CrossingSign {
    if (over_in + 4 - under_in) % 4 == 3 {
        CrossingSign::Positive
    } else {
        CrossingSign::Negative
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_rule_is_rotation_invariant() {
        assert_eq!(sign_from_entries(0, 3), CrossingSign::Positive);
        assert_eq!(sign_from_entries(0, 1), CrossingSign::Negative);
        assert_eq!(sign_from_entries(2, 1), CrossingSign::Positive);
        assert_eq!(sign_from_entries(2, 3), CrossingSign::Negative);
    }
}
