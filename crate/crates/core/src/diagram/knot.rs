use std::collections::BTreeMap;

use super::tangle::{End, Segment, TangleDiagram};
use super::{sign_from_entries, CrossingSign, DiagramError};

/// A position on a crossing: crossing index and counterclockwise slot 0..4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub crossing: u32,
    pub pos: u8,
}

/// Orientation of an edge: it leaves the crossing at `tail` and enters at `head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeEnds {
    pub tail: Slot,
    pub head: Slot,
}

/// Oriented knot diagram in PD form with a marked edge.
///
/// The crossing-free round unknot is represented by an empty crossing list
/// and the single closed edge `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotDiagram {
    name: Option<String>,
    crossings: Vec<[u32; 4]>,
    edges: BTreeMap<u32, EdgeEnds>,
    /// Edges in the order they are met walking along the knot from the
    /// incoming under-strand of crossing 0.
    walk: Vec<u32>,
    signs: Vec<CrossingSign>,
    marked_edge: u32,
}

impl KnotDiagram {
    /// The crossing-free round unknot.
    pub fn unknot() -> Self {
        KnotDiagram {
            name: Some("0_1".to_string()),
            crossings: Vec::new(),
            edges: BTreeMap::new(),
            walk: vec![1],
            signs: Vec::new(),
            marked_edge: 1,
        }
    }

    /// Validates a PD crossing list. `marked_edge` defaults to the lowest edge label.
    pub fn from_pd(
        crossings: Vec<[u32; 4]>,
        marked_edge: Option<u32>,
        name: Option<String>,
    ) -> Result<Self, DiagramError> {
        if crossings.is_empty() {
            let mut d = KnotDiagram::unknot();
            d.name = name;
            if let Some(e) = marked_edge {
                if e != 1 {
                    return Err(DiagramError::UnknownEdge(e));
                }
            }
            return Ok(d);
        }

        let mut occurrences: BTreeMap<u32, Vec<Slot>> = BTreeMap::new();
        for (x, tuple) in crossings.iter().enumerate() {
            for (p, &e) in tuple.iter().enumerate() {
                occurrences.entry(e).or_default().push(Slot {
                    crossing: x as u32,
                    pos: p as u8,
                });
            }
        }
        for (e, occ) in &occurrences {
            if occ.len() != 2 {
                return Err(DiagramError::InconsistentIncidence(format!(
                    "edge {e} used {} times",
                    occ.len()
                )));
            }
        }
        let other_end = |e: u32, here: Slot| -> Slot {
            let occ = &occurrences[&e];
            if occ[0] == here {
                occ[1]
            } else {
                occ[0]
            }
        };

        // Walk the knot starting on the incoming under-strand of crossing 0.
        let start = crossings[0][0];
        let start_head = Slot { crossing: 0, pos: 0 };
        let mut edges = BTreeMap::new();
        let mut walk = Vec::new();
        let mut e = start;
        let mut head = start_head;
        loop {
            if head.pos == 2 {
                return Err(DiagramError::InconsistentOrientation(format!(
                    "edge {e} enters crossing {} on its outgoing under-strand slot",
                    head.crossing
                )));
            }
            let tail = other_end(e, head);
            if edges.insert(e, EdgeEnds { tail, head }).is_some() {
                return Err(DiagramError::InconsistentIncidence(format!("edge {e} traversed twice")));
            }
            walk.push(e);
            let exit = Slot {
                crossing: head.crossing,
                pos: (head.pos + 2) % 4,
            };
            let next = crossings[exit.crossing as usize][exit.pos as usize];
            let next_head = other_end(next, exit);
            if next == start {
                if next_head != start_head {
                    return Err(DiagramError::InconsistentOrientation(format!(
                        "walk returns to edge {start} from the wrong side"
                    )));
                }
                break;
            }
            e = next;
            head = next_head;
        }
        if edges.len() != occurrences.len() {
            return Err(DiagramError::MultiComponent {
                visited: edges.len(),
                total: occurrences.len(),
            });
        }

        let enters = |x: usize, p: u8| {
            let e = crossings[x][p as usize];
            edges[&e].head
                == Slot {
                    crossing: x as u32,
                    pos: p,
                }
        };
        let signs = (0..crossings.len())
            .map(|x| {
                let over_in = if enters(x, 3) { 3 } else { 1 };
                sign_from_entries(0, over_in)
            })
            .collect();

        let marked_edge = match marked_edge {
            Some(m) if edges.contains_key(&m) => m,
            Some(m) => return Err(DiagramError::UnknownEdge(m)),
            None => *edges.keys().next().expect("nonempty"),
        };

        Ok(KnotDiagram {
            name,
            crossings,
            edges,
            walk,
            signs,
            marked_edge,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Number of edges; the round unknot has one closed edge.
    pub fn edge_count(&self) -> usize {
        self.edges.len().max(1)
    }

    /// Edge labels in increasing order.
    pub fn edge_labels(&self) -> Vec<u32> {
        if self.crossings.is_empty() {
            vec![1]
        } else {
            self.edges.keys().copied().collect()
        }
    }

    /// Edge labels in the order of the knot's orientation.
    pub fn walk(&self) -> &[u32] {
        &self.walk
    }

    pub fn edge_ends(&self, e: u32) -> Option<EdgeEnds> {
        self.edges.get(&e).copied()
    }

    pub fn signs(&self) -> &[CrossingSign] {
        &self.signs
    }

    pub fn n_plus(&self) -> usize {
        self.signs.iter().filter(|s| **s == CrossingSign::Positive).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.len() - self.n_plus()
    }

    pub fn writhe(&self) -> i32 {
        self.signs.iter().map(|s| s.as_i32()).sum()
    }

    pub fn marked_edge(&self) -> u32 {
        self.marked_edge
    }

    pub fn with_marked_edge(mut self, e: u32) -> Result<Self, DiagramError> {
        if !self.edge_labels().contains(&e) {
            return Err(DiagramError::UnknownEdge(e));
        }
        self.marked_edge = e;
        Ok(self)
    }

    /// Switches every crossing. Edge labels, orientation and the marked edge
    /// are kept; each tuple is rotated so it again starts at the incoming
    /// under-strand.
    pub fn mirror(&self) -> KnotDiagram {
        if self.crossings.is_empty() {
            return self.clone();
        }
        let crossings = self
            .crossings
            .iter()
            .zip(&self.signs)
            .map(|(&[a, b, c, d], sign)| match sign {
                CrossingSign::Positive => [d, a, b, c],
                CrossingSign::Negative => [b, c, d, a],
            })
            .collect();
        let name = self.name.as_ref().map(|n| mirror_name(n));
        KnotDiagram::from_pd(crossings, Some(self.marked_edge), name).expect("mirror of a valid diagram is valid")
    }

    /// Removes a small arc from the middle of the marked edge, leaving a 1-1
    /// tangle whose strand runs from the bottom endpoint to the top one.
    ///
    /// Segments are numbered by increasing edge label, with the marked edge
    /// contributing its lower piece first and its upper piece last.
    pub fn cut_at_marked(&self) -> TangleDiagram {
        if self.crossings.is_empty() {
            let seg = Segment {
                tail: End::Bottom(0),
                head: End::Top(0),
            };
            return TangleDiagram::from_segments(0, vec![seg], None).expect("a single strand is a valid tangle");
        }
        let to_end = |s: Slot| End::Slot {
            crossing: s.crossing,
            pos: s.pos,
        };
        let mut segments = Vec::with_capacity(self.edges.len() + 1);
        let mut upper_piece = None;
        for (&e, ends) in &self.edges {
            if e == self.marked_edge {
                segments.push(Segment {
                    tail: End::Bottom(0),
                    head: to_end(ends.head),
                });
                upper_piece = Some(Segment {
                    tail: to_end(ends.tail),
                    head: End::Top(0),
                });
            } else {
                segments.push(Segment {
                    tail: to_end(ends.tail),
                    head: to_end(ends.head),
                });
            }
        }
        segments.push(upper_piece.expect("marked edge exists"));
        TangleDiagram::from_segments(self.crossings.len(), segments, None)
            .expect("cut of a valid knot diagram is a valid tangle")
    }

    /// PD text, `X(a,b,c,d) X(...)`.
    pub fn to_pd_string(&self) -> String {
        self.crossings
            .iter()
            .map(|[a, b, c, d]| format!("X({a},{b},{c},{d})"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub(crate) fn mirror_name(name: &str) -> String {
    match name.strip_prefix('m') {
        Some(rest) if rest.chars().next().is_some_and(|c| c.is_ascii_digit()) => rest.to_string(),
        _ => format!("m{name}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> KnotDiagram {
        KnotDiagram::from_pd(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], None, None).unwrap()
    }

    #[test]
    fn trefoil_counts_and_writhe() {
        let t = trefoil();
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.edge_count(), 6);
        assert_eq!(t.writhe(), -3);
        assert_eq!(t.marked_edge(), 1);
        assert_eq!(t.walk(), &[1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn mirror_negates_writhe_and_is_an_involution() {
        let t = trefoil();
        let m = t.mirror();
        assert_eq!(m.writhe(), 3);
        assert_eq!(m.n_plus(), t.n_minus());
        assert_eq!(m.mirror(), t);
        let u = KnotDiagram::unknot();
        assert_eq!(u.mirror(), u);
    }

    #[test]
    fn figure_eight_signs() {
        let d = KnotDiagram::from_pd(vec![[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]], None, None).unwrap();
        assert_eq!((d.n_plus(), d.n_minus()), (2, 2));
        let t = d.cut_at_marked();
        assert_eq!(t.crossing_count(), 4);
        assert_eq!((t.n_plus(), t.n_minus()), (2, 2));
    }

    #[test]
    fn repeated_edge_kink_is_accepted() {
        let d = KnotDiagram::from_pd(vec![[1, 1, 2, 2]], None, None).unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.edge_count(), 2);
        assert_eq!(d.writhe(), 1);
    }

    #[test]
    fn incidence_errors() {
        let err = KnotDiagram::from_pd(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 7]], None, None).unwrap_err();
        assert!(matches!(err, DiagramError::InconsistentIncidence(_)));
        // two disjoint kinks: a two-component link
        let err = KnotDiagram::from_pd(vec![[1, 1, 2, 2], [3, 3, 4, 4]], None, None).unwrap_err();
        assert!(matches!(err, DiagramError::MultiComponent { .. }));
    }

    #[test]
    fn unknown_marked_edge() {
        let err = KnotDiagram::from_pd(vec![[1, 1, 2, 2]], Some(9), None).unwrap_err();
        assert_eq!(err, DiagramError::UnknownEdge(9));
    }
}
