use serde::{Deserialize, Serialize};

use super::{sign_from_entries, CrossingSign, DiagramError};

/// Where a segment of a tangle ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    /// Counterclockwise slot of a crossing; slots 0 and 2 carry the under-strand.
    Slot { crossing: u32, pos: u8 },
    /// k-th endpoint on the bottom disk, counted left to right.
    Bottom(u32),
    /// k-th endpoint on the top disk, counted left to right.
    Top(u32),
}

/// Oriented piece of strand between two crossings or boundary points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub tail: End,
    pub head: End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrandDirection {
    Parallel,
    Reversed,
}

/// How to cable a 1-1 tangle: `n` blackboard-parallel strands, each either
/// parallel or antiparallel to the original orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CableSpec {
    pub n: usize,
    pub pattern: Vec<StrandDirection>,
}

impl CableSpec {
    /// All strands follow the original orientation.
    pub fn parallel(n: usize) -> Self {
        CableSpec {
            n,
            pattern: vec![StrandDirection::Parallel; n],
        }
    }

    /// Neighbouring strands run in opposite directions, leftmost parallel.
    pub fn alternating(n: usize) -> Self {
        CableSpec {
            n,
            pattern: (0..n)
                .map(|k| {
                    if k % 2 == 0 {
                        StrandDirection::Parallel
                    } else {
                        StrandDirection::Reversed
                    }
                })
                .collect(),
        }
    }

    /// Short tag used in reports and cache keys, e.g. `"++"` or `"+-+"`.
    pub fn pattern_tag(&self) -> String {
        self.pattern
            .iter()
            .map(|d| match d {
                StrandDirection::Parallel => '+',
                StrandDirection::Reversed => '-',
            })
            .collect()
    }

    pub fn from_tag(tag: &str) -> Result<Self, DiagramError> {
        let pattern = tag
            .chars()
            .map(|c| match c {
                '+' => Ok(StrandDirection::Parallel),
                '-' => Ok(StrandDirection::Reversed),
                other => Err(DiagramError::InvalidCable(format!(
                    "orientation pattern character {other:?}; expected '+' or '-'"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let spec = CableSpec {
            n: pattern.len(),
            pattern,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), DiagramError> {
        if self.n == 0 {
            return Err(DiagramError::InvalidCable("n must be at least 1".into()));
        }
        if self.pattern.len() != self.n {
            return Err(DiagramError::InvalidCable(format!(
                "orientation pattern has {} entries for n = {}",
                self.pattern.len(),
                self.n
            )));
        }
        Ok(())
    }
}

/// Tangle projection in the strip with `n` endpoints on each of the bottom
/// and top boundary lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleDiagram {
    crossings: Vec<[u32; 4]>,
    segments: Vec<Segment>,
    bottom: Vec<u32>,
    top: Vec<u32>,
    signs: Vec<CrossingSign>,
    pattern: Vec<StrandDirection>,
}

impl TangleDiagram {
    /// Builds a tangle from its segments. Every crossing slot must be used by
    /// exactly one segment end, and the boundary endpoints must be
    /// `Bottom(0..n)` and `Top(0..n)` for one common `n`.
    pub fn from_segments(
        crossing_count: usize,
        segments: Vec<Segment>,
        pattern: Option<Vec<StrandDirection>>,
    ) -> Result<Self, DiagramError> {
        const EMPTY: u32 = u32::MAX;
        let mut crossings = vec![[EMPTY; 4]; crossing_count];
        let mut bottom = Vec::new();
        let mut top = Vec::new();
        let put = |list: &mut Vec<u32>, k: u32, s: u32| {
            let k = k as usize;
            if list.len() <= k {
                list.resize(k + 1, EMPTY);
            }
            if list[k] != EMPTY {
                return Err(DiagramError::InconsistentIncidence(format!(
                    "boundary point {k} used twice"
                )));
            }
            list[k] = s;
            Ok(())
        };
        for (s, seg) in segments.iter().enumerate() {
            let s = s as u32;
            for end in [seg.tail, seg.head] {
                match end {
                    End::Slot { crossing, pos } => {
                        let slot = crossings
                            .get_mut(crossing as usize)
                            .and_then(|c| c.get_mut(pos as usize))
                            .ok_or_else(|| {
                                DiagramError::InconsistentIncidence(format!(
                                    "segment {s} ends on missing slot {crossing}:{pos}"
                                ))
                            })?;
                        if *slot != EMPTY {
                            return Err(DiagramError::InconsistentIncidence(format!(
                                "slot {crossing}:{pos} used twice"
                            )));
                        }
                        *slot = s;
                    }
                    End::Bottom(k) => put(&mut bottom, k, s)?,
                    End::Top(k) => put(&mut top, k, s)?,
                }
            }
        }
        if crossings.iter().flatten().any(|&s| s == EMPTY) || bottom.contains(&EMPTY) || top.contains(&EMPTY) {
            return Err(DiagramError::InconsistentIncidence(
                "unused crossing slot or boundary point".into(),
            ));
        }
        if bottom.len() != top.len() {
            return Err(DiagramError::InconsistentIncidence(format!(
                "unbalanced tangle: {} bottom and {} top endpoints",
                bottom.len(),
                top.len()
            )));
        }

        let enters = |x: usize, p: u8| {
            segments[crossings[x][p as usize] as usize].head
                == End::Slot {
                    crossing: x as u32,
                    pos: p,
                }
        };
        let mut signs = Vec::with_capacity(crossing_count);
        for x in 0..crossing_count {
            let under_in = match (enters(x, 0), enters(x, 2)) {
                (true, false) => 0,
                (false, true) => 2,
                _ => {
                    return Err(DiagramError::InconsistentOrientation(format!(
                        "under-strand of crossing {x} is not consistently oriented"
                    )))
                }
            };
            let over_in = match (enters(x, 1), enters(x, 3)) {
                (true, false) => 1,
                (false, true) => 3,
                _ => {
                    return Err(DiagramError::InconsistentOrientation(format!(
                        "over-strand of crossing {x} is not consistently oriented"
                    )))
                }
            };
            signs.push(sign_from_entries(under_in, over_in));
        }

        let pattern = pattern.unwrap_or_else(|| vec![StrandDirection::Parallel; bottom.len()]);
        Ok(TangleDiagram {
            crossings,
            segments,
            bottom,
            top,
            signs,
            pattern,
        })
    }

    /// Segment ids at the four slots of each crossing.
    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// Segment ids at the bottom endpoints, left to right.
    pub fn bottom_endpoints(&self) -> &[u32] {
        &self.bottom
    }

    pub fn top_endpoints(&self) -> &[u32] {
        &self.top
    }

    /// Number of endpoints on each boundary line.
    pub fn width(&self) -> usize {
        self.bottom.len()
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

    /// Strand orientation pattern this tangle was cabled with.
    pub fn orientation_pattern(&self) -> &[StrandDirection] {
        &self.pattern
    }

    /// Renames segment `s` to `perm[s]`. Used to check label independence.
    pub fn relabel_segments(&self, perm: &[u32]) -> Result<TangleDiagram, DiagramError> {
        if perm.len() != self.segments.len() {
            return Err(DiagramError::InvalidCable(format!(
                "permutation of length {} for {} segments",
                perm.len(),
                self.segments.len()
            )));
        }
        let mut segments = vec![
            Segment {
                tail: End::Bottom(u32::MAX),
                head: End::Bottom(u32::MAX)
            };
            self.segments.len()
        ];
        for (s, seg) in self.segments.iter().enumerate() {
            segments[perm[s] as usize] = *seg;
        }
        TangleDiagram::from_segments(self.crossing_count(), segments, Some(self.pattern.clone()))
    }
}

/// Replaces each strand of a 1-1 tangle by `spec.n` blackboard-parallel
/// copies. Every crossing becomes an `n x n` grid of crossings of the same
/// over/under type.
///
/// Numbering: copy `k` of segment `s` is segment `s * n + k`; grid crossing
/// `(column, row)` of crossing `x` is `x * n^2 + row * n + column`, where
/// columns run along the over-strand and rows along the under-strand. The
/// internal grid segments follow all segment copies. With `n = 1` the
/// output equals the input.
pub fn cable(t: &TangleDiagram, spec: &CableSpec) -> Result<TangleDiagram, DiagramError> {
    spec.validate()?;
    if t.width() != 1 {
        return Err(DiagramError::NotOneOneTangle {
            bottom: t.bottom.len(),
            top: t.top.len(),
        });
    }
    let n = spec.n as u32;
    let reversed = |k: u32| spec.pattern[k as usize] == StrandDirection::Reversed;
    let enters = |x: usize, p: u8| {
        t.segments[t.crossings[x][p as usize] as usize].head
            == End::Slot {
                crossing: x as u32,
                pos: p,
            }
    };
    // Per crossing: does the under-strand run from slot 0 to slot 2, and
    // does the over-strand run from slot 3 to slot 1.
    let frame: Vec<(bool, bool)> = (0..t.crossing_count()).map(|x| (enters(x, 0), enters(x, 3))).collect();
    let grid_id = |x: u32, col: u32, row: u32| x * n * n + row * n + col;
    let column_of = |x: u32, k: u32| {
        if frame[x as usize].0 {
            k
        } else {
            n - 1 - k
        }
    };
    let row_of = |x: u32, k: u32| {
        if frame[x as usize].1 {
            n - 1 - k
        } else {
            k
        }
    };

    let copy_end = |end: End, k: u32, is_tail: bool| -> End {
        match end {
            End::Slot { crossing: x, pos } => {
                let (col, row) = match pos {
                    0 => (column_of(x, k), 0),
                    2 => (column_of(x, k), n - 1),
                    1 => (n - 1, row_of(x, k)),
                    _ => (0, row_of(x, k)),
                };
                End::Slot {
                    crossing: grid_id(x, col, row),
                    pos,
                }
            }
            // Heading up at the bottom (or into the top) means left is west.
            End::Bottom(b) => End::Bottom(b * n + if is_tail { k } else { n - 1 - k }),
            End::Top(b) => End::Top(b * n + if is_tail { n - 1 - k } else { k }),
        }
    };

    let mut segments = Vec::with_capacity(t.segments.len() * spec.n + 2 * t.crossing_count() * spec.n * spec.n);
    for seg in &t.segments {
        for k in 0..n {
            let tail = copy_end(seg.tail, k, true);
            let head = copy_end(seg.head, k, false);
            segments.push(if reversed(k) {
                Segment { tail: head, head: tail }
            } else {
                Segment { tail, head }
            });
        }
    }
    for x in 0..t.crossing_count() as u32 {
        let (under_north, over_east) = frame[x as usize];
        for col in 0..n {
            let k = if under_north { col } else { n - 1 - col };
            let north = under_north != reversed(k);
            for row in 1..n {
                let below = End::Slot {
                    crossing: grid_id(x, col, row - 1),
                    pos: 2,
                };
                let above = End::Slot {
                    crossing: grid_id(x, col, row),
                    pos: 0,
                };
                segments.push(if north {
                    Segment {
                        tail: below,
                        head: above,
                    }
                } else {
                    Segment {
                        tail: above,
                        head: below,
                    }
                });
            }
        }
        for row in 0..n {
            let k = if over_east { n - 1 - row } else { row };
            let east = over_east != reversed(k);
            for col in 1..n {
                let west = End::Slot {
                    crossing: grid_id(x, col - 1, row),
                    pos: 1,
                };
                let east_end = End::Slot {
                    crossing: grid_id(x, col, row),
                    pos: 3,
                };
                segments.push(if east {
                    Segment {
                        tail: west,
                        head: east_end,
                    }
                } else {
                    Segment {
                        tail: east_end,
                        head: west,
                    }
                });
            }
        }
    }

    TangleDiagram::from_segments(
        t.crossing_count() * spec.n * spec.n,
        segments,
        Some(spec.pattern.clone()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::KnotDiagram;

    fn trefoil() -> KnotDiagram {
        KnotDiagram::from_pd(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], None, None).unwrap()
    }

    #[test]
    fn cut_unknot_is_a_single_strand() {
        let t = KnotDiagram::unknot().cut_at_marked();
        assert_eq!(t.crossing_count(), 0);
        assert_eq!(t.width(), 1);
        let c = cable(&t, &CableSpec::parallel(3)).unwrap();
        assert_eq!(c.crossing_count(), 0);
        assert_eq!(c.width(), 3);
        assert_eq!(c.segment_count(), 3);
    }

    #[test]
    fn cabling_multiplies_crossings_by_n_squared() {
        let t = trefoil().cut_at_marked();
        assert_eq!(t.crossing_count(), 3);
        for n in 1..=4 {
            let c = cable(&t, &CableSpec::parallel(n)).unwrap();
            assert_eq!(c.crossing_count(), 9 * n * n / 3);
            assert_eq!(c.width(), n);
            assert_eq!(c.n_minus(), 3 * n * n);
        }
    }

    #[test]
    fn cable_of_one_is_identity() {
        let t = trefoil().cut_at_marked();
        assert_eq!(cable(&t, &CableSpec::parallel(1)).unwrap(), t);
    }

    #[test]
    fn parallel_cable_of_positive_crossings_stays_positive() {
        let t = trefoil().mirror().cut_at_marked();
        assert_eq!((t.n_plus(), t.n_minus()), (3, 0));
        let c = cable(&t, &CableSpec::parallel(2)).unwrap();
        assert_eq!((c.n_plus(), c.n_minus()), (12, 0));
    }

    #[test]
    fn alternating_cable_balances_signs() {
        let t = trefoil().cut_at_marked();
        let c = cable(&t, &CableSpec::alternating(2)).unwrap();
        assert_eq!((c.n_plus(), c.n_minus()), (6, 6));
        let c = cable(&t, &CableSpec::alternating(3)).unwrap();
        // 5 of 9 strand pairs agree in direction
        assert_eq!((c.n_plus(), c.n_minus()), (12, 15));
    }

    #[test]
    fn cable_rejects_wide_input() {
        let t = trefoil().cut_at_marked();
        let c = cable(&t, &CableSpec::parallel(2)).unwrap();
        assert!(matches!(
            cable(&c, &CableSpec::parallel(2)),
            Err(DiagramError::NotOneOneTangle { .. })
        ));
        assert!(cable(&t, &CableSpec::parallel(0)).is_err());
    }

    #[test]
    fn pattern_tags_round_trip() {
        let s = CableSpec::from_tag("+-+").unwrap();
        assert_eq!(s, CableSpec::alternating(3));
        assert_eq!(s.pattern_tag(), "+-+");
        assert!(CableSpec::from_tag("+x").is_err());
    }
}
