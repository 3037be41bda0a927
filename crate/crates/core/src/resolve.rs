//! Crossingless resolutions of a tangle diagram.
//!
//! Bit `c` of a [`ResolutionState`] picks the smoothing at crossing `c`.
//! With the crossing's slots `[s0, s1, s2, s3]` listed counterclockwise
//! from an under-strand end:
//!
//! * bit 0 joins `s0-s3` and `s1-s2`,
//! * bit 1 joins `s0-s1` and `s2-s3`.
//!
//! Bit 1 is Kauffman's A-smoothing. Under this labeling the cube computes
//! the homology of the mirror of the diagram in Khovanov's convention;
//! mirror the input diagram to get the other reading.
//!
//! Components of a resolution are numbered by their smallest segment id.

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{End, TangleDiagram};

/// Default upper bound on the number of crossings of an enumerated cube.
pub const DEFAULT_CUBE_BOUND: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolveError {
    #[error("state has {got} bits but the tangle has {expected} crossings")]
    StateLengthMismatch { expected: usize, got: usize },
    #[error("bit {0} of the state is already 1")]
    BitAlreadyOne(usize),
    #[error("crossing index {index} out of range for {len} crossings")]
    CrossingOutOfRange { index: usize, len: usize },
    #[error(
        "cube has 2^{crossings} states, above the bound 2^{bound}; use a smaller n or diagram, \
         raise --cube-bound, or assemble single quantum gradings with a j-slice filter"
    )]
    CubeTooLarge { crossings: usize, bound: usize },
    #[error("zero saddle at crossing {crossing} of state {state:#x} joins two non-backtracking resolutions")]
    ZeroSaddleAnomaly { state: u64, crossing: usize },
}

/// Choice of smoothing at every crossing; crossing `c` is bit `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResolutionState {
    bits: u64,
    len: usize,
}

impl ResolutionState {
    pub fn new(bits: u64, len: usize) -> Self {
        assert!(len <= 64, "at most 64 crossings");
        debug_assert!(len == 64 || bits >> len == 0);
        ResolutionState { bits, len }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let v = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        ResolutionState::new(v, bits.len())
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, c: usize) -> bool {
        (self.bits >> c) & 1 == 1
    }

    /// Number of 1-smoothings.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn with_bit(&self, c: usize) -> Self {
        ResolutionState::new(self.bits | (1 << c), self.len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ArcKind {
    Through,
    BottomBottom,
    TopTop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ComponentKind {
    Circle,
    Arc(ArcKind),
}

/// A crossingless configuration with its components classified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedTangle {
    component_of: Vec<u32>,
    kinds: Vec<ComponentKind>,
    circle_index: Vec<Option<u32>>,
    circles: Vec<u32>,
    backtracks: bool,
}

impl ResolvedTangle {
    /// Component index of each segment.
    pub fn component_map(&self) -> &[u32] {
        &self.component_of
    }

    pub fn component_of(&self, segment: u32) -> u32 {
        self.component_of[segment as usize]
    }

    pub fn component_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[ComponentKind] {
        &self.kinds
    }

    /// Component indices of the closed components, in increasing order.
    pub fn circles(&self) -> &[u32] {
        &self.circles
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    /// Position of a component among the circles, if it is one.
    pub fn circle_index(&self, component: u32) -> Option<u32> {
        self.circle_index[component as usize]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (u32, ArcKind)> + '_ {
        self.kinds.iter().enumerate().filter_map(|(i, k)| match k {
            ComponentKind::Arc(a) => Some((i as u32, *a)),
            ComponentKind::Circle => None,
        })
    }

    /// Some arc has both endpoints on the same boundary line.
    pub fn backtracks(&self) -> bool {
        self.backtracks
    }
}

/// How the resolution changes when one crossing switches from 0 to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SaddleKind {
    /// Two components of the 0-side become `target` on the 1-side.
    Merge { sources: [u32; 2], target: u32 },
    /// One component of the 0-side becomes two on the 1-side.
    Split { source: u32, targets: [u32; 2] },
    /// Component count unchanged; at least one side backtracks.
    Zero,
}

/// Reusable union-find machinery for resolving many states of one tangle.
pub struct Resolver<'a> {
    tangle: &'a TangleDiagram,
    parent: Vec<u32>,
    label: Vec<u32>,
    tags: Vec<u8>,
}

impl<'a> Resolver<'a> {
    pub fn new(tangle: &'a TangleDiagram) -> Self {
        let s = tangle.segment_count();
        Resolver {
            tangle,
            parent: vec![0; s],
            label: vec![u32::MAX; s],
            tags: Vec::new(),
        }
    }

    pub fn tangle(&self) -> &'a TangleDiagram {
        self.tangle
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller id as root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }

    /// Canonical component label of every segment for the given state bits;
    /// returns the number of components.
    fn label_components(&mut self, bits: u64, out: &mut [u32]) -> u32 {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        let crossings = self.tangle.crossings();
        for (c, &[s0, s1, s2, s3]) in crossings.iter().enumerate() {
            if (bits >> c) & 1 == 0 {
                self.union(s0, s3);
                self.union(s1, s2);
            } else {
                self.union(s0, s1);
                self.union(s2, s3);
            }
        }
        self.label.iter_mut().for_each(|l| *l = u32::MAX);
        let mut next = 0;
        for s in 0..out.len() as u32 {
            let r = self.find(s) as usize;
            if self.label[r] == u32::MAX {
                self.label[r] = next;
                next += 1;
            }
            out[s as usize] = self.label[r];
        }
        next
    }

    /// Backtracking flag and circle count, without building a [`ResolvedTangle`].
    pub fn summary(&mut self, bits: u64, scratch: &mut Vec<u32>) -> (bool, u32) {
        scratch.resize(self.tangle.segment_count(), 0);
        let comps = self.label_components(bits, scratch);
        let (backtracks, arcs) = classify_arcs(self.tangle, scratch, &mut self.tags, None);
        (backtracks, comps - arcs)
    }

    pub fn resolve(&mut self, state: ResolutionState) -> Result<ResolvedTangle, ResolveError> {
        check_len(self.tangle, state)?;
        let mut component_of = vec![0; self.tangle.segment_count()];
        let comps = self.label_components(state.bits, &mut component_of);
        let mut kinds = vec![ComponentKind::Circle; comps as usize];
        let (backtracks, _) = classify_arcs(self.tangle, &component_of, &mut self.tags, Some(&mut kinds));
        let mut circle_index = vec![None; comps as usize];
        let mut circles = Vec::new();
        for (i, k) in kinds.iter().enumerate() {
            if *k == ComponentKind::Circle {
                circle_index[i] = Some(circles.len() as u32);
                circles.push(i as u32);
            }
        }
        Ok(ResolvedTangle {
            component_of,
            kinds,
            circle_index,
            circles,
            backtracks,
        })
    }
}

/// Tags every component with its boundary points: bit pattern of
/// (bottom count, top count). Returns the backtracking flag and arc count.
fn classify_arcs(
    t: &TangleDiagram,
    component_of: &[u32],
    tags: &mut Vec<u8>,
    mut kinds: Option<&mut Vec<ComponentKind>>,
) -> (bool, u32) {
    tags.clear();
    tags.resize(component_of.len(), 0);
    for &s in t.bottom_endpoints() {
        tags[component_of[s as usize] as usize] += 1;
    }
    for &s in t.top_endpoints() {
        tags[component_of[s as usize] as usize] += 4;
    }
    let mut backtracks = false;
    let mut arcs = 0;
    for (c, &tag) in tags.iter().enumerate() {
        let kind = match tag {
            0 => continue,
            5 => ArcKind::Through,
            2 => ArcKind::BottomBottom,
            8 => ArcKind::TopTop,
            other => unreachable!("component with boundary tag {other}"),
        };
        arcs += 1;
        backtracks |= kind != ArcKind::Through;
        if let Some(k) = kinds.as_deref_mut() {
            k[c] = ComponentKind::Arc(kind);
        }
    }
    (backtracks, arcs)
}

fn check_len(t: &TangleDiagram, s: ResolutionState) -> Result<(), ResolveError> {
    if s.len() != t.crossing_count() {
        return Err(ResolveError::StateLengthMismatch {
            expected: t.crossing_count(),
            got: s.len(),
        });
    }
    Ok(())
}

/// Resolves every crossing of `t` according to `s`.
pub fn resolve(t: &TangleDiagram, s: ResolutionState) -> Result<ResolvedTangle, ResolveError> {
    Resolver::new(t).resolve(s)
}

/// Compares the resolutions of `s` and `s` with bit `c` set.
pub fn saddle_classify(t: &TangleDiagram, s: ResolutionState, c: usize) -> Result<SaddleKind, ResolveError> {
    check_len(t, s)?;
    if c >= s.len() {
        return Err(ResolveError::CrossingOutOfRange { index: c, len: s.len() });
    }
    if s.bit(c) {
        return Err(ResolveError::BitAlreadyOne(c));
    }
    let mut r = Resolver::new(t);
    let zero = r.resolve(s)?;
    let one = r.resolve(s.with_bit(c))?;
    classify_pair(t, &zero, &one, s, c)
}

pub(crate) fn classify_pair(
    t: &TangleDiagram,
    zero: &ResolvedTangle,
    one: &ResolvedTangle,
    s: ResolutionState,
    c: usize,
) -> Result<SaddleKind, ResolveError> {
    let [s0, s1, s2, _] = t.crossings()[c];
    let before = zero.component_count();
    let after = one.component_count();
    if after + 1 == before {
        Ok(SaddleKind::Merge {
            sources: [zero.component_of(s0), zero.component_of(s1)],
            target: one.component_of(s0),
        })
    } else if after == before + 1 {
        Ok(SaddleKind::Split {
            source: zero.component_of(s0),
            targets: [one.component_of(s0), one.component_of(s2)],
        })
    } else {
        debug_assert_eq!(after, before);
        if !zero.backtracks() && !one.backtracks() {
            return Err(ResolveError::ZeroSaddleAnomaly {
                state: s.bits(),
                crossing: c,
            });
        }
        Ok(SaddleKind::Zero)
    }
}

/// Streams all `2^l` states in increasing numeric order of their bits.
pub fn enumerate_cube(
    t: &TangleDiagram,
    bound: usize,
) -> Result<impl Iterator<Item = (ResolutionState, ResolvedTangle)> + '_, ResolveError> {
    let l = t.crossing_count();
    if l > bound || l >= 64 {
        return Err(ResolveError::CubeTooLarge { crossings: l, bound });
    }
    Ok(enumerate_range(t, 0..1u64 << l))
}

/// States whose bits fall in `range`, for partitioned iteration.
pub fn enumerate_range(
    t: &TangleDiagram,
    range: std::ops::Range<u64>,
) -> impl Iterator<Item = (ResolutionState, ResolvedTangle)> + '_ {
    let l = t.crossing_count();
    let mut resolver = Resolver::new(t);
    range.map(move |bits| {
        let s = ResolutionState::new(bits, l);
        let r = resolver.resolve(s).expect("length matches");
        (s, r)
    })
}

/// Whether a boundary end is on the bottom line; used by tests and debug dumps.
pub fn end_label(e: End) -> String {
    match e {
        End::Slot { crossing, pos } => format!("x{crossing}.{pos}"),
        End::Bottom(k) => format!("bottom{k}"),
        End::Top(k) => format!("top{k}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{cable, CableSpec, CrossingSign, KnotDiagram};

    fn trefoil() -> KnotDiagram {
        KnotDiagram::from_pd(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], None, None).unwrap()
    }

    #[test]
    fn parallel_strands() {
        let t = cable(&KnotDiagram::unknot().cut_at_marked(), &CableSpec::parallel(2)).unwrap();
        let r = resolve(&t, ResolutionState::new(0, 0)).unwrap();
        assert_eq!(r.circle_count(), 0);
        assert_eq!(r.arcs().filter(|(_, k)| *k == ArcKind::Through).count(), 2);
        assert!(!r.backtracks());
    }

    #[test]
    fn kink_states() {
        let pos = KnotDiagram::unknot()
            .add_kink(1, CrossingSign::Positive)
            .unwrap()
            .cut_at_marked();
        let r0 = resolve(&pos, ResolutionState::new(0, 1)).unwrap();
        let r1 = resolve(&pos, ResolutionState::new(1, 1)).unwrap();
        assert_eq!((r0.circle_count(), r1.circle_count()), (0, 1));
        let neg = KnotDiagram::unknot()
            .add_kink(1, CrossingSign::Negative)
            .unwrap()
            .cut_at_marked();
        let r0 = resolve(&neg, ResolutionState::new(0, 1)).unwrap();
        let r1 = resolve(&neg, ResolutionState::new(1, 1)).unwrap();
        assert_eq!((r0.circle_count(), r1.circle_count()), (1, 0));
    }

    #[test]
    fn two_cable_of_a_crossing_backtracks_somewhere() {
        let kink = KnotDiagram::unknot()
            .add_kink(1, CrossingSign::Positive)
            .unwrap()
            .cut_at_marked();
        let t = cable(&kink, &CableSpec::parallel(2)).unwrap();
        assert_eq!(t.crossing_count(), 4);
        let states: Vec<_> = enumerate_cube(&t, 24).unwrap().collect();
        assert_eq!(states.len(), 16);
        assert!(states
            .iter()
            .any(|(_, r)| r.arcs().any(|(_, k)| k == ArcKind::BottomBottom)));
        assert!(states.iter().any(|(_, r)| !r.backtracks()));
    }

    #[test]
    fn trefoil_cube_circle_counts() {
        // Hand enumeration of the cut trefoil X(1,4,2,5) X(3,6,4,1) X(5,2,6,3):
        // all-0 closes into loops {1,5,3} {4,2,6}, all-1 into {1,4} {2,5}
        // {3,6}; cutting edge 1 turns its loop into the arc.
        let t = trefoil().cut_at_marked();
        let counts: Vec<usize> = enumerate_cube(&t, 24).unwrap().map(|(_, r)| r.circle_count()).collect();
        let by_weight = |w: u32| -> Vec<usize> {
            (0..8u64)
                .filter(|b| b.count_ones() == w)
                .map(|b| counts[b as usize])
                .collect()
        };
        assert_eq!(by_weight(0), vec![1]);
        assert_eq!(by_weight(1), vec![0, 0, 0]);
        assert_eq!(by_weight(2), vec![1, 1, 1]);
        assert_eq!(by_weight(3), vec![2]);
    }

    #[test]
    fn saddle_kinds_and_errors() {
        let t = trefoil().cut_at_marked();
        let s = ResolutionState::new(0, 3);
        match saddle_classify(&t, s, 0).unwrap() {
            SaddleKind::Merge { sources, .. } => assert_ne!(sources[0], sources[1]),
            other => panic!("expected merge, got {other:?}"),
        }
        let s = ResolutionState::new(0b011, 3);
        assert!(matches!(saddle_classify(&t, s, 2).unwrap(), SaddleKind::Split { .. }));
        let s = ResolutionState::new(0b001, 3);
        assert!(matches!(saddle_classify(&t, s, 1).unwrap(), SaddleKind::Split { .. }));
        assert_eq!(saddle_classify(&t, s, 0), Err(ResolveError::BitAlreadyOne(0)));
        assert!(matches!(
            resolve(&t, ResolutionState::new(0, 2)),
            Err(ResolveError::StateLengthMismatch { .. })
        ));
    }

    #[test]
    fn zero_saddle_on_the_two_cable() {
        let kink = KnotDiagram::unknot()
            .add_kink(1, CrossingSign::Positive)
            .unwrap()
            .cut_at_marked();
        let t = cable(&kink, &CableSpec::parallel(2)).unwrap();
        let mut found = false;
        for bits in 0..16u64 {
            let s = ResolutionState::new(bits, 4);
            for c in (0..4).filter(|c| !s.bit(*c)) {
                if saddle_classify(&t, s, c).unwrap() == SaddleKind::Zero {
                    let one = resolve(&t, s.with_bit(c)).unwrap();
                    let zero = resolve(&t, s).unwrap();
                    assert!(zero.backtracks() != one.backtracks() || zero.backtracks());
                    if one.arcs().any(|(_, k)| k == ArcKind::TopTop) && !zero.backtracks() {
                        found = true;
                    }
                }
            }
        }
        assert!(found, "some zero saddle acquires a top-top arc");
    }

    #[test]
    fn cube_bound() {
        let t = cable(&trefoil().cut_at_marked(), &CableSpec::parallel(3)).unwrap();
        assert!(matches!(
            enumerate_cube(&t, 24),
            Err(ResolveError::CubeTooLarge { crossings: 27, .. })
        ));
        let u = KnotDiagram::unknot().cut_at_marked();
        assert_eq!(enumerate_cube(&u, 24).unwrap().count(), 1);
    }
}
