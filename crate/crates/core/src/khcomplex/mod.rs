//! The bigraded chain complex of a tangle's resolution cube and its homology.
//!
//! A vertex of the cube is a [`ResolutionState`]. Its space is zero when the
//! resolution backtracks and otherwise the exterior algebra on its circles;
//! arcs are zero in the quotient. Basis elements are circle subsets stored as
//! bit masks over the state's circle indices.
//!
//! For a generator in state `s` with `k` circles and monomial degree `d`:
//! `i = -n₊ + |s|` and `j = k - 2d + n₋ - 2n₊ + |s|`. The differential raises
//! `i` by one and preserves `j`, so the complex splits into blocks
//! `C^{i,j} -> C^{i+1,j}`. Within a block generators are ordered by state
//! value and then by monomial value.

mod cube;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{cable, CableSpec, DiagramError, KnotDiagram, TangleDiagram};
use crate::gf2::{Gf2Error, SparseGF2Matrix};
use crate::jonesoracle::{LaurentPoly, Var};
use crate::resolve::{
    classify_pair, ComponentKind, ResolutionState, ResolveError, ResolvedTangle, Resolver, SaddleKind,
    DEFAULT_CUBE_BOUND,
};
use cube::CubeIndex;

pub const SCHEMA_VERSION: u32 = 1;

/// How cube bits map to smoothings; recorded in every report.
pub const RESOLUTION_LABELING: &str = "bit0=B-smoothing,bit1=A-smoothing";

#[derive(Debug, Error)]
pub enum KhError {
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("inconsistent saddle: {0}")]
    InconsistentSaddle(String),
    #[error("d∘d is nonzero on the block starting at (i, j) = ({i}, {j})")]
    DSquaredNonzero { i: i32, j: i32 },
    #[error("state has {0} circles; at most 32 are supported")]
    TooManyCircles(usize),
}

/// `(i, j)` of a generator with `k` circles and monomial degree `d` in a state of weight `weight`.
pub fn grading(n_plus: usize, n_minus: usize, weight: u32, k: u32, d: u32) -> (i32, i32) {
    let w = weight as i32;
    let i = w - n_plus as i32;
    let j = k as i32 - 2 * d as i32 + n_minus as i32 - 2 * n_plus as i32 + w;
    (i, j)
}

/// The space attached to one vertex of the cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSpace {
    state: ResolutionState,
    resolved: ResolvedTangle,
}

impl VertexSpace {
    pub fn state(&self) -> ResolutionState {
        self.state
    }

    pub fn resolved(&self) -> &ResolvedTangle {
        &self.resolved
    }

    pub fn circle_count(&self) -> usize {
        self.resolved.circle_count()
    }

    /// True when the resolution backtracks and the space is zero.
    pub fn zero_flag(&self) -> bool {
        self.resolved.backtracks()
    }

    pub fn dim(&self) -> usize {
        if self.zero_flag() {
            0
        } else {
            1 << self.circle_count()
        }
    }

    /// Circle subsets in increasing mask order.
    pub fn basis(&self) -> Vec<u32> {
        (0..self.dim() as u32).collect()
    }
}

pub fn vertex_space(state: ResolutionState, rt: ResolvedTangle) -> VertexSpace {
    VertexSpace { state, resolved: rt }
}

/// Rank of the space a resolved tangle contributes: 0 if it backtracks,
/// else `2^k`.
pub fn rank_predictor(rt: &ResolvedTangle) -> u64 {
    if rt.backtracks() {
        0
    } else {
        1 << rt.circle_count()
    }
}

/// Smallest segment of each component.
fn component_reps(rt: &ResolvedTangle) -> Vec<u32> {
    let mut reps = vec![u32::MAX; rt.component_count()];
    for (s, &c) in rt.component_map().iter().enumerate() {
        if reps[c as usize] == u32::MAX {
            reps[c as usize] = s as u32;
        }
    }
    reps
}

/// Image of monomial `m` under a saddle between non-backtracking
/// resolutions, one `emit` call per term. `phi` sends each circle of the
/// source to a circle of the target, or to [`cube::ARC`] when it lands in an
/// arc; `new` lists the target circles born from the split component.
pub(crate) fn saddle_action(merge: bool, phi: &[u8], new: &[u8], m: u32, mut emit: impl FnMut(u32)) {
    let mut img = 0u32;
    let mut bits = m;
    while bits != 0 {
        let b = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let t = phi[b];
        if t == cube::ARC {
            return;
        }
        if img & (1 << t) != 0 {
            return;
        }
        img |= 1 << t;
    }
    if merge {
        emit(img);
    } else {
        for &t in new {
            if img & (1 << t) == 0 {
                emit(img | (1 << t));
            }
        }
    }
}

/// Matrix of the saddle map `src -> dst` in the mask-ordered bases.
pub fn edge_map(kind: SaddleKind, src: &VertexSpace, dst: &VertexSpace) -> Result<SparseGF2Matrix, KhError> {
    let (a, b) = (src.resolved(), dst.resolved());
    let (ca, cb) = (a.component_count(), b.component_count());
    let ok = match kind {
        SaddleKind::Merge { sources, target } => {
            cb + 1 == ca && sources.iter().all(|&s| (s as usize) < ca) && (target as usize) < cb
        }
        SaddleKind::Split { source, targets } => {
            ca + 1 == cb && (source as usize) < ca && targets.iter().all(|&t| (t as usize) < cb)
        }
        SaddleKind::Zero => ca == cb,
    };
    if !ok || a.component_map().len() != b.component_map().len() {
        return Err(KhError::InconsistentSaddle(format!(
            "{kind:?} between resolutions with {ca} and {cb} components"
        )));
    }
    if src.circle_count() > 32 || dst.circle_count() > 32 {
        return Err(KhError::TooManyCircles(src.circle_count().max(dst.circle_count())));
    }
    let mut entries = Vec::new();
    if !src.zero_flag() && !dst.zero_flag() && kind != SaddleKind::Zero {
        let reps = component_reps(a);
        let phi: Vec<u8> = a
            .circles()
            .iter()
            .map(|&c| {
                b.circle_index(b.component_of(reps[c as usize]))
                    .map_or(cube::ARC, |x| x as u8)
            })
            .collect();
        let new: Vec<u8> = match kind {
            SaddleKind::Split { targets, .. } => targets
                .iter()
                .filter_map(|&t| b.circle_index(t).map(|x| x as u8))
                .collect(),
            _ => Vec::new(),
        };
        let merge = matches!(kind, SaddleKind::Merge { .. });
        for m in 0..src.dim() as u32 {
            saddle_action(merge, &phi, &new, m, |img| entries.push((img, m)));
        }
    }
    Ok(SparseGF2Matrix::from_entries(dst.dim(), src.dim(), entries)?)
}

/// Outcome of [`check_state_locally`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LocalCheck {
    pub edges: usize,
    pub squares: usize,
    /// Crossings whose edge map out of the state has an entry that does not
    /// raise `i` by one and preserve `j`.
    pub inhomogeneous_edges: Vec<usize>,
    /// Crossing pairs whose two paths around the square disagree.
    pub noncommuting_squares: Vec<(usize, usize)>,
}

impl LocalCheck {
    pub fn passed(&self) -> bool {
        self.inhomogeneous_edges.is_empty() && self.noncommuting_squares.is_empty()
    }
}

/// Checks every edge map leaving `bits` for grading homogeneity and every
/// square with `bits` as bottom corner for commutativity (over GF(2), the
/// piece of `d∘d` on that square). Built from single edge maps, independent
/// of block assembly.
pub fn check_state_locally(t: &TangleDiagram, bits: u64) -> Result<LocalCheck, KhError> {
    let l = t.crossing_count();
    let mut r = Resolver::new(t);
    let mut space = |b: u64| -> Result<VertexSpace, KhError> {
        let s = ResolutionState::new(b, l);
        Ok(vertex_space(s, r.resolve(s)?))
    };
    let edge = |src: &VertexSpace, dst: &VertexSpace, c: usize| -> Result<SparseGF2Matrix, KhError> {
        let kind = classify_pair(t, src.resolved(), dst.resolved(), src.state(), c)?;
        edge_map(kind, src, dst)
    };
    let (np, nm) = (t.n_plus(), t.n_minus());
    let grade = |v: &VertexSpace, m: u32| grading(np, nm, v.state().weight(), v.circle_count() as u32, m.count_ones());
    let base = space(bits)?;
    let free: Vec<usize> = (0..l).filter(|&c| (bits >> c) & 1 == 0).collect();
    let mut out = LocalCheck::default();
    for (a, &c1) in free.iter().enumerate() {
        let mid1 = space(bits | 1 << c1)?;
        let m1 = edge(&base, &mid1, c1)?;
        out.edges += 1;
        let homogeneous = m1.entries().all(|(dst, src)| {
            let (i0, j0) = grade(&base, src);
            grade(&mid1, dst) == (i0 + 1, j0)
        });
        if !homogeneous {
            out.inhomogeneous_edges.push(c1);
        }
        for &c2 in &free[a + 1..] {
            let mid2 = space(bits | 1 << c2)?;
            let top = space(bits | 1 << c1 | 1 << c2)?;
            let via1 = edge(&mid1, &top, c2)?.mul(&m1)?;
            let via2 = edge(&mid2, &top, c1)?.mul(&edge(&base, &mid2, c2)?)?;
            out.squares += 1;
            if via1 != via2 {
                out.noncommuting_squares.push((c1, c2));
            }
        }
    }
    Ok(out)
}

/// Labels attached to a complex and carried into reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexMeta {
    pub knot: Option<String>,
    pub n: usize,
    pub orientation_pattern: String,
    pub mirror_flag: bool,
    /// False for tangles that are not knot cables: the absolute gradings
    /// then carry no meaning, only differences do.
    pub absolute_gradings: bool,
}

#[derive(Debug, Clone)]
pub struct AssembleOptions {
    pub cube_bound: usize,
    /// Restrict to these quantum gradings. The bound on the cube size is
    /// not enforced when a slice is given.
    pub j_slice: Option<BTreeSet<i32>>,
    pub check_d_squared: bool,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions {
            cube_bound: DEFAULT_CUBE_BOUND,
            j_slice: None,
            check_d_squared: cfg!(debug_assertions),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct StateEntry {
    bits: u64,
    start: u32,
    k: u8,
}

#[derive(Debug, Clone)]
struct Block {
    dim: usize,
    states: Vec<StateEntry>,
    /// Transpose of `d: C^{i,j} -> C^{i+1,j}`: one row per generator of this block.
    d_t: SparseGF2Matrix,
}

impl Block {
    fn start_of(&self, bits: u64) -> Option<u32> {
        self.states
            .binary_search_by_key(&bits, |e| e.bits)
            .ok()
            .map(|p| self.states[p].start)
    }
}

/// A generator of the complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub state: u64,
    pub monomial: u32,
    pub i: i32,
    pub j: i32,
}

/// The cube complex of a tangle, split into `(i, j)` blocks.
#[derive(Debug, Clone)]
pub struct KhComplex {
    meta: ComplexMeta,
    crossings: usize,
    n_plus: usize,
    n_minus: usize,
    blocks: BTreeMap<(i32, i32), Block>,
}

impl KhComplex {
    /// Cuts `knot` at its marked edge, cables it, and assembles the cube.
    pub fn for_knot(knot: &KnotDiagram, spec: &CableSpec, opts: &AssembleOptions) -> Result<KhComplex, KhError> {
        let t = cable(&knot.cut_at_marked(), spec)?;
        let mut c = assemble_with(&t, opts)?;
        c.meta.knot = knot.name().map(str::to_string);
        c.meta.absolute_gradings = true;
        Ok(c)
    }

    pub fn meta(&self) -> &ComplexMeta {
        &self.meta
    }

    pub fn with_meta(mut self, meta: ComplexMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    /// Nonzero blocks and their dimensions.
    pub fn block_dims(&self) -> BTreeMap<(i32, i32), usize> {
        self.blocks.iter().map(|(&k, b)| (k, b.dim)).collect()
    }

    pub fn dim(&self, i: i32, j: i32) -> usize {
        self.blocks.get(&(i, j)).map_or(0, |b| b.dim)
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.values().map(|b| b.dim).sum()
    }

    /// `d: C^{i,j} -> C^{i+1,j}` as a `dim(i+1,j) x dim(i,j)` matrix.
    pub fn differential(&self, i: i32, j: i32) -> SparseGF2Matrix {
        match self.blocks.get(&(i, j)) {
            Some(b) => b.d_t.transpose(),
            None => SparseGF2Matrix::zeros(self.dim(i + 1, j), 0),
        }
    }

    /// Generators of block `(i, j)` in basis order.
    pub fn generators(&self, i: i32, j: i32) -> Vec<Generator> {
        let Some(b) = self.blocks.get(&(i, j)) else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(b.dim);
        for e in &b.states {
            let w = e.bits.count_ones();
            for m in 0..1u32 << e.k {
                let (gi, gj) = grading(self.n_plus, self.n_minus, w, e.k as u32, m.count_ones());
                if (gi, gj) == (i, j) {
                    out.push(Generator {
                        state: e.bits,
                        monomial: m,
                        i,
                        j,
                    });
                }
            }
        }
        out
    }

    pub fn check_d_squared(&self) -> Result<(), KhError> {
        check_blocks_d_squared(&self.blocks)
    }

    /// Adds `entry` to `d` (for fault-injection tests of the checks).
    /// Toggles one entry of `d` so that `d∘d` becomes nonzero: flipping
    /// `src -> dst` adds `d(dst)` to `d(d(src))`, so any `dst` with a nonzero
    /// image works. Returns the block and entry, or `None` if `d∘d` cannot be
    /// broken this way (no two consecutive nonzero maps).
    pub fn inject_fault(&mut self) -> Option<((i32, i32), u32, u32)> {
        let found = self.blocks.iter().find_map(|(&(i, j), b)| {
            let next = self.blocks.get(&(i + 1, j))?;
            let dst = (0..next.dim).find(|&r| !next.d_t.row(r).is_empty())?;
            (b.dim > 0).then_some(((i, j), 0, dst as u32))
        });
        let ((i, j), src, dst) = found?;
        self.toggle_entry(i, j, src, dst).ok()?;
        Some(((i, j), src, dst))
    }

    pub fn toggle_entry(&mut self, i: i32, j: i32, src: u32, dst: u32) -> Result<(), KhError> {
        let cols = self.dim(i + 1, j);
        let b = self
            .blocks
            .get_mut(&(i, j))
            .ok_or_else(|| KhError::InconsistentSaddle(format!("no block ({i}, {j})")))?;
        let entries = b.d_t.entries().chain(std::iter::once((src, dst)));
        b.d_t = SparseGF2Matrix::from_entries(b.dim, cols, entries)?;
        Ok(())
    }
}

/// Assembles the complex with default options.
pub fn assemble(t: &TangleDiagram) -> Result<KhComplex, KhError> {
    assemble_with(t, &AssembleOptions::default())
}

pub fn assemble_with(t: &TangleDiagram, opts: &AssembleOptions) -> Result<KhComplex, KhError> {
    check_bound(t, opts)?;
    let cube = CubeIndex::build(t)?;
    let keep = |j: i32| opts.j_slice.as_ref().is_none_or(|s| s.contains(&j));
    let blocks = cube.blocks(&keep)?;
    let c = KhComplex {
        meta: default_meta(t),
        crossings: t.crossing_count(),
        n_plus: t.n_plus(),
        n_minus: t.n_minus(),
        blocks,
    };
    if opts.check_d_squared {
        c.check_d_squared()?;
    }
    Ok(c)
}

fn check_bound(t: &TangleDiagram, opts: &AssembleOptions) -> Result<(), KhError> {
    let l = t.crossing_count();
    if (opts.j_slice.is_none() && l > opts.cube_bound) || l >= 40 {
        return Err(ResolveError::CubeTooLarge {
            crossings: l,
            bound: opts.cube_bound.min(39),
        }
        .into());
    }
    Ok(())
}

fn default_meta(t: &TangleDiagram) -> ComplexMeta {
    ComplexMeta {
        knot: None,
        n: t.width(),
        orientation_pattern: CableSpec {
            n: t.width(),
            pattern: t.orientation_pattern().to_vec(),
        }
        .pattern_tag(),
        mirror_flag: false,
        absolute_gradings: false,
    }
}

/// Homology together with the dimensions of the chain groups.
#[derive(Debug, Clone)]
pub struct SlicedResult {
    pub homology: KhHomology,
    pub chain_dims: BTreeMap<(i32, i32), usize>,
}

impl SlicedResult {
    pub fn chain_euler_characteristic(&self) -> LaurentPoly {
        signed_sum(self.chain_dims.iter().map(|(&k, &d)| (k, d)))
    }
}

/// Homology computed one quantum grading at a time, so that only one
/// slice of the differential is held in memory. The cube is still resolved
/// once. `opts.j_slice`, if given, restricts the gradings computed.
pub fn sliced_homology(t: &TangleDiagram, opts: &AssembleOptions) -> Result<SlicedResult, KhError> {
    check_bound(t, opts)?;
    let cube = CubeIndex::build(t)?;
    let chain_dims = cube.chain_dims().clone();
    let js: Vec<i32> = cube
        .j_values()
        .into_iter()
        .filter(|j| opts.j_slice.as_ref().is_none_or(|s| s.contains(j)))
        .collect();
    let mut dims = BTreeMap::new();
    for batch in j_batches(&cube, &js) {
        let blocks = cube.blocks(&|x| batch.contains(&x))?;
        if opts.check_d_squared {
            check_blocks_d_squared(&blocks)?;
        }
        for &j in &batch {
            let ordered: Vec<(i32, &Block)> = blocks
                .iter()
                .filter(|(&(_, bj), _)| bj == j)
                .map(|(&(i, _), b)| (i, b))
                .collect();
            dims.extend(slice_homology(&ordered).into_iter().map(|(i, h)| ((i, j), h)));
        }
    }
    Ok(SlicedResult {
        homology: KhHomology::from_dims(default_meta(t), dims),
        chain_dims,
    })
}

/// Differential entries built per pass over the cube, roughly.
const BATCH_ENTRIES: usize = 1 << 26;

/// Consecutive quantum gradings grouped so that each group's differential
/// stays near [`BATCH_ENTRIES`] entries. Every pass over the cube costs a
/// visit to each state in the group, so fewer, larger groups are faster.
fn j_batches(cube: &CubeIndex, js: &[i32]) -> Vec<Vec<i32>> {
    let mut per_j: BTreeMap<i32, usize> = BTreeMap::new();
    for (&(i, j), &d) in cube.chain_dims() {
        *per_j.entry(j).or_default() += cube.entry_estimate(i, d);
    }
    let mut out: Vec<Vec<i32>> = Vec::new();
    let mut load = 0;
    for &j in js {
        let e = per_j.get(&j).copied().unwrap_or(0);
        match out.last_mut() {
            Some(b) if load + e <= BATCH_ENTRIES => b.push(j),
            _ => {
                out.push(vec![j]);
                load = 0;
            }
        }
        load += e;
    }
    out
}

/// Homology of one quantum grading, given its blocks in increasing `i`.
/// Pivots found in `C^{i-1} -> C^i` mark generators of `C^i` whose images
/// are combinations of later generators' images; their rows are skipped
/// when reducing `C^i -> C^{i+1}`.
fn slice_homology(blocks: &[(i32, &Block)]) -> Vec<(i32, usize)> {
    let mut out = Vec::new();
    let mut prev: Option<(i32, usize, Vec<u32>)> = None;
    for &(i, b) in blocks {
        let (inc, skip) = match &prev {
            Some((pi, rank, piv)) if *pi + 1 == i => {
                let mut skip = vec![false; b.dim];
                for &p in piv {
                    skip[p as usize] = true;
                }
                (*rank, Some(skip))
            }
            _ => (0, None),
        };
        let piv = b
            .d_t
            .pivot_columns(skip.as_deref(), crate::gf2::DEFAULT_DENSITY_THRESHOLD);
        let h = b.dim - piv.len() - inc;
        if h > 0 {
            out.push((i, h));
        }
        prev = Some((i, piv.len(), piv));
    }
    out
}

fn check_blocks_d_squared(blocks: &BTreeMap<(i32, i32), Block>) -> Result<(), KhError> {
    let bad = blocks
        .par_iter()
        .filter_map(|(&(i, j), b)| {
            let next = blocks.get(&(i + 1, j))?;
            match b.d_t.mul(&next.d_t) {
                Ok(p) if p.is_zero() => None,
                _ => Some((i, j)),
            }
        })
        .min();
    match bad {
        Some((i, j)) => Err(KhError::DSquaredNonzero { i, j }),
        None => Ok(()),
    }
}

/// `Σ (-1)^i q^j dim C^{i,j}`.
pub fn euler_characteristic(c: &KhComplex) -> LaurentPoly {
    signed_sum(c.blocks.iter().map(|(&k, b)| (k, b.dim)))
}

fn signed_sum(dims: impl Iterator<Item = ((i32, i32), usize)>) -> LaurentPoly {
    LaurentPoly::from_terms(
        Var::Q,
        dims.map(|((i, j), d)| (j, if i.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })),
    )
}

/// Homology dimensions of a complex, with derived summaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KhHomology {
    meta: ComplexMeta,
    dims: BTreeMap<(i32, i32), usize>,
}

pub fn homology(c: &KhComplex) -> Result<KhHomology, KhError> {
    let mut by_j: BTreeMap<i32, Vec<(i32, &Block)>> = BTreeMap::new();
    for (&(i, j), b) in &c.blocks {
        by_j.entry(j).or_default().push((i, b));
    }
    let dims: BTreeMap<(i32, i32), usize> = by_j
        .into_par_iter()
        .flat_map_iter(|(j, blocks)| slice_homology(&blocks).into_iter().map(move |(i, h)| ((i, j), h)))
        .collect();
    Ok(KhHomology {
        meta: c.meta.clone(),
        dims,
    })
}

impl KhHomology {
    pub fn from_dims(meta: ComplexMeta, dims: BTreeMap<(i32, i32), usize>) -> Self {
        let dims = dims.into_iter().filter(|&(_, d)| d > 0).collect();
        KhHomology { meta, dims }
    }

    pub fn meta(&self) -> &ComplexMeta {
        &self.meta
    }

    /// Nonzero dimensions by `(i, j)`.
    pub fn dims(&self) -> &BTreeMap<(i32, i32), usize> {
        &self.dims
    }

    pub fn dim(&self, i: i32, j: i32) -> usize {
        self.dims.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.dims.values().sum()
    }

    /// Values of `2δ = j - 2i` carrying homology.
    pub fn delta_support(&self) -> BTreeSet<i32> {
        self.dims.keys().map(|&(i, j)| j - 2 * i).collect()
    }

    /// `max δ - min δ + 1`, or 0 for zero homology.
    pub fn width(&self) -> u32 {
        let s = self.delta_support();
        match (s.first(), s.last()) {
            (Some(lo), Some(hi)) => ((hi - lo) / 2 + 1) as u32,
            _ => 0,
        }
    }

    pub fn euler_characteristic(&self) -> LaurentPoly {
        signed_sum(self.dims.iter().map(|(&k, &d)| (k, d)))
    }

    /// Poincaré polynomial in `t` (for `i`) and `q` (for `j`), e.g. `q^2 + t^2q^6`.
    pub fn poincare(&self) -> String {
        if self.dims.is_empty() {
            return "0".into();
        }
        self.dims
            .iter()
            .map(|(&(i, j), &d)| {
                let mut s = String::new();
                if d > 1 {
                    s.push_str(&d.to_string());
                }
                match i {
                    0 => {}
                    1 => s.push('t'),
                    i => s.push_str(&format!("t^{i}")),
                }
                match j {
                    0 => {}
                    1 => s.push('q'),
                    j => s.push_str(&format!("q^{j}")),
                }
                if s.is_empty() {
                    s.push('1');
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Dimensions of the mirror image: `(i, j) -> (-i, -j)`.
    pub fn reflected(&self) -> BTreeMap<(i32, i32), usize> {
        self.dims.iter().map(|(&(i, j), &d)| ((-i, -j), d)).collect()
    }

    pub fn report(&self) -> KhReport {
        KhReport {
            schema_version: SCHEMA_VERSION,
            knot: self.meta.knot.clone(),
            n: self.meta.n,
            convention: Convention {
                resolution_labeling: RESOLUTION_LABELING.into(),
                orientation_pattern: self.meta.orientation_pattern.clone(),
                mirror_flag: self.meta.mirror_flag,
                gradings: if self.meta.absolute_gradings {
                    "absolute".into()
                } else {
                    "relative gradings only".into()
                },
            },
            dims: self
                .dims
                .iter()
                .map(|(&(i, j), &d)| [i as i64, j as i64, d as i64])
                .collect(),
            poincare: self.poincare(),
            euler_char: self.euler_characteristic().to_string(),
            total_rank: self.total_rank(),
            delta_support: self.delta_support().into_iter().collect(),
            width: self.width(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convention {
    pub resolution_labeling: String,
    pub orientation_pattern: String,
    pub mirror_flag: bool,
    pub gradings: String,
}

/// Serialized homology. `delta_support` lists `2δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhReport {
    pub schema_version: u32,
    pub knot: Option<String>,
    pub n: usize,
    pub convention: Convention,
    pub dims: Vec<[i64; 3]>,
    pub poincare: String,
    pub euler_char: String,
    pub total_rank: usize,
    pub delta_support: Vec<i32>,
    pub width: u32,
}

/// Every non-backtracking state, its circle count, and its component kinds;
/// used by debug dumps.
pub fn component_kinds(rt: &ResolvedTangle) -> Vec<ComponentKind> {
    rt.kinds().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::CrossingSign;
    use crate::resolve::{enumerate_cube, resolve, saddle_classify};

    fn trefoil() -> KnotDiagram {
        KnotDiagram::from_pd(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], None, None).unwrap()
    }

    fn kh(k: &KnotDiagram, n: usize) -> KhHomology {
        let c = KhComplex::for_knot(k, &CableSpec::parallel(n), &AssembleOptions::default()).unwrap();
        homology(&c).unwrap()
    }

    #[test]
    fn unknot_is_one_generator() {
        for n in 1..=3 {
            let h = kh(&KnotDiagram::unknot(), n);
            assert_eq!(h.dims(), &BTreeMap::from([((0, 0), 1)]));
            assert_eq!(h.width(), 1);
        }
    }

    #[test]
    fn kinked_unknot_n1() {
        for sign in [CrossingSign::Positive, CrossingSign::Negative] {
            let k = KnotDiagram::unknot().add_kink(1, sign).unwrap();
            let h = kh(&k, 1);
            assert_eq!(h.dims(), &BTreeMap::from([((0, 0), 1)]), "{sign:?}");
        }
    }

    #[test]
    fn trefoil_n1() {
        // left-handed input; the cube computes the right-handed trefoil
        let h = kh(&trefoil(), 1);
        assert_eq!(h.dims(), &BTreeMap::from([((0, 2), 1), ((2, 6), 1), ((3, 8), 1)]));
        assert_eq!(h.width(), 1);
        assert_eq!(h.poincare(), "q^2 + t^2q^6 + t^3q^8");
        let m = kh(&trefoil().mirror(), 1);
        assert_eq!(m.dims(), &h.reflected());
    }

    #[test]
    fn complex_dimensions_match_state_sum() {
        let t = trefoil().cut_at_marked();
        let c = assemble(&t).unwrap();
        let expected: u64 = enumerate_cube(&t, 24).unwrap().map(|(_, rt)| rank_predictor(&rt)).sum();
        assert_eq!(c.total_dim() as u64, expected);
        assert_eq!(euler_characteristic(&c), homology(&c).unwrap().euler_characteristic());
    }

    #[test]
    fn edge_map_examples() {
        // merge and split across one crossing of the trefoil's round states
        let t = trefoil().cut_at_marked();
        for bits in 0..8u64 {
            for c in 0..3 {
                let s = ResolutionState::new(bits, 3);
                if s.bit(c) {
                    continue;
                }
                let kind = saddle_classify(&t, s, c).unwrap();
                let src = vertex_space(s, resolve(&t, s).unwrap());
                let dst = vertex_space(s.with_bit(c), resolve(&t, s.with_bit(c)).unwrap());
                let m = edge_map(kind, &src, &dst).unwrap();
                for (row, col) in m.entries() {
                    let (si, sj) = grading(
                        t.n_plus(),
                        t.n_minus(),
                        s.weight(),
                        src.circle_count() as u32,
                        col.count_ones(),
                    );
                    let (ti, tj) = grading(
                        t.n_plus(),
                        t.n_minus(),
                        s.weight() + 1,
                        dst.circle_count() as u32,
                        row.count_ones(),
                    );
                    assert_eq!((ti, tj), (si + 1, sj));
                }
                let wrong = match kind {
                    SaddleKind::Merge { .. } => SaddleKind::Split {
                        source: 0,
                        targets: [0, 0],
                    },
                    _ => SaddleKind::Merge {
                        sources: [0, 0],
                        target: 0,
                    },
                };
                assert!(matches!(
                    edge_map(wrong, &src, &dst),
                    Err(KhError::InconsistentSaddle(_))
                ));
            }
        }
    }

    #[test]
    fn merge_and_split_formulas() {
        // two parallel strands: state 0 of a 2-cable of a kink has closed loops
        let k = KnotDiagram::unknot().add_kink(1, CrossingSign::Positive).unwrap();
        let t = cable(&k.cut_at_marked(), &CableSpec::parallel(2)).unwrap();
        let mut seen_merge = false;
        let mut seen_split = false;
        let mut seen_arc_split = false;
        for (s, rt) in enumerate_cube(&t, 24).unwrap() {
            for c in 0..t.crossing_count() {
                if s.bit(c) || rt.backtracks() {
                    continue;
                }
                let one = resolve(&t, s.with_bit(c)).unwrap();
                if one.backtracks() {
                    continue;
                }
                let kind = saddle_classify(&t, s, c).unwrap();
                let src = vertex_space(s, rt.clone());
                let dst = vertex_space(s.with_bit(c), one.clone());
                let m = edge_map(kind, &src, &dst).unwrap();
                match kind {
                    SaddleKind::Merge { sources, .. } => {
                        let both_circles = sources.iter().all(|&x| rt.kinds()[x as usize] == ComponentKind::Circle);
                        if both_circles {
                            // 1 -> 1, a -> c, b -> c, ab -> 0
                            seen_merge = true;
                            let a = rt.circle_index(sources[0]).unwrap();
                            let b = rt.circle_index(sources[1]).unwrap();
                            let both = (1u32 << a) | (1 << b);
                            assert!(m.transpose().row(both as usize).is_empty());
                            assert_eq!(m.transpose().row(0), &[0]);
                        }
                    }
                    SaddleKind::Split { source, targets } => {
                        let t_circles: Vec<u32> = targets.iter().filter_map(|&x| one.circle_index(x)).collect();
                        let row0: Vec<u32> = m.transpose().row(0).to_vec();
                        let mut expect: Vec<u32> = t_circles.iter().map(|&x| 1 << x).collect();
                        expect.sort();
                        assert_eq!(row0, expect);
                        if rt.kinds()[source as usize] != ComponentKind::Circle {
                            seen_arc_split = true;
                            assert_eq!(t_circles.len(), 1);
                        } else {
                            seen_split = true;
                        }
                    }
                    SaddleKind::Zero => assert!(m.is_zero()),
                }
            }
        }
        assert!(seen_arc_split);
        let _ = (seen_merge, seen_split);
    }

    #[test]
    fn rank_predictor_matches_vertex_dims_on_trefoil_cable() {
        let t = cable(&trefoil().cut_at_marked(), &CableSpec::parallel(2)).unwrap();
        let mut live = 0;
        for (s, rt) in enumerate_cube(&t, 24).unwrap() {
            let p = rank_predictor(&rt);
            let v = vertex_space(s, rt);
            assert_eq!(p, v.dim() as u64);
            live += (p > 0) as usize;
        }
        assert!(live > 0);
    }

    #[test]
    fn j_slice_agrees_with_full_assembly() {
        let t = trefoil().cut_at_marked();
        let full = homology(&assemble(&t).unwrap()).unwrap();
        let opts = AssembleOptions {
            j_slice: Some(BTreeSet::from([6])),
            ..AssembleOptions::default()
        };
        let part = homology(&assemble_with(&t, &opts).unwrap()).unwrap();
        assert_eq!(part.dims(), &BTreeMap::from([((2, 6), 1)]));
        assert_eq!(full.dim(2, 6), 1);
    }

    #[test]
    fn corrupted_differential_is_detected() {
        let t = trefoil().cut_at_marked();
        let mut c = assemble(&t).unwrap();
        c.check_d_squared().unwrap();
        let ((i, j), _, _) = c.inject_fault().unwrap();
        assert!(matches!(
            c.check_d_squared(),
            Err(KhError::DSquaredNonzero { i: a, j: b }) if (a, b) == (i, j)
        ));
    }

    #[test]
    fn cube_bound_enforced() {
        let t = cable(&trefoil().cut_at_marked(), &CableSpec::parallel(2)).unwrap();
        let opts = AssembleOptions {
            cube_bound: 10,
            ..AssembleOptions::default()
        };
        assert!(matches!(
            assemble_with(&t, &opts),
            Err(KhError::Resolve(ResolveError::CubeTooLarge { .. }))
        ));
    }
}
