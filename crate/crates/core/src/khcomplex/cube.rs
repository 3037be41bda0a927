//! Two passes over the cube. The first records, for every non-backtracking
//! state, its circle count and the component label of every segment. The
//! second turns those labels into rows of the transposed differential.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{grading, saddle_action, Block, KhError, StateEntry};
use crate::diagram::TangleDiagram;
use crate::gf2::SparseGF2Matrix;
use crate::resolve::{ResolveError, Resolver};

const DEAD: u8 = u8::MAX;
const CHUNK: usize = 1 << 12;

pub(crate) struct CubeIndex<'a> {
    t: &'a TangleDiagram,
    l: usize,
    n_plus: usize,
    n_minus: usize,
    segs: usize,
    /// Circle count per state, `DEAD` when the state backtracks.
    info: Vec<u8>,
    live_words: Vec<u64>,
    live_prefix: Vec<u32>,
    /// Circle index of every segment (or [`ARC`]) per live state, in
    /// state order. Circles are numbered by their smallest segment.
    labels: Vec<u8>,
    pub(crate) binom: [[u32; 33]; 33],
    chain_dims: BTreeMap<(i32, i32), usize>,
}

pub(crate) fn binomials() -> [[u32; 33]; 33] {
    let mut c = [[0u32; 33]; 33];
    for n in 0..33 {
        c[n][0] = 1;
        for k in 1..=n {
            c[n][k] = c[n - 1][k - 1] + if k < n { c[n - 1][k] } else { 0 };
        }
    }
    c
}

/// Position of `m` among the masks with the same popcount, in increasing order.
pub(crate) fn colex_rank(binom: &[[u32; 33]; 33], m: u32) -> u32 {
    let mut r = 0;
    let mut bits = m;
    let mut t = 1;
    while bits != 0 {
        let p = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        r += binom[p][t];
        t += 1;
    }
    r
}

/// Masks below `1 << k` with `d` bits set, increasing.
fn masks_of_degree(k: u32, d: u32) -> impl Iterator<Item = u32> {
    let mut next = if d > k { None } else { Some(((1u64 << d) - 1) as u32) };
    std::iter::from_fn(move || {
        let m = next?;
        next = if m == 0 {
            None
        } else {
            // Gosper's hack
            let c = m & m.wrapping_neg();
            let r = m as u64 + c as u64;
            let n = (((r ^ m as u64) >> 2) / c as u64) | r;
            (n < (1u64 << k)).then_some(n as u32)
        };
        Some(m)
    })
}

/// Largest position-indexed start table, in entries.
const TABLE_LIMIT: usize = 1 << 26;

struct Lookup {
    table: Option<Vec<u32>>,
    nj: usize,
    jmin: i32,
    slot_of: Vec<u32>,
}

impl Lookup {
    fn slot(&self, j: i32) -> usize {
        self.slot_of[(j - self.jmin) as usize / 2] as usize
    }
}

/// Marks a circle whose image is an arc.
pub(crate) const ARC: u8 = u8::MAX;

#[derive(Clone, Copy)]
struct Edge {
    merge: bool,
    phi: [u8; 32],
    new: [u8; 2],
    n_new: u8,
}

#[derive(Default)]
struct Scratch<'b> {
    slots: Vec<(u32, (i32, i32), Option<&'b Block>)>,
    reps: Vec<u32>,
    edges: Vec<Edge>,
    starts: Vec<u32>,
}

/// Compressed rows under construction.
#[derive(Default)]
pub(crate) struct RowBuf {
    offsets: Vec<usize>,
    data: Vec<u32>,
}

impl RowBuf {
    fn append(&mut self, other: RowBuf) {
        if other.offsets.is_empty() {
            return;
        }
        if self.offsets.is_empty() {
            *self = other;
            return;
        }
        let shift = self.data.len();
        self.offsets.extend(other.offsets[1..].iter().map(|&o| o + shift));
        self.data.extend(other.data);
    }
}

impl<'a> CubeIndex<'a> {
    pub(crate) fn build(t: &'a TangleDiagram) -> Result<Self, KhError> {
        let l = t.crossing_count();
        let segs = t.segment_count();
        if segs > 256 {
            return Err(ResolveError::CubeTooLarge {
                crossings: l,
                bound: l.saturating_sub(1),
            }
            .into());
        }
        let states = 1usize << l;
        let chunks: Vec<(Vec<u8>, Vec<u8>)> = (0..states.div_ceil(CHUNK))
            .into_par_iter()
            .map_init(
                || (Resolver::new(t), Vec::new()),
                |(r, scratch), ci| {
                    let lo = ci * CHUNK;
                    let hi = (lo + CHUNK).min(states);
                    let mut info = Vec::with_capacity(hi - lo);
                    let mut labels = Vec::new();
                    let mut circle_of = Vec::new();
                    for bits in lo..hi {
                        let (backtracks, k) = r.summary(bits as u64, scratch);
                        if backtracks {
                            info.push(DEAD);
                        } else if k > 32 {
                            return Err(KhError::TooManyCircles(k as usize));
                        } else {
                            info.push(k as u8);
                            // component labels follow first appearance, so
                            // numbering the non-arcs in label order keeps
                            // circles sorted by smallest segment
                            circle_of.clear();
                            circle_of.resize(segs, 0u8);
                            for &b in t.bottom_endpoints() {
                                circle_of[scratch[b as usize] as usize] = ARC;
                            }
                            let mut next = 0u8;
                            for c in circle_of.iter_mut() {
                                if *c != ARC {
                                    *c = next;
                                    next += 1;
                                }
                            }
                            labels.extend(scratch.iter().map(|&x| circle_of[x as usize]));
                        }
                    }
                    Ok((info, labels))
                },
            )
            .collect::<Result<_, KhError>>()?;
        let mut info = Vec::with_capacity(states);
        let mut labels = Vec::new();
        for (i, lab) in chunks {
            info.extend(i);
            labels.extend(lab);
        }
        let mut live_words = vec![0u64; states.div_ceil(64)];
        let mut live_prefix = Vec::with_capacity(live_words.len());
        for (s, &k) in info.iter().enumerate() {
            if k != DEAD {
                live_words[s / 64] |= 1 << (s % 64);
            }
        }
        let mut acc = 0u32;
        for w in &live_words {
            live_prefix.push(acc);
            acc += w.count_ones();
        }
        let mut cube = CubeIndex {
            t,
            l,
            n_plus: t.n_plus(),
            n_minus: t.n_minus(),
            segs,
            info,
            live_words,
            live_prefix,
            labels,
            binom: binomials(),
            chain_dims: BTreeMap::new(),
        };
        cube.chain_dims = cube.count_chain_dims();
        Ok(cube)
    }

    fn pos(&self, bits: u64) -> Option<usize> {
        let (w, b) = ((bits / 64) as usize, bits % 64);
        let word = self.live_words[w];
        if (word >> b) & 1 == 0 {
            return None;
        }
        Some(self.live_prefix[w] as usize + (word & ((1u64 << b) - 1)).count_ones() as usize)
    }

    pub(crate) fn live_count(&self) -> usize {
        self.live_prefix.last().map_or(0, |&p| p as usize)
            + self.live_words.last().map_or(0, |w| w.count_ones() as usize)
    }

    /// Rough number of differential entries leaving block `(i, j)`: one per
    /// generator and free crossing.
    pub(crate) fn entry_estimate(&self, i: i32, dim: usize) -> usize {
        let w = (i + self.n_plus as i32) as usize;
        dim * (self.l - w.min(self.l))
    }

    fn labels_at(&self, pos: usize) -> &[u8] {
        &self.labels[pos * self.segs..(pos + 1) * self.segs]
    }

    fn live_states(&self) -> impl Iterator<Item = (u64, u8)> + '_ {
        self.info
            .iter()
            .enumerate()
            .filter(|(_, &k)| k != DEAD)
            .map(|(s, &k)| (s as u64, k))
    }

    /// Dimensions of all `(i, j)` blocks.
    pub(crate) fn chain_dims(&self) -> &BTreeMap<(i32, i32), usize> {
        &self.chain_dims
    }

    fn count_chain_dims(&self) -> BTreeMap<(i32, i32), usize> {
        let mut dims = BTreeMap::new();
        for (bits, k) in self.live_states() {
            let w = bits.count_ones();
            for d in 0..=k as u32 {
                *dims
                    .entry(grading(self.n_plus, self.n_minus, w, k as u32, d))
                    .or_insert(0) += self.binom[k as usize][d as usize] as usize;
            }
        }
        dims
    }

    /// Blocks with their differentials for the quantum gradings accepted by `keep`.
    pub(crate) fn blocks(&self, keep: &(dyn Fn(i32) -> bool + Sync)) -> Result<BTreeMap<(i32, i32), Block>, KhError> {
        let mut index: BTreeMap<(i32, i32), (usize, Vec<StateEntry>)> = BTreeMap::new();
        // Start of every (live state, kept grading) pair, looked up by
        // position instead of by binary search when the table is small enough.
        let live = self.live_count();
        let kept: Vec<i32> = self.j_values().into_iter().filter(|&j| keep(j)).collect();
        let jmin = kept.first().copied().unwrap_or(0);
        let mut slot_of = vec![u32::MAX; kept.last().map_or(0, |&j| (j - jmin) as usize / 2 + 1)];
        for (s, &j) in kept.iter().enumerate() {
            slot_of[(j - jmin) as usize / 2] = s as u32;
        }
        let nj = kept.len();
        let mut table = (live * nj <= TABLE_LIMIT).then(|| vec![u32::MAX; live * nj]);
        for (pos, (bits, k)) in self.live_states().enumerate() {
            let w = bits.count_ones();
            for d in 0..=k as u32 {
                let (i, j) = grading(self.n_plus, self.n_minus, w, k as u32, d);
                if !keep(j) {
                    continue;
                }
                let (dim, list) = index.entry((i, j)).or_default();
                list.push(StateEntry {
                    bits,
                    start: *dim as u32,
                    k,
                });
                if let Some(t) = table.as_mut() {
                    t[pos * nj + slot_of[(j - jmin) as usize / 2] as usize] = *dim as u32;
                }
                *dim += self.binom[k as usize][d as usize] as usize;
            }
        }
        let lookup = Lookup {
            table,
            nj,
            jmin,
            slot_of,
        };
        let mut blocks: BTreeMap<(i32, i32), Block> = index
            .into_iter()
            .map(|(key, (dim, states))| {
                (
                    key,
                    Block {
                        dim,
                        states,
                        d_t: SparseGF2Matrix::zeros(0, 0),
                    },
                )
            })
            .collect();

        let states = 1usize << self.l;
        let chunk_rows: Vec<BTreeMap<(i32, i32), RowBuf>> = (0..states.div_ceil(CHUNK))
            .into_par_iter()
            .map_init(Scratch::default, |scratch, ci| {
                let mut out: BTreeMap<(i32, i32), RowBuf> = BTreeMap::new();
                let lo = ci * CHUNK;
                let hi = (lo + CHUNK).min(states);
                for bits in lo as u64..hi as u64 {
                    if self.info[bits as usize] != DEAD {
                        self.state_rows(&blocks, &lookup, keep, bits, scratch, &mut out)?;
                    }
                }
                Ok(out)
            })
            .collect::<Result<_, KhError>>()?;

        let mut all_rows: BTreeMap<(i32, i32), RowBuf> = BTreeMap::new();
        for chunk in chunk_rows {
            for (key, rows) in chunk {
                all_rows.entry(key).or_default().append(rows);
            }
        }
        let dims: BTreeMap<(i32, i32), usize> = blocks.iter().map(|(&k, b)| (k, b.dim)).collect();
        for (&(i, j), b) in blocks.iter_mut() {
            let rows = all_rows.remove(&(i, j)).unwrap_or_default();
            let mut offsets = rows.offsets;
            if offsets.is_empty() {
                offsets.push(0);
            }
            debug_assert_eq!(offsets.len() - 1, b.dim);
            let cols = dims.get(&(i + 1, j)).copied().unwrap_or(0);
            b.d_t = SparseGF2Matrix::from_csr(cols, offsets, rows.data)?;
        }
        Ok(blocks)
    }

    /// Appends the rows of every generator of `bits` to `out`, per block.
    fn state_rows<'b>(
        &self,
        blocks: &'b BTreeMap<(i32, i32), Block>,
        lookup: &Lookup,
        keep: &(dyn Fn(i32) -> bool + Sync),
        bits: u64,
        sc: &mut Scratch<'b>,
        out: &mut BTreeMap<(i32, i32), RowBuf>,
    ) -> Result<(), KhError> {
        let k = self.info[bits as usize];
        let w = bits.count_ones();
        // wanted source degrees and the block each one maps into
        sc.slots.clear();
        for d in 0..=k as u32 {
            let (i, j) = grading(self.n_plus, self.n_minus, w, k as u32, d);
            if keep(j) {
                sc.slots.push((d, (i, j), blocks.get(&(i + 1, j))));
            }
        }
        if sc.slots.is_empty() {
            return Ok(());
        }
        let zero = self.labels_at(self.pos(bits).expect("live"));
        // smallest segment of each circle, in circle order
        sc.reps.clear();
        for (s, &x) in zero.iter().enumerate() {
            if x as usize == sc.reps.len() {
                sc.reps.push(s as u32);
            }
        }
        sc.edges.clear();
        sc.starts.clear();
        for c in 0..self.l {
            if (bits >> c) & 1 == 1 {
                continue;
            }
            let tb = bits | (1 << c);
            let Some(tpos) = self.pos(tb) else {
                continue;
            };
            let tk = self.info[tb as usize];
            let one = self.labels_at(tpos);
            let merge = match tk as i32 - k as i32 {
                -1 => true,
                1 => false,
                _ => {
                    return Err(ResolveError::ZeroSaddleAnomaly {
                        state: bits,
                        crossing: c,
                    }
                    .into())
                }
            };
            let mut e = Edge {
                merge,
                phi: [ARC; 32],
                new: [ARC; 2],
                n_new: 0,
            };
            for (ci, &r) in sc.reps.iter().enumerate() {
                e.phi[ci] = one[r as usize];
            }
            if !merge {
                let [s0, _, s2, _] = self.t.crossings()[c];
                for s in [s0, s2] {
                    if one[s as usize] != ARC {
                        e.new[e.n_new as usize] = one[s as usize];
                        e.n_new += 1;
                    }
                }
            }
            sc.edges.push(e);
            for &(_, (_, j), tblock) in &sc.slots {
                let start = match (tblock, &lookup.table) {
                    (None, _) => None,
                    (Some(_), Some(t)) => Some(t[tpos * lookup.nj + lookup.slot(j)]),
                    (Some(b), None) => b.start_of(tb),
                };
                sc.starts.push(start.unwrap_or(u32::MAX));
            }
        }
        let n_slots = sc.slots.len();
        for (slot, &(d, key, _)) in sc.slots.iter().enumerate() {
            let buf = out.entry(key).or_default();
            if buf.offsets.is_empty() {
                buf.offsets.push(0);
            }
            for m in masks_of_degree(k as u32, d) {
                for (ei, e) in sc.edges.iter().enumerate() {
                    let start = sc.starts[ei * n_slots + slot];
                    if start == u32::MAX {
                        continue;
                    }
                    saddle_action(e.merge, &e.phi, &e.new[..e.n_new as usize], m, |img| {
                        buf.data.push(start + colex_rank(&self.binom, img));
                    });
                }
                buf.offsets.push(buf.data.len());
            }
        }
        Ok(())
    }

    /// Quantum gradings that occur.
    pub(crate) fn j_values(&self) -> Vec<i32> {
        let mut js: Vec<i32> = self.chain_dims().keys().map(|&(_, j)| j).collect();
        js.sort_unstable();
        js.dedup();
        js
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gosper_enumeration() {
        for k in 0..8u32 {
            for d in 0..=k + 1 {
                let got: Vec<u32> = masks_of_degree(k, d).collect();
                let want: Vec<u32> = (0..1u32 << k).filter(|m| m.count_ones() == d).collect();
                assert_eq!(got, want, "k={k} d={d}");
            }
        }
    }

    #[test]
    fn colex_matches_sorted_order() {
        let b = binomials();
        for d in 0..=5u32 {
            for (pos, m) in masks_of_degree(5, d).enumerate() {
                assert_eq!(colex_rank(&b, m), pos as u32);
            }
        }
    }
}
