//! Spectral sequence of a filtered chain complex over GF(2).
//!
//! Generators carry a filtration level `p` and a second grading `g` that
//! the differential preserves (for the Khovanov cube, `p = i` and `g = j`).
//! The differential may only raise `p`, so `F^p`, the span of generators of
//! level at least `p`, is a subcomplex. Pages are the subquotients
//!
//! ```text
//! Z_r^p = { x in F^p : Dx in F^(p+r) }
//! E_r^p = Z_r^p / (Z_(r-1)^(p+1) + D Z_(r-1)^(p-r+1)),   Z_(-1)^p = F^p
//! ```
//!
//! with `d_r` induced by `D` on explicit representatives. Page dimensions are
//! cross-checked against the homology of the previous page, and the limit
//! against the associated graded of the total homology.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec, Gf2Error, SparseGF2Matrix};
use crate::khcomplex::KhComplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("differential lowers the filtration: generator {from} (p = {p_from}) hits {to} (p = {p_to})")]
    InvalidFiltration {
        from: usize,
        to: usize,
        p_from: i32,
        p_to: i32,
    },
    #[error("differential changes the second grading: generator {from} hits {to}")]
    InvalidGrading { from: usize, to: usize },
    #[error("D o D is nonzero")]
    NotAComplex,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    levels: Vec<i32>,
    gradings: Vec<i32>,
    /// Row `s` lists the generators in `D(s)`.
    d: SparseGF2Matrix,
}

impl FilteredComplex {
    pub fn new(levels: Vec<i32>, gradings: Vec<i32>, d: SparseGF2Matrix) -> Result<Self, SpectralError> {
        let n = levels.len();
        if gradings.len() != n || d.row_count() != n || d.col_count() != n {
            return Err(SpectralError::DimensionMismatch(format!(
                "{} levels, {} gradings, {}x{} differential",
                n,
                gradings.len(),
                d.row_count(),
                d.col_count()
            )));
        }
        for (s, t) in d.entries() {
            let (s, t) = (s as usize, t as usize);
            if levels[t] < levels[s] {
                return Err(SpectralError::InvalidFiltration {
                    from: s,
                    to: t,
                    p_from: levels[s],
                    p_to: levels[t],
                });
            }
            if gradings[t] != gradings[s] {
                return Err(SpectralError::InvalidGrading { from: s, to: t });
            }
        }
        if !d.mul(&d)?.is_zero() {
            return Err(SpectralError::NotAComplex);
        }
        Ok(FilteredComplex { levels, gradings, d })
    }

    /// The cube filtered by the homological grading: `p = i`, `g = j`, and
    /// the whole differential is `D_1`.
    pub fn from_kh_cube(c: &KhComplex) -> Self {
        let dims = c.block_dims();
        let mut offset = BTreeMap::new();
        let (mut levels, mut gradings) = (Vec::new(), Vec::new());
        for (&(i, j), &dim) in &dims {
            offset.insert((i, j), levels.len() as u32);
            levels.extend(std::iter::repeat_n(i, dim));
            gradings.extend(std::iter::repeat_n(j, dim));
        }
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(levels.len());
        for &(i, j) in dims.keys() {
            let d_t = c.differential(i, j).transpose();
            let base = offset.get(&(i + 1, j)).copied().unwrap_or(0);
            for r in 0..d_t.row_count() {
                rows.push(d_t.row(r).iter().map(|&t| base + t).collect());
            }
        }
        let d = SparseGF2Matrix::from_rows(levels.len(), rows).expect("indices in range");
        FilteredComplex { levels, gradings, d }
    }

    pub fn generator_count(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[i32] {
        &self.levels
    }

    pub fn gradings(&self) -> &[i32] {
        &self.gradings
    }

    pub fn differential(&self) -> &SparseGF2Matrix {
        &self.d
    }

    /// `max p - min p`; `d_r` vanishes for every `r` above it.
    pub fn span(&self) -> usize {
        match (self.levels.iter().min(), self.levels.iter().max()) {
            (Some(lo), Some(hi)) => (hi - lo) as usize,
            _ => 0,
        }
    }

    /// Piece of `D` raising the filtration by exactly `k`.
    pub fn component(&self, k: i32) -> SparseGF2Matrix {
        let rows = (0..self.generator_count())
            .map(|s| {
                self.d
                    .row(s)
                    .iter()
                    .copied()
                    .filter(|&t| self.levels[t as usize] - self.levels[s] == k)
                    .collect()
            })
            .collect();
        SparseGF2Matrix::from_rows(self.generator_count(), rows).expect("indices in range")
    }
}

/// One page: dimensions per `(p, g)` and `d_r` per source `(p, g)`, written
/// in the page's own bases (rows: source basis, columns: target basis).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub dims: BTreeMap<(i32, i32), usize>,
    pub differentials: BTreeMap<(i32, i32), SparseGF2Matrix>,
}

impl Page {
    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSequence {
    pub pages: Vec<Page>,
    /// First page from which every later page has the same dimensions.
    pub stabilized_at: usize,
    pub e_infinity: BTreeMap<(i32, i32), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageReport {
    pub r: usize,
    pub dims: Vec<[i64; 3]>,
    pub stabilized_at: usize,
}

impl SpectralSequence {
    pub fn report(&self) -> Vec<PageReport> {
        self.pages
            .iter()
            .map(|p| PageReport {
                r: p.r,
                dims: p
                    .dims
                    .iter()
                    .map(|(&(a, b), &d)| [a as i64, b as i64, d as i64])
                    .collect(),
                stabilized_at: self.stabilized_at,
            })
            .collect()
    }
}

/// Pages `E_0 ..= E_r_max`. Later pages are computed as far as needed to
/// find the stabilization point and to check the limit against the
/// associated graded of the total homology.
pub fn pages(f: &FilteredComplex, r_max: usize) -> Result<SpectralSequence, SpectralError> {
    let last = r_max.max(f.span() + 1);
    let mut by_grading: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (s, &g) in f.gradings.iter().enumerate() {
        by_grading.entry(g).or_default().push(s);
    }
    let mut all: Vec<Page> = (0..=last)
        .map(|r| Page {
            r,
            dims: BTreeMap::new(),
            differentials: BTreeMap::new(),
        })
        .collect();
    let mut e_infinity = BTreeMap::new();
    for (&g, gens) in &by_grading {
        let slice = Slice::new(f, gens);
        for r in 0..=last {
            let page = slice.page(r)?;
            for (p, info) in page {
                if info.dim > 0 {
                    all[r].dims.insert((p, g), info.dim);
                }
                if !info.d.is_zero() {
                    all[r].differentials.insert((p, g), info.d);
                }
            }
        }
        for (p, dim) in slice.graded_homology() {
            if dim > 0 {
                e_infinity.insert((p, g), dim);
            }
        }
    }
    if all[last].dims != e_infinity {
        return Err(SpectralError::Inconsistent(
            "limit page differs from the associated graded of total homology".into(),
        ));
    }
    let mut stabilized_at = last;
    while stabilized_at > 0 && all[stabilized_at - 1].dims == all[last].dims {
        stabilized_at -= 1;
    }
    all.truncate(r_max + 1);
    Ok(SpectralSequence {
        pages: all,
        stabilized_at,
        e_infinity,
    })
}

struct PageSlot {
    dim: usize,
    d: SparseGF2Matrix,
}

/// One value of the preserved grading, in local coordinates.
struct Slice {
    levels: Vec<i32>,
    /// `d[s]`: image of local generator `s`.
    d: Vec<BitVec>,
    ps: Vec<i32>,
}

impl Slice {
    fn new(f: &FilteredComplex, gens: &[usize]) -> Self {
        let local: BTreeMap<usize, usize> = gens.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        let n = gens.len();
        let d = gens
            .iter()
            .map(|&s| BitVec::from_indices(n, f.d.row(s).iter().map(|&t| local[&(t as usize)])))
            .collect();
        let levels: Vec<i32> = gens.iter().map(|&s| f.levels[s]).collect();
        let mut ps = levels.clone();
        ps.sort_unstable();
        ps.dedup();
        Slice { levels, d, ps }
    }

    fn n(&self) -> usize {
        self.levels.len()
    }

    fn apply(&self, x: &BitVec) -> BitVec {
        let mut y = BitVec::zeros(self.n());
        for s in x.ones() {
            y.xor_assign(&self.d[s]);
        }
        y
    }

    /// Basis of `Z_r^p`; `r = -1` gives `F^p`.
    fn z(&self, r: i64, p: i32) -> Vec<BitVec> {
        let n = self.n();
        let cols: Vec<usize> = (0..n).filter(|&s| self.levels[s] >= p).collect();
        if r < 0 {
            return cols.iter().map(|&s| BitVec::from_indices(n, [s])).collect();
        }
        let bound = p as i64 + r;
        let rows: Vec<usize> = (0..n).filter(|&t| (self.levels[t] as i64) < bound).collect();
        let mut m = BitMatrix::zeros(rows.len(), cols.len());
        for (ci, &s) in cols.iter().enumerate() {
            for (ri, &t) in rows.iter().enumerate() {
                if self.d[s].get(t) {
                    m.set(ri, ci, true);
                }
            }
        }
        m.kernel_basis()
            .into_iter()
            .map(|k| BitVec::from_indices(n, k.ones().map(|c| cols[c])))
            .collect()
    }

    /// Spanning set of `B_r^p = Z_(r-1)^(p+1) + D Z_(r-1)^(p-r+1)`.
    fn b(&self, r: usize, p: i32) -> Vec<BitVec> {
        let r = r as i64;
        let mut out = self.z(r - 1, p + 1);
        out.extend(self.z(r - 1, p - r as i32 + 1).iter().map(|x| self.apply(x)));
        out
    }

    fn page(&self, r: usize) -> Result<BTreeMap<i32, PageSlot>, SpectralError> {
        let mut quotients: BTreeMap<i32, Quotient> = BTreeMap::new();
        for &p in &self.ps {
            quotients.insert(p, Quotient::new(&self.b(r, p), &self.z(r as i64, p)));
        }
        let mut out = BTreeMap::new();
        for (&p, q) in &quotients {
            let target = quotients.get(&(p + r as i32));
            let mut rows = Vec::with_capacity(q.reps.len());
            for x in &q.reps {
                let y = self.apply(x);
                let coords = match target {
                    Some(t) => t.coordinates(&y).ok_or_else(|| {
                        SpectralError::Inconsistent(format!("d_{r} image outside Z at p = {}", p + r as i32))
                    })?,
                    None if y.is_zero() => Vec::new(),
                    None => match self.z_contains_modulo_b(r, p + r as i32, &y) {
                        true => Vec::new(),
                        false => {
                            return Err(SpectralError::Inconsistent(format!(
                                "d_{r} image at empty level {}",
                                p + r as i32
                            )))
                        }
                    },
                };
                rows.push(coords);
            }
            let cols = target.map_or(0, |t| t.reps.len());
            out.insert(
                p,
                PageSlot {
                    dim: q.reps.len(),
                    d: SparseGF2Matrix::from_rows(cols, rows)?,
                },
            );
        }
        self.check_page(r, &out)?;
        Ok(out)
    }

    fn z_contains_modulo_b(&self, r: usize, p: i32, y: &BitVec) -> bool {
        Quotient::new(&self.b(r, p), &[]).coordinates(y).is_some()
    }

    /// `d_r o d_r = 0`, and the next page is the homology of this one.
    fn check_page(&self, r: usize, slots: &BTreeMap<i32, PageSlot>) -> Result<(), SpectralError> {
        let step = r as i32;
        for (&p, s) in slots {
            if let Some(next) = slots.get(&(p + step)) {
                if s.d.col_count() == next.d.row_count() && !s.d.mul(&next.d)?.is_zero() {
                    return Err(SpectralError::Inconsistent(format!(
                        "d_{r} squares to nonzero at p = {p}"
                    )));
                }
            }
        }
        for (&p, s) in slots {
            let out_rank = s.d.rank();
            let in_rank = slots.get(&(p - step)).map_or(0, |x| x.d.rank());
            let predicted = s.dim - out_rank - in_rank;
            let actual = Quotient::new(&self.b(r + 1, p), &self.z(r as i64 + 1, p)).reps.len();
            if predicted != actual {
                return Err(SpectralError::Inconsistent(format!(
                    "page {} at p = {p}: homology of d_{r} has dim {predicted}, subquotient has {actual}",
                    r + 1
                )));
            }
        }
        Ok(())
    }

    /// `dim F^p H - dim F^(p+1) H` for the total homology.
    fn graded_homology(&self) -> BTreeMap<i32, usize> {
        let n = self.n();
        let image: Vec<BitVec> = self.d.iter().filter(|v| !v.is_zero()).cloned().collect();
        let filtered_h = |p: i32| -> usize {
            let cycles = self.z(i64::MAX / 4, p).len();
            // boundaries inside F^p: image vectors with no support below p
            let low: Vec<usize> = (0..n).filter(|&t| self.levels[t] < p).collect();
            let img_rank = rank_of(&image, n);
            let proj: Vec<BitVec> = image
                .iter()
                .map(|v| {
                    BitVec::from_indices(
                        low.len(),
                        low.iter().enumerate().filter(|(_, &t)| v.get(t)).map(|(k, _)| k),
                    )
                })
                .collect();
            let b_in_fp = img_rank - rank_of(&proj, low.len());
            cycles - b_in_fp
        };
        let mut out = BTreeMap::new();
        for (k, &p) in self.ps.iter().enumerate() {
            let above = self.ps.get(k + 1).map_or(0, |&q| filtered_h(q));
            out.insert(p, filtered_h(p) - above);
        }
        out
    }
}

fn rank_of(vs: &[BitVec], len: usize) -> usize {
    BitMatrix::from_rows(len, vs.to_vec()).rank()
}

/// `span(z) / span(b)` with chosen representatives, assuming `b` lies in
/// `span(z)`. Vectors are reduced against echelon rows that remember which
/// representatives they contain.
struct Quotient {
    rows: Vec<(usize, BitVec, BitVec)>,
    reps: Vec<BitVec>,
}

impl Quotient {
    fn new(b: &[BitVec], z: &[BitVec]) -> Self {
        let mut q = Quotient {
            rows: Vec::new(),
            reps: Vec::new(),
        };
        for v in b {
            q.insert(v.clone(), BitVec::zeros(z.len()));
        }
        for v in z {
            let (rest, _) = q.reduce(v.clone(), z.len());
            if !rest.is_zero() {
                let tag = BitVec::from_indices(z.len(), [q.reps.len()]);
                q.insert(v.clone(), tag);
                q.reps.push(v.clone());
            }
        }
        // tags were sized for z.len(); shrink to the number of representatives
        let k = q.reps.len();
        for row in &mut q.rows {
            row.2 = BitVec::from_indices(k, row.2.ones());
        }
        q
    }

    fn reduce(&self, mut v: BitVec, tag_len: usize) -> (BitVec, BitVec) {
        let mut tag = BitVec::zeros(tag_len);
        for (pivot, row, t) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
                tag.xor_assign(t);
            }
        }
        (v, tag)
    }

    fn insert(&mut self, v: BitVec, tag: BitVec) {
        let tag_len = tag.len();
        let (v, acc) = self.reduce(v, tag_len);
        if let Some(pivot) = v.first_one() {
            let mut t = tag;
            t.xor_assign(&acc);
            self.rows.push((pivot, v, t));
        }
    }

    /// Coordinates of `y` in the representative basis, or `None` when `y`
    /// is not in `span(z)`.
    fn coordinates(&self, y: &BitVec) -> Option<Vec<u32>> {
        let (rest, tag) = self.reduce(y.clone(), self.reps.len());
        rest.is_zero().then(|| tag.ones().map(|k| k as u32).collect())
    }
}
