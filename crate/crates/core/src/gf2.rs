//! Linear algebra over the two-element field.
//!
//! [`SparseGF2Matrix`] stores each row as a sorted list of column indices.
//! Rank computations eliminate on the sparse rows and switch to packed
//! [`BitMatrix`] rows once the remaining block becomes dense.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("composite of consecutive differentials is nonzero")]
    ComposeNonzero,
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// Fraction of nonzero entries above which elimination continues on
/// packed bit rows.
pub const DEFAULT_DENSITY_THRESHOLD: f64 = 0.05;

/// Largest packed block the elimination switches to.
pub const DENSE_BYTES_CAP: usize = 256 << 20;

/// Packed bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in idx {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if self.get(i) != v {
            self.flip(i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set index.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }
}

/// Dense matrix with packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        BitMatrix { cols, rows }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.rows[c].flip(r);
            }
        }
        t
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let parity = row
                .words
                .iter()
                .zip(&v.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                & 1;
            if parity == 1 {
                out.flip(r);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        dense_rank_in_place(&mut rows, self.cols)
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        // Reduce the transpose-free way: row-reduce self and read off free columns.
        let mut rows = self.rows.clone();
        let pivots = rref_in_place(&mut rows, self.cols);
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = BitVec::zeros(self.cols);
            v.flip(free);
            for (r, &pc) in pivots.iter().enumerate() {
                if rows[r].get(free) {
                    v.flip(pc);
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Reduced row echelon form; returns the pivot column of each nonzero row,
/// which are moved to the front.
pub fn rref_in_place(rows: &mut Vec<BitVec>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(next, p);
        let pivot = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(c);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    rows.truncate(next);
    pivots
}

fn dense_rank_in_place(rows: &mut [BitVec], cols: usize) -> usize {
    dense_pivots_in_place(rows, cols).len()
}

/// Forward elimination; returns the pivot column of each pivot row.
fn dense_pivots_in_place(rows: &mut [BitVec], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    for c in 0..cols {
        let rank = pivots.len();
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        let w = c / 64;
        for row in tail.iter_mut() {
            if row.get(c) {
                for (a, b) in row.words[w..].iter_mut().zip(&pivot.words[w..]) {
                    *a ^= b;
                }
            }
        }
        pivots.push(c);
    }
    pivots
}

/// Sparse matrix over GF(2) in compressed row form: row `r` is the sorted
/// column list `data[offsets[r]..offsets[r + 1]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseGF2Matrix {
    rows: usize,
    cols: usize,
    offsets: Vec<usize>,
    data: Vec<u32>,
}

impl SparseGF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseGF2Matrix {
            rows,
            cols,
            offsets: vec![0; rows + 1],
            data: Vec::new(),
        }
    }

    /// Builds a matrix from `(row, col)` entries. Repeated entries add up
    /// mod 2, so an entry listed twice cancels.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, Gf2Error> {
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); rows];
        for (r, c) in entries {
            if r as usize >= rows || c as usize >= cols {
                return Err(Gf2Error::IndexOutOfRange {
                    row: r as usize,
                    col: c as usize,
                    rows,
                    cols,
                });
            }
            lists[r as usize].push(c);
        }
        Self::from_rows(cols, lists)
    }

    /// Builds a matrix from per-row column lists; repeated columns cancel.
    pub fn from_rows(cols: usize, rows: Vec<Vec<u32>>) -> Result<Self, Gf2Error> {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let mut data = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        for row in &rows {
            data.extend_from_slice(row);
            offsets.push(data.len());
        }
        Self::from_csr(cols, offsets, data)
    }

    /// Builds a matrix from compressed rows in any order within each row;
    /// repeated columns cancel.
    pub fn from_csr(cols: usize, offsets: Vec<usize>, mut data: Vec<u32>) -> Result<Self, Gf2Error> {
        let rows = offsets.len().saturating_sub(1);
        let mut out_offsets = Vec::with_capacity(offsets.len());
        out_offsets.push(0);
        let mut write = 0;
        for r in 0..rows {
            let (lo, hi) = (offsets[r], offsets[r + 1]);
            data[lo..hi].sort_unstable();
            let mut i = lo;
            while i < hi {
                let c = data[i];
                let mut j = i;
                while j < hi && data[j] == c {
                    j += 1;
                }
                if (j - i) % 2 == 1 {
                    if c as usize >= cols {
                        return Err(Gf2Error::IndexOutOfRange {
                            row: r,
                            col: c as usize,
                            rows,
                            cols,
                        });
                    }
                    // write never passes i, so unread entries stay intact
                    data[write] = c;
                    write += 1;
                }
                i = j;
            }
            out_offsets.push(write);
        }
        data.truncate(write);
        Ok(SparseGF2Matrix {
            rows,
            cols,
            offsets: out_offsets,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        SparseGF2Matrix {
            rows: n,
            cols: n,
            offsets: (0..=n).collect(),
            data: (0..n as u32).collect(),
        }
    }

    pub fn from_dense(m: &BitMatrix) -> Self {
        let rows = m.rows().iter().map(|r| r.ones().map(|c| c as u32).collect()).collect();
        Self::from_rows(m.col_count(), rows).expect("indices in range")
    }

    pub fn to_dense(&self) -> BitMatrix {
        BitMatrix::from_rows(
            self.cols,
            (0..self.rows)
                .map(|r| BitVec::from_indices(self.cols, self.row(r).iter().map(|&c| c as usize)))
                .collect(),
        )
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[self.offsets[r]..self.offsets[r + 1]]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row(r).binary_search(&(c as u32)).is_ok()
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).iter().map(move |&c| (r as u32, c)))
    }

    pub fn transpose(&self) -> SparseGF2Matrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.data {
            counts[c as usize + 1] += 1;
        }
        for i in 0..self.cols {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut fill = counts;
        let mut data = vec![0u32; self.data.len()];
        for r in 0..self.rows {
            for &c in self.row(r) {
                data[fill[c as usize]] = r as u32;
                fill[c as usize] += 1;
            }
        }
        SparseGF2Matrix {
            rows: self.cols,
            cols: self.rows,
            offsets,
            data,
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseGF2Matrix) -> Result<SparseGF2Matrix, Gf2Error> {
        if self.cols != rhs.rows {
            return Err(Gf2Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut acc = BitVec::zeros(rhs.cols);
        let mut touched = Vec::new();
        let mut offsets = vec![0];
        let mut data = Vec::new();
        for r in 0..self.rows {
            for &k in self.row(r) {
                for &c in rhs.row(k as usize) {
                    acc.flip(c as usize);
                    touched.push(c);
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for &c in &touched {
                if acc.get(c as usize) {
                    data.push(c);
                    acc.flip(c as usize);
                }
            }
            touched.clear();
            offsets.push(data.len());
        }
        Ok(SparseGF2Matrix {
            rows: self.rows,
            cols: rhs.cols,
            offsets,
            data,
        })
    }

    /// Applies row permutation `row_perm[r]` and column permutation `col_perm[c]`.
    pub fn permuted(&self, row_perm: &[u32], col_perm: &[u32]) -> SparseGF2Matrix {
        let mut rows = vec![Vec::new(); self.rows];
        for r in 0..self.rows {
            rows[row_perm[r] as usize] = self.row(r).iter().map(|&c| col_perm[c as usize]).collect();
        }
        Self::from_rows(self.cols, rows).expect("permutation keeps indices in range")
    }

    pub fn rank(&self) -> usize {
        self.rank_with_threshold(DEFAULT_DENSITY_THRESHOLD)
    }

    pub fn rank_with_threshold(&self, threshold: f64) -> usize {
        self.pivot_columns(None, threshold).len()
    }

    /// Row-reduces a private copy and returns the pivot columns in
    /// increasing order. Each pivot column `c` is the leading entry of some
    /// combination of rows whose other entries all lie beyond `c`.
    ///
    /// Rows with `skip[r]` set are left out. Pivot for each column: among
    /// the rows whose lowest entry is that column, the one with fewest
    /// entries. Once the remaining entries exceed `threshold` of the
    /// remaining block, elimination finishes on packed rows, provided those
    /// fit in [`DENSE_BYTES_CAP`].
    pub fn pivot_columns(&self, skip: Option<&[bool]>, threshold: f64) -> Vec<u32> {
        let mut buckets: Vec<Vec<Vec<u32>>> = vec![Vec::new(); self.cols];
        let mut live_rows = 0usize;
        let mut live_nnz = 0usize;
        for r in 0..self.rows {
            if skip.is_some_and(|s| s[r]) {
                continue;
            }
            let row = self.row(r);
            if let Some(&lead) = row.first() {
                buckets[lead as usize].push(row.to_vec());
                live_rows += 1;
                live_nnz += row.len();
            }
        }
        let mut pivots = Vec::new();
        let mut scratch = Vec::new();
        for col in 0..self.cols {
            let remaining_cols = self.cols - col;
            let block = (live_rows as f64) * (remaining_cols as f64);
            if live_rows > 64 && (live_nnz as f64) > threshold * block && block / 8.0 <= DENSE_BYTES_CAP as f64 {
                let mut rows: Vec<BitVec> = buckets[col..]
                    .iter_mut()
                    .flat_map(std::mem::take)
                    .map(|r| BitVec::from_indices(remaining_cols, r.iter().map(|&c| c as usize - col)))
                    .collect();
                pivots.extend(
                    dense_pivots_in_place(&mut rows, remaining_cols)
                        .into_iter()
                        .map(|c| (c + col) as u32),
                );
                return pivots;
            }
            let bucket = std::mem::take(&mut buckets[col]);
            if bucket.is_empty() {
                continue;
            }
            let p = (0..bucket.len()).min_by_key(|&i| bucket[i].len()).expect("nonempty");
            let mut bucket = bucket;
            let pivot = bucket.swap_remove(p);
            pivots.push(col as u32);
            live_rows -= 1;
            live_nnz -= pivot.len();
            for row in bucket {
                live_nnz -= row.len();
                sym_diff(&row, &pivot, &mut scratch);
                if let Some(&lead) = scratch.first() {
                    live_nnz += scratch.len();
                    buckets[lead as usize].push(std::mem::take(&mut scratch));
                } else {
                    live_rows -= 1;
                }
            }
        }
        pivots
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}

fn sym_diff(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

pub fn rank(m: &SparseGF2Matrix) -> usize {
    m.rank()
}

pub fn kernel_dim(m: &SparseGF2Matrix) -> usize {
    m.kernel_dim()
}

/// Homology at the middle of `A --d_in--> B --d_out--> C`:
/// `dim ker d_out - rank d_in`. In debug builds `d_out * d_in = 0` is checked.
pub fn homology_dim(d_in: &SparseGF2Matrix, d_out: &SparseGF2Matrix) -> Result<usize, Gf2Error> {
    check_composable(d_in, d_out)?;
    if cfg!(debug_assertions) && !d_out.mul(d_in)?.is_zero() {
        return Err(Gf2Error::ComposeNonzero);
    }
    Ok(d_out.kernel_dim() - d_in.rank())
}

/// Like [`homology_dim`] but always verifies that the composite vanishes.
pub fn homology_dim_checked(d_in: &SparseGF2Matrix, d_out: &SparseGF2Matrix) -> Result<usize, Gf2Error> {
    check_composable(d_in, d_out)?;
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Gf2Error::ComposeNonzero);
    }
    Ok(d_out.kernel_dim() - d_in.rank())
}

fn check_composable(d_in: &SparseGF2Matrix, d_out: &SparseGF2Matrix) -> Result<(), Gf2Error> {
    if d_in.row_count() != d_out.col_count() {
        return Err(Gf2Error::DimensionMismatch(format!(
            "d_in lands in dimension {} but d_out starts from dimension {}",
            d_in.row_count(),
            d_out.col_count()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, entries: &[(u32, u32)]) -> SparseGF2Matrix {
        SparseGF2Matrix::from_entries(rows, cols, entries.iter().copied()).unwrap()
    }

    /// Textbook elimination on a `Vec<Vec<bool>>`, independent of the packed code.
    fn oracle_rank(rows: &[Vec<bool>]) -> usize {
        let mut a: Vec<Vec<bool>> = rows.to_vec();
        let cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..a.len()).find(|&r| a[r][c]) {
                a.swap(rank, p);
                for r in 0..a.len() {
                    if r != rank && a[r][c] {
                        for k in 0..cols {
                            let v = a[rank][k];
                            a[r][k] ^= v;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn small_ranks() {
        assert_eq!(SparseGF2Matrix::identity(3).rank(), 3);
        assert_eq!(SparseGF2Matrix::zeros(3, 3).rank(), 0);
        let a = m(2, 3, &[(0, 0), (0, 1), (1, 1), (1, 2)]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.kernel_dim(), 1);
        assert_eq!(SparseGF2Matrix::identity(3).kernel_dim(), 0);
        assert_eq!(SparseGF2Matrix::zeros(2, 5).kernel_dim(), 5);
    }

    #[test]
    fn repeated_entries_cancel() {
        let a = m(1, 2, &[(0, 0), (0, 0), (0, 1)]);
        assert_eq!(a.row(0), &[1]);
    }

    #[test]
    fn homology_examples() {
        let z = SparseGF2Matrix::zeros(4, 0);
        let z_out = SparseGF2Matrix::zeros(0, 4);
        assert_eq!(homology_dim(&z, &z_out).unwrap(), 4);
        let inj = SparseGF2Matrix::identity(3);
        assert_eq!(homology_dim(&SparseGF2Matrix::zeros(3, 2), &inj).unwrap(), 0);
        // F -> F^2 -> F with [1,1]^t then [1,1]
        let d_in = m(2, 1, &[(0, 0), (1, 0)]);
        let d_out = m(1, 2, &[(0, 0), (0, 1)]);
        assert_eq!(homology_dim_checked(&d_in, &d_out).unwrap(), 0);
    }

    #[test]
    fn homology_errors() {
        let d_in = m(2, 1, &[(0, 0)]);
        let d_out = m(1, 2, &[(0, 0)]);
        assert_eq!(homology_dim_checked(&d_in, &d_out), Err(Gf2Error::ComposeNonzero));
        let bad = SparseGF2Matrix::zeros(1, 3);
        assert!(matches!(homology_dim(&d_in, &bad), Err(Gf2Error::DimensionMismatch(_))));
    }

    #[test]
    fn kernel_basis_is_annihilated() {
        let a = m(2, 4, &[(0, 0), (0, 1), (1, 1), (1, 2), (1, 3)]).to_dense();
        let k = a.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).is_zero());
        }
    }

    fn arb_matrix(max: usize, density: f64) -> impl Strategy<Value = Vec<Vec<bool>>> {
        (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(proptest::collection::vec(proptest::bool::weighted(density), c), r)
        })
    }

    fn to_sparse(rows: &[Vec<bool>]) -> SparseGF2Matrix {
        let cols = rows[0].len();
        let entries = rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(move |(c, _)| (r as u32, c as u32))
        });
        SparseGF2Matrix::from_entries(rows.len(), cols, entries).unwrap()
    }

    proptest! {
        #[test]
        fn rank_matches_dense_oracle(rows in arb_matrix(64, 0.1)) {
            let s = to_sparse(&rows);
            prop_assert_eq!(s.rank(), oracle_rank(&rows));
            prop_assert_eq!(s.rank_with_threshold(0.0), oracle_rank(&rows));
            prop_assert_eq!(s.to_dense().rank(), oracle_rank(&rows));
        }

        #[test]
        fn rank_of_transpose(rows in arb_matrix(200, 0.03)) {
            let s = to_sparse(&rows);
            prop_assert_eq!(s.rank(), s.transpose().rank());
        }

        #[test]
        fn homology_invariant_under_basis_permutation(
            seed in any::<u64>(), a in 1usize..12, b in 1usize..12, c in 1usize..12
        ) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            // d_in = random, d_out = random map killing im(d_in) via a projection
            let d_in = BitMatrix::from_rows(a, (0..b).map(|_| {
                BitVec::from_indices(a, (0..a).filter(|_| rng.gen_bool(0.3)))
            }).collect());
            let img: Vec<BitVec> = d_in.transpose().rows().to_vec();
            // functionals vanishing on the image: kernel of img (as rows)
            let ann = BitMatrix::from_rows(b, img).kernel_basis();
            let out_rows: Vec<BitVec> = (0..c).map(|_| {
                let mut v = BitVec::zeros(b);
                for f in &ann { if rng.gen_bool(0.5) { v.xor_assign(f); } }
                v
            }).collect();
            let d_in = SparseGF2Matrix::from_dense(&d_in);
            let d_out = SparseGF2Matrix::from_dense(&BitMatrix::from_rows(b, out_rows));
            let h = homology_dim_checked(&d_in, &d_out).unwrap();
            let mut pa: Vec<u32> = (0..a as u32).collect();
            let mut pb: Vec<u32> = (0..b as u32).collect();
            let mut pc: Vec<u32> = (0..c as u32).collect();
            pa.shuffle(&mut rng); pb.shuffle(&mut rng); pc.shuffle(&mut rng);
            let d_in2 = d_in.permuted(&pb, &pa);
            let d_out2 = d_out.permuted(&pc, &pb);
            prop_assert_eq!(homology_dim_checked(&d_in2, &d_out2).unwrap(), h);
        }
    }
}
