//! Dense reference for reduced GF(2) Khovanov homology of a knot from its PD
//! code: full cube of the closed diagram, textbook conventions (0 = A-smoothing
//! joining a-b and c-d, v_+ = 1, v_- = x), the circle through edge `marked`
//! forced to carry x. No sparsity, no slicing, nothing shared with the library.

use std::collections::{BTreeMap, BTreeSet};

fn find(p: &mut [usize], x: usize) -> usize {
    if p[x] != x {
        p[x] = find(p, p[x]);
    }
    p[x]
}

/// Circle index of every edge label (1-based) in state `s`, and the count.
fn circles(pd: &[[u32; 4]], s: u32) -> (Vec<usize>, usize) {
    let mut p: Vec<usize> = (0..=2 * pd.len()).collect();
    for (c, &[a, b, cc, d]) in pd.iter().enumerate() {
        let pairs = if s >> c & 1 == 0 { [(a, b), (cc, d)] } else { [(a, d), (b, cc)] };
        for (x, y) in pairs {
            let (rx, ry) = (find(&mut p, x as usize), find(&mut p, y as usize));
            p[rx] = ry;
        }
    }
    let mut id = BTreeMap::new();
    let lab = (0..p.len()).map(|e| { let r = find(&mut p, e); let k = id.len(); *id.entry(r).or_insert(k) });
    let lab: Vec<usize> = lab.map(|x| x.wrapping_sub(1)).collect(); // label 0 is a dummy
    (lab, id.len() - 1)
}

/// Writhe, with edges numbered consecutively along the knot.
pub fn writhe(pd: &[[u32; 4]]) -> i32 {
    let m = 2 * pd.len() as i64;
    pd.iter().map(|&[_, b, _, d]| if (b as i64 - d as i64).rem_euclid(m) == 1 { 1 } else { -1 }).sum()
}

fn rank(mut rows: Vec<Vec<bool>>) -> usize {
    let mut r = 0;
    for c in 0..rows.first().map_or(0, Vec::len) {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c]) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] { row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y); }
        }
        r += 1;
    }
    r
}

/// Dimensions by `(i, j)`, normalized so the unknot sits at `(0, 0)`.
pub fn reduced_kh(pd: &[[u32; 4]], marked: u32) -> BTreeMap<(i32, i32), usize> {
    let (l, w) = (pd.len(), writhe(pd));
    let (np, nm) = ((l as i32 + w) / 2, (l as i32 - w) / 2);
    let mut gens = Vec::new(); // (state, mask of circles labelled x, i, j)
    for s in 0..1u32 << l {
        let (lab, k) = circles(pd, s);
        let h = s.count_ones() as i32;
        for m in (0..1u32 << k).filter(|m| m >> lab[marked as usize] & 1 == 1) {
            gens.push((s, m, h - nm, k as i32 - 2 * m.count_ones() as i32 + 1 + h + np - 2 * nm));
        }
    }
    let index: BTreeMap<(u32, u32), usize> = gens.iter().enumerate().map(|(g, t)| ((t.0, t.1), g)).collect();
    let mut d = vec![vec![false; gens.len()]; gens.len()]; // d[target][source]
    for (g, &(s, m, _, _)) in gens.iter().enumerate() {
        let (lab, _) = circles(pd, s);
        for c in (0..l).filter(|&c| s >> c & 1 == 0) {
            let (tl, _) = circles(pd, s | 1 << c);
            let [a, b, cc, _] = pd[c].map(|e| e as usize);
            let (c1, c2) = (lab[a], lab[cc]);
            let bit = |circle: usize| m >> circle & 1;
            let mut base = 0u32; // untouched circles carry their labels across
            for e in 1..lab.len() {
                if lab[e] != c1 && lab[e] != c2 { base |= bit(lab[e]) << tl[e]; }
            }
            let targets = match (c1 != c2, bit(c1)) {
                (true, _) if bit(c1) + bit(c2) < 2 => vec![base | (bit(c1) | bit(c2)) << tl[a]],
                (true, _) => vec![],
                (false, 1) => vec![base | 1 << tl[a] | 1 << tl[b]],
                (false, _) => vec![base | 1 << tl[a], base | 1 << tl[b]],
            };
            for tm in targets {
                if let Some(&h) = index.get(&(s | 1 << c, tm)) { d[h][g] ^= true; }
            }
        }
    }
    let gens = &gens;
    let pick = |i: i32, j: i32| -> Vec<usize> { (0..gens.len()).filter(|&g| (gens[g].2, gens[g].3) == (i, j)).collect() };
    let block = |i: i32, j: i32| {
        let src = pick(i, j);
        rank(pick(i + 1, j).iter().map(|&h| src.iter().map(|&g| d[h][g]).collect()).collect())
    };
    let mut out = BTreeMap::new();
    for (i, j) in gens.iter().map(|g| (g.2, g.3)).collect::<BTreeSet<_>>() {
        let h = gens.iter().filter(|g| (g.2, g.3) == (i, j)).count() - block(i, j) - block(i - 1, j);
        if h > 0 { out.insert((i, j), h); }
    }
    out
}
