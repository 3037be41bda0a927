//! Jones-type invariants from the Kauffman bracket, used as an independent
//! check on Euler characteristics.
//!
//! The bracket is a plain state sum over all smoothings of a link diagram
//! and shares no code with the resolution cube. Colored Jones polynomials
//! come from the Chebyshev expansion of the Jones-Wenzl projector: the
//! `n`-colored invariant is a signed sum of brackets of the `(n - 2j)`-cables.
//!
//! Conventions: the A-smoothing of `[a, b, c, d]` joins `a`-`b` and `c`-`d`,
//! the loop value is `-A^2 - A^-2`, and polynomials in `A` are rewritten in
//! `q` through `A^2 = -q^-1`, so that the Jones variable `t = A^-4` becomes
//! `q^2`.

mod poly;

pub use poly::{LaurentPoly, Var};

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{cable, CableSpec, DiagramError, KnotDiagram, TangleDiagram};

pub const DEFAULT_ORACLE_BOUND: usize = 20;

/// Human-readable record of the substitution used by [`to_q`].
pub const Q_SUBSTITUTION: &str = "A^2 = -q^-1 (t = A^-4 = q^2)";

/// Record of how cable framing is removed in [`colored_jones_reduced`].
pub const FRAMING_CORRECTION: &str = "blackboard cables, times ((-1)^n A^(n^2+2n))^-writhe";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("diagram has {crossings} crossings, above the oracle bound {bound}")]
    TooManyCrossings { crossings: usize, bound: usize },
    #[error("malformed link diagram: {0}")]
    MalformedLink(String),
    #[error("polynomial has an odd power of A and cannot be written in q")]
    OddExponent,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Unoriented link diagram: PD tuples whose labels each occur exactly twice,
/// plus crossingless loops. The writhe is carried along for normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<[u32; 4]>,
    free_loops: usize,
    writhe: i32,
}

impl LinkDiagram {
    pub fn new(crossings: Vec<[u32; 4]>, free_loops: usize, writhe: i32) -> Result<Self, OracleError> {
        let mut uses: HashMap<u32, usize> = HashMap::new();
        for &e in crossings.iter().flatten() {
            *uses.entry(e).or_default() += 1;
        }
        if let Some((e, k)) = uses.iter().find(|&(_, &k)| k != 2) {
            return Err(OracleError::MalformedLink(format!("label {e} used {k} times")));
        }
        Ok(LinkDiagram {
            crossings,
            free_loops,
            writhe,
        })
    }

    /// `k` disjoint round circles.
    pub fn unlink(k: usize) -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            free_loops: k,
            writhe: 0,
        }
    }

    pub fn from_knot(k: &KnotDiagram) -> Self {
        LinkDiagram {
            crossings: k.crossings().to_vec(),
            free_loops: usize::from(k.crossing_count() == 0),
            writhe: k.writhe(),
        }
    }

    /// Closure of a balanced tangle: top endpoint `k` is joined to
    /// bottom endpoint `k` by an arc around the right side of the strip.
    pub fn closure(t: &TangleDiagram) -> Self {
        let segs = t.segment_count();
        let mut parent: Vec<usize> = (0..segs).collect();
        for (&b, &u) in t.bottom_endpoints().iter().zip(t.top_endpoints()) {
            let (rb, ru) = (find(&mut parent, b as usize), find(&mut parent, u as usize));
            parent[rb] = ru;
        }
        // components that never meet a crossing are round circles
        let mut touches = vec![false; segs];
        for &x in t.crossings().iter().flatten() {
            let r = find(&mut parent, x as usize);
            touches[r] = true;
        }
        let free_loops = (0..segs).filter(|&s| find(&mut parent, s) == s && !touches[s]).count();
        let crossings = t
            .crossings()
            .iter()
            .map(|c| c.map(|s| find(&mut parent, s as usize) as u32))
            .collect();
        LinkDiagram {
            crossings,
            free_loops,
            writhe: t.n_plus() as i32 - t.n_minus() as i32,
        }
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn writhe(&self) -> i32 {
        self.writhe
    }

    /// Same diagram with every crossing switched.
    pub fn mirror(&self) -> Self {
        LinkDiagram {
            crossings: self.crossings.iter().map(|&[a, b, c, d]| [b, c, d, a]).collect(),
            free_loops: self.free_loops,
            writhe: -self.writhe,
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn loop_value() -> LaurentPoly {
    LaurentPoly::from_terms(Var::A, [(2, -1), (-2, -1)])
}

/// State sum `sum_s A^(#A - #B) d^loops(s)` with `d = -A^2 - A^-2`, so that
/// the empty diagram is 1 and one round circle is `d`.
fn bracket_unnormalized(d: &LinkDiagram, bound: usize) -> Result<LaurentPoly, OracleError> {
    let l = d.crossing_count();
    if l > bound {
        return Err(OracleError::TooManyCrossings { crossings: l, bound });
    }
    let mut ids: HashMap<u32, usize> = HashMap::new();
    for &e in d.crossings.iter().flatten() {
        let next = ids.len();
        ids.entry(e).or_insert(next);
    }
    let edges = ids.len();
    let slots: Vec<[usize; 4]> = d.crossings.iter().map(|c| c.map(|e| ids[&e])).collect();

    // counts[a * (edges + 1) + loops]: states with `a` A-smoothings
    const CHUNK: u64 = 1 << 12;
    let states = 1u64 << l;
    let width = edges + 1;
    let counts = (0..states.div_ceil(CHUNK))
        .into_par_iter()
        .fold(
            || vec![0u64; (l + 1) * width],
            |mut acc, ci| {
                let mut parent = vec![0usize; edges];
                for s in ci * CHUNK..((ci + 1) * CHUNK).min(states) {
                    parent.iter_mut().enumerate().for_each(|(i, p)| *p = i);
                    let mut loops = edges;
                    for (x, &[a, b, c, e]) in slots.iter().enumerate() {
                        let pairs = if (s >> x) & 1 == 1 {
                            [(a, b), (c, e)]
                        } else {
                            [(a, e), (b, c)]
                        };
                        for (u, v) in pairs {
                            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                            if ru != rv {
                                parent[ru] = rv;
                                loops -= 1;
                            }
                        }
                    }
                    acc[s.count_ones() as usize * width + loops] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; (l + 1) * width],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let delta = loop_value();
    let powers: Vec<LaurentPoly> = (0..=edges + d.free_loops)
        .scan(LaurentPoly::one(Var::A), |p, _| {
            let out = p.clone();
            *p = &*p * &delta;
            Some(out)
        })
        .collect();
    let mut out = LaurentPoly::zero(Var::A);
    for a in 0..=l {
        for loops in 0..width {
            let c = counts[a * width + loops];
            if c > 0 {
                let term = powers[loops + d.free_loops].shift(2 * a as i32 - l as i32);
                out = &out + &term.scale(c as i64);
            }
        }
    }
    Ok(out)
}

/// Kauffman bracket normalized so that one round circle has bracket 1.
pub fn kauffman_bracket(d: &LinkDiagram, bound: usize) -> Result<LaurentPoly, OracleError> {
    if d.crossing_count() == 0 && d.free_loops == 0 {
        return Err(OracleError::MalformedLink("empty diagram".into()));
    }
    bracket_unnormalized(d, bound)?
        .div_exact(&loop_value())
        .ok_or_else(|| OracleError::MalformedLink("bracket not divisible by the loop value".into()))
}

/// Rewrites a polynomial in `A` with only even exponents as a polynomial in
/// `q`, using `A^2 = -q^-1`.
pub fn to_q(p: &LaurentPoly) -> Result<LaurentPoly, OracleError> {
    if p.terms().any(|(e, _)| e % 2 != 0) {
        return Err(OracleError::OddExponent);
    }
    Ok(LaurentPoly::from_terms(
        Var::Q,
        p.terms().map(|(e, c)| {
            let k = e / 2;
            (-k, if k % 2 == 0 { c } else { -c })
        }),
    ))
}

/// Jones polynomial `(-A^3)^-w <d>` in `q`.
pub fn jones(d: &LinkDiagram, bound: usize) -> Result<LaurentPoly, OracleError> {
    let b = kauffman_bracket(d, bound)?;
    let w = d.writhe;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    to_q(&b.shift(-3 * w).scale(sign))
}

/// Quantum dimension of the `n`-th Jones-Wenzl projector, the bracket of its
/// closure in the plane: `sum_j (-1)^j C(n-j, j) d^(n-2j)`.
fn projector_trace(n: usize) -> LaurentPoly {
    let d = loop_value();
    let mut out = LaurentPoly::zero(Var::A);
    for j in 0..=n / 2 {
        let c = binomial(n - j, j) as i64 * if j % 2 == 0 { 1 } else { -1 };
        out = &out + &d.pow((n - 2 * j) as u32).scale(c);
    }
    out
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Reduced `n`-colored Jones polynomial in `q`, normalized to 1 on the
/// unknot. `n = 1` is the ordinary Jones polynomial.
///
/// The cables are blackboard-framed; the framing is removed by the twist
/// eigenvalue of the projector rather than by inserting kinks.
pub fn colored_jones_reduced(k: &KnotDiagram, n: usize, bound: usize) -> Result<LaurentPoly, OracleError> {
    if n == 0 {
        return Err(DiagramError::InvalidCable("n must be at least 1".into()).into());
    }
    let largest = n * n * k.crossing_count();
    if largest > bound {
        return Err(OracleError::TooManyCrossings {
            crossings: largest,
            bound,
        });
    }
    let tangle = k.cut_at_marked();
    let mut sum = LaurentPoly::zero(Var::A);
    for j in 0..=n / 2 {
        let m = n - 2 * j;
        let bracket = if m == 0 {
            LaurentPoly::one(Var::A)
        } else {
            bracket_unnormalized(&LinkDiagram::closure(&cable(&tangle, &CableSpec::parallel(m))?), bound)?
        };
        let c = binomial(n - j, j) as i64 * if j % 2 == 0 { 1 } else { -1 };
        sum = &sum + &bracket.scale(c);
    }
    let reduced = sum
        .div_exact(&projector_trace(n))
        .ok_or_else(|| OracleError::MalformedLink("colored bracket not divisible by the projector trace".into()))?;
    let w = k.writhe();
    let twist_exp = (n * n + 2 * n) as i32;
    let sign = if n % 2 == 1 && w % 2 != 0 { -1 } else { 1 };
    to_q(&reduced.shift(-twist_exp * w).scale(sign))
}

/// Frozen identification of Khovanov Euler characteristics with oracle
/// output, for cables with all strands parallel:
/// `chi(q) = q^(framing_shift * w * n(n-1)) * J(q^-1)` when `invert`
/// (else `J(q)`), where `w` is the writhe of the knot diagram.
///
/// The shift is the difference between normalizing each of the `n^2 w`
/// cable crossings separately and removing the projector's twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionMap {
    pub invert: bool,
    pub framing_shift: i32,
}

impl ConventionMap {
    /// The map observed on the unknot and trefoil and used everywhere else.
    pub const FROZEN: ConventionMap = ConventionMap {
        invert: true,
        framing_shift: -1,
    };

    pub fn q_shift(&self, writhe: i32, n: usize) -> i32 {
        let n = n as i32;
        self.framing_shift * writhe * n * (n - 1)
    }

    pub fn apply(&self, j: &LaurentPoly, writhe: i32, n: usize) -> LaurentPoly {
        let p = if self.invert { j.invert_variable() } else { j.clone() };
        p.shift(self.q_shift(writhe, n))
    }

    /// The same map with the inversion toggled, for fault injection.
    pub fn flipped(&self) -> Self {
        ConventionMap {
            invert: !self.invert,
            ..*self
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "chi = q^({} * writhe * n(n-1)) * J({}) with {Q_SUBSTITUTION}",
            self.framing_shift,
            if self.invert { "q^-1" } else { "q" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::CrossingSign;

    fn a(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(Var::A, terms.iter().copied())
    }

    fn q(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(Var::Q, terms.iter().copied())
    }

    fn knot(pd: &[[u32; 4]]) -> KnotDiagram {
        KnotDiagram::from_pd(pd.to_vec(), None, None).unwrap()
    }

    const B: usize = DEFAULT_ORACLE_BOUND;

    #[test]
    fn bracket_examples() {
        let u = KnotDiagram::unknot();
        assert_eq!(kauffman_bracket(&LinkDiagram::from_knot(&u), B).unwrap(), a(&[(0, 1)]));
        let p = u.add_kink(1, CrossingSign::Positive).unwrap();
        assert_eq!(kauffman_bracket(&LinkDiagram::from_knot(&p), B).unwrap(), a(&[(3, -1)]));
        let n = u.add_kink(1, CrossingSign::Negative).unwrap();
        assert_eq!(
            kauffman_bracket(&LinkDiagram::from_knot(&n), B).unwrap(),
            a(&[(-3, -1)])
        );
        assert_eq!(
            kauffman_bracket(&LinkDiagram::unlink(2), B).unwrap(),
            a(&[(2, -1), (-2, -1)])
        );
        let kink = LinkDiagram::new(vec![[1, 1, 2, 2]], 0, 1).unwrap();
        assert_eq!(kauffman_bracket(&kink, B).unwrap(), a(&[(3, -1)]));
        assert!(LinkDiagram::new(vec![[1, 1, 2, 3]], 0, 0).is_err());
        let t = LinkDiagram::from_knot(&knot(&[[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]));
        assert!(matches!(
            kauffman_bracket(&t, 2),
            Err(OracleError::TooManyCrossings { crossings: 3, bound: 2 })
        ));
    }

    #[test]
    fn jones_of_small_knots() {
        // right-handed trefoil: t + t^3 - t^4 with t = q^2
        let t = knot(&[[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]);
        assert_eq!(t.writhe(), 3);
        let j = jones(&LinkDiagram::from_knot(&t), B).unwrap();
        assert_eq!(j, q(&[(2, 1), (6, 1), (8, -1)]));
        assert_eq!(
            jones(&LinkDiagram::from_knot(&t.mirror()), B).unwrap(),
            j.invert_variable()
        );
        // figure-eight: t^-2 - t^-1 + 1 - t + t^2
        let f = knot(&[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]]);
        let jf = jones(&LinkDiagram::from_knot(&f), B).unwrap();
        assert_eq!(jf, q(&[(-4, 1), (-2, -1), (0, 1), (2, -1), (4, 1)]));
        for e in t.edge_labels() {
            for s in [CrossingSign::Positive, CrossingSign::Negative] {
                let k = t.add_kink(e, s).unwrap();
                assert_eq!(jones(&LinkDiagram::from_knot(&k), B).unwrap(), j);
            }
        }
    }

    #[test]
    fn bracket_invariant_under_r2_and_r3() {
        // closures of braid words differing by a cancelling pair or a braid relation
        let pairs: [(&[i32], &[i32], usize); 2] = [
            (&[1, 1, 1], &[1, 1, 2, -2, 1], 3),
            (&[1, 2, 1, 2, 2], &[2, 1, 2, 2, 2], 3),
        ];
        for (x, y, strands) in pairs {
            let bx = kauffman_bracket(&braid_closure(strands, x), B).unwrap();
            let by = kauffman_bracket(&braid_closure(strands, y), B).unwrap();
            assert_eq!(bx, by);
        }
    }

    /// Closure of a braid as an unoriented link; only used for bracket checks.
    fn braid_closure(strands: usize, word: &[i32]) -> LinkDiagram {
        let mut current: Vec<u32> = (0..strands as u32).collect();
        let mut next = strands as u32;
        let mut crossings = Vec::new();
        for &g in word {
            let i = g.unsigned_abs() as usize - 1;
            let (bl, br, tl, tr) = (current[i], current[i + 1], next, next + 1);
            next += 2;
            crossings.push(if g > 0 { [br, tr, tl, bl] } else { [bl, br, tr, tl] });
            current[i] = tl;
            current[i + 1] = tr;
        }
        let close: HashMap<u32, u32> = current.iter().enumerate().map(|(p, &e)| (e, p as u32)).collect();
        let crossings: Vec<[u32; 4]> = crossings
            .into_iter()
            .map(|c| c.map(|e| close.get(&e).copied().unwrap_or(e)))
            .collect();
        let free = (0..strands as u32).filter(|e| close.get(e) == Some(e)).count();
        let w = word.iter().map(|g| g.signum()).sum();
        LinkDiagram::new(crossings, free, w).unwrap()
    }

    #[test]
    fn framing_correction_on_kinked_unknots() {
        let u = KnotDiagram::unknot();
        let mut diagrams = vec![u.clone()];
        for s in [CrossingSign::Positive, CrossingSign::Negative] {
            let one = u.add_kink(1, s).unwrap();
            let two = one.add_kink(1, s).unwrap();
            diagrams.push(one);
            diagrams.push(two);
        }
        for d in &diagrams {
            for n in 1..=2 {
                let j = colored_jones_reduced(d, n, B).unwrap();
                assert_eq!(j, LaurentPoly::one(Var::Q), "writhe {} n {n}", d.writhe());
            }
        }
        for n in 1..=6 {
            assert_eq!(colored_jones_reduced(&u, n, B).unwrap(), LaurentPoly::one(Var::Q));
        }
    }

    #[test]
    fn colored_jones_n1_is_jones() {
        let t = knot(&[[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]);
        assert_eq!(
            colored_jones_reduced(&t, 1, B).unwrap(),
            jones(&LinkDiagram::from_knot(&t), B).unwrap()
        );
    }

    #[test]
    fn closure_of_cabled_unknot_is_unlink() {
        let t = cable(&KnotDiagram::unknot().cut_at_marked(), &CableSpec::parallel(3)).unwrap();
        let c = LinkDiagram::closure(&t);
        assert_eq!((c.crossing_count(), c.free_loops()), (0, 3));
    }

    #[test]
    fn convention_map_round_trip() {
        let p = q(&[(2, 1), (6, 1), (8, -1)]);
        let m = ConventionMap::FROZEN;
        assert_eq!(m.apply(&p, 0, 5), p.invert_variable());
        assert_eq!(m.apply(&p, 3, 2), p.invert_variable().shift(-6));
        assert_ne!(m.flipped().apply(&p, 0, 1), m.apply(&p, 0, 1));
    }
}
