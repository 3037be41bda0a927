use std::collections::HashMap;

use super::{CrossingSign, DiagramError, KnotDiagram};

impl KnotDiagram {
    /// Adds a Reidemeister I curl with the given sign in the middle of `edge`.
    ///
    /// The incoming piece keeps the label `edge`; the loop and the outgoing
    /// piece get fresh labels. The marked edge is unchanged.
    pub fn add_kink(&self, edge: u32, sign: CrossingSign) -> Result<KnotDiagram, DiagramError> {
        if self.crossing_count() == 0 {
            if edge != 1 {
                return Err(DiagramError::UnknownEdge(edge));
            }
            let tuple = match sign {
                CrossingSign::Positive => [2, 2, 1, 1],
                CrossingSign::Negative => [1, 2, 2, 1],
            };
            return KnotDiagram::from_pd(vec![tuple], Some(1), self.name().map(str::to_string));
        }
        let ends = self.edge_ends(edge).ok_or(DiagramError::UnknownEdge(edge))?;
        let max = self.edge_labels().into_iter().max().unwrap_or(0);
        let (lp, out) = (max + 1, max + 2);
        let mut crossings = self.crossings().to_vec();
        crossings[ends.head.crossing as usize][ends.head.pos as usize] = out;
        crossings.push(match sign {
            CrossingSign::Positive => [lp, lp, out, edge],
            CrossingSign::Negative => [edge, lp, lp, out],
        });
        KnotDiagram::from_pd(crossings, Some(self.marked_edge()), self.name().map(str::to_string))
    }

    /// Closure of a braid on `strands` strands. Generator `i` (1-based) is a
    /// positive crossing between positions `i` and `i + 1`, `-i` its inverse.
    /// Edge labels follow the knot's orientation starting from 1.
    pub fn from_braid(strands: usize, word: &[i32]) -> Result<KnotDiagram, DiagramError> {
        if word.is_empty() {
            return if strands == 1 {
                Ok(KnotDiagram::unknot())
            } else {
                Err(DiagramError::MultiComponent {
                    visited: 1,
                    total: strands,
                })
            };
        }
        let mut current: Vec<u32> = (1..=strands as u32).collect();
        let mut next = strands as u32 + 1;
        let mut crossings = Vec::with_capacity(word.len());
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if i == 0 || i >= strands {
                return Err(DiagramError::MalformedPd(format!(
                    "braid generator {g} on {strands} strands"
                )));
            }
            let (l, r) = (i - 1, i);
            let (bl, br) = (current[l], current[r]);
            let (tl, tr) = (next, next + 1);
            next += 2;
            crossings.push(if g > 0 { [br, tr, tl, bl] } else { [bl, br, tr, tl] });
            current[l] = tl;
            current[r] = tr;
        }
        let closing: HashMap<u32, u32> = current
            .iter()
            .enumerate()
            .map(|(p, &top)| (top, p as u32 + 1))
            .collect();
        if closing.iter().any(|(top, bottom)| top == bottom) {
            return Err(DiagramError::MultiComponent {
                visited: 0,
                total: strands,
            });
        }
        for tuple in &mut crossings {
            for e in tuple.iter_mut() {
                if let Some(&b) = closing.get(e) {
                    *e = b;
                }
            }
        }
        Ok(KnotDiagram::from_pd(crossings, None, None)?.relabel_by_walk())
    }

    /// Renames edges to `1..=E` in the order of the orientation, starting
    /// from the current marked edge.
    pub fn relabel_by_walk(&self) -> KnotDiagram {
        if self.crossing_count() == 0 {
            return self.clone();
        }
        let walk = self.walk();
        let start = walk
            .iter()
            .position(|&e| e == self.marked_edge())
            .expect("marked edge is on the walk");
        let rename: HashMap<u32, u32> = (0..walk.len())
            .map(|i| (walk[(start + i) % walk.len()], i as u32 + 1))
            .collect();
        let crossings = self.crossings().iter().map(|t| t.map(|e| rename[&e])).collect();
        KnotDiagram::from_pd(crossings, Some(1), self.name().map(str::to_string))
            .expect("relabeling preserves validity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinks_on_the_round_unknot() {
        let u = KnotDiagram::unknot();
        let p = u.add_kink(1, CrossingSign::Positive).unwrap();
        assert_eq!(p.crossings(), &[[2, 2, 1, 1]]);
        assert_eq!(p.writhe(), 1);
        let n = u.add_kink(1, CrossingSign::Negative).unwrap();
        assert_eq!(n.writhe(), -1);
        let nn = n.add_kink(1, CrossingSign::Negative).unwrap();
        assert_eq!((nn.crossing_count(), nn.writhe()), (2, -2));
    }

    #[test]
    fn kink_in_trefoil() {
        let t = KnotDiagram::from_pd(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], None, None).unwrap();
        for e in t.edge_labels() {
            let k = t.add_kink(e, CrossingSign::Positive).unwrap();
            assert_eq!(k.crossing_count(), 4);
            assert_eq!(k.writhe(), -2);
            assert_eq!(k.edge_count(), 8);
        }
    }

    #[test]
    fn braid_closures() {
        let t = KnotDiagram::from_braid(2, &[1, 1, 1]).unwrap();
        assert_eq!((t.crossing_count(), t.writhe()), (3, 3));
        let w = t.walk();
        assert!((0..6).all(|i| w[(i + 1) % 6] % 6 == (w[i] + 1) % 6));
        let f = KnotDiagram::from_braid(3, &[1, -2, 1, -2]).unwrap();
        assert_eq!((f.n_plus(), f.n_minus()), (2, 2));
        assert!(KnotDiagram::from_braid(2, &[1, 1]).is_err());
        assert!(KnotDiagram::from_braid(3, &[1, 1, 1]).is_err());
    }
}
