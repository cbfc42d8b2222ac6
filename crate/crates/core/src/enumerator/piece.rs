//! Labeled disks placed by the search: single tiles, or fixed patches of
//! several tiles glued along interior edges.

use std::collections::{BTreeSet, HashMap};

use crate::label::Label;
use crate::map::MapError;

/// A connected labeled map with boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub next: Vec<usize>,
    pub twin: Vec<Option<usize>>,
    pub corner: Vec<Label>,
    pub face_of: Vec<usize>,
    pub face_count: usize,
}

/// A maximal σ-run of corners inside a piece.
#[derive(Clone, Debug)]
pub(crate) struct LocalChain {
    pub corners: Vec<usize>,
    pub closed: bool,
}

impl Piece {
    /// One face with the given counterclockwise corner word.
    pub fn tile(word: &[Label]) -> Piece {
        let d = word.len();
        Piece {
            next: (0..d).map(|i| (i + 1) % d).collect(),
            twin: vec![None; d],
            corner: word.to_vec(),
            face_of: vec![0; d],
            face_count: 1,
        }
    }

    /// Faces given as counterclockwise `(vertex, label)` lists; directed
    /// edges with a reverse partner are glued, the rest form the boundary.
    pub fn from_faces(faces: &[Vec<(usize, Label)>]) -> Result<Piece, MapError> {
        let mut index = HashMap::new();
        let mut next = Vec::new();
        let mut corner = Vec::new();
        let mut face_of = Vec::new();
        let mut ends = Vec::new();
        for (fi, face) in faces.iter().enumerate() {
            let base = next.len();
            let d = face.len();
            if d < 2 {
                return Err(MapError::DegenerateFace(fi));
            }
            for i in 0..d {
                let (u, l) = face[i];
                let v = face[(i + 1) % d].0;
                next.push(base + (i + 1) % d);
                corner.push(l);
                face_of.push(fi);
                if index.insert((u, v), base + i).is_some() {
                    return Err(MapError::DuplicateEdge(u, v));
                }
                ends.push((u, v));
            }
        }
        let twin = ends
            .iter()
            .map(|&(u, v)| index.get(&(v, u)).copied())
            .collect();
        Ok(Piece {
            next,
            twin,
            corner,
            face_of,
            face_count: faces.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.next.len()
    }

    pub fn is_empty(&self) -> bool {
        self.next.is_empty()
    }

    fn prev(&self, h: usize) -> usize {
        let mut p = h;
        while self.next[p] != h {
            p = self.next[p];
        }
        p
    }

    /// Orientation-reversed copy on the same ids.
    pub fn mirror(&self) -> Piece {
        let n = self.len();
        let mut prev = vec![0; n];
        for h in 0..n {
            prev[self.next[h]] = h;
        }
        Piece {
            next: prev,
            twin: self.twin.clone(),
            corner: (0..n).map(|h| self.corner[self.next[h]]).collect(),
            face_of: self.face_of.clone(),
            face_count: self.face_count,
        }
    }

    /// Half-edges without a twin.
    pub fn boundary(&self) -> Vec<usize> {
        (0..self.len()).filter(|&h| self.twin[h].is_none()).collect()
    }

    /// Boundary half-edges in cyclic order, starting from the smallest.
    /// The successor of `h` is the open half-edge ending the fan at the
    /// head of `h`.
    pub fn boundary_cycle(&self) -> Vec<usize> {
        let b = self.boundary();
        let Some(&start) = b.first() else {
            return Vec::new();
        };
        let mut out = vec![start];
        let mut h = start;
        loop {
            let mut k = self.next[h];
            while let Some(t) = self.twin[k] {
                k = self.next[t];
            }
            if k == start {
                break;
            }
            out.push(k);
            h = k;
        }
        out
    }

    /// The corner fans of the piece: closed cycles around interior
    /// vertices and open runs at boundary vertices.
    pub(crate) fn chains(&self) -> Vec<LocalChain> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            // Walk backwards to the start of the run.
            let mut start = s;
            let mut closed = false;
            while let Some(t) = self.twin[self.prev(start)] {
                if t == s {
                    closed = true;
                    break;
                }
                start = t;
            }
            let mut corners = vec![start];
            seen[start] = true;
            let mut h = start;
            while let Some(t) = self.twin[h] {
                let g = self.next[t];
                if g == start {
                    break;
                }
                corners.push(g);
                seen[g] = true;
                h = g;
            }
            out.push(LocalChain { corners, closed });
        }
        out
    }

    /// Breadth-first encoding from a root, invariant under id renaming;
    /// equal encodings mean the rooted pieces are identical.
    pub(crate) fn rooted_code(&self, root: usize) -> Vec<u32> {
        let n = self.len();
        let mut id = vec![u32::MAX; n];
        let mut order = vec![root];
        id[root] = 0;
        let mut out = Vec::with_capacity(3 * n);
        let mut i = 0;
        while i < order.len() {
            let h = order[i];
            let mut visit = |g: usize, order: &mut Vec<usize>| {
                if id[g] == u32::MAX {
                    id[g] = order.len() as u32;
                    order.push(g);
                }
                id[g]
            };
            let a = visit(self.next[h], &mut order);
            let b = match self.twin[h] {
                Some(t) => visit(t, &mut order),
                None => u32::MAX,
            };
            out.extend([a, b, self.corner[h].index() as u32]);
            i += 1;
        }
        out
    }

    /// Boundary roots of this piece and its mirror that give distinct
    /// placements, as `(mirrored, root)` pairs.
    pub fn distinct_roots(&self, allow_mirror: bool) -> Vec<(bool, usize)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let variants: Vec<(bool, Piece)> = if allow_mirror {
            vec![(false, self.clone()), (true, self.mirror())]
        } else {
            vec![(false, self.clone())]
        };
        for (m, p) in &variants {
            for r in p.boundary() {
                if seen.insert(p.rooted_code(r)) {
                    out.push((*m, r));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_tile_chains_are_open() {
        let w: Vec<Label> = "abcde".chars().map(|c| Label::from_letter(c).unwrap()).collect();
        let p = Piece::tile(&w);
        let ch = p.chains();
        assert_eq!(ch.len(), 5);
        assert!(ch.iter().all(|c| !c.closed && c.corners.len() == 1));
        assert_eq!(p.boundary_cycle().len(), 5);
    }

    #[test]
    fn symmetric_tile_has_one_root() {
        let a = Label::ALPHA;
        let p = Piece::tile(&[a, a, a, a]);
        assert_eq!(p.distinct_roots(true).len(), 1);
        let w: Vec<Label> = "aaaae".chars().map(|c| Label::from_letter(c).unwrap()).collect();
        assert_eq!(Piece::tile(&w).distinct_roots(true).len(), 5);
    }
}
