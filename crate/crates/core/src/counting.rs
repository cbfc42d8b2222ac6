//! Orbit counts for modification families: ± face assignments of the
//! Platonic solids up to rotation, and β placements on marked edges up to
//! the symmetry of the underlying tiling.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::constructors::{platonic, ConstructError};
use crate::label::Label;
use crate::map::{automorphism_group, MirrorPolicy, Tiling};

#[derive(Debug, Error)]
pub enum CountError {
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("rotation group is not closed under composition")]
    NotAGroup,
    #[error("rotation group has order {0}, expected 12, 24 or 60")]
    BadOrder(usize),
    #[error("{0} faces is too many for explicit enumeration")]
    TooManyFaces(usize),
    #[error("half-edge {0} is not a marked edge of a face")]
    BadEdge(usize),
    #[error("more than {0} valid assignments; giving up")]
    TooManyAssignments(usize),
}

/// Orientation-preserving symmetries of a Platonic solid, as face
/// permutations.
#[derive(Clone, Debug)]
pub struct RotationGroup {
    pub face_count: usize,
    pub perms: Vec<Vec<usize>>,
}

impl RotationGroup {
    /// Rotations read off the map automorphisms of the named solid, then
    /// checked to form a group.
    pub fn of_solid(name: &str) -> Result<RotationGroup, CountError> {
        let t = platonic(name)?;
        let face_of = t.face_of();
        let faces = t.faces();
        let group = automorphism_group(&t, MirrorPolicy::Oriented);
        let perms: BTreeSet<Vec<usize>> = group
            .elements
            .iter()
            .map(|a| faces.iter().map(|f| face_of[a.perm[f[0]]]).collect())
            .collect();
        let g = RotationGroup {
            face_count: faces.len(),
            perms: perms.into_iter().collect(),
        };
        g.check()?;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    /// Identity present, closed under composition, order of a rotation group.
    pub fn check(&self) -> Result<(), CountError> {
        let set: HashSet<&Vec<usize>> = self.perms.iter().collect();
        let id: Vec<usize> = (0..self.face_count).collect();
        if !set.contains(&id) {
            return Err(CountError::NotAGroup);
        }
        for a in &self.perms {
            for b in &self.perms {
                let c: Vec<usize> = a.iter().map(|&x| b[x]).collect();
                if !set.contains(&c) {
                    return Err(CountError::NotAGroup);
                }
            }
        }
        match self.order() {
            12 | 24 | 60 => Ok(()),
            n => Err(CountError::BadOrder(n)),
        }
    }

    pub fn cycle_count(perm: &[usize]) -> usize {
        let mut seen = vec![false; perm.len()];
        let mut cycles = 0;
        for s in 0..perm.len() {
            if !seen[s] {
                cycles += 1;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = perm[x];
                }
            }
        }
        cycles
    }
}

/// Two-colourings of the faces up to rotation, by Burnside's lemma.
pub fn burnside_face_signs(solid: &str) -> Result<u64, CountError> {
    let g = RotationGroup::of_solid(solid)?;
    let total: u64 = g.perms.iter().map(|p| 1u64 << RotationGroup::cycle_count(p)).sum();
    Ok(total / g.order() as u64)
}

/// Bit-mask image tables: the image of a mask is the union of one table
/// entry per byte.
fn byte_tables(perm: &[usize]) -> Vec<[u32; 256]> {
    let bytes = perm.len().div_ceil(8);
    (0..bytes)
        .map(|k| {
            let mut table = [0u32; 256];
            for (b, entry) in table.iter_mut().enumerate() {
                for bit in 0..8 {
                    let i = 8 * k + bit;
                    if b >> bit & 1 == 1 && i < perm.len() {
                        *entry |= 1 << perm[i];
                    }
                }
            }
            table
        })
        .collect()
}

fn image(tables: &[[u32; 256]], mask: u32) -> u32 {
    tables
        .iter()
        .enumerate()
        .fold(0, |acc, (k, t)| acc | t[(mask >> (8 * k) & 0xff) as usize])
}

/// Orbits of face sign assignments satisfying `keep`, counted by listing
/// every assignment and keeping the least member of each orbit. Bit `i`
/// of the mask is set when face `i` is `+`; `keep` should be invariant
/// under rotation.
pub fn direct_orbit_count(solid: &str, keep: impl Fn(u32) -> bool + Sync) -> Result<u64, CountError> {
    let g = RotationGroup::of_solid(solid)?;
    let n = g.face_count;
    if n > 24 {
        return Err(CountError::TooManyFaces(n));
    }
    let tables: Vec<Vec<[u32; 256]>> = g.perms.iter().map(|p| byte_tables(p)).collect();
    let high = n.saturating_sub(12);
    let count = (0u32..1 << high)
        .into_par_iter()
        .map(|prefix| {
            let low = n - high;
            let mut c = 0u64;
            for rest in 0u32..1 << low {
                let mask = prefix << low | rest;
                if keep(mask) && tables.iter().all(|t| image(t, mask) >= mask) {
                    c += 1;
                }
            }
            c
        })
        .sum();
    Ok(count)
}

/// For each face, the half-edge opposite its corner labeled `apex`: the
/// edge `next(next(h))` where `h` carries `apex`. Faces without the label
/// are skipped.
pub fn opposite_edges(t: &Tiling, apex: Label) -> Vec<usize> {
    t.faces()
        .iter()
        .filter_map(|f| f.iter().find(|&&h| t.corner(h) == apex))
        .map(|&h| t.next(t.next(h)))
        .collect()
}

/// Result of [`count_beta_assignments`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaCount {
    /// Valid assignments on the fixed skeleton.
    pub raw: usize,
    /// Assignments up to the skeleton's symmetry.
    pub classes: usize,
    pub group_order: usize,
    pub policy: MirrorPolicy,
}

/// Puts `β` at one end of every marked edge (and `α` at the other) so
/// that no vertex carries two `β`, and counts the results, both on the
/// fixed skeleton and up to the symmetries of the skeleton that permute
/// the marked edges. A marked edge is a half-edge `h`; its ends are the
/// corners `h` and `next(h)` of its face. `β` corners outside the marked
/// edges count toward the limit. Gives up beyond `max_raw` assignments.
pub fn count_beta_assignments(
    t: &Tiling,
    marked: &[usize],
    policy: MirrorPolicy,
    max_raw: usize,
) -> Result<BetaCount, CountError> {
    let n = t.half_edge_count();
    let m = marked.len();
    if m > 64 {
        return Err(CountError::TooManyAssignments(max_raw));
    }
    let mut slot_edge = vec![usize::MAX; n];
    for (i, &h) in marked.iter().enumerate() {
        if h >= n {
            return Err(CountError::BadEdge(h));
        }
        for s in [h, t.next(h)] {
            if slot_edge[s] != usize::MAX {
                return Err(CountError::BadEdge(h));
            }
            slot_edge[s] = i;
        }
    }
    // Skeleton: every marked end reads α.
    let mut corner = t.corners().to_vec();
    for &h in marked {
        corner[h] = Label::ALPHA;
        corner[t.next(h)] = Label::ALPHA;
    }
    let skeleton = t.with_corners(corner.clone());
    let mut fixed_beta = vec![0u8; t.vertex_count()];
    for h in 0..n {
        if slot_edge[h] == usize::MAX && corner[h] == Label::BETA {
            fixed_beta[t.vertex_of(h)] += 1;
        }
    }

    // Depth-first over the marked edges; bit i set means β sits at next(h).
    let mut found: Vec<u64> = Vec::new();
    let mut used = fixed_beta;
    fn go(
        i: usize,
        mask: u64,
        t: &Tiling,
        marked: &[usize],
        used: &mut [u8],
        found: &mut Vec<u64>,
        max_raw: usize,
    ) -> bool {
        if i == marked.len() {
            found.push(mask);
            return found.len() <= max_raw;
        }
        let h = marked[i];
        for (bit, s) in [(0u64, h), (1u64, t.next(h))] {
            let v = t.vertex_of(s);
            if used[v] == 0 {
                used[v] = 1;
                let ok = go(i + 1, mask | bit << i, t, marked, used, found, max_raw);
                used[v] = 0;
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    if !go(0, 0, t, marked, &mut used, &mut found, max_raw) {
        return Err(CountError::TooManyAssignments(max_raw));
    }

    // Each symmetry sends the corner slot h to slot s(h); it must carry
    // marked edges to marked edges.
    let group = automorphism_group(&skeleton, policy);
    let mut actions: Vec<Vec<(usize, bool)>> = Vec::new();
    for a in &group.elements {
        let slot = |h: usize| if a.reversing { t.next(a.perm[h]) } else { a.perm[h] };
        let mut act = Vec::with_capacity(m);
        for &h in marked {
            let (s0, s1) = (slot(h), slot(t.next(h)));
            let j = slot_edge[s0];
            if j == usize::MAX || slot_edge[s1] != j {
                break;
            }
            // Which end of edge j the origin end of h lands on.
            act.push((j, s0 != marked[j]));
        }
        if act.len() == m {
            actions.push(act);
        }
    }
    let apply = |act: &[(usize, bool)], mask: u64| {
        act.iter().enumerate().fold(0u64, |acc, (i, &(j, flip))| {
            let at_next = (mask >> i & 1 == 1) != flip;
            acc | (at_next as u64) << j
        })
    };
    let classes = found
        .par_iter()
        .filter(|&&mask| actions.iter().all(|a| apply(a, mask) >= mask))
        .count();
    Ok(BetaCount {
        raw: found.len(),
        classes,
        group_order: actions.len(),
        policy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_group_orders() {
        for (s, o) in [("tetrahedron", 12), ("cube", 24), ("octahedron", 24), ("dodecahedron", 60)] {
            assert_eq!(RotationGroup::of_solid(s).unwrap().order(), o, "{s}");
        }
    }

    #[test]
    fn small_burnside_counts() {
        assert_eq!(burnside_face_signs("cube").unwrap(), 10);
        assert_eq!(burnside_face_signs("octahedron").unwrap(), 23);
        assert_eq!(burnside_face_signs("tetrahedron").unwrap(), 5);
        assert_eq!(direct_orbit_count("cube", |_| true).unwrap(), 10);
        assert_eq!(direct_orbit_count("cube", |m| m == 0b111111).unwrap(), 1);
    }

    #[test]
    fn broken_group_is_rejected() {
        let g = RotationGroup {
            face_count: 3,
            perms: vec![vec![0, 1, 2], vec![1, 2, 0]],
        };
        assert!(matches!(g.check(), Err(CountError::NotAGroup)));
    }
}
