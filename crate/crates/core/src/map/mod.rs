//! Half-edge combinatorial maps of the sphere with labeled corners.
//!
//! Conventions: half-edge ids are dense `0..2E`, `next` walks each face
//! counterclockwise, `corner[h]` is the label of `face(h)` at the origin of
//! `h`, and the vertex rotation is `σ(h) = next(twin(h))`.

mod canon;

pub use canon::{
    automorphism_group, canonical_code, canonical_form, is_automorphism, isomorphic, Automorphism, AutomorphismGroup, CanonicalCode,
    MirrorPolicy,
};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::label::{Label, LabelMultiset};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("array length mismatch: {0}")]
    Length(String),
    #[error("half-edge id {0} out of range")]
    OutOfRange(usize),
    #[error("`next` is not a permutation")]
    NextNotPermutation,
    #[error("twin is not a fixed-point free involution at half-edge {0}")]
    BadTwin(usize),
    #[error("directed edge {0}->{1} appears twice")]
    DuplicateEdge(usize, usize),
    #[error("directed edge {0}->{1} has no reverse edge")]
    UnmatchedEdge(usize, usize),
    #[error("face {0} has fewer than two corners")]
    DegenerateFace(usize),
    #[error("invalid tiling: {0}")]
    Invalid(ValidationReport),
}

/// A closed map with a label on every corner.
#[derive(Clone, PartialEq, Eq)]
pub struct Tiling {
    twin: Vec<usize>,
    next: Vec<usize>,
    corner: Vec<Label>,
    vertex_of: Vec<usize>,
}

impl fmt::Debug for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Tiling(V={}, E={}, F={})",
            self.vertex_count(),
            self.edge_count(),
            self.face_count()
        )
    }
}

impl Tiling {
    /// Builds a map from its permutations. Structural checks only; use
    /// [`validate`] for the sphere invariants.
    pub fn from_permutations(
        twin: Vec<usize>,
        next: Vec<usize>,
        corner: Vec<Label>,
    ) -> Result<Tiling, MapError> {
        let n = twin.len();
        if next.len() != n || corner.len() != n {
            return Err(MapError::Length(format!(
                "twin {}, next {}, corner {}",
                n,
                next.len(),
                corner.len()
            )));
        }
        for h in 0..n {
            let t = twin[h];
            if t >= n {
                return Err(MapError::OutOfRange(t));
            }
            if t == h || twin[t] != h {
                return Err(MapError::BadTwin(h));
            }
        }
        let mut seen = vec![false; n];
        for &x in &next {
            if x >= n || seen[x] {
                return Err(MapError::NextNotPermutation);
            }
            seen[x] = true;
        }
        let vertex_of = vertex_orbits(&twin, &next);
        Ok(Tiling {
            twin,
            next,
            corner,
            vertex_of,
        })
    }

    /// Builds a map from counterclockwise face boundaries given as
    /// `(vertex name, corner label)` lists. Faces are glued along directed
    /// edges `u->v` / `v->u`.
    pub fn from_faces(faces: &[Vec<(usize, Label)>]) -> Result<Tiling, MapError> {
        let mut twin_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::new();
        let mut corner = Vec::new();
        let mut ends = Vec::new();
        for (fi, face) in faces.iter().enumerate() {
            if face.len() < 2 {
                return Err(MapError::DegenerateFace(fi));
            }
            let base = next.len();
            let d = face.len();
            for i in 0..d {
                let (u, l) = face[i];
                let v = face[(i + 1) % d].0;
                next.push(base + (i + 1) % d);
                corner.push(l);
                if twin_index.insert((u, v), base + i).is_some() {
                    return Err(MapError::DuplicateEdge(u, v));
                }
                ends.push((u, v));
            }
        }
        let mut twin = vec![0; next.len()];
        for (h, &(u, v)) in ends.iter().enumerate() {
            match twin_index.get(&(v, u)) {
                Some(&t) => twin[h] = t,
                None => return Err(MapError::UnmatchedEdge(u, v)),
            }
        }
        Tiling::from_permutations(twin, next, corner)
    }

    pub fn half_edge_count(&self) -> usize {
        self.twin.len()
    }

    pub fn edge_count(&self) -> usize {
        self.twin.len() / 2
    }

    pub fn twin(&self, h: usize) -> usize {
        self.twin[h]
    }

    pub fn next(&self, h: usize) -> usize {
        self.next[h]
    }

    pub fn corner(&self, h: usize) -> Label {
        self.corner[h]
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn twins(&self) -> &[usize] {
        &self.twin
    }

    pub fn nexts(&self) -> &[usize] {
        &self.next
    }

    pub fn corners(&self) -> &[Label] {
        &self.corner
    }

    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertex_of
    }

    /// Rotation around the origin vertex.
    pub fn sigma(&self, h: usize) -> usize {
        self.next[self.twin[h]]
    }

    pub fn prev(&self, h: usize) -> usize {
        let mut p = h;
        while self.next[p] != h {
            p = self.next[p];
        }
        p
    }

    pub fn prev_table(&self) -> Vec<usize> {
        let mut prev = vec![0; self.next.len()];
        for (h, &n) in self.next.iter().enumerate() {
            prev[n] = h;
        }
        prev
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_of.iter().max().map_or(0, |&m| m + 1)
    }

    /// Face boundaries as half-edge cycles, ordered by smallest member.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        orbits(self.next.len(), |h| self.next[h])
    }

    /// Face index of each half-edge, consistent with [`Tiling::faces`].
    pub fn face_of(&self) -> Vec<usize> {
        let mut face_of = vec![0; self.next.len()];
        for (i, f) in self.faces().iter().enumerate() {
            for &h in f {
                face_of[h] = i;
            }
        }
        face_of
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }

    /// Vertex stars as σ-cycles, indexed by vertex id.
    pub fn vertices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertex_count()];
        for (v, star) in orbits(self.next.len(), |h| self.sigma(h))
            .into_iter()
            .enumerate()
        {
            debug_assert!(star.iter().all(|&h| self.vertex_of[h] == v));
            out[v] = star;
        }
        out
    }

    /// Label multiset at every vertex, indexed by vertex id.
    pub fn vertex_labels(&self) -> Vec<LabelMultiset> {
        let mut out = vec![LabelMultiset::new(); self.vertex_count()];
        for h in 0..self.corner.len() {
            out[self.vertex_of[h]].insert(self.corner[h]);
        }
        out
    }

    /// Label word of each face, read counterclockwise from its smallest half-edge.
    pub fn face_words(&self) -> Vec<Vec<Label>> {
        self.faces()
            .iter()
            .map(|f| f.iter().map(|&h| self.corner[h]).collect())
            .collect()
    }

    /// Same map with every corner relabeled through `f`.
    pub fn map_labels(&self, f: impl Fn(Label) -> Label) -> Tiling {
        let mut t = self.clone();
        for l in t.corner.iter_mut() {
            *l = f(*l);
        }
        t
    }

    /// Same map with the given corner labels.
    pub fn with_corners(&self, corner: Vec<Label>) -> Tiling {
        assert_eq!(corner.len(), self.corner.len());
        Tiling {
            corner,
            ..self.clone()
        }
    }

    /// The underlying map with every corner set to α.
    pub fn unlabeled(&self) -> Tiling {
        self.map_labels(|_| Label::ALPHA)
    }

    /// Renames half-edge `h` to `perm[h]`.
    pub fn relabel_ids(&self, perm: &[usize]) -> Tiling {
        let n = self.next.len();
        assert_eq!(perm.len(), n);
        let mut twin = vec![0; n];
        let mut next = vec![0; n];
        let mut corner = vec![Label::ALPHA; n];
        for h in 0..n {
            twin[perm[h]] = perm[self.twin[h]];
            next[perm[h]] = perm[self.next[h]];
            corner[perm[h]] = self.corner[h];
        }
        Tiling::from_permutations(twin, next, corner).expect("relabeling preserves structure")
    }

    /// Orientation-reversed map on the same half-edge ids: each half-edge is
    /// traversed backwards, so `next' = prev` and the corner moves to the
    /// new origin.
    pub fn mirror(&self) -> Tiling {
        let prev = self.prev_table();
        let corner = (0..self.next.len())
            .map(|h| self.corner[self.next[h]])
            .collect();
        Tiling::from_permutations(self.twin.clone(), prev, corner).expect("mirror is a map")
    }

    /// Vertex census: label multiset → number of vertices carrying it.
    pub fn census(&self) -> VertexCensus {
        let mut entries = BTreeMap::new();
        for m in self.vertex_labels() {
            *entries.entry(m).or_insert(0) += 1;
        }
        VertexCensus { entries }
    }
}

/// Multiset of vertex label multisets.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VertexCensus {
    pub entries: BTreeMap<LabelMultiset, usize>,
}

impl VertexCensus {
    pub fn vertex_count(&self) -> usize {
        self.entries.values().sum()
    }

    /// Σ count·degree, which equals twice the number of edges.
    pub fn degree_sum(&self) -> usize {
        self.entries.iter().map(|(m, c)| m.len() * c).sum()
    }

    pub fn get(&self, m: &LabelMultiset) -> usize {
        self.entries.get(m).copied().unwrap_or(0)
    }
}

impl fmt::Display for VertexCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .rev()
            .map(|(m, c)| format!("{c}{m}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn orbits(n: usize, step: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            cycle.push(h);
            h = step(h);
        }
        out.push(cycle);
    }
    out
}

fn vertex_orbits(twin: &[usize], next: &[usize]) -> Vec<usize> {
    let mut vertex_of = vec![usize::MAX; twin.len()];
    for (v, orbit) in orbits(twin.len(), |h| next[twin[h]])
        .into_iter()
        .enumerate()
    {
        for h in orbit {
            vertex_of[h] = v;
        }
    }
    vertex_of
}

/// One violated invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Length { what: &'static str, len: usize, expected: usize },
    OutOfRange { what: &'static str, at: usize, value: usize },
    TwinNotInvolutive(usize),
    TwinFixedPoint(usize),
    NextNotPermutation,
    FaceDegree { face_start: usize, degree: usize, expected: usize },
    VertexLabelMismatch(usize),
    Euler { v: usize, e: usize, f: usize },
    Disconnected { components: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Length { what, len, expected } => {
                write!(f, "{what} has length {len}, expected {expected}")
            }
            Violation::OutOfRange { what, at, value } => {
                write!(f, "{what}[{at}] = {value} out of range")
            }
            Violation::TwinNotInvolutive(h) => write!(f, "twin not involutive at {h}"),
            Violation::TwinFixedPoint(h) => write!(f, "twin fixed point at {h}"),
            Violation::NextNotPermutation => write!(f, "next is not a permutation"),
            Violation::FaceDegree {
                face_start,
                degree,
                expected,
            } => write!(
                f,
                "face of degree {degree} at half-edge {face_start}, expected {expected}"
            ),
            Violation::VertexLabelMismatch(h) => {
                write!(f, "vertex_of not constant on the vertex orbit of {h}")
            }
            Violation::Euler { v, e, f: faces } => write!(
                f,
                "Euler characteristic {} != 2 (V={v}, E={e}, F={faces})",
                *v as isize - *e as isize + *faces as isize
            ),
            Violation::Disconnected { components } => {
                write!(f, "map has {components} components")
            }
        }
    }
}

/// All invariant violations found in a map; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks raw arrays against the sphere-map invariants. Never panics on
/// malformed input.
pub fn validate_arrays(
    twin: &[usize],
    next: &[usize],
    vertex_of: Option<&[usize]>,
    face_degree: Option<usize>,
) -> ValidationReport {
    let n = twin.len();
    let mut violations = Vec::new();
    if next.len() != n {
        violations.push(Violation::Length {
            what: "next",
            len: next.len(),
            expected: n,
        });
        return ValidationReport { violations };
    }
    let mut structural_ok = true;
    for (h, &t) in twin.iter().enumerate() {
        if t >= n {
            violations.push(Violation::OutOfRange {
                what: "twin",
                at: h,
                value: t,
            });
            structural_ok = false;
        } else if t == h {
            violations.push(Violation::TwinFixedPoint(h));
            structural_ok = false;
        } else if twin[t] != h {
            violations.push(Violation::TwinNotInvolutive(h));
            structural_ok = false;
        }
    }
    let mut seen = vec![false; n];
    let mut perm_ok = true;
    for (h, &x) in next.iter().enumerate() {
        if x >= n {
            violations.push(Violation::OutOfRange {
                what: "next",
                at: h,
                value: x,
            });
            perm_ok = false;
        } else if seen[x] {
            perm_ok = false;
        } else {
            seen[x] = true;
        }
    }
    if !perm_ok {
        violations.push(Violation::NextNotPermutation);
        structural_ok = false;
    }
    if !structural_ok {
        return ValidationReport { violations };
    }
    let faces = orbits(n, |h| next[h]);
    if let Some(d) = face_degree {
        for f in &faces {
            if f.len() != d {
                violations.push(Violation::FaceDegree {
                    face_start: f[0],
                    degree: f.len(),
                    expected: d,
                });
            }
        }
    }
    let computed = vertex_orbits(twin, next);
    if let Some(given) = vertex_of {
        if given.len() != n {
            violations.push(Violation::Length {
                what: "vertex_of",
                len: given.len(),
                expected: n,
            });
        } else {
            for h in 0..n {
                let s = next[twin[h]];
                if given[s] != given[h] {
                    violations.push(Violation::VertexLabelMismatch(h));
                    break;
                }
            }
        }
    }
    let v = computed.iter().max().map_or(0, |&m| m + 1);
    let e = n / 2;
    let f = faces.len();
    if v + f != e + 2 {
        violations.push(Violation::Euler { v, e, f });
    }
    let components = count_components(twin, next);
    if components != 1 {
        violations.push(Violation::Disconnected { components });
    }
    ValidationReport { violations }
}

fn count_components(twin: &[usize], next: &[usize]) -> usize {
    let n = twin.len();
    let mut seen = vec![false; n];
    let mut components = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        stack.push(s);
        while let Some(h) = stack.pop() {
            for g in [twin[h], next[h]] {
                if !seen[g] {
                    seen[g] = true;
                    stack.push(g);
                }
            }
        }
    }
    components
}

/// Validates a tiling as a closed sphere map, optionally with a uniform
/// face degree.
pub fn validate(t: &Tiling, face_degree: Option<usize>) -> ValidationReport {
    validate_arrays(&t.twin, &t.next, Some(&t.vertex_of), face_degree)
}

/// Returns the vertex census of a valid tiling.
pub fn vertex_census(t: &Tiling) -> Result<VertexCensus, MapError> {
    let report = validate(t, None);
    if !report.is_valid() {
        return Err(MapError::Invalid(report));
    }
    Ok(t.census())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> Tiling {
        let a = Label::ALPHA;
        let faces = vec![
            vec![(0, a), (1, a), (2, a)],
            vec![(0, a), (3, a), (1, a)],
            vec![(1, a), (3, a), (2, a)],
            vec![(0, a), (2, a), (3, a)],
        ];
        Tiling::from_faces(&faces).unwrap()
    }

    #[test]
    fn tetrahedron_is_valid() {
        let t = tetrahedron();
        assert!(validate(&t, Some(3)).is_valid());
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(t.edge_count(), 6);
        assert_eq!(t.face_count(), 4);
    }

    #[test]
    fn wrong_degree_is_reported() {
        let t = tetrahedron();
        let r = validate(&t, Some(5));
        assert_eq!(r.violations.len(), 4);
    }

    #[test]
    fn broken_twin_is_reported() {
        let t = tetrahedron();
        let mut twin = t.twins().to_vec();
        twin.swap(0, 1);
        let r = validate_arrays(&twin, t.nexts(), None, Some(3));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::TwinNotInvolutive(_))));
    }

    #[test]
    fn mirror_twice_is_identity_up_to_ids() {
        let t = tetrahedron();
        let m = t.mirror().mirror();
        assert!(validate(&m, Some(3)).is_valid());
        assert_eq!(m.census(), t.census());
    }
}
