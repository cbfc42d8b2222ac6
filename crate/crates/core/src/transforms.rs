//! Label reductions and splittings between AVCs and tilings, and
//! orientation flips of vertex neighbourhoods.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::avc::{Arrangement, Avc, AvcError};
use crate::constructors::{disk_boundary, labelings};
use crate::label::{Label, LabelMultiset, ALPHABET_SIZE};
use crate::enumerator::verify_tiling;
use crate::map::{canonical_code, validate, CanonicalCode, MapError, MirrorPolicy, Tiling};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("unknown label map `{0}`")]
    UnknownMap(String),
    #[error("malformed label map `{0}`: expected SOURCE>TARGET letters")]
    BadMapSyntax(String),
    #[error("label map is not defined on {0}")]
    Undefined(Label),
    #[error("reduced AVC is inconsistent: {0}")]
    Avc(#[from] AvcError),
    #[error("arrangement {arrangement} reduces to {reduced}, but the tiles read {tile}")]
    ArrangementMismatch {
        arrangement: String,
        reduced: String,
        tile: String,
    },
    #[error("target AVC tile {avc} differs from arrangement {arrangement}")]
    TargetMismatch { avc: String, arrangement: String },
    #[error("vertex {0} does not exist")]
    NoVertex(usize),
    #[error("neighbourhood of vertex {0} is not a disk")]
    NotADisk(usize),
    #[error("neighbourhood of vertex {0} has no census-preserving flip")]
    NotFlippable(usize),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Reductions as `(name, source letters, target letters)`: label
/// `source[i]` becomes `target[i]`.
const NAMED_MAPS: &[(&str, &str, &str)] = &[
    ("4A1", "abcde", "baacd"),
    ("4A2", "abcde", "abacd"),
    ("4A3", "abcde", "aabcd"),
    ("4D1", "abcde", "acbad"),
    ("4D2", "abcde", "bacad"),
    ("4D3", "abcde", "bcaad"),
    ("4E1", "abcde", "abcda"),
    ("4E2", "abcde", "bacda"),
    ("4E3", "abcde", "bcada"),
    ("3A", "abcde", "aaabc"),
    ("3B1", "abcde", "baaac"),
    ("3B2", "abcde", "abaac"),
    ("3B3", "abcde", "aabac"),
    ("3C1", "abcde", "baaca"),
    ("3C2", "abcde", "abaca"),
    ("3C3", "abcde", "aabca"),
    ("3D1", "abcde", "baabc"),
    ("3D2", "abcde", "ababc"),
    ("3D3", "abcde", "aabbc"),
    ("3E1", "abcde", "baacb"),
    ("3E2", "abcde", "abacb"),
    ("3E3", "abcde", "aabcb"),
    ("2D", "abcde", "aaaab"),
    ("3A->2D", "abc", "aab"),
    ("3B->2D", "abc", "aab"),
    ("3D->2D", "abc", "aab"),
    ("4A->3A", "abcd", "aabc"),
    ("4D->3D", "abcd", "baac"),
    ("4E->3E", "abcd", "baac"),
    // The 36-tile chain keeps δ and ε as they are.
    ("5A36->4A36", "abcde", "abade"),
    ("5A36->3A36", "abcde", "aaade"),
    ("4A36->3A36", "abde", "aade"),
    ("3A36->2D36", "ade", "aae"),
];

/// Names of the built-in label maps.
pub fn named_maps() -> impl Iterator<Item = &'static str> {
    NAMED_MAPS.iter().map(|(n, _, _)| *n)
}

/// A relabeling of corners, defined on a subset of the alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabelMap {
    pub name: Option<String>,
    table: [Option<Label>; ALPHABET_SIZE],
}

impl LabelMap {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, Label)>) -> LabelMap {
        let mut table = [None; ALPHABET_SIZE];
        for (s, t) in pairs {
            table[s.index()] = Some(t);
        }
        LabelMap { name: None, table }
    }

    /// Maps `source[i]` to `target[i]`, both given as letters.
    pub fn from_letters(source: &str, target: &str) -> Result<LabelMap, TransformError> {
        let bad = || TransformError::BadMapSyntax(format!("{source}>{target}"));
        let s: Vec<Label> = source.chars().map(Label::from_letter).collect::<Option<_>>().ok_or_else(bad)?;
        let t: Vec<Label> = target.chars().map(Label::from_letter).collect::<Option<_>>().ok_or_else(bad)?;
        if s.len() != t.len() || s.iter().collect::<BTreeSet<_>>().len() != s.len() {
            return Err(bad());
        }
        Ok(LabelMap::from_pairs(s.into_iter().zip(t)))
    }

    /// A built-in map by name, e.g. `3B2` or `4A->3A`.
    pub fn named(name: &str) -> Result<LabelMap, TransformError> {
        let &(n, s, t) = NAMED_MAPS
            .iter()
            .find(|(n, _, _)| n.eq_ignore_ascii_case(name))
            .ok_or_else(|| TransformError::UnknownMap(name.to_string()))?;
        let mut m = LabelMap::from_letters(s, t)?;
        m.name = Some(n.to_string());
        Ok(m)
    }

    pub fn identity(labels: impl IntoIterator<Item = Label>) -> LabelMap {
        LabelMap::from_pairs(labels.into_iter().map(|l| (l, l)))
    }

    pub fn get(&self, l: Label) -> Option<Label> {
        self.table[l.index()]
    }

    pub fn apply(&self, l: Label) -> Result<Label, TransformError> {
        self.get(l).ok_or(TransformError::Undefined(l))
    }

    pub fn domain(&self) -> BTreeSet<Label> {
        Label::all().filter(|&l| self.get(l).is_some()).collect()
    }

    /// The labels hit by the map.
    pub fn image(&self) -> BTreeSet<Label> {
        self.table.iter().flatten().copied().collect()
    }

    pub fn apply_word(&self, w: &[Label]) -> Result<Vec<Label>, TransformError> {
        w.iter().map(|&l| self.apply(l)).collect()
    }

    pub fn apply_multiset(&self, m: &LabelMultiset) -> Result<LabelMultiset, TransformError> {
        m.iter().map(|l| self.apply(l)).collect()
    }

    /// `self` followed by `other`, on the domain of `self`.
    pub fn then(&self, other: &LabelMap) -> Result<LabelMap, TransformError> {
        let mut table = [None; ALPHABET_SIZE];
        for l in self.domain() {
            table[l.index()] = Some(other.apply(self.apply(l)?)?);
        }
        Ok(LabelMap { name: None, table })
    }

    /// Same action on every label of `labels`.
    pub fn agrees_on(&self, other: &LabelMap, labels: &BTreeSet<Label>) -> bool {
        labels.iter().all(|&l| self.get(l) == other.get(l))
    }
}

impl fmt::Display for LabelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, t): (String, String) = self
            .domain()
            .into_iter()
            .map(|l| (l.letter(), self.table[l.index()].map_or('?', |x| x.letter())))
            .unzip();
        match &self.name {
            Some(n) => write!(f, "{n} ({s}>{t})"),
            None => write!(f, "{s}>{t}"),
        }
    }
}

impl fmt::Debug for LabelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelMap({self})")
    }
}

impl FromStr for LabelMap {
    type Err = TransformError;

    /// A built-in name, or explicit `SOURCE>TARGET` letters.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('>') {
            Some((a, b)) if !a.ends_with('-') => LabelMap::from_letters(a.trim(), b.trim()),
            _ => LabelMap::named(s.trim()),
        }
    }
}

/// Relabels every corner; the map structure is untouched.
pub fn reduce_tiling(t: &Tiling, m: &LabelMap) -> Result<Tiling, TransformError> {
    let corners = m.apply_word(t.corners())?;
    Ok(t.with_corners(corners))
}

/// Relabels the tile and every vertex type, adding the counts of vertex
/// types that merge.
pub fn reduce_avc(a: &Avc, m: &LabelMap) -> Result<Avc, TransformError> {
    let tile = m.apply_word(&a.tile)?;
    let mut merged: BTreeMap<LabelMultiset, usize> = BTreeMap::new();
    for (v, c) in &a.vertices {
        *merged.entry(m.apply_multiset(v)?).or_default() += c;
    }
    Ok(Avc::new(a.tile_count, tile, merged.into_iter().collect())?)
}

/// Every relabeling of `t` in which each tile realizes `target`, reducing
/// back to `t` under `m`, and realizing the vertex census of `target_avc`.
/// Results are distinct up to orientation-preserving isomorphism.
pub fn split_tilings(
    t: &Tiling,
    target: &Arrangement,
    m: &LabelMap,
    target_avc: &Avc,
) -> Result<Vec<Tiling>, TransformError> {
    let reduced = Arrangement::from_word(&m.apply_word(target.cycle())?);
    let faces = t.faces();
    let words = t.face_words();
    for w in &words {
        if !reduced.accepts(w) {
            return Err(TransformError::ArrangementMismatch {
                arrangement: target.letters(),
                reduced: reduced.letters(),
                tile: w.iter().map(|l| l.letter()).collect(),
            });
        }
    }
    if target.multiset() != target_avc.tile_multiset() {
        return Err(TransformError::TargetMismatch {
            avc: target_avc.tile_multiset().to_letters(),
            arrangement: target.letters(),
        });
    }
    let placements = target.placements();
    let mut candidates = Vec::with_capacity(faces.len());
    for w in &words {
        let mut c = Vec::new();
        for p in &placements {
            if m.apply_word(p)? == *w {
                c.push(p.clone());
            }
        }
        candidates.push(c);
    }
    let mut seen = BTreeSet::new();
    Ok(labelings(t, &candidates, &target_avc.vertices, usize::MAX)
        .into_iter()
        .filter(|s| seen.insert(canonical_code(s, MirrorPolicy::Oriented)))
        .collect())
}

/// The tiles around one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighborhood {
    pub vertex: usize,
    pub faces: BTreeSet<usize>,
}

impl Neighborhood {
    /// All tiles incident to vertex `v`.
    pub fn star(t: &Tiling, v: usize) -> Result<Neighborhood, TransformError> {
        if v >= t.vertex_count() {
            return Err(TransformError::NoVertex(v));
        }
        let face_of = t.face_of();
        let faces = (0..t.half_edge_count())
            .filter(|&h| t.vertex_of(h) == v)
            .map(|h| face_of[h])
            .collect();
        Ok(Neighborhood { vertex: v, faces })
    }
}

/// Cuts the neighbourhood out, reflects it and glues it back so that the
/// vertex census is unchanged. Among the admissible reflections the one
/// with the smallest boundary offset is used.
pub fn reorient_neighborhood(t: &Tiling, n: &Neighborhood) -> Result<Tiling, TransformError> {
    let face_of = t.face_of();
    let inside: Vec<bool> = (0..t.face_count()).map(|f| n.faces.contains(&f)).collect();
    let boundary = disk_boundary(t, &inside, &face_of).ok_or(TransformError::NotADisk(n.vertex))?;
    let l = boundary.len();
    let prev = t.prev_table();
    let mut next = t.nexts().to_vec();
    let mut corner = t.corners().to_vec();
    for h in 0..t.half_edge_count() {
        if inside[face_of[h]] {
            next[h] = prev[h];
            corner[h] = t.corner(t.next(h));
        }
    }
    let census = t.census();
    let degree = t.faces().first().map(|f| f.len());
    for c in 0..l {
        let mut twin = t.twins().to_vec();
        for (i, &b) in boundary.iter().enumerate() {
            let o = t.twin(boundary[(c + l - i) % l]);
            twin[b] = o;
            twin[o] = b;
        }
        let Ok(r) = Tiling::from_permutations(twin, next.clone(), corner.clone()) else {
            continue;
        };
        if validate(&r, degree).is_valid() && r.census() == census {
            return Ok(r);
        }
    }
    Err(TransformError::NotFlippable(n.vertex))
}

/// Permutations of the AVC's labels that map the AVC to itself.
pub fn avc_symmetries(avc: &Avc) -> Vec<LabelMap> {
    let labels: Vec<Label> = avc.alphabet().into_iter().collect();
    let key = |a: &Avc| {
        let v: BTreeMap<LabelMultiset, usize> = a.vertices.iter().cloned().collect();
        (a.tile_count, a.tile.clone(), v)
    };
    let target = key(avc);
    let mut out = Vec::new();
    let mut perm = labels.clone();
    permutations(&mut perm, 0, &mut |p| {
        let m = LabelMap::from_pairs(labels.iter().copied().zip(p.iter().copied()));
        if reduce_avc(avc, &m).is_ok_and(|r| key(&r) == target) {
            out.push(m);
        }
    });
    out
}

fn permutations(v: &mut Vec<Label>, k: usize, visit: &mut impl FnMut(&[Label])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, visit);
        v.swap(k, i);
    }
}

/// Canonical codes of the classes left after identifying tilings that
/// differ by one of `relabelings`; each class is keyed by its least code.
pub fn relabeling_classes(tilings: &[Tiling], relabelings: &[LabelMap], policy: MirrorPolicy) -> BTreeSet<CanonicalCode> {
    tilings
        .iter()
        .filter_map(|t| {
            relabelings
                .iter()
                .filter_map(|m| reduce_tiling(t, m).ok())
                .map(|r| canonical_code(&r, policy))
                .min()
        })
        .collect()
}

/// Tilings reached by exchanging the labels `a` and `b` at the two ends
/// of one edge, on both tiles sharing it at once, so that the labels at
/// each end vertex are unchanged. The tile arrangement and the AVC must
/// survive the exchange.
pub fn edge_exchanges(t: &Tiling, a: Label, b: Label, arrangement: &Arrangement, avc: &Avc) -> Vec<Tiling> {
    let arrangements = std::slice::from_ref(arrangement);
    let pair = |h: usize| {
        let (x, y) = (t.corner(h), t.corner(t.next(h)));
        x == a && y == b || x == b && y == a
    };
    let mut out = Vec::new();
    for h in 0..t.half_edge_count() {
        let k = t.twin(h);
        if h > k || !pair(h) || !pair(k) {
            continue;
        }
        let mut corner = t.corners().to_vec();
        corner.swap(h, t.next(h));
        corner.swap(k, t.next(k));
        let s = t.with_corners(corner);
        if verify_tiling(&s, avc, arrangements).passed() {
            out.push(s);
        }
    }
    out
}

/// Groups tilings into classes connected by [`edge_exchanges`], keyed by
/// canonical code under `policy`. Tilings reached outside `tilings` are
/// followed too, so each class is complete.
pub fn exchange_classes(
    tilings: &[Tiling],
    a: Label,
    b: Label,
    arrangement: &Arrangement,
    avc: &Avc,
    policy: MirrorPolicy,
) -> Vec<BTreeSet<CanonicalCode>> {
    let mut class_of: BTreeMap<CanonicalCode, usize> = BTreeMap::new();
    let mut classes = Vec::new();
    for t in tilings {
        let code = canonical_code(t, policy);
        if class_of.contains_key(&code) {
            continue;
        }
        let id = classes.len();
        let mut members = BTreeSet::new();
        class_of.insert(code.clone(), id);
        members.insert(code);
        let mut stack = vec![t.clone()];
        while let Some(x) = stack.pop() {
            for y in edge_exchanges(&x, a, b, arrangement, avc) {
                let c = canonical_code(&y, policy);
                if !class_of.contains_key(&c) {
                    class_of.insert(c.clone(), id);
                    members.insert(c);
                    stack.push(y);
                }
            }
        }
        classes.push(members);
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avc::{named_arrangement, named_avc, parse_avc};
    use crate::constructors::{pp, Chirality};
    use crate::label::parse_word;
    use crate::map::isomorphic;

    fn census_of(t: &Tiling) -> Vec<(String, usize)> {
        t.census().entries.iter().map(|(m, &c)| (m.to_letters(), c)).collect()
    }

    #[test]
    fn named_table_matches_listed_images() {
        let m = LabelMap::named("4A2").unwrap();
        assert_eq!(m.apply_word(&parse_word("abcde").unwrap()).unwrap(), parse_word("abacd").unwrap());
        assert_eq!(named_maps().count(), NAMED_MAPS.len());
        for name in named_maps() {
            assert!(LabelMap::named(name).is_ok(), "{name}");
        }
        assert!(LabelMap::named("9Z").is_err());
    }

    #[test]
    fn two_d_reduction_of_cube_subdivision() {
        let t = pp("cube", Chirality::Right).unwrap();
        let r = reduce_tiling(&t, &LabelMap::named("2D").unwrap()).unwrap();
        let mut c = census_of(&r);
        c.sort();
        assert_eq!(c, vec![("a^3".to_string(), 32), ("b^4".to_string(), 6)]);
    }

    #[test]
    fn avc_reductions_land_on_named_avcs() {
        let a = named_avc("5A24").unwrap();
        let r = reduce_avc(&a, &LabelMap::named("3A").unwrap()).unwrap();
        assert_eq!(r, named_avc("3A24").unwrap());
        let r = reduce_avc(&named_avc("4A24").unwrap(), &LabelMap::named("4A->3A").unwrap()).unwrap();
        assert_eq!(r, named_avc("3A24").unwrap());
        let r = reduce_avc(&named_avc("5A36").unwrap(), &LabelMap::named("5A36->3A36").unwrap()).unwrap();
        assert_eq!(r, named_avc("3A36").unwrap());
        let r = reduce_avc(&named_avc("3A36").unwrap(), &LabelMap::named("3A36->2D36").unwrap()).unwrap();
        assert_eq!(r, named_avc("2D36").unwrap());
    }

    #[test]
    fn custom_map_syntax() {
        let m: LabelMap = "de>ed".parse().unwrap();
        assert_eq!(m.get(Label::DELTA), Some(Label::EPSILON));
        let m: LabelMap = "4A->3A".parse().unwrap();
        assert_eq!(m.name.as_deref(), Some("4A->3A"));
        assert!("ab>a".parse::<LabelMap>().is_err());
    }

    #[test]
    fn split_two_d_back_to_three_a() {
        let t = pp("cube", Chirality::Right).unwrap();
        let three_a = reduce_tiling(&t, &LabelMap::named("3A").unwrap()).unwrap();
        let two_d = reduce_tiling(&three_a, &LabelMap::named("3A->2D").unwrap()).unwrap();
        let target = Arrangement::from_word(&three_a.face_words()[0]);
        let out = split_tilings(
            &two_d,
            &target,
            &LabelMap::named("3A->2D").unwrap(),
            &named_avc("3A24").unwrap(),
        )
        .unwrap();
        assert_eq!(out.len(), 1);
        assert!(isomorphic(&out[0], &three_a, MirrorPolicy::Oriented));
    }

    #[test]
    fn split_rejects_mismatched_arrangement() {
        let t = pp("cube", Chirality::Right).unwrap();
        let two_d = reduce_tiling(&t, &LabelMap::named("2D").unwrap()).unwrap();
        let wrong = named_arrangement("aaabc-adjacent").unwrap();
        let id = LabelMap::identity(Label::all());
        let e = split_tilings(&two_d, &wrong, &id, &named_avc("3B24").unwrap());
        assert!(e.is_err());
    }

    #[test]
    fn flipping_a_star_twice_restores_the_tiling() {
        let t = pp("cube", Chirality::Right).unwrap();
        let t = reduce_tiling(&t, &LabelMap::named("3C1").unwrap()).unwrap();
        let avc = parse_avc("24 aaabc : 24 a^2b, 8 c^3, 6 a^4").unwrap();
        assert!(verify_tiling(&t, &avc, &[]).passed());
        let v = (0..t.vertex_count())
            .find(|&v| t.vertex_labels()[v] == crate::avc::vertex_type("ccc"))
            .unwrap();
        let n = Neighborhood::star(&t, v).unwrap();
        let once = reorient_neighborhood(&t, &n).unwrap();
        assert!(verify_tiling(&once, &avc, &[]).passed());
        // Face ids survive the flip, so the centre is found by its star.
        let again = (0..once.vertex_count())
            .map(|w| Neighborhood::star(&once, w).unwrap())
            .find(|m| m.faces == n.faces)
            .unwrap();
        let twice = reorient_neighborhood(&once, &again).unwrap();
        assert!(isomorphic(&twice, &t, MirrorPolicy::Oriented));
    }

    #[test]
    fn flipping_every_gamma_star_swaps_the_three_c_reductions() {
        let pp6 = pp("cube", Chirality::Right).unwrap();
        let c1 = reduce_tiling(&pp6, &LabelMap::named("3C1").unwrap()).unwrap();
        let c2 = reduce_tiling(&pp6, &LabelMap::named("3C2").unwrap()).unwrap();
        assert!(!isomorphic(&c1, &c2, MirrorPolicy::Oriented));
        let ccc = crate::avc::vertex_type("ccc");
        let stars: Vec<Neighborhood> = (0..c1.vertex_count())
            .filter(|&v| c1.vertex_labels()[v] == ccc)
            .map(|v| Neighborhood::star(&c1, v).unwrap())
            .collect();
        assert_eq!(stars.len(), 8);
        let mut t = c1.clone();
        for s in &stars {
            let centre = (0..t.vertex_count())
                .map(|w| Neighborhood::star(&t, w).unwrap())
                .find(|m| m.faces == s.faces)
                .unwrap();
            t = reorient_neighborhood(&t, &centre).unwrap();
        }
        assert!(isomorphic(&t, &c2, MirrorPolicy::Oriented));
    }

    #[test]
    fn five_a_symmetries_permute_the_trivalent_labels() {
        let syms = avc_symmetries(&named_avc("5A24").unwrap());
        assert_eq!(syms.len(), 6);
        let fixed = [Label::DELTA, Label::EPSILON];
        assert!(syms.iter().all(|m| fixed.iter().all(|&l| m.get(l) == Some(l))));
    }
}
