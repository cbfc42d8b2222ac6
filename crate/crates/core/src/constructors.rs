//! Builders for the named tilings: Platonic maps, pentagonal
//! subdivisions, earth map tilings and their rotation modifications,
//! simple pentagonal subdivisions of quadrilateral maps, and the four
//! 36-tile patches.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::avc::{emt_avc, named_arrangement, named_avc, Avc};
use crate::enumerator::{enumerate_piece_tilings, verify_tiling, EnumError, Piece, SearchResult};
use crate::label::{Label, LabelMultiset};
use crate::map::{canonical_code, validate, MapError, MirrorPolicy, Tiling};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("unknown Platonic solid `{0}`")]
    UnknownSolid(String),
    #[error("tile count {0} does not satisfy {1}")]
    TileCount(usize, &'static str),
    #[error("base map is invalid: {0}")]
    InvalidBase(String),
    #[error("base map has a face of degree {0}, expected 4")]
    NotQuadrilateral(usize),
    #[error("no labeling satisfies the vertex census")]
    NoLabeling,
    #[error("no rotation modification found for f = {0}")]
    NoModification(usize),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Search(#[from] EnumError),
}

pub const SOLIDS: [&str; 5] = ["tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron"];

fn unlabeled_faces(faces: &[Vec<usize>]) -> Result<Tiling, MapError> {
    let f: Vec<Vec<(usize, Label)>> = faces
        .iter()
        .map(|c| c.iter().map(|&v| (v, Label::ALPHA)).collect())
        .collect();
    Tiling::from_faces(&f)
}

fn icosahedron() -> Tiling {
    // Apex 0, upper ring 1..=5, lower ring 6..=10, apex 11.
    let u = |i: usize| 1 + i % 5;
    let l = |i: usize| 6 + i % 5;
    let mut faces = Vec::new();
    for i in 0..5 {
        faces.push(vec![0, u(i), u(i + 1)]);
        faces.push(vec![u(i), l(i), u(i + 1)]);
        faces.push(vec![u(i + 1), l(i), l(i + 1)]);
        faces.push(vec![11, l(i + 1), l(i)]);
    }
    unlabeled_faces(&faces).expect("icosahedron faces pair up")
}

/// The dual map: vertices become faces. Corners are reset to α.
pub fn dual(t: &Tiling) -> Tiling {
    let n = t.half_edge_count();
    let next = (0..n).map(|h| t.sigma(h)).collect();
    Tiling::from_permutations(t.twins().to_vec(), next, vec![Label::ALPHA; n])
        .expect("dual of a map is a map")
}

/// Standard Platonic map with every corner labeled α.
pub fn platonic(name: &str) -> Result<Tiling, ConstructError> {
    let faces: Vec<Vec<usize>> = match name {
        "tetrahedron" => vec![vec![0, 1, 2], vec![0, 3, 1], vec![0, 2, 3], vec![1, 3, 2]],
        "cube" => vec![
            vec![0, 3, 2, 1],
            vec![4, 5, 6, 7],
            vec![0, 1, 5, 4],
            vec![1, 2, 6, 5],
            vec![2, 3, 7, 6],
            vec![3, 0, 4, 7],
        ],
        "octahedron" => vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 1],
            vec![5, 2, 1],
            vec![5, 3, 2],
            vec![5, 4, 3],
            vec![5, 1, 4],
        ],
        "icosahedron" => return Ok(icosahedron()),
        "dodecahedron" => return Ok(dual(&icosahedron())),
        other => return Err(ConstructError::UnknownSolid(other.to_string())),
    };
    Ok(unlabeled_faces(&faces)?)
}

/// Which end of each subdivided edge receives the spoke from the face center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chirality {
    Left,
    Right,
}

impl std::str::FromStr for Chirality {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "left" => Ok(Chirality::Left),
            "right" => Ok(Chirality::Right),
            other => Err(format!("unknown chirality `{other}`")),
        }
    }
}

/// Pentagonal subdivision: every edge gets two new vertices, every face a
/// center joined to one new vertex per side. Corners: δ at old vertices,
/// ε at centers, α β γ at the new trivalent vertices.
pub fn pentagonal_subdivision(base: &Tiling, chirality: Chirality) -> Result<Tiling, ConstructError> {
    let report = validate(base, None);
    if !report.is_valid() {
        return Err(ConstructError::InvalidBase(report.to_string()));
    }
    let nv = base.vertex_count();
    let n = base.half_edge_count();
    let face_of = base.face_of();
    // Vertex on half-edge h nearer its origin.
    let p = |h: usize| nv + h;
    let center = |f: usize| nv + n + f;
    let (a, b, g, d, e) = (Label::ALPHA, Label::BETA, Label::GAMMA, Label::DELTA, Label::EPSILON);
    let mut faces = Vec::with_capacity(n);
    for (h, &f) in face_of.iter().enumerate() {
        let c = center(f);
        let face = match chirality {
            Chirality::Right => {
                let pr = base.prev(h);
                vec![
                    (p(pr), g),
                    (p(base.twin(pr)), b),
                    (base.vertex_of(h), d),
                    (p(h), a),
                    (c, e),
                ]
            }
            Chirality::Left => {
                let nx = base.next(h);
                vec![
                    (p(base.twin(h)), a),
                    (base.vertex_of(nx), d),
                    (p(nx), b),
                    (p(base.twin(nx)), g),
                    (c, e),
                ]
            }
        };
        faces.push(face);
    }
    Ok(Tiling::from_faces(&faces)?)
}

/// Pentagonal subdivision of a named Platonic solid.
pub fn pp(solid: &str, chirality: Chirality) -> Result<Tiling, ConstructError> {
    pentagonal_subdivision(&platonic(solid)?, chirality)
}

/// All corner labelings of `map` where face `i` reads one of
/// `candidates[i]` counterclockwise from its smallest half-edge, with the
/// exact vertex census `vertices`. Stops after `limit` labelings.
pub fn labelings(
    map: &Tiling,
    candidates: &[Vec<Vec<Label>>],
    vertices: &[(LabelMultiset, usize)],
    limit: usize,
) -> Vec<Tiling> {
    let faces = map.faces();
    assert_eq!(candidates.len(), faces.len());
    let nv = map.vertex_count();
    let mut remaining = vec![0usize; nv];
    for h in 0..map.half_edge_count() {
        remaining[map.vertex_of(h)] += 1;
    }
    // Visit faces breadth first so vertices close early.
    let mut order = Vec::with_capacity(faces.len());
    let face_of = map.face_of();
    let mut seen = vec![false; faces.len()];
    for s in 0..faces.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(f) = q.pop_front() {
            order.push(f);
            for &h in &faces[f] {
                let g = face_of[map.twin(h)];
                if !seen[g] {
                    seen[g] = true;
                    q.push_back(g);
                }
            }
        }
    }
    struct Search<'a> {
        map: &'a Tiling,
        faces: &'a [Vec<usize>],
        candidates: &'a [Vec<Vec<Label>>],
        vertices: &'a [(LabelMultiset, usize)],
        order: Vec<usize>,
        partial: Vec<LabelMultiset>,
        remaining: Vec<usize>,
        used: Vec<usize>,
        corner: Vec<Label>,
        out: Vec<Tiling>,
        limit: usize,
    }
    impl Search<'_> {
        fn ok(&self, v: usize) -> bool {
            let m = &self.partial[v];
            if self.remaining[v] == 0 {
                self.vertices
                    .iter()
                    .zip(&self.used)
                    .any(|((t, c), u)| t == m && u <= c)
            } else {
                self.vertices
                    .iter()
                    .zip(&self.used)
                    .any(|((t, c), u)| u < c && m.is_subset_of(t) && t.len() == m.len() + self.remaining[v])
            }
        }
        fn close(&mut self, v: usize, delta: isize) {
            let m = self.partial[v];
            if let Some(i) = self.vertices.iter().position(|(t, _)| *t == m) {
                self.used[i] = (self.used[i] as isize + delta) as usize;
            }
        }
        fn go(&mut self, k: usize) {
            if self.out.len() >= self.limit {
                return;
            }
            if k == self.order.len() {
                let t = self.map.with_corners(self.corner.clone());
                self.out.push(t);
                return;
            }
            let f = self.order[k];
            let cands = self.candidates[f].clone();
            for w in &cands {
                let hs = &self.faces[f];
                let mut good = true;
                let mut done = 0;
                for (i, &h) in hs.iter().enumerate() {
                    let v = self.map.vertex_of(h);
                    self.partial[v].insert(w[i]);
                    self.remaining[v] -= 1;
                    self.corner[h] = w[i];
                    done = i + 1;
                    if self.remaining[v] == 0 {
                        self.close(v, 1);
                    }
                    if !self.ok(v) {
                        good = false;
                        break;
                    }
                }
                if good {
                    self.go(k + 1);
                }
                for i in (0..done).rev() {
                    let h = hs[i];
                    let v = self.map.vertex_of(h);
                    if self.remaining[v] == 0 {
                        self.close(v, -1);
                    }
                    let mut c = *self.partial[v].counts();
                    c[w[i].index()] -= 1;
                    self.partial[v] = LabelMultiset::from_counts(c);
                    self.remaining[v] += 1;
                }
            }
        }
    }
    let mut s = Search {
        map,
        faces: &faces,
        candidates,
        vertices,
        order,
        partial: vec![LabelMultiset::new(); nv],
        remaining,
        used: vec![0; vertices.len()],
        corner: map.corners().to_vec(),
        out: Vec::new(),
        limit,
    };
    s.go(0);
    s.out
}

/// Every counterclockwise placement of `word` on each face.
fn all_placements(map: &Tiling, word: &[Label]) -> Vec<Vec<Vec<Label>>> {
    let arr = crate::avc::Arrangement::from_word(word);
    vec![arr.placements(); map.face_count()]
}

/// Tile ids of the unlabeled earth map: `n` time zones of a north cap
/// tile, two middle tiles and a south cap tile.
struct EarthLayout {
    map: Tiling,
    /// Face index of each tile, by zone: north, middle 1, middle 2, south.
    zones: Vec<[usize; 4]>,
}

fn earth_layout(n: usize) -> EarthLayout {
    let north = 0;
    let south = 1;
    let x = |i: usize| 2 + 3 * (i % n);
    let y = |i: usize| 3 + 3 * (i % n);
    let z = |i: usize| 4 + 3 * (i % n);
    let c = |i: usize| 2 + 3 * n + 3 * (i % n);
    let d = |i: usize| 3 + 3 * n + 3 * (i % n);
    let e = |i: usize| 4 + 3 * n + 3 * (i % n);
    let mut faces = Vec::new();
    for i in 0..n {
        faces.push(vec![north, x(i), y(i), z(i), x(i + 1)]);
        faces.push(vec![y(i), c(i), d(i), e(i), z(i)]);
        faces.push(vec![z(i), e(i), c(i + 1), y(i + 1), x(i + 1)]);
        faces.push(vec![d(i + 1), c(i + 1), e(i), d(i), south]);
    }
    let map = unlabeled_faces(&faces).expect("earth map faces pair up");
    // Faces are numbered by smallest half-edge, which follows input order.
    let face_of = map.face_of();
    let zones = (0..n)
        .map(|i| {
            let f = |k: usize| face_of[5 * (4 * i + k)];
            [f(0), f(1), f(2), f(3)]
        })
        .collect();
    EarthLayout { map, zones }
}

fn psub_word() -> Vec<Label> {
    named_arrangement("abcde-separated")
        .expect("built-in arrangement")
        .cycle()
        .to_vec()
}

/// Labels an unlabeled map with the δ, ε separated pentagon so that it
/// realizes `avc`; the first labeling in search order.
fn label_with(map: &Tiling, avc: &Avc) -> Result<Tiling, ConstructError> {
    labelings(map, &all_placements(map, &psub_word()), &avc.vertices, 1)
        .into_iter()
        .next()
        .ok_or(ConstructError::NoLabeling)
}

/// Earth map tiling with `f` tiles: `f/4` time zones around two poles of
/// degree `f/4`.
pub fn earth_map(f: usize) -> Result<Tiling, ConstructError> {
    if !f.is_multiple_of(4) || f < 8 {
        return Err(ConstructError::TileCount(f, "f divisible by 4 and at least 8"));
    }
    let avc = emt_avc(f, 2).map_err(|_| ConstructError::TileCount(f, "f divisible by 4"))?;
    label_with(&earth_layout(f / 4).map, &avc)
}

/// Boundary half-edges of a face set, in cyclic order, if the set is a
/// disk whose boundary visits each vertex once.
pub(crate) fn disk_boundary(t: &Tiling, inside: &[bool], face_of: &[usize]) -> Option<Vec<usize>> {
    let n = t.half_edge_count();
    let on_boundary = |h: usize| inside[face_of[h]] && !inside[face_of[t.twin(h)]];
    let all: Vec<usize> = (0..n).filter(|&h| on_boundary(h)).collect();
    let &start = all.first()?;
    let mut cycle = vec![start];
    let mut h = start;
    loop {
        let mut k = t.next(h);
        while !on_boundary(k) {
            k = t.next(t.twin(k));
        }
        if k == start {
            break;
        }
        cycle.push(k);
        h = k;
        if cycle.len() > all.len() {
            return None;
        }
    }
    let verts: BTreeSet<usize> = cycle.iter().map(|&h| t.vertex_of(h)).collect();
    (cycle.len() == all.len() && verts.len() == cycle.len()).then_some(cycle)
}

fn connected(t: &Tiling, inside: &[bool], face_of: &[usize]) -> bool {
    let faces = t.faces();
    let Some(s) = (0..faces.len()).find(|&f| inside[f]) else {
        return false;
    };
    let mut seen = vec![false; faces.len()];
    seen[s] = true;
    let mut stack = vec![s];
    let mut count = 1;
    while let Some(f) = stack.pop() {
        for &h in &faces[f] {
            let g = face_of[t.twin(h)];
            if inside[g] && !seen[g] {
                seen[g] = true;
                count += 1;
                stack.push(g);
            }
        }
    }
    count == inside.iter().filter(|&&x| x).count()
}

/// Re-glues the boundary of a disk to its complement shifted by `s` edges.
fn reglue(t: &Tiling, boundary: &[usize], s: usize) -> Result<Tiling, MapError> {
    let l = boundary.len();
    let mut twin = t.twins().to_vec();
    for i in 0..l {
        let b = boundary[i];
        let o = t.twin(boundary[(i + s) % l]);
        twin[b] = o;
        twin[o] = b;
    }
    Tiling::from_permutations(twin, t.nexts().to_vec(), t.corners().to_vec())
}

/// A half earth map inside the earth map with `f ≡ 4 (mod 8)` tiles, and
/// the boundary shifts that turn it into a rotation modification.
#[derive(Clone, Debug)]
pub struct HalfEarthMap {
    pub earth: Tiling,
    /// Face membership of the half.
    pub inside: Vec<bool>,
    /// Boundary half-edges of the half, in cyclic order.
    pub boundary: Vec<usize>,
    /// Boundary corner word of the half: its labels at each boundary vertex.
    pub boundary_word: Vec<LabelMultiset>,
    /// Smallest positive rotation of the boundary word onto itself.
    pub period: usize,
    /// Nonzero shifts whose re-gluing realizes AVC(EMT) with no pole.
    pub shifts: Vec<usize>,
}

/// Finds a half earth map: `q+1` north cap tiles, `q` south cap tiles and
/// `2q+1` consecutive middle tiles forming a disk, for `f = 8q+4`.
pub fn half_earth_map(f: usize) -> Result<HalfEarthMap, ConstructError> {
    half_earth_maps(f, 1)?
        .into_iter()
        .next()
        .ok_or(ConstructError::NoModification(f))
}

/// Up to `limit` half earth maps, in search order.
pub fn half_earth_maps(f: usize, limit: usize) -> Result<Vec<HalfEarthMap>, ConstructError> {
    let mut found = Vec::new();
    if f % 8 != 4 || f < 12 {
        return Err(ConstructError::TileCount(f, "f ≡ 4 (mod 8)"));
    }
    let n = f / 4;
    let q = (f - 4) / 8;
    let layout = earth_layout(n);
    let avc2 = emt_avc(f, 2).map_err(|_| ConstructError::TileCount(f, "f ≡ 4 (mod 8)"))?;
    let earth = label_with(&layout.map, &avc2)?;
    let target = emt_avc(f, 0).map_err(|_| ConstructError::TileCount(f, "f ≡ 4 (mod 8)"))?;
    let face_of = earth.face_of();
    let middle: Vec<usize> = layout.zones.iter().flat_map(|z| [z[1], z[2]]).collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..2 * n {
                let mut inside = vec![false; f];
                for a in 0..=q {
                    inside[layout.zones[(i + a) % n][0]] = true;
                }
                for a in 0..q {
                    inside[layout.zones[(j + a) % n][3]] = true;
                }
                for a in 0..=2 * q {
                    inside[middle[(k + a) % (2 * n)]] = true;
                }
                if !connected(&earth, &inside, &face_of) {
                    continue;
                }
                let outside: Vec<bool> = inside.iter().map(|x| !x).collect();
                if !connected(&earth, &outside, &face_of) {
                    continue;
                }
                let Some(boundary) = disk_boundary(&earth, &inside, &face_of) else {
                    continue;
                };
                let l = boundary.len();
                let shifts: Vec<usize> = (1..l)
                    .filter(|&s| match reglue(&earth, &boundary, s) {
                        Ok(m) => verify_tiling(&m, &target, &[]).passed(),
                        Err(_) => false,
                    })
                    .collect();
                if shifts.is_empty() {
                    continue;
                }
                let boundary_word: Vec<LabelMultiset> = boundary
                    .iter()
                    .map(|&h| {
                        let mut m = LabelMultiset::new();
                        let mut g = h;
                        loop {
                            m.insert(earth.corner(g));
                            let p = earth.prev(g);
                            let t = earth.twin(p);
                            if !inside[face_of[t]] {
                                break;
                            }
                            g = t;
                        }
                        m
                    })
                    .collect();
                let period = (1..=l)
                    .find(|&r| (0..l).all(|x| boundary_word[x] == boundary_word[(x + r) % l]))
                    .unwrap_or(l);
                found.push(HalfEarthMap {
                    earth: earth.clone(),
                    inside,
                    boundary,
                    boundary_word,
                    period,
                    shifts,
                });
                if found.len() >= limit {
                    return Ok(found);
                }
            }
        }
    }
    Ok(found)
}

/// Rotation modification: the half earth map re-glued to the other half
/// with the smaller (`turns = 1`) or larger (`turns = 2`) valid shift.
pub fn rotation_modification(f: usize, turns: usize) -> Result<Tiling, ConstructError> {
    if !(1..=2).contains(&turns) {
        return Err(ConstructError::TileCount(turns, "turns in {1, 2}"));
    }
    let h = half_earth_map(f)?;
    let s = match turns {
        1 => h.shifts.first(),
        _ => h.shifts.last(),
    }
    .copied()
    .ok_or(ConstructError::NoModification(f))?;
    Ok(reglue(&h.earth, &h.boundary, s)?)
}

/// Ways to pick, for every quadrilateral, one pair of opposite sides so
/// that each edge is picked by exactly one of its two faces. Entry `i` is
/// `false` for sides 0 and 2 of face `i`, `true` for sides 1 and 3.
pub fn cut_assignments(quad: &Tiling) -> Result<Vec<Vec<bool>>, ConstructError> {
    let faces = quad.faces();
    if let Some(f) = faces.iter().find(|f| f.len() != 4) {
        return Err(ConstructError::NotQuadrilateral(f.len()));
    }
    let face_of = quad.face_of();
    let mut edge_of = vec![0; quad.half_edge_count()];
    let mut next_id = 0;
    for h in 0..quad.half_edge_count() {
        if h < quad.twin(h) {
            edge_of[h] = next_id;
            edge_of[quad.twin(h)] = next_id;
            next_id += 1;
        }
    }
    let mut out = Vec::new();
    let mut choice = vec![false; faces.len()];
    let mut used = vec![false; next_id];
    fn go(
        k: usize,
        faces: &[Vec<usize>],
        edge_of: &[usize],
        choice: &mut Vec<bool>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if k == faces.len() {
            if used.iter().all(|&u| u) {
                out.push(choice.clone());
            }
            return;
        }
        for c in [false, true] {
            let sides = if c { [1, 3] } else { [0, 2] };
            let es = [edge_of[faces[k][sides[0]]], edge_of[faces[k][sides[1]]]];
            if es[0] == es[1] || used[es[0]] || used[es[1]] {
                continue;
            }
            used[es[0]] = true;
            used[es[1]] = true;
            choice[k] = c;
            go(k + 1, faces, edge_of, choice, used, out);
            used[es[0]] = false;
            used[es[1]] = false;
        }
    }
    let _ = face_of;
    go(0, &faces, &edge_of, &mut choice, &mut used, &mut out);
    Ok(out)
}

/// Simple pentagonal subdivisions of a quadrilateral map: every edge gets
/// a midpoint, and every face is cut between the midpoints of its chosen
/// opposite sides. Midpoints carry α; the old vertices get δ and ε so that
/// degree 3 vertices read δ³ and degree 4 vertices δε³, one δ and one ε
/// per pentagon. Returns every labeled result, distinct as labeled maps.
pub fn simple_pentagonal_subdivisions(quad: &Tiling) -> Result<Vec<Tiling>, ConstructError> {
    let assignments = cut_assignments(quad)?;
    let faces = quad.faces();
    let nv = quad.vertex_count();
    let mid = |h: usize| nv + h.min(quad.twin(h));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let (a, d, e) = (Label::ALPHA, Label::DELTA, Label::EPSILON);
    let mut vertices: Vec<(LabelMultiset, usize)> = Vec::new();
    let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
    for star in quad.vertices() {
        *deg.entry(star.len()).or_insert(0) += 1;
    }
    let mut a3 = LabelMultiset::new();
    a3.add(a, 3);
    vertices.push((a3, quad.edge_count()));
    for (&k, &c) in &deg {
        let mut m = LabelMultiset::new();
        match k {
            3 => m.add(d, 3),
            4 => {
                m.insert(d);
                m.add(e, 3);
            }
            _ => return Ok(Vec::new()),
        }
        vertices.push((m, c));
    }
    for choice in assignments {
        let mut pent: Vec<Vec<usize>> = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            // Rotate so the cut sides are 0 and 2.
            let r = if choice[fi] { 1 } else { 0 };
            let h: Vec<usize> = (0..4).map(|i| f[(i + r) % 4]).collect();
            let v: Vec<usize> = h.iter().map(|&x| quad.vertex_of(x)).collect();
            pent.push(vec![v[0], mid(h[0]), mid(h[2]), v[3], mid(h[3])]);
            pent.push(vec![mid(h[0]), v[1], mid(h[1]), v[2], mid(h[2])]);
        }
        let faces_lab: Vec<Vec<(usize, Label)>> = pent
            .iter()
            .map(|p| p.iter().map(|&x| (x, a)).collect())
            .collect();
        let map = Tiling::from_faces(&faces_lab)?;
        // Half-edges follow the input order, so half-edge 5p + i starts at
        // pent[p][i]; vertex ids are renumbered by the builder.
        let is_old = |h: usize| pent[h / 5][h % 5] < nv;
        // Candidate words: α at midpoints, δ ε on the two old vertices.
        let cands: Vec<Vec<Vec<Label>>> = map
            .faces()
            .iter()
            .map(|fc| {
                let old: Vec<usize> = (0..5).filter(|&i| is_old(fc[i])).collect();
                [(d, e), (e, d)]
                    .iter()
                    .map(|&(x, y)| {
                        let mut w = vec![a; 5];
                        w[old[0]] = x;
                        w[old[1]] = y;
                        w
                    })
                    .collect()
            })
            .collect();
        for t in labelings(&map, &cands, &vertices, usize::MAX) {
            if seen.insert(canonical_code(&t, MirrorPolicy::Oriented)) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// Corner layout of one patch: tiles as `(x, y)` points times ten, with
/// the index of the ε corner.
type PatchTile = (&'static [(i32, i32)], usize);

const CORE: [PatchTile; 3] = [
    (&[(0, 0), (8, 0), (8, 5), (4, 8), (0, 5)], 0),
    (&[(0, 0), (0, 5), (-4, 8), (-8, 5), (-8, 0)], 0),
    (&[(0, 0), (0, -5), (4, -8), (8, -5), (8, 0)], 0),
];
const LOWER_LEFT: &[(i32, i32)] = &[(0, 0), (-8, 0), (-8, -5), (-4, -8), (0, -5)];

fn patch_tiles(i: usize) -> Vec<PatchTile> {
    let mut tiles = CORE.to_vec();
    let n2_t5: PatchTile = (&[(-4, -8), (-4, -13), (-12, -13), (-12, -9), (-8, -5)], 4);
    let n3_t6: PatchTile = (&[(-8, -5), (-14, -5), (-14, 5), (-8, 5), (-8, 0)], 0);
    match i {
        0 => {
            tiles.push((LOWER_LEFT, 1));
            tiles.push((&[(-8, 0), (-8, 5), (-12, 8), (-16, 5), (-16, 0)], 0));
            tiles.push((&[(-8, 0), (-16, 0), (-16, -5), (-12, -8), (-8, -5)], 0));
        }
        1 => {
            tiles.push((LOWER_LEFT, 2));
            tiles.push(n2_t5);
            tiles.push((&[(-8, -5), (-12, -1), (-17, -1), (-17, -9), (-12, -9)], 0));
        }
        2 => {
            tiles.push((LOWER_LEFT, 2));
            tiles.push(n2_t5);
            tiles.push(n3_t6);
        }
        _ => {
            tiles.push((LOWER_LEFT, 2));
            tiles.push(n3_t6);
            tiles.push((&[(-8, -5), (-8, -13), (-17, -13), (-17, -9), (-14, -5)], 0));
        }
    }
    tiles
}

/// Patch `N_{i+1}` for `i` in `0..4`: six tiles with corners α except one
/// ε each.
pub fn patch(i: usize) -> Result<Piece, ConstructError> {
    let mut ids: HashMap<(i32, i32), usize> = HashMap::new();
    let mut faces = Vec::new();
    for (pts, eps) in patch_tiles(i) {
        let area: i64 = (0..pts.len())
            .map(|k| {
                let (x0, y0) = pts[k];
                let (x1, y1) = pts[(k + 1) % pts.len()];
                x0 as i64 * y1 as i64 - x1 as i64 * y0 as i64
            })
            .sum();
        let mut face: Vec<(usize, Label)> = pts
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let n = ids.len();
                let id = *ids.entry(*p).or_insert(n);
                (id, if k == eps { Label::EPSILON } else { Label::ALPHA })
            })
            .collect();
        if area < 0 {
            face.reverse();
        }
        faces.push(face);
    }
    Ok(Piece::from_faces(&faces)?)
}

pub fn patches() -> Vec<Piece> {
    (0..4).map(|i| patch(i).expect("built-in patch")).collect()
}

/// Boundary word of a piece: `A` where the piece already holds two or
/// more corners at a boundary vertex, `a` where it holds one.
pub fn boundary_word(p: &Piece) -> String {
    p.boundary_cycle()
        .iter()
        .map(|&h| {
            let mut count = 1;
            let mut g = h;
            loop {
                let prev = (0..p.len()).find(|&x| p.next[x] == g).expect("faces are cycles");
                match p.twin[prev] {
                    Some(t) => {
                        count += 1;
                        g = t;
                    }
                    None => break,
                }
            }
            if count >= 2 {
                'A'
            } else {
                'a'
            }
        })
        .collect()
}

/// Every 36-tile tiling assembled from six patches that realizes
/// AVC(2D36), one per labeled class under `policy`.
pub fn glue_patch_tilings(allow_mirror: bool, policy: MirrorPolicy, jobs: usize) -> Result<SearchResult, ConstructError> {
    let avc = named_avc("2D36").expect("built-in AVC");
    Ok(enumerate_piece_tilings(
        &patches(),
        allow_mirror,
        &avc.vertices,
        avc.tile_count,
        policy,
        jobs,
    )?)
}

/// Face sets covered by copies of `p` inside `t`, matching corner labels
/// and inner gluing. Faces are bits, so `t` has at most 64 faces.
pub fn piece_placements(t: &Tiling, p: &Piece) -> BTreeSet<u64> {
    let face_of = t.face_of();
    let mut out = BTreeSet::new();
    'roots: for root in 0..t.half_edge_count() {
        let mut image = vec![usize::MAX; p.len()];
        let mut used = vec![false; t.half_edge_count()];
        let mut stack = vec![(0, root)];
        while let Some((x, y)) = stack.pop() {
            if image[x] != usize::MAX {
                if image[x] != y {
                    continue 'roots;
                }
                continue;
            }
            if used[y] || p.corner[x] != t.corner(y) {
                continue 'roots;
            }
            image[x] = y;
            used[y] = true;
            stack.push((p.next[x], t.next(y)));
            if let Some(z) = p.twin[x] {
                stack.push((z, t.twin(y)));
            }
        }
        out.insert(image.iter().fold(0u64, |m, &y| m | 1 << face_of[y]));
    }
    out
}

/// Whether `t` splits into copies of the four patches, optionally
/// reflected.
pub fn is_patch_glued(t: &Tiling, allow_mirror: bool) -> Result<bool, ConstructError> {
    let f = t.face_count();
    if f > 64 {
        return Err(ConstructError::TileCount(f, "at most 64 tiles"));
    }
    let mut pieces = patches();
    if allow_mirror {
        pieces.extend(patches().iter().map(Piece::mirror));
    }
    let placements: BTreeSet<u64> = pieces.iter().flat_map(|p| piece_placements(t, p)).collect();
    let full = if f == 64 { u64::MAX } else { (1u64 << f) - 1 };
    fn cover(covered: u64, full: u64, placements: &BTreeSet<u64>) -> bool {
        if covered == full {
            return true;
        }
        let first = (!covered).trailing_zeros();
        placements
            .iter()
            .filter(|&&m| m >> first & 1 == 1 && m & covered == 0)
            .any(|&m| cover(covered | m, full, placements))
    }
    Ok(cover(0, full, &placements))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::isomorphic;

    #[test]
    fn platonic_counts() {
        for (name, v, e, f) in [
            ("tetrahedron", 4, 6, 4),
            ("cube", 8, 12, 6),
            ("octahedron", 6, 12, 8),
            ("dodecahedron", 20, 30, 12),
            ("icosahedron", 12, 30, 20),
        ] {
            let t = platonic(name).unwrap();
            assert!(validate(&t, None).is_valid(), "{name}");
            assert_eq!((t.vertex_count(), t.edge_count(), t.face_count()), (v, e, f));
        }
        assert!(platonic("torus").is_err());
    }

    #[test]
    fn octahedron_is_dual_of_cube() {
        let o = platonic("octahedron").unwrap();
        let c = dual(&platonic("cube").unwrap());
        assert!(isomorphic(&o, &c, MirrorPolicy::Unoriented));
    }

    #[test]
    fn single_tiles_place_once_per_face() {
        let t = pp("cube", Chirality::Right).unwrap();
        let word = t.face_words()[0].clone();
        let placed = piece_placements(&t, &Piece::tile(&word));
        assert_eq!(placed.len(), 24);
        assert!(placed.iter().all(|m| m.count_ones() == 1));
        assert!(!is_patch_glued(&t, true).unwrap());
    }

    #[test]
    fn subdivision_census() {
        let t = pp("cube", Chirality::Right).unwrap();
        let avc = named_avc("5A24").unwrap();
        assert!(verify_tiling(&t, &avc, &[]).passed());
        let l = pp("cube", Chirality::Left).unwrap();
        assert!(isomorphic(&l, &t.mirror(), MirrorPolicy::Oriented));
        assert_eq!(pp("tetrahedron", Chirality::Right).unwrap().face_count(), 12);
    }

    #[test]
    fn earth_map_small() {
        let t = earth_map(12).unwrap();
        assert!(verify_tiling(&t, &emt_avc(12, 2).unwrap(), &[]).passed());
        assert!(earth_map(10).is_err());
    }

    #[test]
    fn patch_boundaries() {
        let words = ["AaaAaAaaAaaAaAaa", "AaaAaaAAaaaAaaAAaa", "AaaAaAaaAaaaAAaa", "AaaAaAaAaaaAaAaa"];
        for (i, w) in words.iter().enumerate() {
            let p = patch(i).unwrap();
            assert_eq!(p.face_count, 6);
            let got = boundary_word(&p);
            assert_eq!(got.len(), w.len(), "patch {i}");
            let doubled = format!("{got}{got}");
            let rev: String = w.chars().rev().collect();
            assert!(doubled.contains(w) || doubled.contains(&rev), "patch {i}: {got}");
        }
    }
}
