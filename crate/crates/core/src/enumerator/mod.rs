//! Exhaustive search for closed tilings realizing an AVC.
//!
//! The search glues tiles (or fixed multi-tile pieces) one edge at a time,
//! always deciding the open half-edge with the fewest feasible completions.
//! Vertex fans are checked against the AVC as they grow, so forced corners
//! propagate exactly like adjacent-angle deductions. Finished maps are
//! validated, checked against the AVC and deduplicated by canonical code.

mod engine;
mod piece;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::avc::{arrangements_of, check_consistency, Arrangement, Avc, ConsistencyIssue};
use crate::label::{Label, LabelMultiset};
use crate::map::{canonical_form, validate, CanonicalCode, MirrorPolicy, Tiling, ValidationReport};

use engine::{pack, Counters, Move, PreparedPiece, Rules, State};
pub use piece::Piece;

#[derive(Debug, thiserror::Error)]
pub enum EnumError {
    #[error("inconsistent AVC: {0}")]
    Inconsistent(ConsistencyIssue),
    #[error("no arrangement given")]
    NoArrangement,
    #[error("arrangement {0} does not match the tile {1}")]
    ArrangementMismatch(String, String),
    #[error("vertex census does not fit a sphere map: {0}")]
    BadCensus(String),
    #[error("seed vertex type {0} is not in the AVC")]
    BadSeed(String),
    #[error("search supports at most 64 tiles, got {0}")]
    TooManyTiles(usize),
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

/// Which vertex the search starts from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum SeedRule {
    /// The rarest vertex type, preferring higher degree.
    #[default]
    Auto,
    /// Start from a vertex of this type.
    VertexType(LabelMultiset),
    /// Start from every placement of every piece, without a vertex seed.
    AnyPiece,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// One run per arrangement; results are united.
    pub arrangements: Vec<Arrangement>,
    pub mirror_policy: MirrorPolicy,
    pub seed: SeedRule,
    /// Stop after this many classes (the result is then not exhaustive).
    pub solution_cap: Option<usize>,
    /// Worker threads.
    pub jobs: usize,
    /// Reject two tiles sharing more than this many edges.
    pub max_shared_edges: Option<usize>,
}

impl SearchConfig {
    pub fn new(arrangements: Vec<Arrangement>) -> Self {
        SearchConfig {
            arrangements,
            mirror_policy: MirrorPolicy::Oriented,
            seed: SeedRule::Auto,
            solution_cap: None,
            jobs: 1,
            max_shared_edges: None,
        }
    }

    /// All arrangements of the AVC's tile.
    pub fn all_arrangements(avc: &Avc) -> Self {
        SearchConfig::new(arrangements_of(&avc.tile))
    }

    pub fn with_policy(mut self, policy: MirrorPolicy) -> Self {
        self.mirror_policy = policy;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn with_seed(mut self, seed: SeedRule) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub dead_ends: u64,
    /// Moves taken without branching because only one option remained.
    pub propagation_steps: u64,
    pub wall_time: Duration,
    /// Closed tilings reached, before deduplication.
    pub solutions: u64,
}

impl SearchStats {
    fn absorb(&mut self, c: &Counters) {
        self.nodes += c.nodes;
        self.dead_ends += c.dead_ends;
        self.propagation_steps += c.forced_moves;
        self.solutions += c.solutions;
    }

    fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.dead_ends += other.dead_ends;
        self.propagation_steps += other.propagation_steps;
        self.solutions += other.solutions;
        self.wall_time += other.wall_time;
    }
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nodes {} dead_ends {} propagation_steps {} solutions {} wall_time {:.3}s",
            self.nodes,
            self.dead_ends,
            self.propagation_steps,
            self.solutions,
            self.wall_time.as_secs_f64()
        )
    }
}

/// Distinct tilings keyed by canonical code, with search statistics.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub policy: MirrorPolicy,
    pub tilings: BTreeMap<CanonicalCode, Tiling>,
    /// Classes found by each arrangement run, in run order.
    pub per_arrangement: Vec<(Arrangement, usize)>,
    pub stats: SearchStats,
    /// False when the solution cap cut the search short.
    pub exhaustive: bool,
}

impl SearchResult {
    pub fn len(&self) -> usize {
        self.tilings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tilings.is_empty()
    }

    pub fn codes(&self) -> BTreeSet<CanonicalCode> {
        self.tilings.keys().cloned().collect()
    }

    /// Number of classes after forgetting corner labels.
    pub fn unlabeled_classes(&self) -> usize {
        self.tilings
            .values()
            .map(|t| crate::map::canonical_code(&t.unlabeled(), self.policy))
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// A generic search problem over pieces.
pub(crate) struct Problem {
    pub rules: Rules,
    pub seeds: Vec<Seed>,
    pub policy: MirrorPolicy,
    pub cap: Option<usize>,
    pub jobs: usize,
    pub face_degree: Option<usize>,
    /// Expected vertex census of a finished map, by packed type.
    pub census: Vec<(LabelMultiset, usize)>,
}

#[derive(Clone, Debug)]
pub(crate) struct Seed {
    pub piece: usize,
    /// Local half-edge whose vertex is forced to a type.
    pub forced: Option<(usize, u16)>,
}

/// Splits a piece and its mirror into placement variants with their
/// distinct roots.
fn prepare_variants(piece: &Piece, allow_mirror: bool) -> Vec<PreparedPiece> {
    let roots = piece.distinct_roots(allow_mirror);
    let mut out = Vec::new();
    for mirrored in [false, true] {
        let rs: Vec<usize> = roots
            .iter()
            .filter(|(m, _)| *m == mirrored)
            .map(|&(_, r)| r)
            .collect();
        if rs.is_empty() {
            continue;
        }
        let p = if mirrored { piece.mirror() } else { piece.clone() };
        out.push(PreparedPiece::new(p, rs));
    }
    out
}

pub(crate) fn build_rules(
    pieces: &[Piece],
    allow_mirror: bool,
    vertices: &[(LabelMultiset, usize)],
    tile_limit: usize,
    forbid_adjacent: Vec<(usize, usize)>,
    max_shared_edges: Option<usize>,
) -> Result<Rules, EnumError> {
    if tile_limit > 64 {
        return Err(EnumError::TooManyTiles(tile_limit));
    }
    let prepared = pieces
        .iter()
        .flat_map(|p| prepare_variants(p, allow_mirror))
        .collect();
    Ok(Rules {
        types: vertices.iter().map(|(m, _)| pack(m)).collect(),
        caps: vertices.iter().map(|&(_, c)| c as u32).collect(),
        max_degree: vertices.iter().map(|(m, _)| m.len() as u32).max().unwrap_or(0),
        tile_limit,
        forbid_adjacent,
        pieces: prepared,
        max_shared_edges,
    })
}

/// Seeds forcing one vertex of type `ty` onto every distinct corner
/// labeled `lambda`.
pub(crate) fn vertex_seeds(rules: &Rules, ty: usize, lambda: Label) -> Vec<Seed> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (pi, p) in rules.pieces.iter().enumerate() {
        for h in 0..p.piece.len() {
            if p.piece.corner[h] == lambda && seen.insert(p.piece.rooted_code(h)) {
                out.push(Seed {
                    piece: pi,
                    forced: Some((h, ty as u16)),
                });
            }
        }
    }
    out
}

pub(crate) fn piece_seeds(rules: &Rules) -> Vec<Seed> {
    (0..rules.pieces.len())
        .map(|piece| Seed {
            piece,
            forced: None,
        })
        .collect()
}

/// Default seed type: fewest vertices, then highest degree.
fn auto_seed_type(vertices: &[(LabelMultiset, usize)]) -> usize {
    (0..vertices.len())
        .filter(|&i| vertices[i].1 > 0)
        .min_by_key(|&i| (vertices[i].1, std::cmp::Reverse(vertices[i].0.len()), i))
        .unwrap_or(0)
}

/// Label of the seed type that is rarest among the tile corners.
fn seed_label(ty: &LabelMultiset, tile: &[Label]) -> Label {
    ty.iter()
        .min_by_key(|l| (tile.iter().filter(|x| *x == l).count(), *l))
        .expect("vertex type is nonempty")
}

struct Shared {
    found: Mutex<BTreeMap<CanonicalCode, Tiling>>,
    count: AtomicUsize,
    stop: AtomicBool,
    failure: Mutex<Option<String>>,
}

type Path = Vec<(u32, Move)>;

struct Worker<'a> {
    problem: &'a Problem,
    shared: &'a Shared,
    counters: Counters,
    local: BTreeMap<CanonicalCode, Tiling>,
    scratch: Vec<Vec<Move>>,
}

enum Choice {
    Solved,
    Dead,
    Branch(u32, Vec<Move>),
}

impl<'a> Worker<'a> {
    fn new(problem: &'a Problem, shared: &'a Shared) -> Self {
        Worker {
            problem,
            shared,
            counters: Counters::default(),
            local: BTreeMap::new(),
            scratch: Vec::new(),
        }
    }

    /// Starts a seed and replays a decision path; `None` if it fails.
    fn start<'r>(&mut self, rules: &'r Rules, seed: &Seed, path: &Path) -> Option<State<'r>> {
        let mut st = State::new(rules);
        let base = st.place(seed.piece)?;
        if let Some((h, ty)) = seed.forced {
            let h = base + h as u32;
            st.force_chain_type(h, ty);
            let c = st.chain_of[h as usize] as usize;
            if let Some(closed) = st.chains[c].closed {
                if closed != ty {
                    return None;
                }
            }
        }
        for &(h, m) in path {
            if !st.apply(h, m) {
                return None;
            }
        }
        Some(st)
    }

    fn recycle(&mut self, mut v: Vec<Move>) {
        if self.scratch.len() < 256 {
            v.clear();
            self.scratch.push(v);
        }
    }

    fn choose(&mut self, st: &State) -> Choice {
        if st.complete() {
            return if st.tiles == st.rules.tile_limit {
                Choice::Solved
            } else {
                Choice::Dead
            };
        }
        let mut best: Option<(u32, Vec<Move>)> = None;
        let mut buf = self.scratch.pop().unwrap_or_default();
        for h in st.open_half_edges() {
            let limit = best.as_ref().map_or(usize::MAX - 1, |(_, m)| m.len() - 1);
            st.moves(h, limit, &mut buf);
            if buf.len() <= limit {
                if buf.is_empty() {
                    self.recycle(buf);
                    return Choice::Dead;
                }
                let done = buf.len() == 1;
                let old = best.replace((h, std::mem::take(&mut buf)));
                if let Some((_, v)) = old {
                    buf = v;
                }
                if done {
                    break;
                }
            }
        }
        self.recycle(buf);
        let (h, moves) = best.expect("open half-edge exists");
        Choice::Branch(h, moves)
    }

    fn record(&mut self, st: &State) {
        self.counters.solutions += 1;
        match self.finish(st) {
            Ok((code, t)) => {
                if !self.local.contains_key(&code) && !self.shared.stop.load(Ordering::Relaxed) {
                    let n = self.shared.count.fetch_add(1, Ordering::Relaxed) + 1;
                    self.local.insert(code, t);
                    if let Some(cap) = self.problem.cap {
                        if n >= cap {
                            self.shared.stop.store(true, Ordering::Relaxed);
                        }
                    }
                }
            }
            Err(msg) => {
                *self.shared.failure.lock().unwrap() = Some(msg);
                self.shared.stop.store(true, Ordering::Relaxed);
            }
        }
    }

    fn finish(&self, st: &State) -> Result<(CanonicalCode, Tiling), String> {
        let twin = st.twin.iter().map(|&x| x as usize).collect();
        let next = st.next.iter().map(|&x| x as usize).collect();
        let t = Tiling::from_permutations(twin, next, st.corner.clone()).map_err(|e| e.to_string())?;
        let report = validate(&t, self.problem.face_degree);
        if !report.is_valid() {
            return Err(format!("search produced an invalid map: {report}"));
        }
        let census = t.census();
        for (m, c) in &self.problem.census {
            if census.get(m) != *c {
                return Err(format!("search produced census {census}"));
            }
        }
        if census.vertex_count() != self.problem.census.iter().map(|x| x.1).sum::<usize>() {
            return Err(format!("search produced census {census}"));
        }
        Ok(canonical_form(&t, self.problem.policy))
    }

    fn dfs(&mut self, st: &mut State) {
        if self.shared.stop.load(Ordering::Relaxed) {
            return;
        }
        self.counters.nodes += 1;
        match self.choose(st) {
            Choice::Solved => self.record(st),
            Choice::Dead => self.counters.dead_ends += 1,
            Choice::Branch(h, moves) => {
                if moves.len() == 1 {
                    self.counters.forced_moves += 1;
                }
                for &m in &moves {
                    let mark = st.mark();
                    if st.apply(h, m) {
                        self.dfs(st);
                    } else {
                        self.counters.dead_ends += 1;
                    }
                    st.undo_to(mark);
                }
                self.recycle(moves);
            }
        }
    }

    /// Collects decision paths `depth` levels below the seed.
    fn frontier(&mut self, st: &mut State, path: &mut Path, depth: usize, out: &mut Vec<Path>) {
        if depth == 0 {
            out.push(path.clone());
            return;
        }
        match self.choose(st) {
            Choice::Solved | Choice::Dead => out.push(path.clone()),
            Choice::Branch(h, moves) => {
                for &m in &moves {
                    let mark = st.mark();
                    if st.apply(h, m) {
                        path.push((h, m));
                        self.frontier(st, path, depth - 1, out);
                        path.pop();
                    }
                    st.undo_to(mark);
                }
            }
        }
    }
}

/// Runs a problem, exploring subtrees on `jobs` threads.
pub(crate) fn run(problem: &Problem) -> Result<(BTreeMap<CanonicalCode, Tiling>, SearchStats, bool), EnumError> {
    let started = Instant::now();
    let shared = Shared {
        found: Mutex::new(BTreeMap::new()),
        count: AtomicUsize::new(0),
        stop: AtomicBool::new(false),
        failure: Mutex::new(None),
    };
    let mut stats = SearchStats::default();
    let mut tasks: Vec<(usize, Path)> = Vec::new();
    if problem.jobs <= 1 {
        tasks.extend((0..problem.seeds.len()).map(|i| (i, Vec::new())));
    } else {
        // Deepen until there are enough independent subtrees.
        let want = 16 * problem.jobs;
        let mut depth = 0;
        loop {
            let mut found = Vec::new();
            let mut w = Worker::new(problem, &shared);
            for (i, seed) in problem.seeds.iter().enumerate() {
                if let Some(mut st) = w.start(&problem.rules, seed, &Vec::new()) {
                    let mut paths = Vec::new();
                    w.frontier(&mut st, &mut Vec::new(), depth, &mut paths);
                    found.extend(paths.into_iter().map(|p| (i, p)));
                }
            }
            let grew = found.len() > tasks.len();
            tasks = found;
            if tasks.len() >= want || !grew || depth >= 12 {
                break;
            }
            depth += 1;
        }
    }
    let run_task = |(i, path): &(usize, Path)| -> SearchStats {
        let mut w = Worker::new(problem, &shared);
        if let Some(mut st) = w.start(&problem.rules, &problem.seeds[*i], path) {
            w.dfs(&mut st);
        } else {
            w.counters.dead_ends += 1;
        }
        let mut found = shared.found.lock().unwrap();
        for (k, v) in std::mem::take(&mut w.local) {
            found.entry(k).or_insert(v);
        }
        let mut s = SearchStats::default();
        s.absorb(&w.counters);
        s
    };
    let parts: Vec<SearchStats> = if problem.jobs <= 1 {
        tasks.iter().map(run_task).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(problem.jobs)
            .build()
            .map_err(|e| EnumError::Internal(e.to_string()))?;
        pool.install(|| tasks.par_iter().map(run_task).collect())
    };
    for p in &parts {
        stats.merge(p);
    }
    stats.wall_time = started.elapsed();
    if let Some(msg) = shared.failure.into_inner().unwrap() {
        return Err(EnumError::Internal(msg));
    }
    let exhaustive = !shared.stop.load(Ordering::Relaxed);
    let mut found = shared.found.into_inner().unwrap();
    if let Some(cap) = problem.cap {
        while found.len() > cap {
            found.pop_last();
        }
    }
    Ok((found, stats, exhaustive))
}

/// Finds every tiling realizing `avc` with one of the configured tile
/// arrangements, one representative per class under the mirror policy.
pub fn enumerate_tilings(avc: &Avc, config: &SearchConfig) -> Result<SearchResult, EnumError> {
    if let Some(issue) = check_consistency(avc).into_iter().next() {
        return Err(EnumError::Inconsistent(issue));
    }
    if config.arrangements.is_empty() {
        return Err(EnumError::NoArrangement);
    }
    let tile_set = avc.tile_multiset();
    for a in &config.arrangements {
        if a.multiset() != tile_set {
            return Err(EnumError::ArrangementMismatch(a.letters(), tile_set.to_letters()));
        }
    }
    let seed_ty = match &config.seed {
        SeedRule::Auto => Some(auto_seed_type(&avc.vertices)),
        SeedRule::VertexType(m) => Some(
            avc.vertices
                .iter()
                .position(|(v, c)| v == m && *c > 0)
                .ok_or_else(|| EnumError::BadSeed(m.to_letters()))?,
        ),
        SeedRule::AnyPiece => None,
    };
    let mut result = SearchResult {
        policy: config.mirror_policy,
        tilings: BTreeMap::new(),
        per_arrangement: Vec::new(),
        stats: SearchStats::default(),
        exhaustive: true,
    };
    for arr in &config.arrangements {
        let piece = Piece::tile(arr.cycle());
        let rules = build_rules(
            &[piece],
            true,
            &avc.vertices,
            avc.tile_count,
            Vec::new(),
            config.max_shared_edges,
        )?;
        let seeds = match seed_ty {
            Some(ty) => {
                let lambda = seed_label(&avc.vertices[ty].0, arr.cycle());
                vertex_seeds(&rules, ty, lambda)
            }
            None => piece_seeds(&rules),
        };
        let problem = Problem {
            rules,
            seeds,
            policy: config.mirror_policy,
            cap: config
                .solution_cap
                .map(|c| c.saturating_sub(result.tilings.len())),
            jobs: config.jobs,
            face_degree: Some(avc.face_degree()),
            census: avc.vertices.clone(),
        };
        let (found, stats, exhaustive) = if problem.cap == Some(0) {
            (BTreeMap::new(), SearchStats::default(), false)
        } else {
            run(&problem)?
        };
        result.per_arrangement.push((arr.clone(), found.len()));
        result.stats.merge(&stats);
        result.exhaustive &= exhaustive;
        for (k, v) in found {
            result.tilings.entry(k).or_insert(v);
        }
    }
    Ok(result)
}

/// Finds every closed tiling assembled from copies of `pieces` (each used
/// any number of times, in either orientation when `allow_mirror`) with
/// exactly the given vertex census.
pub fn enumerate_piece_tilings(
    pieces: &[Piece],
    allow_mirror: bool,
    vertices: &[(LabelMultiset, usize)],
    tile_count: usize,
    policy: MirrorPolicy,
    jobs: usize,
) -> Result<SearchResult, EnumError> {
    let rules = build_rules(pieces, allow_mirror, vertices, tile_count, Vec::new(), None)?;
    let seeds = piece_seeds(&rules);
    let face_degree = uniform_degree(pieces);
    let problem = Problem {
        rules,
        seeds,
        policy,
        cap: None,
        jobs,
        face_degree,
        census: vertices.to_vec(),
    };
    let (tilings, stats, exhaustive) = run(&problem)?;
    Ok(SearchResult {
        policy,
        tilings,
        per_arrangement: Vec::new(),
        stats,
        exhaustive,
    })
}

fn uniform_degree(pieces: &[Piece]) -> Option<usize> {
    let mut degrees = BTreeSet::new();
    for p in pieces {
        let mut sizes = vec![0; p.face_count];
        for &f in &p.face_of {
            sizes[f] += 1;
        }
        degrees.extend(sizes);
    }
    (degrees.len() == 1).then(|| *degrees.iter().next().unwrap())
}

/// Sphere maps with all faces of degree 4 and the given `(degree, count)`
/// vertex census, optionally with no edge joining two vertices of degree
/// `forbid_adjacent_degree`.
pub fn enumerate_quad_substrates(
    face_count: usize,
    degree_census: &[(usize, usize)],
    forbid_adjacent_degree: Option<usize>,
    policy: MirrorPolicy,
    jobs: usize,
) -> Result<SearchResult, EnumError> {
    let v: usize = degree_census.iter().map(|x| x.1).sum();
    let deg_sum: usize = degree_census.iter().map(|(d, c)| d * c).sum();
    if deg_sum != 4 * face_count {
        return Err(EnumError::BadCensus(format!(
            "degree sum {deg_sum} differs from 2E = {}",
            4 * face_count
        )));
    }
    if v != face_count + 2 {
        return Err(EnumError::BadCensus(format!(
            "{v} vertices, Euler needs {}",
            face_count + 2
        )));
    }
    if degree_census.iter().any(|&(d, _)| d < 2) {
        return Err(EnumError::BadCensus("vertex degree below 2".into()));
    }
    let a = Label::ALPHA;
    let mut vertices: Vec<(LabelMultiset, usize)> = Vec::new();
    for &(d, c) in degree_census {
        let mut m = LabelMultiset::new();
        m.add(a, d);
        match vertices.iter_mut().find(|(x, _)| *x == m) {
            Some(e) => e.1 += c,
            None => vertices.push((m, c)),
        }
    }
    let forbid = match forbid_adjacent_degree {
        Some(d) => match vertices.iter().position(|(m, _)| m.len() == d) {
            Some(i) => vec![(i, i)],
            None => Vec::new(),
        },
        None => Vec::new(),
    };
    let rules = build_rules(&[Piece::tile(&[a; 4])], false, &vertices, face_count, forbid, None)?;
    let ty = auto_seed_type(&vertices);
    let seeds = vertex_seeds(&rules, ty, a);
    let problem = Problem {
        rules,
        seeds,
        policy,
        cap: None,
        jobs,
        face_degree: Some(4),
        census: vertices,
    };
    let (tilings, stats, exhaustive) = run(&problem)?;
    Ok(SearchResult {
        policy,
        tilings,
        per_arrangement: Vec::new(),
        stats,
        exhaustive,
    })
}

/// Why a tiling fails to realize an AVC.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    Invalid(ValidationReport),
    TileCount { expected: usize, actual: usize },
    /// No single allowed arrangement fits every face; names the first
    /// face that breaks the best candidate.
    Arrangement { face: usize, word: String },
    /// A vertex whose corners are not an AVC vertex type.
    UnknownVertex { vertex: usize, labels: String },
    Count { labels: String, expected: usize, actual: usize },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::Invalid(r) => write!(f, "invalid map: {r}"),
            VerifyFailure::TileCount { expected, actual } => {
                write!(f, "tile count {actual}, expected {expected}")
            }
            VerifyFailure::Arrangement { face, word } => {
                write!(f, "face {face} has corner word {word} outside the arrangement")
            }
            VerifyFailure::UnknownVertex { vertex, labels } => {
                write!(f, "vertex {vertex} has corners {labels}, not a vertex type")
            }
            VerifyFailure::Count {
                labels,
                expected,
                actual,
            } => write!(f, "vertex type {labels} occurs {actual} times, expected {expected}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub failures: Vec<VerifyFailure>,
    /// The arrangement every face realizes, when one does.
    pub arrangement: Option<Arrangement>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failures.first() {
            None => write!(f, "pass"),
            Some(x) => write!(f, "fail: {x}"),
        }
    }
}

/// Checks `t` against `avc`: a valid sphere map with the right tile count,
/// every face realizing the same allowed arrangement (any arrangement of
/// the tile when `arrangements` is empty) and the exact vertex census.
pub fn verify_tiling(t: &Tiling, avc: &Avc, arrangements: &[Arrangement]) -> VerifyReport {
    let mut report = VerifyReport::default();
    let v = validate(t, Some(avc.face_degree()));
    if !v.is_valid() {
        report.failures.push(VerifyFailure::Invalid(v));
        return report;
    }
    if t.face_count() != avc.tile_count {
        report.failures.push(VerifyFailure::TileCount {
            expected: avc.tile_count,
            actual: t.face_count(),
        });
    }
    let words = t.face_words();
    let candidates: Vec<Arrangement> = if arrangements.is_empty() {
        arrangements_of(&avc.tile)
    } else {
        arrangements.to_vec()
    };
    let mut worst: Option<(usize, usize)> = None;
    for a in &candidates {
        match words.iter().position(|w| !a.accepts(w)) {
            None => {
                report.arrangement = Some(a.clone());
                worst = None;
                break;
            }
            Some(i) => {
                if worst.is_none_or(|(j, _)| i > j) {
                    worst = Some((i, i));
                }
            }
        }
    }
    if report.arrangement.is_none() {
        let face = worst.map_or(0, |w| w.0);
        report.failures.push(VerifyFailure::Arrangement {
            face,
            word: crate::label::word_letters(&words[face]),
        });
    }
    let labels = t.vertex_labels();
    if let Some((vertex, m)) = labels
        .iter()
        .enumerate()
        .find(|(_, m)| !avc.vertices.iter().any(|(x, _)| x == *m))
    {
        report.failures.push(VerifyFailure::UnknownVertex {
            vertex,
            labels: m.to_letters(),
        });
    }
    let census = t.census();
    for (m, c) in &avc.vertices {
        let actual = census.get(m);
        if actual != *c {
            report.failures.push(VerifyFailure::Count {
                labels: m.to_letters(),
                expected: *c,
                actual,
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avc::{named_avc, parse_avc};

    #[test]
    fn cube_is_the_only_trivalent_quad_map_with_six_faces() {
        let r = enumerate_quad_substrates(6, &[(3, 8)], None, MirrorPolicy::Unoriented, 1).unwrap();
        assert_eq!(r.len(), 1);
        let t = r.tilings.values().next().unwrap();
        assert_eq!(t.vertex_count(), 8);
    }

    #[test]
    fn dodecahedron_is_the_only_all_alpha_pentagon_map_of_twelve() {
        let avc = parse_avc("12 aaaaa : 20 a^3").unwrap();
        let r = enumerate_tilings(&avc, &SearchConfig::all_arrangements(&avc)).unwrap();
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn bad_census_is_rejected() {
        assert!(enumerate_quad_substrates(6, &[(3, 7)], None, MirrorPolicy::Oriented, 1).is_err());
    }

    #[test]
    fn octahedral_subdivision_found() {
        let avc = named_avc("5A24").unwrap();
        let arr = crate::avc::named_arrangement("abcde-separated").unwrap();
        let r = enumerate_tilings(&avc, &SearchConfig::new(vec![arr.clone()])).unwrap();
        // A chiral pair when orientation matters.
        assert_eq!(r.len(), 2);
        let cfg = SearchConfig::new(vec![arr]).with_policy(MirrorPolicy::Unoriented);
        let r = enumerate_tilings(&avc, &cfg).unwrap();
        assert_eq!(r.len(), 1);
        let t = r.tilings.values().next().unwrap();
        assert!(verify_tiling(t, &avc, &[]).passed());
    }
}
