//! Backtracking state for growing a sphere map piece by piece.
//!
//! Vertices of the partial map are σ-runs of corners ("chains"). Every open
//! half-edge `h` ends the chain at its origin and precedes the chain that
//! starts at `next(h)`. Branching always decides the twin of one open
//! half-edge: another open half-edge on the same boundary cycle, or a new
//! piece. Gluing across boundary cycles would add a handle and is never
//! tried. All mutations are recorded on a trail and undone in LIFO order.

use crate::enumerator::piece::Piece;
use crate::label::{Label, LabelMultiset};

pub(crate) const NONE: u32 = u32::MAX;
const HIGH_BITS: u64 = 0x8080_8080_8080_8080;

/// Label multiset packed one byte per label.
pub(crate) type Packed = u64;

pub(crate) fn pack(m: &LabelMultiset) -> Packed {
    let mut x = 0u64;
    for (i, &c) in m.counts().iter().enumerate() {
        x |= (c as u64) << (8 * i);
    }
    x
}

pub(crate) fn pack_label(l: Label) -> Packed {
    1u64 << (8 * l.index())
}

/// Bytewise `a <= b`, valid while every count is below 128.
#[inline]
fn subset(a: Packed, b: Packed) -> bool {
    ((b | HIGH_BITS) - a) & HIGH_BITS == HIGH_BITS
}

/// Vertex constraint and tile budget shared by all search nodes.
#[derive(Clone, Debug)]
pub(crate) struct Rules {
    pub types: Vec<Packed>,
    pub caps: Vec<u32>,
    pub max_degree: u32,
    pub tile_limit: usize,
    /// Pairs of vertex type indices that may not be joined by an edge.
    pub forbid_adjacent: Vec<(usize, usize)>,
    /// Pieces with their distinct placement roots.
    pub pieces: Vec<PreparedPiece>,
    pub max_shared_edges: Option<usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct PreparedPiece {
    pub piece: Piece,
    pub chains: Vec<PreparedChain>,
    /// Chain index of every local half-edge.
    pub chain_of: Vec<usize>,
    pub roots: Vec<usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct PreparedChain {
    pub start: usize,
    pub end: usize,
    pub labels: Packed,
    pub tiles: u64,
    pub len: u32,
    pub closed: bool,
}

impl PreparedPiece {
    pub fn new(piece: Piece, roots: Vec<usize>) -> PreparedPiece {
        let local = piece.chains();
        let mut chain_of = vec![0; piece.len()];
        let mut chains = Vec::new();
        for (ci, c) in local.iter().enumerate() {
            let mut labels = 0;
            let mut tiles = 0u64;
            for &h in &c.corners {
                chain_of[h] = ci;
                labels += pack_label(piece.corner[h]);
                tiles |= 1 << piece.face_of[h];
            }
            chains.push(PreparedChain {
                start: c.corners[0],
                end: *c.corners.last().unwrap(),
                labels,
                tiles,
                len: c.corners.len() as u32,
                closed: c.closed,
            });
        }
        PreparedPiece {
            piece,
            chains,
            chain_of,
            roots,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Chain {
    pub start: u32,
    pub end: u32,
    pub labels: Packed,
    pub tiles: u64,
    pub len: u32,
    /// Vertex type index once closed.
    pub closed: Option<u16>,
    /// Restricts the chain to one vertex type (seed vertex).
    pub forced: Option<u16>,
}

#[derive(Clone, Debug)]
enum Undo {
    Piece {
        half_edges: usize,
        chains: usize,
        tiles: usize,
    },
    Glue(u32, u32),
    Merge {
        keep: u32,
        gone: u32,
        old: Chain,
    },
    Close {
        chain: u32,
        ty: u16,
    },
}

/// One branching alternative for an open half-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Move {
    Glue(u32),
    Place { piece: u16, root: u16 },
}

#[derive(Clone, Debug, Default)]
pub struct Counters {
    pub nodes: u64,
    pub dead_ends: u64,
    pub forced_moves: u64,
    pub solutions: u64,
}

#[derive(Clone)]
pub(crate) struct State<'r> {
    pub rules: &'r Rules,
    pub next: Vec<u32>,
    pub twin: Vec<u32>,
    pub corner: Vec<Label>,
    pub tile_of: Vec<u32>,
    pub chain_of: Vec<u32>,
    pub chains: Vec<Chain>,
    pub closed_count: Vec<u32>,
    pub open: usize,
    pub tiles: usize,
    trail: Vec<Undo>,
}

impl<'r> State<'r> {
    pub fn new(rules: &'r Rules) -> Self {
        State {
            rules,
            next: Vec::new(),
            twin: Vec::new(),
            corner: Vec::new(),
            tile_of: Vec::new(),
            chain_of: Vec::new(),
            chains: Vec::new(),
            closed_count: vec![0; rules.types.len()],
            open: 0,
            tiles: 0,
            trail: Vec::new(),
        }
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Piece {
                    half_edges,
                    chains,
                    tiles,
                } => {
                    self.open -= self.twin[half_edges..]
                        .iter()
                        .filter(|&&t| t == NONE)
                        .count();
                    self.next.truncate(half_edges);
                    self.twin.truncate(half_edges);
                    self.corner.truncate(half_edges);
                    self.tile_of.truncate(half_edges);
                    self.chain_of.truncate(half_edges);
                    self.chains.truncate(chains);
                    self.tiles = tiles;
                }
                Undo::Glue(h, k) => {
                    self.twin[h as usize] = NONE;
                    self.twin[k as usize] = NONE;
                    self.open += 2;
                }
                Undo::Merge { keep, gone, old } => {
                    self.chains[keep as usize] = old;
                    let g = self.chains[gone as usize];
                    let mut h = g.start;
                    loop {
                        self.chain_of[h as usize] = gone;
                        if h == g.end {
                            break;
                        }
                        h = self.sigma(h);
                    }
                }
                Undo::Close { chain, ty } => {
                    self.chains[chain as usize].closed = None;
                    self.closed_count[ty as usize] -= 1;
                }
            }
        }
    }

    #[inline]
    fn sigma(&self, h: u32) -> u32 {
        self.next[self.twin[h as usize] as usize]
    }

    /// Type index the chain can still become, if any: a type with spare
    /// capacity containing the labels.
    #[inline]
    fn fits(&self, labels: Packed, forced: Option<u16>) -> bool {
        match forced {
            Some(t) => {
                let t = t as usize;
                self.closed_count[t] < self.rules.caps[t] && subset(labels, self.rules.types[t])
            }
            None => self
                .rules
                .types
                .iter()
                .zip(&self.rules.caps)
                .zip(&self.closed_count)
                .any(|((&ty, &cap), &c)| c < cap && subset(labels, ty)),
        }
    }

    #[inline]
    fn closing_type(&self, labels: Packed, forced: Option<u16>) -> Option<usize> {
        (0..self.rules.types.len()).find(|&t| {
            self.rules.types[t] == labels
                && self.closed_count[t] < self.rules.caps[t]
                && forced.is_none_or(|f| f as usize == t)
        })
    }

    /// Adds a piece, returning the id offset of its half-edges, or `None`
    /// when an interior vertex has no capacity left. On `None` the caller
    /// must undo to its mark.
    pub fn place(&mut self, piece_index: usize) -> Option<u32> {
        let rules = self.rules;
        let p = &rules.pieces[piece_index];
        let base = self.next.len() as u32;
        let chain_base = self.chains.len() as u32;
        self.trail.push(Undo::Piece {
            half_edges: base as usize,
            chains: chain_base as usize,
            tiles: self.tiles,
        });
        let tile_base = self.tiles as u32;
        for h in 0..p.piece.len() {
            self.next.push(base + p.piece.next[h] as u32);
            self.twin.push(p.piece.twin[h].map_or(NONE, |t| base + t as u32));
            self.corner.push(p.piece.corner[h]);
            self.tile_of.push(tile_base + p.piece.face_of[h] as u32);
            self.chain_of.push(chain_base + p.chain_of[h] as u32);
            if p.piece.twin[h].is_none() {
                self.open += 1;
            }
        }
        self.tiles += p.piece.face_count;
        let mut ok = true;
        for (ci, c) in p.chains.iter().enumerate() {
            self.chains.push(Chain {
                start: base + c.start as u32,
                end: base + c.end as u32,
                labels: c.labels,
                tiles: c.tiles << tile_base,
                len: c.len,
                closed: None,
                forced: None,
            });
            if c.closed && ok {
                let id = chain_base + ci as u32;
                ok = self.close(id);
            }
        }
        ok.then_some(base)
    }

    fn close(&mut self, chain: u32) -> bool {
        let c = self.chains[chain as usize];
        let Some(ty) = self.closing_type(c.labels, c.forced) else {
            return false;
        };
        if !self.rules.forbid_adjacent.is_empty() && !self.adjacency_ok(chain, ty) {
            return false;
        }
        self.chains[chain as usize].closed = Some(ty as u16);
        self.closed_count[ty] += 1;
        self.trail.push(Undo::Close {
            chain,
            ty: ty as u16,
        });
        true
    }

    fn adjacency_ok(&self, chain: u32, ty: usize) -> bool {
        let c = self.chains[chain as usize];
        let mut h = c.start;
        loop {
            let other = self.chain_of[self.next[h as usize] as usize];
            if let Some(oty) = self.chains[other as usize].closed {
                let oty = oty as usize;
                if self
                    .rules
                    .forbid_adjacent
                    .iter()
                    .any(|&(a, b)| (a == ty && b == oty) || (a == oty && b == ty))
                {
                    return false;
                }
            }
            // The twin side also ends at a neighbour; the σ walk covers it.
            h = self.sigma(h);
            if h == c.start {
                break;
            }
        }
        true
    }

    /// Joins chain `x` followed by chain `y` (the gluing already done).
    fn join(&mut self, x: u32, y: u32) -> bool {
        if x == y {
            return self.close(x);
        }
        let cx = self.chains[x as usize];
        let cy = self.chains[y as usize];
        if cx.tiles & cy.tiles != 0 {
            return false;
        }
        let len = cx.len + cy.len;
        if len > self.rules.max_degree {
            return false;
        }
        let labels = cx.labels + cy.labels;
        let forced = match (cx.forced, cy.forced) {
            (Some(a), Some(b)) if a != b => return false,
            (a, b) => a.or(b),
        };
        if !self.fits(labels, forced) {
            return false;
        }
        let (keep, gone) = if cx.len >= cy.len { (x, y) } else { (y, x) };
        let old = self.chains[keep as usize];
        self.trail.push(Undo::Merge { keep, gone, old });
        let merged = Chain {
            start: cx.start,
            end: cy.end,
            labels,
            tiles: cx.tiles | cy.tiles,
            len,
            closed: None,
            forced,
        };
        self.chains[keep as usize] = merged;
        let g = self.chains[gone as usize];
        let mut h = g.start;
        loop {
            self.chain_of[h as usize] = keep;
            if h == g.end {
                break;
            }
            h = self.sigma(h);
        }
        true
    }

    /// Sets `twin(h) = k` and joins the affected chains. On `false` the
    /// caller must undo to its mark.
    pub fn glue(&mut self, h: u32, k: u32) -> bool {
        debug_assert!(self.twin[h as usize] == NONE && self.twin[k as usize] == NONE);
        if h == k {
            return false;
        }
        self.twin[h as usize] = k;
        self.twin[k as usize] = h;
        self.open -= 2;
        self.trail.push(Undo::Glue(h, k));
        let x1 = self.chain_of[h as usize];
        let y1 = self.chain_of[self.next[k as usize] as usize];
        if !self.join(x1, y1) {
            return false;
        }
        let x2 = self.chain_of[k as usize];
        let y2 = self.chain_of[self.next[h as usize] as usize];
        if !self.join(x2, y2) {
            return false;
        }
        if let Some(limit) = self.rules.max_shared_edges {
            if self.shared_edges(h) > limit {
                return false;
            }
        }
        true
    }

    fn shared_edges(&self, h: u32) -> usize {
        let a = self.tile_of[h as usize];
        let b = self.tile_of[self.twin[h as usize] as usize];
        if a == b {
            return usize::MAX;
        }
        self.twin
            .iter()
            .enumerate()
            .filter(|&(g, &t)| {
                t != NONE && self.tile_of[g] == a && self.tile_of[t as usize] == b
            })
            .count()
    }

    /// Next open half-edge along the boundary.
    #[inline]
    pub fn succ(&self, h: u32) -> u32 {
        self.chains[self.chain_of[self.next[h as usize] as usize] as usize].end
    }

    /// Cheap feasibility test for `twin(h) = k` without mutating.
    fn glue_possible(&self, h: u32, k: u32) -> bool {
        let x1 = self.chain_of[h as usize];
        let y1 = self.chain_of[self.next[k as usize] as usize];
        let x2 = self.chain_of[k as usize];
        let y2 = self.chain_of[self.next[h as usize] as usize];
        if x1 == x2 || x1 == y2 || y1 == x2 || y1 == y2 {
            // Overlapping chains; let the full simulation decide.
            return true;
        }
        self.join_possible(x1, y1) && self.join_possible(x2, y2)
    }

    fn join_possible(&self, x: u32, y: u32) -> bool {
        let cx = &self.chains[x as usize];
        if x == y {
            return self.closing_type(cx.labels, cx.forced).is_some();
        }
        let cy = &self.chains[y as usize];
        if cx.tiles & cy.tiles != 0 || cx.len + cy.len > self.rules.max_degree {
            return false;
        }
        let forced = match (cx.forced, cy.forced) {
            (Some(a), Some(b)) if a != b => return false,
            (a, b) => a.or(b),
        };
        self.fits(cx.labels + cy.labels, forced)
    }

    fn place_possible(&self, h: u32, piece: usize, root: usize) -> bool {
        let p = &self.rules.pieces[piece];
        if self.tiles + p.piece.face_count > self.rules.tile_limit {
            return false;
        }
        let a = &self.chains[self.chain_of[h as usize] as usize];
        let b = &self.chains[self.chain_of[self.next[h as usize] as usize] as usize];
        let after = &p.chains[p.chain_of[p.piece.next[root]]];
        let before = &p.chains[p.chain_of[root]];
        if a.len + after.len > self.rules.max_degree || before.len + b.len > self.rules.max_degree
        {
            return false;
        }
        self.fits(a.labels + after.labels, a.forced) && self.fits(before.labels + b.labels, b.forced)
    }

    /// Feasible moves for open half-edge `h`, stopping early once more than
    /// `limit` are found.
    pub fn moves(&self, h: u32, limit: usize, out: &mut Vec<Move>) {
        out.clear();
        let mut k = self.succ(h);
        while k != h {
            if self.glue_possible(h, k) {
                out.push(Move::Glue(k));
                if out.len() > limit {
                    return;
                }
            }
            k = self.succ(k);
        }
        for (pi, p) in self.rules.pieces.iter().enumerate() {
            for &r in &p.roots {
                if self.place_possible(h, pi, r) {
                    out.push(Move::Place {
                        piece: pi as u16,
                        root: r as u16,
                    });
                    if out.len() > limit {
                        return;
                    }
                }
            }
        }
    }

    /// Applies a move at `h`. On `false` the caller must undo to its mark.
    pub fn apply(&mut self, h: u32, m: Move) -> bool {
        match m {
            Move::Glue(k) => self.glue(h, k),
            Move::Place { piece, root } => match self.place(piece as usize) {
                Some(base) => self.glue(h, base + root as u32),
                None => false,
            },
        }
    }

    /// Open half-edges, one per boundary gap.
    pub fn open_half_edges(&self) -> impl Iterator<Item = u32> + '_ {
        self.twin
            .iter()
            .enumerate()
            .filter(|(_, &t)| t == NONE)
            .map(|(h, _)| h as u32)
    }

    pub fn complete(&self) -> bool {
        self.open == 0
    }

    pub fn force_chain_type(&mut self, h: u32, ty: u16) {
        let c = self.chain_of[h as usize] as usize;
        self.chains[c].forced = Some(ty);
    }
}
