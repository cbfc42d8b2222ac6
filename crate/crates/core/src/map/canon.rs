//! Canonical codes, isomorphism and automorphism groups.
//!
//! A code is the lexicographically least breadth-first encoding of
//! `(next, twin, corner)` over all root half-edges, and over both
//! orientations when mirror images are identified.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::Tiling;

/// Whether reflections count as isomorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MirrorPolicy {
    /// Mirror images are distinct.
    Oriented,
    /// Mirror images are identified.
    Unoriented,
}

impl MirrorPolicy {
    pub fn name(self) -> &'static str {
        match self {
            MirrorPolicy::Oriented => "oriented",
            MirrorPolicy::Unoriented => "unoriented",
        }
    }
}

impl std::str::FromStr for MirrorPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "oriented" => Ok(MirrorPolicy::Oriented),
            "unoriented" => Ok(MirrorPolicy::Unoriented),
            other => Err(format!("unknown mirror policy `{other}`")),
        }
    }
}

/// Byte string identifying a tiling up to isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = self.to_hex();
        write!(f, "Code({}…)", &hex[..hex.len().min(16)])
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

/// Scratch space for repeated breadth-first encodings of one map.
struct Encoder<'a> {
    next: &'a [usize],
    twin: &'a [usize],
    label: Vec<u32>,
    new_id: Vec<u32>,
    order: Vec<usize>,
}

const UNSEEN: u32 = u32::MAX;

impl<'a> Encoder<'a> {
    fn new(t: &'a Tiling) -> Self {
        let n = t.half_edge_count();
        Encoder {
            next: t.nexts(),
            twin: t.twins(),
            label: t.corners().iter().map(|l| l.index() as u32).collect(),
            new_id: vec![UNSEEN; n],
            order: Vec::with_capacity(n),
        }
    }

    fn visit(&mut self, h: usize) -> u32 {
        if self.new_id[h] == UNSEEN {
            self.new_id[h] = self.order.len() as u32;
            self.order.push(h);
        }
        self.new_id[h]
    }

    /// Encodes from `root`. With `best` given, stops as soon as the stream
    /// exceeds it and returns `None`; returns `Some(ordering)` where
    /// ordering is `Less` or `Equal` otherwise. `out` receives the stream.
    fn encode(
        &mut self,
        root: usize,
        best: Option<&[u32]>,
        out: &mut Vec<u32>,
    ) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        for &h in &self.order {
            self.new_id[h] = UNSEEN;
        }
        self.order.clear();
        out.clear();
        self.visit(root);
        let mut state = Ordering::Equal;
        let mut i = 0;
        while i < self.order.len() {
            let h = self.order[i];
            let a = self.visit(self.next[h]);
            let b = self.visit(self.twin[h]);
            let c = self.label[h];
            for x in [a, b, c] {
                if state == Ordering::Equal {
                    if let Some(best) = best {
                        match x.cmp(&best[out.len()]) {
                            Ordering::Greater => return None,
                            Ordering::Less => state = Ordering::Less,
                            Ordering::Equal => {}
                        }
                    }
                }
                out.push(x);
            }
            i += 1;
        }
        Some(state)
    }
}

/// Least encoding over all roots of one orientation, plus the roots that
/// attain it.
fn least_encoding(t: &Tiling) -> (Vec<u32>, Vec<usize>) {
    let mut enc = Encoder::new(t);
    let mut best: Vec<u32> = Vec::new();
    let mut roots = Vec::new();
    let mut scratch = Vec::new();
    for root in 0..t.half_edge_count() {
        let cmp = if best.is_empty() {
            enc.encode(root, None, &mut scratch)
                .map(|_| std::cmp::Ordering::Less)
        } else {
            enc.encode(root, Some(&best), &mut scratch)
        };
        match cmp {
            Some(std::cmp::Ordering::Less) => {
                std::mem::swap(&mut best, &mut scratch);
                roots.clear();
                roots.push(root);
            }
            Some(_) => roots.push(root),
            None => {}
        }
    }
    (best, roots)
}

fn to_bytes(stream: &[u32], n: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + stream.len() * 2);
    out.extend_from_slice(&(n as u32).to_be_bytes());
    for chunk in stream.chunks(3) {
        out.extend_from_slice(&(chunk[0] as u16).to_be_bytes());
        out.extend_from_slice(&(chunk[1] as u16).to_be_bytes());
        out.push(chunk[2] as u8);
    }
    out
}

/// Canonical code of `t` under the policy.
pub fn canonical_code(t: &Tiling, policy: MirrorPolicy) -> CanonicalCode {
    let n = t.half_edge_count();
    let (a, _) = least_encoding(t);
    let stream = match policy {
        MirrorPolicy::Oriented => a,
        MirrorPolicy::Unoriented => {
            let (b, _) = least_encoding(&t.mirror());
            a.min(b)
        }
    };
    CanonicalCode(to_bytes(&stream, n))
}

/// Canonical code together with the tiling relabeled into canonical
/// half-edge order, so the representative depends only on the class.
pub fn canonical_form(t: &Tiling, policy: MirrorPolicy) -> (CanonicalCode, Tiling) {
    let n = t.half_edge_count();
    let (a, roots) = least_encoding(t);
    let (stream, source, root) = match policy {
        MirrorPolicy::Oriented => (a, t.clone(), roots[0]),
        MirrorPolicy::Unoriented => {
            let m = t.mirror();
            let (b, mroots) = least_encoding(&m);
            if b < a {
                (b, m, mroots[0])
            } else {
                (a, t.clone(), roots[0])
            }
        }
    };
    let order = bfs_order(&source, root);
    let mut perm = vec![0; n];
    for (i, &h) in order.iter().enumerate() {
        perm[h] = i;
    }
    (CanonicalCode(to_bytes(&stream, n)), source.relabel_ids(&perm))
}

pub fn isomorphic(a: &Tiling, b: &Tiling, policy: MirrorPolicy) -> bool {
    a.half_edge_count() == b.half_edge_count()
        && canonical_code(a, policy) == canonical_code(b, policy)
}

/// An automorphism as a half-edge permutation. Orientation-reversing
/// automorphisms map `t` onto `t.mirror()` (which shares half-edge ids).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    pub perm: Vec<usize>,
    pub reversing: bool,
}

#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub policy: MirrorPolicy,
    pub order: usize,
    pub orientation_preserving: usize,
    pub generators: Vec<Automorphism>,
    pub elements: Vec<Automorphism>,
}

fn bfs_order(t: &Tiling, root: usize) -> Vec<usize> {
    let mut enc = Encoder::new(t);
    let mut out = Vec::new();
    enc.encode(root, None, &mut out);
    enc.order
}

fn compose(a: &Automorphism, b: &Automorphism) -> Automorphism {
    // Apply a, then b.
    Automorphism {
        perm: a.perm.iter().map(|&x| b.perm[x]).collect(),
        reversing: a.reversing ^ b.reversing,
    }
}

fn closure(gens: &[Automorphism], n: usize) -> BTreeSet<Automorphism> {
    let id = Automorphism {
        perm: (0..n).collect(),
        reversing: false,
    };
    let mut set = BTreeSet::new();
    let mut frontier = vec![id.clone()];
    set.insert(id);
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(&x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Label-preserving automorphism group under the policy.
pub fn automorphism_group(t: &Tiling, policy: MirrorPolicy) -> AutomorphismGroup {
    let n = t.half_edge_count();
    let (best, roots) = least_encoding(t);
    let base = bfs_order(t, roots[0]);
    let mut elements = Vec::new();
    for &r in &roots {
        let order = bfs_order(t, r);
        let mut perm = vec![0; n];
        for i in 0..n {
            perm[base[i]] = order[i];
        }
        elements.push(Automorphism {
            perm,
            reversing: false,
        });
    }
    let orientation_preserving = elements.len();
    if policy == MirrorPolicy::Unoriented {
        let m = t.mirror();
        let (mbest, mroots) = least_encoding(&m);
        if mbest == best {
            for &r in &mroots {
                let order = bfs_order(&m, r);
                let mut perm = vec![0; n];
                for i in 0..n {
                    perm[base[i]] = order[i];
                }
                elements.push(Automorphism {
                    perm,
                    reversing: true,
                });
            }
        }
    }
    elements.sort();
    let mut generators: Vec<Automorphism> = Vec::new();
    let mut generated: HashSet<Automorphism> = closure(&[], n).into_iter().collect();
    for e in &elements {
        if !generated.contains(e) {
            generators.push(e.clone());
            generated = closure(&generators, n).into_iter().collect();
        }
    }
    AutomorphismGroup {
        policy,
        order: elements.len(),
        orientation_preserving,
        generators,
        elements,
    }
}

/// Checks that `a` maps `t` onto itself (or onto its mirror when reversing).
pub fn is_automorphism(t: &Tiling, a: &Automorphism) -> bool {
    let target = if a.reversing { t.mirror() } else { t.clone() };
    let p = &a.perm;
    (0..t.half_edge_count()).all(|h| {
        p[t.next(h)] == target.next(p[h])
            && p[t.twin(h)] == target.twin(p[h])
            && t.corner(h) == target.corner(p[h])
    })
}
