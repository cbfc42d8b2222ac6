//! Anglewise vertex combinations: parsing, consistency, corner arrangements
//! of the tile, and vertex matching.
//!
//! Text grammar:
//!
//! ```text
//! avc      := INT pentagon ":" vlist
//! pentagon := letter{5}
//! vlist    := vterm ("," vterm)*
//! vterm    := INT factor+
//! factor   := letter ("^" INT)?
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::label::{Label, LabelMultiset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AvcError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("tile must have {expected} corners, got {got}")]
    TileSize { expected: usize, got: usize },
    #[error("{0}")]
    Inconsistent(ConsistencyIssue),
    #[error("non-integer exponent: {0}")]
    NonIntegerExponent(String),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
}

/// One failed balance identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConsistencyIssue {
    LabelBalance {
        label: Label,
        expected: usize,
        actual: usize,
    },
    Euler {
        expected: usize,
        actual: usize,
    },
    OddTileCount(usize),
    LowDegree(LabelMultiset),
    DuplicateVertexType(LabelMultiset),
}

impl fmt::Display for ConsistencyIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConsistencyIssue::LabelBalance {
                label,
                expected,
                actual,
            } => write!(
                f,
                "label balance fails for {label}: vertices carry {actual}, tiles carry {expected}"
            ),
            ConsistencyIssue::Euler { expected, actual } => {
                write!(f, "vertex total {actual} != {expected} required by Euler")
            }
            ConsistencyIssue::OddTileCount(n) => write!(f, "tile count {n} must be even"),
            ConsistencyIssue::LowDegree(m) => write!(f, "vertex type {m} has degree < 3"),
            ConsistencyIssue::DuplicateVertexType(m) => write!(f, "vertex type {m} listed twice"),
        }
    }
}

/// Tile count, tile corner multiset and vertex types with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Avc {
    pub tile_count: usize,
    /// Corner labels of one tile, sorted.
    pub tile: Vec<Label>,
    pub vertices: Vec<(LabelMultiset, usize)>,
}

impl Avc {
    /// Builds and checks an AVC.
    pub fn new(
        tile_count: usize,
        mut tile: Vec<Label>,
        vertices: Vec<(LabelMultiset, usize)>,
    ) -> Result<Avc, AvcError> {
        tile.sort();
        let avc = Avc {
            tile_count,
            tile,
            vertices,
        };
        if let Some(issue) = check_consistency(&avc).into_iter().next() {
            return Err(AvcError::Inconsistent(issue));
        }
        Ok(avc)
    }

    /// Builds without checking; for deliberately broken fixtures.
    pub fn new_unchecked(
        tile_count: usize,
        mut tile: Vec<Label>,
        vertices: Vec<(LabelMultiset, usize)>,
    ) -> Avc {
        tile.sort();
        Avc {
            tile_count,
            tile,
            vertices,
        }
    }

    pub fn face_degree(&self) -> usize {
        self.tile.len()
    }

    pub fn tile_multiset(&self) -> LabelMultiset {
        self.tile.iter().copied().collect()
    }

    pub fn vertex_total(&self) -> usize {
        self.vertices.iter().map(|(_, c)| c).sum()
    }

    /// Labels that occur anywhere in the AVC.
    pub fn alphabet(&self) -> BTreeSet<Label> {
        self.tile.iter().copied().collect()
    }

    /// Vertex count required by Euler's formula for this many tiles.
    pub fn euler_vertex_count(&self) -> Option<usize> {
        let d = self.face_degree();
        let num = self.tile_count * (d - 2);
        num.is_multiple_of(2).then_some(2 + num / 2)
    }

    pub fn count_of(&self, m: &LabelMultiset) -> usize {
        self.vertices
            .iter()
            .find(|(v, _)| v == m)
            .map_or(0, |(_, c)| *c)
    }
}

impl fmt::Display for Avc {
    /// Renders in the text grammar, e.g. `24 abcde : 24 abc, 8 d^3, 6 e^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tile: String = self.tile.iter().map(|l| l.letter()).collect();
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|(m, c)| format!("{c} {}", m.to_letters()))
            .collect();
        write!(f, "{} {} : {}", self.tile_count, tile, parts.join(", "))
    }
}

/// Greek rendering such as `{24αβγδε: 24αβγ, 8δ³, 6ε⁴}`.
pub fn display_greek(avc: &Avc) -> String {
    let tile: LabelMultiset = avc.tile.iter().copied().collect();
    let parts: Vec<String> = avc
        .vertices
        .iter()
        .map(|(m, c)| format!("{c}{m}"))
        .collect();
    format!("{{{}{}: {}}}", avc.tile_count, tile, parts.join(", "))
}

/// Checks the label balance and Euler identities.
pub fn check_consistency(avc: &Avc) -> Vec<ConsistencyIssue> {
    let mut issues = Vec::new();
    let tile = avc.tile_multiset();
    for l in Label::all() {
        let expected = avc.tile_count * tile.count(l);
        let actual: usize = avc.vertices.iter().map(|(m, c)| c * m.count(l)).sum();
        if expected != actual {
            issues.push(ConsistencyIssue::LabelBalance {
                label: l,
                expected,
                actual,
            });
        }
    }
    match avc.euler_vertex_count() {
        Some(expected) => {
            let actual = avc.vertex_total();
            if actual != expected {
                issues.push(ConsistencyIssue::Euler { expected, actual });
            }
        }
        None => issues.push(ConsistencyIssue::OddTileCount(avc.tile_count)),
    }
    let mut seen = BTreeSet::new();
    for (m, _) in &avc.vertices {
        if m.len() < 3 {
            issues.push(ConsistencyIssue::LowDegree(*m));
        }
        if !seen.insert(*m) {
            issues.push(ConsistencyIssue::DuplicateVertexType(*m));
        }
    }
    issues
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    i: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.char_indices().collect(),
            i: 0,
            src,
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.i).map_or(self.src.len(), |c| c.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AvcError> {
        Err(AvcError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.i < self.chars.len() && self.chars[self.i].1.is_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.i).map(|c| c.1)
    }

    fn int(&mut self) -> Result<usize, AvcError> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.chars.len() && self.chars[self.i].1.is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected integer");
        }
        let s: String = self.chars[start..self.i].iter().map(|c| c.1).collect();
        s.parse().or_else(|_| self.err("integer too large"))
    }

    fn letter(&mut self) -> Result<Label, AvcError> {
        match self.peek() {
            Some(c) => match Label::from_letter(c) {
                Some(l) if c.is_ascii_lowercase() => {
                    self.i += 1;
                    Ok(l)
                }
                _ => self.err(format!("expected label letter a..h, found `{c}`")),
            },
            None => self.err("expected label letter, found end of input"),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), AvcError> {
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }
}

/// Parses the AVC text grammar and checks consistency.
pub fn parse_avc(text: &str) -> Result<Avc, AvcError> {
    let mut p = Parser::new(text);
    let f = p.int()?;
    let mut tile = Vec::new();
    while matches!(p.peek(), Some(c) if c != ':') {
        tile.push(p.letter()?);
    }
    if tile.len() != 5 {
        return Err(AvcError::TileSize {
            expected: 5,
            got: tile.len(),
        });
    }
    p.expect(':')?;
    let mut vertices = Vec::new();
    loop {
        let count = p.int()?;
        let mut m = LabelMultiset::new();
        let mut factors = 0;
        while matches!(p.peek(), Some(c) if c != ',') {
            let l = p.letter()?;
            let mut e = 1;
            if p.peek() == Some('^') {
                p.i += 1;
                e = p.int()?;
            }
            if m.count(l) + e > u8::MAX as usize {
                return p.err("exponent too large");
            }
            m.add(l, e);
            factors += 1;
        }
        if factors == 0 {
            return p.err("vertex term needs at least one factor");
        }
        vertices.push((m, count));
        match p.peek() {
            Some(',') => p.i += 1,
            None => break,
            Some(c) => return p.err(format!("unexpected `{c}`")),
        }
    }
    Avc::new(f, tile, vertices)
}

/// Cyclic corner word of a tile up to rotation and reflection, stored as
/// its lexicographically least representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrangement {
    cycle: Vec<Label>,
}

fn dihedral_images(word: &[Label]) -> Vec<Vec<Label>> {
    let n = word.len();
    let mut out = Vec::with_capacity(2 * n);
    for r in 0..n {
        let rot: Vec<Label> = (0..n).map(|i| word[(i + r) % n]).collect();
        let mut rev = rot.clone();
        rev.reverse();
        out.push(rot);
        out.push(rev);
    }
    out
}

impl Arrangement {
    /// Canonicalizes a cyclic word read in either direction.
    pub fn from_word(word: &[Label]) -> Arrangement {
        let cycle = dihedral_images(word).into_iter().min().unwrap_or_default();
        Arrangement { cycle }
    }

    pub fn parse(letters: &str) -> Option<Arrangement> {
        crate::label::parse_word(letters).map(|w| Arrangement::from_word(&w))
    }

    pub fn cycle(&self) -> &[Label] {
        &self.cycle
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn multiset(&self) -> LabelMultiset {
        self.cycle.iter().copied().collect()
    }

    /// True when the word read backwards is a rotation of itself.
    pub fn is_reflection_symmetric(&self) -> bool {
        let mut rev = self.cycle.clone();
        rev.reverse();
        let n = self.cycle.len();
        (0..n).any(|r| (0..n).all(|i| rev[(i + r) % n] == self.cycle[i]))
    }

    /// Whether `word` (read counterclockwise) realizes this arrangement.
    pub fn accepts(&self, word: &[Label]) -> bool {
        word.len() == self.cycle.len() && Arrangement::from_word(word) == *self
    }

    /// Distinct counterclockwise words realizing the arrangement: all
    /// rotations of the word and of its reverse.
    pub fn placements(&self) -> Vec<Vec<Label>> {
        let set: BTreeSet<Vec<Label>> = dihedral_images(&self.cycle).into_iter().collect();
        set.into_iter().collect()
    }

    pub fn letters(&self) -> String {
        self.cycle.iter().map(|l| l.letter()).collect()
    }

    /// Neighbours of every corner position.
    pub fn aad_table(&self) -> AdjacencyTable {
        let n = self.cycle.len();
        AdjacencyTable {
            entries: (0..n)
                .map(|i| {
                    (
                        self.cycle[i],
                        self.cycle[(i + n - 1) % n],
                        self.cycle[(i + 1) % n],
                    )
                })
                .collect(),
        }
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.cycle {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// For each corner of the arrangement: its label and the labels on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyTable {
    pub entries: Vec<(Label, Label, Label)>,
}

impl AdjacencyTable {
    /// All labels that sit next to some occurrence of `l`.
    pub fn neighbours(&self, l: Label) -> BTreeSet<Label> {
        self.entries
            .iter()
            .filter(|e| e.0 == l)
            .flat_map(|e| [e.1, e.2])
            .collect()
    }

    pub fn adjacent(&self, a: Label, b: Label) -> bool {
        self.neighbours(a).contains(&b)
    }
}

/// Every arrangement of the given corner multiset, sorted.
pub fn enumerate_arrangements(tile: &[Label]) -> Result<Vec<Arrangement>, AvcError> {
    if tile.len() != 5 {
        return Err(AvcError::TileSize {
            expected: 5,
            got: tile.len(),
        });
    }
    Ok(arrangements_of(tile))
}

/// Arrangements of a multiset of any size.
pub fn arrangements_of(tile: &[Label]) -> Vec<Arrangement> {
    let mut sorted = tile.to_vec();
    sorted.sort();
    let mut out = BTreeSet::new();
    permute(&mut sorted, 0, &mut |w| {
        out.insert(Arrangement::from_word(w));
    });
    out.into_iter().collect()
}

fn permute(w: &mut Vec<Label>, k: usize, visit: &mut impl FnMut(&[Label])) {
    if k == w.len() {
        visit(w);
        return;
    }
    let mut used = BTreeSet::new();
    for i in k..w.len() {
        if used.insert(w[i]) {
            w.swap(k, i);
            permute(w, k + 1, visit);
            w.swap(k, i);
        }
    }
}

/// Vertex types of the AVC that contain the partial multiset.
pub fn match_vertex(partial: &LabelMultiset, avc: &Avc) -> Vec<LabelMultiset> {
    avc.vertices
        .iter()
        .filter(|(m, _)| partial.is_subset_of(m))
        .map(|(m, _)| *m)
        .collect()
}

fn ms(letters: &str) -> LabelMultiset {
    letters.chars().filter_map(Label::from_letter).collect()
}

/// Vertex type from plain letters, e.g. `"deee"`.
pub fn vertex_type(letters: &str) -> LabelMultiset {
    ms(letters)
}

/// Earth map family at `f` tiles with `y2` vertices of full pole degree.
/// Rejects parameter values that make an exponent or count non-integral,
/// and `y2 = 1`.
pub fn emt_avc(f: usize, y2: usize) -> Result<Avc, AvcError> {
    if !f.is_multiple_of(4) || f < 8 {
        return Err(AvcError::NonIntegerExponent(format!(
            "f = {f} must be a multiple of 4 and at least 8"
        )));
    }
    if y2 > 2 {
        return Err(AvcError::NonIntegerExponent(format!(
            "y2 = {y2} makes a negative count"
        )));
    }
    // Mixing both pole types is left open by the classification.
    if y2 == 1 {
        return Err(AvcError::Unsupported("y2 = 1; use 0 or 2".into()));
    }
    let mut vertices = vec![(ms("abc"), f)];
    let n1 = f + 2 * y2;
    if n1 < 4 || !(n1 - 4).is_multiple_of(2) {
        return Err(AvcError::NonIntegerExponent(format!("(f-4+2y2)/2 at f={f}")));
    }
    vertices.push((ms("dee"), (n1 - 4) / 2));
    let c2 = 4 - 2 * y2;
    if c2 > 0 {
        if !(f + 4).is_multiple_of(8) {
            return Err(AvcError::NonIntegerExponent(format!(
                "(f+4)/8 = {}/8",
                f + 4
            )));
        }
        let mut m = LabelMultiset::new();
        m.add(Label::DELTA, (f + 4) / 8);
        m.insert(Label::EPSILON);
        vertices.push((m, c2));
    }
    if y2 > 0 {
        let mut m = LabelMultiset::new();
        m.add(Label::DELTA, f / 4);
        vertices.push((m, y2));
    }
    vertices.retain(|(_, c)| *c > 0);
    Avc::new(f, ms("abcde").iter().collect(), vertices)
}

/// Named AVCs used throughout the crate, in text form.
pub fn named_avc(name: &str) -> Option<Avc> {
    let text = match name {
        "5A24" => "24 abcde : 24 abc, 8 d^3, 6 e^4",
        "5A36" => "36 abcde : 36 abc, 8 d^3, 12 d e^3",
        "5A60" => "60 abcde : 60 abc, 20 d^3, 12 e^5",
        "4A24" => "24 aabcd : 24 a^2b, 8 c^3, 6 d^4",
        "4A60" => "60 aabcd : 60 a^2b, 20 c^3, 12 d^5",
        "4D24" => "24 aabcd : 24 abc, 8 a^3, 6 d^4",
        "4D60" => "60 aabcd : 60 abc, 20 a^3, 12 d^5",
        "4E24" => "24 aabcd : 24 abc, 8 d^3, 6 a^4",
        "4E60" => "60 aabcd : 60 abc, 20 d^3, 12 a^5",
        "3A24" => "24 aaabc : 24 a^3, 8 b^3, 6 c^4",
        "3A60" => "60 aaabc : 60 a^3, 20 b^3, 12 c^5",
        "3B24" => "24 aaabc : 24 a^2b, 8 a^3, 6 c^4",
        "3B60" => "60 aaabc : 60 a^2b, 20 a^3, 12 c^5",
        "3C24" => "24 aaabc : 24 a^2b, 8 c^3, 6 a^4",
        "3C60" => "60 aaabc : 60 a^2b, 20 c^3, 12 a^5",
        "3D24" => "24 aabbc : 24 a^2b, 8 b^3, 6 c^4",
        "3D60" => "60 aabbc : 60 a^2b, 20 b^3, 12 c^5",
        "3E24" => "24 aabbc : 24 a^2b, 8 c^3, 6 b^4",
        "3E60" => "60 aabbc : 60 a^2b, 20 c^3, 12 b^5",
        "2D24" => "24 aaaab : 32 a^3, 6 b^4",
        "2D60" => "60 aaaab : 80 a^3, 12 b^5",
        "4A36" => "36 aabde : 36 a^2b, 8 d^3, 12 d e^3",
        "3A36" => "36 aaade : 36 a^3, 8 d^3, 12 d e^3",
        "2D36" => "36 aaaae : 44 a^3, 12 a e^3",
        _ => return None,
    };
    Some(parse_avc(text).expect("built-in AVC is consistent"))
}

pub const NAMED_AVCS: [&str; 24] = [
    "5A24", "5A36", "5A60", "4A24", "4A60", "4D24", "4D60", "4E24", "4E60", "3A24", "3A60",
    "3B24", "3B60", "3C24", "3C60", "3D24", "3D60", "3E24", "3E60", "2D24", "2D60", "4A36",
    "3A36", "2D36",
];

/// Corner words of the tile arrangements drawn for each family, read
/// counterclockwise.
pub fn named_arrangement(name: &str) -> Option<Arrangement> {
    let word = match name {
        // δ, ε adjacent / non-adjacent.
        "abcde-adjacent" => "cabde",
        "abcde-separated" => "eadbc",
        // β, γ adjacent / non-adjacent.
        "aaabc-adjacent" => "aaabc",
        "aaabc-separated" => "cabaa",
        "aabbc-1" => "acabb",
        "aabbc-2" => "bcbaa",
        "aabbc-3" => "bcaba",
        "aabbc-4" => "bcaab",
        "aabcd-1" => "adabc",
        "aabcd-2" => "cdbaa",
        "aabcd-3" => "bdaca",
        "aabcd-4" => "bdaac",
        "aabcd-5" => "cdaba",
        "aabcd-6" => "cdaab",
        "aabde-1" => "ebdaa",
        "aabde-2" => "eadba",
        "aabde-3" => "eadab",
        "aaade-1" => "aaade",
        "aaade-2" => "eadaa",
        "aaaae" => "aaaae",
        _ => return None,
    };
    Arrangement::parse(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let a = parse_avc("24 abcde : 24 abc, 8 d^3, 6 e^4").unwrap();
        assert_eq!(a.tile_count, 24);
        assert_eq!(a.vertices.len(), 3);
        assert_eq!(parse_avc(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn balance_failure_names_label() {
        let e = parse_avc("24 abcde : 24 abc, 8 d^3, 6 e^3").unwrap_err();
        assert_eq!(
            e,
            AvcError::Inconsistent(ConsistencyIssue::LabelBalance {
                label: Label::EPSILON,
                expected: 24,
                actual: 18
            })
        );
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse_avc("24 abcde ; 24 abc") {
            Err(AvcError::Syntax { .. }) | Err(AvcError::TileSize { .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn drawn_arrangements_are_distinct() {
        for (family, n) in [("aabcd", 6), ("aabbc", 4), ("aabde", 3), ("aaade", 2)] {
            let set: BTreeSet<Arrangement> = (1..=n)
                .map(|i| named_arrangement(&format!("{family}-{i}")).unwrap())
                .collect();
            assert_eq!(set.len(), n, "{family}");
        }
    }

    #[test]
    fn named_avcs_parse() {
        for n in NAMED_AVCS {
            assert!(named_avc(n).is_some(), "{n}");
        }
    }

    #[test]
    fn emt_parameters() {
        assert_eq!(emt_avc(12, 2).unwrap().to_string(), "12 abcde : 12 abc, 6 de^2, 2 d^3");
        assert!(emt_avc(16, 0).is_err());
        assert!(matches!(emt_avc(12, 1), Err(AvcError::Unsupported(_))));
        assert!(emt_avc(10, 2).is_err());
    }
}
