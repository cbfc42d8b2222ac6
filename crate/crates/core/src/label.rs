//! Corner labels and label multisets.

use std::cmp::Ordering;
use std::fmt;

/// Maximum number of distinct corner labels.
pub const ALPHABET_SIZE: usize = 8;

const GREEK: [char; ALPHABET_SIZE] = ['α', 'β', 'γ', 'δ', 'ε', 'ζ', 'η', 'θ'];

/// A corner label. Labels are totally ordered α < β < γ < ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Label(u8);

impl Label {
    pub const ALPHA: Label = Label(0);
    pub const BETA: Label = Label(1);
    pub const GAMMA: Label = Label(2);
    pub const DELTA: Label = Label(3);
    pub const EPSILON: Label = Label(4);

    /// Label with the given index, if it is inside the alphabet.
    pub fn new(index: usize) -> Option<Label> {
        (index < ALPHABET_SIZE).then_some(Label(index as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Parses the ASCII letter form (`a` is α, `b` is β, ...).
    pub fn from_letter(c: char) -> Option<Label> {
        let c = c.to_ascii_lowercase();
        if ('a'..='h').contains(&c) {
            Some(Label(c as u8 - b'a'))
        } else {
            None
        }
    }

    pub fn letter(self) -> char {
        (b'a' + self.0) as char
    }

    pub fn greek(self) -> char {
        GREEK[self.index()]
    }

    pub fn all() -> impl Iterator<Item = Label> {
        (0..ALPHABET_SIZE as u8).map(Label)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.greek())
    }
}

/// Parses a word of ASCII letters into labels.
pub fn parse_word(s: &str) -> Option<Vec<Label>> {
    s.chars().map(Label::from_letter).collect()
}

pub fn word_letters(word: &[Label]) -> String {
    word.iter().map(|l| l.letter()).collect()
}

/// A multiset of labels stored as multiplicities.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LabelMultiset([u8; ALPHABET_SIZE]);

impl LabelMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: [u8; ALPHABET_SIZE]) -> Self {
        LabelMultiset(counts)
    }

    pub fn counts(&self) -> &[u8; ALPHABET_SIZE] {
        &self.0
    }

    pub fn count(&self, l: Label) -> usize {
        self.0[l.index()] as usize
    }

    pub fn insert(&mut self, l: Label) {
        self.0[l.index()] += 1;
    }

    pub fn add(&mut self, l: Label, n: usize) {
        self.0[l.index()] += n as u8;
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// True if every multiplicity in `self` is at most the one in `other`.
    pub fn is_subset_of(&self, other: &LabelMultiset) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn union(&self, other: &LabelMultiset) -> LabelMultiset {
        let mut out = *self;
        for i in 0..ALPHABET_SIZE {
            out.0[i] += other.0[i];
        }
        out
    }

    /// Labels in ascending order with repetition.
    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        Label::all().flat_map(move |l| std::iter::repeat_n(l, self.count(l)))
    }

    /// Applies a label map to every element.
    pub fn map(&self, f: impl Fn(Label) -> Label) -> LabelMultiset {
        let mut out = LabelMultiset::new();
        for l in self.iter() {
            out.insert(f(l));
        }
        out
    }

    /// Compact form like `a^2bc` (ASCII) used by the text grammar.
    pub fn to_letters(&self) -> String {
        let mut s = String::new();
        for l in Label::all() {
            match self.count(l) {
                0 => {}
                1 => s.push(l.letter()),
                n => {
                    s.push(l.letter());
                    s.push('^');
                    s.push_str(&n.to_string());
                }
            }
        }
        s
    }
}

impl FromIterator<Label> for LabelMultiset {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        let mut m = LabelMultiset::new();
        for l in iter {
            m.insert(l);
        }
        m
    }
}

impl Ord for LabelMultiset {
    /// Orders by degree first, then by the ascending label sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for LabelMultiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

impl fmt::Display for LabelMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in Label::all() {
            let n = self.count(l);
            if n == 0 {
                continue;
            }
            write!(f, "{}", l.greek())?;
            if n > 1 {
                for d in n.to_string().chars() {
                    write!(f, "{}", SUPERSCRIPTS[d.to_digit(10).unwrap() as usize])?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LabelMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_round_trip() {
        for l in Label::all() {
            assert_eq!(Label::from_letter(l.letter()), Some(l));
        }
        assert_eq!(Label::from_letter('z'), None);
    }

    #[test]
    fn multiset_display() {
        let m: LabelMultiset = parse_word("deee").unwrap().into_iter().collect();
        assert_eq!(m.to_string(), "δε³");
        assert_eq!(m.to_letters(), "de^3");
    }
}
