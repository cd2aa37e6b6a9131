//! Finite automata over explicit, finite alphabets.
//!
//! States are dense indices `0..n`. Every construction in this module hands
//! back machines renumbered in breadth-first discovery order from the initial
//! state(s), so printing the same value twice is byte-identical.

mod dfa;
pub(crate) mod format;
mod nfa;
mod ops;
mod regex;
mod scc;

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use dfa::Dfa;
pub use format::{parse_automaton, parse_dfa, parse_nfa, Automaton};
pub use nfa::{Label, Nfa};
pub(crate) use ops::merge_equivalent;
pub use ops::{
    complement, determinize, equivalent, includes, inclusion_counterexample, product_intersect,
    separating_word, shortest_word, trim, Separation,
};
pub use regex::{regex_to_nfa, regex_to_nfa_over};
pub use scc::{condense, Condensation};

/// A single alphabet symbol.
pub type Symbol = char;

/// An ordered, duplicate-free set of symbols.
///
/// The declaration order is the symbol order used for all lexicographic
/// tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = Symbol>>(symbols: I) -> Result<Self> {
        let mut out = Vec::new();
        for c in symbols {
            if !is_symbol_char(c) {
                return Err(Error::AlphabetMismatch(format!(
                    "'{c}' cannot be used as a symbol"
                )));
            }
            if out.contains(&c) {
                return Err(Error::AlphabetMismatch(format!("duplicate symbol '{c}'")));
            }
            out.push(c);
        }
        Ok(Alphabet { symbols: out })
    }

    /// Builds an alphabet from the distinct characters of `s`, in order of
    /// first appearance.
    pub fn from_chars(s: &str) -> Self {
        let mut symbols = Vec::new();
        for c in s.chars() {
            if !symbols.contains(&c) {
                symbols.push(c);
            }
        }
        Alphabet { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn index_of(&self, c: Symbol) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    pub fn contains(&self, c: Symbol) -> bool {
        self.symbols.contains(&c)
    }

    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.symbols.iter().all(|&c| other.contains(c))
    }

    /// `self` followed by the symbols of `other` that `self` lacks.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut symbols = self.symbols.clone();
        for &c in &other.symbols {
            if !symbols.contains(&c) {
                symbols.push(c);
            }
        }
        Alphabet { symbols }
    }

    /// Symbol indices of `w`, failing on the first foreign symbol.
    pub fn encode(&self, w: &Word) -> Result<Vec<usize>> {
        w.iter()
            .map(|&c| self.index_of(c).ok_or(Error::OutOfAlphabet(c)))
            .collect()
    }

    /// Compares two words: shorter first, then lexicographically by symbol
    /// order. Symbols outside the alphabet sort after every member.
    pub fn cmp_shortlex(&self, a: &Word, b: &Word) -> std::cmp::Ordering {
        let key = |c: &Symbol| self.index_of(*c).unwrap_or(usize::MAX);
        a.len()
            .cmp(&b.len())
            .then_with(|| a.iter().map(key).cmp(b.iter().map(key)))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub(crate) fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric()
}

/// A finite word. The empty word prints as `-`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn push(&mut self, c: Symbol) {
        self.0.push(c);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<&str> for Word {
    /// Takes the characters literally; use [`str::parse`] for the `-` form.
    fn from(s: &str) -> Self {
        Word(s.chars().collect())
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses the printed form: `-` is the empty word, anything else is a
    /// run of symbol characters.
    fn from_str(s: &str) -> Result<Self> {
        if s == "-" {
            return Ok(Word::empty());
        }
        if let Some(c) = s.chars().find(|&c| !is_symbol_char(c)) {
            return Err(Error::OutOfAlphabet(c));
        }
        Ok(Word::from(s))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_display_and_parse() {
        assert_eq!(Word::empty().to_string(), "-");
        assert_eq!("-".parse::<Word>().unwrap(), Word::empty());
        assert_eq!("ab".parse::<Word>().unwrap(), Word::from("ab"));
        assert!("a-b".parse::<Word>().is_err());
    }

    #[test]
    fn union_keeps_left_order() {
        let a = Alphabet::new(['b', 'a']).unwrap();
        let b = Alphabet::new(['c', 'a']).unwrap();
        assert_eq!(a.union(&b).symbols(), &['b', 'a', 'c']);
    }

    #[test]
    fn duplicate_symbols_rejected() {
        assert!(Alphabet::new(['a', 'a']).is_err());
    }

    #[test]
    fn shortlex_uses_declared_order() {
        let al = Alphabet::new(['b', 'a']).unwrap();
        let ord = al.cmp_shortlex(&Word::from("b"), &Word::from("a"));
        assert_eq!(ord, std::cmp::Ordering::Less);
        let ord = al.cmp_shortlex(&Word::from("aa"), &Word::from("b"));
        assert_eq!(ord, std::cmp::Ordering::Greater);
    }
}
