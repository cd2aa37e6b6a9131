//! Deterministic finite-state transducers.
//!
//! Transitions consume exactly one input symbol and emit a (possibly empty)
//! output word; accepting states may additionally emit a final word once the
//! input is exhausted. A transducer therefore computes a partial function on
//! words: `apply` is defined iff the unique run reads the whole input and
//! stops in an accepting state.
//!
//! Composition follows the left-to-right convention:
//! `compose_dfst(t1, t2)` maps `x` to `t2(t1(x))`.

mod algebra;
mod format;

use std::collections::{HashMap, VecDeque};

use crate::automata::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};

pub use algebra::{compose_dfst, identity_transducer, image_nfa, preimage_automaton};
pub use format::parse_dfst;

/// Output of [`Dfst::apply`]: `None` where the transduction is undefined.
pub type TransductionResult = Option<Word>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfst {
    in_alphabet: Alphabet,
    out_alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    // delta[state][input symbol index] = (emitted word, target)
    delta: Vec<Vec<Option<(Word, usize)>>>,
    final_output: Vec<Word>,
}

impl Dfst {
    pub fn with_states(
        in_alphabet: Alphabet,
        out_alphabet: Alphabet,
        num_states: usize,
        initial: usize,
    ) -> Self {
        assert!(initial < num_states, "initial state out of range");
        let width = in_alphabet.len();
        Dfst {
            in_alphabet,
            out_alphabet,
            initial,
            accepting: vec![false; num_states],
            delta: vec![vec![None; width]; num_states],
            final_output: vec![Word::empty(); num_states],
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.accepting.push(false);
        self.delta.push(vec![None; self.in_alphabet.len()]);
        self.final_output.push(Word::empty());
        self.accepting.len() - 1
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accepting[q] = accepting;
    }

    fn check_output(&self, w: &Word) -> Result<()> {
        match w.iter().find(|&&c| !self.out_alphabet.contains(c)) {
            Some(&c) => Err(Error::OutOfAlphabet(c)),
            None => Ok(()),
        }
    }

    /// Word emitted after the input is exhausted in accepting state `q`.
    pub fn set_final_output(&mut self, q: usize, w: Word) -> Result<()> {
        self.check_output(&w)?;
        self.final_output[q] = w;
        Ok(())
    }

    /// Adds `q --c/out--> r`. A second, different transition on `(q, c)` is
    /// rejected.
    pub fn set_transition(&mut self, q: usize, c: Symbol, out: Word, r: usize) -> Result<()> {
        let s = self
            .in_alphabet
            .index_of(c)
            .ok_or(Error::OutOfAlphabet(c))?;
        self.set_transition_index(q, s, out, r)
    }

    pub(crate) fn set_transition_index(
        &mut self,
        q: usize,
        s: usize,
        out: Word,
        r: usize,
    ) -> Result<()> {
        self.check_output(&out)?;
        let n = self.num_states();
        if q >= n || r >= n {
            return Err(Error::InvalidMachine(format!(
                "transition {q} -> {r} references a missing state"
            )));
        }
        match &self.delta[q][s] {
            Some(existing) if *existing != (out.clone(), r) => Err(Error::InvalidMachine(format!(
                "duplicate transition from state {q} on '{}'",
                self.in_alphabet.symbols()[s]
            ))),
            _ => {
                self.delta[q][s] = Some((out, r));
                Ok(())
            }
        }
    }

    pub fn in_alphabet(&self) -> &Alphabet {
        &self.in_alphabet
    }

    pub fn out_alphabet(&self) -> &Alphabet {
        &self.out_alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn final_output(&self, q: usize) -> &Word {
        &self.final_output[q]
    }

    pub fn transition(&self, q: usize, symbol_index: usize) -> Option<&(Word, usize)> {
        self.delta[q][symbol_index].as_ref()
    }

    /// `(source, input symbol index, output, target)` in source/symbol order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, &Word, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(q, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(s, t)| t.as_ref().map(|(w, r)| (q, s, w, *r)))
        })
    }

    /// Longest word emitted by a single transition or final output.
    pub fn max_output_len(&self) -> usize {
        self.transitions()
            .map(|(_, _, w, _)| w.len())
            .chain(self.final_output.iter().map(|w| w.len()))
            .max()
            .unwrap_or(0)
    }

    /// Runs from `q` over `input`, returning the emitted word and the end
    /// state, or `None` if a transition is missing. Foreign symbols have no
    /// transition.
    pub fn run_from(&self, q: usize, input: &[Symbol]) -> Option<(Word, usize)> {
        let mut out = Word::empty();
        let mut cur = q;
        for &c in input {
            let s = self.in_alphabet.index_of(c)?;
            let (w, r) = self.delta[cur][s].as_ref()?;
            for &o in w.iter() {
                out.push(o);
            }
            cur = *r;
        }
        Some((out, cur))
    }

    /// The transduction `T(x)`; `None` when undefined.
    pub fn apply(&self, x: &Word) -> Result<TransductionResult> {
        self.in_alphabet.encode(x)?;
        Ok(self.run_from(self.initial, x).and_then(|(mut out, q)| {
            self.accepting[q].then(|| {
                for &c in self.final_output[q].iter() {
                    out.push(c);
                }
                out
            })
        }))
    }

    /// Renumbers reachable states in breadth-first order; unreachable states
    /// are dropped.
    pub fn canonical(&self) -> Dfst {
        let mut new_id = HashMap::new();
        let mut order = vec![self.initial];
        new_id.insert(self.initial, 0usize);
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            for (_, r) in self.delta[q].iter().flatten() {
                if !new_id.contains_key(r) {
                    new_id.insert(*r, order.len());
                    order.push(*r);
                    queue.push_back(*r);
                }
            }
        }
        let mut out = Dfst::with_states(
            self.in_alphabet.clone(),
            self.out_alphabet.clone(),
            order.len(),
            0,
        );
        for (new, &old) in order.iter().enumerate() {
            out.accepting[new] = self.accepting[old];
            out.final_output[new] = self.final_output[old].clone();
            for (s, t) in self.delta[old].iter().enumerate() {
                out.delta[new][s] = t.as_ref().map(|(w, r)| (w.clone(), new_id[r]));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Alphabet {
        Alphabet::new(['a']).unwrap()
    }

    fn rewriter(from: char, to: &str) -> Dfst {
        let inp = Alphabet::new([from]).unwrap();
        let out = Alphabet::from_chars(to);
        let mut t = Dfst::with_states(inp, out, 1, 0);
        t.set_accepting(0, true);
        t.set_transition(0, from, Word::from(to), 0).unwrap();
        t
    }

    #[test]
    fn apply_rewriter() {
        let t = rewriter('a', "b");
        assert_eq!(
            t.apply(&Word::from("aaa")).unwrap(),
            Some(Word::from("bbb"))
        );
        assert_eq!(t.apply(&Word::empty()).unwrap(), Some(Word::empty()));
        assert_eq!(t.apply(&Word::from("b")), Err(Error::OutOfAlphabet('b')));
    }

    #[test]
    fn missing_transition_is_undefined() {
        let mut t = Dfst::with_states(Alphabet::new(['a', 'b']).unwrap(), a(), 1, 0);
        t.set_accepting(0, true);
        t.set_transition(0, 'a', Word::from("a"), 0).unwrap();
        assert_eq!(t.apply(&Word::from("ab")).unwrap(), None);
    }

    #[test]
    fn non_accepting_end_is_undefined() {
        let mut t = Dfst::with_states(a(), a(), 2, 0);
        t.set_accepting(1, true);
        t.set_transition(0, 'a', Word::empty(), 1).unwrap();
        t.set_transition(1, 'a', Word::from("aa"), 0).unwrap();
        assert_eq!(t.apply(&Word::empty()).unwrap(), None);
        assert_eq!(t.apply(&Word::from("a")).unwrap(), Some(Word::empty()));
        assert_eq!(t.apply(&Word::from("aa")).unwrap(), None);
    }

    #[test]
    fn final_output_is_appended() {
        let mut t = rewriter('a', "a");
        t.set_final_output(0, Word::from("aa")).unwrap();
        assert_eq!(t.apply(&Word::from("a")).unwrap(), Some(Word::from("aaa")));
        assert!(t.set_final_output(0, Word::from("b")).is_err());
    }

    #[test]
    fn conflicting_transition_rejected() {
        let mut t = rewriter('a', "a");
        assert!(t.set_transition(0, 'a', Word::from("aa"), 0).is_err());
        assert!(t.set_transition(0, 'a', Word::from("a"), 0).is_ok());
    }
}
