use std::collections::VecDeque;

use super::{Alphabet, Label, Nfa, Symbol, Word};
use crate::error::{Error, Result};

/// Deterministic finite automaton with a possibly partial transition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    // delta[state][symbol index]
    delta: Vec<Vec<Option<usize>>>,
}

impl Dfa {
    /// A machine with `num_states` states, no transitions and nothing accepting.
    pub fn with_states(alphabet: Alphabet, num_states: usize, initial: usize) -> Self {
        assert!(initial < num_states, "initial state out of range");
        let width = alphabet.len();
        Dfa {
            alphabet,
            initial,
            accepting: vec![false; num_states],
            delta: vec![vec![None; width]; num_states],
        }
    }

    /// Canonical machine for the empty language: one non-accepting initial
    /// state and no transitions.
    pub fn empty(alphabet: Alphabet) -> Self {
        Dfa::with_states(alphabet, 1, 0)
    }

    /// One accepting state looping on every symbol.
    pub fn universal(alphabet: Alphabet) -> Self {
        let mut d = Dfa::with_states(alphabet, 1, 0);
        d.accepting[0] = true;
        for row in &mut d.delta {
            row.iter_mut().for_each(|t| *t = Some(0));
        }
        d
    }

    /// Accepts exactly `x*`, as a cycle of `|x|` states.
    pub fn star_of(alphabet: Alphabet, x: &Word) -> Result<Self> {
        if x.is_empty() {
            let mut d = Dfa::empty(alphabet);
            d.accepting[0] = true;
            return Ok(d);
        }
        let mut d = Dfa::with_states(alphabet, x.len(), 0);
        d.accepting[0] = true;
        for (i, &c) in x.iter().enumerate() {
            d.set_transition(i, c, (i + 1) % x.len())?;
        }
        Ok(d)
    }

    pub fn add_state(&mut self) -> usize {
        self.accepting.push(false);
        self.delta.push(vec![None; self.alphabet.len()]);
        self.accepting.len() - 1
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accepting[q] = accepting;
    }

    /// Adds `q --c--> r`; fails if `(q, c)` already has a different target.
    pub fn set_transition(&mut self, q: usize, c: Symbol, r: usize) -> Result<()> {
        let s = self.alphabet.index_of(c).ok_or(Error::OutOfAlphabet(c))?;
        self.set_transition_index(q, s, r)
    }

    pub(crate) fn set_transition_index(&mut self, q: usize, s: usize, r: usize) -> Result<()> {
        let n = self.num_states();
        if q >= n || r >= n {
            return Err(Error::InvalidMachine(format!(
                "transition {q} -> {r} references a missing state"
            )));
        }
        match self.delta[q][s] {
            Some(old) if old != r => Err(Error::InvalidMachine(format!(
                "duplicate transition from state {q} on '{}'",
                self.alphabet.symbols()[s]
            ))),
            _ => {
                self.delta[q][s] = Some(r);
                Ok(())
            }
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
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

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn step(&self, q: usize, symbol_index: usize) -> Option<usize> {
        self.delta[q][symbol_index]
    }

    /// Successor on a character; foreign symbols have no transition.
    pub fn step_char(&self, q: usize, c: Symbol) -> Option<usize> {
        self.alphabet.index_of(c).and_then(|s| self.delta[q][s])
    }

    pub fn run_from(&self, q: usize, w: &[Symbol]) -> Option<usize> {
        w.iter().try_fold(q, |q, &c| self.step_char(q, c))
    }

    /// Membership test.
    pub fn run(&self, w: &Word) -> Result<bool> {
        let word = self.alphabet.encode(w)?;
        let mut q = self.initial;
        for s in word {
            match self.delta[q][s] {
                Some(r) => q = r,
                None => return Ok(false),
            }
        }
        Ok(self.accepting[q])
    }

    /// All transitions as `(source, symbol index, target)`, ordered by source
    /// then symbol.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(q, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(s, t)| t.map(|r| (q, s, r)))
        })
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(|row| row.iter().all(Option::is_some))
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::with_states(self.alphabet.clone(), self.num_states());
        n.add_initial(self.initial);
        for q in self.accepting_states() {
            n.set_accepting(q, true);
        }
        for (q, s, r) in self.transitions() {
            n.add_edge(q, Label::Sym(s), r);
        }
        n
    }

    /// Re-expresses the machine over a superset alphabet without adding
    /// transitions.
    pub fn widen(&self, alphabet: &Alphabet) -> Result<Dfa> {
        if !self.alphabet.is_subset_of(alphabet) {
            return Err(Error::AlphabetMismatch(format!(
                "cannot widen {{{}}} to {{{}}}",
                self.alphabet, alphabet
            )));
        }
        let mut out = Dfa::with_states(alphabet.clone(), self.num_states(), self.initial);
        out.accepting = self.accepting.clone();
        for (q, s, r) in self.transitions() {
            let c = self.alphabet.symbols()[s];
            out.set_transition(q, c, r)?;
        }
        Ok(out)
    }

    /// Renumbers states in breadth-first discovery order from the initial
    /// state (symbols in alphabet order). Unreachable states keep their
    /// relative order after the reachable ones.
    pub fn canonical(&self) -> Dfa {
        let n = self.num_states();
        let mut order = Vec::with_capacity(n);
        let mut new_id = vec![usize::MAX; n];
        let mut queue = VecDeque::from([self.initial]);
        new_id[self.initial] = 0;
        order.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for r in self.delta[q].iter().flatten() {
                if new_id[*r] == usize::MAX {
                    new_id[*r] = order.len();
                    order.push(*r);
                    queue.push_back(*r);
                }
            }
        }
        for (q, id) in new_id.iter_mut().enumerate() {
            if *id == usize::MAX {
                *id = order.len();
                order.push(q);
            }
        }
        let mut out = Dfa::with_states(self.alphabet.clone(), n, 0);
        for (new, &old) in order.iter().enumerate() {
            out.accepting[new] = self.accepting[old];
            for (s, t) in self.delta[old].iter().enumerate() {
                out.delta[new][s] = t.map(|r| new_id[r]);
            }
        }
        out
    }

    /// Keeps only the listed states (in the given order), dropping every
    /// transition that leaves the set. `initial` must be listed.
    pub(crate) fn restrict(&self, keep: &[usize], initial: usize) -> Dfa {
        let mut new_id = vec![usize::MAX; self.num_states()];
        for (i, &q) in keep.iter().enumerate() {
            new_id[q] = i;
        }
        let mut out = Dfa::with_states(self.alphabet.clone(), keep.len(), new_id[initial]);
        for (i, &q) in keep.iter().enumerate() {
            out.accepting[i] = self.accepting[q];
            for (s, t) in self.delta[q].iter().enumerate() {
                if let Some(r) = t {
                    if new_id[*r] != usize::MAX {
                        out.delta[i][s] = Some(new_id[*r]);
                    }
                }
            }
        }
        out
    }

    /// Same graph with a different initial state and accepting set.
    pub(crate) fn rerooted(&self, initial: usize, accepting: &[usize]) -> Dfa {
        let mut out = self.clone();
        out.initial = initial;
        out.accepting = vec![false; self.num_states()];
        for &q in accepting {
            out.accepting[q] = true;
        }
        out
    }
}
