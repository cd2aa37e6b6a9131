use std::collections::VecDeque;

use super::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};

/// Edge label of an [`Nfa`]: ε or a symbol index into the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Eps,
    Sym(usize),
}

/// Nondeterministic finite automaton with ε-moves and a set of initial
/// states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    // outgoing edges per state, in insertion order, without duplicates
    edges: Vec<Vec<(Label, usize)>>,
}

impl Nfa {
    pub fn with_states(alphabet: Alphabet, num_states: usize) -> Self {
        Nfa {
            alphabet,
            initial: Vec::new(),
            accepting: vec![false; num_states],
            edges: vec![Vec::new(); num_states],
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.accepting.push(false);
        self.edges.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn add_initial(&mut self, q: usize) {
        if !self.initial.contains(&q) {
            self.initial.push(q);
        }
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accepting[q] = accepting;
    }

    /// Adds `q --c--> r`, or an ε-edge when `c` is `None`.
    pub fn add_transition(&mut self, q: usize, c: Option<Symbol>, r: usize) -> Result<()> {
        let label = match c {
            None => Label::Eps,
            Some(c) => Label::Sym(self.alphabet.index_of(c).ok_or(Error::OutOfAlphabet(c))?),
        };
        if q >= self.num_states() || r >= self.num_states() {
            return Err(Error::InvalidMachine(format!(
                "transition {q} -> {r} references a missing state"
            )));
        }
        self.add_edge(q, label, r);
        Ok(())
    }

    pub(crate) fn add_edge(&mut self, q: usize, label: Label, r: usize) {
        if !self.edges[q].contains(&(label, r)) {
            self.edges[q].push((label, r));
        }
    }

    /// Adds a fresh path spelling `w` from `from` and returns its last state
    /// (`from` itself when `w` is empty).
    pub(crate) fn add_path(&mut self, from: usize, w: &[usize]) -> usize {
        let mut cur = from;
        for &s in w {
            let next = self.add_state();
            self.add_edge(cur, Label::Sym(s), next);
            cur = next;
        }
        cur
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn edges(&self, q: usize) -> &[(Label, usize)] {
        &self.edges[q]
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Sorted ε-closure of a state set.
    pub fn eps_closure(&self, states: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<usize> = Vec::new();
        for &q in states {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
        while let Some(q) = stack.pop() {
            for &(label, r) in &self.edges[q] {
                if label == Label::Eps && !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        (0..self.num_states()).filter(|&q| seen[q]).collect()
    }

    /// Symbol successors of a state set, closed under ε.
    pub fn step_set(&self, states: &[usize], symbol_index: usize) -> Vec<usize> {
        let mut next = Vec::new();
        for &q in states {
            for &(label, r) in &self.edges[q] {
                if label == Label::Sym(symbol_index) {
                    next.push(r);
                }
            }
        }
        self.eps_closure(&next)
    }

    /// Membership test by subset simulation.
    pub fn run(&self, w: &Word) -> Result<bool> {
        let word = self.alphabet.encode(w)?;
        let mut cur = self.eps_closure(&self.initial);
        for s in word {
            if cur.is_empty() {
                return Ok(false);
            }
            cur = self.step_set(&cur, s);
        }
        Ok(cur.iter().any(|&q| self.accepting[q]))
    }

    pub fn widen(&self, alphabet: &Alphabet) -> Result<Nfa> {
        if !self.alphabet.is_subset_of(alphabet) {
            return Err(Error::AlphabetMismatch(format!(
                "cannot widen {{{}}} to {{{}}}",
                self.alphabet, alphabet
            )));
        }
        let remap: Vec<usize> = self
            .alphabet
            .symbols()
            .iter()
            .map(|&c| alphabet.index_of(c).expect("subset checked"))
            .collect();
        let mut out = self.clone();
        out.alphabet = alphabet.clone();
        for row in &mut out.edges {
            for (label, _) in row.iter_mut() {
                if let Label::Sym(s) = label {
                    *s = remap[*s];
                }
            }
        }
        Ok(out)
    }

    /// Renumbers states in breadth-first discovery order from the initial
    /// states, following edges in insertion order; unreachable states are
    /// dropped.
    pub fn canonical(&self) -> Nfa {
        let n = self.num_states();
        let mut new_id = vec![usize::MAX; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            if new_id[q] == usize::MAX {
                new_id[q] = order.len();
                order.push(q);
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for &(_, r) in &self.edges[q] {
                if new_id[r] == usize::MAX {
                    new_id[r] = order.len();
                    order.push(r);
                    queue.push_back(r);
                }
            }
        }
        let mut out = Nfa::with_states(self.alphabet.clone(), order.len().max(1));
        if order.is_empty() {
            // no initial state at all: keep a lone non-initial state so the
            // machine stays printable
            return out;
        }
        for &q in &self.initial {
            out.add_initial(new_id[q]);
        }
        for (new, &old) in order.iter().enumerate() {
            out.accepting[new] = self.accepting[old];
            for &(label, r) in &self.edges[old] {
                out.add_edge(new, label, new_id[r]);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(['a', 'b']).unwrap()
    }

    #[test]
    fn eps_edge_accepts_empty_word() {
        let mut n = Nfa::with_states(ab(), 2);
        n.add_initial(0);
        n.set_accepting(1, true);
        n.add_transition(0, None, 1).unwrap();
        assert!(n.run(&Word::empty()).unwrap());
        assert!(!n.run(&Word::from("a")).unwrap());
    }

    #[test]
    fn two_accepting_initial_states() {
        let mut n = Nfa::with_states(ab(), 2);
        n.add_initial(0);
        n.add_initial(1);
        n.set_accepting(0, true);
        n.set_accepting(1, true);
        assert!(n.run(&Word::empty()).unwrap());
    }

    #[test]
    fn union_gadget() {
        let mut n = Nfa::with_states(ab(), 3);
        n.add_initial(0);
        n.add_transition(0, Some('a'), 1).unwrap();
        n.add_transition(0, Some('b'), 2).unwrap();
        n.set_accepting(1, true);
        n.set_accepting(2, true);
        assert!(n.run(&Word::from("a")).unwrap());
        assert!(n.run(&Word::from("b")).unwrap());
        assert!(!n.run(&Word::empty()).unwrap());
        assert!(!n.run(&Word::from("ab")).unwrap());
    }

    #[test]
    fn widen_remaps_symbols() {
        let mut n = Nfa::with_states(Alphabet::new(['b']).unwrap(), 2);
        n.add_initial(0);
        n.add_transition(0, Some('b'), 1).unwrap();
        n.set_accepting(1, true);
        let w = n.widen(&ab()).unwrap();
        assert!(w.run(&Word::from("b")).unwrap());
        assert!(!w.run(&Word::from("a")).unwrap());
    }
}
