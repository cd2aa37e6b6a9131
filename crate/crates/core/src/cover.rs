//! Covering transducers for hard filters.
//!
//! From a hardness witness `(q, p, u, v, s)` we read `p` silently, then parse
//! the rest of the input as a sequence of dispatch words
//!
//! ```text
//! U = u·v   (code bit 0)      V = v·u   (code bit 1)      S = u·u·s   (stop)
//! ```
//!
//! All three are cycles or exits at `q` and no one is a prefix of another, so
//! a trie over them is deterministic. Every `L` bits decode to one target
//! letter, where `L = max(1, ⌈log₂|Γ|⌉)`. The resulting transducer maps the
//! filter onto `Γ*`; composing with the identity on `R` then maps it onto `R`.

use std::collections::HashMap;

use crate::automata::{equivalent, separating_word, trim, Alphabet, Dfa, Separation, Word};
use crate::classify::{classify, Classification, HardnessWitness};
use crate::error::{Error, Result};
use crate::transducer::{compose_dfst, identity_transducer, image_nfa, Dfst};

/// The dispatch words and block code behind a surjection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPlan {
    pub witness: HardnessWitness,
    pub u_code: Word,
    pub v_code: Word,
    pub stop: Word,
    pub target: Alphabet,
    pub block_len: usize,
}

impl CoverPlan {
    pub fn new(witness: &HardnessWitness, target: &Alphabet) -> Result<Self> {
        if target.is_empty() {
            return Err(Error::AlphabetMismatch(
                "target alphabet must be non-empty".to_string(),
            ));
        }
        let (u, v) = (&witness.u, &witness.v);
        let mut block_len = 1;
        while (1usize << block_len) < target.len() {
            block_len += 1;
        }
        Ok(CoverPlan {
            witness: witness.clone(),
            u_code: u.concat(v),
            v_code: v.concat(u),
            stop: u.concat(u).concat(&witness.s),
            target: target.clone(),
            block_len,
        })
    }

    /// MSB-first code of each target letter; each code is a list of bits
    /// (`false` = U, `true` = V).
    pub fn code(&self, letter: char) -> Option<Vec<bool>> {
        let i = self.target.index_of(letter)?;
        Some(
            (0..self.block_len)
                .rev()
                .map(|b| (i >> b) & 1 == 1)
                .collect(),
        )
    }

    /// Letter for a full block; codes past the alphabet go to the last letter.
    pub fn decode(&self, bits: &[bool]) -> char {
        let value = bits.iter().fold(0usize, |acc, &b| acc * 2 + usize::from(b));
        let symbols = self.target.symbols();
        symbols[value.min(symbols.len() - 1)]
    }

    /// The input word `p · codes(y) · S` that the surjection maps to `y`.
    pub fn encode(&self, y: &Word) -> Result<Word> {
        let mut w = self.witness.p.clone();
        for &c in y.iter() {
            for bit in self.code(c).ok_or(Error::OutOfAlphabet(c))? {
                w = w.concat(if bit { &self.v_code } else { &self.u_code });
            }
        }
        Ok(w.concat(&self.stop))
    }

    fn check_dispatch(&self) -> Result<()> {
        let words = [&self.u_code, &self.v_code, &self.stop];
        for (i, a) in words.iter().enumerate() {
            for b in &words[i + 1..] {
                if a.is_prefix_of(b) || b.is_prefix_of(a) {
                    return Err(Error::InvalidWitness(format!(
                        "dispatch words {a} and {b} are prefix-comparable"
                    )));
                }
            }
        }
        Ok(())
    }
}

struct Builder {
    t: Dfst,
    // (trie root, word read so far) -> state
    trie: HashMap<(usize, Vec<char>), usize>,
}

impl Builder {
    /// Adds `root --word/out--> target` through shared trie states.
    fn add_word(&mut self, root: usize, word: &Word, out: Word, target: usize) -> Result<()> {
        let (&last, init) = word.split_last().expect("dispatch words are non-empty");
        let mut cur = root;
        for (i, &c) in init.iter().enumerate() {
            let key = (root, init[..=i].to_vec());
            cur = match self.trie.get(&key) {
                Some(&next) => next,
                None => {
                    let next = self.t.add_state();
                    self.t.set_transition(cur, c, Word::empty(), next)?;
                    self.trie.insert(key, next);
                    next
                }
            };
        }
        self.t.set_transition(cur, last, out, target)
    }
}

/// A transducer whose image over `f` is exactly `Γ*`.
pub fn surjection_to_star(f: &Dfa, w: &HardnessWitness, target: &Alphabet) -> Result<Dfst> {
    w.check(&trim(f))?;
    let plan = CoverPlan::new(w, target)?;
    plan.check_dispatch()?;
    let sigma = f.alphabet().clone();
    let mut b = Builder {
        t: Dfst::with_states(sigma, target.clone(), 1, 0),
        trie: HashMap::new(),
    };
    let mut cur = 0;
    for &c in w.p.iter() {
        let next = b.t.add_state();
        b.t.set_transition(cur, c, Word::empty(), next)?;
        cur = next;
    }
    // one trie root per pending bit prefix, the empty prefix first
    let mut roots: HashMap<Vec<bool>, usize> = HashMap::from([(Vec::new(), cur)]);
    let mut pending = vec![Vec::<bool>::new()];
    let accept = b.t.add_state();
    b.t.set_accepting(accept, true);
    b.add_word(cur, &plan.stop, Word::empty(), accept)?;
    while let Some(bits) = pending.pop() {
        let root = roots[&bits];
        for (bit, word) in [(false, &plan.u_code), (true, &plan.v_code)] {
            let mut next_bits = bits.clone();
            next_bits.push(bit);
            let (target_state, out) = if next_bits.len() == plan.block_len {
                let letter = plan.decode(&next_bits);
                (roots[&Vec::new()], Word::from(vec![letter]))
            } else {
                let st = match roots.get(&next_bits) {
                    Some(&st) => st,
                    None => {
                        let st = b.t.add_state();
                        roots.insert(next_bits.clone(), st);
                        pending.push(next_bits);
                        st
                    }
                };
                (st, Word::empty())
            };
            b.add_word(root, word, out, target_state)?;
        }
    }
    let t = b.t.canonical();
    let universal = Dfa::universal(target.clone()).to_nfa();
    if !equivalent(&image_nfa(&t, f)?, &universal) {
        return Err(Error::Verification(
            "surjection image differs from the full target language".to_string(),
        ));
    }
    Ok(t)
}

/// A transducer mapping the hard filter `f` onto `L(r)`.
pub fn cover(f: &Dfa, r: &Dfa) -> Result<Dfst> {
    let Classification::Hard(w) = classify(f)? else {
        return Err(Error::NotHard);
    };
    let onto = surjection_to_star(f, &w, r.alphabet())?;
    let t = compose_dfst(&onto, &identity_transducer(r))?;
    let verdict = verify_cover(&t, f, r)?;
    if let Some(sep) = verdict.separation {
        return Err(Error::Verification(format!(
            "cover image and target differ on {}",
            sep.word
        )));
    }
    Ok(t)
}

/// Result of comparing `image(t, f)` with `L(r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverVerdict {
    /// `None` when the image equals the target. Otherwise
    /// `in_first` means the word is in the image but not in the target.
    pub separation: Option<Separation>,
}

impl CoverVerdict {
    pub fn holds(&self) -> bool {
        self.separation.is_none()
    }
}

pub fn verify_cover(t: &Dfst, f: &Dfa, r: &Dfa) -> Result<CoverVerdict> {
    let image = image_nfa(t, f)?;
    Ok(CoverVerdict {
        separation: separating_word(&image, &r.to_nfa()),
    })
}
