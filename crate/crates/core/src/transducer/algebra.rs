use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::Dfst;
use crate::automata::{Dfa, Label, Nfa, Word};
use crate::error::{Error, Result};

/// Breadth-first interning of product states.
struct PairSpace<K> {
    ids: HashMap<K, usize>,
    keys: Vec<K>,
    queue: VecDeque<usize>,
}

impl<K: Copy + Eq + Hash> PairSpace<K> {
    fn new(start: K) -> Self {
        PairSpace {
            ids: HashMap::from([(start, 0)]),
            keys: vec![start],
            queue: VecDeque::from([0]),
        }
    }

    /// Returns the id of `k` and whether it was newly discovered.
    fn intern(&mut self, k: K) -> (usize, bool) {
        if let Some(&id) = self.ids.get(&k) {
            return (id, false);
        }
        let id = self.keys.len();
        self.ids.insert(k, id);
        self.keys.push(k);
        self.queue.push_back(id);
        (id, true)
    }

    fn next(&mut self) -> Option<(usize, K)> {
        self.queue.pop_front().map(|id| (id, self.keys[id]))
    }
}

fn ensure_subset(
    what: &str,
    sub: &crate::automata::Alphabet,
    sup: &crate::automata::Alphabet,
) -> Result<()> {
    if sub.is_subset_of(sup) {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!(
            "{what}: {{{sub}}} is not contained in {{{sup}}}"
        )))
    }
}

/// `compose_dfst(t1, t2)(x) = t2(t1(x))`, undefined wherever either stage is.
pub fn compose_dfst(t1: &Dfst, t2: &Dfst) -> Result<Dfst> {
    ensure_subset(
        "output of the first transducer vs input of the second",
        t1.out_alphabet(),
        t2.in_alphabet(),
    )?;
    let mut space = PairSpace::new((t1.initial(), t2.initial()));
    let mut out = Dfst::with_states(t1.in_alphabet().clone(), t2.out_alphabet().clone(), 1, 0);
    while let Some((id, (q1, q2))) = space.next() {
        if t1.is_accepting(q1) {
            if let Some((mut emitted, end)) = t2.run_from(q2, t1.final_output(q1)) {
                if t2.is_accepting(end) {
                    for &c in t2.final_output(end).iter() {
                        emitted.push(c);
                    }
                    out.set_accepting(id, true);
                    out.set_final_output(id, emitted)?;
                }
            }
        }
        for s in 0..t1.in_alphabet().len() {
            let Some((w1, r1)) = t1.transition(q1, s) else {
                continue;
            };
            // t2 stuck on t1's output: the composite is undefined from here
            let Some((w2, r2)) = t2.run_from(q2, w1) else {
                continue;
            };
            let (target, fresh) = space.intern((*r1, r2));
            if fresh {
                out.add_state();
            }
            out.set_transition_index(id, s, w2, target)?;
        }
    }
    Ok(out)
}

/// Automaton for `{ x | t(x) is defined and t(x) ∈ L(a) }`, over the input
/// alphabet of `t`.
pub fn preimage_automaton(t: &Dfst, a: &Dfa) -> Result<Nfa> {
    ensure_subset(
        "transducer output vs automaton",
        t.out_alphabet(),
        a.alphabet(),
    )?;
    let mut space = PairSpace::new((t.initial(), a.initial()));
    let mut out = Nfa::with_states(t.in_alphabet().clone(), 1);
    out.add_initial(0);
    while let Some((id, (qt, qa))) = space.next() {
        if t.is_accepting(qt) {
            if let Some(end) = a.run_from(qa, t.final_output(qt)) {
                if a.is_accepting(end) {
                    out.set_accepting(id, true);
                }
            }
        }
        for s in 0..t.in_alphabet().len() {
            let Some((w, rt)) = t.transition(qt, s) else {
                continue;
            };
            let Some(ra) = a.run_from(qa, w) else {
                continue;
            };
            let (target, fresh) = space.intern((*rt, ra));
            if fresh {
                out.add_state();
            }
            out.add_edge(id, Label::Sym(s), target);
        }
    }
    Ok(out)
}

/// Automaton for `{ t(x) | x ∈ L(a), t(x) defined }`, over the output
/// alphabet of `t`. Each transition's output word becomes a chain of
/// single-symbol edges (an ε-edge when the output is empty).
pub fn image_nfa(t: &Dfst, a: &Dfa) -> Result<Nfa> {
    ensure_subset(
        "automaton vs transducer input",
        a.alphabet(),
        t.in_alphabet(),
    )?;
    let a = a.widen(t.in_alphabet())?;
    let out_al = t.out_alphabet().clone();
    let encode = |w: &Word| out_al.encode(w).expect("outputs checked on insertion");

    let mut space = PairSpace::new((t.initial(), a.initial()));
    let mut out = Nfa::with_states(out_al.clone(), 1);
    out.add_initial(0);
    // pair states are allocated lazily; chain states are interleaved
    let mut state_of: HashMap<usize, usize> = HashMap::from([(0, 0)]);
    while let Some((id, (qt, qa))) = space.next() {
        let here = state_of[&id];
        if t.is_accepting(qt) && a.is_accepting(qa) {
            let fin = encode(t.final_output(qt));
            if fin.is_empty() {
                out.set_accepting(here, true);
            } else {
                let entry = out.add_state();
                out.add_edge(here, Label::Eps, entry);
                let end = out.add_path(entry, &fin);
                out.set_accepting(end, true);
            }
        }
        for s in 0..t.in_alphabet().len() {
            let Some((w, rt)) = t.transition(qt, s) else {
                continue;
            };
            let Some(ra) = a.step(qa, s) else {
                continue;
            };
            let (pair, fresh) = space.intern((*rt, ra));
            if fresh {
                let st = out.add_state();
                state_of.insert(pair, st);
            }
            let target = state_of[&pair];
            let w = encode(w);
            match w.split_last() {
                None => out.add_edge(here, Label::Eps, target),
                Some((&last, init)) => {
                    let end = out.add_path(here, init);
                    out.add_edge(end, Label::Sym(last), target);
                }
            }
        }
    }
    Ok(out.canonical())
}

/// `ID_L`: maps `w` to itself when `w ∈ L(a)` and is undefined otherwise.
/// Same state graph as `a`; every transition echoes its input symbol.
pub fn identity_transducer(a: &Dfa) -> Dfst {
    let al = a.alphabet().clone();
    let mut t = Dfst::with_states(al.clone(), al.clone(), a.num_states(), a.initial());
    for q in a.accepting_states() {
        t.set_accepting(q, true);
    }
    for (q, s, r) in a.transitions() {
        let echo = Word::from(vec![al.symbols()[s]]);
        t.set_transition_index(q, s, echo, r)
            .expect("dfa transitions are unique");
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{determinize, equivalent, regex_to_nfa, regex_to_nfa_over, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::new(['a', 'b']).unwrap()
    }

    fn dfa(p: &str, al: &Alphabet) -> Dfa {
        determinize(&regex_to_nfa_over(p, al).unwrap())
    }

    fn rewriter(from: char, to: &str, out: &Alphabet) -> Dfst {
        let mut t = Dfst::with_states(Alphabet::new([from]).unwrap(), out.clone(), 1, 0);
        t.set_accepting(0, true);
        t.set_transition(0, from, Word::from(to), 0).unwrap();
        t
    }

    #[test]
    fn identity_on_a_star() {
        let a = Alphabet::new(['a']).unwrap();
        let id = identity_transducer(&dfa("a*", &a));
        assert_eq!(id.apply(&Word::from("aa")).unwrap(), Some(Word::from("aa")));
        let twice = compose_dfst(&id, &id).unwrap();
        for n in 0..5 {
            let w = Word::from("a").repeat(n);
            assert_eq!(twice.apply(&w).unwrap(), Some(w));
        }
    }

    #[test]
    fn identity_on_ab_star() {
        let id = identity_transducer(&dfa("(ab)*", &ab()));
        assert_eq!(id.apply(&Word::from("ab")).unwrap(), Some(Word::from("ab")));
        assert_eq!(id.apply(&Word::from("a")).unwrap(), None);
    }

    #[test]
    fn chained_rewriters() {
        let t1 = rewriter('a', "b", &Alphabet::new(['b']).unwrap());
        let t2 = rewriter('b', "c", &Alphabet::new(['c']).unwrap());
        let t = compose_dfst(&t1, &t2).unwrap();
        assert_eq!(t.apply(&Word::from("aa")).unwrap(), Some(Word::from("cc")));
    }

    #[test]
    fn composition_propagates_undefinedness() {
        let t1 = rewriter('a', "b", &ab());
        // defined only on a*
        let mut t2 = Dfst::with_states(ab(), ab(), 1, 0);
        t2.set_accepting(0, true);
        t2.set_transition(0, 'a', Word::from("a"), 0).unwrap();
        let t = compose_dfst(&t1, &t2).unwrap();
        assert_eq!(t.apply(&Word::from("a")).unwrap(), None);
        assert_eq!(t.apply(&Word::empty()).unwrap(), Some(Word::empty()));
    }

    #[test]
    fn composition_alphabet_mismatch() {
        let t1 = rewriter('a', "b", &Alphabet::new(['b']).unwrap());
        assert!(matches!(
            compose_dfst(&t1, &t1),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn composition_chains_final_outputs() {
        let a = Alphabet::new(['a']).unwrap();
        let mut t1 = rewriter('a', "a", &a);
        t1.set_final_output(0, Word::from("a")).unwrap();
        let mut t2 = rewriter('a', "aa", &a);
        t2.set_final_output(0, Word::from("a")).unwrap();
        let t = compose_dfst(&t1, &t2).unwrap();
        // t1(a) = aa, t2(aa) = aaaa + a
        assert_eq!(
            t.apply(&Word::from("a")).unwrap(),
            Some(Word::from("aaaaa"))
        );
    }

    #[test]
    fn preimage_examples() {
        let universal = Dfa::universal(ab());
        let id = identity_transducer(&universal);
        let target = dfa("(ab)*", &ab());
        assert!(equivalent(
            &preimage_automaton(&id, &target).unwrap(),
            &target.to_nfa()
        ));

        let t = rewriter('a', "ab", &ab());
        let pre = preimage_automaton(&t, &target).unwrap();
        assert!(equivalent(&pre, &regex_to_nfa("a*").unwrap()));

        let pre = preimage_automaton(&t, &Dfa::empty(ab())).unwrap();
        assert!(crate::automata::shortest_word(&pre).is_none());
    }

    #[test]
    fn image_examples() {
        let target = dfa("(ab)*", &ab());
        let id = identity_transducer(&Dfa::universal(ab()));
        assert!(equivalent(
            &image_nfa(&id, &target).unwrap(),
            &target.to_nfa()
        ));

        let a = Alphabet::new(['a']).unwrap();
        let t = rewriter('a', "b", &Alphabet::new(['b']).unwrap());
        let img = image_nfa(&t, &dfa("a*", &a)).unwrap();
        assert!(equivalent(&img, &regex_to_nfa("b*").unwrap()));

        let img = image_nfa(&t, &Dfa::empty(a)).unwrap();
        assert!(crate::automata::shortest_word(&img).is_none());
    }

    #[test]
    fn image_includes_final_outputs() {
        let a = Alphabet::new(['a']).unwrap();
        let mut t = rewriter('a', "", &a);
        t.set_final_output(0, Word::from("aa")).unwrap();
        let img = image_nfa(&t, &dfa("a*", &a)).unwrap();
        assert!(equivalent(&img, &regex_to_nfa("aa").unwrap()));
    }

    #[test]
    fn identity_image_over_universal() {
        let target = dfa("a(ba)*|b", &ab());
        let id = identity_transducer(&target);
        let img = image_nfa(&id, &Dfa::universal(ab())).unwrap();
        assert!(equivalent(&img, &target.to_nfa()));
    }
}
