use std::collections::{HashMap, VecDeque};

use super::{Alphabet, Dfa, Label, Nfa, Word};
use crate::error::{Error, Result};

/// Subset construction over ε-closures. Only non-empty subsets become
/// states, so the result may be partial.
pub fn determinize(n: &Nfa) -> Dfa {
    let start = n.eps_closure(n.initial());
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut subsets = vec![start.clone()];
    ids.insert(start, 0);
    let mut dfa = Dfa::with_states(n.alphabet().clone(), 1, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let current = subsets[id].clone();
        if current.iter().any(|&q| n.is_accepting(q)) {
            dfa.set_accepting(id, true);
        }
        for s in 0..n.alphabet().len() {
            let next = n.step_set(&current, s);
            if next.is_empty() {
                continue;
            }
            let target = match ids.get(&next) {
                Some(&t) => t,
                None => {
                    let t = dfa.add_state();
                    ids.insert(next.clone(), t);
                    subsets.push(next);
                    queue.push_back(t);
                    t
                }
            };
            dfa.set_transition_index(id, s, target)
                .expect("fresh subset transition");
        }
    }
    dfa
}

fn forward_reachable(d: &Dfa) -> Vec<bool> {
    let mut seen = vec![false; d.num_states()];
    seen[d.initial()] = true;
    let mut stack = vec![d.initial()];
    while let Some(q) = stack.pop() {
        for s in 0..d.alphabet().len() {
            if let Some(r) = d.step(q, s) {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
    }
    seen
}

fn co_reachable(d: &Dfa) -> Vec<bool> {
    let n = d.num_states();
    let mut preds = vec![Vec::new(); n];
    for (q, _, r) in d.transitions() {
        preds[r].push(q);
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = d.accepting_states().collect();
    for &q in &stack {
        seen[q] = true;
    }
    while let Some(q) = stack.pop() {
        for &p in &preds[q] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Keeps the states that are both reachable and co-reachable. An empty
/// language yields the canonical empty machine.
pub fn trim(d: &Dfa) -> Dfa {
    let fwd = forward_reachable(d);
    let bwd = co_reachable(d);
    if !(fwd[d.initial()] && bwd[d.initial()]) {
        return Dfa::empty(d.alphabet().clone());
    }
    let keep: Vec<usize> = (0..d.num_states()).filter(|&q| fwd[q] && bwd[q]).collect();
    d.restrict(&keep, d.initial()).canonical()
}

/// Merges language-equivalent states of a trimmed DFA by partition
/// refinement. Missing transitions count as their own class, which is sound
/// because a trimmed machine has no dead states.
pub(crate) fn merge_equivalent(d: &Dfa) -> Dfa {
    let n = d.num_states();
    let width = d.alphabet().len();
    let mut class: Vec<usize> = (0..n).map(|q| usize::from(d.is_accepting(q))).collect();
    let mut count = 0;
    loop {
        let mut ids: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|q| {
                let sig = (0..width).map(|s| d.step(q, s).map(|r| class[r])).collect();
                let len = ids.len();
                *ids.entry((class[q], sig)).or_insert(len)
            })
            .collect();
        let done = ids.len() == count;
        count = ids.len();
        class = next;
        if done {
            break;
        }
    }
    let mut out = Dfa::with_states(d.alphabet().clone(), count, class[d.initial()]);
    for q in 0..n {
        out.set_accepting(class[q], d.is_accepting(q));
        for s in 0..width {
            if let Some(r) = d.step(q, s) {
                out.set_transition_index(class[q], s, class[r])
                    .expect("equivalent states agree on successors");
            }
        }
    }
    out.canonical()
}

/// Completes with a sink where needed and flips acceptance.
pub fn complement(d: &Dfa) -> Dfa {
    let mut out = d.clone();
    if !d.is_complete() {
        let sink = out.add_state();
        for q in 0..out.num_states() {
            for s in 0..out.alphabet().len() {
                if out.step(q, s).is_none() {
                    out.set_transition_index(q, s, sink)
                        .expect("hole filled once");
                }
            }
        }
    }
    for q in 0..out.num_states() {
        let acc = out.is_accepting(q);
        out.set_accepting(q, !acc);
    }
    out.canonical()
}

/// Product automaton on reachable pairs. ε-moves advance one side at a time.
pub fn product_intersect(a: &Nfa, b: &Nfa) -> Result<Nfa> {
    if !(a.alphabet().is_subset_of(b.alphabet()) && b.alphabet().is_subset_of(a.alphabet())) {
        return Err(Error::AlphabetMismatch(format!(
            "{{{}}} vs {{{}}}",
            a.alphabet(),
            b.alphabet()
        )));
    }
    let b = b.widen(a.alphabet())?;
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = Vec::new();
    let mut out = Nfa::with_states(a.alphabet().clone(), 0);
    let mut queue = VecDeque::new();

    let mut intern = |pair: (usize, usize),
                      out: &mut Nfa,
                      pairs: &mut Vec<(usize, usize)>,
                      queue: &mut VecDeque<usize>|
     -> usize {
        *ids.entry(pair).or_insert_with(|| {
            let id = out.add_state();
            pairs.push(pair);
            queue.push_back(id);
            id
        })
    };

    for &p in a.initial() {
        for &q in b.initial() {
            let id = intern((p, q), &mut out, &mut pairs, &mut queue);
            out.add_initial(id);
        }
    }
    while let Some(id) = queue.pop_front() {
        let (p, q) = pairs[id];
        if a.is_accepting(p) && b.is_accepting(q) {
            out.set_accepting(id, true);
        }
        for &(label, p2) in a.edges(p) {
            if label == Label::Eps {
                let t = intern((p2, q), &mut out, &mut pairs, &mut queue);
                out.add_edge(id, Label::Eps, t);
            }
        }
        for &(label, q2) in b.edges(q) {
            if label == Label::Eps {
                let t = intern((p, q2), &mut out, &mut pairs, &mut queue);
                out.add_edge(id, Label::Eps, t);
            }
        }
        for &(la, p2) in a.edges(p) {
            let Label::Sym(s) = la else { continue };
            for &(lb, q2) in b.edges(q) {
                if lb == Label::Sym(s) {
                    let t = intern((p2, q2), &mut out, &mut pairs, &mut queue);
                    out.add_edge(id, Label::Sym(s), t);
                }
            }
        }
    }
    if out.num_states() == 0 {
        return Ok(Nfa::with_states(a.alphabet().clone(), 1));
    }
    Ok(out)
}

/// Number of symbol moves from each state to acceptance (ε costs nothing).
fn distance_to_accept(n: &Nfa) -> Vec<usize> {
    let size = n.num_states();
    let mut rev: Vec<Vec<(usize, bool)>> = vec![Vec::new(); size];
    for q in 0..size {
        for &(label, r) in n.edges(q) {
            rev[r].push((q, label == Label::Eps));
        }
    }
    let mut dist = vec![usize::MAX; size];
    let mut deque = VecDeque::new();
    for q in n.accepting_states() {
        dist[q] = 0;
        deque.push_back(q);
    }
    while let Some(q) = deque.pop_front() {
        for &(p, eps) in &rev[q] {
            let d = dist[q] + usize::from(!eps);
            if d < dist[p] {
                dist[p] = d;
                if eps {
                    deque.push_front(p);
                } else {
                    deque.push_back(p);
                }
            }
        }
    }
    dist
}

/// Shortest accepted word, lexicographically least among the shortest (by
/// declared symbol order), or `None` for the empty language.
pub fn shortest_word(n: &Nfa) -> Option<Word> {
    let dist = distance_to_accept(n);
    let best = |set: &[usize]| set.iter().map(|&q| dist[q]).min().unwrap_or(usize::MAX);
    let mut current = n.eps_closure(n.initial());
    let mut remaining = best(&current);
    if remaining == usize::MAX {
        return None;
    }
    let mut word = Word::empty();
    while remaining > 0 {
        let (s, next) = (0..n.alphabet().len())
            .map(|s| (s, n.step_set(&current, s)))
            .find(|(_, next)| best(next) == remaining - 1)
            .expect("distance labels guarantee a successor");
        word.push(n.alphabet().symbols()[s]);
        current = next;
        remaining -= 1;
    }
    Some(word)
}

/// Shortest word of `L(b) \ L(a)`, over the union of both alphabets.
pub fn inclusion_counterexample(a: &Dfa, b: &Nfa) -> Option<Word> {
    let union = a.alphabet().union(b.alphabet());
    let a = a.widen(&union).expect("union is a superset");
    let b = b.widen(&union).expect("union is a superset");
    let outside = complement(&a).to_nfa();
    let prod = product_intersect(&b, &outside).expect("alphabets agree after widening");
    shortest_word(&prod)
}

/// `L(b) ⊆ L(a)`.
pub fn includes(a: &Dfa, b: &Nfa) -> bool {
    inclusion_counterexample(a, b).is_none()
}

/// A word accepted by exactly one of two machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub word: Word,
    /// `true` when the word is accepted by the first machine only.
    pub in_first: bool,
}

/// Shortest separating word (shortlex over the union alphabet), or `None`
/// when the languages coincide.
pub fn separating_word(a: &Nfa, b: &Nfa) -> Option<Separation> {
    let union: Alphabet = a.alphabet().union(b.alphabet());
    let only_a = inclusion_counterexample(&determinize(b), a);
    let only_b = inclusion_counterexample(&determinize(a), b);
    match (only_a, only_b) {
        (None, None) => None,
        (Some(w), None) => Some(Separation {
            word: w,
            in_first: true,
        }),
        (None, Some(w)) => Some(Separation {
            word: w,
            in_first: false,
        }),
        (Some(x), Some(y)) => Some(if union.cmp_shortlex(&x, &y).is_le() {
            Separation {
                word: x,
                in_first: true,
            }
        } else {
            Separation {
                word: y,
                in_first: false,
            }
        }),
    }
}

pub fn equivalent(a: &Nfa, b: &Nfa) -> bool {
    separating_word(a, b).is_none()
}
