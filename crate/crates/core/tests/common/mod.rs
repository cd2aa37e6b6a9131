#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regreal::automata::{trim, Alphabet, Dfa, Nfa, Word};
use regreal::transducer::Dfst;

pub fn ab() -> Alphabet {
    Alphabet::new(['a', 'b']).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Partial DFA: each transition exists with probability `density`.
pub fn random_dfa(rng: &mut ChaCha8Rng, states: usize, al: &Alphabet, density: f64) -> Dfa {
    let mut d = Dfa::with_states(al.clone(), states, 0);
    for q in 0..states {
        d.set_accepting(q, rng.gen_bool(0.4));
        for &c in al.symbols() {
            if rng.gen_bool(density) {
                d.set_transition(q, c, rng.gen_range(0..states)).unwrap();
            }
        }
    }
    d
}

pub fn random_word(rng: &mut ChaCha8Rng, al: &Alphabet, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| al.symbols()[rng.gen_range(0..al.len())])
        .collect()
}

pub fn random_dfst(
    rng: &mut ChaCha8Rng,
    states: usize,
    input: &Alphabet,
    output: &Alphabet,
    max_out: usize,
) -> Dfst {
    let mut t = Dfst::with_states(input.clone(), output.clone(), states, 0);
    for q in 0..states {
        if rng.gen_bool(0.5) {
            t.set_accepting(q, true);
            let fin = random_word(rng, output, 1);
            t.set_final_output(q, fin).unwrap();
        }
        for &c in input.symbols() {
            if rng.gen_bool(0.8) {
                let out = random_word(rng, output, max_out);
                t.set_transition(q, c, out, rng.gen_range(0..states))
                    .unwrap();
            }
        }
    }
    t
}

/// Every DFA over {a, b} with at most `max_states` states, trimmed and
/// deduplicated by canonical form.
pub fn all_trim_dfas(max_states: usize) -> Vec<Dfa> {
    let al = ab();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in 1..=max_states {
        let slots = 2 * n;
        let choices = (n + 1) as u64;
        let total = choices.pow(slots as u32);
        for code in 0..total {
            for acc in 0..(1u32 << n) {
                let mut d = Dfa::with_states(al.clone(), n, 0);
                let mut c = code;
                for slot in 0..slots {
                    let pick = (c % choices) as usize;
                    c /= choices;
                    if pick > 0 {
                        d.set_transition(slot / 2, al.symbols()[slot % 2], pick - 1)
                            .unwrap();
                    }
                }
                for q in 0..n {
                    d.set_accepting(q, acc & (1 << q) != 0);
                }
                let t = trim(&d);
                if seen.insert(t.to_string()) {
                    out.push(t);
                }
            }
        }
    }
    out
}

pub fn words_upto(al: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &c in al.symbols() {
                let mut x = w.clone();
                x.push(c);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn dfa_accepts(d: &Dfa, w: &Word) -> bool {
    let mut q = d.initial();
    for &c in w.iter() {
        match d.step_char(q, c) {
            Some(r) => q = r,
            None => return false,
        }
    }
    d.is_accepting(q)
}

/// Direct ε-closure simulation, independent of the library's subset code.
pub fn nfa_accepts(n: &Nfa, w: &Word) -> bool {
    use regreal::automata::Label;
    let close = |set: &mut Vec<bool>| {
        let mut stack: Vec<usize> = (0..set.len()).filter(|&q| set[q]).collect();
        while let Some(q) = stack.pop() {
            for &(l, r) in n.edges(q) {
                if l == Label::Eps && !set[r] {
                    set[r] = true;
                    stack.push(r);
                }
            }
        }
    };
    let mut cur = vec![false; n.num_states()];
    for &q in n.initial() {
        cur[q] = true;
    }
    close(&mut cur);
    for &c in w.iter() {
        let Some(s) = n.alphabet().index_of(c) else {
            return false;
        };
        let mut next = vec![false; n.num_states()];
        for q in (0..n.num_states()).filter(|&q| cur[q]) {
            for &(l, r) in n.edges(q) {
                if l == Label::Sym(s) {
                    next[r] = true;
                }
            }
        }
        close(&mut next);
        cur = next;
    }
    (0..n.num_states()).any(|q| cur[q] && n.is_accepting(q))
}

/// Reference semantics of a transducer, written out step by step.
pub fn dfst_apply(t: &Dfst, x: &Word) -> Option<Word> {
    let mut q = t.initial();
    let mut out = Vec::new();
    for &c in x.iter() {
        let s = t.in_alphabet().index_of(c)?;
        let (w, r) = t.transition(q, s)?;
        out.extend_from_slice(w);
        q = *r;
    }
    if !t.is_accepting(q) {
        return None;
    }
    out.extend_from_slice(t.final_output(q));
    Some(Word::from(out))
}

/// `y ∈ t(L(a))`, by search over (transducer state, automaton state,
/// matched prefix of y).
pub fn in_image(t: &Dfst, a: &Dfa, y: &Word) -> bool {
    let start = (t.initial(), a.initial(), 0usize);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((qt, qa, i)) = queue.pop_front() {
        if t.is_accepting(qt) && a.is_accepting(qa) && y[i..] == t.final_output(qt)[..] {
            return true;
        }
        for (s, &c) in t.in_alphabet().symbols().iter().enumerate() {
            let Some((w, rt)) = t.transition(qt, s) else {
                continue;
            };
            let Some(ra) = a.step_char(qa, c) else {
                continue;
            };
            if y[i..].starts_with(w) {
                let next = (*rt, ra, i + w.len());
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    false
}

/// Labels of all cycles at `q` of length at most `max_len`.
pub fn cycles_at(d: &Dfa, q: usize, max_len: usize) -> Vec<Vec<char>> {
    let mut out = Vec::new();
    let mut stack = vec![(q, Vec::new())];
    while let Some((cur, label)) = stack.pop() {
        if label.len() == max_len {
            continue;
        }
        for &c in d.alphabet().symbols() {
            if let Some(r) = d.step_char(cur, c) {
                let mut next = label.clone();
                next.push(c);
                if r == q {
                    out.push(next.clone());
                }
                stack.push((r, next));
            }
        }
    }
    out
}

/// Brute force: some state of the trimmed machine has two non-commuting
/// cycle labels of length at most `2·|Q|`.
pub fn brute_force_hard(d: &Dfa) -> bool {
    let t = trim(d);
    let bound = 2 * t.num_states();
    (0..t.num_states()).any(|q| {
        let cycles = cycles_at(&t, q, bound);
        cycles.iter().any(|c1| {
            cycles.iter().any(|c2| {
                let mut x = c1.clone();
                x.extend(c2);
                let mut y = c2.clone();
                y.extend(c1);
                x != y
            })
        })
    })
}

pub fn bfs_reachable(nodes: usize, edges: &[(usize, usize)], s: usize, t: usize) -> bool {
    let mut adj = vec![Vec::new(); nodes];
    for &(u, v) in edges {
        adj[u].push(v);
    }
    let mut seen = vec![false; nodes];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen[t]
}
