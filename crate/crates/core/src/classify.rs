//! The hard/easy dichotomy for regular filters.
//!
//! A filter is *hard* when some state of its trimmed DFA carries two cycles
//! that are not prefix-comparable; otherwise it is *easy*, which is the same
//! as being bounded (contained in some `w1*…wn*`). Both verdicts come with a
//! certificate that [`Classification::verify`] re-checks mechanically:
//!
//! - hard: a [`HardnessWitness`] `(q, p, u, v, s)`;
//! - easy: a finite union of [`BoundedExpr`]s equivalent to the filter, plus
//!   an envelope `w1…wn` with `L ⊆ w1*…wn*`.
//!
//! Detection reduces to regular inclusion. For each state `q` on a cycle,
//! take a shortest cycle `u0` at `q` with primitive root `x` and test whether
//! every cycle at `q` lies in `x*`. A counterexample `v0` cannot commute with
//! `u0` (commuting words share a primitive root), so `(u0·v0, v0·u0)` is a
//! pair of equal-length, distinct, hence prefix-incomparable cycles.

use std::fmt;

use crate::automata::{
    condense, determinize, equivalent, includes, inclusion_counterexample, merge_equivalent,
    shortest_word, trim, Alphabet, Condensation, Dfa, Label, Nfa, Word,
};
use crate::error::{Error, Result};

/// Certificate of hardness against the trimmed filter DFA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardnessWitness {
    /// State of `trim(f)`.
    pub q: usize,
    /// Access word: initial state to `q`.
    pub p: Word,
    pub u: Word,
    pub v: Word,
    /// Exit word: `q` to an accepting state.
    pub s: Word,
}

impl HardnessWitness {
    /// Replays the witness on `trimmed` and checks that the cycles are
    /// distinct, prefix-incomparable and of equal length.
    pub fn check(&self, trimmed: &Dfa) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidWitness(m));
        if self.q >= trimmed.num_states() {
            return fail(format!("state {} does not exist", self.q));
        }
        if trimmed.run_from(trimmed.initial(), &self.p) != Some(self.q) {
            return fail(format!("p={} does not lead to state {}", self.p, self.q));
        }
        for (name, c) in [("u", &self.u), ("v", &self.v)] {
            if c.is_empty() || trimmed.run_from(self.q, c) != Some(self.q) {
                return fail(format!("{name}={c} is not a cycle at state {}", self.q));
            }
        }
        match trimmed.run_from(self.q, &self.s) {
            Some(end) if trimmed.is_accepting(end) => {}
            _ => return fail(format!("s={} does not reach acceptance", self.s)),
        }
        if self.u == self.v || self.u.is_prefix_of(&self.v) || self.v.is_prefix_of(&self.u) {
            return fail(format!(
                "u={} and v={} are prefix-comparable",
                self.u, self.v
            ));
        }
        if self.u.len() != self.v.len() {
            return fail("cycles are not normalized to equal length".to_string());
        }
        Ok(())
    }
}

/// `p · x1* y1 · … · xn* yn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundedExpr {
    pub prefix: Word,
    /// `(loop, bridge)` pairs.
    pub blocks: Vec<(Word, Word)>,
}

impl BoundedExpr {
    pub fn word(prefix: Word) -> Self {
        BoundedExpr {
            prefix,
            blocks: Vec::new(),
        }
    }

    /// The word `p x1^e1 y1 … xn^en yn`.
    pub fn instantiate(&self, exponents: &[usize]) -> Word {
        assert_eq!(exponents.len(), self.blocks.len(), "one exponent per block");
        let mut w = self.prefix.clone();
        for ((x, y), &e) in self.blocks.iter().zip(exponents) {
            w = w.concat(&x.repeat(e)).concat(y);
        }
        w
    }

    pub fn check_loops(&self) -> Result<()> {
        if self.blocks.iter().any(|(x, _)| x.is_empty()) {
            return Err(Error::MalformedExpr("empty loop word".to_string()));
        }
        Ok(())
    }

    fn append(&mut self, c: char) {
        match self.blocks.last_mut() {
            Some((_, bridge)) => bridge.push(c),
            None => self.prefix.push(c),
        }
    }

    fn extend(&mut self, w: &[char]) {
        w.iter().for_each(|&c| self.append(c));
    }

    // part preceding block k: the prefix, or the bridge of block k-1
    fn before_block(&self, k: usize) -> &Word {
        if k == 0 {
            &self.prefix
        } else {
            &self.blocks[k - 1].1
        }
    }

    fn before_block_mut(&mut self, k: usize) -> &mut Word {
        if k == 0 {
            &mut self.prefix
        } else {
            &mut self.blocks[k - 1].1
        }
    }
}

impl fmt::Display for BoundedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expr p={} blocks=", self.prefix)?;
        for (i, (x, y)) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "({x},{y})")?;
        }
        Ok(())
    }
}

/// Outcome of [`classify`], always carrying its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Hard(HardnessWitness),
    Easy {
        decomposition: Vec<BoundedExpr>,
        envelope: Vec<Word>,
    },
}

impl Classification {
    pub fn is_hard(&self) -> bool {
        matches!(self, Classification::Hard(_))
    }

    /// Re-checks the certificate against the filter `f`.
    pub fn verify(&self, f: &Dfa) -> Result<()> {
        match self {
            Classification::Hard(w) => w.check(&trim(f)),
            Classification::Easy {
                decomposition,
                envelope,
            } => {
                let al = f.alphabet();
                let union = union_nfa(decomposition, al)?;
                if !equivalent(&union, &f.to_nfa()) {
                    return Err(Error::Verification(
                        "decomposition is not equivalent to the filter".to_string(),
                    ));
                }
                let env = determinize(&envelope_nfa(envelope, al)?);
                if let Some(w) = inclusion_counterexample(&env, &f.to_nfa()) {
                    return Err(Error::Verification(format!(
                        "envelope misses filter word {w}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Parses the certificate text produced by `Display`.
    pub fn parse(text: &str) -> Result<Classification> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let Some(&(first_no, first)) = lines.first() else {
            return Err(Error::parse(1, "empty certificate"));
        };
        if let Some(rest) = first.strip_prefix("hard ") {
            if lines.len() != 1 {
                return Err(Error::parse(lines[1].0, "unexpected line after `hard`"));
            }
            return parse_hard(first_no, rest).map(Classification::Hard);
        }
        if first != "easy" {
            return Err(Error::parse(first_no, "expected `hard` or `easy`"));
        }
        let mut decomposition = Vec::new();
        let mut envelope = None;
        for &(no, line) in &lines[1..] {
            if let Some(rest) = line.strip_prefix("expr ") {
                if envelope.is_some() {
                    return Err(Error::parse(no, "`expr` after `envelope`"));
                }
                decomposition.push(parse_expr(no, rest)?);
            } else if line == "envelope" || line.starts_with("envelope ") {
                if envelope.is_some() {
                    return Err(Error::parse(no, "duplicate `envelope` line"));
                }
                envelope = Some(
                    line.split_whitespace()
                        .skip(1)
                        .map(|t| {
                            t.parse::<Word>()
                                .map_err(|e| Error::parse(no, e.to_string()))
                        })
                        .collect::<Result<Vec<_>>>()?,
                );
            } else {
                return Err(Error::parse(no, "expected `expr` or `envelope`"));
            }
        }
        let envelope = envelope.ok_or_else(|| Error::parse(first_no, "missing `envelope` line"))?;
        Ok(Classification::Easy {
            decomposition,
            envelope,
        })
    }
}

fn field<'a>(line: usize, token: &'a str, key: &str) -> Result<&'a str> {
    token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=`")))
}

fn parse_word_field(line: usize, token: &str, key: &str) -> Result<Word> {
    field(line, token, key)?
        .parse()
        .map_err(|e: Error| Error::parse(line, e.to_string()))
}

fn parse_hard(line: usize, rest: &str) -> Result<HardnessWitness> {
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    if tokens.len() != 5 {
        return Err(Error::parse(line, "expected `q= p= u= v= s=`"));
    }
    let q = field(line, tokens[0], "q")?
        .parse()
        .map_err(|_| Error::parse(line, "bad state id"))?;
    Ok(HardnessWitness {
        q,
        p: parse_word_field(line, tokens[1], "p")?,
        u: parse_word_field(line, tokens[2], "u")?,
        v: parse_word_field(line, tokens[3], "v")?,
        s: parse_word_field(line, tokens[4], "s")?,
    })
}

fn parse_expr(line: usize, rest: &str) -> Result<BoundedExpr> {
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    if tokens.len() != 2 {
        return Err(Error::parse(line, "expected `p=<word> blocks=<list>`"));
    }
    let prefix = parse_word_field(line, tokens[0], "p")?;
    let list = field(line, tokens[1], "blocks")?;
    let mut blocks = Vec::new();
    if !list.is_empty() {
        for item in list.split(';') {
            let inner = item
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::parse(line, format!("malformed block '{item}'")))?;
            let (x, y) = inner
                .split_once(',')
                .ok_or_else(|| Error::parse(line, format!("malformed block '{item}'")))?;
            let x: Word = x
                .parse()
                .map_err(|e: Error| Error::parse(line, e.to_string()))?;
            let y: Word = y
                .parse()
                .map_err(|e: Error| Error::parse(line, e.to_string()))?;
            blocks.push((x, y));
        }
    }
    Ok(BoundedExpr { prefix, blocks })
}

impl fmt::Display for HardnessWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hard q={} p={} u={} v={} s={}",
            self.q, self.p, self.u, self.v, self.s
        )
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Hard(w) => writeln!(f, "{w}"),
            Classification::Easy {
                decomposition,
                envelope,
            } => {
                writeln!(f, "easy")?;
                for e in decomposition {
                    writeln!(f, "{e}")?;
                }
                f.write_str("envelope")?;
                for w in envelope {
                    write!(f, " {w}")?;
                }
                writeln!(f)
            }
        }
    }
}

/// Shortest `x` with `w = x^k`, from the longest proper border of `w`.
pub fn primitive_root(w: &Word) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = w.len();
    let mut border = vec![0usize; n];
    for i in 1..n {
        let mut k = border[i - 1];
        while k > 0 && w[i] != w[k] {
            k = border[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        border[i] = k;
    }
    let period = n - border[n - 1];
    Ok(if n.is_multiple_of(period) {
        Word::from(w[..period].to_vec())
    } else {
        w.clone()
    })
}

/// Turns two non-commuting cycles into `(u0·v0, v0·u0)`: equal length,
/// distinct, hence neither a prefix of the other.
pub fn normalize_witness(u0: &Word, v0: &Word) -> Result<(Word, Word)> {
    let uv = u0.concat(v0);
    let vu = v0.concat(u0);
    if uv == vu {
        return Err(Error::CommutingPair(u0.to_string(), v0.to_string()));
    }
    Ok((uv, vu))
}

/// Looks for a hardness witness on an already trimmed DFA.
fn witness_in_trimmed(t: &Dfa, cond: &Condensation) -> Option<HardnessWitness> {
    for q in 0..t.num_states() {
        let comp = cond.component[q];
        if !cond.nontrivial[comp] {
            continue;
        }
        let members = &cond.members[comp];
        let local_q = members.binary_search(&q).expect("q is in its component");
        // cycle language at q: the component alone, entered and left at q
        let cycles = t.restrict(members, q).rerooted(local_q, &[local_q]);

        // shortest non-empty cycle: a fresh start state copying q's edges
        let base = cycles.to_nfa();
        let start = base.num_states();
        let mut rooted = Nfa::with_states(t.alphabet().clone(), start + 1);
        rooted.add_initial(start);
        for s in 0..start {
            rooted.set_accepting(s, base.is_accepting(s));
            for &(label, r) in base.edges(s) {
                rooted.add_edge(s, label, r);
            }
        }
        for &(label, r) in base.edges(local_q) {
            rooted.add_edge(start, label, r);
        }
        let u0 = shortest_word(&rooted).expect("nontrivial component has a cycle at q");

        let root = primitive_root(&u0).expect("cycle is non-empty");
        let powers = Dfa::star_of(t.alphabet().clone(), &root).expect("root over alphabet");
        let Some(v0) = inclusion_counterexample(&powers, &cycles.to_nfa()) else {
            continue;
        };
        let (u, v) = normalize_witness(&u0, &v0).expect("a cycle outside root* cannot commute");
        let p = shortest_word(&t.rerooted(t.initial(), &[q]).to_nfa())
            .expect("trimmed states are reachable");
        let accepting: Vec<usize> = t.accepting_states().collect();
        let s = shortest_word(&t.rerooted(q, &accepting).to_nfa())
            .expect("trimmed states are co-reachable");
        return Some(HardnessWitness { q, p, u, v, s });
    }
    None
}

/// Hardness witness for `f`, if `f` is hard. State ids refer to `trim(f)`.
pub fn find_hardness_witness(f: &Dfa) -> Option<HardnessWitness> {
    let t = trim(f);
    let cond = condense(&t);
    witness_in_trimmed(&t, &cond)
}

/// Classifies `f` and checks the certificate before returning it.
pub fn classify(f: &Dfa) -> Result<Classification> {
    let t = trim(f);
    let cond = condense(&t);
    let result = match witness_in_trimmed(&t, &cond) {
        Some(w) => Classification::Hard(w),
        None => {
            let decomposition = decompose_trimmed(&t)?;
            let envelope = envelope_of(&decomposition);
            Classification::Easy {
                decomposition,
                envelope,
            }
        }
    };
    result.verify(f)?;
    Ok(result)
}

/// Bounded decomposition of an easy filter, verified equivalent to `f`.
pub fn decompose(f: &Dfa) -> Result<Vec<BoundedExpr>> {
    let t = trim(f);
    let cond = condense(&t);
    if witness_in_trimmed(&t, &cond).is_some() {
        return Err(Error::NotEasy);
    }
    let exprs = decompose_trimmed(&t)?;
    if !equivalent(&union_nfa(&exprs, f.alphabet())?, &f.to_nfa()) {
        return Err(Error::Verification(
            "decomposition is not equivalent to the filter".to_string(),
        ));
    }
    Ok(exprs)
}

/// Envelope `w1…wn` with `L(f) ⊆ w1*…wn*`, verified by inclusion.
pub fn envelope(f: &Dfa) -> Result<Vec<Word>> {
    let env = envelope_of(&decompose(f)?);
    let star = determinize(&envelope_nfa(&env, f.alphabet())?);
    if !includes(&star, &f.to_nfa()) {
        return Err(Error::Verification(
            "envelope misses filter words".to_string(),
        ));
    }
    Ok(env)
}

/// Each loop word, and each letter of each prefix and bridge, in expression
/// order; adjacent repeats collapse since `w* w* = w*`.
pub fn envelope_of(decomposition: &[BoundedExpr]) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    let mut push = |w: Word| {
        if out.last() != Some(&w) {
            out.push(w);
        }
    };
    for e in decomposition {
        e.prefix.iter().for_each(|&c| push(Word::from(vec![c])));
        for (x, y) in &e.blocks {
            push(x.clone());
            y.iter().for_each(|&c| push(Word::from(vec![c])));
        }
    }
    out
}

// In a trimmed DFA without a hardness witness every cyclic component is a
// single simple cycle: a state with two in-component successors would carry
// cycles starting with different letters, which cannot share a root.
fn cycle_from(t: &Dfa, cond: &Condensation, q: usize) -> Result<Vec<(char, usize)>> {
    let comp = cond.component[q];
    let mut walk = Vec::new();
    let mut cur = q;
    loop {
        let inside: Vec<(usize, usize)> = (0..t.alphabet().len())
            .filter_map(|s| t.step(cur, s).map(|r| (s, r)))
            .filter(|&(_, r)| cond.component[r] == comp)
            .collect();
        let [(s, next)] = inside[..] else {
            return Err(Error::NotEasy);
        };
        walk.push((t.alphabet().symbols()[s], cur));
        cur = next;
        if cur == q {
            return Ok(walk);
        }
        if walk.len() > cond.members[comp].len() {
            return Err(Error::NotEasy);
        }
    }
}

// Works on the merged machine so that every cycle is entered at one state.
fn decompose_trimmed(t: &Dfa) -> Result<Vec<BoundedExpr>> {
    if shortest_word(&t.to_nfa()).is_none() {
        return Ok(Vec::new());
    }
    let m = merge_equivalent(t);
    let cond = condense(&m);
    let mut out = Vec::new();
    visit(
        &m,
        &cond,
        m.initial(),
        BoundedExpr::word(Word::empty()),
        &mut out,
    )?;
    simplify(&mut out);
    Ok(out)
}

// Enumerates paths through the condensation DAG; each cyclic component
// contributes one block entered at the arrival state.
fn visit(
    t: &Dfa,
    cond: &Condensation,
    q: usize,
    expr: BoundedExpr,
    out: &mut Vec<BoundedExpr>,
) -> Result<()> {
    let comp = cond.component[q];
    let al = t.alphabet().symbols();
    if !cond.nontrivial[comp] {
        if t.is_accepting(q) {
            out.push(expr.clone());
        }
        for (s, &c) in al.iter().enumerate() {
            if let Some(r) = t.step(q, s) {
                let mut next = expr.clone();
                next.append(c);
                visit(t, cond, r, next, out)?;
            }
        }
        return Ok(());
    }
    let cycle = cycle_from(t, cond, q)?;
    let loop_word: Word = cycle.iter().map(|&(c, _)| c).collect();
    let mut with_block = expr;
    with_block.blocks.push((loop_word.clone(), Word::empty()));
    for (j, &(_, state)) in cycle.iter().enumerate() {
        let walked = &loop_word[..j];
        if t.is_accepting(state) {
            let mut done = with_block.clone();
            done.extend(walked);
            out.push(done);
        }
        for (s, &c) in al.iter().enumerate() {
            match t.step(state, s) {
                Some(r) if cond.component[r] != comp => {
                    let mut next = with_block.clone();
                    next.extend(walked);
                    next.append(c);
                    visit(t, cond, r, next, out)?;
                }
                _ => {}
            }
        }
    }
    Ok(())
}

// Language-preserving merges:
//   A·B·Y·C ∪ A·B·x·x*·Y·C = A·B·x*·Y·C
// i.e. an expression whose block k is preceded by its own loop word absorbs
// the sibling expression obtained by deleting that block and one copy of x.
fn simplify(exprs: &mut Vec<BoundedExpr>) {
    let mut seen = std::collections::HashSet::new();
    exprs.retain(|e| seen.insert(e.clone()));
    'restart: loop {
        for j in 0..exprs.len() {
            for k in 0..exprs[j].blocks.len() {
                let x = exprs[j].blocks[k].0.clone();
                let before = exprs[j].before_block(k);
                if !before.ends_with(&x) {
                    continue;
                }
                let trimmed_before = Word::from(before[..before.len() - x.len()].to_vec());
                let mut without = exprs[j].clone();
                let (_, y) = without.blocks.remove(k);
                *without.before_block_mut(k) = trimmed_before.concat(&y);
                if let Some(i) = exprs.iter().position(|e| *e == without) {
                    *exprs[j].before_block_mut(k) = trimmed_before;
                    exprs.remove(i);
                    continue 'restart;
                }
            }
        }
        break;
    }
}

/// Automaton for `p x1* y1 … xn* yn`.
pub fn expr_to_nfa(e: &BoundedExpr, alphabet: &Alphabet) -> Result<Nfa> {
    e.check_loops()?;
    let mut n = Nfa::with_states(alphabet.clone(), 1);
    n.add_initial(0);
    let mut cur = n.add_path(0, &alphabet.encode(&e.prefix)?);
    for (x, y) in &e.blocks {
        let hub = n.add_state();
        n.add_edge(cur, Label::Eps, hub);
        let x = alphabet.encode(x)?;
        let (&last, init) = x.split_last().expect("loop words are non-empty");
        let end = n.add_path(hub, init);
        n.add_edge(end, Label::Sym(last), hub);
        cur = n.add_path(hub, &alphabet.encode(y)?);
    }
    n.set_accepting(cur, true);
    Ok(n.canonical())
}

/// Union of several bounded expressions (empty list: empty language).
pub fn union_nfa(exprs: &[BoundedExpr], alphabet: &Alphabet) -> Result<Nfa> {
    let mut n = Nfa::with_states(alphabet.clone(), 1);
    n.add_initial(0);
    for e in exprs {
        let part = expr_to_nfa(e, alphabet)?;
        let offset = n.num_states();
        for _ in 0..part.num_states() {
            n.add_state();
        }
        for q in 0..part.num_states() {
            if part.is_accepting(q) {
                n.set_accepting(offset + q, true);
            }
            for &(label, r) in part.edges(q) {
                n.add_edge(offset + q, label, offset + r);
            }
        }
        for &i in part.initial() {
            n.add_edge(0, Label::Eps, offset + i);
        }
    }
    Ok(n)
}

/// Automaton for `w1* w2* … wn*`.
pub fn envelope_nfa(envelope: &[Word], alphabet: &Alphabet) -> Result<Nfa> {
    let mut n = Nfa::with_states(alphabet.clone(), 1);
    n.add_initial(0);
    let mut cur = 0;
    for w in envelope {
        let hub = n.add_state();
        n.add_edge(cur, Label::Eps, hub);
        let w = alphabet.encode(w)?;
        if let Some((&last, init)) = w.split_last() {
            let end = n.add_path(hub, init);
            n.add_edge(end, Label::Sym(last), hub);
        }
        cur = hub;
    }
    n.set_accepting(cur, true);
    Ok(n.canonical())
}
