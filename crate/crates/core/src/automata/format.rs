//! Line-based text format shared by DFAs and NFAs.
//!
//! ```text
//! dfa                 # or nfa
//! alphabet a b
//! states 0 1
//! initial 0           # nfa: any number of states
//! accept 0
//! trans 0 a 1         # nfa: `eps` is a legal symbol
//! ```

use std::collections::HashMap;
use std::fmt;

use super::{Alphabet, Dfa, Label, Nfa};
use crate::error::{Error, Result};

/// Either kind of machine, as read from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Automaton {
    Dfa(Dfa),
    Nfa(Nfa),
}

impl Automaton {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Automaton::Dfa(d) => d.alphabet(),
            Automaton::Nfa(n) => n.alphabet(),
        }
    }

    pub fn to_nfa(&self) -> Nfa {
        match self {
            Automaton::Dfa(d) => d.to_nfa(),
            Automaton::Nfa(n) => n.clone(),
        }
    }

    /// The DFA itself, or the determinized NFA.
    pub fn to_dfa(&self) -> Dfa {
        match self {
            Automaton::Dfa(d) => d.clone(),
            Automaton::Nfa(n) => super::determinize(n),
        }
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Automaton::Dfa(d) => d.fmt(f),
            Automaton::Nfa(n) => n.fmt(f),
        }
    }
}

/// Non-empty, comment-stripped lines with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

pub(crate) fn parse_symbol(line: usize, token: &str) -> Result<char> {
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if super::is_symbol_char(c) => Ok(c),
        _ => Err(Error::parse(line, format!("'{token}' is not a symbol"))),
    }
}

pub(crate) fn parse_alphabet(line: usize, tokens: &[&str]) -> Result<Alphabet> {
    let symbols = tokens
        .iter()
        .map(|t| parse_symbol(line, t))
        .collect::<Result<Vec<_>>>()?;
    Alphabet::new(symbols).map_err(|e| Error::parse(line, e.to_string()))
}

/// Maps declared state labels to dense indices.
pub(crate) struct StateTable {
    ids: HashMap<u64, usize>,
}

impl StateTable {
    pub(crate) fn parse(line: usize, tokens: &[&str]) -> Result<Self> {
        let mut ids = HashMap::new();
        for t in tokens {
            let label: u64 = t
                .parse()
                .map_err(|_| Error::parse(line, format!("'{t}' is not a state id")))?;
            if ids.insert(label, ids.len()).is_some() {
                return Err(Error::parse(line, format!("state {label} declared twice")));
            }
        }
        Ok(StateTable { ids })
    }

    pub(crate) fn len(&self) -> usize {
        self.ids.len()
    }

    pub(crate) fn lookup(&self, line: usize, token: &str) -> Result<usize> {
        token
            .parse::<u64>()
            .ok()
            .and_then(|l| self.ids.get(&l).copied())
            .ok_or_else(|| Error::parse(line, format!("undeclared state '{token}'")))
    }
}

struct Header<'a> {
    kind: &'a str,
    alphabet: Alphabet,
    states: StateTable,
    // remaining directive lines, in file order
    body: Vec<(usize, Vec<&'a str>)>,
}

fn parse_header(text: &str) -> Result<Header<'_>> {
    let mut lines = content_lines(text);
    let (first_line, first) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let kind = match first.as_slice() {
        ["dfa"] => "dfa",
        ["nfa"] => "nfa",
        _ => return Err(Error::parse(first_line, "expected `dfa` or `nfa`")),
    };
    let mut alphabet = None;
    let mut states = None;
    let mut body = Vec::new();
    for (line, tokens) in lines {
        match tokens[0] {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(Error::parse(line, "alphabet declared twice"));
                }
                alphabet = Some(parse_alphabet(line, &tokens[1..])?);
            }
            "states" => {
                if states.is_some() {
                    return Err(Error::parse(line, "states declared twice"));
                }
                states = Some(StateTable::parse(line, &tokens[1..])?);
            }
            "initial" | "accept" | "trans" => body.push((line, tokens)),
            other => return Err(Error::parse(line, format!("unknown directive '{other}'"))),
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::parse(first_line, "missing `alphabet` line"))?;
    let states = states.ok_or_else(|| Error::parse(first_line, "missing `states` line"))?;
    if states.len() == 0 {
        return Err(Error::parse(first_line, "at least one state is required"));
    }
    Ok(Header {
        kind,
        alphabet,
        states,
        body,
    })
}

fn symbol_in(line: usize, alphabet: &Alphabet, token: &str) -> Result<usize> {
    let c = parse_symbol(line, token)?;
    alphabet
        .index_of(c)
        .ok_or_else(|| Error::parse(line, format!("undeclared symbol '{c}'")))
}

/// Parses the text format, dispatching on the header line.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let header = parse_header(text)?;
    match header.kind {
        "dfa" => build_dfa(header).map(Automaton::Dfa),
        _ => build_nfa(header).map(Automaton::Nfa),
    }
}

pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let header = parse_header(text)?;
    if header.kind != "dfa" {
        return Err(Error::parse(1, "expected a `dfa` header"));
    }
    build_dfa(header)
}

/// Parses an NFA. A `dfa` document is accepted too and read as an NFA.
pub fn parse_nfa(text: &str) -> Result<Nfa> {
    let header = parse_header(text)?;
    build_nfa(header)
}

fn build_dfa(h: Header<'_>) -> Result<Dfa> {
    let mut initial = None;
    for (line, tokens) in &h.body {
        if tokens[0] == "initial" {
            if initial.is_some() || tokens.len() != 2 {
                return Err(Error::parse(*line, "a dfa has exactly one initial state"));
            }
            initial = Some(h.states.lookup(*line, tokens[1])?);
        }
    }
    let initial = initial.ok_or_else(|| Error::parse(1, "missing `initial` line"))?;
    let mut dfa = Dfa::with_states(h.alphabet.clone(), h.states.len(), initial);
    for (line, tokens) in &h.body {
        match tokens[0] {
            "accept" => {
                for t in &tokens[1..] {
                    dfa.set_accepting(h.states.lookup(*line, t)?, true);
                }
            }
            "trans" => {
                if tokens.len() != 4 {
                    return Err(Error::parse(*line, "expected `trans <src> <symbol> <dst>`"));
                }
                if tokens[2] == "eps" {
                    return Err(Error::parse(*line, "`eps` is not allowed in a dfa"));
                }
                let q = h.states.lookup(*line, tokens[1])?;
                let s = symbol_in(*line, &h.alphabet, tokens[2])?;
                let r = h.states.lookup(*line, tokens[3])?;
                if dfa.step(q, s).is_some() {
                    return Err(Error::parse(
                        *line,
                        format!("duplicate transition from {} on {}", tokens[1], tokens[2]),
                    ));
                }
                dfa.set_transition_index(q, s, r)
                    .map_err(|e| Error::parse(*line, e.to_string()))?;
            }
            _ => {}
        }
    }
    Ok(dfa)
}

fn build_nfa(h: Header<'_>) -> Result<Nfa> {
    let mut nfa = Nfa::with_states(h.alphabet.clone(), h.states.len());
    for (line, tokens) in &h.body {
        match tokens[0] {
            "initial" => {
                for t in &tokens[1..] {
                    nfa.add_initial(h.states.lookup(*line, t)?);
                }
            }
            "accept" => {
                for t in &tokens[1..] {
                    nfa.set_accepting(h.states.lookup(*line, t)?, true);
                }
            }
            "trans" => {
                if tokens.len() != 4 {
                    return Err(Error::parse(*line, "expected `trans <src> <symbol> <dst>`"));
                }
                let q = h.states.lookup(*line, tokens[1])?;
                let label = match tokens[2] {
                    "eps" => Label::Eps,
                    t => Label::Sym(symbol_in(*line, &h.alphabet, t)?),
                };
                let r = h.states.lookup(*line, tokens[3])?;
                nfa.add_edge(q, label, r);
            }
            _ => {}
        }
    }
    Ok(nfa)
}

fn write_states(f: &mut fmt::Formatter<'_>, n: usize) -> fmt::Result {
    f.write_str("states")?;
    for q in 0..n {
        write!(f, " {q}")?;
    }
    writeln!(f)
}

fn write_accept(f: &mut fmt::Formatter<'_>, states: impl Iterator<Item = usize>) -> fmt::Result {
    f.write_str("accept")?;
    for q in states {
        write!(f, " {q}")?;
    }
    writeln!(f)
}

fn write_alphabet(f: &mut fmt::Formatter<'_>, alphabet: &Alphabet) -> fmt::Result {
    if alphabet.is_empty() {
        writeln!(f, "alphabet")
    } else {
        writeln!(f, "alphabet {alphabet}")
    }
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dfa")?;
        write_alphabet(f, self.alphabet())?;
        write_states(f, self.num_states())?;
        writeln!(f, "initial {}", self.initial())?;
        write_accept(f, self.accepting_states())?;
        for (q, s, r) in self.transitions() {
            writeln!(f, "trans {q} {} {r}", self.alphabet().symbols()[s])?;
        }
        Ok(())
    }
}

impl fmt::Display for Nfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nfa")?;
        write_alphabet(f, self.alphabet())?;
        write_states(f, self.num_states())?;
        f.write_str("initial")?;
        for q in self.initial() {
            write!(f, " {q}")?;
        }
        writeln!(f)?;
        write_accept(f, self.accepting_states())?;
        for q in 0..self.num_states() {
            for &(label, r) in self.edges(q) {
                match label {
                    Label::Eps => writeln!(f, "trans {q} eps {r}")?,
                    Label::Sym(s) => writeln!(f, "trans {q} {} {r}", self.alphabet().symbols()[s])?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Word;

    #[test]
    fn minimal_a_star() {
        let d = parse_dfa("dfa\nalphabet a\nstates 0\ninitial 0\naccept 0\ntrans 0 a 0\n").unwrap();
        assert!(d.run(&Word::from("aaa")).unwrap());
        assert!(d.run(&Word::empty()).unwrap());
    }

    #[test]
    fn duplicate_transition_is_an_error() {
        let text = "dfa\nalphabet a\nstates 0\ninitial 0\naccept 0\ntrans 0 a 0\ntrans 0 a 0\n";
        match parse_dfa(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn ab_star_from_text() {
        let text = "# (ab)*\ndfa\nalphabet a b\nstates 0 1\ninitial 0\naccept 0\n\
                    trans 0 a 1\ntrans 1 b 0\n";
        let d = parse_dfa(text).unwrap();
        for (w, expected) in [("", true), ("ab", true), ("abab", true), ("aba", false)] {
            assert_eq!(d.run(&Word::from(w)).unwrap(), expected, "{w}");
        }
    }

    #[test]
    fn nfa_eps_edge() {
        let n =
            parse_nfa("nfa\nalphabet a\nstates 0 1\ninitial 0\naccept 1\ntrans 0 eps 1\n").unwrap();
        assert!(n.run(&Word::empty()).unwrap());
        assert!(!n.run(&Word::from("a")).unwrap());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("dfa\nalphabet a\nstates 0\ninitial 1\n", 4),
            ("dfa\nalphabet a\nstates 0\ninitial 0\ntrans 0 b 0\n", 5),
            ("dfa\nalphabet a\nstates 0\ninitial 0\ntrans 0 eps 0\n", 5),
            ("graph\n", 1),
            ("nfa\nalphabet a\nstates 0 0\n", 3),
            ("nfa\nalphabet a\nstates 0\nfoo\n", 4),
        ];
        for (text, expected) in cases {
            match parse_automaton(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, expected, "{text:?}"),
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn non_dense_labels_are_renumbered() {
        let d =
            parse_dfa("dfa\nalphabet a\nstates 7 3\ninitial 3\naccept 7\ntrans 3 a 7\n").unwrap();
        assert_eq!(d.initial(), 1);
        assert!(d.run(&Word::from("a")).unwrap());
    }

    #[test]
    fn printed_form_reparses() {
        let text = "nfa\nalphabet a b\nstates 0 1 2\ninitial 0 2\naccept 1\n\
                    trans 0 a 1\ntrans 0 eps 2\ntrans 2 b 1\n";
        let n = parse_nfa(text).unwrap();
        assert_eq!(n.to_string(), text);
        assert_eq!(parse_nfa(&n.to_string()).unwrap(), n);
    }
}
