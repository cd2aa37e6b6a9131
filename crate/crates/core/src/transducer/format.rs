//! Text format:
//!
//! ```text
//! dfst
//! in_alphabet a b
//! out_alphabet a b
//! states 0 1
//! initial 0
//! accept 1
//! trans 0 a ab 1      # `-` for empty output
//! final 1 b           # optional
//! ```

use std::fmt;

use super::Dfst;
use crate::automata::format::{content_lines, parse_alphabet, parse_symbol, StateTable};
use crate::automata::Word;
use crate::error::{Error, Result};

fn parse_word(line: usize, token: &str) -> Result<Word> {
    token
        .parse::<Word>()
        .map_err(|e| Error::parse(line, e.to_string()))
}

pub fn parse_dfst(text: &str) -> Result<Dfst> {
    let mut lines = content_lines(text);
    let (first_line, first) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    if first.as_slice() != ["dfst"] {
        return Err(Error::parse(first_line, "expected `dfst`"));
    }
    let mut in_al = None;
    let mut out_al = None;
    let mut states = None;
    let mut body = Vec::new();
    for (line, tokens) in lines {
        match tokens[0] {
            "in_alphabet" if in_al.is_none() => in_al = Some(parse_alphabet(line, &tokens[1..])?),
            "out_alphabet" if out_al.is_none() => {
                out_al = Some(parse_alphabet(line, &tokens[1..])?)
            }
            "states" if states.is_none() => states = Some(StateTable::parse(line, &tokens[1..])?),
            "in_alphabet" | "out_alphabet" | "states" => {
                return Err(Error::parse(
                    line,
                    format!("`{}` declared twice", tokens[0]),
                ))
            }
            "initial" | "accept" | "trans" | "final" => body.push((line, tokens)),
            other => return Err(Error::parse(line, format!("unknown directive '{other}'"))),
        }
    }
    let in_al = in_al.ok_or_else(|| Error::parse(first_line, "missing `in_alphabet` line"))?;
    let out_al = out_al.ok_or_else(|| Error::parse(first_line, "missing `out_alphabet` line"))?;
    let states = states.ok_or_else(|| Error::parse(first_line, "missing `states` line"))?;
    if states.len() == 0 {
        return Err(Error::parse(first_line, "at least one state is required"));
    }

    let mut initial = None;
    for (line, tokens) in &body {
        if tokens[0] == "initial" {
            if initial.is_some() || tokens.len() != 2 {
                return Err(Error::parse(*line, "a dfst has exactly one initial state"));
            }
            initial = Some(states.lookup(*line, tokens[1])?);
        }
    }
    let initial = initial.ok_or_else(|| Error::parse(first_line, "missing `initial` line"))?;
    let mut t = Dfst::with_states(in_al.clone(), out_al, states.len(), initial);
    let mut finals = Vec::new();
    for (line, tokens) in &body {
        let line = *line;
        match tokens[0] {
            "accept" => {
                for tok in &tokens[1..] {
                    t.set_accepting(states.lookup(line, tok)?, true);
                }
            }
            "trans" => {
                if tokens.len() != 5 {
                    return Err(Error::parse(
                        line,
                        "expected `trans <src> <in-symbol> <out-word|-> <dst>`",
                    ));
                }
                let q = states.lookup(line, tokens[1])?;
                let c = parse_symbol(line, tokens[2])?;
                let s = in_al
                    .index_of(c)
                    .ok_or_else(|| Error::parse(line, format!("undeclared input symbol '{c}'")))?;
                let out = parse_word(line, tokens[3])?;
                let r = states.lookup(line, tokens[4])?;
                if t.transition(q, s).is_some() {
                    return Err(Error::parse(
                        line,
                        format!("duplicate transition from {} on {}", tokens[1], tokens[2]),
                    ));
                }
                t.set_transition_index(q, s, out, r)
                    .map_err(|e| Error::parse(line, e.to_string()))?;
            }
            "final" => {
                if tokens.len() != 3 {
                    return Err(Error::parse(line, "expected `final <state> <out-word|->`"));
                }
                let q = states.lookup(line, tokens[1])?;
                let w = parse_word(line, tokens[2])?;
                t.set_final_output(q, w)
                    .map_err(|e| Error::parse(line, e.to_string()))?;
                finals.push((line, q));
            }
            _ => {}
        }
    }
    for (line, q) in finals {
        if !t.is_accepting(q) {
            return Err(Error::parse(line, "final output on a non-accepting state"));
        }
    }
    Ok(t)
}

impl fmt::Display for Dfst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |label: &str, al: &crate::automata::Alphabet| {
            if al.is_empty() {
                label.to_string()
            } else {
                format!("{label} {al}")
            }
        };
        writeln!(f, "dfst")?;
        writeln!(f, "{}", line("in_alphabet", self.in_alphabet()))?;
        writeln!(f, "{}", line("out_alphabet", self.out_alphabet()))?;
        f.write_str("states")?;
        for q in 0..self.num_states() {
            write!(f, " {q}")?;
        }
        writeln!(f)?;
        writeln!(f, "initial {}", self.initial())?;
        f.write_str("accept")?;
        for q in (0..self.num_states()).filter(|&q| self.is_accepting(q)) {
            write!(f, " {q}")?;
        }
        writeln!(f)?;
        for (q, s, w, r) in self.transitions() {
            writeln!(f, "trans {q} {} {w} {r}", self.in_alphabet().symbols()[s])?;
        }
        for q in 0..self.num_states() {
            if self.is_accepting(q) && !self.final_output(q).is_empty() {
                writeln!(f, "final {q} {}", self.final_output(q))?;
            }
        }
        Ok(())
    }
}
