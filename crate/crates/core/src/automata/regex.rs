//! Regular expressions with literals, concatenation, `|`, `*` and
//! parentheses, compiled by the inductive (Thompson) construction.

use super::{is_symbol_char, Alphabet, Label, Nfa, Symbol};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ast {
    Empty,
    Literal(Symbol),
    Concat(Vec<Ast>),
    Alt(Vec<Ast>),
    Star(Box<Ast>),
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Parser { chars, pos: 0, src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self.src.len())
    }

    fn err(&self, message: &str) -> Error {
        Error::Regex {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn parse(mut self) -> Result<Ast> {
        let ast = self.alt()?;
        match self.peek() {
            None => Ok(ast),
            Some(')') => Err(self.err("unbalanced ')'")),
            Some(_) => Err(self.err("unexpected character")),
        }
    }

    fn alt(&mut self) -> Result<Ast> {
        let start = self.pos;
        let mut branches = vec![self.concat()?];
        if self.peek() == Some('|') && self.pos == start {
            return Err(self.err("dangling '|'"));
        }
        while self.peek() == Some('|') {
            self.pos += 1;
            if matches!(self.peek(), None | Some('|') | Some(')')) {
                return Err(self.err("dangling '|'"));
            }
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Ast::Alt(branches)
        })
    }

    fn concat(&mut self) -> Result<Ast> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            parts.push(self.repeat()?);
        }
        Ok(match parts.len() {
            0 => Ast::Empty,
            1 => parts.pop().unwrap(),
            _ => Ast::Concat(parts),
        })
    }

    fn repeat(&mut self) -> Result<Ast> {
        let mut atom = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            atom = Ast::Star(Box::new(atom));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.alt()?;
                if self.peek() != Some(')') {
                    return Err(self.err("unbalanced '('"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('*') => Err(self.err("dangling '*'")),
            Some(c) if is_symbol_char(c) => {
                self.pos += 1;
                Ok(Ast::Literal(c))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of pattern")),
        }
    }
}

fn literals(ast: &Ast, out: &mut Vec<Symbol>) {
    match ast {
        Ast::Empty => {}
        Ast::Literal(c) => {
            if !out.contains(c) {
                out.push(*c);
            }
        }
        Ast::Concat(v) | Ast::Alt(v) => v.iter().for_each(|a| literals(a, out)),
        Ast::Star(a) => literals(a, out),
    }
}

// Returns the (entry, exit) pair of the fragment.
fn build(ast: &Ast, nfa: &mut Nfa) -> Result<(usize, usize)> {
    Ok(match ast {
        Ast::Empty => {
            let (s, e) = (nfa.add_state(), nfa.add_state());
            nfa.add_edge(s, Label::Eps, e);
            (s, e)
        }
        Ast::Literal(c) => {
            let sym = nfa
                .alphabet()
                .index_of(*c)
                .ok_or(Error::OutOfAlphabet(*c))?;
            let (s, e) = (nfa.add_state(), nfa.add_state());
            nfa.add_edge(s, Label::Sym(sym), e);
            (s, e)
        }
        Ast::Concat(parts) => {
            let (start, mut end) = build(&parts[0], nfa)?;
            for p in &parts[1..] {
                let (s, e) = build(p, nfa)?;
                nfa.add_edge(end, Label::Eps, s);
                end = e;
            }
            (start, end)
        }
        Ast::Alt(branches) => {
            let (s, e) = (nfa.add_state(), nfa.add_state());
            for b in branches {
                let (bs, be) = build(b, nfa)?;
                nfa.add_edge(s, Label::Eps, bs);
                nfa.add_edge(be, Label::Eps, e);
            }
            (s, e)
        }
        Ast::Star(inner) => {
            let (s, e) = (nfa.add_state(), nfa.add_state());
            let (is, ie) = build(inner, nfa)?;
            nfa.add_edge(s, Label::Eps, is);
            nfa.add_edge(ie, Label::Eps, is);
            nfa.add_edge(ie, Label::Eps, e);
            nfa.add_edge(s, Label::Eps, e);
            (s, e)
        }
    })
}

/// Compiles `pattern` over the alphabet of its literals, sorted.
pub fn regex_to_nfa(pattern: &str) -> Result<Nfa> {
    let ast = Parser::new(pattern).parse()?;
    let mut syms = Vec::new();
    literals(&ast, &mut syms);
    syms.sort_unstable();
    compile(&ast, Alphabet::new(syms)?)
}

/// Compiles `pattern` over a given alphabet.
pub fn regex_to_nfa_over(pattern: &str, alphabet: &Alphabet) -> Result<Nfa> {
    let ast = Parser::new(pattern).parse()?;
    compile(&ast, alphabet.clone())
}

fn compile(ast: &Ast, alphabet: Alphabet) -> Result<Nfa> {
    let mut nfa = Nfa::with_states(alphabet, 0);
    let (s, e) = build(ast, &mut nfa)?;
    nfa.add_initial(s);
    nfa.set_accepting(e, true);
    Ok(nfa.canonical())
}
