//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so tests can drive it in-process.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::automata::{
    merge_equivalent, parse_automaton, parse_dfa, parse_nfa, regex_to_nfa, separating_word, trim,
    Alphabet, Automaton, Dfa, Nfa, Word,
};
use crate::classify::{classify, Classification};
use crate::cover::cover;
use crate::error::Error;
use crate::rr::{
    parse_digraph, reachability_gadget, reduce_rr, solve_rr, solve_rr_bounded, solve_rr_nfa,
};
use crate::transducer::{compose_dfst, image_nfa, parse_dfst};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_ALPHABET: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "regreal",
    about = "Regular filters, covering transducers and realizability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the main artifact here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide hard/easy and print the certificate.
    Classify {
        filter: String,
        /// Treat machine arguments as inline regular expressions.
        #[arg(long)]
        regex: bool,
    },
    /// Build a transducer mapping a hard filter onto a target language.
    Cover {
        filter: String,
        target: String,
        #[arg(long)]
        regex: bool,
    },
    /// Decide whether the input language meets the filter.
    Solve {
        filter: String,
        input: String,
        #[arg(long)]
        regex: bool,
        /// Keep both machines nondeterministic.
        #[arg(long)]
        nfa: bool,
        /// Use the counter solver (easy filters only).
        #[arg(long)]
        counters: bool,
    },
    /// Pull an instance back through a transducer.
    Reduce {
        transducer: String,
        input: String,
        #[arg(long)]
        regex: bool,
    },
    /// Build the reachability gadget for a graph.
    Gadget {
        graph: String,
        #[arg(long)]
        word: String,
    },
    /// Compose two transducers, first then second.
    Compose { first: String, second: String },
    /// Image of an automaton under a transducer.
    Image {
        transducer: String,
        automaton: String,
        #[arg(long)]
        regex: bool,
    },
    /// Compare two automata.
    Equiv {
        first: String,
        second: String,
        #[arg(long)]
        regex: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Lib(Error::Parse { .. } | Error::Regex { .. }) => EXIT_PARSE,
            Failure::Lib(Error::AlphabetMismatch(_) | Error::OutOfAlphabet(_)) => EXIT_ALPHABET,
            Failure::Lib(Error::NotHard | Error::NotEasy) | Failure::Mismatch(_) => EXIT_MISMATCH,
            Failure::Lib(_) | Failure::Io(_) => EXIT_OTHER,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(m) | Failure::Mismatch(m) => m.clone(),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Io<'a> {
    stdout: &'a mut dyn Write,
    out_path: Option<PathBuf>,
}

impl Io<'_> {
    /// Sends the artifact to `--out` if given, else to standard output.
    fn artifact(&mut self, text: &str) -> Outcome {
        match &self.out_path {
            Some(p) => fs::write(p, text)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
            None => self.say(text),
        }
    }

    fn say(&mut self, text: &str) -> Outcome {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string()))
    }
}

fn read(path: &str) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {path}: {e}")))
}

fn with_path<T>(path: &str, r: crate::Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Parse { line, message } => Failure::Lib(Error::Parse {
            line,
            message: format!("{path}: {message}"),
        }),
        other => Failure::Lib(other),
    })
}

fn load(arg: &str, regex: bool) -> std::result::Result<Automaton, Failure> {
    if regex {
        return Ok(Automaton::Nfa(regex_to_nfa(arg)?));
    }
    with_path(arg, parse_automaton(&read(arg)?))
}

fn load_dfa(arg: &str, regex: bool) -> std::result::Result<Dfa, Failure> {
    if regex {
        // compiled patterns carry redundant states; merge them for readable certificates
        return Ok(merge_equivalent(&trim(&load(arg, true)?.to_dfa())));
    }
    let text = read(arg)?;
    match parse_dfa(&text) {
        Ok(d) => Ok(d),
        Err(_) => with_path(arg, parse_nfa(&text)).map(|n| Automaton::Nfa(n).to_dfa()),
    }
}

fn load_nfa(arg: &str, regex: bool) -> std::result::Result<Nfa, Failure> {
    Ok(load(arg, regex)?.to_nfa())
}

/// Runs one invocation and returns the exit status.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    let mut io = Io {
        stdout,
        out_path: cli.out,
    };
    match dispatch(cli.command, &mut io) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Outcome {
    match command {
        Command::Classify { filter, regex } => {
            let f = load_dfa(&filter, regex)?;
            let c = classify(&f)?;
            let header = if c.is_hard() { "HARD" } else { "EASY" };
            io.artifact(&format!("{header}\n{c}"))
        }
        Command::Cover {
            filter,
            target,
            regex,
        } => {
            let f = load_dfa(&filter, regex)?;
            let r = load_dfa(&target, regex)?;
            let c = classify(&f)?;
            if !c.is_hard() {
                io.say(&format!("EASY\n{c}"))?;
                return Err(Failure::Mismatch(
                    "filter is easy; it covers no hard language".to_string(),
                ));
            }
            let t = cover(&f, &r)?;
            io.artifact(&t.to_string())?;
            io.say("VERIFIED image == target\n")
        }
        Command::Solve {
            filter,
            input,
            regex,
            nfa,
            counters,
        } => {
            if counters {
                let f = load_dfa(&filter, regex)?;
                let a = load_dfa(&input, regex)?;
                let Classification::Easy { decomposition, .. } = classify(&f)? else {
                    return Err(Failure::Mismatch(
                        "--counters needs an easy filter".to_string(),
                    ));
                };
                return match solve_rr_bounded(&decomposition, &a)? {
                    Some(s) => {
                        let exps: Vec<String> = s.exponents.iter().map(|e| e.to_string()).collect();
                        io.artifact(&format!(
                            "YES {}\nexponents expr={} {}\n",
                            s.word,
                            s.expr,
                            exps.join(" ")
                        ))
                    }
                    None => io.artifact("NO\n"),
                };
            }
            let answer = if nfa {
                solve_rr_nfa(&load_nfa(&filter, regex)?, &load_nfa(&input, regex)?)
            } else {
                solve_rr(&load_dfa(&filter, regex)?, &load_dfa(&input, regex)?)
            };
            match answer {
                Some(w) => io.artifact(&format!("YES {w}\n")),
                None => io.artifact("NO\n"),
            }
        }
        Command::Reduce {
            transducer,
            input,
            regex,
        } => {
            let t = with_path(&transducer, parse_dfst(&read(&transducer)?))?;
            let a = load_dfa(&input, regex)?;
            io.artifact(&reduce_rr(&t, &a)?.canonical().to_string())
        }
        Command::Gadget { graph, word } => {
            let parsed = with_path(&graph, parse_digraph(&read(&graph)?))?;
            let w: Word = word
                .parse()
                .map_err(|e: Error| Failure::Lib(Error::parse(1, format!("--word: {e}"))))?;
            let alphabet = match parsed.alphabet {
                Some(al) => al,
                None => {
                    let mut letters: Vec<char> = w.to_vec();
                    letters.sort_unstable();
                    letters.dedup();
                    Alphabet::new(letters)?
                }
            };
            io.artifact(&reachability_gadget(&parsed.graph, &w, &alphabet)?.to_string())
        }
        Command::Compose { first, second } => {
            let t1 = with_path(&first, parse_dfst(&read(&first)?))?;
            let t2 = with_path(&second, parse_dfst(&read(&second)?))?;
            io.artifact(&compose_dfst(&t1, &t2)?.canonical().to_string())
        }
        Command::Image {
            transducer,
            automaton,
            regex,
        } => {
            let t = with_path(&transducer, parse_dfst(&read(&transducer)?))?;
            let a = load_dfa(&automaton, regex)?;
            io.artifact(&image_nfa(&t, &a)?.to_string())
        }
        Command::Equiv {
            first,
            second,
            regex,
        } => {
            let a = load_nfa(&first, regex)?;
            let b = load_nfa(&second, regex)?;
            match separating_word(&a, &b) {
                None => io.artifact("EQUIVALENT\n"),
                Some(sep) => {
                    let side = if sep.in_first { "first" } else { "second" };
                    io.artifact(&format!("DIFFERENT {} only-in={side}\n", sep.word))
                }
            }
        }
    }
}
