//! Regular realizability toolkit.
//!
//! A *filter* is a fixed regular language `F`; the regular realizability
//! problem asks whether a given automaton accepts some word of `F`. This
//! crate classifies regular filters as hard (two prefix-incomparable cycles
//! through one state) or easy (bounded, i.e. inside some `w1*…wn*`), builds
//! the covering transducers that witness hardness, and solves realizability
//! instances with witness words.
//!
//! - [`automata`]: DFAs, NFAs, regexes, products, inclusion, SCCs.
//! - [`transducer`]: deterministic finite-state transducers.
//! - [`classify`]: the hard/easy dichotomy with checkable certificates.
//! - [`cover`]: covering transducers for hard filters.
//! - [`rr`]: realizability solvers and the two reduction constructions.
//! - [`cli`]: the `regreal` command line.

pub mod automata;
pub mod classify;
pub mod cli;
pub mod cover;
pub mod error;
pub mod rr;
pub mod transducer;

pub use error::{Error, Result};
