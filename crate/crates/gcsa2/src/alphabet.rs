//! The DNA alphabet `{$, #, A, C, G, T, N}` with a fixed ordinal encoding.
//!
//! `$` is the endmarker (sink label) and `#` the source marker; neither may
//! appear in query patterns. The total order is `$ < # < A < C < G < T < N`,
//! with `$ = 0` so that all-endmarker keys sort first.

use crate::{Error, Result};

/// Alphabet size.
pub const SIGMA: usize = 7;

/// A character of the indexing alphabet, stored as its ordinal.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u8);

pub const ENDMARKER: Symbol = Symbol(0);
pub const SOURCE_MARKER: Symbol = Symbol(1);
pub const A: Symbol = Symbol(2);
pub const C: Symbol = Symbol(3);
pub const G: Symbol = Symbol(4);
pub const T: Symbol = Symbol(5);
pub const N: Symbol = Symbol(6);

const CHARS: [char; SIGMA] = ['$', '#', 'A', 'C', 'G', 'T', 'N'];

impl Symbol {
    /// Builds a symbol from its ordinal. Panics if `ord >= SIGMA`.
    pub fn from_ordinal(ord: u8) -> Symbol {
        assert!((ord as usize) < SIGMA, "symbol ordinal {ord} out of range");
        Symbol(ord)
    }

    pub fn from_char(c: char) -> Result<Symbol> {
        let c = c.to_ascii_uppercase();
        CHARS
            .iter()
            .position(|&k| k == c)
            .map(|i| Symbol(i as u8))
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("unknown symbol {c:?}") })
    }

    pub fn to_char(self) -> char {
        CHARS[self.0 as usize]
    }

    #[inline]
    pub fn ordinal(self) -> usize {
        self.0 as usize
    }

    /// `$` or `#`.
    #[inline]
    pub fn is_technical(self) -> bool {
        self.0 <= 1
    }

    /// Watson-Crick complement; technical characters and `N` map to themselves.
    pub fn complement(self) -> Symbol {
        match self {
            A => T,
            C => G,
            G => C,
            T => A,
            other => other,
        }
    }
}

impl std::fmt::Debug for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl std::fmt::Display for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A set of symbols, packed into one byte.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SymbolSet(u8);

impl SymbolSet {
    pub const EMPTY: SymbolSet = SymbolSet(0);

    pub fn insert(&mut self, s: Symbol) {
        self.0 |= 1 << s.0;
    }

    pub fn contains(self, s: Symbol) -> bool {
        self.0 & (1 << s.0) != 0
    }

    pub fn union(self, other: SymbolSet) -> SymbolSet {
        SymbolSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Symbol> {
        (0..SIGMA as u8).map(Symbol).filter(move |s| self.contains(*s))
    }
}

impl std::fmt::Debug for SymbolSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for s in self.iter() {
            write!(f, "{}", s.to_char())?;
        }
        write!(f, "}}")
    }
}

/// Converts a string to symbols; accepts the full alphabet.
pub fn seq_from_str(s: &str) -> Result<Vec<Symbol>> {
    s.chars().map(Symbol::from_char).collect()
}

/// Converts a string to a query pattern; rejects `#` and `$`.
pub fn pattern_from_str(s: &str) -> Result<Vec<Symbol>> {
    let seq = seq_from_str(s)?;
    if let Some(bad) = seq.iter().find(|s| s.is_technical()) {
        return Err(Error::Parse {
            line: 0,
            msg: format!("patterns may not contain the technical character {:?}", bad),
        });
    }
    Ok(seq)
}

pub fn seq_to_string(seq: &[Symbol]) -> String {
    seq.iter().map(|s| s.to_char()).collect()
}

/// Reverse complement: every maximal run of non-technical characters is
/// reversed in place, then each character is replaced by its complement.
/// Technical characters keep their positions.
pub fn reverse_complement(seq: &[Symbol]) -> Vec<Symbol> {
    let mut out = seq.to_vec();
    let mut i = 0;
    while i < out.len() {
        if out[i].is_technical() {
            i += 1;
            continue;
        }
        let start = i;
        while i < out.len() && !out[i].is_technical() {
            i += 1;
        }
        out[start..i].reverse();
    }
    for s in &mut out {
        *s = s.complement();
    }
    out
}
