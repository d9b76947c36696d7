use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Whether an alphabet holds base symbols or meta symbols whose meaning is
/// supplied by a substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlphabetKind {
    Base,
    Meta,
}

/// An ordered set of named symbols. Words are sequences of symbol indices,
/// so multi-character symbol names are first class.
#[derive(Debug, Clone)]
pub struct Alphabet {
    kind: AlphabetKind,
    symbols: Vec<String>,
    index: HashMap<String, u32>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl std::hash::Hash for Alphabet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.symbols.hash(state);
    }
}

impl PartialOrd for Alphabet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Alphabet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.kind, &self.symbols).cmp(&(other.kind, &other.symbols))
    }
}

fn valid_symbol_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    /// Builds an alphabet from symbol names. Names must be identifiers and
    /// pairwise distinct; `eps` and `empty` are reserved words.
    pub fn new<I, S>(kind: AlphabetKind, names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut symbols = Vec::new();
        let mut index = HashMap::new();
        for name in names {
            let name = name.into();
            if !valid_symbol_name(&name) || name == "eps" || name == "empty" {
                return Err(Error::Invalid(format!("invalid symbol name `{name}`")));
            }
            if index.contains_key(&name) {
                return Err(Error::Invalid(format!("duplicate symbol `{name}`")));
            }
            index.insert(name.clone(), symbols.len() as u32);
            symbols.push(name);
        }
        Ok(Arc::new(Alphabet { kind, symbols, index }))
    }

    pub fn base<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(AlphabetKind::Base, names)
    }

    pub fn meta<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(AlphabetKind::Meta, names)
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn name(&self, sym: u32) -> &str {
        &self.symbols[sym as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|s| s.as_str())
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> {
        0..self.symbols.len() as u32
    }

    /// Translates a word of symbol names into symbol indices.
    pub fn word_from_names<'a, I>(&self, names: I) -> Result<Vec<u32>>
    where
        I: IntoIterator<Item = &'a str>,
    {
        names
            .into_iter()
            .map(|n| {
                self.lookup(n)
                    .ok_or_else(|| Error::UndeclaredSymbol(n.to_string()))
            })
            .collect()
    }

    /// Renders a word of symbol indices as space-separated names.
    pub fn word_to_string(&self, word: &[u32]) -> String {
        word.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
