//! Regular expression syntax over a declared [`Alphabet`].
//!
//! The concrete grammar uses whitespace-separated tokens:
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor+            juxtaposition is concatenation
//! factor := atom '*'*
//! atom   := SYMBOL | 'eps' | 'empty' | '(' expr ')'
//! ```
//!
//! Printing emits the same grammar, and `parse(print(r))` is structurally
//! equal to `r`.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// Structure of a regular expression. Binary nodes are kept left-folded by
/// the parser and the builder helpers so that structural equality is stable
/// under print/parse round trips.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Empty,
    Epsilon,
    Sym(u32),
    Union(Arc<Node>, Arc<Node>),
    Concat(Arc<Node>, Arc<Node>),
    Star(Arc<Node>),
}

/// A regular expression together with the alphabet its symbols live in.
#[derive(Debug, Clone)]
pub struct Regex {
    alphabet: Arc<Alphabet>,
    node: Arc<Node>,
}

impl PartialEq for Regex {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.node == other.node
    }
}

impl Eq for Regex {}

impl std::hash::Hash for Regex {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.node.hash(state);
    }
}

/// Length of a shortest word, with an explicit infinity for the empty
/// language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MinLen {
    Finite(u64),
    Infinity,
}

impl MinLen {
    pub fn add(self, other: MinLen) -> MinLen {
        match (self, other) {
            (MinLen::Finite(a), MinLen::Finite(b)) => MinLen::Finite(a + b),
            _ => MinLen::Infinity,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, MinLen::Finite(_))
    }
}

impl fmt::Display for MinLen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinLen::Finite(n) => write!(f, "{n}"),
            MinLen::Infinity => write!(f, "inf"),
        }
    }
}

impl Regex {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn node(&self) -> &Arc<Node> {
        &self.node
    }

    pub fn from_node(alphabet: Arc<Alphabet>, node: Arc<Node>) -> Regex {
        Regex { alphabet, node }
    }

    pub fn empty(alphabet: &Arc<Alphabet>) -> Regex {
        Regex::from_node(alphabet.clone(), Arc::new(Node::Empty))
    }

    pub fn epsilon(alphabet: &Arc<Alphabet>) -> Regex {
        Regex::from_node(alphabet.clone(), Arc::new(Node::Epsilon))
    }

    pub fn sym(alphabet: &Arc<Alphabet>, sym: u32) -> Regex {
        debug_assert!((sym as usize) < alphabet.len());
        Regex::from_node(alphabet.clone(), Arc::new(Node::Sym(sym)))
    }

    pub fn union(a: &Regex, b: &Regex) -> Regex {
        debug_assert_eq!(a.alphabet, b.alphabet);
        Regex::from_node(
            a.alphabet.clone(),
            Arc::new(Node::Union(a.node.clone(), b.node.clone())),
        )
    }

    pub fn concat(a: &Regex, b: &Regex) -> Regex {
        debug_assert_eq!(a.alphabet, b.alphabet);
        Regex::from_node(
            a.alphabet.clone(),
            Arc::new(Node::Concat(a.node.clone(), b.node.clone())),
        )
    }

    pub fn star(a: &Regex) -> Regex {
        Regex::from_node(a.alphabet.clone(), Arc::new(Node::Star(a.node.clone())))
    }

    /// Left-folded concatenation of the given expressions; `eps` when the
    /// iterator is empty.
    pub fn concat_all<'a, I>(alphabet: &Arc<Alphabet>, parts: I) -> Regex
    where
        I: IntoIterator<Item = &'a Regex>,
    {
        let mut iter = parts.into_iter();
        match iter.next() {
            None => Regex::epsilon(alphabet),
            Some(first) => iter.fold(first.clone(), |acc, r| Regex::concat(&acc, r)),
        }
    }

    /// Left-folded union; `empty` when the iterator is empty.
    pub fn union_all<'a, I>(alphabet: &Arc<Alphabet>, parts: I) -> Regex
    where
        I: IntoIterator<Item = &'a Regex>,
    {
        let mut iter = parts.into_iter();
        match iter.next() {
            None => Regex::empty(alphabet),
            Some(first) => iter.fold(first.clone(), |acc, r| Regex::union(&acc, r)),
        }
    }

    /// The expression `s1 s2 ... sn` for a word of symbols; `eps` for the
    /// empty word.
    pub fn word(alphabet: &Arc<Alphabet>, word: &[u32]) -> Regex {
        let parts: Vec<Regex> = word.iter().map(|&s| Regex::sym(alphabet, s)).collect();
        Regex::concat_all(alphabet, &parts)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        fn go(n: &Node) -> usize {
            match n {
                Node::Empty | Node::Epsilon | Node::Sym(_) => 1,
                Node::Union(a, b) | Node::Concat(a, b) => 1 + go(a) + go(b),
                Node::Star(a) => 1 + go(a),
            }
        }
        go(&self.node)
    }

    /// True iff the empty word belongs to the language.
    pub fn nullable(&self) -> bool {
        fn go(n: &Node) -> bool {
            match n {
                Node::Empty => false,
                Node::Epsilon => true,
                Node::Sym(_) => false,
                Node::Union(a, b) => go(a) || go(b),
                Node::Concat(a, b) => go(a) && go(b),
                Node::Star(_) => true,
            }
        }
        go(&self.node)
    }

    /// True iff no `Star` node occurs anywhere in the expression.
    pub fn is_star_free(&self) -> bool {
        fn go(n: &Node) -> bool {
            match n {
                Node::Empty | Node::Epsilon | Node::Sym(_) => true,
                Node::Union(a, b) | Node::Concat(a, b) => go(a) && go(b),
                Node::Star(_) => false,
            }
        }
        go(&self.node)
    }

    /// Symbols that occur syntactically in the expression.
    pub fn symbols_used(&self) -> Vec<u32> {
        fn go(n: &Node, acc: &mut Vec<bool>) {
            match n {
                Node::Empty | Node::Epsilon => {}
                Node::Sym(s) => acc[*s as usize] = true,
                Node::Union(a, b) | Node::Concat(a, b) => {
                    go(a, acc);
                    go(b, acc);
                }
                Node::Star(a) => go(a, acc),
            }
        }
        let mut seen = vec![false; self.alphabet.len()];
        go(&self.node, &mut seen);
        seen.iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i as u32))
            .collect()
    }

    /// Shortest-word length computed structurally, with per-symbol costs.
    pub fn min_len_with<F>(&self, cost: &F) -> MinLen
    where
        F: Fn(u32) -> MinLen,
    {
        fn go<F: Fn(u32) -> MinLen>(n: &Node, cost: &F) -> MinLen {
            match n {
                Node::Empty => MinLen::Infinity,
                Node::Epsilon => MinLen::Finite(0),
                Node::Sym(s) => cost(*s),
                Node::Union(a, b) => go(a, cost).min(go(b, cost)),
                Node::Concat(a, b) => go(a, cost).add(go(b, cost)),
                Node::Star(_) => MinLen::Finite(0),
            }
        }
        go(&self.node, cost)
    }

    /// Shortest-word length of the language.
    pub fn min_len(&self) -> MinLen {
        self.min_len_with(&|_| MinLen::Finite(1))
    }

    /// All words of a star-free expression, deduplicated.
    pub fn enumerate_words(&self) -> Result<Vec<Vec<u32>>> {
        use std::collections::BTreeSet;
        fn go(n: &Node) -> Result<BTreeSet<Vec<u32>>> {
            Ok(match n {
                Node::Empty => BTreeSet::new(),
                Node::Epsilon => BTreeSet::from([vec![]]),
                Node::Sym(s) => BTreeSet::from([vec![*s]]),
                Node::Union(a, b) => {
                    let mut set = go(a)?;
                    set.extend(go(b)?);
                    set
                }
                Node::Concat(a, b) => {
                    let left = go(a)?;
                    let right = go(b)?;
                    let mut set = BTreeSet::new();
                    for u in &left {
                        for v in &right {
                            let mut w = u.clone();
                            w.extend_from_slice(v);
                            set.insert(w);
                        }
                    }
                    set
                }
                Node::Star(_) => return Err(Error::NotStarFree("enumerate_words")),
            })
        }
        Ok(go(&self.node)?.into_iter().collect())
    }
}

// Simplifying constructors. These preserve the language but not structure,
// so they are used where structure does not matter (state elimination,
// epsilon-part computation), never in `ufs`.

pub fn union_s(a: &Regex, b: &Regex) -> Regex {
    match (&**a.node(), &**b.node()) {
        (Node::Empty, _) => b.clone(),
        (_, Node::Empty) => a.clone(),
        _ if a.node() == b.node() => a.clone(),
        _ => Regex::union(a, b),
    }
}

pub fn concat_s(a: &Regex, b: &Regex) -> Regex {
    match (&**a.node(), &**b.node()) {
        (Node::Empty, _) | (_, Node::Empty) => Regex::empty(a.alphabet()),
        (Node::Epsilon, _) => b.clone(),
        (_, Node::Epsilon) => a.clone(),
        _ => Regex::concat(a, b),
    }
}

pub fn star_s(a: &Regex) -> Regex {
    match &**a.node() {
        Node::Empty | Node::Epsilon => Regex::epsilon(a.alphabet()),
        Node::Star(_) => a.clone(),
        _ => Regex::star(a),
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    LParen,
    RParen,
    Plus,
    Star,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_ascii_alphanumeric() || c == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                tokens.push((Token::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    alphabet: &'a Arc<Alphabet>,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Regex> {
        let mut acc = self.term()?;
        while self.peek() == Some(&Token::Plus) {
            self.bump();
            let rhs = self.term()?;
            acc = Regex::union(&acc, &rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Regex> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Ident(_)) | Some(Token::LParen) => {
                    let rhs = self.factor()?;
                    acc = Regex::concat(&acc, &rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Regex> {
        let mut acc = self.atom()?;
        while self.peek() == Some(&Token::Star) {
            self.bump();
            acc = Regex::star(&acc);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Regex> {
        let pos = self.here();
        match self.bump() {
            Some(Token::Ident(name)) => match name.as_str() {
                "eps" => Ok(Regex::epsilon(self.alphabet)),
                "empty" => Ok(Regex::empty(self.alphabet)),
                _ => match self.alphabet.lookup(&name) {
                    Some(s) => Ok(Regex::sym(self.alphabet, s)),
                    None => Err(Error::UndeclaredSymbol(name)),
                },
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Syntax {
                        pos,
                        msg: "unclosed parenthesis".to_string(),
                    }),
                }
            }
            other => Err(Error::Syntax {
                pos,
                msg: format!("expected a symbol, `eps`, `empty` or `(`, found {other:?}"),
            }),
        }
    }
}

/// Parses the token grammar above into an AST over `alphabet`.
pub fn parse_regex(text: &str, alphabet: &Arc<Alphabet>) -> Result<Regex> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        alphabet,
        end: text.len(),
    };
    let expr = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Syntax {
            pos: parser.here(),
            msg: "trailing input".to_string(),
        });
    }
    Ok(expr)
}

// ---------------------------------------------------------------------------
// Printing

#[derive(PartialEq, PartialOrd)]
enum Prec {
    Union,
    Concat,
    Star,
}

fn print_node(n: &Node, alphabet: &Alphabet, out: &mut String, parent: Prec) {
    let needs_parens = match n {
        Node::Union(_, _) => parent > Prec::Union,
        Node::Concat(_, _) => parent > Prec::Concat,
        _ => false,
    };
    if needs_parens {
        out.push('(');
    }
    match n {
        Node::Empty => out.push_str("empty"),
        Node::Epsilon => out.push_str("eps"),
        Node::Sym(s) => out.push_str(alphabet.name(*s)),
        Node::Union(a, b) => {
            print_node(a, alphabet, out, Prec::Union);
            out.push_str(" + ");
            // A right-nested union must keep its grouping to survive the
            // parser's left fold.
            let rhs_prec = if matches!(**b, Node::Union(_, _)) {
                Prec::Concat
            } else {
                Prec::Union
            };
            print_node(b, alphabet, out, rhs_prec);
        }
        Node::Concat(a, b) => {
            print_node(a, alphabet, out, Prec::Concat);
            out.push(' ');
            let rhs_prec = if matches!(**b, Node::Concat(_, _)) {
                Prec::Star
            } else {
                Prec::Concat
            };
            print_node(b, alphabet, out, rhs_prec);
        }
        Node::Star(a) => {
            print_node(a, alphabet, out, Prec::Star);
            out.push('*');
        }
    }
    if needs_parens {
        out.push(')');
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        print_node(&self.node, &self.alphabet, &mut out, Prec::Union);
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> Arc<Alphabet> {
        Alphabet::base(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn parses_the_grammar() {
        let alph = sigma();
        let r = parse_regex("a* (a b)* a*", &alph).unwrap();
        let a = Regex::sym(&alph, 0);
        let b = Regex::sym(&alph, 1);
        let expected = Regex::concat(
            &Regex::concat(&Regex::star(&a), &Regex::star(&Regex::concat(&a, &b))),
            &Regex::star(&a),
        );
        assert_eq!(r, expected);
    }

    #[test]
    fn reserved_words() {
        let alph = sigma();
        assert_eq!(parse_regex("eps", &alph).unwrap(), Regex::epsilon(&alph));
        assert_eq!(parse_regex("empty", &alph).unwrap(), Regex::empty(&alph));
    }

    #[test]
    fn undeclared_symbol_is_named() {
        let alph = Alphabet::base(["a", "b"]).unwrap();
        match parse_regex("a + c", &alph) {
            Err(Error::UndeclaredSymbol(s)) => assert_eq!(s, "c"),
            other => panic!("expected undeclared-symbol error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let alph = sigma();
        match parse_regex("a + ", &alph) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_regex("(a", &alph).is_err());
        assert!(parse_regex("a)", &alph).is_err());
        assert!(parse_regex("", &alph).is_err());
    }

    #[test]
    fn printing_survives_grouping() {
        let alph = sigma();
        for text in [
            "a + (b + c)",
            "a (b c)",
            "(a + b) c",
            "a**",
            "(a b)* (b + c)",
            "empty + eps a",
        ] {
            let r = parse_regex(text, &alph).unwrap();
            let printed = r.to_string();
            assert_eq!(parse_regex(&printed, &alph).unwrap(), r, "via {printed}");
        }
    }

    #[test]
    fn structural_min_len() {
        let alph = sigma();
        let r = parse_regex("a a* b", &alph).unwrap();
        assert_eq!(r.min_len(), MinLen::Finite(2));
        assert_eq!(parse_regex("eps + a", &alph).unwrap().min_len(), MinLen::Finite(0));
        assert_eq!(parse_regex("empty", &alph).unwrap().min_len(), MinLen::Infinity);
    }

    #[test]
    fn star_free_check() {
        let alph = sigma();
        assert!(parse_regex("a (b + c)", &alph).unwrap().is_star_free());
        assert!(!parse_regex("a*", &alph).unwrap().is_star_free());
        assert!(parse_regex("eps", &alph).unwrap().is_star_free());
    }

    #[test]
    fn enumerates_star_free_words() {
        let alph = sigma();
        let words = parse_regex("a (b + c) + a b", &alph).unwrap().enumerate_words().unwrap();
        assert_eq!(words.len(), 2);
        assert!(parse_regex("a*", &alph).unwrap().enumerate_words().is_err());
    }
}
