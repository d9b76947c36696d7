//! Union-free decomposition and the chain-form calculus.
//!
//! Every regular expression splits into finitely many union-free expressions
//! whose languages union to the original, using the rewritings
//! `(A+B)C = AC + BC`, `A(B+C) = AB + AC` and `(A+B)* = (A*B*)*`. A
//! union-free expression always has the chain shape
//! `N1 S1* N2 ... Nm Sm* N(m+1)` with words `Nh` and union-free bodies `Sh`,
//! which is the shape the unfold enumeration works on.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::regex::{concat_s, star_s, Node, Regex};
use crate::substitution::Substitution;

pub const DEFAULT_UNIONFREE_BUDGET: usize = 4096;

pub fn is_union_free(r: &Regex) -> bool {
    fn go(n: &Node) -> bool {
        match n {
            Node::Empty | Node::Epsilon | Node::Sym(_) => true,
            Node::Union(_, _) => false,
            Node::Concat(a, b) => go(a) && go(b),
            Node::Star(a) => go(a),
        }
    }
    go(r.node())
}

/// Splits `r` into union-free expressions whose languages union to `L(r)`.
/// Star bodies are rewritten bottom-up before unions are distributed, and
/// duplicate terms are removed structurally.
pub fn union_free_decomp(r: &Regex, budget: usize) -> Result<Vec<Regex>> {
    let mut memo: HashMap<Arc<Node>, Vec<Arc<Node>>> = HashMap::new();
    let terms = decomp(r.node(), &mut memo, budget)?;
    Ok(terms
        .into_iter()
        .map(|n| Regex::from_node(r.alphabet().clone(), n))
        .collect())
}

fn push_unique(acc: &mut Vec<Arc<Node>>, seen: &mut HashSet<Arc<Node>>, n: Arc<Node>) {
    if seen.insert(n.clone()) {
        acc.push(n);
    }
}

fn decomp(
    n: &Arc<Node>,
    memo: &mut HashMap<Arc<Node>, Vec<Arc<Node>>>,
    budget: usize,
) -> Result<Vec<Arc<Node>>> {
    if let Some(hit) = memo.get(n) {
        return Ok(hit.clone());
    }
    let mut acc: Vec<Arc<Node>> = Vec::new();
    let mut seen: HashSet<Arc<Node>> = HashSet::new();
    match &**n {
        Node::Empty | Node::Epsilon | Node::Sym(_) => acc.push(n.clone()),
        Node::Union(a, b) => {
            for t in decomp(a, memo, budget)? {
                push_unique(&mut acc, &mut seen, t);
            }
            for t in decomp(b, memo, budget)? {
                push_unique(&mut acc, &mut seen, t);
            }
        }
        Node::Concat(a, b) => {
            let left = decomp(a, memo, budget)?;
            let right = decomp(b, memo, budget)?;
            for x in &left {
                for y in &right {
                    if acc.len() >= budget {
                        return Err(Error::UnionFreeBudget(budget));
                    }
                    push_unique(
                        &mut acc,
                        &mut seen,
                        Arc::new(Node::Concat(x.clone(), y.clone())),
                    );
                }
            }
        }
        Node::Star(a) => {
            let inner = decomp(a, memo, budget)?;
            let body = match inner.len() {
                1 => inner[0].clone(),
                _ => {
                    let mut stars = inner.iter().map(|t| Arc::new(Node::Star(t.clone())));
                    let first = stars.next().expect("decomposition is never empty");
                    stars.fold(first, |l, r| Arc::new(Node::Concat(l, r)))
                }
            };
            acc.push(Arc::new(Node::Star(body)));
        }
    }
    if acc.len() > budget {
        return Err(Error::UnionFreeBudget(budget));
    }
    memo.insert(n.clone(), acc.clone());
    Ok(acc)
}

/// Removes `empty` subterms: a concatenation with an empty factor is empty
/// and the star of the empty language is `eps`. Afterwards `empty` can only
/// be the root.
pub fn simplify_empty(r: &Regex) -> Regex {
    fn go(n: &Arc<Node>) -> Arc<Node> {
        match &**n {
            Node::Empty | Node::Epsilon | Node::Sym(_) => n.clone(),
            Node::Union(a, b) => {
                let (a, b) = (go(a), go(b));
                match (&*a, &*b) {
                    (Node::Empty, _) => b,
                    (_, Node::Empty) => a,
                    _ => Arc::new(Node::Union(a, b)),
                }
            }
            Node::Concat(a, b) => {
                let (a, b) = (go(a), go(b));
                if matches!(*a, Node::Empty) || matches!(*b, Node::Empty) {
                    Arc::new(Node::Empty)
                } else {
                    Arc::new(Node::Concat(a, b))
                }
            }
            Node::Star(a) => {
                let a = go(a);
                if matches!(*a, Node::Empty) {
                    Arc::new(Node::Epsilon)
                } else {
                    Arc::new(Node::Star(a))
                }
            }
        }
    }
    Regex::from_node(r.alphabet().clone(), go(r.node()))
}

/// Union-free language in the shape `N1 S1* N2 ... Nm Sm* N(m+1)`: the
/// words between stars and the star bodies, in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainForm {
    alphabet: Arc<Alphabet>,
    words: Vec<Vec<u32>>,
    stars: Vec<Regex>,
}

impl ChainForm {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// The words `N1 ... N(m+1)`; one more than the number of stars.
    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    /// The star bodies `S1 ... Sm`.
    pub fn stars(&self) -> &[Regex] {
        &self.stars
    }

    pub fn to_regex(&self) -> Regex {
        let mut atoms: Vec<Regex> = Vec::new();
        for (i, word) in self.words.iter().enumerate() {
            for &s in word {
                atoms.push(Regex::sym(&self.alphabet, s));
            }
            if i < self.stars.len() {
                atoms.push(Regex::star(&self.stars[i]));
            }
        }
        Regex::concat_all(&self.alphabet, &atoms)
    }

    /// True when the chain is a single word with no stars.
    pub fn is_single_word(&self) -> bool {
        self.stars.is_empty()
    }

    /// Leftmost star slot whose body can produce a word containing a symbol
    /// with an epsilon-free image.
    pub fn violating_star(&self, phi: &Substitution) -> Option<usize> {
        self.stars
            .iter()
            .position(|s| has_non_epsilon_symbol(s, phi))
    }
}

pub(crate) fn has_non_epsilon_symbol(r: &Regex, phi: &Substitution) -> bool {
    r.symbols_used().iter().any(|&s| !phi.has_epsilon(s))
}

/// Flattens nested concatenations into the list of chain atoms, skipping
/// `eps` factors.
fn flatten_atoms(r: &Regex) -> Vec<Regex> {
    fn go(n: &Arc<Node>, alphabet: &Arc<Alphabet>, out: &mut Vec<Regex>) {
        match &**n {
            Node::Concat(a, b) => {
                go(a, alphabet, out);
                go(b, alphabet, out);
            }
            Node::Epsilon => {}
            _ => out.push(Regex::from_node(alphabet.clone(), n.clone())),
        }
    }
    let mut out = Vec::new();
    go(r.node(), r.alphabet(), &mut out);
    out
}

/// Reads a union-free expression into chain form. The expression must not
/// denote the empty language.
pub fn to_chain_form(u: &Regex) -> Result<ChainForm> {
    if !is_union_free(u) {
        return Err(Error::NotUnionFree);
    }
    let simplified = simplify_empty(u);
    if matches!(**simplified.node(), Node::Empty) {
        return Err(Error::EmptyChain);
    }
    let mut words: Vec<Vec<u32>> = vec![Vec::new()];
    let mut stars: Vec<Regex> = Vec::new();
    for atom in flatten_atoms(&simplified) {
        match &**atom.node() {
            Node::Sym(s) => words.last_mut().unwrap().push(*s),
            Node::Star(body) => {
                stars.push(Regex::from_node(u.alphabet().clone(), body.clone()));
                words.push(Vec::new());
            }
            other => unreachable!("flattened union-free atom {other:?}"),
        }
    }
    Ok(ChainForm {
        alphabet: u.alphabet().clone(),
        words,
        stars,
    })
}

/// A 1-based path of star indices selecting a nested star subexpression;
/// the empty sequence addresses the expression itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "<{}>",
            self.0
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Unrolls `s` so that the star selected by `p` is instantiated at least
/// once: for `s = a1 b1* a2 ... an bn* a(n+1)` and `p = <h | t>`, the
/// result is `a1 .. b(h)* ufs(b(h), t) b(h)* .. a(n+1)`. The empty position
/// leaves `s` unchanged.
pub fn ufs(s: &Regex, p: &Position) -> Result<Regex> {
    if p.0.is_empty() {
        return Ok(s.clone());
    }
    let atoms = flatten_atoms(s);
    let target = p.0[0];
    let mut seen_stars = 0usize;
    let mut star_slot = None;
    for (i, atom) in atoms.iter().enumerate() {
        if matches!(&**atom.node(), Node::Star(_)) {
            seen_stars += 1;
            if seen_stars == target {
                star_slot = Some(i);
                break;
            }
        }
    }
    let Some(idx) = star_slot else {
        return Err(Error::InvalidPosition(p.0.clone()));
    };
    let body = match &**atoms[idx].node() {
        Node::Star(b) => Regex::from_node(s.alphabet().clone(), b.clone()),
        _ => unreachable!(),
    };
    let inner = ufs(&body, &Position(p.0[1..].to_vec()))?;
    let mut result: Vec<Regex> = Vec::with_capacity(atoms.len() + 2);
    result.extend(atoms[..=idx].iter().cloned());
    result.push(inner);
    result.push(Regex::star(&body));
    result.extend(atoms[idx + 1..].iter().cloned());
    Ok(Regex::concat_all(s.alphabet(), &result))
}

/// Positions of the star-chain levels of `s` that directly (not through a
/// deeper star) contain a symbol with an epsilon-free image. The top-level
/// chain is addressed by the empty position.
pub fn critical(s: &Regex, phi: &Substitution) -> Vec<Position> {
    fn walk(s: &Regex, phi: &Substitution, prefix: &mut Vec<usize>, out: &mut Vec<Position>) {
        let atoms = flatten_atoms(s);
        let direct = atoms.iter().any(|a| match &**a.node() {
            Node::Sym(sym) => !phi.has_epsilon(*sym),
            _ => false,
        });
        if direct {
            out.push(Position(prefix.clone()));
        }
        let mut star_idx = 0usize;
        for atom in &atoms {
            if let Node::Star(body) = &**atom.node() {
                star_idx += 1;
                prefix.push(star_idx);
                let body = Regex::from_node(s.alphabet().clone(), body.clone());
                walk(&body, phi, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(s, phi, &mut Vec::new(), &mut out);
    out
}

/// The epsilon part of `s`: a union-free expression for the words of `s`
/// built only from symbols whose image contains `eps`. May denote the empty
/// language or `{eps}`.
pub fn e_part(s: &Regex, phi: &Substitution) -> Regex {
    fn go(n: &Arc<Node>, r: &Regex, phi: &Substitution) -> Regex {
        let alphabet = r.alphabet();
        match &**n {
            Node::Empty => Regex::empty(alphabet),
            Node::Epsilon => Regex::epsilon(alphabet),
            Node::Sym(s) => {
                if phi.has_epsilon(*s) {
                    Regex::sym(alphabet, *s)
                } else {
                    Regex::empty(alphabet)
                }
            }
            Node::Union(a, b) => {
                let (ea, eb) = (go(a, r, phi), go(b, r, phi));
                crate::regex::union_s(&ea, &eb)
            }
            Node::Concat(a, b) => concat_s(&go(a, r, phi), &go(b, r, phi)),
            Node::Star(a) => star_s(&go(a, r, phi)),
        }
    }
    go(s.node(), s, phi)
}

/// The star-unrolling rewrite behind unfold: for a union-free `s`,
///
/// ```text
/// s* = E* + sum over critical positions p of  E* ufs(s, p) s*
/// ```
///
/// holds as languages, where `E` is the epsilon part of `s`. Every branch
/// strictly increases the shortest image length because `ufs(s, p)`
/// instantiates a symbol with an epsilon-free image.
pub fn unfold_rewrite(s: &Regex, phi: &Substitution) -> (Regex, Vec<(Position, Regex)>) {
    let e = e_part(s, phi);
    let e_star = star_s(&e);
    let s_star = star_s(s);
    let branches = critical(s, phi)
        .into_iter()
        .map(|p| {
            let unrolled = ufs(s, &p).expect("critical positions index existing stars");
            let branch = concat_s(&e_star, &concat_s(&unrolled, &s_star));
            (p, branch)
        })
        .collect();
    (e, branches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::equiv;
    use crate::regex::parse_regex;

    fn sigma() -> Arc<Alphabet> {
        Alphabet::base(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn decomposes_unions_over_concatenation() {
        let alph = sigma();
        let r = parse_regex("(a + b) c", &alph).unwrap();
        let terms = union_free_decomp(&r, DEFAULT_UNIONFREE_BUDGET).unwrap();
        let strings: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
        assert_eq!(strings, vec!["a c", "b c"]);
    }

    #[test]
    fn star_of_union_becomes_star_of_stars() {
        let alph = sigma();
        let r = parse_regex("(a + b)*", &alph).unwrap();
        let terms = union_free_decomp(&r, DEFAULT_UNIONFREE_BUDGET).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].to_string(), "(a* b*)*");
        assert!(equiv(&terms[0], &r).unwrap());
    }

    #[test]
    fn union_free_input_is_returned_unchanged() {
        let alph = sigma();
        let r = parse_regex("a b* c", &alph).unwrap();
        let terms = union_free_decomp(&r, DEFAULT_UNIONFREE_BUDGET).unwrap();
        assert_eq!(terms, vec![r]);
    }

    #[test]
    fn budget_guards_expansion() {
        let alph = sigma();
        let r = parse_regex("(a + b) (a + b) (a + b)", &alph).unwrap();
        assert!(matches!(
            union_free_decomp(&r, 4),
            Err(Error::UnionFreeBudget(4))
        ));
    }

    #[test]
    fn chain_form_examples() {
        let delta = Alphabet::meta(["D1", "D2"]).unwrap();
        let u = parse_regex("D1 D2* D1", &delta).unwrap();
        let chain = to_chain_form(&u).unwrap();
        assert_eq!(chain.words(), &[vec![0], vec![0]]);
        assert_eq!(chain.stars().len(), 1);
        assert_eq!(chain.stars()[0].to_string(), "D2");
        assert!(equiv(&chain.to_regex(), &u).unwrap());

        let u = parse_regex("(D1* D2*)*", &delta).unwrap();
        let chain = to_chain_form(&u).unwrap();
        assert_eq!(chain.words(), &[Vec::<u32>::new(), Vec::new()]);
        assert_eq!(chain.stars()[0].to_string(), "D1* D2*");

        let u = parse_regex("D1 D2", &delta).unwrap();
        let chain = to_chain_form(&u).unwrap();
        assert!(chain.is_single_word());
        assert_eq!(chain.words(), &[vec![0, 1]]);

        assert!(matches!(
            to_chain_form(&parse_regex("D1 empty", &delta).unwrap()),
            Err(Error::EmptyChain)
        ));
    }

    #[test]
    fn ufs_matches_the_worked_unrolling() {
        let delta = Alphabet::meta(["A", "B", "C", "D"]).unwrap();
        let s = parse_regex("A* (B* C*)* D*", &delta).unwrap();
        let unrolled = ufs(&s, &Position(vec![2, 1])).unwrap();
        let expected = parse_regex("A* (B* C*)* (B* (B) B* C*) (B* C*)* D*", &delta).unwrap();
        assert_eq!(unrolled, expected);

        assert_eq!(ufs(&s, &Position::root()).unwrap(), s);

        let a_star = parse_regex("A*", &delta).unwrap();
        assert_eq!(
            ufs(&a_star, &Position(vec![1])).unwrap(),
            parse_regex("A* A A*", &delta).unwrap()
        );

        assert!(matches!(
            ufs(&a_star, &Position(vec![2])),
            Err(Error::InvalidPosition(_))
        ));
    }

    fn phi_only_b_free(delta: &Arc<Alphabet>) -> Substitution {
        // every image contains eps except b's
        let sigma = Alphabet::base(["x"]).unwrap();
        let images = delta
            .names()
            .map(|n| {
                if n == "B" {
                    parse_regex("x", &sigma).unwrap()
                } else {
                    parse_regex("x + eps", &sigma).unwrap()
                }
            })
            .collect();
        Substitution::new(delta.clone(), sigma, images).unwrap()
    }

    #[test]
    fn critical_positions_scan_star_levels() {
        let delta = Alphabet::meta(["A", "B", "C", "D"]).unwrap();
        let phi = phi_only_b_free(&delta);

        let s = parse_regex("A* (B* C*)* D*", &delta).unwrap();
        assert_eq!(critical(&s, &phi), vec![Position(vec![2, 1])]);

        let b = parse_regex("B", &delta).unwrap();
        assert_eq!(critical(&b, &phi), vec![Position::root()]);

        let s = parse_regex("A* C*", &delta).unwrap();
        assert!(critical(&s, &phi).is_empty());
    }

    #[test]
    fn epsilon_part_examples() {
        let delta = Alphabet::meta(["A", "B", "C", "D"]).unwrap();
        let phi = phi_only_b_free(&delta);

        // mandatory epsilon-free symbol kills the whole expression
        let s = parse_regex("A* B A*", &delta).unwrap();
        assert!(matches!(**e_part(&s, &phi).node(), Node::Empty));

        let s = parse_regex("A*", &delta).unwrap();
        assert_eq!(e_part(&s, &phi), s);

        let s = parse_regex("B*", &delta).unwrap();
        assert!(matches!(**e_part(&s, &phi).node(), Node::Epsilon));
    }

    #[test]
    fn unfold_rewrite_is_a_language_identity() {
        let delta = Alphabet::meta(["A", "B", "C", "D"]).unwrap();
        let phi = phi_only_b_free(&delta);
        for text in ["B", "A* B C*", "A* (B* C*)* D*", "(A* B*)* C"] {
            let s = parse_regex(text, &delta).unwrap();
            let (e, branches) = unfold_rewrite(&s, &phi);
            let mut rhs = star_s(&e);
            for (_, branch) in &branches {
                rhs = Regex::union(&rhs, branch);
            }
            assert!(
                equiv(&star_s(&s), &rhs).unwrap(),
                "identity fails for {text}"
            );
        }
    }

    #[test]
    fn single_symbol_unrolling() {
        let delta = Alphabet::meta(["A", "B", "C", "D"]).unwrap();
        let phi = phi_only_b_free(&delta);
        let s = parse_regex("B", &delta).unwrap();
        let (e, branches) = unfold_rewrite(&s, &phi);
        assert!(equiv(&star_s(&e), &Regex::epsilon(&delta)).unwrap());
        assert_eq!(branches.len(), 1);
        let expected = parse_regex("B B*", &delta).unwrap();
        assert!(equiv(&branches[0].1, &expected).unwrap());
        // the star identity: B* = eps + B B*
        let rhs = Regex::union(&star_s(&e), &branches[0].1);
        assert!(equiv(&star_s(&s), &rhs).unwrap());
    }

    #[test]
    fn decomposition_union_equals_input() {
        let alph = sigma();
        for text in [
            "(a + b) c",
            "(a + b)*",
            "a (b + c) (a + b)",
            "((a + b) c)* + b",
            "(a b + c)* a",
        ] {
            let r = parse_regex(text, &alph).unwrap();
            let terms = union_free_decomp(&r, DEFAULT_UNIONFREE_BUDGET).unwrap();
            let rebuilt = Regex::union_all(&alph, &terms);
            assert!(equiv(&r, &rebuilt).unwrap(), "decomposition of {text}");
            for t in &terms {
                assert!(is_union_free(t));
            }
        }
    }
}
