//! Automata backing the regular-expression decision procedures.
//!
//! [`Dfa`] values are always canonical: minimized, total, and with states
//! numbered in breadth-first discovery order (symbols explored in alphabet
//! order, initial state `0`). Canonical form makes language equality a
//! structural comparison, which is what every set-of-languages deduplication
//! in this crate relies on.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::regex::{concat_s, star_s, union_s, MinLen, Node, Regex};

pub const DEFAULT_STATE_BUDGET: usize = 100_000;

/// Thompson-style NFA with epsilon moves and a single initial state.
#[derive(Debug, Clone)]
pub struct Nfa {
    pub alphabet: Arc<Alphabet>,
    pub eps: Vec<Vec<usize>>,
    pub moves: Vec<Vec<(u32, usize)>>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
}

impl Nfa {
    pub fn states(&self) -> usize {
        self.eps.len()
    }

    fn fresh(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.moves.push(Vec::new());
        self.eps.len() - 1
    }

    /// Thompson construction.
    pub fn from_regex(r: &Regex) -> Result<Nfa> {
        if r.alphabet().is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut nfa = Nfa {
            alphabet: r.alphabet().clone(),
            eps: Vec::new(),
            moves: Vec::new(),
            initial: 0,
            finals: BTreeSet::new(),
        };
        let start = nfa.fresh();
        let end = nfa.build(r.node(), start);
        nfa.initial = start;
        nfa.finals.insert(end);
        Ok(nfa)
    }

    fn build(&mut self, n: &Node, from: usize) -> usize {
        match n {
            Node::Empty => self.fresh(),
            Node::Epsilon => {
                let to = self.fresh();
                self.eps[from].push(to);
                to
            }
            Node::Sym(s) => {
                let to = self.fresh();
                self.moves[from].push((*s, to));
                to
            }
            Node::Union(a, b) => {
                let la = self.fresh();
                let lb = self.fresh();
                self.eps[from].push(la);
                self.eps[from].push(lb);
                let ea = self.build(a, la);
                let eb = self.build(b, lb);
                let to = self.fresh();
                self.eps[ea].push(to);
                self.eps[eb].push(to);
                to
            }
            Node::Concat(a, b) => {
                let mid = self.build(a, from);
                self.build(b, mid)
            }
            Node::Star(a) => {
                let inner = self.fresh();
                let ea = self.build(a, inner);
                let to = self.fresh();
                self.eps[from].push(inner);
                self.eps[from].push(to);
                self.eps[ea].push(inner);
                self.eps[ea].push(to);
                to
            }
        }
    }

    pub fn eps_closure(&self, seed: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = seed.into_iter().collect();
        let mut queue: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = queue.pop() {
            for &t in &self.eps[q] {
                if set.insert(t) {
                    queue.push(t);
                }
            }
        }
        set
    }

    /// Subset construction into a total (not yet canonical) DFA.
    fn determinize(&self, budget: usize) -> Result<RawDfa> {
        let nsyms = self.alphabet.len();
        let start = self.eps_closure([self.initial]);
        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut trans: Vec<Vec<usize>> = Vec::new();
        let mut finals: Vec<bool> = Vec::new();
        let mut queue: VecDeque<BTreeSet<usize>> = VecDeque::new();
        ids.insert(start.clone(), 0);
        trans.push(vec![usize::MAX; nsyms]);
        finals.push(start.iter().any(|q| self.finals.contains(q)));
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            let id = ids[&set];
            for s in 0..nsyms as u32 {
                let mut next = BTreeSet::new();
                for &q in &set {
                    for &(sym, t) in &self.moves[q] {
                        if sym == s {
                            next.insert(t);
                        }
                    }
                }
                let next = self.eps_closure(next);
                let nid = match ids.get(&next) {
                    Some(&n) => n,
                    None => {
                        let n = trans.len();
                        if n >= budget {
                            return Err(Error::StateBudget(budget));
                        }
                        ids.insert(next.clone(), n);
                        trans.push(vec![usize::MAX; nsyms]);
                        finals.push(next.iter().any(|q| self.finals.contains(q)));
                        queue.push_back(next);
                        n
                    }
                };
                trans[id][s as usize] = nid;
            }
        }
        Ok(RawDfa {
            alphabet: self.alphabet.clone(),
            trans,
            initial: 0,
            finals,
        })
    }
}

/// Total DFA in arbitrary numbering; the intermediate form between
/// constructions and canonicalization.
#[derive(Debug, Clone)]
struct RawDfa {
    alphabet: Arc<Alphabet>,
    trans: Vec<Vec<usize>>,
    initial: usize,
    finals: Vec<bool>,
}

impl RawDfa {
    /// Moore partition refinement. Assumes all states reachable.
    fn minimize(&self) -> RawDfa {
        let n = self.trans.len();
        let nsyms = self.alphabet.len();
        let mut class: Vec<usize> = self.finals.iter().map(|&f| f as usize).collect();
        loop {
            let mut signature: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next_class = vec![0usize; n];
            for q in 0..n {
                let sig = (
                    class[q],
                    (0..nsyms).map(|s| class[self.trans[q][s]]).collect(),
                );
                let fresh = signature.len();
                let id = *signature.entry(sig).or_insert(fresh);
                next_class[q] = id;
            }
            let stable = signature.len() == class.iter().collect::<BTreeSet<_>>().len();
            class = next_class;
            if stable {
                break;
            }
        }
        let nclasses = class.iter().copied().collect::<BTreeSet<_>>().len();
        let mut trans = vec![vec![usize::MAX; nsyms]; nclasses];
        let mut finals = vec![false; nclasses];
        for q in 0..n {
            for s in 0..nsyms {
                trans[class[q]][s] = class[self.trans[q][s]];
            }
            if self.finals[q] {
                finals[class[q]] = true;
            }
        }
        RawDfa {
            alphabet: self.alphabet.clone(),
            trans,
            initial: class[self.initial],
            finals,
        }
    }

    /// Renumbers states in BFS discovery order, exploring symbols in
    /// alphabet order.
    fn canonical_order(&self) -> Dfa {
        let nsyms = self.alphabet.len();
        let mut order: Vec<usize> = Vec::new();
        let mut number: HashMap<usize, usize> = HashMap::new();
        number.insert(self.initial, 0);
        order.push(self.initial);
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for s in 0..nsyms {
                let t = self.trans[q][s];
                if !number.contains_key(&t) {
                    number.insert(t, order.len());
                    order.push(t);
                }
            }
        }
        let mut trans = vec![vec![0usize; nsyms]; order.len()];
        let mut finals = BTreeSet::new();
        for (new_q, &old_q) in order.iter().enumerate() {
            for s in 0..nsyms {
                trans[new_q][s] = number[&self.trans[old_q][s]];
            }
            if self.finals[old_q] {
                finals.insert(new_q);
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            trans,
            finals,
        }
    }

    fn canonical(&self) -> Dfa {
        self.minimize().canonical_order()
    }
}

/// Canonical deterministic automaton: minimized, total, BFS-numbered with
/// initial state `0`. Two canonical DFAs over the same alphabet accept the
/// same language iff they are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dfa {
    alphabet: Arc<Alphabet>,
    trans: Vec<Vec<usize>>,
    finals: BTreeSet<usize>,
}

impl Dfa {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.trans.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn step(&self, state: usize, sym: u32) -> usize {
        self.trans[state][sym as usize]
    }

    pub fn accepts(&self, word: &[u32]) -> bool {
        let mut q = 0;
        for &s in word {
            q = self.trans[q][s as usize];
        }
        self.finals.contains(&q)
    }

    pub fn is_empty(&self) -> bool {
        self.finals.is_empty()
    }

    /// Language over the same alphabet accepting everything.
    pub fn universal(alphabet: &Arc<Alphabet>) -> Result<Dfa> {
        to_dfa(&Regex::star(&sigma_any(alphabet)?))
    }

    /// Shortest accepted word length; `Infinity` for the empty language.
    pub fn min_len(&self) -> MinLen {
        if self.finals.contains(&0) {
            return MinLen::Finite(0);
        }
        let mut dist = vec![u64::MAX; self.states()];
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(q) = queue.pop_front() {
            for s in 0..self.alphabet.len() {
                let t = self.trans[q][s];
                if dist[t] == u64::MAX {
                    dist[t] = dist[q] + 1;
                    if self.finals.contains(&t) {
                        return MinLen::Finite(dist[t]);
                    }
                    queue.push_back(t);
                }
            }
        }
        MinLen::Infinity
    }

    /// The set of shortest nonempty accepted words; empty when the language
    /// contains no nonempty word.
    pub fn shortest_words(&self) -> Vec<Vec<u32>> {
        let n = self.states();
        let nsyms = self.alphabet.len();
        // Shortest walk of length >= 1 from the initial state to a final
        // state is at most n long when one exists.
        let mut target_len = None;
        let mut layer: BTreeSet<usize> = (0..nsyms as u32)
            .map(|s| self.step(0, s))
            .collect();
        for len in 1..=n as u64 {
            if layer.iter().any(|q| self.finals.contains(q)) {
                target_len = Some(len);
                break;
            }
            layer = layer
                .iter()
                .flat_map(|&q| (0..nsyms as u32).map(move |s| self.trans[q][s as usize]))
                .collect();
        }
        let Some(len) = target_len else {
            return Vec::new();
        };
        // reach[k][q]: a final state is exactly k steps away from q.
        let len = len as usize;
        let mut reach = vec![vec![false; n]; len + 1];
        for q in 0..n {
            reach[0][q] = self.finals.contains(&q);
        }
        for k in 1..=len {
            for q in 0..n {
                reach[k][q] = (0..nsyms).any(|s| reach[k - 1][self.trans[q][s]]);
            }
        }
        let mut words = Vec::new();
        let mut stack = vec![(0usize, Vec::<u32>::new())];
        while let Some((q, prefix)) = stack.pop() {
            if prefix.len() == len {
                if self.finals.contains(&q) {
                    words.push(prefix);
                }
                continue;
            }
            let remaining = len - prefix.len() - 1;
            for s in (0..nsyms as u32).rev() {
                let t = self.trans[q][s as usize];
                if reach[remaining][t] {
                    let mut next = prefix.clone();
                    next.push(s);
                    stack.push((t, next));
                }
            }
        }
        words.sort();
        words
    }

    /// All accepted words of length at most `n`.
    pub fn enumerate_words_bounded(&self, n: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut stack = vec![(0usize, Vec::<u32>::new())];
        while let Some((q, w)) = stack.pop() {
            if self.finals.contains(&q) {
                out.push(w.clone());
            }
            if w.len() < n {
                for s in (0..self.alphabet.len() as u32).rev() {
                    let mut next = w.clone();
                    next.push(s);
                    stack.push((self.trans[q][s as usize], next));
                }
            }
        }
        out.sort();
        out
    }

    pub fn complement(&self) -> Dfa {
        let raw = RawDfa {
            alphabet: self.alphabet.clone(),
            trans: self.trans.clone(),
            initial: 0,
            finals: (0..self.states()).map(|q| !self.finals.contains(&q)).collect(),
        };
        raw.canonical()
    }

    fn product(&self, other: &Dfa, keep: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(
                "product of automata over different alphabets".to_string(),
            ));
        }
        let nsyms = self.alphabet.len();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut trans: Vec<Vec<usize>> = Vec::new();
        let mut finals: Vec<bool> = Vec::new();
        let mut queue = VecDeque::new();
        ids.insert((0, 0), 0);
        trans.push(vec![usize::MAX; nsyms]);
        finals.push(keep(self.finals.contains(&0), other.finals.contains(&0)));
        queue.push_back((0usize, 0usize));
        while let Some((p, q)) = queue.pop_front() {
            let id = ids[&(p, q)];
            for s in 0..nsyms {
                let next = (self.trans[p][s], other.trans[q][s]);
                let nid = match ids.get(&next) {
                    Some(&n) => n,
                    None => {
                        let n = trans.len();
                        ids.insert(next, n);
                        trans.push(vec![usize::MAX; nsyms]);
                        finals.push(keep(
                            self.finals.contains(&next.0),
                            other.finals.contains(&next.1),
                        ));
                        queue.push_back(next);
                        n
                    }
                };
                trans[id][s] = nid;
            }
        }
        Ok(RawDfa {
            alphabet: self.alphabet.clone(),
            trans,
            initial: 0,
            finals,
        }
        .canonical())
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && !b)
    }

    pub fn includes(&self, other: &Dfa) -> Result<bool> {
        Ok(other.difference(self)?.is_empty())
    }
}

fn sigma_any(alphabet: &Arc<Alphabet>) -> Result<Regex> {
    if alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let syms: Vec<Regex> = alphabet.ids().map(|s| Regex::sym(alphabet, s)).collect();
    Ok(Regex::union_all(alphabet, &syms))
}

/// DFA accepting all nonempty words over the alphabet.
pub fn dfa_plus(alphabet: &Arc<Alphabet>) -> Result<Dfa> {
    let any = sigma_any(alphabet)?;
    to_dfa(&Regex::concat(&any, &Regex::star(&any)))
}

/// Compiles a regex into its canonical DFA with the default state budget.
pub fn to_dfa(r: &Regex) -> Result<Dfa> {
    to_dfa_budget(r, DEFAULT_STATE_BUDGET)
}

pub fn to_dfa_budget(r: &Regex, budget: usize) -> Result<Dfa> {
    Ok(Nfa::from_regex(r)?.determinize(budget)?.canonical())
}

pub fn determinize_nfa(nfa: &Nfa, budget: usize) -> Result<Dfa> {
    Ok(nfa.determinize(budget)?.canonical())
}

/// Language equality of two expressions over the same alphabet.
pub fn equiv(a: &Regex, b: &Regex) -> Result<bool> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch(
            "equivalence of expressions over different alphabets".to_string(),
        ));
    }
    Ok(to_dfa(a)? == to_dfa(b)?)
}

pub fn complement(a: &Regex) -> Result<Dfa> {
    Ok(to_dfa(a)?.complement())
}

pub fn intersect(a: &Regex, b: &Regex) -> Result<Dfa> {
    to_dfa(a)?.intersect(&to_dfa(b)?)
}

pub fn union_lang(a: &Regex, b: &Regex) -> Result<Dfa> {
    to_dfa(a)?.union(&to_dfa(b)?)
}

pub fn difference_lang(a: &Regex, b: &Regex) -> Result<Dfa> {
    to_dfa(a)?.difference(&to_dfa(b)?)
}

/// State elimination. The result re-compiles to the same canonical DFA.
pub fn dfa_to_regex(d: &Dfa) -> Regex {
    let alphabet = d.alphabet().clone();
    let n = d.states();
    let start = n;
    let accept = n + 1;
    let mut edges: HashMap<(usize, usize), Regex> = HashMap::new();
    let add = |edges: &mut HashMap<(usize, usize), Regex>, from: usize, to: usize, r: Regex| {
        match edges.get(&(from, to)) {
            Some(existing) => {
                let merged = union_s(existing, &r);
                edges.insert((from, to), merged);
            }
            None => {
                edges.insert((from, to), r);
            }
        }
    };
    for q in 0..n {
        for s in 0..alphabet.len() as u32 {
            let t = d.step(q, s);
            add(&mut edges, q, t, Regex::sym(&alphabet, s));
        }
    }
    add(&mut edges, start, 0, Regex::epsilon(&alphabet));
    for &f in d.finals() {
        add(&mut edges, f, accept, Regex::epsilon(&alphabet));
    }

    let mut alive: BTreeSet<usize> = (0..n).collect();
    while let Some(&victim) = alive.iter().min_by_key(|&&s| {
        let ins = edges.keys().filter(|&&(p, q)| q == s && p != s).count();
        let outs = edges.keys().filter(|&&(p, q)| p == s && q != s).count();
        (ins * outs, s)
    }) {
        alive.remove(&victim);
        let self_loop = edges.remove(&(victim, victim));
        let ins: Vec<(usize, Regex)> = edges
            .iter()
            .filter(|&(&(_, q), _)| q == victim)
            .map(|(&(p, _), r)| (p, r.clone()))
            .collect();
        let outs: Vec<(usize, Regex)> = edges
            .iter()
            .filter(|&(&(p, _), _)| p == victim)
            .map(|(&(_, q), r)| (q, r.clone()))
            .collect();
        edges.retain(|&(p, q), _| p != victim && q != victim);
        for (p, rin) in &ins {
            for (q, rout) in &outs {
                let mid = match &self_loop {
                    Some(l) => concat_s(rin, &concat_s(&star_s(l), rout)),
                    None => concat_s(rin, rout),
                };
                if !matches!(mid.node().as_ref(), Node::Empty) {
                    add(&mut edges, *p, *q, mid);
                }
            }
        }
    }
    match edges.remove(&(start, accept)) {
        Some(r) => r,
        None => Regex::empty(&alphabet),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::parse_regex;

    fn sigma() -> Arc<Alphabet> {
        Alphabet::base(["a", "b"]).unwrap()
    }

    fn dfa(text: &str) -> Dfa {
        to_dfa(&parse_regex(text, &sigma()).unwrap()).unwrap()
    }

    #[test]
    fn canonical_shapes() {
        let empty = dfa("empty");
        assert_eq!(empty.states(), 1);
        assert!(empty.is_empty());

        let ab = dfa("a b");
        assert_eq!(ab.states(), 4); // chain of 3 plus the dead state
        assert!(ab.accepts(&[0, 1]));
        assert!(!ab.accepts(&[0]));

        let universal = dfa("(a + b)*");
        assert_eq!(universal.states(), 1);
        assert!(universal.accepts(&[]));
        assert!(universal.accepts(&[1, 0, 1]));
    }

    #[test]
    fn equivalence_checks() {
        let alph = sigma();
        let e = |t: &str| parse_regex(t, &alph).unwrap();
        assert!(equiv(&e("a* + eps"), &e("a*")).unwrap());
        assert!(!equiv(&e("(a b)*"), &e("a* b*")).unwrap());
        assert!(!equiv(&e("a + b*"), &e("a* + b")).unwrap());
    }

    #[test]
    fn boolean_operations() {
        let alph = sigma();
        let e = |t: &str| parse_regex(t, &alph).unwrap();
        let inter = intersect(&e("a + b*"), &e("a* + b")).unwrap();
        assert_eq!(inter, to_dfa(&e("a + b + eps")).unwrap());
        assert_eq!(complement(&e("empty")).unwrap(), to_dfa(&e("(a + b)*")).unwrap());
        let diff = difference_lang(&e("a*"), &e("a a*")).unwrap();
        assert_eq!(diff, to_dfa(&e("eps")).unwrap());
        assert!(intersect(&e("(a a)* a"), &e("(a a)*")).unwrap().is_empty());
    }

    #[test]
    fn min_len_and_shortest_words() {
        let alph = sigma();
        let e = |t: &str| parse_regex(t, &alph).unwrap();
        assert_eq!(to_dfa(&e("a a* b")).unwrap().min_len(), MinLen::Finite(2));
        assert_eq!(to_dfa(&e("eps + a")).unwrap().min_len(), MinLen::Finite(0));
        assert_eq!(to_dfa(&e("empty")).unwrap().min_len(), MinLen::Infinity);

        let s = to_dfa(&e("eps + a + b + a a")).unwrap().shortest_words();
        assert_eq!(s, vec![vec![0], vec![1]]);
        let s = to_dfa(&e("a a a*")).unwrap().shortest_words();
        assert_eq!(s, vec![vec![0, 0]]);
        assert!(to_dfa(&e("eps")).unwrap().shortest_words().is_empty());
        assert!(to_dfa(&e("empty")).unwrap().shortest_words().is_empty());
    }

    #[test]
    fn bounded_enumeration() {
        let alph = sigma();
        let e = |t: &str| parse_regex(t, &alph).unwrap();
        let words = to_dfa(&e("a*")).unwrap().enumerate_words_bounded(2);
        assert_eq!(words, vec![vec![], vec![0], vec![0, 0]]);
    }

    #[test]
    fn state_budget_is_enforced() {
        let alph = sigma();
        let r = parse_regex("(a + b)* a (a + b) (a + b) (a + b) (a + b)", &alph).unwrap();
        assert!(matches!(to_dfa_budget(&r, 4), Err(Error::StateBudget(4))));
        assert!(to_dfa_budget(&r, DEFAULT_STATE_BUDGET).is_ok());
    }

    #[test]
    fn state_elimination_round_trips() {
        for text in ["empty", "eps", "a b", "(a b)* + b a*", "a* b (b a)*", "(a + b)*"] {
            let d = dfa(text);
            let back = dfa_to_regex(&d);
            assert_eq!(to_dfa(&back).unwrap(), d, "via {text} -> {back}");
        }
    }
}
