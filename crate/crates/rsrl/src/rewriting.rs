//! Rewriting a query language over the base alphabet into the meta-alphabet.
//!
//! The maximal rewriting of a query `R` under a substitution `phi` is the
//! set of nonempty meta-words whose image is contained in `R`. It is regular
//! and is computed here by a complement construction: a meta-word escapes the
//! rewriting exactly when some image word of it reaches the complement of
//! `R`, and that reachability relation per meta-symbol is a product of the
//! complement DFA with the symbol's image automaton.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::automata::{determinize_nfa, dfa_plus, to_dfa_budget, Dfa, Nfa, DEFAULT_STATE_BUDGET};
use crate::error::Result;
use crate::regex::{MinLen, Regex};
use crate::substitution::Substitution;

/// All pairs `(q, q')` of DFA states such that some word of `image` leads
/// from `q` to `q'`.
fn reachability_relation(d: &Dfa, image: &Regex) -> Result<Vec<(usize, usize)>> {
    let nfa = Nfa::from_regex(image)?;
    let mut pairs = Vec::new();
    for start in 0..d.states() {
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        let mut hit: BTreeSet<usize> = BTreeSet::new();
        for q in nfa.eps_closure([nfa.initial]) {
            if seen.insert((start, q)) {
                queue.push_back((start, q));
            }
        }
        while let Some((dq, nq)) = queue.pop_front() {
            if nfa.finals.contains(&nq) {
                hit.insert(dq);
            }
            for &(sym, nt) in &nfa.moves[nq] {
                let dt = d.step(dq, sym);
                for cq in nfa.eps_closure([nt]) {
                    if seen.insert((dt, cq)) {
                        queue.push_back((dt, cq));
                    }
                }
            }
        }
        pairs.extend(hit.into_iter().map(|t| (start, t)));
    }
    Ok(pairs)
}

/// The maximal rewriting of `query` under `phi`, as a canonical DFA over the
/// meta-alphabet: it accepts exactly the nonempty meta-words `w` with
/// `phi(w)` included in `query`.
pub fn maximal_rewriting(query: &Regex, phi: &Substitution) -> Result<Dfa> {
    maximal_rewriting_budget(query, phi, DEFAULT_STATE_BUDGET)
}

pub fn maximal_rewriting_budget(
    query: &Regex,
    phi: &Substitution,
    budget: usize,
) -> Result<Dfa> {
    let co_query = to_dfa_budget(query, budget)?.complement();
    let delta = phi.delta();
    let mut nfa = Nfa {
        alphabet: delta.clone(),
        eps: vec![Vec::new(); co_query.states()],
        moves: vec![Vec::new(); co_query.states()],
        initial: co_query.initial(),
        finals: co_query.finals().clone(),
    };
    for sym in delta.ids() {
        for (from, to) in reachability_relation(&co_query, phi.image(sym))? {
            nfa.moves[from].push((sym, to));
        }
    }
    // nfa accepts the words whose image meets the complement of the query;
    // its complement within nonempty words is the rewriting.
    let escaping = determinize_nfa(&nfa, budget)?;
    escaping.complement().intersect(&dfa_plus(delta)?)
}

/// The words of `l` whose image has shortest-word length exactly `bound`,
/// as a canonical DFA over the meta-alphabet.
///
/// Image lengths add along a word, so the construction runs the DFA of `l`
/// with an accumulated cost counter, capped just above `bound`; symbols with
/// empty image send the run into the cap (their words generate the empty
/// language, which has no shortest word and belongs to no stratum).
pub fn stratum(l: &Regex, bound: u64, phi: &Substitution) -> Result<Dfa> {
    let base = to_dfa_budget(l, DEFAULT_STATE_BUDGET)?;
    let delta = phi.delta();
    let costs: Vec<MinLen> = delta.ids().map(|s| phi.image(s).min_len()).collect();
    let cap = bound + 1;
    let nsyms = delta.len();
    // states are (base state, accumulated cost 0..=cap)
    let width = (cap + 1) as usize;
    let id = |q: usize, c: u64| q * width + c as usize;
    let n = base.states() * width;
    let mut trans = vec![vec![0usize; nsyms]; n];
    let mut finals = vec![false; n];
    for q in 0..base.states() {
        for c in 0..=cap {
            let from = id(q, c);
            finals[from] = base.finals().contains(&q) && c == bound;
            for s in 0..nsyms {
                let t = base.step(q, s as u32);
                let nc = match costs[s] {
                    MinLen::Finite(k) => (c + k).min(cap),
                    MinLen::Infinity => cap,
                };
                trans[from][s] = id(t, nc);
            }
        }
    }
    // Repackage through an NFA-free raw path: reuse determinize-free
    // canonicalization by building an Nfa with only deterministic moves.
    let mut nfa = Nfa {
        alphabet: delta.clone(),
        eps: vec![Vec::new(); n],
        moves: vec![Vec::new(); n],
        initial: id(0, 0),
        finals: finals
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(i))
            .collect(),
    };
    for (q, row) in trans.iter().enumerate() {
        for (s, &t) in row.iter().enumerate() {
            nfa.moves[q].push((s as u32, t));
        }
    }
    determinize_nfa(&nfa, DEFAULT_STATE_BUDGET)
}

/// Shortest-word length of the image of `l` under `phi`.
pub fn minlen_of_image(l: &Regex, phi: &Substitution) -> MinLen {
    l.min_len_with(&|s| phi.image(s).min_len())
}
