//! Distance automata and the limitedness decision.
//!
//! A distance automaton is an NFA whose transitions carry weights 0 or 1;
//! the distance of an accepted word is the minimum total weight over its
//! accepting runs. The automaton is limited when that distance is uniformly
//! bounded over the whole language.
//!
//! Limitedness is decided through the matrix abstraction over the ordered
//! domain `0 < 1 < w < inf`: an entry records whether the cheapest runs
//! between two states are free, bounded positive, unbounded (`w`), or
//! impossible. Word concatenation is min-max matrix product, and repeating
//! an idempotent matrix unboundedly is its stabilization, which promotes
//! entries that must cross a positively weighted loop to `w`. The automaton
//! is unlimited exactly when some matrix in the closure of the symbol
//! matrices under product and stabilization maps the initial state to all
//! final states with value `w`.

use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::cmp::Reverse;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::regex::{MinLen, Node, Regex};
use crate::substitution::Substitution;
use crate::unionfree::ChainForm;

pub const DEFAULT_CLOSURE_BUDGET: usize = 200_000;

/// Transition weight of a distance automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    Zero,
    One,
}

impl Weight {
    fn value(self) -> u64 {
        match self {
            Weight::Zero => 0,
            Weight::One => 1,
        }
    }
}

/// NFA with {0,1}-weighted transitions; labels are `None` for epsilon.
#[derive(Debug, Clone)]
pub struct DistanceAutomaton {
    alphabet: Arc<Alphabet>,
    states: usize,
    transitions: Vec<(usize, Option<u32>, usize, Weight)>,
    initial: usize,
    finals: BTreeSet<usize>,
}

impl DistanceAutomaton {
    pub fn new(
        alphabet: Arc<Alphabet>,
        states: usize,
        transitions: Vec<(usize, Option<u32>, usize, Weight)>,
        initial: usize,
        finals: BTreeSet<usize>,
    ) -> Result<Self> {
        for &(p, _, q, _) in &transitions {
            if p >= states || q >= states {
                return Err(Error::Invalid(
                    "distance-automaton transition endpoint out of range".to_string(),
                ));
            }
        }
        if initial >= states || finals.iter().any(|&f| f >= states) {
            return Err(Error::Invalid(
                "distance-automaton state out of range".to_string(),
            ));
        }
        Ok(DistanceAutomaton {
            alphabet,
            states,
            transitions,
            initial,
            finals,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn transitions(&self) -> &[(usize, Option<u32>, usize, Weight)] {
        &self.transitions
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    /// Minimum total weight over accepting runs of `word`; `Infinity` when
    /// the word is not accepted. Dijkstra over (position, state) with
    /// epsilon moves staying in place.
    pub fn min_distance(&self, word: &[u32]) -> MinLen {
        let n = word.len();
        let mut dist: HashMap<(usize, usize), u64> = HashMap::new();
        let mut heap = BinaryHeap::new();
        dist.insert((0, self.initial), 0);
        heap.push(Reverse((0u64, 0usize, self.initial)));
        let mut best = MinLen::Infinity;
        while let Some(Reverse((d, pos, q))) = heap.pop() {
            if dist.get(&(pos, q)).copied().unwrap_or(u64::MAX) < d {
                continue;
            }
            if pos == n && self.finals.contains(&q) {
                best = MinLen::Finite(d);
                break;
            }
            for &(p, label, t, w) in &self.transitions {
                if p != q {
                    continue;
                }
                let next = match label {
                    None => Some((pos, t)),
                    Some(sym) if pos < n && word[pos] == sym => Some((pos + 1, t)),
                    Some(_) => None,
                };
                if let Some(key) = next {
                    let nd = d + w.value();
                    if nd < dist.get(&key).copied().unwrap_or(u64::MAX) {
                        dist.insert(key, nd);
                        heap.push(Reverse((nd, key.0, key.1)));
                    }
                }
            }
        }
        best
    }
}

struct Builder {
    transitions: Vec<(usize, Option<u32>, usize, Weight)>,
    states: usize,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    fn edge(&mut self, p: usize, label: Option<u32>, q: usize, w: Weight) {
        self.transitions.push((p, label, q, w));
    }

    /// Embeds the language of `r` as a weight-0 fragment.
    fn embed_image(&mut self, r: &Regex) -> (usize, Vec<usize>) {
        let start = self.fresh();
        let end = self.embed_node(r.node(), start);
        (start, vec![end])
    }

    fn embed_node(&mut self, n: &Node, from: usize) -> usize {
        match n {
            Node::Empty => self.fresh(),
            Node::Epsilon => {
                let to = self.fresh();
                self.edge(from, None, to, Weight::Zero);
                to
            }
            Node::Sym(s) => {
                let to = self.fresh();
                self.edge(from, Some(*s), to, Weight::Zero);
                to
            }
            Node::Union(a, b) => {
                let la = self.fresh();
                let lb = self.fresh();
                self.edge(from, None, la, Weight::Zero);
                self.edge(from, None, lb, Weight::Zero);
                let ea = self.embed_node(a, la);
                let eb = self.embed_node(b, lb);
                let to = self.fresh();
                self.edge(ea, None, to, Weight::Zero);
                self.edge(eb, None, to, Weight::Zero);
                to
            }
            Node::Concat(a, b) => {
                let mid = self.embed_node(a, from);
                self.embed_node(b, mid)
            }
            Node::Star(a) => {
                let inner = self.fresh();
                let ea = self.embed_node(a, inner);
                let to = self.fresh();
                self.edge(from, None, inner, Weight::Zero);
                self.edge(from, None, to, Weight::Zero);
                self.edge(ea, None, inner, Weight::Zero);
                self.edge(ea, None, to, Weight::Zero);
                to
            }
        }
    }

    /// Fragment for a union-free meta-expression: symbols embed their image
    /// automata with weight 0, concatenation joins fragments with weight-0
    /// epsilon edges, and a star adds weight-1 re-entry edges from the
    /// fragment's final states to its initial state (which becomes final).
    fn chain_fragment(&mut self, n: &Node, phi: &Substitution) -> Result<(usize, Vec<usize>)> {
        match n {
            Node::Empty => {
                let q = self.fresh();
                Ok((q, Vec::new()))
            }
            Node::Epsilon => {
                let q = self.fresh();
                Ok((q, vec![q]))
            }
            Node::Sym(s) => Ok(self.embed_image(phi.image(*s))),
            Node::Concat(a, b) => {
                let (ia, fa) = self.chain_fragment(a, phi)?;
                let (ib, fb) = self.chain_fragment(b, phi)?;
                for f in fa {
                    self.edge(f, None, ib, Weight::Zero);
                }
                Ok((ia, fb))
            }
            Node::Star(a) => {
                let (ia, fa) = self.chain_fragment(a, phi)?;
                for &f in &fa {
                    self.edge(f, None, ia, Weight::One);
                }
                let mut finals = fa;
                if !finals.contains(&ia) {
                    finals.push(ia);
                }
                Ok((ia, finals))
            }
            Node::Union(_, _) => Err(Error::NotUnionFree),
        }
    }
}

/// Builds the distance automaton of a chain form under `phi`: it accepts
/// the image language, and the distance of a word counts the star re-entries
/// a cheapest derivation needs.
pub fn build_distance_automaton(m: &ChainForm, phi: &Substitution) -> Result<DistanceAutomaton> {
    let mut b = Builder {
        transitions: Vec::new(),
        states: 0,
    };
    let chain = m.to_regex();
    let (initial, finals) = b.chain_fragment(chain.node(), phi)?;
    DistanceAutomaton::new(
        phi.sigma().clone(),
        b.states.max(1),
        b.transitions,
        initial,
        finals.into_iter().collect(),
    )
}

/// Epsilon-free form of a distance automaton. Transition weights are exact
/// path sums (not clamped to {0,1}); the distance of the empty word is kept
/// aside because an epsilon-free automaton cannot charge for it.
#[derive(Debug, Clone)]
pub struct EpsFreeDistanceAutomaton {
    pub states: usize,
    pub edges: Vec<(usize, u32, usize, u64)>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub epsilon_distance: MinLen,
}

impl EpsFreeDistanceAutomaton {
    pub fn min_distance(&self, word: &[u32]) -> MinLen {
        if word.is_empty() {
            return self.epsilon_distance;
        }
        let mut layer = vec![u64::MAX; self.states];
        layer[self.initial] = 0;
        for &sym in word {
            let mut next = vec![u64::MAX; self.states];
            for &(p, s, q, w) in &self.edges {
                if s == sym && layer[p] != u64::MAX {
                    next[q] = next[q].min(layer[p] + w);
                }
            }
            layer = next;
        }
        self.finals
            .iter()
            .map(|&f| layer[f])
            .min()
            .map_or(MinLen::Infinity, |d| {
                if d == u64::MAX {
                    MinLen::Infinity
                } else {
                    MinLen::Finite(d)
                }
            })
    }
}

/// Shortest epsilon-path distances between all state pairs.
fn epsilon_distances(a: &DistanceAutomaton) -> Vec<Vec<u64>> {
    let n = a.states;
    let mut dist = vec![vec![u64::MAX; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(p, label, q, w) in &a.transitions {
        if label.is_none() {
            dist[p][q] = dist[p][q].min(w.value());
        }
    }
    for k in 0..n {
        for i in 0..n {
            if dist[i][k] == u64::MAX {
                continue;
            }
            for j in 0..n {
                if dist[k][j] != u64::MAX {
                    dist[i][j] = dist[i][j].min(dist[i][k] + dist[k][j]);
                }
            }
        }
    }
    dist
}

/// Replaces epsilon paths by weight-folded direct edges. Word distances are
/// preserved exactly: each new edge carries the cheapest
/// `eps-path . symbol . eps-path` combination between its endpoints.
pub fn eliminate_epsilons(a: &DistanceAutomaton) -> EpsFreeDistanceAutomaton {
    let d = epsilon_distances(a);
    let n = a.states;
    let mut best: HashMap<(usize, u32, usize), u64> = HashMap::new();
    for &(r, label, s, w) in &a.transitions {
        let Some(sym) = label else { continue };
        for p in 0..n {
            if d[p][r] == u64::MAX {
                continue;
            }
            for q in 0..n {
                if d[s][q] == u64::MAX {
                    continue;
                }
                let total = d[p][r] + w.value() + d[s][q];
                best.entry((p, sym, q))
                    .and_modify(|v| *v = (*v).min(total))
                    .or_insert(total);
            }
        }
    }
    let epsilon_distance = a
        .finals
        .iter()
        .map(|&f| d[a.initial][f])
        .min()
        .map_or(MinLen::Infinity, |v| {
            if v == u64::MAX {
                MinLen::Infinity
            } else {
                MinLen::Finite(v)
            }
        });
    EpsFreeDistanceAutomaton {
        states: n,
        edges: best
            .into_iter()
            .map(|((p, s, q), w)| (p, s, q, w))
            .collect(),
        initial: a.initial,
        finals: a.finals.clone(),
        epsilon_distance,
    }
}

// Matrix entries over the limitedness domain.
const ZERO: u8 = 0;
const ONE: u8 = 1;
const OMEGA: u8 = 2;
const INF: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Matrix {
    side: usize,
    data: Vec<u8>,
}

impl Matrix {
    fn at(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.side + j]
    }

    fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.side;
        let mut data = vec![INF; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == INF {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    let via = a.max(b);
                    let cell = &mut data[i * n + j];
                    if via < *cell {
                        *cell = via;
                    }
                }
            }
        }
        Matrix { side: n, data }
    }

    /// Stabilization of an idempotent: unbounded repetition. An entry stays
    /// put when some intermediate state carries a weight-0 loop; otherwise a
    /// positive entry must cross a positively weighted loop on every
    /// repetition and becomes `w`.
    fn stabilize(&self) -> Matrix {
        let n = self.side;
        let stab = |e: u8| if e == ONE { OMEGA } else { e };
        let mut data = vec![INF; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == INF {
                    continue;
                }
                let loop_cls = stab(self.at(k, k));
                for j in 0..n {
                    let b = self.at(k, j);
                    let via = a.max(loop_cls).max(b);
                    let cell = &mut data[i * n + j];
                    if via < *cell {
                        *cell = via;
                    }
                }
            }
        }
        Matrix { side: n, data }
    }

    fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }
}

/// Outcome of the limitedness decision, including the size of the explored
/// matrix closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LimitednessReport {
    pub limited: bool,
    pub states: usize,
    pub closure_size: usize,
}

fn trim(ef: &EpsFreeDistanceAutomaton) -> Option<(Vec<usize>, EpsFreeDistanceAutomaton)> {
    let n = ef.states;
    let mut fwd = vec![false; n];
    let mut stack = vec![ef.initial];
    fwd[ef.initial] = true;
    while let Some(q) = stack.pop() {
        for &(p, _, t, _) in &ef.edges {
            if p == q && !fwd[t] {
                fwd[t] = true;
                stack.push(t);
            }
        }
    }
    let mut bwd = vec![false; n];
    let mut stack: Vec<usize> = ef.finals.iter().copied().collect();
    for &f in &ef.finals {
        bwd[f] = true;
    }
    while let Some(q) = stack.pop() {
        for &(p, _, t, _) in &ef.edges {
            if t == q && !bwd[p] {
                bwd[p] = true;
                stack.push(p);
            }
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&q| fwd[q] && bwd[q]).collect();
    if keep.is_empty() || !keep.contains(&ef.initial) {
        return None;
    }
    let index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let edges = ef
        .edges
        .iter()
        .filter(|&&(p, _, q, _)| index.contains_key(&p) && index.contains_key(&q))
        .map(|&(p, s, q, w)| (index[&p], s, index[&q], w))
        .collect();
    Some((
        keep.clone(),
        EpsFreeDistanceAutomaton {
            states: keep.len(),
            edges,
            initial: index[&ef.initial],
            finals: ef.finals.iter().filter_map(|f| index.get(f).copied()).collect(),
            epsilon_distance: ef.epsilon_distance,
        },
    ))
}

/// Decides limitedness by closing the symbol matrices under product and
/// idempotent stabilization, watching for a matrix that connects the initial
/// state to the final states only at `w`.
pub fn decide_limitedness(a: &DistanceAutomaton, budget: usize) -> Result<LimitednessReport> {
    let ef = eliminate_epsilons(a);
    let Some((_, ef)) = trim(&ef) else {
        // nothing co-reachable: the language is empty or {eps}
        return Ok(LimitednessReport {
            limited: true,
            states: a.states,
            closure_size: 0,
        });
    };
    let n = ef.states;
    let accept_value = |m: &Matrix| -> u8 {
        ef.finals
            .iter()
            .map(|&f| m.at(ef.initial, f))
            .min()
            .unwrap_or(INF)
    };

    let mut generators: Vec<Matrix> = Vec::new();
    let mut by_symbol: HashMap<u32, Matrix> = HashMap::new();
    for &(p, s, q, w) in &ef.edges {
        let m = by_symbol.entry(s).or_insert_with(|| Matrix {
            side: n,
            data: vec![INF; n * n],
        });
        let cls = if w == 0 { ZERO } else { ONE };
        let cell = &mut m.data[p * n + q];
        if cls < *cell {
            *cell = cls;
        }
    }
    let mut syms: Vec<u32> = by_symbol.keys().copied().collect();
    syms.sort_unstable();
    for s in syms {
        generators.push(by_symbol[&s].clone());
    }

    let mut elems: Vec<Matrix> = Vec::new();
    let mut seen: HashSet<Matrix> = HashSet::new();
    let mut unlimited = false;
    {
        let mut push = |m: Matrix, elems: &mut Vec<Matrix>, unlimited: &mut bool| {
            if accept_value(&m) == OMEGA {
                *unlimited = true;
            }
            if seen.insert(m.clone()) {
                elems.push(m);
            }
        };
        for g in generators {
            push(g, &mut elems, &mut unlimited);
        }
        let mut i = 0;
        while i < elems.len() && !unlimited {
            if elems.len() > budget {
                return Err(Error::ClosureBudget(budget));
            }
            for j in 0..=i {
                let left = elems[i].mul(&elems[j]);
                push(left, &mut elems, &mut unlimited);
                if unlimited {
                    break;
                }
                let right = elems[j].mul(&elems[i]);
                push(right, &mut elems, &mut unlimited);
                if unlimited {
                    break;
                }
            }
            if !unlimited && elems[i].is_idempotent() {
                let sharp = elems[i].stabilize();
                push(sharp, &mut elems, &mut unlimited);
            }
            i += 1;
        }
    }
    Ok(LimitednessReport {
        limited: !unlimited,
        states: a.states,
        closure_size: elems.len(),
    })
}

/// True iff the word distances of `a` are uniformly bounded over `L(a)`.
pub fn is_limited(a: &DistanceAutomaton) -> Result<bool> {
    Ok(decide_limitedness(a, DEFAULT_CLOSURE_BUDGET)?.limited)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::parse_regex;
    use crate::unionfree::to_chain_form;

    fn phi_one(image: &str) -> Substitution {
        let delta = Alphabet::meta(["D"]).unwrap();
        let sigma = Alphabet::base(["a", "b"]).unwrap();
        Substitution::new(
            delta,
            sigma.clone(),
            vec![parse_regex(image, &sigma).unwrap()],
        )
        .unwrap()
    }

    fn chain_automaton(chain_text: &str, phi: &Substitution) -> DistanceAutomaton {
        let chain = to_chain_form(&parse_regex(chain_text, phi.delta()).unwrap()).unwrap();
        build_distance_automaton(&chain, phi).unwrap()
    }

    #[test]
    fn single_symbol_has_zero_distances() {
        let phi = phi_one("a b");
        let a = chain_automaton("D", &phi);
        assert_eq!(a.min_distance(&[0, 1]), MinLen::Finite(0));
        assert_eq!(a.min_distance(&[0]), MinLen::Infinity);
        assert!(is_limited(&a).unwrap());
    }

    #[test]
    fn starred_optional_symbol_counts_reentries() {
        let phi = phi_one("a + eps");
        let a = chain_automaton("D*", &phi);
        for n in 2..=8u64 {
            let word = vec![0u32; n as usize];
            assert_eq!(a.min_distance(&word), MinLen::Finite(n - 1), "a^{n}");
        }
        assert_eq!(a.min_distance(&[]), MinLen::Finite(0));
        assert!(!is_limited(&a).unwrap());
    }

    #[test]
    fn leading_block_absorbs_everything() {
        let phi = phi_one("a*");
        let a = chain_automaton("D D*", &phi);
        for n in 0..=8usize {
            assert_eq!(a.min_distance(&vec![0u32; n]), MinLen::Finite(0));
        }
        assert!(is_limited(&a).unwrap());
    }

    #[test]
    fn zero_weight_automata_are_limited() {
        let phi = phi_one("a b + b");
        let a = chain_automaton("D D", &phi);
        assert!(a.transitions().iter().all(|&(_, _, _, w)| w == Weight::Zero));
        assert!(is_limited(&a).unwrap());
        assert_eq!(a.min_distance(&[0, 1, 1]), MinLen::Finite(0));
    }

    #[test]
    fn epsilon_elimination_preserves_distances() {
        let phi = phi_one("a + eps");
        for chain_text in ["D*", "D D*", "D* D*"] {
            let a = chain_automaton(chain_text, &phi);
            let ef = eliminate_epsilons(&a);
            for n in 0..=6usize {
                let w = vec![0u32; n];
                assert_eq!(a.min_distance(&w), ef.min_distance(&w), "{chain_text} a^{n}");
            }
        }
    }

    #[test]
    fn empty_language_is_limited() {
        let phi = phi_one("empty");
        let a = chain_automaton("D", &phi);
        assert!(is_limited(&a).unwrap());
        assert_eq!(a.min_distance(&[0]), MinLen::Infinity);
    }
}
