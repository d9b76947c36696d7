//! Membership of a regular language in a rational set.
//!
//! The general decision runs a pipeline: restrict the generator to the
//! maximal rewriting of the query, split the result into union-free chains,
//! unfold each chain until every star body maps to languages containing
//! `eps`, and check each unfolded chain at once with a distance-automaton
//! limitedness test plus a language-equivalence test. A positive answer from
//! that basic check certifies membership; exhausting the enumeration refutes
//! it. Budget violations surface as errors, never as a `false` answer.

use std::collections::HashSet;

use crate::automata::{to_dfa, to_dfa_budget};
use crate::distance::{build_distance_automaton, decide_limitedness};
use crate::error::{Error, Result};
use crate::regex::{concat_s, star_s, MinLen, Regex};
use crate::rewriting::{maximal_rewriting_budget, minlen_of_image};
use crate::sets::Rsrl;
use crate::substitution::Substitution;
use crate::unionfree::{
    critical, e_part, simplify_empty, to_chain_form, ufs, union_free_decomp, ChainForm,
};

/// Budgets for the membership pipeline.
#[derive(Debug, Clone)]
pub struct MembershipConfig {
    pub state_budget: usize,
    pub unionfree_budget: usize,
    pub closure_budget: usize,
    pub oracle_max_len: usize,
}

impl Default for MembershipConfig {
    fn default() -> Self {
        MembershipConfig {
            state_budget: crate::automata::DEFAULT_STATE_BUDGET,
            unionfree_budget: crate::unionfree::DEFAULT_UNIONFREE_BUDGET,
            closure_budget: crate::distance::DEFAULT_CLOSURE_BUDGET,
            oracle_max_len: 8,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MembershipStats {
    pub unionfree_terms: usize,
    pub unfold_yields: usize,
    pub basiccheck_calls: usize,
}

/// Answer of the general membership check. A witness is a generator word
/// whose image is equivalent to the query; when truth is established for a
/// whole chain at once and no short witness is found, the answer comes
/// without one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipOutcome {
    pub answer: bool,
    pub witness: Option<Vec<u32>>,
    pub stats: MembershipStats,
}

/// Work-stack enumeration of unfolded chains. Chains whose star bodies all
/// map into epsilon-containing languages are yielded; a violating chain is
/// rewritten into the epsilon-collapsed chain plus one branch per critical
/// position, pruned by the shortest-image bound.
pub struct Unfold<'a> {
    phi: &'a Substitution,
    bound: MinLen,
    stack: Vec<(ChainForm, usize, usize)>,
    expanded: HashSet<ChainForm>,
    yielded: HashSet<ChainForm>,
}

fn depth_limit(bound: MinLen, chain: &ChainForm) -> usize {
    let b = match bound {
        MinLen::Finite(b) => b as usize,
        MinLen::Infinity => 64,
    };
    let size = chain.to_regex().size();
    10 * (b + 1) * (size + 1) * (size + 1)
}

impl<'a> Unfold<'a> {
    fn with_seeds(seeds: Vec<ChainForm>, phi: &'a Substitution, bound: MinLen) -> Unfold<'a> {
        let stack = seeds
            .into_iter()
            .rev()
            .map(|c| {
                let limit = depth_limit(bound, &c);
                (c, 0, limit)
            })
            .collect();
        Unfold {
            phi,
            bound,
            stack,
            expanded: HashSet::new(),
            yielded: HashSet::new(),
        }
    }

    fn expand(&self, chain: &ChainForm, slot: usize) -> Result<Vec<ChainForm>> {
        let body = &chain.stars()[slot];
        let e = e_part(body, self.phi);
        let mut out = Vec::new();
        let collapsed = rebuild_chain(chain, slot, &star_s(&e))?;
        out.push(collapsed);
        for p in critical(body, self.phi) {
            let unrolled = ufs(body, &p).expect("critical positions index existing stars");
            let segment = concat_s(&star_s(&e), &concat_s(&unrolled, &Regex::star(body)));
            let branch_regex = rebuild_regex(chain, slot, &segment);
            if minlen_of_image(&branch_regex, self.phi) <= self.bound {
                out.push(to_chain_form(&branch_regex)?);
            }
        }
        Ok(out)
    }
}

fn rebuild_regex(chain: &ChainForm, slot: usize, replacement: &Regex) -> Regex {
    let alphabet = chain.alphabet();
    let mut atoms: Vec<Regex> = Vec::new();
    for (i, word) in chain.words().iter().enumerate() {
        for &s in word {
            atoms.push(Regex::sym(alphabet, s));
        }
        if i < chain.stars().len() {
            if i == slot {
                atoms.push(replacement.clone());
            } else {
                atoms.push(Regex::star(&chain.stars()[i]));
            }
        }
    }
    Regex::concat_all(alphabet, &atoms)
}

fn rebuild_chain(chain: &ChainForm, slot: usize, replacement: &Regex) -> Result<ChainForm> {
    to_chain_form(&rebuild_regex(chain, slot, replacement))
}

impl<'a> Iterator for Unfold<'a> {
    type Item = Result<ChainForm>;

    fn next(&mut self) -> Option<Self::Item> {
        while let Some((chain, depth, limit)) = self.stack.pop() {
            match chain.violating_star(self.phi) {
                None => {
                    if self.yielded.insert(chain.clone()) {
                        return Some(Ok(chain));
                    }
                }
                Some(slot) => {
                    if depth >= limit {
                        return Some(Err(Error::UnfoldDepth(limit)));
                    }
                    if !self.expanded.insert(chain.clone()) {
                        continue;
                    }
                    match self.expand(&chain, slot) {
                        Ok(children) => {
                            for child in children.into_iter().rev() {
                                self.stack.push((child, depth + 1, limit));
                            }
                        }
                        Err(e) => return Some(Err(e)),
                    }
                }
            }
        }
        None
    }
}

/// Unfolds a single union-free chain against the bound; every yielded chain
/// satisfies the epsilon condition on all its star bodies.
pub fn unfold<'a>(l: &ChainForm, phi: &'a Substitution, bound: MinLen) -> Unfold<'a> {
    Unfold::with_seeds(vec![l.clone()], phi, bound)
}

/// The enumeration feeding the general membership check: restricts the
/// generator to the maximal rewriting of `query`, decomposes into union-free
/// chains, and unfolds each against the query's shortest-word length.
pub fn enumerate<'a>(
    query: &Regex,
    r: &'a Rsrl,
    cfg: &MembershipConfig,
) -> Result<(Unfold<'a>, usize)> {
    let phi = r.phi();
    let m = maximal_rewriting_budget(query, phi, cfg.state_budget)?
        .intersect(&to_dfa_budget(r.k(), cfg.state_budget)?)?;
    let bound = query.min_len();
    if m.is_empty() {
        return Ok((Unfold::with_seeds(Vec::new(), phi, bound), 0));
    }
    let m_regex = crate::automata::dfa_to_regex(&m);
    let mut seeds = Vec::new();
    for term in union_free_decomp(&m_regex, cfg.unionfree_budget)? {
        match to_chain_form(&simplify_empty(&term)) {
            Ok(chain) => seeds.push(chain),
            Err(Error::EmptyChain) => {}
            Err(e) => return Err(e),
        }
    }
    let count = seeds.len();
    Ok((Unfold::with_seeds(seeds, phi, bound), count))
}

/// Checks a single summarizable chain: the chain certifies membership iff
/// its distance automaton is limited and its image is equivalent to the
/// query.
pub fn basiccheck(
    query: &Regex,
    m: &ChainForm,
    phi: &Substitution,
    cfg: &MembershipConfig,
) -> Result<bool> {
    #[cfg(debug_assertions)]
    {
        let image = to_dfa(&phi.apply_lang(&m.to_regex())?)?;
        let qd = to_dfa(query)?;
        debug_assert!(
            qd.includes(&image)?,
            "chain image must be included in the query"
        );
    }
    let automaton = build_distance_automaton(m, phi)?;
    if !decide_limitedness(&automaton, cfg.closure_budget)?.limited {
        return Ok(false);
    }
    crate::automata::equiv(&phi.apply_lang(&m.to_regex())?, query)
}

fn try_witness(
    query: &Regex,
    m: &ChainForm,
    phi: &Substitution,
    cfg: &MembershipConfig,
) -> Result<Option<Vec<u32>>> {
    if m.is_single_word() {
        return Ok(Some(m.words()[0].clone()));
    }
    let dfa = to_dfa_budget(&m.to_regex(), cfg.state_budget)?;
    for w in dfa.enumerate_words_bounded(cfg.oracle_max_len) {
        if w.is_empty() {
            continue;
        }
        if crate::automata::equiv(&phi.apply_word(&w)?, query)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn check_alphabets(query: &Regex, r: &Rsrl) -> Result<()> {
    if query.alphabet() != r.phi().sigma() {
        return Err(Error::AlphabetMismatch(
            "query is not over the rational set's base alphabet".to_string(),
        ));
    }
    Ok(())
}

/// Is the query member of the empty-image part of the set: some generator
/// word using a symbol with empty image.
fn empty_language_membership(r: &Rsrl, cfg: &MembershipConfig) -> Result<MembershipOutcome> {
    let phi = r.phi();
    let delta = phi.delta();
    let empty_syms: Vec<u32> = delta
        .ids()
        .filter(|&s| phi.image(s).min_len() == MinLen::Infinity)
        .collect();
    let mut outcome = MembershipOutcome {
        answer: false,
        witness: None,
        stats: MembershipStats::default(),
    };
    if empty_syms.is_empty() || delta.is_empty() {
        return Ok(outcome);
    }
    let syms: Vec<Regex> = empty_syms.iter().map(|&s| Regex::sym(delta, s)).collect();
    let any: Vec<Regex> = delta.ids().map(|s| Regex::sym(delta, s)).collect();
    let any_star = Regex::star(&Regex::union_all(delta, &any));
    let marker = Regex::concat(
        &any_star,
        &Regex::concat(&Regex::union_all(delta, &syms), &any_star),
    );
    let hits = to_dfa_budget(r.k(), cfg.state_budget)?
        .intersect(&to_dfa_budget(&marker, cfg.state_budget)?)?;
    if let Some(w) = hits.shortest_words().into_iter().next() {
        outcome.answer = true;
        outcome.witness = Some(w);
    }
    Ok(outcome)
}

/// General membership: true iff some generator word's image equals the
/// query. Sound and complete for arbitrary generators within the configured
/// budgets; budget violations are errors, so a `false` answer always means
/// the enumeration was exhausted.
pub fn membership(query: &Regex, r: &Rsrl, cfg: &MembershipConfig) -> Result<MembershipOutcome> {
    check_alphabets(query, r)?;
    let mut stats = MembershipStats::default();
    if r.k().min_len() == MinLen::Infinity {
        return Ok(MembershipOutcome {
            answer: false,
            witness: None,
            stats,
        });
    }
    if query.min_len() == MinLen::Infinity {
        return empty_language_membership(r, cfg);
    }
    let (iter, terms) = enumerate(query, r, cfg)?;
    stats.unionfree_terms = terms;
    let phi = r.phi();
    for item in iter {
        let chain = item?;
        stats.unfold_yields += 1;
        stats.basiccheck_calls += 1;
        if basiccheck(query, &chain, phi, cfg)? {
            let witness = try_witness(query, &chain, phi, cfg)?;
            return Ok(MembershipOutcome {
                answer: true,
                witness,
                stats,
            });
        }
    }
    Ok(MembershipOutcome {
        answer: false,
        witness: None,
        stats,
    })
}

/// Membership for star-free generators by direct enumeration of the member
/// languages.
pub fn membership_star_free(query: &Regex, r: &Rsrl) -> Result<MembershipOutcome> {
    check_alphabets(query, r)?;
    if !r.k().is_star_free() {
        return Err(Error::NotStarFree("membership_star_free"));
    }
    let qd = to_dfa(query)?;
    for w in r.k().enumerate_words()? {
        if to_dfa(&r.phi().apply_word(&w)?)? == qd {
            return Ok(MembershipOutcome {
                answer: true,
                witness: Some(w),
                stats: MembershipStats::default(),
            });
        }
    }
    Ok(MembershipOutcome {
        answer: false,
        witness: None,
        stats: MembershipStats::default(),
    })
}

/// Inclusion of the member sets of two star-free rational sets.
pub fn inclusion_star_free(r1: &Rsrl, r2: &Rsrl) -> Result<bool> {
    if r1.phi().sigma() != r2.phi().sigma() {
        return Err(Error::AlphabetMismatch(
            "rational sets are over different base alphabets".to_string(),
        ));
    }
    let g1 = r1.goals()?;
    let g2 = r2.goals()?;
    Ok(g1.members().iter().all(|d| g2.contains(d)))
}

/// Equality of the member sets of two star-free rational sets.
pub fn equivalence_star_free(r1: &Rsrl, r2: &Rsrl) -> Result<bool> {
    Ok(inclusion_star_free(r1, r2)? && inclusion_star_free(r2, r1)?)
}

/// Semi-decision by brute force: searches generator words up to `max_len`.
/// Conclusive negatives only for star-free generators, which it enumerates
/// in full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutcome {
    pub answer: Option<bool>,
    pub witness: Option<Vec<u32>>,
}

pub fn oracle_membership(query: &Regex, r: &Rsrl, max_len: usize) -> Result<OracleOutcome> {
    check_alphabets(query, r)?;
    let qd = to_dfa(query)?;
    if r.k().is_star_free() {
        for w in r.k().enumerate_words()? {
            if to_dfa(&r.phi().apply_word(&w)?)? == qd {
                return Ok(OracleOutcome {
                    answer: Some(true),
                    witness: Some(w),
                });
            }
        }
        return Ok(OracleOutcome {
            answer: Some(false),
            witness: None,
        });
    }
    if r.k().min_len() == MinLen::Infinity {
        return Ok(OracleOutcome {
            answer: Some(false),
            witness: None,
        });
    }
    let kd = to_dfa(r.k())?;
    for w in kd.enumerate_words_bounded(max_len) {
        if w.is_empty() {
            continue;
        }
        if to_dfa(&r.phi().apply_word(&w)?)? == qd {
            return Ok(OracleOutcome {
                answer: Some(true),
                witness: Some(w),
            });
        }
    }
    Ok(OracleOutcome {
        answer: None,
        witness: None,
    })
}
