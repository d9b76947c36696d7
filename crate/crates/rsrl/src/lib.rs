//! Rational sets of regular languages.
//!
//! A rational set is generated by a regular language `K` over a meta-alphabet
//! together with a substitution mapping each meta-symbol to a regular
//! language over a base alphabet; its members are the images of the
//! generator words. This crate implements the data model, the operator
//! algebra with its closure-aware preconditions, the star-free decision
//! procedures, and the general membership algorithm built from maximal
//! rewriting, union-free decomposition, unfold enumeration, and
//! distance-automaton limitedness.
//!
//! All types are immutable after construction and every operation is a pure
//! function, so values can be shared freely across threads.

pub mod alphabet;
pub mod automata;
pub mod distance;
pub mod error;
pub mod membership;
pub mod regex;
pub mod rewriting;
pub mod sets;
pub mod substitution;
pub mod unionfree;

pub use alphabet::{Alphabet, AlphabetKind};
pub use automata::{
    complement, difference_lang, dfa_to_regex, equiv, intersect, to_dfa, to_dfa_budget,
    union_lang, Dfa, Nfa, DEFAULT_STATE_BUDGET,
};
pub use distance::{
    build_distance_automaton, decide_limitedness, eliminate_epsilons, is_limited,
    DistanceAutomaton, EpsFreeDistanceAutomaton, LimitednessReport, Weight,
    DEFAULT_CLOSURE_BUDGET,
};
pub use error::{Error, Result};
pub use membership::{
    basiccheck, enumerate, equivalence_star_free, inclusion_star_free, membership,
    membership_star_free, oracle_membership, unfold, MembershipConfig, MembershipOutcome,
    MembershipStats, OracleOutcome, Unfold,
};
pub use regex::{parse_regex, MinLen, Node, Regex};
pub use rewriting::{maximal_rewriting, maximal_rewriting_budget, minlen_of_image, stratum};
pub use sets::{LanguageSet, Rsrl};
pub use substitution::{unify, Substitution};
pub use unionfree::{
    critical, e_part, is_union_free, simplify_empty, to_chain_form, ufs, unfold_rewrite,
    union_free_decomp, ChainForm, Position, DEFAULT_UNIONFREE_BUDGET,
};
