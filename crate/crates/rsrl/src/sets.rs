//! Rational sets of regular languages and their operator algebra.
//!
//! A rational set is a pair `(K, phi)`: a regular generator `K` over a
//! meta-alphabet together with a substitution `phi` mapping each meta-symbol
//! to a regular language over the base alphabet. The member languages are
//! the images `phi(w)` of the generator words.
//!
//! Operators that are closed for arbitrary generators (product, union,
//! Kleene star) compose generators syntactically. The point-wise and
//! Cartesian operators, and the binary set operators, require a star-free
//! generator: they materialize the finite member set first. Star-freeness of
//! `K` is the decidable stand-in for finiteness of the member set, so these
//! operators demand it as a precondition instead of trying to decide
//! finiteness of an arbitrary generator.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::alphabet::{Alphabet, AlphabetKind};
use crate::automata::{dfa_to_regex, to_dfa, Dfa};
use crate::error::{Error, Result};
use crate::regex::{star_s, Regex};
use crate::substitution::{unify, Substitution};

/// A finite set of languages over a shared base alphabet, held as canonical
/// DFAs, pairwise inequivalent, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSet {
    sigma: Arc<Alphabet>,
    members: Vec<Dfa>,
}

impl LanguageSet {
    pub fn from_dfas(sigma: Arc<Alphabet>, dfas: impl IntoIterator<Item = Dfa>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for d in dfas {
            if d.alphabet() != &sigma {
                return Err(Error::AlphabetMismatch(
                    "language-set member over a different alphabet".to_string(),
                ));
            }
            set.insert(d);
        }
        Ok(LanguageSet {
            sigma,
            members: set.into_iter().collect(),
        })
    }

    pub fn sigma(&self) -> &Arc<Alphabet> {
        &self.sigma
    }

    pub fn members(&self) -> &[Dfa] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, d: &Dfa) -> bool {
        self.members.binary_search(d).is_ok()
    }
}

/// A rational set of regular languages, `(K, phi)` with `K` free of the
/// empty word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rsrl {
    k: Regex,
    phi: Substitution,
}

fn fresh_names(count: usize, avoid: &BTreeSet<String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0usize;
    while out.len() < count {
        let name = format!("d{i}");
        i += 1;
        if !avoid.contains(&name) {
            out.push(name);
        }
    }
    out
}

impl Rsrl {
    pub fn new(k: Regex, phi: Substitution) -> Result<Self> {
        if k.alphabet() != phi.delta() {
            return Err(Error::AlphabetMismatch(
                "generator is not over the substitution's meta-alphabet".to_string(),
            ));
        }
        if k.nullable() {
            return Err(Error::Invalid(
                "generator contains the empty word".to_string(),
            ));
        }
        Ok(Rsrl { k, phi })
    }

    pub fn k(&self) -> &Regex {
        &self.k
    }

    pub fn phi(&self) -> &Substitution {
        &self.phi
    }

    pub fn is_star_free(&self) -> bool {
        self.k.is_star_free()
    }

    /// Materializes the member set of a star-free rational set, deduplicated
    /// by language equality.
    pub fn goals(&self) -> Result<LanguageSet> {
        if !self.k.is_star_free() {
            return Err(Error::NotStarFree("goals"));
        }
        let mut dfas = Vec::new();
        for w in self.k.enumerate_words()? {
            dfas.push(to_dfa(&self.phi.apply_word(&w)?)?);
        }
        LanguageSet::from_dfas(self.phi.sigma().clone(), dfas)
    }

    /// Represents a finite set of languages as a rational set with one fresh
    /// symbol per member.
    pub fn from_language_set(ls: &LanguageSet) -> Result<Rsrl> {
        let avoid: BTreeSet<String> = ls.sigma().names().map(str::to_string).collect();
        let names = fresh_names(ls.len(), &avoid);
        let delta = Alphabet::new(AlphabetKind::Meta, names)?;
        let images: Vec<Regex> = ls
            .members()
            .iter()
            .map(|d| {
                let r = dfa_to_regex(d);
                Regex::from_node(ls.sigma().clone(), r.node().clone())
            })
            .collect();
        let phi = Substitution::new(delta.clone(), ls.sigma().clone(), images)?;
        let syms: Vec<Regex> = delta.ids().map(|s| Regex::sym(&delta, s)).collect();
        let k = Regex::union_all(&delta, &syms);
        Rsrl::new(k, phi)
    }

    fn aligned_generators(r1: &Rsrl, r2: &Rsrl) -> Result<(Substitution, Regex, Regex)> {
        if r1.phi == r2.phi {
            Ok((r1.phi.clone(), r1.k.clone(), r2.k.clone()))
        } else {
            unify(r1, r2)
        }
    }

    /// `{ L1 . L2 }` over all member pairs; closed for arbitrary generators.
    pub fn product(&self, other: &Rsrl) -> Result<Rsrl> {
        let (phi, k1, k2) = Rsrl::aligned_generators(self, other)?;
        Rsrl::new(Regex::concat(&k1, &k2), phi)
    }

    /// Set union of the two member sets; closed for arbitrary generators.
    pub fn union(&self, other: &Rsrl) -> Result<Rsrl> {
        let (phi, k1, k2) = Rsrl::aligned_generators(self, other)?;
        Rsrl::new(Regex::union(&k1, &k2), phi)
    }

    /// Iterated product closure. The generator becomes `K K* + d_eps` with a
    /// fresh symbol mapped to `{eps}`, so the result is typically infinite
    /// and its generator is never star-free.
    pub fn kleene_star(&self) -> Result<Rsrl> {
        let delta = self.phi.delta();
        let mut avoid: BTreeSet<String> = delta.names().map(str::to_string).collect();
        avoid.extend(self.phi.sigma().names().map(str::to_string));
        let mut eps_name = "d_eps".to_string();
        let mut i = 0usize;
        while avoid.contains(&eps_name) {
            eps_name = format!("d_eps{i}");
            i += 1;
        }
        let names: Vec<String> = delta
            .names()
            .map(str::to_string)
            .chain([eps_name.clone()])
            .collect();
        let new_delta = Alphabet::new(AlphabetKind::Meta, names)?;
        let mut images: Vec<Regex> = self.phi.images().to_vec();
        images.push(Regex::epsilon(self.phi.sigma()));
        let phi = Substitution::new(new_delta.clone(), self.phi.sigma().clone(), images)?;
        // Symbol ids are stable: the fresh symbol is appended at the end.
        let k = Regex::from_node(new_delta.clone(), self.k.node().clone());
        let eps_sym = Regex::sym(&new_delta, new_delta.len() as u32 - 1);
        let k_plus = Regex::concat(&k, &Regex::star(&k));
        Rsrl::new(Regex::union(&k_plus, &eps_sym), phi)
    }

    fn map_members<F>(&self, op_name: &'static str, f: F) -> Result<Rsrl>
    where
        F: Fn(&Dfa) -> Result<Dfa>,
    {
        if !self.k.is_star_free() {
            return Err(Error::NotStarFree(op_name));
        }
        let goals = self.goals()?;
        let mapped: Result<Vec<Dfa>> = goals.members().iter().map(f).collect();
        let ls = LanguageSet::from_dfas(self.phi.sigma().clone(), mapped?)?;
        Rsrl::from_language_set(&ls)
    }

    /// `{ L* | L in R }`; requires a star-free generator.
    pub fn pointwise_star(&self) -> Result<Rsrl> {
        self.map_members("pointwise_star", |d| to_dfa(&star_s(&dfa_to_regex(d))))
    }

    /// `{ complement(L) | L in R }`; requires a star-free generator.
    pub fn pointwise_complement(&self) -> Result<Rsrl> {
        self.map_members("pointwise_complement", |d| Ok(d.complement()))
    }

    /// `{ L u Q | L in R }` for a fixed regular language `Q`.
    pub fn pointwise_union(&self, q: &Regex) -> Result<Rsrl> {
        let qd = to_dfa(q)?;
        self.map_members("pointwise_union", |d| d.union(&qd))
    }

    /// `{ L n Q | L in R }`.
    pub fn pointwise_intersection(&self, q: &Regex) -> Result<Rsrl> {
        let qd = to_dfa(q)?;
        self.map_members("pointwise_intersection", |d| d.intersect(&qd))
    }

    /// `{ L \ Q | L in R }`.
    pub fn pointwise_difference(&self, q: &Regex) -> Result<Rsrl> {
        let qd = to_dfa(q)?;
        self.map_members("pointwise_difference", |d| d.difference(&qd))
    }

    /// Selects the generator words of `self` whose image does (or does not)
    /// occur as a member of `other`; the substitution is reused unchanged.
    fn select_words(&self, other: &Rsrl, keep_present: bool) -> Result<Rsrl> {
        let other_goals = other.goals()?;
        let mut kept: Vec<Regex> = Vec::new();
        let mut seen = BTreeSet::new();
        for w in self.k.enumerate_words()? {
            let image = to_dfa(&self.phi.apply_word(&w)?)?;
            if other_goals.contains(&image) == keep_present && seen.insert(w.clone()) {
                kept.push(Regex::word(self.k.alphabet(), &w));
            }
        }
        let k3 = Regex::union_all(self.k.alphabet(), &kept);
        Rsrl::new(k3, self.phi.clone())
    }

    /// Set intersection of the member sets; both generators star-free. With
    /// a shared substitution the result keeps it, selecting generator words
    /// of `self`; otherwise the member sets are intersected directly and
    /// re-expressed over fresh symbols.
    pub fn intersection(&self, other: &Rsrl) -> Result<Rsrl> {
        self.binary_select("intersection", other, true)
    }

    /// Set difference of the member sets; both generators star-free.
    pub fn difference(&self, other: &Rsrl) -> Result<Rsrl> {
        self.binary_select("difference", other, false)
    }

    fn binary_select(&self, op: &'static str, other: &Rsrl, keep_present: bool) -> Result<Rsrl> {
        if !self.k.is_star_free() || !other.k.is_star_free() {
            return Err(Error::NotStarFree(op));
        }
        if self.phi == other.phi {
            return self.select_words(other, keep_present);
        }
        let g1 = self.goals()?;
        let g2 = other.goals()?;
        let members: Vec<Dfa> = g1
            .members()
            .iter()
            .filter(|d| g2.contains(d) == keep_present)
            .cloned()
            .collect();
        let ls = LanguageSet::from_dfas(self.phi.sigma().clone(), members)?;
        Rsrl::from_language_set(&ls)
    }

    /// Members in exactly one of the two sets; both generators star-free.
    pub fn symmetric_difference(&self, other: &Rsrl) -> Result<Rsrl> {
        if !self.k.is_star_free() || !other.k.is_star_free() {
            return Err(Error::NotStarFree("symmetric_difference"));
        }
        if self.phi == other.phi {
            let left = self.select_words(other, false)?;
            let right = other.select_words(self, false)?;
            return left.union(&right);
        }
        let g1 = self.goals()?;
        let g2 = other.goals()?;
        let members: Vec<Dfa> = g1
            .members()
            .iter()
            .filter(|d| !g2.contains(d))
            .chain(g2.members().iter().filter(|d| !g1.contains(d)))
            .cloned()
            .collect();
        let ls = LanguageSet::from_dfas(self.phi.sigma().clone(), members)?;
        Rsrl::from_language_set(&ls)
    }

    fn cartesian<F>(&self, op_name: &'static str, other: &Rsrl, f: F) -> Result<Rsrl>
    where
        F: Fn(&Dfa, &Dfa) -> Result<Dfa>,
    {
        if !self.k.is_star_free() || !other.k.is_star_free() {
            return Err(Error::NotStarFree(op_name));
        }
        let g1 = self.goals()?;
        let g2 = other.goals()?;
        let mut members = Vec::new();
        for l1 in g1.members() {
            for l2 in g2.members() {
                members.push(f(l1, l2)?);
            }
        }
        let ls = LanguageSet::from_dfas(self.phi.sigma().clone(), members)?;
        Rsrl::from_language_set(&ls)
    }

    /// `{ L1 u L2 | L1 in R1, L2 in R2 }`; both generators star-free.
    pub fn cartesian_union(&self, other: &Rsrl) -> Result<Rsrl> {
        self.cartesian("cartesian_union", other, |a, b| a.union(b))
    }

    /// `{ L1 n L2 | L1 in R1, L2 in R2 }`.
    pub fn cartesian_intersection(&self, other: &Rsrl) -> Result<Rsrl> {
        self.cartesian("cartesian_intersection", other, |a, b| a.intersect(b))
    }

    /// `{ L1 \ L2 | L1 in R1, L2 in R2 }`.
    pub fn cartesian_difference(&self, other: &Rsrl) -> Result<Rsrl> {
        self.cartesian("cartesian_difference", other, |a, b| a.difference(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::parse_regex;

    fn singleton(sym_name: &str, image: &str, sigma: &Arc<Alphabet>) -> Rsrl {
        let delta = Alphabet::meta([sym_name]).unwrap();
        let phi = Substitution::new(
            delta.clone(),
            sigma.clone(),
            vec![parse_regex(image, sigma).unwrap()],
        )
        .unwrap();
        Rsrl::new(Regex::sym(&delta, 0), phi).unwrap()
    }

    #[test]
    fn rejects_nullable_generators() {
        let sigma = Alphabet::base(["a"]).unwrap();
        let delta = Alphabet::meta(["D1"]).unwrap();
        let phi = Substitution::new(
            delta.clone(),
            sigma.clone(),
            vec![parse_regex("a", &sigma).unwrap()],
        )
        .unwrap();
        let k = parse_regex("D1*", &delta).unwrap();
        assert!(Rsrl::new(k, phi).is_err());
    }

    #[test]
    fn goals_deduplicate_semantically() {
        let sigma = Alphabet::base(["a", "b"]).unwrap();
        let delta = Alphabet::meta(["Da", "Db"]).unwrap();
        let phi = Substitution::new(
            delta.clone(),
            sigma.clone(),
            vec![
                parse_regex("a", &sigma).unwrap(),
                parse_regex("a + empty", &sigma).unwrap(),
            ],
        )
        .unwrap();
        let r = Rsrl::new(parse_regex("Da + Db", &delta).unwrap(), phi.clone()).unwrap();
        assert_eq!(r.goals().unwrap().len(), 1);

        let r = Rsrl::new(parse_regex("Da + Da", &delta).unwrap(), phi).unwrap();
        assert_eq!(r.goals().unwrap().len(), 1);
    }

    #[test]
    fn language_set_round_trip() {
        let sigma = Alphabet::base(["a", "b"]).unwrap();
        let members = vec![
            to_dfa(&parse_regex("a*", &sigma).unwrap()).unwrap(),
            to_dfa(&parse_regex("a b", &sigma).unwrap()).unwrap(),
        ];
        let ls = LanguageSet::from_dfas(sigma.clone(), members).unwrap();
        let r = Rsrl::from_language_set(&ls).unwrap();
        assert_eq!(r.phi().delta().len(), 2);
        assert_eq!(r.goals().unwrap(), ls);

        let empty_member = LanguageSet::from_dfas(
            sigma.clone(),
            vec![to_dfa(&parse_regex("empty", &sigma).unwrap()).unwrap()],
        )
        .unwrap();
        let r = Rsrl::from_language_set(&empty_member).unwrap();
        assert_eq!(r.phi().delta().len(), 1);
        assert_eq!(r.goals().unwrap(), empty_member);
    }

    #[test]
    fn product_of_singletons() {
        let sigma = Alphabet::base(["a", "b"]).unwrap();
        let r1 = singleton("Da", "a", &sigma);
        let r2 = singleton("Db", "b", &sigma);
        let prod = r1.product(&r2).unwrap();
        let goals = prod.goals().unwrap();
        assert_eq!(goals.len(), 1);
        let expected = to_dfa(&parse_regex("a b", &sigma).unwrap()).unwrap();
        assert!(goals.contains(&expected));
    }

    #[test]
    fn pointwise_star_and_complement() {
        let sigma = Alphabet::base(["a"]).unwrap();
        let r = singleton("Da", "a", &sigma);

        let starred = r.pointwise_star().unwrap();
        let goals = starred.goals().unwrap();
        assert_eq!(goals.len(), 1);
        assert!(goals.contains(&to_dfa(&parse_regex("a*", &sigma).unwrap()).unwrap()));

        let comp = r.pointwise_complement().unwrap();
        let goals = comp.goals().unwrap();
        assert_eq!(goals.len(), 1);
        // complement of {a} over {a}: eps + a a a*
        assert!(goals.contains(&to_dfa(&parse_regex("eps + a a a*", &sigma).unwrap()).unwrap()));
        // involution
        assert_eq!(comp.pointwise_complement().unwrap().goals().unwrap(), r.goals().unwrap());

        let empty_set = LanguageSet::from_dfas(
            sigma.clone(),
            vec![to_dfa(&parse_regex("empty", &sigma).unwrap()).unwrap()],
        )
        .unwrap();
        let r = Rsrl::from_language_set(&empty_set).unwrap();
        let starred = r.pointwise_star().unwrap().goals().unwrap();
        assert!(starred.contains(&to_dfa(&parse_regex("eps", &sigma).unwrap()).unwrap()));
    }

    #[test]
    fn pointwise_star_requires_star_free() {
        let sigma = Alphabet::base(["a"]).unwrap();
        let delta = Alphabet::meta(["D"]).unwrap();
        let phi = Substitution::new(
            delta.clone(),
            sigma.clone(),
            vec![parse_regex("a", &sigma).unwrap()],
        )
        .unwrap();
        let r = Rsrl::new(parse_regex("D D*", &delta).unwrap(), phi).unwrap();
        assert!(matches!(r.pointwise_star(), Err(Error::NotStarFree(_))));
        assert!(matches!(r.goals(), Err(Error::NotStarFree(_))));
    }

    #[test]
    fn pointwise_ops_against_fixed_language() {
        let sigma = Alphabet::base(["a", "b"]).unwrap();
        let r = singleton("Da", "a", &sigma);
        let b = parse_regex("b", &sigma).unwrap();

        let goals = r.pointwise_union(&b).unwrap().goals().unwrap();
        assert_eq!(goals.len(), 1);
        assert!(goals.contains(&to_dfa(&parse_regex("a + b", &sigma).unwrap()).unwrap()));

        let a = parse_regex("a", &sigma).unwrap();
        let goals = r.pointwise_difference(&a).unwrap().goals().unwrap();
        assert_eq!(goals.len(), 1);
        assert!(goals.contains(&to_dfa(&parse_regex("empty", &sigma).unwrap()).unwrap()));

        // member a + b* intersected with a* + b gives {a, b, eps}
        let r = singleton("Dm", "a + b*", &sigma);
        let q = parse_regex("a* + b", &sigma).unwrap();
        let goals = r.pointwise_intersection(&q).unwrap().goals().unwrap();
        assert_eq!(goals.len(), 1);
        assert!(goals.contains(&to_dfa(&parse_regex("a + b + eps", &sigma).unwrap()).unwrap()));
    }

    #[test]
    fn binary_ops_preserve_phi_on_shared_substitution() {
        let sigma = Alphabet::base(["a", "b"]).unwrap();
        let delta = Alphabet::meta(["Dstar", "Dab"]).unwrap();
        let phi = Substitution::new(
            delta.clone(),
            sigma.clone(),
            vec![
                parse_regex("a*", &sigma).unwrap(),
                parse_regex("a b", &sigma).unwrap(),
            ],
        )
        .unwrap();
        let r1 = Rsrl::new(parse_regex("Dstar + Dab", &delta).unwrap(), phi.clone()).unwrap();
        let r2 = Rsrl::new(parse_regex("Dstar", &delta).unwrap(), phi.clone()).unwrap();

        let inter = r1.intersection(&r2).unwrap();
        assert_eq!(inter.phi(), &phi);
        assert_eq!(inter.goals().unwrap().len(), 1);
        assert!(inter
            .goals()
            .unwrap()
            .contains(&to_dfa(&parse_regex("a*", &sigma).unwrap()).unwrap()));

        let diff = r1.difference(&r2).unwrap();
        assert_eq!(diff.phi(), &phi);
        assert!(diff
            .goals()
            .unwrap()
            .contains(&to_dfa(&parse_regex("a b", &sigma).unwrap()).unwrap()));
        assert_eq!(diff.goals().unwrap().len(), 1);

        let sym = r1.symmetric_difference(&r2).unwrap();
        assert_eq!(sym.goals().unwrap(), diff.goals().unwrap());

        assert_eq!(r1.intersection(&r1).unwrap().goals().unwrap(), r1.goals().unwrap());
        assert!(r1.difference(&r1).unwrap().goals().unwrap().is_empty());
    }

    #[test]
    fn cartesian_reduces_to_pointwise_on_singletons() {
        let sigma = Alphabet::base(["a", "b"]).unwrap();
        let r1 = singleton("Da", "a", &sigma);
        let r2 = singleton("Db", "b", &sigma);
        let cart = r1.cartesian_union(&r2).unwrap().goals().unwrap();
        let pw = r1
            .pointwise_union(&parse_regex("b", &sigma).unwrap())
            .unwrap()
            .goals()
            .unwrap();
        assert_eq!(cart, pw);
        assert_eq!(cart.len(), 1);
        assert!(cart.contains(&to_dfa(&parse_regex("a + b", &sigma).unwrap()).unwrap()));
    }
}
