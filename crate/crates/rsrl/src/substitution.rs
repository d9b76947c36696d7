//! Regular-language substitutions: total maps from a meta-alphabet to
//! regular languages over a base alphabet, applied to words and languages.

use std::sync::Arc;

use crate::alphabet::{Alphabet, AlphabetKind};
use crate::error::{Error, Result};
use crate::regex::{Node, Regex};
use crate::sets::Rsrl;

/// A total map `delta -> regular languages over sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    delta: Arc<Alphabet>,
    sigma: Arc<Alphabet>,
    images: Vec<Regex>,
}

impl Substitution {
    /// `images[i]` is the image of the i-th symbol of `delta`; every image
    /// must be an expression over `sigma`.
    pub fn new(delta: Arc<Alphabet>, sigma: Arc<Alphabet>, images: Vec<Regex>) -> Result<Self> {
        if images.len() != delta.len() {
            return Err(Error::Invalid(format!(
                "substitution must map all {} symbols, got {} images",
                delta.len(),
                images.len()
            )));
        }
        for img in &images {
            if img.alphabet() != &sigma {
                return Err(Error::AlphabetMismatch(
                    "substitution image is not over the base alphabet".to_string(),
                ));
            }
        }
        Ok(Substitution { delta, sigma, images })
    }

    pub fn delta(&self) -> &Arc<Alphabet> {
        &self.delta
    }

    pub fn sigma(&self) -> &Arc<Alphabet> {
        &self.sigma
    }

    pub fn image(&self, sym: u32) -> &Regex {
        &self.images[sym as usize]
    }

    pub fn images(&self) -> &[Regex] {
        &self.images
    }

    /// Image of a nonempty word: the concatenation of the symbol images.
    pub fn apply_word(&self, word: &[u32]) -> Result<Regex> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        for &s in word {
            if s as usize >= self.delta.len() {
                return Err(Error::InvalidSymbol(s));
            }
        }
        let parts: Vec<Regex> = word.iter().map(|&s| self.image(s).clone()).collect();
        Ok(Regex::concat_all(&self.sigma, &parts))
    }

    /// Homomorphic image of a language, by structural substitution of each
    /// symbol. Substitution commutes with union, concatenation and star, so
    /// the result denotes the union of the word images (with the empty word
    /// mapped to itself when the language contains it).
    pub fn apply_lang(&self, k: &Regex) -> Result<Regex> {
        if k.alphabet() != &self.delta {
            return Err(Error::AlphabetMismatch(
                "expression is not over the substitution's meta-alphabet".to_string(),
            ));
        }
        fn go(sub: &Substitution, n: &Node) -> Regex {
            match n {
                Node::Empty => Regex::empty(&sub.sigma),
                Node::Epsilon => Regex::epsilon(&sub.sigma),
                Node::Sym(s) => sub.image(*s).clone(),
                Node::Union(a, b) => Regex::union(&go(sub, a), &go(sub, b)),
                Node::Concat(a, b) => Regex::concat(&go(sub, a), &go(sub, b)),
                Node::Star(a) => Regex::star(&go(sub, a)),
            }
        }
        Ok(go(self, k.node()))
    }

    /// The symbols whose image contains the empty word.
    pub fn epsilon_symbols(&self) -> Vec<u32> {
        self.delta
            .ids()
            .filter(|&s| self.image(s).nullable())
            .collect()
    }

    /// True iff the image of `sym` contains the empty word.
    pub fn has_epsilon(&self, sym: u32) -> bool {
        self.image(sym).nullable()
    }
}

/// Merges the meta-alphabets of two rational sets over a shared base
/// alphabet. Symbols are tagged `_1_name` and `_2_name`, the substitution
/// maps each tag to the original image, and the generators are rewritten
/// over the merged alphabet. Member sets are unchanged.
pub fn unify(r1: &Rsrl, r2: &Rsrl) -> Result<(Substitution, Regex, Regex)> {
    if r1.phi().sigma() != r2.phi().sigma() {
        return Err(Error::AlphabetMismatch(
            "rational sets are over different base alphabets".to_string(),
        ));
    }
    let sigma = r1.phi().sigma().clone();
    let mut names: Vec<String> = Vec::new();
    let mut images: Vec<Regex> = Vec::new();
    for (i, r) in [(1, r1), (2, r2)] {
        for s in r.phi().delta().ids() {
            names.push(format!("_{i}_{}", r.phi().delta().name(s)));
            images.push(r.phi().image(s).clone());
        }
    }
    let delta = Alphabet::new(AlphabetKind::Meta, names)?;
    let phi = Substitution::new(delta.clone(), sigma, images)?;
    let offset1 = 0u32;
    let offset2 = r1.phi().delta().len() as u32;
    let k1 = retag(r1.k(), &delta, offset1);
    let k2 = retag(r2.k(), &delta, offset2);
    Ok((phi, k1, k2))
}

fn retag(k: &Regex, delta: &Arc<Alphabet>, offset: u32) -> Regex {
    fn go(n: &Node, delta: &Arc<Alphabet>, offset: u32) -> Regex {
        match n {
            Node::Empty => Regex::empty(delta),
            Node::Epsilon => Regex::epsilon(delta),
            Node::Sym(s) => Regex::sym(delta, s + offset),
            Node::Union(a, b) => Regex::union(&go(a, delta, offset), &go(b, delta, offset)),
            Node::Concat(a, b) => Regex::concat(&go(a, delta, offset), &go(b, delta, offset)),
            Node::Star(a) => Regex::star(&go(a, delta, offset)),
        }
    }
    go(k.node(), delta, offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::equiv;
    use crate::regex::parse_regex;

    fn example_phi() -> Substitution {
        // D1 -> a*, D2 -> a b
        let delta = Alphabet::meta(["D1", "D2"]).unwrap();
        let sigma = Alphabet::base(["a", "b"]).unwrap();
        let images = vec![
            parse_regex("a*", &sigma).unwrap(),
            parse_regex("a b", &sigma).unwrap(),
        ];
        Substitution::new(delta, sigma, images).unwrap()
    }

    #[test]
    fn word_images_concatenate_in_order() {
        let phi = example_phi();
        let w = phi.delta().word_from_names(["D1", "D2", "D2", "D1"]).unwrap();
        let img = phi.apply_word(&w).unwrap();
        let expected = parse_regex("a* (a b) (a b) a*", phi.sigma()).unwrap();
        assert!(equiv(&img, &expected).unwrap());

        let single = phi.apply_word(&[0]).unwrap();
        assert!(equiv(&single, phi.image(0)).unwrap());

        assert!(matches!(phi.apply_word(&[]), Err(Error::EmptyWord)));
        assert!(matches!(phi.apply_word(&[7]), Err(Error::InvalidSymbol(7))));
    }

    #[test]
    fn language_image_is_the_union_over_members() {
        let phi = example_phi();
        let k = parse_regex("D1 D2* D1", phi.delta()).unwrap();
        let img = phi.apply_lang(&k).unwrap();
        let expected = parse_regex("a* (a b)* a*", phi.sigma()).unwrap();
        assert!(equiv(&img, &expected).unwrap());

        let empty = parse_regex("empty", phi.delta()).unwrap();
        assert!(equiv(&phi.apply_lang(&empty).unwrap(), &parse_regex("empty", phi.sigma()).unwrap()).unwrap());
    }

    #[test]
    fn epsilon_symbols_inspect_images() {
        let phi = example_phi();
        assert_eq!(phi.epsilon_symbols(), vec![0]); // only a* contains eps

        let delta = Alphabet::meta(["D"]).unwrap();
        let sigma = Alphabet::base(["a"]).unwrap();
        let phi = Substitution::new(
            delta,
            sigma.clone(),
            vec![parse_regex("a + eps", &sigma).unwrap()],
        )
        .unwrap();
        assert_eq!(phi.epsilon_symbols(), vec![0]);

        let delta = Alphabet::meta(["D"]).unwrap();
        let phi = Substitution::new(delta, sigma.clone(), vec![parse_regex("a", &sigma).unwrap()])
            .unwrap();
        assert!(phi.epsilon_symbols().is_empty());
    }
}
