//! The `.rsrl` spec file format.
//!
//! Line oriented, UTF-8, `#` starts a comment, LF or CRLF:
//!
//! ```text
//! sigma: a b c d
//! delta:
//!   Dstar := (a + b + c + d)*
//! K: Dstar (a + b + c + d) Dstar
//! R: (a + b + c + d)* b (a + b + c + d)*
//! ```
//!
//! `sigma:` declares the base alphabet, the `delta:` block binds each
//! meta-symbol to a regular expression over sigma, `K:` is the generator
//! over the meta-symbols, and the optional `R:` is a query over sigma.

use std::fmt::Write as _;
use std::sync::Arc;

use rsrl::{parse_regex, Alphabet, AlphabetKind, Regex, Rsrl, Substitution};

#[derive(Debug)]
pub struct SpecError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for SpecError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError {
        line,
        message: message.into(),
    })
}

/// A parsed spec file: the rational set plus the optional query.
#[derive(Debug, Clone)]
pub struct SpecFile {
    pub rsrl: Rsrl,
    pub query: Option<Regex>,
}

impl SpecFile {
    pub fn sigma(&self) -> &Arc<Alphabet> {
        self.rsrl.phi().sigma()
    }

    pub fn parse(text: &str) -> Result<SpecFile, SpecError> {
        enum Section {
            Preamble,
            Delta,
            Done,
        }
        let mut sigma: Option<Arc<Alphabet>> = None;
        let mut delta_names: Vec<String> = Vec::new();
        let mut delta_images: Vec<(usize, String)> = Vec::new();
        let mut k_line: Option<(usize, String)> = None;
        let mut r_line: Option<(usize, String)> = None;
        let mut section = Section::Preamble;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("sigma:") {
                if sigma.is_some() {
                    return err(line_no, "duplicate sigma declaration");
                }
                let names: Vec<&str> = rest.split_whitespace().collect();
                if names.is_empty() {
                    return err(line_no, "sigma must declare at least one symbol");
                }
                sigma = Some(
                    Alphabet::new(AlphabetKind::Base, names)
                        .map_err(|e| SpecError {
                            line: line_no,
                            message: e.to_string(),
                        })?,
                );
                continue;
            }
            if line == "delta:" {
                if sigma.is_none() {
                    return err(line_no, "delta block before sigma declaration");
                }
                section = Section::Delta;
                continue;
            }
            if let Some(rest) = line.strip_prefix("K:") {
                if k_line.is_some() {
                    return err(line_no, "duplicate K declaration");
                }
                k_line = Some((line_no, rest.trim().to_string()));
                section = Section::Done;
                continue;
            }
            if let Some(rest) = line.strip_prefix("R:") {
                if r_line.is_some() {
                    return err(line_no, "duplicate R declaration");
                }
                r_line = Some((line_no, rest.trim().to_string()));
                section = Section::Done;
                continue;
            }
            match section {
                Section::Delta => {
                    let Some((name, image)) = line.split_once(":=") else {
                        return err(line_no, "expected `NAME := regex` inside the delta block");
                    };
                    let name = name.trim().to_string();
                    if delta_names.contains(&name) {
                        return err(line_no, format!("duplicate meta-symbol `{name}`"));
                    }
                    delta_names.push(name);
                    delta_images.push((line_no, image.trim().to_string()));
                }
                _ => return err(line_no, format!("unexpected line `{line}`")),
            }
        }

        let Some(sigma) = sigma else {
            return err(0, "missing sigma declaration");
        };
        let Some((k_no, k_text)) = k_line else {
            return err(0, "missing K declaration");
        };
        for name in &delta_names {
            if sigma.lookup(name).is_some() {
                return err(0, format!("meta-symbol `{name}` is also a sigma symbol"));
            }
        }
        let delta = Alphabet::new(AlphabetKind::Meta, delta_names.clone()).map_err(|e| {
            SpecError {
                line: 0,
                message: e.to_string(),
            }
        })?;
        let mut images = Vec::new();
        for (line_no, image_text) in &delta_images {
            let image = parse_regex(image_text, &sigma).map_err(|e| SpecError {
                line: *line_no,
                message: e.to_string(),
            })?;
            images.push(image);
        }
        let phi = Substitution::new(delta.clone(), sigma.clone(), images).map_err(|e| {
            SpecError {
                line: 0,
                message: e.to_string(),
            }
        })?;
        let k = parse_regex(&k_text, &delta).map_err(|e| SpecError {
            line: k_no,
            message: e.to_string(),
        })?;
        let rsrl = Rsrl::new(k, phi).map_err(|e| SpecError {
            line: k_no,
            message: e.to_string(),
        })?;
        let query = match r_line {
            Some((r_no, r_text)) => Some(parse_regex(&r_text, &sigma).map_err(|e| SpecError {
                line: r_no,
                message: e.to_string(),
            })?),
            None => None,
        };
        Ok(SpecFile { rsrl, query })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let phi = self.rsrl.phi();
        let sigma_names: Vec<&str> = phi.sigma().names().collect();
        writeln!(out, "sigma: {}", sigma_names.join(" ")).unwrap();
        writeln!(out, "delta:").unwrap();
        for s in phi.delta().ids() {
            writeln!(out, "  {} := {}", phi.delta().name(s), phi.image(s)).unwrap();
        }
        writeln!(out, "K: {}", self.rsrl.k()).unwrap();
        if let Some(q) = &self.query {
            writeln!(out, "R: {q}").unwrap();
        }
        out
    }
}

pub fn read_spec(path: &std::path::Path) -> Result<SpecFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    SpecFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const INTRO: &str = "\
# coverage of each single symbol
sigma: a b c d
delta:
  Dstar := (a + b + c + d)*
  Ca := a
  Cb := b
  Cc := c
  Cd := d
K: Dstar (Ca + Cb + Cc + Cd) Dstar
R: (a + b + c + d)* b (a + b + c + d)*
";

    #[test]
    fn parses_the_intro_spec() {
        let spec = SpecFile::parse(INTRO).unwrap();
        assert_eq!(spec.rsrl.goals().unwrap().len(), 4);
        assert!(spec.query.is_some());
    }

    #[test]
    fn round_trips_through_text() {
        let spec = SpecFile::parse(INTRO).unwrap();
        let text = spec.to_text();
        let again = SpecFile::parse(&text).unwrap();
        assert_eq!(again.rsrl, spec.rsrl);
        assert_eq!(again.query, spec.query);
    }

    #[test]
    fn rejects_nullable_generators() {
        let text = "sigma: a\ndelta:\n  D1 := a\nK: D1*\n";
        let e = SpecFile::parse(text).unwrap_err();
        assert!(e.message.contains("empty word"), "{e}");
    }

    #[test]
    fn rejects_name_clashes() {
        let text = "sigma: a\ndelta:\n  a := a\nK: a\n";
        assert!(SpecFile::parse(text).is_err());
    }

    #[test]
    fn tolerates_crlf_and_comments() {
        let text = "sigma: a b\r\ndelta:\r\n  D := a # image\r\nK: D\r\n";
        let spec = SpecFile::parse(text).unwrap();
        assert_eq!(spec.rsrl.phi().delta().len(), 1);
    }
}
