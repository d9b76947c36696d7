mod spec_file;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rsrl::{
    build_distance_automaton, decide_limitedness, dfa_to_regex, maximal_rewriting_budget,
    membership, membership_star_free, oracle_membership, parse_regex, to_chain_form,
    union_free_decomp, Alphabet, MembershipConfig, Regex, Rsrl,
};
use spec_file::{read_spec, SpecFile};

#[derive(Parser)]
#[command(
    name = "rsrl",
    about = "Rational sets of regular languages: goals, operators, rewriting, membership",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Budgets {
    /// Cap on automaton states in subset constructions.
    #[arg(long, env = "RSRL_STATE_BUDGET", default_value_t = rsrl::DEFAULT_STATE_BUDGET)]
    state_budget: usize,
    /// Cap on terms produced by union-free decomposition.
    #[arg(long, default_value_t = rsrl::DEFAULT_UNIONFREE_BUDGET)]
    unionfree_budget: usize,
    /// Cap on matrices explored by the limitedness decision.
    #[arg(long, default_value_t = rsrl::DEFAULT_CLOSURE_BUDGET)]
    closure_budget: usize,
}

impl Budgets {
    fn config(&self, oracle_max_len: usize) -> MembershipConfig {
        MembershipConfig {
            state_budget: self.state_budget,
            unionfree_budget: self.unionfree_budget,
            closure_budget: self.closure_budget,
            oracle_max_len,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    General,
    Starfree,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpKind {
    Union,
    Product,
    KleeneStar,
    PointwiseStar,
    PointwiseComplement,
    Intersection,
    Difference,
    SymmetricDifference,
    PointwiseUnion,
    PointwiseIntersection,
    PointwiseDifference,
    CartesianUnion,
    CartesianIntersection,
    CartesianDifference,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a regular language is a member of the set.
    Member {
        #[arg(long)]
        spec: PathBuf,
        /// Query over sigma; defaults to the spec file's R.
        #[arg(long)]
        query: Option<String>,
        #[arg(long, value_enum, default_value = "general")]
        algorithm: Algorithm,
        /// Word-length cutoff for the oracle algorithm.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Member-set inclusion of two star-free specs.
    Include {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Member-set equality of two star-free specs.
    Equiv {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the member languages of a star-free spec.
    Goals {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Apply an operator and write the resulting spec file.
    Op {
        #[arg(long, value_enum)]
        kind: OpKind,
        #[arg(long)]
        left: PathBuf,
        /// Second spec, for binary operators.
        #[arg(long)]
        right: Option<PathBuf>,
        /// Regular language over sigma, for point-wise operators.
        #[arg(long)]
        lang: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Maximal rewriting of a query into the meta-alphabet.
    Rewrite {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        query: Option<String>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Union-free decomposition of an expression, one term per line.
    Decompose {
        /// Space-separated alphabet of the expression.
        #[arg(long)]
        symbols: String,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Limitedness of the distance automaton of a union-free chain.
    Limited {
        #[arg(long)]
        spec: PathBuf,
        /// Union-free expression over the spec's meta-alphabet.
        #[arg(long)]
        expr: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budgets: Budgets,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn query_of(spec: &SpecFile, flag: &Option<String>) -> Result<Regex, String> {
    match flag {
        Some(text) => parse_regex(text, spec.sigma()).map_err(|e| e.to_string()),
        None => spec
            .query
            .clone()
            .ok_or_else(|| "no query: pass --query or add an R: line to the spec".to_string()),
    }
}

fn witness_names(r: &Rsrl, w: &[u32]) -> Vec<String> {
    w.iter()
        .map(|&s| r.phi().delta().name(s).to_string())
        .collect()
}

fn dispatch(command: Command) -> Result<i32, String> {
    match command {
        Command::Member {
            spec,
            query,
            algorithm,
            max_len,
            json,
            budgets,
        } => {
            let spec = read_spec(&spec)?;
            let q = query_of(&spec, &query)?;
            let cfg = budgets.config(max_len);
            let (answer, witness, stats) = match algorithm {
                Algorithm::General => {
                    let out = membership(&q, &spec.rsrl, &cfg).map_err(|e| e.to_string())?;
                    (Some(out.answer), out.witness, Some(out.stats))
                }
                Algorithm::Starfree => {
                    let out = membership_star_free(&q, &spec.rsrl).map_err(|e| e.to_string())?;
                    (Some(out.answer), out.witness, Some(out.stats))
                }
                Algorithm::Oracle => {
                    let out =
                        oracle_membership(&q, &spec.rsrl, max_len).map_err(|e| e.to_string())?;
                    (out.answer, out.witness, None)
                }
            };
            let witness_str = witness.as_ref().map(|w| witness_names(&spec.rsrl, w));
            if json {
                let mut obj = json!({
                    "command": "member",
                    "answer": answer,
                    "stats": stats.as_ref().map(|s| json!({
                        "unionfree_terms": s.unionfree_terms,
                        "unfold_yields": s.unfold_yields,
                        "basiccheck_calls": s.basiccheck_calls,
                    })).unwrap_or(json!({})),
                });
                if let Some(w) = &witness_str {
                    obj["witness"] = json!(w);
                }
                println!("{obj}");
            } else {
                match answer {
                    Some(true) => match &witness_str {
                        Some(w) => println!("member (witness: {})", w.join(" ")),
                        None => println!("member"),
                    },
                    Some(false) => println!("not a member"),
                    None => println!("inconclusive"),
                }
            }
            Ok(match answer {
                Some(true) => 0,
                Some(false) => 1,
                None => 2,
            })
        }
        Command::Include { left, right, json } => {
            let l = read_spec(&left)?;
            let r = read_spec(&right)?;
            let answer =
                rsrl::inclusion_star_free(&l.rsrl, &r.rsrl).map_err(|e| e.to_string())?;
            decision_output("include", answer, json)
        }
        Command::Equiv { left, right, json } => {
            let l = read_spec(&left)?;
            let r = read_spec(&right)?;
            let answer =
                rsrl::equivalence_star_free(&l.rsrl, &r.rsrl).map_err(|e| e.to_string())?;
            decision_output("equiv", answer, json)
        }
        Command::Goals { spec, json } => {
            let spec = read_spec(&spec)?;
            let goals = spec.rsrl.goals().map_err(|e| e.to_string())?;
            let strings: Vec<String> = goals
                .members()
                .iter()
                .map(|d| dfa_to_regex(d).to_string())
                .collect();
            if json {
                println!(
                    "{}",
                    json!({
                        "command": "goals",
                        "goals": strings,
                        "stats": {"count": strings.len()},
                    })
                );
            } else {
                for s in &strings {
                    println!("{s}");
                }
            }
            Ok(0)
        }
        Command::Op {
            kind,
            left,
            right,
            lang,
            out,
            json,
        } => {
            let l = read_spec(&left)?;
            let binary = |r: &Option<PathBuf>| -> Result<SpecFile, String> {
                let path = r.as_ref().ok_or("this operator needs --right")?;
                read_spec(path)
            };
            let pw_lang = |lang: &Option<String>| -> Result<Regex, String> {
                let text = lang.as_ref().ok_or("this operator needs --lang")?;
                parse_regex(text, l.sigma()).map_err(|e| e.to_string())
            };
            let result = match kind {
                OpKind::Union => l.rsrl.union(&binary(&right)?.rsrl),
                OpKind::Product => l.rsrl.product(&binary(&right)?.rsrl),
                OpKind::KleeneStar => l.rsrl.kleene_star(),
                OpKind::PointwiseStar => l.rsrl.pointwise_star(),
                OpKind::PointwiseComplement => l.rsrl.pointwise_complement(),
                OpKind::Intersection => l.rsrl.intersection(&binary(&right)?.rsrl),
                OpKind::Difference => l.rsrl.difference(&binary(&right)?.rsrl),
                OpKind::SymmetricDifference => {
                    l.rsrl.symmetric_difference(&binary(&right)?.rsrl)
                }
                OpKind::PointwiseUnion => l.rsrl.pointwise_union(&pw_lang(&lang)?),
                OpKind::PointwiseIntersection => l.rsrl.pointwise_intersection(&pw_lang(&lang)?),
                OpKind::PointwiseDifference => l.rsrl.pointwise_difference(&pw_lang(&lang)?),
                OpKind::CartesianUnion => l.rsrl.cartesian_union(&binary(&right)?.rsrl),
                OpKind::CartesianIntersection => {
                    l.rsrl.cartesian_intersection(&binary(&right)?.rsrl)
                }
                OpKind::CartesianDifference => {
                    l.rsrl.cartesian_difference(&binary(&right)?.rsrl)
                }
            }
            .map_err(|e| e.to_string())?;
            let spec = SpecFile {
                rsrl: result,
                query: None,
            };
            std::fs::write(&out, spec.to_text())
                .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            if json {
                println!(
                    "{}",
                    json!({
                        "command": "op",
                        "stats": {"out": out.display().to_string()},
                    })
                );
            } else {
                println!("wrote {}", out.display());
            }
            Ok(0)
        }
        Command::Rewrite {
            spec,
            query,
            json,
            budgets,
        } => {
            let spec = read_spec(&spec)?;
            let q = query_of(&spec, &query)?;
            let m = maximal_rewriting_budget(&q, spec.rsrl.phi(), budgets.state_budget)
                .map_err(|e| e.to_string())?;
            let regex = dfa_to_regex(&m);
            if json {
                println!(
                    "{}",
                    json!({
                        "command": "rewrite",
                        "stats": {
                            "regex": regex.to_string(),
                            "states": m.states(),
                            "finals": m.finals().len(),
                            "empty": m.is_empty(),
                        },
                    })
                );
            } else {
                println!("{regex}");
            }
            Ok(0)
        }
        Command::Decompose {
            symbols,
            expr,
            json,
            budgets,
        } => {
            let names: Vec<&str> = symbols.split_whitespace().collect();
            let alphabet =
                Alphabet::new(rsrl::AlphabetKind::Base, names).map_err(|e| e.to_string())?;
            let r = parse_regex(&expr, &alphabet).map_err(|e| e.to_string())?;
            let terms =
                union_free_decomp(&r, budgets.unionfree_budget).map_err(|e| e.to_string())?;
            let strings: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
            if json {
                println!(
                    "{}",
                    json!({
                        "command": "decompose",
                        "goals": strings,
                        "stats": {"count": strings.len()},
                    })
                );
            } else {
                for s in &strings {
                    println!("{s}");
                }
            }
            Ok(0)
        }
        Command::Limited {
            spec,
            expr,
            json,
            budgets,
        } => {
            let spec = read_spec(&spec)?;
            let phi = spec.rsrl.phi();
            let chain_expr = parse_regex(&expr, phi.delta()).map_err(|e| e.to_string())?;
            let chain = to_chain_form(&chain_expr).map_err(|e| e.to_string())?;
            let automaton = build_distance_automaton(&chain, phi).map_err(|e| e.to_string())?;
            let report = decide_limitedness(&automaton, budgets.closure_budget)
                .map_err(|e| e.to_string())?;
            if json {
                println!(
                    "{}",
                    json!({
                        "limited": report.limited,
                        "states": report.states,
                        "closure_size": report.closure_size,
                    })
                );
            } else {
                println!(
                    "limited: {} (states {}, closure {})",
                    report.limited, report.states, report.closure_size
                );
            }
            Ok(if report.limited { 0 } else { 1 })
        }
    }
}

fn decision_output(command: &str, answer: bool, json: bool) -> Result<i32, String> {
    if json {
        println!(
            "{}",
            json!({"command": command, "answer": answer, "stats": {}})
        );
    } else {
        println!("{answer}");
    }
    Ok(if answer { 0 } else { 1 })
}
