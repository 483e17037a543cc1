use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bohm_core::bohm::{confluence_check, nu_tree, prepend_check, BohmError};
use bohm_core::corpus;
use bohm_core::meaningless::axiom_check;
use bohm_core::reduction::{
    check_strong_convergence, reduce, whnf_step, ReductionError, Strategy, StrategyKind, Trace,
    TraceFile, TraceHeader,
};
use bohm_core::rnf::{crnf, has_rnf, is_rnf};
use bohm_core::syntax::{parse, print_finite, PrintStyle};
use bohm_core::term::{Coterm, FiniteTerm, Tri};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde_json::json;

use crate::config::{Cli, Command, Global};
use crate::{CliError, Outcome, Status};

struct Loaded {
    term: Coterm,
    source: String,
    free: Vec<String>,
}

impl Loaded {
    fn show(&self, t: &FiniteTerm) -> String {
        print_finite(t, PrintStyle::Named, &self.free)
    }
}

fn load(g: &Global, positional: Option<&String>) -> Result<Loaded, CliError> {
    let given = [g.demo.is_some(), g.file.is_some(), positional.is_some()];
    if given.iter().filter(|b| **b).count() > 1 {
        return Err(CliError::Usage(
            "give only one of TERM, --demo and --file".into(),
        ));
    }
    let source = if let Some(name) = &g.demo {
        corpus::source(name)
            .ok_or_else(|| {
                let names: Vec<&str> = corpus::NAMED.iter().map(|(n, _, _)| *n).collect();
                CliError::Usage(format!(
                    "unknown demo `{name}`; available: {}",
                    names.join(", ")
                ))
            })?
            .to_string()
    } else if let Some(path) = &g.file {
        read(path)?
    } else if let Some(text) = positional {
        text.clone()
    } else {
        return Err(CliError::Usage(
            "no term given (TERM, --demo or --file)".into(),
        ));
    };
    from_source(source)
}

fn from_source(source: String) -> Result<Loaded, CliError> {
    let parsed = parse(&source, true).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Loaded {
        term: parsed.term,
        free: parsed.free_names,
        source,
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn bohm_err(e: BohmError) -> CliError {
    match e {
        BohmError::Reduction(ReductionError::Format(m)) => CliError::Usage(m),
        other => CliError::Check(other.to_string()),
    }
}

fn tri_status(parts: &[&Tri]) -> Status {
    if parts.iter().any(|t| t.is_unknown()) {
        Status::Tainted
    } else {
        Status::Pass
    }
}

fn outcome(text: String, json: serde_json::Value, status: Status) -> Outcome {
    Outcome {
        text,
        json,
        status,
        raw: None,
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    let o = g.oracle();
    match &cli.command {
        Command::Parse { term } => {
            let t = load(g, term.as_ref())?;
            let fin = t.term.truncate(g.depth);
            let complete = fin == t.term.truncate(g.depth + 1);
            let mut text = t.show(&fin);
            text.push('\n');
            if !complete {
                let _ = writeln!(text, "(truncated at depth {})", g.depth);
            }
            let json = json!({
                "canonical": t.show(&fin),
                "de_bruijn": print_finite(&fin, PrintStyle::DeBruijn, &[]),
                "free": t.free,
                "complete": complete,
                "term": fin,
            });
            Ok(outcome(text, json, Status::Pass))
        }
        Command::Whnf { term } => {
            let t = load(g, term.as_ref())?;
            let mut cur = t.term.clone();
            let mut steps = 0;
            let mut done = false;
            while steps < g.fuel {
                match whnf_step(&cur) {
                    Some(next) => {
                        cur = next;
                        steps += 1;
                    }
                    None => {
                        done = true;
                        break;
                    }
                }
            }
            done = done || whnf_step(&cur).is_none();
            let shown = t.show(&cur.truncate(g.depth));
            let text = if done {
                format!("{shown}\nsteps: {steps}\n")
            } else {
                format!("no weak head normal form within {steps} steps\nreached: {shown}\n")
            };
            let json = json!({"whnf": done.then_some(&shown), "reached": shown, "steps": steps});
            Ok(outcome(
                text,
                json,
                if done { Status::Pass } else { Status::Tainted },
            ))
        }
        Command::Crnf { term } => {
            let t = load(g, term.as_ref())?;
            let r = crnf(&t.term, g.fuel);
            let shown = r.term.as_ref().map(|c| t.show(&c.truncate(g.depth)));
            let mut text = format!("verdict: {}\n", r.verdict);
            if let Some(s) = &shown {
                let _ = writeln!(text, "crnf: {s}");
            }
            let _ = writeln!(text, "steps: {}", r.whnf_steps);
            let json = json!({"verdict": r.verdict, "crnf": shown, "steps": r.whnf_steps});
            Ok(outcome(text, json, tri_status(&[&r.verdict])))
        }
        Command::Classify { term } => {
            let t = load(g, term.as_ref())?;
            let rnf = is_rnf(&t.term, g.fuel);
            let has = has_rnf(&t.term, g.fuel);
            let member = o.membership(&t.term);
            let text = format!(
                "rnf: {}\nhas-rnf: {}\nin-U: {} ({})\n",
                rnf.label(),
                has.label(),
                member.label(),
                o.kind
            );
            let json = json!({"rnf": rnf, "has_rnf": has, "in_u": member});
            // Only the oracle verdict is acted on downstream.
            Ok(outcome(text, json, tri_status(&[&member])))
        }
        Command::Tree { term } => {
            let t = load(g, term.as_ref())?;
            let tree = nu_tree(&t.term, &o);
            let fin = tree.truncate(g.depth).map_err(bohm_err)?;
            let assumed = tree.assumed_within(g.depth).map_err(bohm_err)?;
            let nodes: Vec<serde_json::Value> = tree
                .provenance_up_to(g.depth)
                .map_err(bohm_err)?
                .into_iter()
                .map(|(p, k, prov)| json!({"pos": p, "label": k.to_string(), "provenance": prov}))
                .collect();
            let text = format!("{}\n", t.show(&fin));
            let json = json!({"tree": t.show(&fin), "term": fin, "nodes": nodes});
            Ok(outcome(
                text,
                json,
                if assumed {
                    Status::Tainted
                } else {
                    Status::Pass
                },
            ))
        }
        Command::Reduce {
            term,
            strategy,
            k,
            out,
        } => {
            let t = load(g, term.as_ref())?;
            let strat = Strategy::new(*strategy);
            let tr = reduce(&t.term, &strat, *k, Some(&o));
            let lines = trace_text(&tr, &t, g, *strategy, *k);
            let status = if tr.has_assumed_steps() {
                Status::Tainted
            } else {
                Status::Pass
            };
            match out {
                None => Ok(Outcome {
                    text: String::new(),
                    json: json!({}),
                    status,
                    raw: Some(lines),
                }),
                Some(path) => {
                    fs::write(path, lines)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    let text = format!("wrote {} steps to {}\n", tr.len(), path.display());
                    let json = json!({"steps": tr.len(), "trace": path});
                    Ok(outcome(text, json, status))
                }
            }
        }
        Command::Confluence {
            term,
            s1,
            s2,
            k,
            save_traces,
        } => {
            let t = load(g, term.as_ref())?;
            let s2 = s2.unwrap_or(StrategyKind::RandomRedex { seed: g.seed });
            let r = confluence_check(
                &t.term,
                &Strategy::new(*s1),
                &Strategy::new(s2),
                *k,
                g.depth,
                &o,
            )
            .map_err(bohm_err)?;
            let mut json = serde_json::to_value(&r).expect("serializable");
            if let Some(prefix) = save_traces {
                let mut paths = Vec::new();
                for (i, (tr, kind)) in r.traces.iter().zip([*s1, s2]).enumerate() {
                    let path = format!("{}.{}.jsonl", prefix.display(), i + 1);
                    fs::write(&path, trace_text(tr, &t, g, kind, *k))
                        .map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
                    paths.push(path);
                }
                json["trace_files"] = json!(paths);
            }
            json["trees_text"] = json!([t.show(&r.trees[0]), t.show(&r.trees[1])]);
            let text = format!(
                "equal: {}\n{} ({} steps): {}\n{} ({} steps): {}\n",
                r.equal,
                r.strategies[0],
                r.steps[0],
                t.show(&r.trees[0]),
                r.strategies[1],
                r.steps[1],
                t.show(&r.trees[1]),
            );
            let status = match (r.equal, r.tainted) {
                (_, true) => Status::Tainted,
                (true, false) => Status::Pass,
                (false, false) => Status::Fail,
            };
            Ok(outcome(text, json, status))
        }
        Command::Prepend {
            term,
            trace,
            strategy,
            k,
        } => {
            let t = load(g, term.as_ref())?;
            let tr = match trace {
                Some(path) => replay(&read(path)?, &t.term)?,
                None => {
                    let kind = strategy.unwrap_or(StrategyKind::RandomRedex { seed: g.seed });
                    reduce(&t.term, &Strategy::new(kind), *k, Some(&o))
                }
            };
            let r = prepend_check(&t.term, &tr, g.depth, &o).map_err(bohm_err)?;
            let text = format!(
                "holds: {}\nsteps: {}\nstart: {}\nend: {}\n",
                r.holds,
                tr.len(),
                t.show(&r.start_tree),
                t.show(&r.end_tree)
            );
            let mut json = serde_json::to_value(&r).expect("serializable");
            json["steps"] = json!(tr.len());
            let status = match (r.holds, r.tainted) {
                (_, true) => Status::Tainted,
                (true, false) => Status::Pass,
                (false, false) => Status::Fail,
            };
            Ok(outcome(text, json, status))
        }
        Command::Converge { term, trace } => {
            let text_in = read(trace)?;
            let file = TraceFile::parse(&text_in).map_err(|e| CliError::Usage(e.to_string()))?;
            let t = if term.is_some() || g.demo.is_some() || g.file.is_some() {
                load(g, term.as_ref())?
            } else {
                match &file.header.term {
                    Some(src) => from_source(src.clone())?,
                    None => {
                        return Err(CliError::Usage(
                            "trace header has no term; pass TERM, --demo or --file".into(),
                        ))
                    }
                }
            };
            let tr = file
                .replay(&t.term)
                .map_err(|e| CliError::Check(e.to_string()))?;
            let rep = check_strong_convergence(&tr, g.depth)
                .map_err(|e| CliError::Check(e.to_string()))?;
            let mut text = String::new();
            for e in &rep.entries {
                let last = e.last_step.map_or("-".to_string(), |i| i.to_string());
                let _ = writeln!(
                    text,
                    "depth {:>3}  last step {:>5}  {}  {}",
                    e.depth,
                    last,
                    if e.witnessed { "stable " } else { "open   " },
                    t.show(&e.limit)
                );
            }
            if let Some(d) = rep.stabilized_up_to {
                let _ = writeln!(text, "stabilized up to depth {d}");
            }
            let _ = writeln!(
                text,
                "consistent with strong convergence up to {}: {}",
                g.depth,
                if rep.consistent { "yes" } else { "no" }
            );
            let json = serde_json::to_value(&rep).expect("serializable");
            let status = if !rep.consistent {
                Status::Fail
            } else if tr.has_assumed_steps() {
                Status::Tainted
            } else {
                Status::Pass
            };
            Ok(outcome(text, json, status))
        }
        Command::Axioms {
            term,
            trials,
            random,
        } => {
            let mut terms: Vec<Coterm> = Vec::new();
            let mut extra = format!(" --random {random}");
            if term.is_some() || g.demo.is_some() || g.file.is_some() {
                let t = load(g, term.as_ref())?;
                let _ = write!(extra, " '{}'", t.source.replace('\'', "'\\''"));
                terms.push(t.term);
            }
            terms.extend(axiom_corpus(g.seed, *random));
            let mut r = axiom_check(&o, &terms, g.depth, *trials, g.seed);
            for (_, out) in &mut r.outcomes {
                for w in &mut out.fail_witnesses {
                    w.replay.push_str(&extra);
                }
            }
            let mut text = format!(
                "oracle {} over {} terms ({} members)\n",
                o.kind,
                terms.len(),
                r.members_sampled
            );
            for (axiom, out) in &r.outcomes {
                let _ = writeln!(
                    text,
                    "{:<17} pass {:>4}  unknown {:>4}  fail {:>3}",
                    axiom.to_string(),
                    out.pass_count,
                    out.unknown_count,
                    out.fail_witnesses.len()
                );
                for w in out.fail_witnesses.iter().take(3) {
                    let _ = writeln!(text, "  witness: {} ({})", w.conclusion, w.detail);
                }
                if out.fail_witnesses.len() > 3 {
                    let _ = writeln!(text, "  ... {} more", out.fail_witnesses.len() - 3);
                }
            }
            let json = serde_json::to_value(&r).expect("serializable");
            let status = if r.total_failures() > 0 {
                Status::Fail
            } else {
                Status::Pass
            };
            Ok(outcome(text, json, status))
        }
    }
}

/// Built-in corpus for `axioms`: every named term, ⊥, and seeded random
/// closed terms.
pub fn axiom_corpus(seed: u64, random: usize) -> Vec<Coterm> {
    let mut out: Vec<Coterm> = corpus::NAMED
        .iter()
        .map(|(n, _, _)| corpus::named(n).expect("built-in"))
        .collect();
    out.push(Coterm::bot());
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for _ in 0..random {
        out.push(Coterm::from(&corpus::random_closed(&mut rng, 3, 12)));
    }
    out
}

fn trace_text(tr: &Trace, t: &Loaded, g: &Global, kind: StrategyKind, k: usize) -> String {
    let mut config = g.echo();
    config["strategy"] = json!(kind.to_string());
    config["k"] = json!(k);
    tr.to_json_lines(TraceHeader::new(Some(t.source.clone()), g.depth, config))
}

fn replay(text: &str, start: &Coterm) -> Result<Trace, CliError> {
    let file = TraceFile::parse(text).map_err(|e| CliError::Usage(e.to_string()))?;
    file.replay(start)
        .map_err(|e| CliError::Check(e.to_string()))
}
