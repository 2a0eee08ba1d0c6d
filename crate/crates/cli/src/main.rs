//! `escalator` — exact computations with positive-definite integer
//! quadratic forms: reduction, representation tests with certificates,
//! truants, escalations and escalation trees, and witnesses for the
//! irredundancy of the rank-2 universality criterion.
//!
//! Text output is meant for people; `--json` emits one deterministic JSON
//! document (sorted keys, no timestamps) so reruns are byte-identical.
//! Exit codes: 0 for a computed result, 1 under `--strict` when the
//! verdict is negative (see each subcommand), 2 for usage, parse, or
//! library errors.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use escalator_core::{
    binary_truant, build_witness, check_2_universal, escalation_tree, escalations_by_binary,
    escalations_by_integer, fifteen_demo, integer_truant, minimum, parse_binary, parse_form,
    represents_binary, represents_integer, uniqueness_demo, verify_witness, witness_search,
    BinaryForm, EscalationCaps, EscalationNode, FormOrdering, FormSet, GramLattice, TruantKind,
    UniversalityMode, WitnessReport, DEFAULT_SEARCH_ENTRY_CAP, DEFAULT_SEARCH_RANK_CAP,
};

#[derive(Parser)]
#[command(
    name = "escalator",
    version,
    about = "Exact computations with positive-definite integer quadratic forms"
)]
struct Cli {
    /// Emit one JSON document on stdout instead of text lines
    #[arg(long, global = true)]
    json: bool,

    /// Exit with status 1 when the computed verdict is negative
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gauss-reduce a binary form
    Reduce {
        /// A rank-2 expression: "[a,b,c]", "<a,c>", or gram[[..],[..]]
        form: String,
    },
    /// Test whether a lattice represents an integer or a binary form
    ///
    /// A positive answer carries an explicit embedding; verdicts are exact.
    /// Negative verdict under --strict: the target is not represented.
    Represents {
        /// Lattice expression, e.g. "<1,1,2>" or "<1> ++ [2,1,4]"
        lattice: String,
        /// An integer like "14", or a rank-2 expression like "[2,1,3]"
        target: String,
    },
    /// Find the least unrepresented target within a cap
    ///
    /// Negative verdict under --strict: a truant was found.
    Truant {
        /// Lattice expression
        lattice: String,
        /// Scan reduced binary forms by determinant instead of integers
        #[arg(long)]
        binary: bool,
        /// Largest integer scanned (integer mode)
        #[arg(long, default_value_t = 15)]
        truant_cap: i64,
        /// Largest determinant scanned (binary mode)
        #[arg(long, default_value_t = 9)]
        det_cap: i64,
    },
    /// List the escalations of a lattice by one of its truants
    ///
    /// Errs when the given target is in fact represented (not a truant).
    Escalate {
        /// Lattice expression
        lattice: String,
        /// An integer or a rank-2 expression the lattice fails to represent
        truant: String,
    },
    /// Grow the escalation tree from a root lattice
    ///
    /// Negative verdict under --strict: some branch was truncated by a cap.
    Tree {
        /// Root lattice (defaults to the empty lattice)
        #[arg(default_value = "<>")]
        root: String,
        /// Universality mode: 1 = integers, 2 = binary forms
        #[arg(long, default_value_t = 1)]
        mode: u8,
        /// Depth cap; the root sits at depth 0
        #[arg(long, default_value_t = 5)]
        depth: u32,
        /// Largest integer scanned for truants (mode 1)
        #[arg(long, default_value_t = 15)]
        truant_cap: i64,
        /// Largest truant determinant scanned (mode 2)
        #[arg(long, default_value_t = 9)]
        det_cap: i64,
    },
    /// Build and verify the closed-form witness for a criterion member
    ///
    /// Negative verdict under --strict: the witness fails verification.
    Witness {
        /// Semicolon-separated rank-2 forms, "" for the empty set, or @FILE
        tset: String,
        /// The criterion member to witness against (a rank-2 expression)
        target: String,
    },
    /// Validate a lattice; with --s2, test 2-universality
    ///
    /// Negative verdict under --strict (only with --s2): not 2-universal.
    Verify {
        /// Lattice expression
        lattice: String,
        /// Check representation of the six criterion members
        #[arg(long)]
        s2: bool,
    },
    /// Verify a caller-supplied witness lattice
    ///
    /// Negative verdict under --strict: the witness fails verification.
    VerifyWitness {
        /// Candidate witness lattice
        witness: String,
        /// Semicolon-separated rank-2 forms, "" for the empty set, or @FILE
        tset: String,
        /// The form the witness must omit (a rank-2 expression)
        target: String,
    },
    /// Exhaustively scan a capped space for a witness lattice
    ///
    /// Negative verdict under --strict: the space was exhausted with no hit.
    Search {
        /// Semicolon-separated rank-2 forms, "" for the empty set, or @FILE
        tset: String,
        /// The form the witness must omit (a rank-2 expression)
        target: String,
        /// Largest witness rank scanned
        #[arg(long, default_value_t = DEFAULT_SEARCH_RANK_CAP)]
        rank_cap: u32,
        /// Largest diagonal entry scanned
        #[arg(long, default_value_t = DEFAULT_SEARCH_ENTRY_CAP)]
        entry_cap: i64,
    },
    /// Run a packaged end-to-end demonstration
    ///
    /// Negative verdict under --strict: the demonstration did not certify.
    Demo {
        /// Irredundancy of the six-member 2-universality criterion
        #[arg(long)]
        uniqueness: bool,
        /// The escalation tree behind the nine critical integers
        #[arg(long)]
        fifteen: bool,
    },
}

/// A TARGET argument: a bare integer, a rank-1 lattice (its diagonal
/// entry), or any rank-2 expression.
enum Target {
    Integer(i64),
    Binary(BinaryForm),
}

fn parse_target(text: &str) -> Result<Target, String> {
    if let Ok(k) = text.trim().parse::<i64>() {
        return Ok(Target::Integer(k));
    }
    let lattice = parse_form(text).map_err(|e| format!("target {text:?}: {e}"))?;
    match lattice.rank() {
        1 => Ok(Target::Integer(lattice.entry(0, 0))),
        2 => Ok(Target::Binary(
            lattice.binary_form().expect("rank 2 has a form"),
        )),
        r => Err(format!(
            "target {text:?}: expected an integer or a rank-2 form, found rank {r}"
        )),
    }
}

fn parse_lattice(text: &str) -> Result<GramLattice, String> {
    parse_form(text).map_err(|e| format!("lattice {text:?}: {e}"))
}

fn parse_binary_arg(text: &str) -> Result<BinaryForm, String> {
    parse_binary(text).map_err(|e| format!("form {text:?}: {e}"))
}

/// A TSET argument: "" is the empty set, "@path" reads one form per line
/// (blank lines and `#` comments skipped), anything else is split on `;`.
fn parse_tset(text: &str) -> Result<FormSet, String> {
    let mut entries: Vec<String> = Vec::new();
    if let Some(path) = text.strip_prefix('@') {
        let body = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        for line in body.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            entries.push(line.to_string());
        }
    } else {
        for piece in text.split(';') {
            let piece = piece.trim();
            if !piece.is_empty() {
                entries.push(piece.to_string());
            }
        }
    }
    let mut forms = Vec::new();
    for entry in &entries {
        forms.push(parse_binary(entry).map_err(|e| format!("set member {entry:?}: {e}"))?);
    }
    Ok(FormSet::new(forms))
}

struct Outcome {
    doc: Value,
    text: Vec<String>,
    /// Whether the computed verdict counts as negative for `--strict`.
    negative: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let rendered = if cli.json {
                let mut doc =
                    serde_json::to_string_pretty(&outcome.doc).expect("document serializes");
                doc.push('\n');
                doc
            } else {
                outcome
                    .text
                    .iter()
                    .map(|line| format!("{line}\n"))
                    .collect::<String>()
            };
            if let Err(code) = emit(&rendered) {
                return code;
            }
            if outcome.negative && cli.strict {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Writes the rendered output to stdout. A closed downstream pipe (as when
/// piping through `head`) ends the program quietly instead of panicking.
fn emit(rendered: &str) -> Result<(), ExitCode> {
    let mut stdout = io::stdout().lock();
    let written = stdout
        .write_all(rendered.as_bytes())
        .and_then(|()| stdout.flush());
    match written {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Err(ExitCode::SUCCESS),
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            Err(ExitCode::from(2))
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    match &cli.command {
        Command::Reduce { form } => reduce(form),
        Command::Represents { lattice, target } => represents(lattice, target),
        Command::Truant {
            lattice,
            binary,
            truant_cap,
            det_cap,
        } => truant(lattice, *binary, *truant_cap, *det_cap),
        Command::Escalate { lattice, truant } => escalate(lattice, truant),
        Command::Tree {
            root,
            mode,
            depth,
            truant_cap,
            det_cap,
        } => tree(root, *mode, *depth, *truant_cap, *det_cap),
        Command::Witness { tset, target } => witness(tset, target),
        Command::Verify { lattice, s2 } => verify(lattice, *s2),
        Command::VerifyWitness {
            witness,
            tset,
            target,
        } => verify_witness_cmd(witness, tset, target),
        Command::Search {
            tset,
            target,
            rank_cap,
            entry_cap,
        } => search(tset, target, *rank_cap, *entry_cap),
        Command::Demo {
            uniqueness,
            fifteen,
        } => demo(*uniqueness, *fifteen),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn reduce(form_text: &str) -> Result<Outcome, String> {
    let f = parse_binary_arg(form_text)?;
    let r = f.reduced();
    let text = vec![
        format!("reduced: {r}"),
        format!("det: {}", r.det()),
        format!("already reduced: {}", yes_no(f.is_reduced())),
    ];
    let doc = json!({
        "command": "reduce",
        "inputs": { "form": form_text },
        "result": {
            "reduced": r.to_string(),
            "det": r.det(),
            "already_reduced": f.is_reduced(),
        },
    });
    Ok(Outcome {
        doc,
        text,
        negative: false,
    })
}

fn represents(lattice_text: &str, target_text: &str) -> Result<Outcome, String> {
    let l = parse_lattice(lattice_text)?;
    let mut text = Vec::new();
    let (result, found) = match parse_target(target_text)? {
        Target::Integer(k) => {
            let embedding = represents_integer(&l, k);
            let found = embedding.is_some();
            text.push(format!("target: {k} (integer)"));
            text.push(format!("represents: {}", yes_no(found)));
            if let Some(e) = &embedding {
                text.push(format!("x = {:?}", e.vectors()[0]));
            }
            (
                json!({
                    "kind": "integer",
                    "target": k,
                    "represents": found,
                    "embedding": embedding,
                }),
                found,
            )
        }
        Target::Binary(f) => {
            let r = f.reduced();
            let embedding = represents_binary(&l, &f);
            let found = embedding.is_some();
            text.push(format!("target: {r} (binary form)"));
            text.push(format!("represents: {}", yes_no(found)));
            if let Some(e) = &embedding {
                text.push(format!("x = {:?}", e.vectors()[0]));
                text.push(format!("y = {:?}", e.vectors()[1]));
            }
            (
                json!({
                    "kind": "binary",
                    "target": r.to_string(),
                    "represents": found,
                    "embedding": embedding,
                }),
                found,
            )
        }
    };
    let doc = json!({
        "command": "represents",
        "inputs": { "lattice": lattice_text, "target": target_text },
        "result": result,
    });
    Ok(Outcome {
        doc,
        text,
        negative: !found,
    })
}

fn truant(
    lattice_text: &str,
    binary: bool,
    truant_cap: i64,
    det_cap: i64,
) -> Result<Outcome, String> {
    let l = parse_lattice(lattice_text)?;
    let (caps, result, text, found) = if binary {
        let t = binary_truant(&l, FormOrdering::default(), det_cap);
        let text = vec![match &t {
            Some(f) => format!("truant: {f}"),
            None => format!("truant: none (reduced forms of det <= {det_cap} all represented)"),
        }];
        (
            json!({ "mode": "binary", "det_cap": det_cap }),
            json!({ "truant": t.map(|f| f.to_string()) }),
            text,
            t.is_some(),
        )
    } else {
        let t = integer_truant(&l, truant_cap);
        let text = vec![match t {
            Some(k) => format!("truant: {k}"),
            None => format!("truant: none (integers 1..={truant_cap} all represented)"),
        }];
        (
            json!({ "mode": "integer", "truant_cap": truant_cap }),
            json!({ "truant": t }),
            text,
            t.is_some(),
        )
    };
    let doc = json!({
        "command": "truant",
        "inputs": { "lattice": lattice_text },
        "caps": caps,
        "result": result,
    });
    Ok(Outcome {
        doc,
        text,
        negative: found,
    })
}

fn escalate(lattice_text: &str, truant_text: &str) -> Result<Outcome, String> {
    let l = parse_lattice(lattice_text)?;
    let escalations = match parse_target(truant_text)? {
        Target::Integer(k) => escalations_by_integer(&l, k),
        Target::Binary(f) => escalations_by_binary(&l, &f),
    }
    .map_err(|e| e.to_string())?;
    let mut text = vec![format!("escalations: {}", escalations.len())];
    text.extend(escalations.iter().map(|e| e.to_string()));
    let doc = json!({
        "command": "escalate",
        "inputs": { "lattice": lattice_text, "truant": truant_text },
        "result": {
            "count": escalations.len(),
            "escalations": escalations,
        },
    });
    Ok(Outcome {
        doc,
        text,
        negative: false,
    })
}

#[derive(Default)]
struct TreeStats {
    nodes: usize,
    leaves: usize,
    truncated: usize,
    max_depth: u32,
    integer_truants: Vec<i64>,
    binary_truants: Vec<String>,
}

fn walk_tree(node: &EscalationNode, depth: u32, stats: &mut TreeStats) {
    stats.nodes += 1;
    stats.max_depth = stats.max_depth.max(depth);
    if node.is_leaf() {
        stats.leaves += 1;
    }
    if node.truncated {
        stats.truncated += 1;
    }
    match &node.truant {
        Some(TruantKind::Integer(k)) => stats.integer_truants.push(*k),
        Some(TruantKind::Binary(f)) => stats.binary_truants.push(f.to_string()),
        None => {}
    }
    for child in &node.children {
        walk_tree(child, depth + 1, stats);
    }
}

fn tree(
    root_text: &str,
    mode: u8,
    depth: u32,
    truant_cap: i64,
    det_cap: i64,
) -> Result<Outcome, String> {
    let root = parse_lattice(root_text)?;
    let (umode, cap) = match mode {
        1 => (UniversalityMode::Integer, truant_cap),
        2 => (UniversalityMode::Binary2, det_cap),
        m => {
            return Err(format!(
                "mode must be 1 (integers) or 2 (binary forms), got {m}"
            ))
        }
    };
    let caps = EscalationCaps {
        truant_cap: cap,
        depth_cap: depth,
    };
    let tree = escalation_tree(&root, umode, &caps);
    let mut stats = TreeStats::default();
    walk_tree(&tree, 0, &mut stats);
    stats.integer_truants.sort_unstable();
    stats.integer_truants.dedup();
    stats.binary_truants.sort();
    stats.binary_truants.dedup();
    let truants: Vec<String> = if mode == 1 {
        stats
            .integer_truants
            .iter()
            .map(|k| k.to_string())
            .collect()
    } else {
        stats.binary_truants.clone()
    };
    let text = vec![
        format!("nodes: {}", stats.nodes),
        format!("leaves: {}", stats.leaves),
        format!("truncated: {}", stats.truncated),
        format!("max depth: {}", stats.max_depth),
        format!("truants: {}", truants.join(", ")),
    ];
    let doc = json!({
        "command": "tree",
        "inputs": { "root": root_text },
        "caps": {
            "mode": mode,
            "depth_cap": depth,
            "truant_cap": cap,
        },
        "result": {
            "nodes": stats.nodes,
            "leaves": stats.leaves,
            "truncated": stats.truncated,
            "max_depth": stats.max_depth,
            "truants": truants,
        },
        "evidence": { "tree": tree },
    });
    Ok(Outcome {
        doc,
        text,
        negative: stats.truncated > 0,
    })
}

fn witness_lines(report: &WitnessReport) -> Vec<String> {
    let mut text = vec![
        format!("target: {}", report.target),
        format!("witness: {}", report.witness),
        format!("recipe: {}", report.recipe),
    ];
    if report.interpretation {
        text.push("interpretation: yes (construction read off by symmetry)".to_string());
    }
    for v in &report.member_verdicts {
        match &v.embedding {
            Some(e) => text.push(format!(
                "member {}: present  x = {:?}  y = {:?}",
                v.form,
                e.vectors()[0],
                e.vectors()[1]
            )),
            None => text.push(format!("member {}: absent", v.form)),
        }
    }
    text.push(format!(
        "truancy: {} (witness must omit {})",
        yes_no(report.truancy),
        report.target
    ));
    text.push(format!("pass: {}", yes_no(report.pass)));
    text
}

fn witness(tset_text: &str, target_text: &str) -> Result<Outcome, String> {
    let t = parse_tset(tset_text)?;
    let target = parse_binary_arg(target_text)?;
    let report = build_witness(&t, &target).map_err(|e| e.to_string())?;
    let text = witness_lines(&report);
    let negative = !report.pass;
    let doc = json!({
        "command": "witness",
        "inputs": { "tset": tset_text, "target": target_text },
        "result": report,
    });
    Ok(Outcome {
        doc,
        text,
        negative,
    })
}

fn verify(lattice_text: &str, s2: bool) -> Result<Outcome, String> {
    let l = parse_lattice(lattice_text)?;
    if !s2 {
        let text = vec![
            format!("lattice: {l}"),
            format!("rank: {}", l.rank()),
            format!("det: {}", l.det()),
            format!(
                "minimum: {}",
                minimum(&l).map_or("-".to_string(), |m| m.to_string())
            ),
        ];
        let doc = json!({
            "command": "verify",
            "inputs": { "lattice": lattice_text },
            "result": {
                "lattice": l,
                "rank": l.rank(),
                "det": l.det().to_string(),
                "minimum": minimum(&l),
            },
        });
        return Ok(Outcome {
            doc,
            text,
            negative: false,
        });
    }
    let report = check_2_universal(&l);
    let mut text = Vec::new();
    for v in &report.verdicts {
        match &v.embedding {
            Some(e) => text.push(format!(
                "member {}: present  x = {:?}  y = {:?}",
                v.form,
                e.vectors()[0],
                e.vectors()[1]
            )),
            None => text.push(format!("member {}: absent", v.form)),
        }
    }
    text.push(format!("2-universal: {}", yes_no(report.all_present)));
    let negative = !report.all_present;
    let doc = json!({
        "command": "verify",
        "inputs": { "lattice": lattice_text },
        "result": {
            "two_universal": report.all_present,
            "verdicts": report.verdicts,
        },
    });
    Ok(Outcome {
        doc,
        text,
        negative,
    })
}

fn verify_witness_cmd(
    witness_text: &str,
    tset_text: &str,
    target_text: &str,
) -> Result<Outcome, String> {
    let w = parse_lattice(witness_text)?;
    let t = parse_tset(tset_text)?;
    let target = parse_binary_arg(target_text)?;
    let report = verify_witness(&w, &t, &target);
    let text = witness_lines(&report);
    let negative = !report.pass;
    let doc = json!({
        "command": "verify-witness",
        "inputs": { "witness": witness_text, "tset": tset_text, "target": target_text },
        "result": report,
    });
    Ok(Outcome {
        doc,
        text,
        negative,
    })
}

fn search(
    tset_text: &str,
    target_text: &str,
    rank_cap: u32,
    entry_cap: i64,
) -> Result<Outcome, String> {
    let t = parse_tset(tset_text)?;
    let target = parse_binary_arg(target_text)?;
    let outcome = witness_search(&t, &target, rank_cap, entry_cap);
    let mut text = match &outcome.report {
        Some(report) => witness_lines(report),
        None => vec!["witness: none (search space exhausted)".to_string()],
    };
    text.push(format!("enumerated: {}", outcome.enumerated));
    text.push(format!("tested: {}", outcome.tested));
    let negative = outcome.report.is_none();
    let doc = json!({
        "command": "search",
        "inputs": { "tset": tset_text, "target": target_text },
        "caps": { "rank_cap": rank_cap, "entry_cap": entry_cap },
        "result": outcome,
    });
    Ok(Outcome {
        doc,
        text,
        negative,
    })
}

fn demo(uniqueness: bool, fifteen: bool) -> Result<Outcome, String> {
    if uniqueness == fifteen {
        return Err("choose exactly one of --uniqueness or --fifteen".to_string());
    }
    if uniqueness {
        let cases = uniqueness_demo();
        let passed = cases.iter().all(|c| c.passed());
        let mut text = Vec::new();
        for case in &cases {
            let recipe = &case.recipe_report;
            let mut line = format!(
                "{}: recipe {} {}",
                case.target,
                recipe.recipe,
                if recipe.pass { "pass" } else { "fail" }
            );
            if let Some(s) = &case.search {
                match &s.report {
                    Some(r) => line.push_str(&format!(
                        "; search witness {} pass (enumerated {}, tested {})",
                        r.witness, s.enumerated, s.tested
                    )),
                    None => line.push_str(&format!(
                        "; search exhausted (enumerated {}, tested {})",
                        s.enumerated, s.tested
                    )),
                }
            }
            text.push(line);
        }
        text.push(format!(
            "uniqueness: {}",
            if passed {
                "certified for all 6 members"
            } else {
                "NOT certified"
            }
        ));
        let doc = json!({
            "command": "demo",
            "inputs": { "kind": "uniqueness" },
            "result": { "passed": passed, "cases": cases },
        });
        return Ok(Outcome {
            doc,
            text,
            negative: !passed,
        });
    }
    let report = fifteen_demo();
    let passed = report.passed();
    let truants: Vec<String> = report.truants.iter().map(|k| k.to_string()).collect();
    let text = vec![
        format!("nodes: {}", report.nodes),
        format!("leaves: {}", report.leaves),
        format!("truncated: {}", report.truncated),
        format!("truants: {}", truants.join(", ")),
        format!(
            "truants match the nine critical integers: {}",
            yes_no(report.truants_match_s1)
        ),
        format!(
            "all leaves represent 1..=15: {}",
            yes_no(report.all_leaves_represent_1_to_15)
        ),
        format!(
            "fifteen: {}",
            if passed { "certified" } else { "NOT certified" }
        ),
    ];
    let doc = json!({
        "command": "demo",
        "inputs": { "kind": "fifteen" },
        "result": report,
    });
    Ok(Outcome {
        doc,
        text,
        negative: !passed,
    })
}
