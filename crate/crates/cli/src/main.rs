use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use raag_core::axioms::{check_condition_i, check_condition_ii, coxeter_demo};
use raag_core::calculus::{power, power_length, unique_root};
use raag_core::chain::{bounds, claim_check, replay, witness_index, ChainConfig};
use raag_core::corpus::{builtin, builtin_corpus, load_corpus_dir, load_graph_file};
use raag_core::format::emit_graph;
use raag_core::presentation::GraphPresentation;
use raag_core::suite::run_selftest;
use raag_core::words::{normalize, NormalForm, Word};

#[derive(Parser)]
#[command(
    name = "raag",
    version,
    about = "Normal forms, powers, roots and length axioms in right-angled Artin and Coxeter groups"
)]
struct Cli {
    /// Print the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form and length of a word.
    Normalize {
        #[arg(long)]
        graph: String,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// k-th power, with the predicted length on torsion-free graphs.
    Power {
        #[arg(long)]
        graph: String,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// The k-th root, if one exists (torsion-free graphs only).
    Root {
        #[arg(long)]
        graph: String,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        k: i64,
    },
    /// Scan a ball for violations of the two power/length axioms.
    /// Exits 1 when any violation is found.
    Axioms {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        lg_max: u64,
        #[arg(long)]
        k_max: u64,
    },
    /// Replay the equation chain x_{n+1}^eta(n) = x_n g_n.
    Chain {
        #[arg(long)]
        graph: String,
        /// Comma-separated words g_0,g_1,...
        #[arg(long = "g", allow_hyphen_values = true)]
        g_seq: String,
        /// Comma-separated strictly increasing exponents.
        #[arg(long)]
        eta: String,
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        c0: String,
        /// Defaults to the full chain.
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// The Klein four-group facts lg(ab) = 2, (ab)^2 = e, (ab)^3 = ab.
    DemoCoxeter,
    /// Run the acceptance suite. Exits 1 when any criterion fails.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Directory of *.json graph files replacing the built-in corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

/// Command output: the JSON report plus a text rendering and an exit status.
struct Outcome {
    report: Value,
    text: Vec<String>,
    success: bool,
}

/// `builtin:NAME` or a path to a graph file.
fn load_graph(source: &str) -> Result<Arc<GraphPresentation>> {
    let graph = match source.strip_prefix("builtin:") {
        Some(name) => builtin(name)?,
        None => load_graph_file(Path::new(source))?,
    };
    Ok(Arc::new(graph))
}

fn show(x: &NormalForm) -> String {
    if x.is_identity() {
        "e".to_string()
    } else {
        x.to_string()
    }
}

fn parse_csv_u64(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .with_context(|| format!("bad integer `{}` in `{text}`", t.trim()))
        })
        .collect()
}

fn normalize_cmd(graph: &str, word: &str) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let x = normalize(&Word::parse(word, &g)?);
    Ok(Outcome {
        report: json!({
            "command": "normalize",
            "inputs": { "graph": emit_graph(&g), "word": word },
            "outputs": { "canonical": x.to_string(), "lg": x.length() },
        }),
        text: vec![
            format!("canonical: {}", show(&x)),
            format!("lg: {}", x.length()),
        ],
        success: true,
    })
}

fn power_cmd(graph: &str, word: &str, k: i64) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let x = NormalForm::parse(word, &g)?;
    let xk = power(&x, k);
    let predicted = if g.is_torsion_free() && k >= 1 {
        Some(power_length(&x, k)?)
    } else {
        None
    };
    let agreement = predicted.map(|p| p == xk.length());
    let mut text = vec![
        format!("power: {}", show(&xk)),
        format!("lg: {}", xk.length()),
    ];
    match predicted {
        Some(p) => {
            text.push(format!("predicted lg: {p}"));
            text.push(format!("agreement: {}", agreement.unwrap()));
        }
        None => text.push("predicted lg: n/a".to_string()),
    }
    Ok(Outcome {
        report: json!({
            "command": "power",
            "inputs": { "graph": emit_graph(&g), "word": word, "k": k },
            "outputs": {
                "power": xk.to_string(),
                "lg": xk.length(),
                "predicted_lg": predicted,
                "agreement": agreement,
            },
        }),
        text,
        success: agreement != Some(false),
    })
}

fn root_cmd(graph: &str, word: &str, k: i64) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let x = NormalForm::parse(word, &g)?;
    let root = unique_root(&x, k)?;
    Ok(Outcome {
        report: json!({
            "command": "root",
            "inputs": { "graph": emit_graph(&g), "word": word, "k": k },
            "outputs": { "root": root.as_ref().map(|r| r.to_string()) },
        }),
        text: vec![format!(
            "root: {}",
            root.as_ref().map_or("none".to_string(), show)
        )],
        success: true,
    })
}

fn axioms_cmd(graph: &str, lg_max: u64, k_max: u64) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let i = check_condition_i(&g, lg_max, k_max)?;
    let ii = check_condition_ii(&g, lg_max, k_max)?;
    let success = i.holds() && ii.holds();
    let mut text = vec![
        format!("elements checked: {}", i.elements_checked),
        format!(
            "condition (i) violations: {}",
            i.condition_i_violations.len()
        ),
    ];
    text.extend(
        i.condition_i_violations
            .iter()
            .map(|w| format!("  x = {}, k = {}", show(&w.x), w.k)),
    );
    text.push(format!(
        "condition (ii) violations: {}",
        ii.condition_ii_violations.len()
    ));
    text.extend(
        ii.condition_ii_violations
            .iter()
            .map(|w| format!("  x = {}, k = {}, y = {}", show(&w.x), w.k, show(&w.y))),
    );
    let witnesses: Vec<Value> = i
        .condition_i_violations
        .iter()
        .map(|w| json!({ "condition": "i", "x": w.x, "k": w.k }))
        .chain(
            ii.condition_ii_violations
                .iter()
                .map(|w| json!({ "condition": "ii", "x": w.x, "k": w.k, "y": w.y })),
        )
        .collect();
    Ok(Outcome {
        report: json!({
            "command": "axioms",
            "inputs": { "graph": emit_graph(&g), "lg_max": lg_max, "k_max": k_max },
            "outputs": { "condition_i": i, "condition_ii": ii },
            "witnesses": witnesses,
        }),
        text,
        success,
    })
}

fn chain_cmd(
    graph: &str,
    g_text: &str,
    eta_text: &str,
    c0_text: &str,
    max_steps: Option<usize>,
) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let g_seq = g_text
        .split(',')
        .map(|w| NormalForm::parse(w, &g))
        .collect::<Result<Vec<_>, _>>()?;
    let eta = parse_csv_u64(eta_text)?;
    let c0 = NormalForm::parse(c0_text, &g)?;
    let cfg = ChainConfig::new(g_seq, eta, c0)?;
    let steps = max_steps.unwrap_or(cfg.g_seq().len());
    let tables = bounds(&cfg);
    let trace = replay(&cfg, steps)?;
    let witness = witness_index(cfg.eta(), &trace.tables.f2);
    let claim = claim_check(&trace, &tables)?;

    let mut text = vec![
        format!("f1: {:?}", tables.f1),
        format!("f2: {:?}", tables.f2),
        format!(
            "witness index: {}",
            witness.map_or("none".to_string(), |w| w.to_string())
        ),
    ];
    for s in &trace.steps {
        text.push(format!(
            "step {}: c = {}, rhs = {}, eta = {}, outcome = {}{}",
            s.index,
            show(&s.c),
            show(&s.rhs),
            s.eta,
            serde_json::to_value(s.outcome)?
                .as_str()
                .unwrap_or_default(),
            s.next
                .as_ref()
                .map_or(String::new(), |n| format!(", next = {}", show(n)))
        ));
        for c in s
            .inequalities
            .star
            .iter()
            .chain(&s.inequalities.star_star)
            .chain(&s.inequalities.cascade)
        {
            text.push(format!("    {c}"));
        }
    }
    text.push(format!(
        "final: {}",
        serde_json::to_value(trace.final_outcome)?
            .as_str()
            .unwrap_or_default()
    ));
    text.push(format!("claim check: {claim}"));

    Ok(Outcome {
        report: json!({
            "command": "chain",
            "inputs": {
                "graph": emit_graph(&g),
                "g": g_text,
                "eta": cfg.eta(),
                "c0": c0_text,
                "max_steps": steps,
            },
            "outputs": {
                "tables": tables,
                "witness_index": witness,
                "trace": trace,
                "claim_check": claim,
            },
        }),
        text,
        success: true,
    })
}

fn demo_cmd() -> Result<Outcome> {
    let d = coxeter_demo();
    Ok(Outcome {
        text: vec![
            format!("lg(ab) = {}", d.lg_ab),
            format!("(ab)^2 = {}", show(&d.ab_squared)),
            format!("(ab)^3 = {}", show(&d.ab_cubed)),
            format!("ab != e: {}", d.ab_is_nontrivial),
        ],
        success: d.verified(),
        report: json!({
            "command": "demo-coxeter",
            "inputs": {},
            "outputs": d,
        }),
    })
}

fn selftest_cmd(seed: u64, corpus_dir: Option<&Path>) -> Result<Outcome> {
    let corpus = match corpus_dir {
        Some(dir) => load_corpus_dir(dir)?,
        None => builtin_corpus(),
    };
    if corpus.is_empty() {
        bail!("corpus is empty");
    }
    let (report, timing) = run_selftest(&corpus, seed);
    let text = report
        .criteria
        .iter()
        .flat_map(|c| {
            let head = format!(
                "[{}] criterion {}: {} ({} checks, {} failures)",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.title,
                c.checks,
                c.failures
            );
            std::iter::once(head).chain(c.witnesses.iter().map(|w| format!("    ! {w}")))
        })
        .collect();
    let per_criterion: serde_json::Map<String, Value> = timing
        .per_criterion
        .iter()
        .map(|(id, d)| (id.to_string(), json!(d.as_secs_f64() * 1e3)))
        .collect();
    Ok(Outcome {
        success: report.passed,
        report: json!({
            "command": "selftest",
            "inputs": { "seed": seed, "corpus": corpus_dir.map(|d| d.display().to_string()) },
            "outputs": report,
            "criterion_ms": per_criterion,
        }),
        text,
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Normalize { graph, word } => normalize_cmd(graph, word),
        Command::Power { graph, word, k } => power_cmd(graph, word, *k),
        Command::Root { graph, word, k } => root_cmd(graph, word, *k),
        Command::Axioms {
            graph,
            lg_max,
            k_max,
        } => axioms_cmd(graph, *lg_max, *k_max),
        Command::Chain {
            graph,
            g_seq,
            eta,
            c0,
            max_steps,
        } => chain_cmd(graph, g_seq, eta, c0, *max_steps),
        Command::DemoCoxeter => demo_cmd(),
        Command::Selftest { seed, corpus } => selftest_cmd(*seed, corpus.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut out) => {
            if cli.json {
                let obj = out.report.as_object_mut().expect("reports are objects");
                // all timing lives under this one key
                let mut timing = json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1e3 });
                if let Some(per) = obj.remove("criterion_ms") {
                    timing["criterion_ms"] = per;
                }
                obj.insert("timing".into(), timing);
                obj.entry("witnesses").or_insert_with(|| json!([]));
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.report).expect("json values serialize")
                );
            } else {
                for line in &out.text {
                    println!("{line}");
                }
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
