//! The acceptance suite, shared by the `acceptance` test target and the
//! `selftest` command.
//!
//! Each criterion returns a [`CriterionResult`] with the number of checks run
//! and the first few mismatches. Wall-clock times are returned separately so
//! that reports from two runs with the same seed compare byte for byte.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::axioms::{check_condition_i, check_condition_ii, coxeter_demo};
use crate::calculus::{
    cyclic_decompose, is_cyclically_reduced, power, power_length, roots, unique_root,
};
use crate::chain::{bounds, claim_check, replay, witness_index, ChainConfig, FinalOutcome};
use crate::corpus::CorpusEntry;
use crate::format::{emit_graph, parse_graph};
use crate::oracle::{all_words, cayley_distances, RewriteOracle};
use crate::presentation::{standard_graph, validate, GraphPresentation, StandardKind};
use crate::words::{enumerate_elements, normalize, random_word, Letter, NormalForm, Word};

const MAX_REPORTED: usize = 20;

/// Criterion 1: maximum word length compared against the rewrite oracle.
pub const ORACLE_WORD_LETTERS: usize = 6;
/// Criterion 1: wall-clock limit.
pub const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(120);
/// Criterion 2: Cayley ball radius.
pub const GEODESIC_RADIUS: u64 = 5;
/// Criterion 3: radius and exponent range for the power length laws.
pub const LAW_RADIUS: u64 = 4;
pub const LAW_K_MAX: i64 = 4;
/// Criterion 4: scan ranges for the axioms.
pub const AXIOM_LG_MAX: u64 = 4;
pub const AXIOM_K_MAX: u64 = 6;
/// Criterion 6: radius and exponent range for root agreement.
pub const ROOT_RADIUS: u64 = 5;
pub const ROOT_K_MAX: i64 = 4;
/// Criterion 7: wall-clock limit.
pub const CHAIN_TIME_LIMIT: Duration = Duration::from_secs(10);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub checks: u64,
    pub failures: u64,
    /// The first few failures, rendered for humans.
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

struct Tally {
    checks: u64,
    failures: u64,
    witnesses: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failures: 0,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < MAX_REPORTED {
                self.witnesses.push(witness());
            }
        }
    }

    /// Counts `n` checks whose failures are reported separately via `fail`.
    fn scanned(&mut self, n: u64) {
        self.checks += n;
    }

    fn fail(&mut self, witness: String) {
        self.failures += 1;
        if self.witnesses.len() < MAX_REPORTED {
            self.witnesses.push(witness);
        }
    }

    fn finish(self, id: u8, title: &str) -> CriterionResult {
        CriterionResult {
            id,
            title: title.to_string(),
            passed: self.failures == 0 && self.checks > 0,
            checks: self.checks,
            failures: self.failures,
            witnesses: self.witnesses,
            notes: self.notes,
        }
    }
}

fn spell(graph: &Arc<GraphPresentation>, letters: &[Letter]) -> String {
    Word::from_letters(graph.clone(), letters).to_string()
}

fn torsion_free(corpus: &[CorpusEntry]) -> impl Iterator<Item = &CorpusEntry> {
    corpus.iter().filter(|e| e.graph.is_torsion_free())
}

pub fn oracle_equivalence(corpus: &[CorpusEntry]) -> (CriterionResult, Duration) {
    let start = Instant::now();
    let mut t = Tally::new();
    for entry in corpus {
        let g = &entry.graph;
        let mut oracle = RewriteOracle::new(g.clone());
        let words = all_words(g, ORACLE_WORD_LETTERS);
        let mut classes: HashMap<Vec<Letter>, Vec<Letter>> = HashMap::new();
        for w in &words {
            let ours: Vec<Letter> = normalize(&Word::from_letters(g.clone(), w))
                .letters()
                .collect();
            let theirs = oracle.canonical_letters(w);
            // one normal form per oracle class and vice versa
            let class_ok = classes
                .entry(theirs.clone())
                .or_insert_with(|| ours.clone())
                == &ours;
            t.check(ours == theirs && class_ok, || {
                format!(
                    "{}: `{}` normalizes to `{}`, oracle gives `{}`",
                    entry.name,
                    spell(g, w),
                    spell(g, &ours),
                    spell(g, &theirs)
                )
            });
        }
        t.notes.push(format!(
            "{}: {} words, {} classes",
            entry.name,
            words.len(),
            classes.len()
        ));
    }
    let elapsed = start.elapsed();
    t.check(elapsed < ORACLE_TIME_LIMIT, || {
        format!("runtime {:?} exceeds {:?}", elapsed, ORACLE_TIME_LIMIT)
    });
    (
        t.finish(1, "normal forms agree with the rewriting-closure oracle"),
        elapsed,
    )
}

pub fn geodesic_length(corpus: &[CorpusEntry]) -> CriterionResult {
    let mut t = Tally::new();
    for entry in corpus {
        let g = &entry.graph;
        let dist = cayley_distances(&mut RewriteOracle::new(g.clone()), GEODESIC_RADIUS);
        for (letters, &d) in &dist {
            let x = normalize(&Word::from_letters(g.clone(), letters));
            t.check(x.length() == d, || {
                format!(
                    "{}: lg({}) = {} but Cayley distance is {d}",
                    entry.name,
                    x,
                    x.length()
                )
            });
        }
        let ball = enumerate_elements(g, GEODESIC_RADIUS).expect("radius below ceiling");
        t.check(ball.len() == dist.len(), || {
            format!(
                "{}: enumeration finds {} elements, Cayley BFS finds {}",
                entry.name,
                ball.len(),
                dist.len()
            )
        });
        for x in &ball {
            let letters: Vec<Letter> = x.letters().collect();
            t.check(dist.get(&letters) == Some(&x.length()), || {
                format!(
                    "{}: enumerated `{}` missing from the Cayley ball",
                    entry.name, x
                )
            });
        }
        t.notes.push(format!(
            "{}: {} elements within radius {GEODESIC_RADIUS}",
            entry.name,
            dist.len()
        ));
    }
    t.finish(2, "lg equals Cayley-graph distance")
}

pub fn power_laws(corpus: &[CorpusEntry]) -> CriterionResult {
    let mut t = Tally::new();
    for entry in torsion_free(corpus) {
        for x in enumerate_elements(&entry.graph, LAW_RADIUS).expect("radius below ceiling") {
            let d = cyclic_decompose(&x);
            t.check(
                d.recompose() == x
                    && x.length() == d.f.length() + 2 * d.h.length()
                    && is_cyclically_reduced(&d.f),
                || {
                    format!(
                        "{}: bad decomposition of `{}`: h = `{}`, f = `{}`",
                        entry.name, x, d.h, d.f
                    )
                },
            );
            let reduced = is_cyclically_reduced(&x);
            for k in 1..=LAW_K_MAX {
                let actual = power(&x, k).length();
                let predicted = power_length(&x, k).expect("torsion-free");
                t.check(actual == predicted, || {
                    format!(
                        "{}: lg(({})^{k}) = {actual}, predicted {predicted}",
                        entry.name, x
                    )
                });
                if reduced {
                    t.check(actual == k as u64 * x.length(), || {
                        format!(
                            "{}: cyclically reduced `{}` has lg(x^{k}) = {actual}",
                            entry.name, x
                        )
                    });
                }
            }
        }
    }
    t.finish(3, "power length laws hold exactly")
}

pub fn raag_axioms(corpus: &[CorpusEntry]) -> CriterionResult {
    let mut t = Tally::new();
    for entry in torsion_free(corpus) {
        let i = check_condition_i(&entry.graph, AXIOM_LG_MAX, AXIOM_K_MAX).expect("within ceiling");
        let ii =
            check_condition_ii(&entry.graph, AXIOM_LG_MAX, AXIOM_K_MAX).expect("within ceiling");
        t.scanned((i.elements_checked + ii.elements_checked) * AXIOM_K_MAX);
        for w in &i.condition_i_violations {
            t.fail(format!(
                "{}: (i) fails at x = `{}`, k = {}",
                entry.name, w.x, w.k
            ));
        }
        for w in &ii.condition_ii_violations {
            t.fail(format!(
                "{}: (ii) fails at x = `{}`, k = {}, y = `{}`",
                entry.name, w.x, w.k, w.y
            ));
        }
    }
    t.finish(
        4,
        "both axioms hold on every right-angled Artin group in the corpus",
    )
}

pub fn coxeter_counterexample() -> CriterionResult {
    let mut t = Tally::new();
    let d = coxeter_demo();
    t.check(d.lg_ab == 2, || format!("lg(ab) = {}", d.lg_ab));
    t.check(d.ab_squared_is_identity, || {
        format!("(ab)^2 = `{}`", d.ab_squared)
    });
    t.check(d.ab_cubed_equals_ab, || {
        format!("(ab)^3 = `{}`", d.ab_cubed)
    });
    t.check(d.ab_is_nontrivial, || "ab = e".to_string());

    let k2 = Arc::new(standard_graph(StandardKind::CoxeterComplete, 2).expect("n = 2"));
    let report = check_condition_ii(&k2, 2, 3).expect("within ceiling");
    let ab = NormalForm::parse("a b", &k2).expect("vertices exist");
    let has_witness = report
        .condition_ii_violations
        .iter()
        .any(|w| w.x == ab && w.k == 3 && w.y == ab);
    t.check(has_witness, || "witness (ab, 3, ab) missing".to_string());
    t.check(report.reverify(), || {
        "a witness failed re-verification".to_string()
    });
    t.notes.push(format!(
        "condition (ii) witnesses: {}",
        report
            .condition_ii_violations
            .iter()
            .map(|w| format!(
                "({}, {}, {})",
                w.x,
                w.k,
                if w.y.is_identity() {
                    "e".to_string()
                } else {
                    w.y.to_string()
                }
            ))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    t.finish(5, "Klein four-group counterexample to (ii)")
}

pub fn root_agreement(corpus: &[CorpusEntry]) -> CriterionResult {
    let mut t = Tally::new();
    for entry in torsion_free(corpus) {
        let g = &entry.graph;
        let ball = enumerate_elements(g, ROOT_RADIUS).expect("radius below ceiling");
        for k in 1..=ROOT_K_MAX {
            // brute-force roots for the whole ball at once: index every
            // x by x^k, then keep those with lg(x) <= lg(g)
            let mut by_power: HashMap<NormalForm, Vec<&NormalForm>> = HashMap::new();
            for x in &ball {
                by_power.entry(power(x, k)).or_default().push(x);
            }
            for target in &ball {
                let brute: Vec<&NormalForm> = by_power
                    .get(target)
                    .map(|xs| {
                        xs.iter()
                            .copied()
                            .filter(|x| x.length() <= target.length())
                            .collect()
                    })
                    .unwrap_or_default();
                let fast = unique_root(target, k).expect("torsion-free");
                let agree = brute.len() <= 1 && fast.as_ref() == brute.first().copied();
                t.check(agree, || {
                    format!(
                        "{}: {k}-th root of `{}`: fast {:?}, brute force {:?}",
                        entry.name,
                        target,
                        fast.as_ref().map(|x| x.to_string()),
                        brute.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                    )
                });
            }
        }
        // the batched search above must coincide with `roots` itself
        for target in ball.iter().filter(|x| x.length() <= 2) {
            for k in 1..=ROOT_K_MAX {
                let direct = roots(target, k, target.length()).expect("within ceiling");
                let fast = unique_root(target, k).expect("torsion-free");
                t.check(
                    direct.len() <= 1 && direct.iter().next() == fast.as_ref(),
                    || {
                        format!(
                            "{}: roots({}, {k}) disagrees with the fast path",
                            entry.name, target
                        )
                    },
                );
            }
        }
    }
    t.finish(6, "fast roots agree with exhaustive root search")
}

pub fn chain_fidelity() -> (CriterionResult, Duration) {
    let start = Instant::now();
    let mut t = Tally::new();
    let f2 = Arc::new(standard_graph(StandardKind::Free, 2).expect("n = 2"));
    let a = NormalForm::parse("a", &f2).expect("vertex a");
    let g_seq = vec![a.clone(), a.clone(), a];
    let c0 = NormalForm::identity(f2.clone());

    // eta(n) = f2(n+2) + 1 on the tables continued past the chain
    let probe = ChainConfig::new(g_seq.clone(), vec![1, 2, 3], c0.clone()).expect("valid probe");
    let mut tables = bounds(&probe);
    tables.extend_to(g_seq.len() + 1);
    let eta: Vec<u64> = (0..g_seq.len()).map(|n| tables.f2[n + 2] + 1).collect();
    let cfg = ChainConfig::new(g_seq.clone(), eta.clone(), c0).expect("eta increasing");
    let trace = replay(&cfg, g_seq.len()).expect("valid replay");
    let witness = witness_index(&eta, &tables.f2);

    t.notes.push(format!(
        "f1 = {:?}, f2 = {:?}, eta = {:?}",
        tables.f1, tables.f2, eta
    ));
    t.check(witness.is_some(), || "no witness index".to_string());
    t.check(
        matches!(
            trace.final_outcome,
            FinalOutcome::Unsolvable | FinalOutcome::Contradiction
        ),
        || format!("replay ended with {:?}", trace.final_outcome),
    );
    let last = trace.steps.last().map(|s| s.index);
    t.check(
        matches!((last, witness), (Some(l), Some(w)) if l <= w + 2),
        || format!("last step {last:?} is past witness {witness:?} + 2"),
    );
    t.check(claim_check(&trace, &bounds(&cfg)).unwrap_or(false), || {
        "lg(c_n) < f2(n) fails on a realized value".to_string()
    });
    if let Some(step) = witness.and_then(|w| trace.steps.get(w)) {
        for c in step
            .inequalities
            .star
            .iter()
            .chain(&step.inequalities.star_star)
        {
            t.check(c.holds, || format!("at witness step: {c}"));
        }
    } else {
        t.check(false, || {
            "replay stopped before the witness step".to_string()
        });
    }
    let elapsed = start.elapsed();
    t.check(elapsed < CHAIN_TIME_LIMIT, || {
        format!("runtime {:?} exceeds {:?}", elapsed, CHAIN_TIME_LIMIT)
    });
    t.notes.push(format!(
        "witness index {:?}, outcome {:?} after {} step(s)",
        witness,
        trace.final_outcome,
        trace.steps.len()
    ));
    (
        t.finish(7, "chain replay collapses at the witness index"),
        elapsed,
    )
}

/// Format round-trips, plus a repeat of the seeded generator.
pub fn round_trips(corpus: &[CorpusEntry], seed: u64) -> CriterionResult {
    let mut t = Tally::new();
    for entry in corpus {
        let g = &entry.graph;
        let text = emit_graph(g);
        let back = parse_graph(&text);
        t.check(
            back.as_ref()
                .is_ok_and(|b| b == &**g && emit_graph(b) == text),
            || format!("{}: graph file does not round-trip", entry.name),
        );
        t.check(validate(&g.to_raw()).as_ref() == Ok(&**g), || {
            format!("{}: validate is not idempotent", entry.name)
        });
        for len in 0..16usize {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(len as u64);
            let w = random_word(g, len, s);
            let again = random_word(g, len, s);
            t.check(w.syllables() == again.syllables(), || {
                format!("{}: random_word not deterministic for seed {s}", entry.name)
            });
            let text = w.to_string();
            let parsed = Word::parse(&text, g);
            t.check(parsed.is_ok_and(|p| p.syllables() == w.syllables()), || {
                format!("{}: word `{text}` does not round-trip", entry.name)
            });
            let x = normalize(&w);
            let text = x.to_string();
            t.check(
                NormalForm::parse(&text, g).is_ok_and(|y| y == x && y.to_string() == text),
                || format!("{}: normal form `{text}` does not round-trip", entry.name),
            );
        }
    }
    t.finish(8, "formats round-trip and seeded generation is repeatable")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub corpus: Vec<String>,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SelftestTiming {
    pub per_criterion: Vec<(u8, Duration)>,
    pub total: Duration,
}

pub fn run_selftest(corpus: &[CorpusEntry], seed: u64) -> (SelftestReport, SelftestTiming) {
    let start = Instant::now();
    let mut timing = SelftestTiming::default();
    let mut criteria = Vec::new();
    let mut timed =
        |id: u8, f: &mut dyn FnMut() -> CriterionResult, criteria: &mut Vec<CriterionResult>| {
            let s = Instant::now();
            criteria.push(f());
            timing.per_criterion.push((id, s.elapsed()));
        };
    timed(1, &mut || oracle_equivalence(corpus).0, &mut criteria);
    timed(2, &mut || geodesic_length(corpus), &mut criteria);
    timed(3, &mut || power_laws(corpus), &mut criteria);
    timed(4, &mut || raag_axioms(corpus), &mut criteria);
    timed(5, &mut coxeter_counterexample, &mut criteria);
    timed(6, &mut || root_agreement(corpus), &mut criteria);
    timed(7, &mut || chain_fidelity().0, &mut criteria);
    timed(8, &mut || round_trips(corpus, seed), &mut criteria);
    timing.total = start.elapsed();
    let passed = criteria.iter().all(|c| c.passed);
    (
        SelftestReport {
            seed,
            corpus: corpus.iter().map(|e| e.name.clone()).collect(),
            criteria,
            passed,
        },
        timing,
    )
}
