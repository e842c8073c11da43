//! Finite replay of the equation chain `x_{n+1}^{eta(n)} = x_n g_n`.
//!
//! Given the images `g_n`, an increasing exponent sequence `eta` and a start
//! value `c_0`, the replay solves the chain forward by root extraction and
//! records, at every step, the length inequalities that force the solution
//! to collapse once `eta` outruns the bound table `f2`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::calculus::{power, unique_root, CalculusError};
use crate::presentation::GraphPresentation;
use crate::words::{multiply, NormalForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("presentation has torsion; the chain needs all vertex orders infinite")]
    TorsionGraph,
    #[error("g[{0}] is the identity")]
    TrivialG(usize),
    #[error("eta must start at a positive value")]
    EtaNotPositive,
    #[error("eta is not strictly increasing at index {0}")]
    EtaNotIncreasing(usize),
    #[error("eta has {eta} entries but g has {g}")]
    LengthMismatch { eta: usize, g: usize },
    #[error("chain elements belong to different presentations")]
    GraphMismatch,
    #[error("{requested} steps requested but the chain has only {available}")]
    TooManySteps { requested: usize, available: usize },
    #[error("trace value c[{0}] has no bound table entry")]
    TableMismatch(usize),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

#[derive(Debug, Clone)]
pub struct ChainConfig {
    graph: Arc<GraphPresentation>,
    g_seq: Vec<NormalForm>,
    eta: Vec<u64>,
    c0: NormalForm,
}

impl ChainConfig {
    pub fn new(
        g_seq: Vec<NormalForm>,
        eta: Vec<u64>,
        c0: NormalForm,
    ) -> Result<ChainConfig, ChainError> {
        let graph = c0.graph().clone();
        if !graph.is_torsion_free() {
            return Err(ChainError::TorsionGraph);
        }
        if g_seq.len() != eta.len() {
            return Err(ChainError::LengthMismatch {
                eta: eta.len(),
                g: g_seq.len(),
            });
        }
        for (i, g) in g_seq.iter().enumerate() {
            if !Arc::ptr_eq(g.graph(), &graph) && **g.graph() != *graph {
                return Err(ChainError::GraphMismatch);
            }
            if g.is_identity() {
                return Err(ChainError::TrivialG(i));
            }
        }
        if eta.first().is_some_and(|&e| e == 0) {
            return Err(ChainError::EtaNotPositive);
        }
        if let Some(i) = eta.windows(2).position(|w| w[1] <= w[0]) {
            return Err(ChainError::EtaNotIncreasing(i + 1));
        }
        Ok(ChainConfig {
            graph,
            g_seq,
            eta,
            c0,
        })
    }

    pub fn graph(&self) -> &Arc<GraphPresentation> {
        &self.graph
    }

    pub fn g_seq(&self) -> &[NormalForm] {
        &self.g_seq
    }

    pub fn eta(&self) -> &[u64] {
        &self.eta
    }

    pub fn c0(&self) -> &NormalForm {
        &self.c0
    }

    /// `m_* = lg(c_0)`.
    pub fn m_star(&self) -> u64 {
        self.c0.length()
    }
}

/// `f1` is the least increasing sequence with `f1(n) > lg(g_n)`;
/// `f2(n) = (m_* + 1) + sum_{l < n} f1(l)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundTables {
    pub m_star: u64,
    pub f1: Vec<u64>,
    pub f2: Vec<u64>,
}

impl BoundTables {
    /// Continue `f1` past the known `g` values (only the monotonicity
    /// constraint remains) until it has `len` entries.
    pub fn extend_to(&mut self, len: usize) {
        while self.f1.len() < len {
            let next = self.f1.last().map_or(1, |&x| x + 1);
            self.f1.push(next);
            let last = *self.f2.last().expect("f2 is never empty");
            self.f2.push(last + next);
        }
    }
}

pub fn bounds(cfg: &ChainConfig) -> BoundTables {
    let mut f1 = Vec::with_capacity(cfg.g_seq.len());
    let mut prev = 0;
    for g in &cfg.g_seq {
        prev = (prev + 1).max(g.length() + 1);
        f1.push(prev);
    }
    let mut f2 = vec![cfg.m_star() + 1];
    for &x in &f1 {
        f2.push(f2.last().unwrap() + x);
    }
    BoundTables {
        m_star: cfg.m_star(),
        f1,
        f2,
    }
}

/// Least `n` with `eta(n) > f2(n + 2)`.
pub fn witness_index(eta: &[u64], f2: &[u64]) -> Option<usize> {
    (0..eta.len())
        .take_while(|n| n + 2 < f2.len())
        .find(|&n| eta[n] > f2[n + 2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<")]
    Lt,
}

impl Relation {
    fn eval(self, lhs: u64, rhs: u64) -> bool {
        match self {
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Lt => lhs < rhs,
        }
    }
}

/// One evaluated link of an inequality chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub label: String,
    pub lhs: u64,
    pub relation: Relation,
    pub rhs: u64,
    pub holds: bool,
}

impl Comparison {
    fn new(label: String, lhs: u64, relation: Relation, rhs: u64) -> Self {
        Comparison {
            holds: relation.eval(lhs, rhs),
            label,
            lhs,
            relation,
            rhs,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::Lt => "<",
        };
        write!(
            f,
            "{}: {} {} {} [{}]",
            self.label,
            self.lhs,
            rel,
            self.rhs,
            if self.holds { "true" } else { "false" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct InequalityLog {
    /// `eta(n) > f2(n+1) = f2(n) + f1(n) > lg(c_n) + lg(g_n) >= lg(c_n g_n)`
    pub star: Vec<Comparison>,
    /// `eta(n) > f2(n+2) >= f1(n+1) > lg(g_{n+1})`; the last link is absent
    /// at the final step.
    pub star_star: Vec<Comparison>,
    /// Only on a contradiction step: `eta(n-1) < eta(n)` and `eta(n) > lg(g_n)`.
    pub cascade: Vec<Comparison>,
}

impl InequalityLog {
    pub fn all_hold(&self) -> bool {
        self.star
            .iter()
            .chain(&self.star_star)
            .chain(&self.cascade)
            .all(|c| c.holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepOutcome {
    Extended,
    ForcedIdentity,
    Contradiction,
    Unsolvable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FinalOutcome {
    Exhausted,
    Contradiction,
    Unsolvable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub index: usize,
    pub c: NormalForm,
    pub g: NormalForm,
    pub rhs: NormalForm,
    pub eta: u64,
    pub roots_found: Vec<NormalForm>,
    /// `c_{n+1}`, when the step was solvable.
    pub next: Option<NormalForm>,
    pub outcome: StepOutcome,
    pub inequalities: InequalityLog,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainTrace {
    pub c0: NormalForm,
    /// Bound tables continued one entry past the chain so that every step
    /// can evaluate `f2(n+2)`.
    pub tables: BoundTables,
    pub witness_index: Option<usize>,
    pub steps: Vec<ChainStep>,
    pub final_outcome: FinalOutcome,
}

impl ChainTrace {
    /// `(n, c_n)` for every chain value the replay realized.
    pub fn chain_values(&self) -> impl Iterator<Item = (usize, &NormalForm)> {
        std::iter::once((0, &self.c0)).chain(
            self.steps
                .iter()
                .filter_map(|s| s.next.as_ref().map(|c| (s.index + 1, c))),
        )
    }
}

fn step_log(
    n: usize,
    cfg: &ChainConfig,
    tables: &BoundTables,
    c: &NormalForm,
    rhs: &NormalForm,
) -> InequalityLog {
    let eta = cfg.eta[n];
    let g = &cfg.g_seq[n];
    let (f1, f2) = (&tables.f1, &tables.f2);
    let star = vec![
        Comparison::new(
            format!("eta({n}) > f2({})", n + 1),
            eta,
            Relation::Gt,
            f2[n + 1],
        ),
        Comparison::new(
            format!("f2({}) = f2({n}) + f1({n})", n + 1),
            f2[n + 1],
            Relation::Eq,
            f2[n] + f1[n],
        ),
        Comparison::new(
            format!("f2({n}) + f1({n}) > lg(c{n}) + lg(g{n})"),
            f2[n] + f1[n],
            Relation::Gt,
            c.length() + g.length(),
        ),
        Comparison::new(
            format!("lg(c{n}) + lg(g{n}) >= lg(c{n} g{n})"),
            c.length() + g.length(),
            Relation::Ge,
            rhs.length(),
        ),
    ];
    let mut star_star = vec![
        Comparison::new(
            format!("eta({n}) > f2({})", n + 2),
            eta,
            Relation::Gt,
            f2[n + 2],
        ),
        Comparison::new(
            format!("f2({}) >= f1({})", n + 2, n + 1),
            f2[n + 2],
            Relation::Ge,
            f1[n + 1],
        ),
    ];
    if let Some(g_next) = cfg.g_seq.get(n + 1) {
        star_star.push(Comparison::new(
            format!("f1({}) > lg(g{})", n + 1, n + 1),
            f1[n + 1],
            Relation::Gt,
            g_next.length(),
        ));
    }
    InequalityLog {
        star,
        star_star,
        cascade: Vec::new(),
    }
}

/// Solves the chain forward for up to `max_steps` steps.
pub fn replay(cfg: &ChainConfig, max_steps: usize) -> Result<ChainTrace, ChainError> {
    if max_steps > cfg.g_seq.len() {
        return Err(ChainError::TooManySteps {
            requested: max_steps,
            available: cfg.g_seq.len(),
        });
    }
    let mut tables = bounds(cfg);
    tables.extend_to(cfg.g_seq.len() + 1);
    let witness = witness_index(&cfg.eta, &tables.f2);

    let mut steps: Vec<ChainStep> = Vec::with_capacity(max_steps);
    let mut c = cfg.c0.clone();
    let mut final_outcome = FinalOutcome::Exhausted;
    for n in 0..max_steps {
        let g = &cfg.g_seq[n];
        let eta = cfg.eta[n];
        let rhs = multiply(&c, g).map_err(CalculusError::from)?;
        let root = unique_root(&rhs, eta as i64)?;
        let mut inequalities = step_log(n, cfg, &tables, &c, &rhs);
        let after_forced = steps
            .last()
            .is_some_and(|s| s.outcome == StepOutcome::ForcedIdentity);
        let outcome = match &root {
            Some(r) if r.is_identity() => StepOutcome::ForcedIdentity,
            Some(_) => StepOutcome::Extended,
            None if after_forced && eta > g.length() => {
                inequalities.cascade = vec![
                    Comparison::new(
                        format!("eta({}) < eta({n})", n - 1),
                        cfg.eta[n - 1],
                        Relation::Lt,
                        eta,
                    ),
                    Comparison::new(
                        format!("eta({n}) > lg(g{n})"),
                        eta,
                        Relation::Gt,
                        g.length(),
                    ),
                ];
                StepOutcome::Contradiction
            }
            None => StepOutcome::Unsolvable,
        };
        if let Some(r) = &root {
            debug_assert_eq!(power(r, eta as i64), rhs);
        }
        steps.push(ChainStep {
            index: n,
            c: c.clone(),
            g: g.clone(),
            rhs,
            eta,
            roots_found: root.iter().cloned().collect(),
            next: root.clone(),
            outcome,
            inequalities,
        });
        match (outcome, root) {
            (StepOutcome::Contradiction, _) => {
                final_outcome = FinalOutcome::Contradiction;
                break;
            }
            (StepOutcome::Unsolvable, _) => {
                final_outcome = FinalOutcome::Unsolvable;
                break;
            }
            (_, Some(r)) => c = r,
            (_, None) => unreachable!("solvable steps carry a root"),
        }
    }

    Ok(ChainTrace {
        c0: cfg.c0.clone(),
        tables,
        witness_index: witness,
        steps,
        final_outcome,
    })
}

/// `lg(c_n) < f2(n)` for every realized chain value.
pub fn claim_check(trace: &ChainTrace, tables: &BoundTables) -> Result<bool, ChainError> {
    let mut ok = true;
    for (n, c) in trace.chain_values() {
        let bound = tables.f2.get(n).ok_or(ChainError::TableMismatch(n))?;
        ok &= c.length() < *bound;
    }
    Ok(ok)
}
