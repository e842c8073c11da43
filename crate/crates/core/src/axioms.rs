//! Exhaustive checks of the two power/length axioms over a ball of elements:
//!
//! * (i)  `lg(x) <= lg(x^k)` for every `k >= 1`;
//! * (ii) if `x^k = y` and `lg(y) < k` then `x = e`.
//!
//! Both hold in every right-angled Artin group. An involution `s` breaks
//! both at `k = 2`, since `s^2 = e`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::calculus::power;
use crate::presentation::{standard_graph, GraphPresentation, StandardKind};
use crate::words::{enumerate_elements, NormalForm, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionIViolation {
    pub x: NormalForm,
    pub k: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionIiViolation {
    pub x: NormalForm,
    pub k: u64,
    pub y: NormalForm,
}

/// Witnesses are ordered by (lg, ShortLex, k) of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub condition_i_violations: Vec<ConditionIViolation>,
    pub condition_ii_violations: Vec<ConditionIiViolation>,
    pub elements_checked: u64,
    pub k_max: u64,
    pub lg_max: u64,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.condition_i_violations.is_empty() && self.condition_ii_violations.is_empty()
    }

    /// Recomputes every witness from scratch.
    pub fn reverify(&self) -> bool {
        self.condition_i_violations
            .iter()
            .all(|w| w.k >= 1 && w.x.length() > power(&w.x, w.k as i64).length())
            && self
                .condition_ii_violations
                .iter()
                .all(|w| power(&w.x, w.k as i64) == w.y && w.y.length() < w.k && !w.x.is_identity())
    }

    pub fn merge(mut self, other: AxiomReport) -> AxiomReport {
        self.condition_i_violations
            .extend(other.condition_i_violations);
        self.condition_ii_violations
            .extend(other.condition_ii_violations);
        self
    }
}

fn scan<T: Send>(
    graph: &Arc<GraphPresentation>,
    lg_max: u64,
    k_max: u64,
    probe: impl Fn(&NormalForm, u64) -> Option<T> + Sync,
) -> Result<(Vec<T>, u64), AxiomError> {
    let ball = enumerate_elements(graph, lg_max)?;
    let found = ball
        .par_iter()
        .flat_map_iter(|x| (1..=k_max).filter_map(|k| probe(x, k)).collect::<Vec<_>>())
        .collect();
    Ok((found, ball.len() as u64))
}

pub fn check_condition_i(
    graph: &Arc<GraphPresentation>,
    lg_max: u64,
    k_max: u64,
) -> Result<AxiomReport, AxiomError> {
    let (found, n) = scan(graph, lg_max, k_max, |x, k| {
        let xk = power(x, k as i64);
        (x.length() > xk.length()).then(|| ConditionIViolation { x: x.clone(), k })
    })?;
    Ok(AxiomReport {
        condition_i_violations: found,
        condition_ii_violations: Vec::new(),
        elements_checked: n,
        k_max,
        lg_max,
    })
}

pub fn check_condition_ii(
    graph: &Arc<GraphPresentation>,
    lg_max: u64,
    k_max: u64,
) -> Result<AxiomReport, AxiomError> {
    let (found, n) = scan(graph, lg_max, k_max, |x, k| {
        if x.is_identity() {
            return None;
        }
        let y = power(x, k as i64);
        (y.length() < k).then(|| ConditionIiViolation { x: x.clone(), k, y })
    })?;
    Ok(AxiomReport {
        condition_i_violations: Vec::new(),
        condition_ii_violations: found,
        elements_checked: n,
        k_max,
        lg_max,
    })
}

/// The Klein four-group facts: `lg(ab) = 2`, `(ab)^2 = e`, `(ab)^3 = ab`, `ab != e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxeterDemo {
    pub ab: NormalForm,
    pub lg_ab: u64,
    pub ab_squared: NormalForm,
    pub ab_cubed: NormalForm,
    pub ab_squared_is_identity: bool,
    pub ab_cubed_equals_ab: bool,
    pub ab_is_nontrivial: bool,
}

impl CoxeterDemo {
    /// True iff all four facts checked out.
    pub fn verified(&self) -> bool {
        self.lg_ab == 2
            && self.ab_squared_is_identity
            && self.ab_cubed_equals_ab
            && self.ab_is_nontrivial
    }
}

pub fn coxeter_demo() -> CoxeterDemo {
    let k2 = Arc::new(standard_graph(StandardKind::CoxeterComplete, 2).expect("n = 2"));
    let ab = NormalForm::parse("a b", &k2).expect("a and b are vertices");
    let ab_squared = power(&ab, 2);
    let ab_cubed = power(&ab, 3);
    CoxeterDemo {
        lg_ab: ab.length(),
        ab_squared_is_identity: ab_squared.is_identity(),
        ab_cubed_equals_ab: ab_cubed == ab,
        ab_is_nontrivial: !ab.is_identity(),
        ab_squared,
        ab_cubed,
        ab,
    }
}
