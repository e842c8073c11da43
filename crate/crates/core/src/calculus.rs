//! Cyclic reduction, powers and roots.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::presentation::GraphPresentation;
use crate::words::{
    enumerate_elements, generator_letters, invert, multiply, NormalForm, WordError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("presentation has torsion; the operation needs all vertex orders infinite")]
    TorsionGraph,
    #[error("exponent must be positive, got {0}")]
    NonPositiveExponent(i64),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// `g = h f h^-1` with `f` cyclically reduced and `lg(g) = lg(f) + 2 lg(h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicDecomposition {
    pub h: NormalForm,
    pub f: NormalForm,
}

impl CyclicDecomposition {
    /// `h f h^-1`.
    pub fn recompose(&self) -> NormalForm {
        let hf = multiply(&self.h, &self.f).expect("same presentation");
        multiply(&hf, &invert(&self.h)).expect("same presentation")
    }
}

fn conjugate_by_letter(x: &NormalForm, t: &NormalForm) -> NormalForm {
    // t^-1 x t
    let left = multiply(&invert(t), x).expect("same presentation");
    multiply(&left, t).expect("same presentation")
}

fn letters_of(graph: &Arc<GraphPresentation>) -> Vec<NormalForm> {
    generator_letters(graph)
        .into_iter()
        .map(|t| NormalForm::generator(graph.clone(), t))
        .collect()
}

/// The least generator letter `t` (in letter order) with `lg(t^-1 x t) < lg(x)`.
fn shortening_letter(x: &NormalForm, letters: &[NormalForm]) -> Option<(NormalForm, NormalForm)> {
    letters.iter().find_map(|t| {
        let y = conjugate_by_letter(x, t);
        (y.length() < x.length()).then(|| (t.clone(), y))
    })
}

pub fn is_cyclically_reduced(x: &NormalForm) -> bool {
    shortening_letter(x, &letters_of(x.graph())).is_none()
}

/// Strips shortening letters until none is left.
///
/// Conjugation preserves the parity of `lg`, so every strip drops the length
/// by exactly two and `lg(h)` equals the number of strips.
pub fn cyclic_decompose(g: &NormalForm) -> CyclicDecomposition {
    let letters = letters_of(g.graph());
    let mut h = NormalForm::identity(g.graph().clone());
    let mut f = g.clone();
    while let Some((t, shorter)) = shortening_letter(&f, &letters) {
        h = multiply(&h, &t).expect("same presentation");
        f = shorter;
    }
    CyclicDecomposition { h, f }
}

/// `x^k` by repeated squaring. `x^0 = e`; negative `k` powers the inverse.
pub fn power(x: &NormalForm, k: i64) -> NormalForm {
    let mut base = if k < 0 { invert(x) } else { x.clone() };
    let mut k = k.unsigned_abs();
    let mut acc = NormalForm::identity(x.graph().clone());
    while k > 0 {
        if k & 1 == 1 {
            acc = multiply(&acc, &base).expect("same presentation");
        }
        k >>= 1;
        if k > 0 {
            base = multiply(&base, &base).expect("same presentation");
        }
    }
    acc
}

/// Predicted `lg(x^k) = k lg(f) + 2 lg(h)` from the cyclic decomposition,
/// without forming the power.
pub fn power_length(x: &NormalForm, k: i64) -> Result<u64, CalculusError> {
    if !x.graph().is_torsion_free() {
        return Err(CalculusError::TorsionGraph);
    }
    if k < 1 {
        return Err(CalculusError::NonPositiveExponent(k));
    }
    let d = cyclic_decompose(x);
    Ok(k as u64 * d.f.length() + 2 * d.h.length())
}

/// Every `x` with `lg(x) <= max_lg` and `x^k = g`, by exhaustive search.
pub fn roots(g: &NormalForm, k: i64, max_lg: u64) -> Result<BTreeSet<NormalForm>, CalculusError> {
    if k < 1 {
        return Err(CalculusError::NonPositiveExponent(k));
    }
    let ball = enumerate_elements(g.graph(), max_lg)?;
    Ok(ball.into_iter().filter(|x| power(x, k) == *g).collect())
}

/// The `k`-th root of `g` in a right-angled Artin group, if any.
///
/// With `g = h f h^-1` as from [`cyclic_decompose`], any root is `h u h^-1`
/// where `u` is cyclically reduced and `u^k = f` spells geodesically, so `u`
/// is a geodesic prefix of `f` of length `lg(f) / k`. Candidates are grown
/// one front letter at a time and checked by powering.
pub fn unique_root(g: &NormalForm, k: i64) -> Result<Option<NormalForm>, CalculusError> {
    if !g.graph().is_torsion_free() {
        return Err(CalculusError::TorsionGraph);
    }
    if k < 1 {
        return Err(CalculusError::NonPositiveExponent(k));
    }
    let CyclicDecomposition { h, f } = cyclic_decompose(g);
    let k_len = k as u64;
    if f.length() % k_len != 0 {
        return Ok(None);
    }
    let target = f.length() / k_len;
    let letters = letters_of(g.graph());

    // (prefix, remainder) pairs with prefix * remainder = f geodesically
    let mut frontier: HashSet<(NormalForm, NormalForm)> = HashSet::new();
    frontier.insert((NormalForm::identity(g.graph().clone()), f.clone()));
    for _ in 0..target {
        let mut next = HashSet::new();
        for (prefix, rest) in &frontier {
            for t in &letters {
                let shorter = multiply(&invert(t), rest).expect("same presentation");
                if shorter.length() + 1 == rest.length() {
                    let grown = multiply(prefix, t).expect("same presentation");
                    next.insert((grown, shorter));
                }
            }
        }
        frontier = next;
    }

    let mut found: Vec<NormalForm> = frontier
        .into_iter()
        .map(|(u, _)| u)
        .filter(|u| power(u, k) == f)
        .collect();
    found.sort();
    found.dedup();
    debug_assert!(found.len() <= 1, "roots in a RAAG are unique");
    Ok(found.into_iter().next().map(|u| {
        let hu = multiply(&h, &u).expect("same presentation");
        multiply(&hu, &invert(&h)).expect("same presentation")
    }))
}
