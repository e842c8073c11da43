//! Brute-force references for checking the normal form machinery.
//!
//! Nothing here calls the piling normalizer. [`RewriteOracle`] explores the
//! closure of a word under the three defining moves (cancel, merge, swap of
//! commuting neighbours) and picks the ShortLex-least shortest word found.
//! [`cayley_distances`] runs breadth-first search in the Cayley graph, using
//! the rewrite oracle to identify vertices.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::presentation::{GraphPresentation, VertexId, VertexOrder};
use crate::words::{
    enumerate_elements, generator_letters, invert, multiply, Letter, NormalForm, WordError,
};

type Syl = (u32, i64);

/// Memoized rewriting-closure oracle over one presentation.
pub struct RewriteOracle {
    graph: Arc<GraphPresentation>,
    memo: HashMap<Vec<Syl>, Vec<Letter>>,
}

fn key(letters: &[Letter]) -> (usize, &[Letter]) {
    (letters.len(), letters)
}

impl RewriteOracle {
    pub fn new(graph: Arc<GraphPresentation>) -> Self {
        RewriteOracle {
            graph,
            memo: HashMap::new(),
        }
    }

    pub fn graph(&self) -> &Arc<GraphPresentation> {
        &self.graph
    }

    fn order(&self, v: u32) -> VertexOrder {
        self.graph.order(VertexId(v))
    }

    fn expand(&self, word: &[Syl]) -> Vec<Letter> {
        word.iter()
            .flat_map(|&(v, e)| {
                let n = match self.order(v) {
                    VertexOrder::Two => 1,
                    VertexOrder::Infinite => e.unsigned_abs(),
                };
                std::iter::repeat_n((VertexId(v), e.signum() as i8), n as usize)
            })
            .collect()
    }

    /// ShortLex-least shortest letter word reachable from `letters`.
    pub fn canonical_letters(&mut self, letters: &[Letter]) -> Vec<Letter> {
        let word: Vec<Syl> = letters
            .iter()
            .map(|&(v, e)| (v.0, e as i64))
            .filter(|&(v, e)| match self.order(v) {
                VertexOrder::Two => e.rem_euclid(2) != 0,
                VertexOrder::Infinite => e != 0,
            })
            .map(|(v, e)| match self.order(v) {
                VertexOrder::Two => (v, 1),
                VertexOrder::Infinite => (v, e),
            })
            .collect();
        self.canonical(&word)
    }

    fn canonical(&mut self, word: &[Syl]) -> Vec<Letter> {
        if let Some(hit) = self.memo.get(word) {
            return hit.clone();
        }

        // Swap class: everything reachable by exchanging adjacent syllables
        // on distinct commuting vertices. Swaps are reversible, so this is
        // exactly the strongly connected piece containing `word`.
        let mut class: HashSet<Vec<Syl>> = HashSet::new();
        let mut queue = VecDeque::new();
        class.insert(word.to_vec());
        queue.push_back(word.to_vec());
        while let Some(w) = queue.pop_front() {
            for i in 0..w.len().saturating_sub(1) {
                let (u, v) = (w[i].0, w[i + 1].0);
                if u != v && self.graph.commutes_ids(VertexId(u), VertexId(v)) {
                    let mut s = w.clone();
                    s.swap(i, i + 1);
                    if class.insert(s.clone()) {
                        queue.push_back(s);
                    }
                }
            }
        }

        let mut best: Option<Vec<Letter>> = None;
        let offer = |cand: Vec<Letter>, best: &mut Option<Vec<Letter>>| {
            if best.as_ref().is_none_or(|b| key(&cand) < key(b)) {
                *best = Some(cand);
            }
        };
        for w in &class {
            offer(self.expand(w), &mut best);
            // merge and cancellation moves strictly drop the syllable count
            for i in 0..w.len().saturating_sub(1) {
                let ((u, a), (v, b)) = (w[i], w[i + 1]);
                if u != v {
                    continue;
                }
                let sum = match self.order(u) {
                    VertexOrder::Two => (a + b).rem_euclid(2),
                    VertexOrder::Infinite => a + b,
                };
                let mut merged = Vec::with_capacity(w.len() - 1);
                merged.extend_from_slice(&w[..i]);
                if sum != 0 {
                    merged.push((u, sum));
                }
                merged.extend_from_slice(&w[i + 2..]);
                let sub = self.canonical(&merged);
                offer(sub, &mut best);
            }
        }

        let best = best.expect("class contains the word itself");
        for w in class {
            self.memo.insert(w, best.clone());
        }
        best
    }
}

/// Distance from the identity of every element within `radius`, keyed by the
/// oracle's canonical spelling.
pub fn cayley_distances(oracle: &mut RewriteOracle, radius: u64) -> HashMap<Vec<Letter>, u64> {
    let letters = generator_letters(oracle.graph());
    let mut dist: HashMap<Vec<Letter>, u64> = HashMap::new();
    dist.insert(Vec::new(), 0);
    let mut sphere: Vec<Vec<Letter>> = vec![Vec::new()];
    for d in 1..=radius {
        let mut next = Vec::new();
        for w in &sphere {
            for &t in &letters {
                let mut longer = w.clone();
                longer.push(t);
                let c = oracle.canonical_letters(&longer);
                if !dist.contains_key(&c) {
                    dist.insert(c.clone(), d);
                    next.push(c);
                }
            }
        }
        sphere = next;
    }
    dist
}

/// Every word of at most `max_letters` single generator letters.
pub fn all_words(graph: &GraphPresentation, max_letters: usize) -> Vec<Vec<Letter>> {
    let letters = generator_letters(graph);
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_letters {
        layer = layer
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |&t| {
                    let mut x = w.clone();
                    x.push(t);
                    x
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Least `lg(f)` over all decompositions `g = h f h^-1` with
/// `lg(g) = lg(f) + 2 lg(h)`, searching every conjugator `h` with
/// `lg(h) <= lg(g) / 2`.
pub fn min_core_length(g: &NormalForm) -> Result<u64, WordError> {
    let conjugators = enumerate_elements(g.graph(), g.length() / 2)?;
    let mut best = g.length();
    for h in &conjugators {
        let f = multiply(&multiply(&invert(h), g)?, h)?;
        if g.length() == f.length() + 2 * h.length() {
            best = best.min(f.length());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{standard_graph, StandardKind};
    use crate::words::Word;

    fn g(kind: StandardKind, n: usize) -> Arc<GraphPresentation> {
        Arc::new(standard_graph(kind, n).unwrap())
    }

    fn spell(letters: &[Letter], graph: &Arc<GraphPresentation>) -> String {
        Word::from_letters(graph.clone(), letters).to_string()
    }

    fn oracle_form(text: &str, graph: &Arc<GraphPresentation>) -> String {
        let w = Word::parse(text, graph).unwrap();
        let letters: Vec<Letter> = w
            .syllables()
            .iter()
            .flat_map(|s| {
                std::iter::repeat_n(
                    (s.vertex, s.exponent.signum() as i8),
                    s.exponent.unsigned_abs() as usize,
                )
            })
            .collect();
        let mut o = RewriteOracle::new(graph.clone());
        spell(&o.canonical_letters(&letters), graph)
    }

    #[test]
    fn closure_examples() {
        let f2 = g(StandardKind::Free, 2);
        assert_eq!(oracle_form("a a^-1", &f2), "");
        let z2 = g(StandardKind::Abelian, 2);
        assert_eq!(oracle_form("b a", &z2), "a b");
        let p3 = g(StandardKind::Path, 3);
        assert_eq!(oracle_form("a c a^-1 b", &p3), "a b c a^-1");
        let k2 = g(StandardKind::CoxeterComplete, 2);
        assert_eq!(oracle_form("a b a", &k2), "b");
    }

    #[test]
    fn cayley_ball_sizes() {
        let f2 = g(StandardKind::Free, 2);
        let d = cayley_distances(&mut RewriteOracle::new(f2), 3);
        assert_eq!(d.len(), 1 + 4 + 12 + 36);
        let k2 = g(StandardKind::CoxeterComplete, 2);
        let d = cayley_distances(&mut RewriteOracle::new(k2), 4);
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn word_counts() {
        let f2 = g(StandardKind::Free, 2);
        assert_eq!(all_words(&f2, 2).len(), 1 + 4 + 16);
    }
}
