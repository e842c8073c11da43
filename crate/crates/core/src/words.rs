//! Syllable words, canonical normal forms and the word length function.
//!
//! Normalization runs in two passes. The piling pass feeds syllables left to
//! right; each vertex keeps a pile of the arena slots holding its syllables,
//! and an incoming syllable merges into the top of its own pile unless a
//! non-commuting vertex has a later live syllable. The result is a reduced
//! word, which the linearization pass rewrites into the ShortLex-least
//! ordering by repeatedly emitting the least available vertex.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::presentation::{GraphPresentation, VertexId, VertexOrder};

/// Default radius limit for exhaustive ball enumeration.
pub const DEFAULT_CEILING: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown vertex `{name}` at column {column}")]
    UnknownVertex { name: String, column: usize },
    #[error("zero exponent at column {column}")]
    ZeroExponent { column: usize },
    #[error("malformed token `{token}` at column {column}")]
    Malformed { token: String, column: usize },
    #[error("operands belong to different presentations")]
    GraphMismatch,
    #[error("requested radius {requested} exceeds enumeration ceiling {ceiling}")]
    CeilingExceeded { requested: u64, ceiling: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub vertex: VertexId,
    pub exponent: i64,
}

impl Syllable {
    pub fn new(vertex: VertexId, exponent: i64) -> Self {
        Syllable { vertex, exponent }
    }
}

/// A single generator or inverse generator. Orders by vertex, then exponent.
pub type Letter = (VertexId, i8);

/// Reduce an exponent into the canonical range for a vertex of the given order.
pub(crate) fn reduce_exponent(order: VertexOrder, exponent: i64) -> i64 {
    match order {
        VertexOrder::Two => exponent.rem_euclid(2),
        VertexOrder::Infinite => exponent,
    }
}

fn weight(order: VertexOrder, exponent: i64) -> u64 {
    match order {
        VertexOrder::Two => 1,
        VertexOrder::Infinite => exponent.unsigned_abs(),
    }
}

/// The generators and their inverses, in letter order.
pub fn generator_letters(graph: &GraphPresentation) -> Vec<Letter> {
    graph
        .vertex_ids()
        .flat_map(|v| match graph.order(v) {
            VertexOrder::Two => vec![(v, 1)],
            VertexOrder::Infinite => vec![(v, -1), (v, 1)],
        })
        .collect()
}

fn same_graph(a: &Arc<GraphPresentation>, b: &Arc<GraphPresentation>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn fmt_syllables(
    f: &mut fmt::Formatter<'_>,
    graph: &GraphPresentation,
    syllables: &[Syllable],
) -> fmt::Result {
    for (i, s) in syllables.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        f.write_str(graph.name(s.vertex))?;
        if s.exponent != 1 {
            write!(f, "^{}", s.exponent)?;
        }
    }
    Ok(())
}

/// A raw, possibly unreduced word.
#[derive(Debug, Clone)]
pub struct Word {
    graph: Arc<GraphPresentation>,
    syllables: Vec<Syllable>,
}

impl Word {
    /// Builds a word, dropping syllables whose exponent vanishes (including
    /// even powers of involutions).
    pub fn new(
        graph: Arc<GraphPresentation>,
        syllables: impl IntoIterator<Item = Syllable>,
    ) -> Self {
        let syllables = syllables
            .into_iter()
            .filter_map(|s| {
                let e = reduce_exponent(graph.order(s.vertex), s.exponent);
                (e != 0).then_some(Syllable::new(s.vertex, e))
            })
            .collect();
        Word { graph, syllables }
    }

    pub fn from_letters(graph: Arc<GraphPresentation>, letters: &[Letter]) -> Self {
        let syl = letters.iter().map(|&(v, e)| Syllable::new(v, e as i64));
        Word::new(graph, syl)
    }

    /// Parses whitespace-separated tokens `v`, `v^k`, `v^-k`.
    pub fn parse(text: &str, graph: &Arc<GraphPresentation>) -> Result<Word, WordError> {
        let mut syllables = Vec::new();
        for (column, token) in tokens(text) {
            let (name, exponent) = match token.split_once('^') {
                None => (token, 1),
                Some((name, exp)) => {
                    let exp: i64 = exp.parse().map_err(|_| WordError::Malformed {
                        token: token.to_string(),
                        column,
                    })?;
                    (name, exp)
                }
            };
            if name.is_empty() {
                return Err(WordError::Malformed {
                    token: token.to_string(),
                    column,
                });
            }
            if exponent == 0 {
                return Err(WordError::ZeroExponent { column });
            }
            let vertex = graph.vertex(name).map_err(|_| WordError::UnknownVertex {
                name: name.to_string(),
                column,
            })?;
            syllables.push(Syllable::new(vertex, exponent));
        }
        Ok(Word::new(graph.clone(), syllables))
    }

    pub fn graph(&self) -> &Arc<GraphPresentation> {
        &self.graph
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Number of generator letters spelled by this word.
    pub fn letter_count(&self) -> u64 {
        self.syllables
            .iter()
            .map(|s| s.exponent.unsigned_abs())
            .sum()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_syllables(f, &self.graph, &self.syllables)
    }
}

/// Byte column of each whitespace-separated token.
fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - text.as_ptr() as usize, tok))
}

/// The canonical geodesic representative of a group element.
///
/// Equality, hashing and ordering look only at the syllables; comparing
/// normal forms from different presentations is meaningless.
#[derive(Debug, Clone)]
pub struct NormalForm {
    graph: Arc<GraphPresentation>,
    syllables: Vec<Syllable>,
    length: u64,
}

impl PartialEq for NormalForm {
    fn eq(&self, other: &Self) -> bool {
        self.syllables == other.syllables
    }
}

impl Eq for NormalForm {}

impl Hash for NormalForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.syllables.hash(state);
    }
}

/// ShortLex: length first, then letter sequence.
impl Ord for NormalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.length
            .cmp(&other.length)
            .then_with(|| self.letters().cmp(other.letters()))
    }
}

impl PartialOrd for NormalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_syllables(f, &self.graph, &self.syllables)
    }
}

impl Serialize for NormalForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl NormalForm {
    pub fn identity(graph: Arc<GraphPresentation>) -> Self {
        NormalForm {
            graph,
            syllables: Vec::new(),
            length: 0,
        }
    }

    pub fn generator(graph: Arc<GraphPresentation>, letter: Letter) -> Self {
        let (v, e) = letter;
        let e = reduce_exponent(graph.order(v), e as i64);
        if e == 0 {
            return NormalForm::identity(graph);
        }
        NormalForm {
            syllables: vec![Syllable::new(v, e)],
            length: 1,
            graph,
        }
    }

    /// Parses and normalizes in one step.
    pub fn parse(text: &str, graph: &Arc<GraphPresentation>) -> Result<Self, WordError> {
        Ok(normalize(&Word::parse(text, graph)?))
    }

    pub fn graph(&self) -> &Arc<GraphPresentation> {
        &self.graph
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// The canonical spelling as single letters.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.syllables.iter().flat_map(|s| {
            let n = match self.graph.order(s.vertex) {
                VertexOrder::Two => 1,
                VertexOrder::Infinite => s.exponent.unsigned_abs(),
            };
            std::iter::repeat_n((s.vertex, s.exponent.signum() as i8), n as usize)
        })
    }

    pub fn to_word(&self) -> Word {
        Word {
            graph: self.graph.clone(),
            syllables: self.syllables.clone(),
        }
    }

    pub fn multiply(&self, other: &NormalForm) -> Result<NormalForm, WordError> {
        multiply(self, other)
    }

    pub fn inverse(&self) -> NormalForm {
        invert(self)
    }
}

/// Canonical form of the group element spelled by `w`.
pub fn normalize(w: &Word) -> NormalForm {
    reduce(w.graph.clone(), w.syllables.iter().copied())
}

pub(crate) fn reduce(
    graph: Arc<GraphPresentation>,
    input: impl IntoIterator<Item = Syllable>,
) -> NormalForm {
    let n = graph.vertex_count();
    let mut arena: Vec<Option<Syllable>> = Vec::new();
    let mut piles: Vec<Vec<usize>> = vec![Vec::new(); n];

    for s in input {
        let v = s.vertex.index();
        let order = graph.order(s.vertex);
        let exponent = reduce_exponent(order, s.exponent);
        if exponent == 0 {
            continue;
        }
        let top = piles[v].last().copied().filter(|&top| {
            graph
                .blockers(v)
                .iter()
                .all(|&u| piles[u].last().is_none_or(|&p| p < top))
        });
        match top {
            Some(top) => {
                let slot = arena[top].as_mut().expect("pile tops are live");
                slot.exponent = reduce_exponent(order, slot.exponent + exponent);
                if slot.exponent == 0 {
                    arena[top] = None;
                    piles[v].pop();
                }
            }
            None => {
                piles[v].push(arena.len());
                arena.push(Some(Syllable::new(s.vertex, exponent)));
            }
        }
    }

    let live: Vec<Syllable> = arena.into_iter().flatten().collect();
    let syllables = linearize(&graph, &live);
    let length = syllables
        .iter()
        .map(|s| weight(graph.order(s.vertex), s.exponent))
        .sum();
    NormalForm {
        graph,
        syllables,
        length,
    }
}

/// ShortLex-least topological order of a reduced word's dependency order.
fn linearize(graph: &GraphPresentation, reduced: &[Syllable]) -> Vec<Syllable> {
    let n = graph.vertex_count();
    let mut queues: Vec<std::collections::VecDeque<usize>> = vec![Default::default(); n];
    for (i, s) in reduced.iter().enumerate() {
        queues[s.vertex.index()].push_back(i);
    }
    let mut out = Vec::with_capacity(reduced.len());
    while out.len() < reduced.len() {
        let next = (0..n)
            .find(|&v| {
                queues[v].front().is_some_and(|&i| {
                    graph
                        .blockers(v)
                        .iter()
                        .all(|&u| queues[u].front().is_none_or(|&j| j > i))
                })
            })
            .expect("a finite partial order always has a minimal element");
        let i = queues[next].pop_front().unwrap();
        out.push(reduced[i]);
    }
    out
}

pub fn multiply(x: &NormalForm, y: &NormalForm) -> Result<NormalForm, WordError> {
    if !same_graph(&x.graph, &y.graph) {
        return Err(WordError::GraphMismatch);
    }
    Ok(reduce(
        x.graph.clone(),
        x.syllables.iter().chain(&y.syllables).copied(),
    ))
}

pub fn invert(x: &NormalForm) -> NormalForm {
    reduce(
        x.graph.clone(),
        x.syllables
            .iter()
            .rev()
            .map(|s| Syllable::new(s.vertex, -s.exponent)),
    )
}

pub fn length(x: &NormalForm) -> u64 {
    x.length
}

/// Word problem: do `x` and `y` spell the same element?
pub fn equal(x: &Word, y: &Word) -> Result<bool, WordError> {
    if !same_graph(&x.graph, &y.graph) {
        return Err(WordError::GraphMismatch);
    }
    Ok(normalize(x) == normalize(y))
}

pub fn enumerate_elements(
    graph: &Arc<GraphPresentation>,
    max_lg: u64,
) -> Result<Vec<NormalForm>, WordError> {
    enumerate_elements_with_ceiling(graph, max_lg, DEFAULT_CEILING)
}

/// All elements with `lg <= max_lg`, sorted by (lg, ShortLex).
///
/// Every element of length `d` is `x * t` for some `x` of length `d - 1` and
/// generator letter `t`, so extending each sphere by one letter is complete.
pub fn enumerate_elements_with_ceiling(
    graph: &Arc<GraphPresentation>,
    max_lg: u64,
    ceiling: u64,
) -> Result<Vec<NormalForm>, WordError> {
    if max_lg > ceiling {
        return Err(WordError::CeilingExceeded {
            requested: max_lg,
            ceiling,
        });
    }
    let letters: Vec<NormalForm> = generator_letters(graph)
        .into_iter()
        .map(|t| NormalForm::generator(graph.clone(), t))
        .collect();
    let mut all = vec![NormalForm::identity(graph.clone())];
    let mut sphere = all.clone();
    for d in 1..=max_lg {
        let mut seen = HashSet::new();
        for x in &sphere {
            for t in &letters {
                let y = multiply(x, t).expect("same presentation");
                if y.length == d {
                    seen.insert(y);
                }
            }
        }
        let mut next: Vec<NormalForm> = seen.into_iter().collect();
        next.sort();
        all.extend(next.iter().cloned());
        sphere = next;
        if sphere.is_empty() {
            break;
        }
    }
    Ok(all)
}

/// Deterministic pseudorandom word of `letter_count` single letters.
///
/// The trivial presentation has no letters, so it always yields the empty word.
pub fn random_word(graph: &Arc<GraphPresentation>, letter_count: usize, seed: u64) -> Word {
    let letters = generator_letters(graph);
    if letters.is_empty() {
        return Word::new(graph.clone(), []);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked: Vec<Letter> = (0..letter_count)
        .map(|_| letters[rng.gen_range(0..letters.len())])
        .collect();
    Word::from_letters(graph.clone(), &picked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{standard_graph, StandardKind};

    fn g(kind: StandardKind, n: usize) -> Arc<GraphPresentation> {
        Arc::new(standard_graph(kind, n).unwrap())
    }

    fn nf(text: &str, graph: &Arc<GraphPresentation>) -> NormalForm {
        NormalForm::parse(text, graph).unwrap()
    }

    #[test]
    fn parse_tokens() {
        let f2 = g(StandardKind::Free, 2);
        let w = Word::parse("a b^-1", &f2).unwrap();
        assert_eq!(w.syllables().len(), 2);
        assert_eq!(w.syllables()[1].exponent, -1);
        assert_eq!(w.to_string(), "a b^-1");
        assert!(Word::parse("", &f2).unwrap().syllables().is_empty());
        assert_eq!(
            Word::parse("a a^0", &f2).unwrap_err(),
            WordError::ZeroExponent { column: 2 }
        );
        assert_eq!(
            Word::parse("a  q", &f2).unwrap_err(),
            WordError::UnknownVertex {
                name: "q".into(),
                column: 3
            }
        );
        assert!(matches!(
            Word::parse("a^x", &f2),
            Err(WordError::Malformed { column: 0, .. })
        ));
        assert!(matches!(
            Word::parse("^2", &f2),
            Err(WordError::Malformed { .. })
        ));
    }

    #[test]
    fn involution_exponents_reduce_mod_two() {
        let k2 = g(StandardKind::CoxeterComplete, 2);
        let w = Word::parse("a^-1 b^3 a^2", &k2).unwrap();
        assert_eq!(w.to_string(), "a b");
    }

    #[test]
    fn free_cancellation_and_shortlex() {
        let f2 = g(StandardKind::Free, 2);
        let e = nf("a a^-1", &f2);
        assert!(e.is_identity());
        assert_eq!(e.length(), 0);

        let z2 = g(StandardKind::Abelian, 2);
        let x = nf("b a", &z2);
        assert_eq!(x.to_string(), "a b");
        assert_eq!(x.length(), 2);
    }

    #[test]
    fn cancellation_across_commuting_letters() {
        let p3 = g(StandardKind::Path, 3);
        // b commutes with both a and c
        assert_eq!(nf("b a c b^-1", &p3).to_string(), "a c");
        assert_eq!(nf("a c a^-1 b", &p3).to_string(), "a b c a^-1");
        assert_eq!(nf("a b c b^-1 a^-1", &p3).to_string(), "a c a^-1");
        assert_eq!(nf("c a", &p3).to_string(), "c a");
    }

    #[test]
    fn multiply_and_invert() {
        let f2 = g(StandardKind::Free, 2);
        let a = nf("a", &f2);
        let ai = nf("a^-1", &f2);
        assert!(multiply(&a, &ai).unwrap().is_identity());
        let e = NormalForm::identity(f2.clone());
        let y = nf("b a^3", &f2);
        assert_eq!(multiply(&e, &y).unwrap(), y);
        let ab = nf("a b", &f2);
        let abab = multiply(&ab, &ab).unwrap();
        assert_eq!(abab.to_string(), "a b a b");
        assert_eq!(abab.length(), 4);
        assert_eq!(invert(&ab).to_string(), "b^-1 a^-1");
        assert!(invert(&e).is_identity());

        let k2 = g(StandardKind::CoxeterComplete, 2);
        assert_eq!(invert(&nf("a b", &k2)).to_string(), "a b");

        let other = g(StandardKind::Free, 3);
        assert_eq!(
            multiply(&a, &nf("a", &other)),
            Err(WordError::GraphMismatch)
        );
    }

    #[test]
    fn lengths() {
        let k2 = g(StandardKind::CoxeterComplete, 2);
        assert_eq!(nf("a b", &k2).length(), 2);
        let f1 = g(StandardKind::Free, 1);
        assert_eq!(nf("a^3", &f1).length(), 3);
        assert_eq!(length(&NormalForm::identity(f1)), 0);
    }

    #[test]
    fn word_problem() {
        let z2 = g(StandardKind::Abelian, 2);
        let f2 = g(StandardKind::Free, 2);
        let k2 = g(StandardKind::CoxeterComplete, 2);
        let w = |t: &str, gr: &Arc<GraphPresentation>| Word::parse(t, gr).unwrap();
        assert!(equal(&w("a b", &z2), &w("b a", &z2)).unwrap());
        assert!(!equal(&w("a b", &f2), &w("b a", &f2)).unwrap());
        // a b a = a a b = b in the Klein four-group
        assert!(equal(&w("a b a", &k2), &w("b", &k2)).unwrap());
    }

    #[test]
    fn enumerate_small_balls() {
        let f1 = g(StandardKind::Free, 1);
        let ball: Vec<String> = enumerate_elements(&f1, 2)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(ball, ["", "a^-1", "a", "a^-2", "a^2"]);

        let k2 = g(StandardKind::CoxeterComplete, 2);
        let ball: Vec<String> = enumerate_elements(&k2, 2)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(ball, ["", "a", "b", "a b"]);

        assert_eq!(
            enumerate_elements(&f1, 9).unwrap_err(),
            WordError::CeilingExceeded {
                requested: 9,
                ceiling: 8
            }
        );
    }

    #[test]
    fn random_words_are_deterministic() {
        let f2 = g(StandardKind::Free, 2);
        assert!(random_word(&f2, 0, 5).syllables().is_empty());
        let w1 = random_word(&f2, 3, 7);
        let w2 = random_word(&f2, 3, 7);
        assert_eq!(w1.syllables(), w2.syllables());
        assert_eq!(w1.letter_count(), 3);

        let k2 = g(StandardKind::CoxeterComplete, 2);
        let w = random_word(&k2, 5, 1);
        assert!(w.syllables().iter().all(|s| s.exponent == 1));
        assert_eq!(w.letter_count(), 5);
    }
}
