//! Word algebra for graph products of cyclic groups of order 2 or infinity:
//! right-angled Artin groups, right-angled Coxeter groups and their mixtures.
//!
//! * [`presentation`]: defining graphs and vertex orders.
//! * [`words`]: syllable words, canonical normal forms, the length function.
//! * [`calculus`]: cyclic decomposition, powers, roots.
//! * [`axioms`]: exhaustive checks of the power/length axioms.
//! * [`chain`]: replay of the equation chain `x_{n+1}^{eta(n)} = x_n g_n`.
//! * [`oracle`], [`suite`]: brute-force references and the acceptance suite.

pub mod axioms;
pub mod calculus;
pub mod chain;
pub mod corpus;
pub mod format;
pub mod oracle;
pub mod presentation;
pub mod suite;
pub mod words;

pub use calculus::{
    cyclic_decompose, power, power_length, roots, unique_root, CyclicDecomposition,
};
pub use presentation::{standard_graph, validate, GraphPresentation, StandardKind, VertexOrder};
pub use words::{normalize, NormalForm, Word};
