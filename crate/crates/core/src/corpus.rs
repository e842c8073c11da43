//! The built-in test corpus and loading of corpus directories.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::format::{parse_graph, FormatError};
use crate::presentation::{
    standard_graph, validate, GraphPresentation, RawPresentation, StandardKind, VertexOrder,
    VertexSpec,
};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub graph: Arc<GraphPresentation>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: FormatError,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown built-in graph `{0}`")]
    UnknownBuiltin(String),
}

/// Two infinite-order vertices and one involution `c` commuting with `a`.
pub fn mixed_graph() -> GraphPresentation {
    validate(&RawPresentation {
        vertices: vec![
            VertexSpec::new("a", VertexOrder::Infinite),
            VertexSpec::new("b", VertexOrder::Infinite),
            VertexSpec::new("c", VertexOrder::Two),
        ],
        edges: vec![["a".into(), "c".into()]],
    })
    .expect("fixed presentation is valid")
}

pub const BUILTIN_NAMES: [&str; 7] = [
    "free_1",
    "free_2",
    "abelian_2",
    "abelian_3",
    "path_3",
    "coxeter_K2",
    "mixed",
];

pub fn builtin(name: &str) -> Result<GraphPresentation, CorpusError> {
    let std = |kind, n| Ok(standard_graph(kind, n).expect("n >= 1"));
    match name {
        "free_1" => std(StandardKind::Free, 1),
        "free_2" => std(StandardKind::Free, 2),
        "abelian_2" => std(StandardKind::Abelian, 2),
        "abelian_3" => std(StandardKind::Abelian, 3),
        "path_3" => std(StandardKind::Path, 3),
        "coxeter_K2" => std(StandardKind::CoxeterComplete, 2),
        "mixed" => Ok(mixed_graph()),
        other => Err(CorpusError::UnknownBuiltin(other.to_string())),
    }
}

pub fn builtin_corpus() -> Vec<CorpusEntry> {
    BUILTIN_NAMES
        .iter()
        .map(|&name| CorpusEntry {
            name: name.to_string(),
            graph: Arc::new(builtin(name).expect("listed names resolve")),
        })
        .collect()
}

pub fn load_graph_file(path: &Path) -> Result<GraphPresentation, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_graph(&text).map_err(|source| CorpusError::File {
        path: path.to_path_buf(),
        source,
    })
}

/// Every `*.json` graph file in `dir`, sorted by file name.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let graph = load_graph_file(&p)?;
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(CorpusEntry {
                name,
                graph: Arc::new(graph),
            })
        })
        .collect()
}
