//! Reading reference data and snapshots from disk, with failures sorted into
//! "could not read or parse" and "parsed but invalid".

use std::fs;
use std::path::{Path, PathBuf};

use argudas_core::mapping::{AnatomyAlignment, MappingError};
use argudas_core::ontology::{load_ontology, AnatomyGraph, OntologyError};
use argudas_core::schemes::{parse_scheme_catalog, SchemeCatalog, SchemeError};
use argudas_core::store::{Store, StoreError};
use argudas_core::ThresholdTable;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
}

impl LoadError {
    fn parse(path: &Path, e: impl ToString) -> Self {
        Self::Parse {
            path: path.to_owned(),
            message: e.to_string(),
        }
    }

    fn invalid(path: &Path, e: impl ToString) -> Self {
        Self::Invalid {
            path: path.to_owned(),
            message: e.to_string(),
        }
    }

    /// 2 for unreadable or malformed files, 3 for validation failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Read { .. } | Self::Parse { .. } => 2,
            Self::Invalid { .. } => 3,
        }
    }
}

pub fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|e| LoadError::Read {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

pub fn ontology(path: &Path) -> Result<AnatomyGraph, LoadError> {
    load_ontology(&read(path)?).map_err(|e| match e {
        OntologyError::Parse(_) => LoadError::parse(path, e),
        _ => LoadError::invalid(path, e),
    })
}

fn mapping_error(path: &Path, e: MappingError) -> LoadError {
    match e {
        MappingError::Parse(_) => LoadError::parse(path, e),
        _ => LoadError::invalid(path, e),
    }
}

pub fn alignment(path: &Path) -> Result<AnatomyAlignment, LoadError> {
    AnatomyAlignment::parse(&read(path)?).map_err(|e| mapping_error(path, e))
}

pub fn thresholds(path: &Path) -> Result<ThresholdTable, LoadError> {
    ThresholdTable::parse(&read(path)?).map_err(|e| mapping_error(path, e))
}

pub fn schemes(path: &Path) -> Result<SchemeCatalog, LoadError> {
    parse_scheme_catalog(&read(path)?).map_err(|e| match e {
        SchemeError::Parse(_) => LoadError::parse(path, e),
        _ => LoadError::invalid(path, e),
    })
}

pub fn write_schemes(path: &Path, catalog: &SchemeCatalog) -> Result<(), LoadError> {
    let text = serde_json::to_string_pretty(catalog.schemes()).expect("catalog serialises") + "\n";
    fs::write(path, text).map_err(|e| LoadError::Read {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

/// Files that make up an empty store.
#[derive(Debug, Clone, Default)]
pub struct Sources {
    pub ontologies: Vec<PathBuf>,
    pub alignment: Option<PathBuf>,
    pub thresholds: Option<PathBuf>,
    pub schemes: Option<PathBuf>,
}

impl Sources {
    /// Builds a store without annotations. Missing alignment or thresholds
    /// mean empty tables; missing schemes mean the bundled catalog.
    pub fn build(&self) -> Result<Store, LoadError> {
        let graphs = self
            .ontologies
            .iter()
            .map(|p| ontology(p))
            .collect::<Result<Vec<_>, _>>()?;
        let alignment = self
            .alignment
            .as_deref()
            .map(alignment)
            .transpose()?
            .unwrap_or_default();
        let thresholds = self
            .thresholds
            .as_deref()
            .map(thresholds)
            .transpose()?
            .unwrap_or_default();
        let catalog = match &self.schemes {
            Some(p) => schemes(p)?,
            None => SchemeCatalog::default_catalog(),
        };
        Store::new(graphs, alignment, thresholds, catalog).map_err(|e| {
            let first = self.ontologies.first().cloned().unwrap_or_default();
            LoadError::invalid(&first, e)
        })
    }
}

/// Ingests an annotation file into `store`.
pub fn ingest(store: &mut Store, path: &Path) -> Result<argudas_core::ingest::IngestReport, LoadError> {
    let text = read(path)?;
    store.ingest(&text).map_err(|e| match e {
        StoreError::Ingest(_) | StoreError::Parse(_) => LoadError::parse(path, e),
        _ => LoadError::invalid(path, e),
    })
}

pub fn snapshot(path: &Path) -> Result<Store, LoadError> {
    let text = read(path)?;
    Store::from_json(&text).map_err(|e| match e {
        StoreError::Parse(_) => LoadError::parse(path, e),
        _ => LoadError::invalid(path, e),
    })
}

pub fn save_snapshot(store: &Store, path: &Path) -> Result<(), LoadError> {
    store.save(path).map_err(|e| LoadError::Read {
        path: path.to_owned(),
        message: e.to_string(),
    })
}
