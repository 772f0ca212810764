//! Knot table shipped with the crate, one JSON record per line.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};

const BUNDLED: &str = include_str!("../data/rolfsen.jsonl");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("cannot read catalog: {0}")]
    Io(#[from] std::io::Error),
    #[error("no knot named `{0}` in the catalog")]
    UnknownName(String),
    #[error("record `{name}`: {source}")]
    BadDiagram { name: String, source: DiagramError },
}

/// Reference values are standard table facts, used as regression targets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub pd: String,
    pub det: u64,
    pub genus: u32,
    pub fibered: bool,
}

impl KnotRecord {
    pub fn diagram(&self) -> Result<Diagram, CatalogError> {
        Diagram::parse_pd(&self.pd).map_err(|source| CatalogError::BadDiagram { name: self.name.clone(), source })
    }

    /// Two-bridge knots in the table, from their names.
    pub fn is_two_bridge(&self) -> bool {
        TWO_BRIDGE.contains(&self.name.as_str())
    }
}

// Rolfsen knots through eight crossings with bridge number 2
const TWO_BRIDGE: &[&str] = &[
    "3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "6_3", "7_1", "7_2", "7_3", "7_4", "7_5", "7_6", "7_7", "8_1", "8_2",
    "8_3", "8_4", "8_6", "8_7", "8_8", "8_9", "8_11", "8_12", "8_13", "8_14",
];

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    records: Vec<KnotRecord>,
}

impl Catalog {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled catalog is well formed")
    }

    /// Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let records = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| serde_json::from_str(l).map_err(|source| CatalogError::Json { line: i + 1, source }))
            .collect::<Result<_, _>>()?;
        Ok(Self { records })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CatalogError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn records(&self) -> &[KnotRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, name: &str) -> Result<&KnotRecord, CatalogError> {
        self.records
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| CatalogError::UnknownName(name.to_string()))
    }

    pub fn to_jsonl(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("plain record") + "\n")
            .collect()
    }
}

/// Braid word whose closure is the torus knot `T(p, q)`, `(σ_1 ⋯ σ_{p-1})^q`.
pub fn torus_braid(p: usize, q: usize) -> Vec<i64> {
    (0..q).flat_map(|_| 1..p as i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_catalog() {
        let c = Catalog::bundled();
        assert!(c.len() >= 36);
        assert_eq!(c.get("0_1").unwrap().det, 1);
        assert_eq!(c.get("8_19").unwrap().det, 3);
        assert!(matches!(c.get("9_42"), Err(CatalogError::UnknownName(_))));
        for r in c.records() {
            let d = r.diagram().unwrap();
            assert!(d.is_knot(), "{}", r.name);
        }
    }

    #[test]
    fn jsonl_roundtrip_and_errors() {
        let c = Catalog::bundled();
        assert_eq!(Catalog::parse(&c.to_jsonl()).unwrap().records(), c.records());
        assert!(Catalog::parse("").unwrap().is_empty());
        assert!(matches!(Catalog::parse("\n{nope}"), Err(CatalogError::Json { line: 2, .. })));
    }

    #[test]
    fn torus_words() {
        assert_eq!(torus_braid(2, 3), vec![1, 1, 1]);
        assert_eq!(torus_braid(3, 4), vec![1, 2, 1, 2, 1, 2, 1, 2]);
    }
}
