//! Co-crystal records, pair featurization, feature selection and splits.

mod features;
mod select;
mod split;

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

pub use features::{
    engineer_features, featurize, pair_feature_names, swapped_column, FeatureMatrix, PairFeatures,
    PAIR_WIDTH, RAW_WIDTH,
};
pub use select::{correlation_filter, pearson, select_features, Selection};
pub use split::{split, SplitMode, SplitSpec};

use crate::molgraph::{parse_smiles, Molecule};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing column {0:?}")]
    MissingColumn(&'static str),
    #[error("{rejected} of {total} rows unusable (more than 10%)")]
    TooManyRejected { rejected: usize, total: usize },
    #[error("non-finite feature {column} in row {row}")]
    NonFinite { row: usize, column: String },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("need at least {need} records, got {got}")]
    TooFewRecords { need: usize, got: usize },
    #[error("unknown task {0:?}")]
    UnknownTask(String),
}

/// The three plasticity labels, in file column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Task {
    Unobstructed,
    Orthogonal,
    HBondBridging,
}

impl Task {
    pub const ALL: [Task; 3] = [Task::Unobstructed, Task::Orthogonal, Task::HBondBridging];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn code(self) -> char {
        ['u', 'o', 'h'][self.index()]
    }

    pub fn column(self) -> &'static str {
        ["unobstructed", "orthogonal", "h_bond_bridging"][self.index()]
    }

    /// Number of features retained after selection.
    pub fn selected_features(self) -> usize {
        [29, 24, 30][self.index()]
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

impl FromStr for Task {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Task, DatasetError> {
        Task::ALL
            .into_iter()
            .find(|t| s == t.column() || s.len() == 1 && s.starts_with(t.code()))
            .ok_or_else(|| DatasetError::UnknownTask(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct CocrystalRecord {
    pub smiles_a: String,
    pub smiles_b: String,
    pub mol_a: Molecule,
    pub mol_b: Molecule,
    pub labels: [bool; 3],
}

impl CocrystalRecord {
    pub fn label(&self, task: Task) -> bool {
        self.labels[task.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// 1-based line number in the file, header included.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub records: Vec<CocrystalRecord>,
    pub rejected: Vec<Rejection>,
}

impl LoadedDataset {
    pub fn labels(&self, task: Task) -> Vec<bool> {
        self.records.iter().map(|r| r.label(task)).collect()
    }
}

const COLUMNS: [&str; 5] = [
    "smiles_a",
    "smiles_b",
    "unobstructed",
    "orthogonal",
    "h_bond_bridging",
];

pub fn load_dataset(path: impl AsRef<Path>) -> Result<LoadedDataset, DatasetError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_dataset(file)
}

fn parse_row(row: &csv::StringRecord, cols: &[usize; 5]) -> Result<CocrystalRecord, String> {
    let field = |k: usize| {
        row.get(cols[k])
            .map(str::trim)
            .ok_or("short row".to_string())
    };
    let smiles_a = field(0)?.to_string();
    let smiles_b = field(1)?.to_string();
    let mol_a = parse_smiles(&smiles_a).map_err(|e| format!("smiles_a: {e}"))?;
    let mol_b = parse_smiles(&smiles_b).map_err(|e| format!("smiles_b: {e}"))?;
    let mut labels = [false; 3];
    for (k, label) in labels.iter_mut().enumerate() {
        *label = match field(2 + k)? {
            "0" => false,
            "1" => true,
            other => return Err(format!("{}: label {other:?} not 0/1", COLUMNS[2 + k])),
        };
    }
    Ok(CocrystalRecord {
        smiles_a,
        smiles_b,
        mol_a,
        mol_b,
        labels,
    })
}

/// Parses CSV text with the five dataset columns (any order, extra columns
/// ignored). Bad rows are skipped and reported; more than 10% bad rows is
/// an error.
pub fn read_dataset(reader: impl Read) -> Result<LoadedDataset, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let header = rdr.headers()?.clone();
    let mut cols = [0usize; 5];
    for (slot, name) in cols.iter_mut().zip(COLUMNS) {
        *slot = header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or(DatasetError::MissingColumn(name))?;
    }
    let mut records = Vec::new();
    let mut rejected = Vec::new();
    for (k, row) in rdr.records().enumerate() {
        let line = k + 2;
        let parsed = row
            .map_err(|e| e.to_string())
            .and_then(|r| parse_row(&r, &cols));
        match parsed {
            Ok(rec) => records.push(rec),
            Err(reason) => {
                log::warn!("dataset line {line} skipped: {reason}");
                rejected.push(Rejection { line, reason });
            }
        }
    }
    let total = records.len() + rejected.len();
    if rejected.len() * 10 > total {
        return Err(DatasetError::TooManyRejected {
            rejected: rejected.len(),
            total,
        });
    }
    Ok(LoadedDataset { records, rejected })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "smiles_a,smiles_b,unobstructed,orthogonal,h_bond_bridging\n";

    #[test]
    fn small_fixture() {
        let text = format!(
            "{HEADER}CCO,OC(=O)C=CC(=O)O,1,0,1\nc1ccccc1,CC(N)=O,0,0,0\nCCN,CCC,1,1,1\n\
             O=C(O)c1ccccc1,NC(N)=O,0,1,0\nCC(C)O,OCCO,1,1,0\n"
        );
        let d = read_dataset(text.as_bytes()).unwrap();
        assert_eq!(d.records.len(), 5);
        assert!(d.rejected.is_empty());
        assert_eq!(d.records[0].labels, [true, false, true]);
        assert_eq!(
            d.labels(Task::Orthogonal),
            vec![false, false, true, true, true]
        );
    }

    #[test]
    fn rejects_bad_rows() {
        let mut text = HEADER.to_string();
        for _ in 0..19 {
            text.push_str("CCO,CCN,1,0,1\n");
        }
        text.push_str("CCO,CCN,2,0,1\n");
        let d = read_dataset(text.as_bytes()).unwrap();
        assert_eq!(d.records.len(), 19);
        assert_eq!(d.rejected.len(), 1);
        assert_eq!(d.rejected[0].line, 21);

        text.push_str("CCO,C1CC,1,0,1\nCCO,CCN,1,0\n");
        assert!(matches!(
            read_dataset(text.as_bytes()),
            Err(DatasetError::TooManyRejected {
                rejected: 3,
                total: 22
            })
        ));
    }

    #[test]
    fn missing_column() {
        let text = "smiles_a,smiles_b,unobstructed,orthogonal\nCCO,CCN,1,0\n";
        assert!(matches!(
            read_dataset(text.as_bytes()),
            Err(DatasetError::MissingColumn("h_bond_bridging"))
        ));
        assert!(load_dataset("/nonexistent/file.csv").is_err());
    }

    #[test]
    fn task_names() {
        for t in Task::ALL {
            assert_eq!(t.column().parse::<Task>().unwrap(), t);
            assert_eq!(t.code().to_string().parse::<Task>().unwrap(), t);
        }
        assert!("x".parse::<Task>().is_err());
    }
}
