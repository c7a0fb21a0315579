use std::collections::HashMap;
use std::io::Write;
use std::sync::OnceLock;

use rayon::prelude::*;

use super::{CocrystalRecord, DatasetError};
use crate::descriptors::{
    compute_descriptors, DescriptorVector, DESCRIPTOR_COUNT, DESCRIPTOR_NAMES,
};

/// Raw block: A descriptors then B descriptors.
pub const RAW_WIDTH: usize = 2 * DESCRIPTOR_COUNT;
/// Raw block followed by the sum block and the mean block.
pub const PAIR_WIDTH: usize = 4 * DESCRIPTOR_COUNT;

/// Column names of the pair feature vector: `a:`, `b:`, `sum:` and `mean:`
/// prefixes over the descriptor catalog.
pub fn pair_feature_names() -> &'static [String] {
    static NAMES: OnceLock<Vec<String>> = OnceLock::new();
    NAMES.get_or_init(|| {
        ["a", "b", "sum", "mean"]
            .iter()
            .flat_map(|p| DESCRIPTOR_NAMES.iter().map(move |d| format!("{p}:{d}")))
            .collect()
    })
}

/// The column holding the same quantity after exchanging A and B.
pub fn swapped_column(j: usize) -> usize {
    match j {
        j if j < DESCRIPTOR_COUNT => j + DESCRIPTOR_COUNT,
        j if j < RAW_WIDTH => j - DESCRIPTOR_COUNT,
        j => j,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairFeatures {
    values: Vec<f64>,
}

impl PairFeatures {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn raw(&self) -> &[f64] {
        &self.values[..RAW_WIDTH]
    }

    pub fn engineered(&self) -> &[f64] {
        &self.values[RAW_WIDTH..]
    }
}

pub fn engineer_features(a: &DescriptorVector, b: &DescriptorVector) -> PairFeatures {
    let (a, b) = (a.values(), b.values());
    let mut values = Vec::with_capacity(PAIR_WIDTH);
    values.extend_from_slice(a);
    values.extend_from_slice(b);
    values.extend(a.iter().zip(b).map(|(x, y)| x + y));
    values.extend(a.iter().zip(b).map(|(x, y)| (x + y) / 2.0));
    PairFeatures { values }
}

/// Dense row-major matrix with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    names: Vec<String>,
    data: Vec<f64>,
    rows: usize,
}

impl FeatureMatrix {
    pub fn new(names: Vec<String>, data: Vec<f64>) -> Result<Self, DatasetError> {
        if names.is_empty() || !data.len().is_multiple_of(names.len()) {
            return Err(DatasetError::Shape(format!(
                "{} values for {} columns",
                data.len(),
                names.len()
            )));
        }
        let rows = data.len() / names.len();
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(DatasetError::NonFinite {
                row: k / names.len(),
                column: names[k % names.len()].clone(),
            });
        }
        Ok(FeatureMatrix { names, data, rows })
    }

    pub fn from_rows(names: Vec<String>, rows: &[Vec<f64>]) -> Result<Self, DatasetError> {
        if let Some(r) = rows.iter().find(|r| r.len() != names.len()) {
            return Err(DatasetError::Shape(format!(
                "row of {} values for {} columns",
                r.len(),
                names.len()
            )));
        }
        FeatureMatrix::new(names, rows.concat())
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.names.len();
        &self.data[i * w..(i + 1) * w]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.names.len() + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn select_columns(&self, cols: &[usize]) -> FeatureMatrix {
        let data = (0..self.rows)
            .flat_map(|i| cols.iter().map(move |&j| self.get(i, j)))
            .collect();
        FeatureMatrix {
            names: cols.iter().map(|&j| self.names[j].clone()).collect(),
            data,
            rows: self.rows,
        }
    }

    /// Columns looked up by name, in the order given.
    pub fn select_named(&self, names: &[String]) -> Result<FeatureMatrix, DatasetError> {
        let cols = names
            .iter()
            .map(|n| {
                self.column_index(n)
                    .ok_or_else(|| DatasetError::Shape(format!("no column {n:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.select_columns(&cols))
    }

    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            names: self.names.clone(),
            data: rows
                .iter()
                .flat_map(|&i| self.row(i).iter().copied())
                .collect(),
            rows: rows.len(),
        }
    }

    /// Same rows with every A column exchanged with its B column.
    pub fn swapped(&self) -> FeatureMatrix {
        let cols: Vec<usize> = (0..self.n_cols())
            .map(|j| {
                let mate = self.names[j]
                    .strip_prefix("a:")
                    .map(|d| format!("b:{d}"))
                    .or_else(|| self.names[j].strip_prefix("b:").map(|d| format!("a:{d}")));
                mate.and_then(|m| self.column_index(&m)).unwrap_or(j)
            })
            .collect();
        let mut out = self.select_columns(&cols);
        out.names = self.names.clone();
        out
    }

    /// Stacks `other` below `self`; column names must agree.
    pub fn vstack(&self, other: &FeatureMatrix) -> Result<FeatureMatrix, DatasetError> {
        if self.names != other.names {
            return Err(DatasetError::Shape("column names differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FeatureMatrix {
            names: self.names.clone(),
            data,
            rows: self.rows + other.rows,
        })
    }

    pub fn write_csv(&self, out: impl Write) -> Result<(), DatasetError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.names)?;
        for i in 0..self.rows {
            w.write_record(self.row(i).iter().map(|v| v.to_string()))?;
        }
        w.flush().map_err(|source| DatasetError::Io {
            path: "<csv output>".into(),
            source,
        })
    }

    /// "index<TAB>name" lines for every column.
    pub fn manifest(&self) -> String {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| format!("{i}\t{n}\n"))
            .collect()
    }
}

/// Pair features for every record, A = `smiles_a`. Descriptors are computed
/// once per distinct SMILES.
pub fn featurize(records: &[CocrystalRecord]) -> Result<FeatureMatrix, DatasetError> {
    let mut unique: Vec<(&str, &crate::molgraph::Molecule)> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for r in records {
        for (s, m) in [(&r.smiles_a, &r.mol_a), (&r.smiles_b, &r.mol_b)] {
            index.entry(s.as_str()).or_insert_with(|| {
                unique.push((s.as_str(), m));
                unique.len() - 1
            });
        }
    }
    let desc: Vec<DescriptorVector> = unique
        .par_iter()
        .map(|(_, m)| compute_descriptors(m))
        .collect();
    let data: Vec<f64> = records
        .iter()
        .flat_map(|r| {
            engineer_features(
                &desc[index[r.smiles_a.as_str()]],
                &desc[index[r.smiles_b.as_str()]],
            )
            .values
        })
        .collect();
    FeatureMatrix::new(pair_feature_names().to_vec(), data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molgraph::parse_smiles;

    fn d(s: &str) -> DescriptorVector {
        compute_descriptors(&parse_smiles(s).unwrap())
    }

    #[test]
    fn blocks() {
        let (a, b) = (d("CCO"), d("OC(=O)C=CC(=O)O"));
        let f = engineer_features(&a, &b);
        assert_eq!(f.values().len(), PAIR_WIDTH);
        for k in 0..DESCRIPTOR_COUNT {
            assert_eq!(f.engineered()[k], a[k] + b[k]);
            assert_eq!(f.engineered()[DESCRIPTOR_COUNT + k], (a[k] + b[k]) / 2.0);
        }
        let same = engineer_features(&a, &a);
        for k in 0..DESCRIPTOR_COUNT {
            assert_eq!(same.engineered()[k], 2.0 * a[k]);
            assert_eq!(same.engineered()[DESCRIPTOR_COUNT + k], a[k]);
        }
        assert_eq!(engineer_features(&b, &a).engineered(), f.engineered());
    }

    #[test]
    fn names_and_swap() {
        let names = pair_feature_names();
        assert_eq!(names.len(), PAIR_WIDTH);
        assert_eq!(names[0], "a:molecular_weight");
        assert_eq!(names[swapped_column(0)], "b:molecular_weight");
        assert_eq!(swapped_column(swapped_column(50)), 50);
        assert_eq!(swapped_column(100), 100);
    }

    #[test]
    fn matrix_ops() {
        let names: Vec<String> = ["a:x", "b:x", "sum:x"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let m =
            FeatureMatrix::from_rows(names, &[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 9.0]]).unwrap();
        assert_eq!(m.swapped().row(1), &[5.0, 4.0, 9.0]);
        assert_eq!(m.select_columns(&[2, 0]).row(0), &[3.0, 1.0]);
        assert_eq!(m.select_rows(&[1]).row(0), m.row(1));
        assert_eq!(m.vstack(&m).unwrap().n_rows(), 4);
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "a:x,b:x,sum:x\n1,2,3\n4,5,9\n"
        );
        assert!(FeatureMatrix::new(vec!["x".into()], vec![f64::NAN]).is_err());
    }
}
