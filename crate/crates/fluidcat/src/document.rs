//! Space documents: the JSON input format.
//!
//! ```json
//! {"atoms": ["a", "b"], "metric": {"type": "matrix", "d": [[0, 1], [1, 0]]}}
//! {"metric": {"type": "euclidean", "coords": {"a": [0], "b": [1]}}}
//! ```
//!
//! An optional `"labels"` object maps atom names to natural-object labels;
//! without it every atom is labelled by its own name.

use std::path::Path;

use fluidcat_core::natural::Reconstruction;
use fluidcat_core::InfoSpace;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<String>>,
    pub metric: Metric,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Map<String, Value>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Metric {
    Matrix {
        d: Vec<Vec<f64>>,
    },
    /// Keys keep their document order.
    Euclidean {
        coords: Map<String, Value>,
    },
}

/// A parsed space together with its reconstruction labels.
#[derive(Debug, Clone)]
pub struct LoadedSpace {
    pub space: InfoSpace,
    pub labels: Reconstruction,
}

impl SpaceDocument {
    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::MalformedDocument(e.to_string()))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    /// The matrix form of an existing space.
    pub fn from_space(space: &InfoSpace) -> Self {
        let d = space.atoms().map(|a| space.atoms().map(|b| space.dist(a, b)).collect()).collect();
        Self { atoms: Some(space.names().to_vec()), metric: Metric::Matrix { d }, labels: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }

    pub fn load(&self) -> CliResult<LoadedSpace> {
        let space = match &self.metric {
            Metric::Matrix { d } => {
                let atoms = self
                    .atoms
                    .as_ref()
                    .ok_or_else(|| CliError::MalformedDocument("a matrix metric needs an \"atoms\" list".into()))?;
                InfoSpace::from_matrix(atoms, d)?
            }
            Metric::Euclidean { coords } => euclidean(self.atoms.as_deref(), coords)?,
        };
        let labels = match &self.labels {
            None => Reconstruction::identity(&space),
            Some(map) => {
                let pairs = map
                    .iter()
                    .map(|(atom, label)| match label {
                        Value::String(l) => Ok((atom.clone(), l.clone())),
                        other => Err(CliError::MalformedDocument(format!("label of {atom} is not a string: {other}"))),
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Reconstruction::from_pairs(&space, &pairs)?
            }
        };
        Ok(LoadedSpace { space, labels })
    }
}

fn euclidean(atoms: Option<&[String]>, coords: &Map<String, Value>) -> CliResult<InfoSpace> {
    let names: Vec<String> = match atoms {
        Some(list) => list.to_vec(),
        None => coords.keys().cloned().collect(),
    };
    if names.len() != coords.len() {
        return Err(CliError::MalformedDocument(format!(
            "{} atoms but {} coordinate entries",
            names.len(),
            coords.len()
        )));
    }
    let points = names
        .iter()
        .map(|name| {
            let value = coords
                .get(name)
                .ok_or_else(|| CliError::MalformedDocument(format!("no coordinates for atom {name}")))?;
            Vec::<f64>::deserialize(value)
                .map_err(|e| CliError::MalformedDocument(format!("coordinates of {name}: {e}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let dim = points.first().map_or(0, Vec::len);
    if let Some((name, _)) = names.iter().zip(&points).find(|(_, p)| p.len() != dim) {
        return Err(CliError::MalformedDocument(format!("coordinates of {name} have the wrong dimension")));
    }
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| points.iter().map(|q| p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()).collect())
        .collect();
    Ok(InfoSpace::from_matrix(&names, &rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_and_euclidean_agree() {
        let m =
            SpaceDocument::parse(r#"{"atoms":["a","b","c"],"metric":{"type":"matrix","d":[[0,1,3],[1,0,2],[3,2,0]]}}"#)
                .unwrap()
                .load()
                .unwrap();
        let e = SpaceDocument::parse(r#"{"metric":{"type":"euclidean","coords":{"a":[0],"b":[1],"c":[3]}}}"#)
            .unwrap()
            .load()
            .unwrap();
        assert_eq!(m.space, e.space);
        assert_eq!(m.labels.label(fluidcat_core::AtomId(1)), Some("b"));
    }

    #[test]
    fn euclidean_keeps_key_order() {
        let doc = SpaceDocument::parse(r#"{"metric":{"type":"euclidean","coords":{"z":[0,0],"a":[3,4]}}}"#).unwrap();
        let s = doc.load().unwrap().space;
        assert_eq!(s.names(), ["z", "a"]);
        assert_eq!(s.dist(fluidcat_core::AtomId(0), fluidcat_core::AtomId(1)), 5.0);
    }

    #[test]
    fn labels_are_read() {
        let doc = SpaceDocument::parse(
            r#"{"atoms":["a","b"],"metric":{"type":"matrix","d":[[0,1],[1,0]]},"labels":{"a":"x","b":"x"}}"#,
        )
        .unwrap();
        let loaded = doc.load().unwrap();
        assert_eq!(loaded.labels.label(fluidcat_core::AtomId(1)), Some("x"));
    }

    #[test]
    fn malformed_inputs() {
        for text in [
            "not json",
            r#"{"metric":{"type":"matrix","d":[[0]]}}"#,
            r#"{"atoms":["a"],"metric":{"type":"cosine"}}"#,
            r#"{"metric":{"type":"euclidean","coords":{"a":[0],"b":[1,2]}}}"#,
            r#"{"atoms":["a"],"metric":{"type":"euclidean","coords":{"b":[0]}}}"#,
            r#"{"atoms":["a","b"],"metric":{"type":"matrix","d":[[0,1],[1,0]]},"labels":{"a":3}}"#,
        ] {
            let err = SpaceDocument::parse(text).and_then(|d| d.load().map(|_| ()));
            assert!(err.is_err(), "{text}");
            assert_eq!(err.unwrap_err().exit_code(), 2);
        }
        let asym = SpaceDocument::parse(r#"{"atoms":["a","b"],"metric":{"type":"matrix","d":[[0,1],[2,0]]}}"#).unwrap();
        assert!(matches!(asym.load(), Err(CliError::Core(fluidcat_core::Error::AsymmetricMetric(..)))));
    }

    #[test]
    fn roundtrip_through_matrix_form() {
        let s = InfoSpace::from_line(&["a", "b", "c"], &[0.0, 1.5, 4.0]).unwrap();
        let doc = SpaceDocument::parse(&SpaceDocument::from_space(&s).to_json()).unwrap();
        assert_eq!(doc.load().unwrap().space, s);
    }
}
