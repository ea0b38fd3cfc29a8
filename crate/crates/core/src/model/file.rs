//! The on-disk model format: a JSON document naming moments and agents,
//! with history indices referring to the canonical history table.
//!
//! Omitted `choice` entries default to the vacuous choice, omitted
//! neighborhood entries to ∅, omitted valuation entries to ∅.

use super::{ImaginationModel, ModelBuilder, ModelError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModelFile {
    pub agents: Vec<String>,
    pub moments: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub covers: Vec<(String, String)>,
    /// moment → agent → cells of history indices.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub choice: BTreeMap<String, BTreeMap<String, Vec<Vec<usize>>>>,
    /// agent → list of neighborhood entries.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub neighborhoods: BTreeMap<String, Vec<NeighborhoodEntry>>,
    /// variable → list of points.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub valuation: BTreeMap<String, Vec<(String, usize)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NeighborhoodEntry {
    /// The point the family is attached to.
    pub at: (String, usize),
    /// The family: each proposition is a list of points.
    pub props: Vec<Vec<(String, usize)>>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files serialize")
    }

    pub fn to_model(&self) -> Result<ImaginationModel, ModelError> {
        let mut b = ModelBuilder::new();
        for m in &self.moments {
            b = b.moment(m);
        }
        for (parent, child) in &self.covers {
            b = b.cover(parent, child);
        }
        for a in &self.agents {
            b = b.agent(a);
        }
        for (moment, per_agent) in &self.choice {
            for (agent, cells) in per_agent {
                b = b.choice(moment, agent, cells.clone());
            }
        }
        for (agent, entries) in &self.neighborhoods {
            for entry in entries {
                let props: Vec<Vec<(&str, usize)>> = entry
                    .props
                    .iter()
                    .map(|prop| prop.iter().map(|(m, h)| (m.as_str(), *h)).collect())
                    .collect();
                b = b.neighborhood(agent, (entry.at.0.as_str(), entry.at.1), props);
            }
        }
        for (var, points) in &self.valuation {
            let pts: Vec<(&str, usize)> =
                points.iter().map(|(m, h)| (m.as_str(), *h)).collect();
            b = b.valuate(var, pts);
        }
        b.build()
    }

    /// Canonical export: vacuous choices, empty families and empty
    /// valuations are omitted.
    pub fn from_model(model: &ImaginationModel) -> Self {
        let frame = &model.frame;
        let mut choice: BTreeMap<String, BTreeMap<String, Vec<Vec<usize>>>> = BTreeMap::new();
        for (a, agent) in model.agents.iter().enumerate() {
            for m in 0..frame.moments.len() {
                let cells = &model.choice.cells[a][m];
                let vacuous = cells.len() <= 1;
                if vacuous {
                    continue;
                }
                let as_indices: Vec<Vec<usize>> = cells
                    .iter()
                    .map(|cell| (0..64).filter(|h| cell >> h & 1 == 1).collect())
                    .collect();
                choice
                    .entry(frame.moments[m].as_str().to_string())
                    .or_default()
                    .insert(agent.as_str().to_string(), as_indices);
            }
        }

        let point_list = |mask: u64| -> Vec<(String, usize)> {
            (0..frame.points.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| {
                    let (m, h) = frame.points[i];
                    (frame.moments[m].as_str().to_string(), h)
                })
                .collect()
        };

        let mut neighborhoods: BTreeMap<String, Vec<NeighborhoodEntry>> = BTreeMap::new();
        for (a, agent) in model.agents.iter().enumerate() {
            let mut entries = Vec::new();
            for (p, family) in model.neighborhoods[a].iter().enumerate() {
                if family.is_empty() {
                    continue;
                }
                let (m, h) = frame.points[p];
                entries.push(NeighborhoodEntry {
                    at: (frame.moments[m].as_str().to_string(), h),
                    props: family.iter().map(|&mask| point_list(mask)).collect(),
                });
            }
            if !entries.is_empty() {
                neighborhoods.insert(agent.as_str().to_string(), entries);
            }
        }

        let valuation: BTreeMap<String, Vec<(String, usize)>> = model
            .valuation
            .iter()
            .filter(|(_, &mask)| mask != 0)
            .map(|(var, &mask)| (var.clone(), point_list(mask)))
            .collect();

        ModelFile {
            agents: model.agents.iter().map(|a| a.as_str().to_string()).collect(),
            moments: frame.moments.iter().map(|m| m.as_str().to_string()).collect(),
            covers: frame
                .covers
                .iter()
                .map(|&(a, b)| {
                    (
                        frame.moments[a].as_str().to_string(),
                        frame.moments[b].as_str().to_string(),
                    )
                })
                .collect(),
            choice,
            neighborhoods,
            valuation,
        }
    }
}

impl ImaginationModel {
    pub fn from_json(text: &str) -> Result<Self, ModelLoadError> {
        let file = ModelFile::from_json(text)?;
        Ok(file.to_model()?)
    }

    pub fn to_json(&self) -> String {
        ModelFile::from_model(self).to_json()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ModelLoadError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::AgentId;
    use crate::model::PointRef;

    const FORK: &str = r#"{
        "agents": ["a"],
        "moments": ["m0", "m1", "m2"],
        "covers": [["m0", "m1"], ["m0", "m2"]],
        "choice": {"m0": {"a": [[0], [1]]}},
        "neighborhoods": {"a": [{"at": ["m0", 0], "props": [[["m0", 0]]]}]},
        "valuation": {"p": [["m0", 0]]}
    }"#;

    #[test]
    fn load_fork() {
        let m = ImaginationModel::from_json(FORK).unwrap();
        assert_eq!(m.point_count(), 4);
        assert!(m.validate().is_clean());
        let family = m
            .neighborhood(&AgentId::from("a"), &PointRef::new("m0", 0))
            .unwrap();
        assert_eq!(family.len(), 1);
        assert_eq!(family[0].points(&m), vec![PointRef::new("m0", 0)]);
    }

    #[test]
    fn round_trip() {
        let m = ImaginationModel::from_json(FORK).unwrap();
        let again = ImaginationModel::from_json(&m.to_json()).unwrap();
        assert_eq!(ModelFile::from_model(&m), ModelFile::from_model(&again));
    }

    #[test]
    fn omitted_choice_is_vacuous() {
        let m = ImaginationModel::from_json(
            r#"{"agents": ["a"], "moments": ["m0", "m1"], "covers": [["m0", "m1"]]}"#,
        )
        .unwrap();
        assert_eq!(
            m.choice_cells(&"m0".into(), &AgentId::from("a")).unwrap(),
            vec![vec![0]]
        );
        assert!(m.validate().is_clean());
    }

    #[test]
    fn bad_history_index_is_error() {
        let err = ImaginationModel::from_json(
            r#"{"agents": ["a"], "moments": ["m0"], "valuation": {"p": [["m0", 2]]}}"#,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ModelLoadError::Model(ModelError::UnknownHistory { index: 2, count: 1 })
        ));
    }
}
