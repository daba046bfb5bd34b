//! JSON input formats.
//!
//! * instance: `{"probs": [p_0, ...], "partitions": [[[atoms], ...], ...],
//!   "dim": d, "terms": [[[x_j(atom)], ...], ...]}` with 0-based atoms,
//!   partitions finest first and `terms[j-1][atom]` a vector of length `d`;
//! * chain: `{"states": [names], "pi": [optional], "Q": [[row], ...]}`;
//! * observable: `{"dim": d, "values": [[f(state)], ...]}`;
//! * explicit weights: a JSON array `[a_1, a_2, ...]`.

use std::fs;
use std::path::Path;

use maxineq_core::finite_prob::{AdaptedSequence, DecreasingFiltration, FilteredSpace, FiniteProbSpace, RandomVector};
use maxineq_core::inequalities::Instance;
use maxineq_core::markov::{Observable, ReversibleChain};
use maxineq_core::Error as CoreError;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub probs: Vec<f64>,
    pub partitions: Vec<Vec<Vec<usize>>>,
    pub dim: usize,
    pub terms: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<f64>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableFile {
    pub dim: usize,
    pub values: Vec<Vec<f64>>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Field name for a core validation error, so messages point at the input.
fn instance_field(err: &CoreError) -> String {
    match err {
        CoreError::NonPositiveProbability { atom, .. } => format!("probs[{atom}]"),
        CoreError::ProbabilitySum { .. } => "probs".into(),
        CoreError::InvalidPartition { level, .. } => format!("partitions[{}]", level - 1),
        CoreError::NotCoarsening { level, block, .. } => format!("partitions[{}][{block}]", level - 1),
        CoreError::NotAdapted { term, block } => format!("terms[{}] (block {block})", term - 1),
        _ => "instance".into(),
    }
}

impl InstanceFile {
    pub fn load(path: &Path) -> CliResult<Instance> {
        read_json::<Self>(path)?.into_instance(path)
    }

    pub fn into_instance(self, path: &Path) -> CliResult<Instance> {
        let wrap = |e: CoreError| CliError::field(path, instance_field(&e), &e);
        let space = FiniteProbSpace::new(self.probs).map_err(wrap)?;
        let atoms = space.atoms();
        let filtration = DecreasingFiltration::from_blocks(atoms, self.partitions).map_err(wrap)?;
        if self.dim == 0 {
            return Err(CliError::field(path, "dim", "must be positive"));
        }
        if self.terms.is_empty() {
            return Err(CliError::field(path, "terms", "at least one term is required"));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (j, rows) in self.terms.iter().enumerate() {
            if rows.len() != atoms {
                return Err(CliError::field(
                    path,
                    format!("terms[{j}]"),
                    format!("has {} atoms, expected {atoms}", rows.len()),
                ));
            }
            if let Some((a, _)) = rows.iter().enumerate().find(|(_, v)| v.len() != self.dim) {
                return Err(CliError::field(path, format!("terms[{j}][{a}]"), format!("length must equal dim = {}", self.dim)));
            }
            terms.push(RandomVector::from_rows(rows).map_err(|e| CliError::field(path, format!("terms[{j}]"), e))?);
        }
        let sequence = AdaptedSequence::new(&filtration, terms).map_err(wrap)?;
        let space = FilteredSpace::new(space, filtration).map_err(wrap)?;
        Ok(Instance::new(space, sequence, 0))
    }

    pub fn from_instance(instance: &Instance) -> Self {
        let space = instance.space.space();
        Self {
            probs: space.probs().to_vec(),
            partitions: instance
                .space
                .filtration()
                .partitions()
                .iter()
                .map(|p| p.blocks().to_vec())
                .collect(),
            dim: instance.sequence.dim(),
            terms: instance
                .sequence
                .terms()
                .iter()
                .map(|t| (0..t.atoms()).map(|a| t.value(a).to_vec()).collect())
                .collect(),
        }
    }
}

fn chain_field(err: &CoreError) -> String {
    match err {
        CoreError::RowSum { row, .. } => format!("Q[{row}]"),
        CoreError::NegativeEntry { row, col, .. } => format!("Q[{row}][{col}]"),
        CoreError::DetailedBalance { i, j, .. } => format!("Q[{i}][{j}] / pi"),
        CoreError::NotStationary { .. } | CoreError::NonPositiveProbability { .. } | CoreError::ProbabilitySum { .. } => "pi".into(),
        _ => "Q".into(),
    }
}

impl ChainFile {
    pub fn load(path: &Path) -> CliResult<ReversibleChain> {
        read_json::<Self>(path)?.into_chain(path)
    }

    pub fn into_chain(self, path: &Path) -> CliResult<ReversibleChain> {
        if self.states.len() != self.q.len() {
            return Err(CliError::field(
                path,
                "states",
                format!("{} names for a {}-state kernel", self.states.len(), self.q.len()),
            ));
        }
        ReversibleChain::new(self.q, self.pi).map_err(|e| CliError::field(path, chain_field(&e), &e))
    }

    pub fn from_chain(chain: &ReversibleChain) -> Self {
        Self {
            states: (0..chain.states()).map(|i| format!("s{i}")).collect(),
            pi: Some(chain.pi().to_vec()),
            q: chain.rows(),
        }
    }
}

impl ObservableFile {
    pub fn load(path: &Path, chain: &ReversibleChain) -> CliResult<Observable> {
        read_json::<Self>(path)?.into_observable(path, chain)
    }

    pub fn into_observable(self, path: &Path, chain: &ReversibleChain) -> CliResult<Observable> {
        if self.dim == 0 {
            return Err(CliError::field(path, "dim", "must be positive"));
        }
        if self.values.len() != chain.states() {
            return Err(CliError::field(
                path,
                "values",
                format!("{} entries for a {}-state chain", self.values.len(), chain.states()),
            ));
        }
        if let Some((i, _)) = self.values.iter().enumerate().find(|(_, v)| v.len() != self.dim) {
            return Err(CliError::field(path, format!("values[{i}]"), format!("length must equal dim = {}", self.dim)));
        }
        RandomVector::from_rows(&self.values).map_err(|e| CliError::field(path, "values", e))
    }

    pub fn from_observable(f: &Observable) -> Self {
        Self {
            dim: f.dim(),
            values: (0..f.atoms()).map(|i| f.value(i).to_vec()).collect(),
        }
    }
}
