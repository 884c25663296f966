//! Caring weights over the successors recorded in a branching history.

use crate::exact::Rat;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A rooted experiment history: an internal node is an experiment whose
/// children are its outcomes, a childless node is a successor. Serializes
/// as nested arrays (`[]` is a leaf).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HistoryTree {
    pub children: Vec<HistoryTree>,
}

impl HistoryTree {
    pub fn leaf() -> HistoryTree {
        HistoryTree { children: vec![] }
    }

    pub fn experiment(children: Vec<HistoryTree>) -> HistoryTree {
        HistoryTree { children }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("experiment node has {got} outcome(s); every experiment needs at least 2")]
    UnaryExperiment { got: usize },
}

/// How successor concern is apportioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaringScheme {
    /// Equal split at every remembered branching: a successor's weight is
    /// the product of 1/(outcome count) over the experiments it recalls.
    MemoryBranchCounting,
}

/// Caring weight per leaf in depth-first order; weights sum to 1.
pub fn successor_caring_weights(
    tree: &HistoryTree,
    scheme: CaringScheme,
) -> Result<Vec<Rat>, TreeError> {
    let CaringScheme::MemoryBranchCounting = scheme;
    let mut weights = Vec::new();
    collect(tree, Rat::one(), &mut weights)?;
    Ok(weights)
}

fn collect(node: &HistoryTree, weight: Rat, out: &mut Vec<Rat>) -> Result<(), TreeError> {
    if node.is_leaf() {
        out.push(weight);
        return Ok(());
    }
    let n = node.children.len();
    if n < 2 {
        return Err(TreeError::UnaryExperiment { got: n });
    }
    let share = weight / Rat::from_integer((n as i64).into());
    for child in &node.children {
        collect(child, share.clone(), out)?;
    }
    Ok(())
}
