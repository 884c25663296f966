//! Toy branching-multiverse variants and their exact evolution under
//! repeated button presses.
//!
//! Ensembles are aggregated by outcome-count vector: every measure and
//! every inference downstream depends only on the counts, so a press
//! sequence of length `n` over `k` outcomes needs at most C(n+k-1, k-1)
//! classes instead of `k^n` individual branches. Branch-by-branch
//! enumeration survives as a test oracle.

use crate::exact::{self, rat_pow, Nat, Rat};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Default refusal bound on the number of aggregated classes.
pub const DEFAULT_CLASS_CAPACITY: usize = 10_000_000;

/// The four branching-universe flavours.
///
/// * `Weightless`: plain branching, no fact of the matter about weights.
/// * `Decorated`: numbers are written into each successor but carry no
///   normative force (they are tracked as decorations only).
/// * `Replicating`: outcome `i` spawns `n_i` identical successors, so the
///   weights `n_i / sum(n)` are backed by branch counting.
/// * `Split`: simulators spawn `n_i` successors per outcome and split the
///   written weight among them subject to `sum_j q[i][j] = p_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[serde(alias = "cbu1")]
    Weightless,
    #[serde(alias = "cbu2")]
    Decorated,
    #[serde(alias = "cbu3")]
    Replicating,
    #[serde(alias = "cbu4")]
    Split,
}

/// Declaration of one branching machine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiverseSpec {
    pub variant: Variant,
    /// Number of outcomes per press (k >= 2).
    pub outcome_count: usize,
    /// Outcome weights; absent for the weightless variant, decorative for
    /// `Decorated`, normative for `Replicating` and `Split`.
    #[serde(default, with = "exact::serde_rat_vec_opt", skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Rat>>,
    /// Successors per outcome for the replicating variant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replication: Option<Vec<u64>>,
    /// Per-outcome sensory intensity factors for qualia-enhanced machines.
    #[serde(default, with = "exact::serde_rat_vec_opt", skip_serializing_if = "Option::is_none")]
    pub qualia: Option<Vec<Rat>>,
    /// Per-outcome weight splits `q[i][j]` for the split variant.
    #[serde(
        default,
        with = "exact::serde_rat_vec_vec_opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub q_split: Option<Vec<Vec<Rat>>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiverseError {
    #[error("outcome weights must sum to exactly 1, got {got}")]
    WeightSum { got: String },
    #[error("weight split for outcome {outcome} sums to {got}, expected {expected}")]
    QSplit {
        outcome: usize,
        got: String,
        expected: String,
    },
    #[error("negative weight at outcome {outcome}")]
    NegativeWeight { outcome: usize },
    #[error("{variant:?} spec is missing required field {field}")]
    MissingField { variant: Variant, field: String },
    #[error("{variant:?} spec does not take field {field}")]
    ForbiddenField { variant: Variant, field: String },
    #[error("field {field} has {got} entries, expected {expected}")]
    ArityMismatch {
        field: String,
        got: usize,
        expected: usize,
    },
    #[error("replication counts {counts:?} are not proportional to the declared weights")]
    ReplicationMismatch { counts: Vec<u64> },
    #[error("outcome count {got} is below the minimum of 2")]
    TooFewOutcomes { got: usize },
    #[error("ensemble would exceed the class capacity bound ({classes} > {bound})")]
    Capacity { classes: usize, bound: usize },
    #[error("measure {kind:?} is unavailable on this spec: {reason}")]
    MeasureUnavailable { kind: MeasureKind, reason: String },
}

impl MultiverseSpec {
    pub fn weightless(outcome_count: usize) -> Self {
        MultiverseSpec {
            variant: Variant::Weightless,
            outcome_count,
            weights: None,
            replication: None,
            qualia: None,
            q_split: None,
        }
    }

    pub fn decorated(weights: Vec<Rat>) -> Self {
        MultiverseSpec {
            variant: Variant::Decorated,
            outcome_count: weights.len(),
            weights: Some(weights),
            replication: None,
            qualia: None,
            q_split: None,
        }
    }

    pub fn replicating(replication: Vec<u64>) -> Self {
        MultiverseSpec {
            variant: Variant::Replicating,
            outcome_count: replication.len(),
            weights: None,
            replication: Some(replication),
            qualia: None,
            q_split: None,
        }
    }

    pub fn split(weights: Vec<Rat>, q_split: Vec<Vec<Rat>>) -> Self {
        MultiverseSpec {
            variant: Variant::Split,
            outcome_count: weights.len(),
            weights: Some(weights),
            replication: None,
            qualia: None,
            q_split: Some(q_split),
        }
    }

    pub fn with_qualia(mut self, qualia: Vec<Rat>) -> Self {
        self.qualia = Some(qualia);
        self
    }

    /// Successors created per press for outcome `i`.
    pub fn successor_count(&self, outcome: usize) -> u64 {
        match self.variant {
            Variant::Replicating => self.replication.as_ref().map_or(1, |n| n[outcome]),
            Variant::Split => self.q_split.as_ref().map_or(1, |q| q[outcome].len() as u64),
            _ => 1,
        }
    }

    /// Total successors per press, i.e. the per-step branch growth factor.
    pub fn total_successors(&self) -> u64 {
        (0..self.outcome_count).map(|i| self.successor_count(i)).sum()
    }

    /// Weights that carry normative force (replicating and split variants).
    pub fn normative_weights(&self) -> Option<Vec<Rat>> {
        match self.variant {
            Variant::Weightless | Variant::Decorated => None,
            Variant::Replicating => Some(self.replicating_weights()),
            Variant::Split => self.weights.clone(),
        }
    }

    /// Weights written into the sky without normative force.
    pub fn decorative_weights(&self) -> Option<&[Rat]> {
        match self.variant {
            Variant::Decorated => self.weights.as_deref(),
            _ => None,
        }
    }

    fn replicating_weights(&self) -> Vec<Rat> {
        let counts = self.replication.as_ref().expect("validated replicating spec");
        let total = Rat::from_integer(counts.iter().sum::<u64>().into());
        counts
            .iter()
            .map(|&n| Rat::from_integer(n.into()) / total.clone())
            .collect()
    }
}

fn check_weight_vector(weights: &[Rat]) -> Result<(), MultiverseError> {
    for (i, w) in weights.iter().enumerate() {
        if w.is_negative() {
            return Err(MultiverseError::NegativeWeight { outcome: i });
        }
    }
    let sum: Rat = weights.iter().sum();
    if !sum.is_one() {
        return Err(MultiverseError::WeightSum {
            got: exact::rat_to_string(&sum),
        });
    }
    Ok(())
}

/// Checks every structural invariant of the spec and hands it back.
pub fn validate_spec(spec: MultiverseSpec) -> Result<MultiverseSpec, MultiverseError> {
    let k = spec.outcome_count;
    if k < 2 {
        return Err(MultiverseError::TooFewOutcomes { got: k });
    }
    let arity = |name: &str, got: usize| -> Result<(), MultiverseError> {
        if got == k {
            Ok(())
        } else {
            Err(MultiverseError::ArityMismatch {
                field: name.to_string(),
                got,
                expected: k,
            })
        }
    };
    if let Some(q) = &spec.qualia {
        arity("qualia", q.len())?;
        for (i, f) in q.iter().enumerate() {
            if !f.is_positive() {
                return Err(MultiverseError::NegativeWeight { outcome: i });
            }
        }
    }
    match spec.variant {
        Variant::Weightless => {
            if spec.weights.is_some() {
                return Err(MultiverseError::ForbiddenField {
                    variant: spec.variant,
                    field: "weights".into(),
                });
            }
        }
        Variant::Decorated => {
            let w = spec.weights.as_ref().ok_or(MultiverseError::MissingField {
                variant: spec.variant,
                field: "weights".into(),
            })?;
            arity("weights", w.len())?;
            check_weight_vector(w)?;
        }
        Variant::Replicating => {
            let n = spec.replication.as_ref().ok_or(MultiverseError::MissingField {
                variant: spec.variant,
                field: "replication".into(),
            })?;
            arity("replication", n.len())?;
            if n.iter().any(|&c| c == 0) {
                return Err(MultiverseError::ReplicationMismatch { counts: n.clone() });
            }
            if let Some(w) = &spec.weights {
                arity("weights", w.len())?;
                check_weight_vector(w)?;
                let derived = spec.replicating_weights();
                if *w != derived {
                    return Err(MultiverseError::ReplicationMismatch { counts: n.clone() });
                }
            }
        }
        Variant::Split => {
            let w = spec.weights.as_ref().ok_or(MultiverseError::MissingField {
                variant: spec.variant,
                field: "weights".into(),
            })?;
            arity("weights", w.len())?;
            check_weight_vector(w)?;
            let q = spec.q_split.as_ref().ok_or(MultiverseError::MissingField {
                variant: spec.variant,
                field: "q_split".into(),
            })?;
            arity("q_split", q.len())?;
            for (i, qi) in q.iter().enumerate() {
                if qi.is_empty() {
                    return Err(MultiverseError::QSplit {
                        outcome: i,
                        got: "0/1".into(),
                        expected: exact::rat_to_string(&w[i]),
                    });
                }
                for share in qi {
                    if share.is_negative() {
                        return Err(MultiverseError::NegativeWeight { outcome: i });
                    }
                }
                let sum: Rat = qi.iter().sum();
                if sum != w[i] {
                    return Err(MultiverseError::QSplit {
                        outcome: i,
                        got: exact::rat_to_string(&sum),
                        expected: exact::rat_to_string(&w[i]),
                    });
                }
            }
        }
    }
    Ok(spec)
}

/// An equivalence class of branches sharing an outcome-count vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchClass {
    /// Occurrences of each outcome; sums to the press count.
    pub counts: Vec<u64>,
    /// Number of distinct branches/simulations in this class.
    #[serde(with = "exact::serde_nat")]
    pub multiplicity: Nat,
    /// Total normative weight of the class, when weights are normative.
    #[serde(default, with = "exact::serde_rat_opt", skip_serializing_if = "Option::is_none")]
    pub weight_mass: Option<Rat>,
    /// Product of the numbers written in the sky along the tape (decorated
    /// variant only); identical for every branch in the class.
    #[serde(default, with = "exact::serde_rat_opt", skip_serializing_if = "Option::is_none")]
    pub decoration: Option<Rat>,
}

impl BranchClass {
    pub fn root(spec: &MultiverseSpec) -> BranchClass {
        BranchClass {
            counts: vec![0; spec.outcome_count],
            multiplicity: Nat::one(),
            weight_mass: spec.normative_weights().map(|_| Rat::one()),
            decoration: None,
        }
    }

    pub fn presses(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Zero-outcome count, the sufficient statistic for binary machines.
    pub fn zero_count(&self) -> u64 {
        self.counts[0]
    }
}

/// The aggregated state of the multiverse after a number of presses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchEnsemble {
    pub spec: MultiverseSpec,
    pub steps: u64,
    /// Classes in ascending lexicographic order of their count vectors.
    pub classes: Vec<BranchClass>,
}

impl BranchEnsemble {
    pub fn total_multiplicity(&self) -> Nat {
        self.classes.iter().map(|c| c.multiplicity.clone()).sum()
    }

    /// Class lookup by count vector.
    pub fn class(&self, counts: &[u64]) -> Option<&BranchClass> {
        self.classes
            .binary_search_by(|c| c.counts.as_slice().cmp(counts))
            .ok()
            .map(|i| &self.classes[i])
    }
}

/// Deletes the parent and returns one successor class per outcome.
pub fn press_button(spec: &MultiverseSpec, parent: &BranchClass) -> Vec<BranchClass> {
    press_with_splits(spec, parent, None)
}

fn press_with_splits(
    spec: &MultiverseSpec,
    parent: &BranchClass,
    split_override: Option<&[Vec<Rat>]>,
) -> Vec<BranchClass> {
    let weights = spec.normative_weights();
    let decorative = spec.decorative_weights();
    (0..spec.outcome_count)
        .map(|i| {
            let mut counts = parent.counts.clone();
            counts[i] += 1;
            let successor_count = match (spec.variant, split_override) {
                (Variant::Split, Some(splits)) => splits[i].len() as u64,
                _ => spec.successor_count(i),
            };
            BranchClass {
                counts,
                multiplicity: &parent.multiplicity * Nat::from(successor_count),
                weight_mass: match (&parent.weight_mass, &weights) {
                    (Some(mass), Some(w)) => Some(mass * &w[i]),
                    _ => None,
                },
                decoration: decorative.map(|w| {
                    parent.decoration.clone().unwrap_or_else(Rat::one) * &w[i]
                }),
            }
        })
        .collect()
}

/// Per-press override of the split variant's weight shares. Press indices
/// are 0-based; presses without an entry use the spec's fixed splits.
pub type SplitSchedule = BTreeMap<u64, Vec<Vec<Rat>>>;

pub fn evolve(spec: &MultiverseSpec, steps: u64) -> Result<BranchEnsemble, MultiverseError> {
    evolve_bounded(spec, steps, DEFAULT_CLASS_CAPACITY, &SplitSchedule::new())
}

/// Evolution with an explicit class-capacity bound and split overrides.
///
/// Multiplicities are accumulated press by press (they depend on the
/// per-press successor counts); weight masses and decorations depend only
/// on the outcome counts and are materialized from them in closed form,
/// mass(counts) = multinomial(counts) * prod_i p_i^counts[i].
pub fn evolve_bounded(
    spec: &MultiverseSpec,
    steps: u64,
    capacity: usize,
    splits: &SplitSchedule,
) -> Result<BranchEnsemble, MultiverseError> {
    for (press, over) in splits {
        if *press >= steps {
            continue;
        }
        let mut probe = spec.clone();
        probe.q_split = Some(over.clone());
        validate_spec(probe)?;
    }
    let mut classes: BTreeMap<Vec<u64>, Nat> = BTreeMap::new();
    classes.insert(vec![0; spec.outcome_count], Nat::one());
    for press in 0..steps {
        let successor_counts: Vec<u64> = (0..spec.outcome_count)
            .map(|i| match splits.get(&press) {
                Some(over) => over[i].len() as u64,
                None => spec.successor_count(i),
            })
            .collect();
        let mut next: BTreeMap<Vec<u64>, Nat> = BTreeMap::new();
        for (counts, multiplicity) in &classes {
            for i in 0..spec.outcome_count {
                let mut successor = counts.clone();
                successor[i] += 1;
                let grown = multiplicity * Nat::from(successor_counts[i]);
                match next.get_mut(&successor) {
                    Some(existing) => *existing += grown,
                    None => {
                        next.insert(successor, grown);
                    }
                }
            }
        }
        if next.len() > capacity {
            return Err(MultiverseError::Capacity {
                classes: next.len(),
                bound: capacity,
            });
        }
        classes = next;
    }
    let weights = spec.normative_weights();
    let decorative = spec.decorative_weights();
    let product = |labels: &[Rat], counts: &[u64]| -> Rat {
        counts
            .iter()
            .enumerate()
            .map(|(i, &r)| rat_pow(&labels[i], r))
            .product()
    };
    let classes = classes
        .into_iter()
        .map(|(counts, multiplicity)| BranchClass {
            weight_mass: weights.as_ref().map(|w| {
                Rat::from_integer(crate::exact::multinomial(&counts).into())
                    * product(w, &counts)
            }),
            decoration: match (decorative, steps) {
                (Some(labels), 1..) => Some(product(labels, &counts)),
                _ => None,
            },
            counts,
            multiplicity,
        })
        .collect();
    Ok(BranchEnsemble {
        spec: spec.clone(),
        steps,
        classes,
    })
}

/// The three senses of "how much of the multiverse" a class occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// Mass proportional to the number of branches/simulations.
    Counting,
    /// Mass given by the normative branch weights.
    Weight,
    /// Counting mass rescaled by sensory intensity per outcome occurrence.
    Qualia,
}

/// Normalized class masses in ensemble class order.
pub fn ensemble_measure(
    ensemble: &BranchEnsemble,
    kind: MeasureKind,
) -> Result<Vec<Rat>, MultiverseError> {
    match kind {
        MeasureKind::Counting => {
            let total = Rat::from_integer(ensemble.total_multiplicity().into());
            Ok(ensemble
                .classes
                .iter()
                .map(|c| Rat::from_integer(c.multiplicity.clone().into()) / total.clone())
                .collect())
        }
        MeasureKind::Weight => {
            if ensemble.spec.normative_weights().is_none() {
                return Err(MultiverseError::MeasureUnavailable {
                    kind,
                    reason: match ensemble.spec.variant {
                        Variant::Decorated => "weights are decorative only".into(),
                        _ => "spec carries no branch weights".into(),
                    },
                });
            }
            Ok(ensemble
                .classes
                .iter()
                .map(|c| c.weight_mass.clone().expect("normative weights present"))
                .collect())
        }
        MeasureKind::Qualia => {
            let factors = ensemble.spec.qualia.as_ref().ok_or_else(|| {
                MultiverseError::MeasureUnavailable {
                    kind,
                    reason: "spec declares no qualia factors".into(),
                }
            })?;
            let raw: Vec<Rat> = ensemble
                .classes
                .iter()
                .map(|c| {
                    let mut mass = Rat::from_integer(c.multiplicity.clone().into());
                    for (i, &r) in c.counts.iter().enumerate() {
                        mass *= rat_pow(&factors[i], r);
                    }
                    mass
                })
                .collect();
            let total: Rat = raw.iter().sum();
            Ok(raw.into_iter().map(|m| m / total.clone()).collect())
        }
    }
}
