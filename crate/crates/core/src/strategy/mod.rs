//! The betting-strategy catalog: every strategy ranks prospects either
//! through a lexicographic key of exact rationals or, for the future-self
//! democrat, through an election among percentile-indexed future selves.

mod axioms;
mod caring;
mod key;
mod stv;
mod timescale;

pub use axioms::{
    find_violation, Axiom, ContinuityReversal, ModifiedSide, SearchConfig, SearchOutcome, Witness,
};
pub use caring::{successor_caring_weights, CaringScheme, HistoryTree, TreeError};
pub use key::{KeyAtom, RankKey};
pub use stv::{
    elect_stv, run_election, ElectionError, ElectionOutcome, ElectionReport, ElectionRound,
    Electorate, TallyValue,
};
pub use timescale::{
    default_death_utility as timescale_default_death_utility, timescale_decisions, EpochDecision,
    TimescaleError, TimescaleParams,
};

use crate::exact::{self, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

/// One branch of a bet: the weight attached to the outcome, the utility the
/// bettor assigns to the good received there, and optional labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProspectEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    #[serde(with = "exact::serde_rat")]
    pub weight: Rat,
    #[serde(with = "exact::serde_rat")]
    pub utility: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub good: Option<String>,
}

/// A bet over branching outcomes; the universal input to every strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prospect {
    pub entries: Vec<ProspectEntry>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProspectError {
    #[error("prospect has no entries")]
    Empty,
    #[error("entry {index} has negative weight")]
    NegativeWeight { index: usize },
    #[error("prospect weights sum to {got}, expected 1")]
    WeightSum { got: String },
}

impl Prospect {
    pub fn new(entries: Vec<ProspectEntry>) -> Result<Prospect, ProspectError> {
        let p = Prospect { entries };
        p.validate()?;
        Ok(p)
    }

    /// Unlabeled prospect from (weight, utility) pairs.
    pub fn from_pairs(pairs: &[(Rat, Rat)]) -> Result<Prospect, ProspectError> {
        Prospect::new(
            pairs
                .iter()
                .map(|(w, u)| ProspectEntry {
                    outcome: None,
                    weight: w.clone(),
                    utility: u.clone(),
                    good: None,
                })
                .collect(),
        )
    }

    pub fn validate(&self) -> Result<(), ProspectError> {
        if self.entries.is_empty() {
            return Err(ProspectError::Empty);
        }
        for (index, e) in self.entries.iter().enumerate() {
            if e.weight.is_negative() {
                return Err(ProspectError::NegativeWeight { index });
            }
        }
        let sum: Rat = self.entries.iter().map(|e| e.weight.clone()).sum();
        if !sum.is_one() {
            return Err(ProspectError::WeightSum {
                got: exact::rat_to_string(&sum),
            });
        }
        Ok(())
    }
}

/// Whether branch weights enter the ranking or are all treated as equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    #[default]
    WeightSensitive,
    WeightIndifferent,
}

/// The strategy catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategyKind {
    /// Ranks by the weighted mean utility.
    MeanUtilitarian,
    /// Worst-off future self first; ties broken by the mass at the worst
    /// utility (less is better), then the next-worst utility, and so on.
    PriceRawlsian,
    /// Best possible future self first; mirror-image tie-breakers (more
    /// mass at the best utility is better).
    FutureSelfElitist,
    /// Best future self first, then the winning margin over each rival
    /// utility in turn; a prospect with a single utility wins its
    /// competition by an unbounded margin.
    RivalrousElitist,
    /// Utility at the weight median, ties broken by mean utility.
    MedianUtilitarian,
    /// Utility at the x-th weight percentile (x strictly between 0 and
    /// 100, counted from the worst outcome up), ties broken by mean.
    XPercentile {
        #[serde(with = "exact::serde_rat")]
        x: Rat,
    },
    /// Elects a prospect by a single-transferable-vote election among
    /// percentile-indexed future selves; no ranking key exists.
    FutureSelfDemocrat {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_points: Option<u64>,
    },
    /// Maximizes sum_i f1(U_i) p_i + sum_ij f2(U_i, U_j) p_i p_j with the
    /// functions given as lookup tables (absent table entries read as 0).
    DistributionEngineer {
        #[serde(with = "exact::serde_rat_pairs")]
        f1: Vec<(Rat, Rat)>,
        #[serde(with = "exact::serde_rat_triples")]
        f2: Vec<(Rat, Rat, Rat)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    #[serde(flatten)]
    pub kind: StrategyKind,
    #[serde(default)]
    pub weight_mode: WeightMode,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("percentile must lie strictly between 0 and 100, got {got}")]
    PercentileRange { got: String },
}

impl Strategy {
    pub fn new(kind: StrategyKind) -> Result<Strategy, StrategyError> {
        if let StrategyKind::XPercentile { x } = &kind {
            if !x.is_positive() || *x >= exact::rat_int(100) {
                return Err(StrategyError::PercentileRange {
                    got: exact::rat_to_string(x),
                });
            }
        }
        Ok(Strategy {
            kind,
            weight_mode: WeightMode::WeightSensitive,
        })
    }

    pub fn mean_utilitarian() -> Strategy {
        Strategy::new(StrategyKind::MeanUtilitarian).expect("no parameters")
    }

    pub fn price_rawlsian() -> Strategy {
        Strategy::new(StrategyKind::PriceRawlsian).expect("no parameters")
    }

    pub fn future_self_elitist() -> Strategy {
        Strategy::new(StrategyKind::FutureSelfElitist).expect("no parameters")
    }

    pub fn rivalrous_elitist() -> Strategy {
        Strategy::new(StrategyKind::RivalrousElitist).expect("no parameters")
    }

    pub fn median_utilitarian() -> Strategy {
        Strategy::new(StrategyKind::MedianUtilitarian).expect("no parameters")
    }

    pub fn x_percentile(x: Rat) -> Result<Strategy, StrategyError> {
        Strategy::new(StrategyKind::XPercentile { x })
    }

    pub fn future_self_democrat(grid_points: Option<u64>) -> Strategy {
        Strategy::new(StrategyKind::FutureSelfDemocrat { grid_points }).expect("no parameters")
    }

    pub fn weight_indifferent(mut self) -> Strategy {
        self.weight_mode = WeightMode::WeightIndifferent;
        self
    }

    /// Lexicographic ranking key; `None` for the future-self democrat,
    /// whose preference is decided by pairwise election instead.
    pub fn rank_key(&self, prospect: &Prospect) -> Option<RankKey> {
        key::evaluate_key(self, prospect)
    }
}

/// Strict preference between two prospects, or indifference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    First,
    Second,
    Indifferent,
}

impl Preference {
    pub fn flip(self) -> Preference {
        match self {
            Preference::First => Preference::Second,
            Preference::Second => Preference::First,
            Preference::Indifferent => Preference::Indifferent,
        }
    }
}

/// Ranks two prospects under the strategy.
pub fn prefer(strategy: &Strategy, a: &Prospect, b: &Prospect) -> Preference {
    match &strategy.kind {
        StrategyKind::FutureSelfDemocrat { .. } => {
            stv::pairwise(a, b, strategy.weight_mode)
        }
        _ => {
            let ka = strategy.rank_key(a).expect("key-based strategy");
            let kb = strategy.rank_key(b).expect("key-based strategy");
            match ka.cmp(&kb) {
                Ordering::Greater => Preference::First,
                Ordering::Less => Preference::Second,
                Ordering::Equal => Preference::Indifferent,
            }
        }
    }
}

/// Merged utility distribution: entries of equal utility have their weight
/// mass summed, classes sorted ascending by utility. Weight-indifferent
/// strategies first replace every entry weight by 1/(entry count).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct UtilityProfile {
    /// (utility, mass) ascending by utility; masses sum to 1.
    pub classes: Vec<(Rat, Rat)>,
}

impl UtilityProfile {
    pub fn new(prospect: &Prospect, mode: WeightMode) -> UtilityProfile {
        let n = prospect.entries.len();
        let uniform = Rat::new(1.into(), (n as i64).into());
        let mut pairs: Vec<(Rat, Rat)> = prospect
            .entries
            .iter()
            .map(|e| {
                let w = match mode {
                    WeightMode::WeightSensitive => e.weight.clone(),
                    WeightMode::WeightIndifferent => uniform.clone(),
                };
                (e.utility.clone(), w)
            })
            .collect();
        pairs.sort_by(|(ua, _), (ub, _)| ua.cmp(ub));
        let mut classes: Vec<(Rat, Rat)> = Vec::new();
        for (u, w) in pairs {
            match classes.last_mut() {
                Some((cu, cw)) if *cu == u => *cw += w,
                _ => classes.push((u, w)),
            }
        }
        UtilityProfile { classes }
    }

    /// Utility at the percentile fraction `x` in (0, 1]: the first class
    /// whose cumulative mass reaches x.
    pub fn percentile(&self, x: &Rat) -> &Rat {
        let mut cum = Rat::zero();
        for (u, w) in &self.classes {
            cum += w;
            if cum >= *x {
                return u;
            }
        }
        // weights sum to 1 >= x, so the loop always returns for x <= 1
        &self.classes.last().expect("non-empty profile").0
    }

    /// Utility seen by the voter at position `x` in [0, 1): the class
    /// covering [cum_before, cum_after) containing x.
    pub fn voter_utility(&self, x: &Rat) -> &Rat {
        let mut cum = Rat::zero();
        for (u, w) in &self.classes {
            cum += w;
            if cum > *x {
                return u;
            }
        }
        &self.classes.last().expect("non-empty profile").0
    }

    pub fn mean(&self) -> Rat {
        self.classes.iter().map(|(u, w)| u * w).sum()
    }

    /// Cumulative mass boundaries, excluding 0 and including 1.
    pub fn boundaries(&self) -> Vec<Rat> {
        let mut cum = Rat::zero();
        self.classes
            .iter()
            .map(|(_, w)| {
                cum += w;
                cum.clone()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests;
