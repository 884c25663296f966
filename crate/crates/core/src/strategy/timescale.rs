//! Percentile bettors facing a pay-to-stand-in-a-radiation-field offer:
//! the same total exposure reads as a stream of safe little bets or as one
//! lethal block, depending on the decision granularity.

use super::{prefer, Preference, Prospect, Strategy};
use crate::exact::{self, rat_pow, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimescaleParams {
    /// Percentile x in (0, 100) of the deciding strategy.
    #[serde(with = "exact::serde_rat")]
    pub percentile: Rat,
    /// Payment per unit time of exposure.
    #[serde(with = "exact::serde_rat")]
    pub pay_per_step: Rat,
    /// Risk of lethality per unit time, in [0, 1).
    #[serde(with = "exact::serde_rat")]
    pub lethality: Rat,
    /// Total steps on offer.
    pub horizon: u64,
    /// Steps per binding decision; must divide the horizon.
    pub granularity: u64,
    /// Utility of the dead future self.
    #[serde(default = "default_death_utility", with = "exact::serde_rat")]
    pub death_utility: Rat,
}

pub fn default_death_utility() -> Rat {
    exact::rat_int(-1_000_000)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TimescaleError {
    #[error("granularity {granularity} does not divide horizon {horizon}")]
    GranularityMismatch { granularity: u64, horizon: u64 },
    #[error("granularity must be at least 1")]
    ZeroGranularity,
    #[error("lethality must lie in [0, 1), got {got}")]
    LethalityRange { got: String },
    #[error("death utility must be negative, got {got}")]
    DeathUtility { got: String },
    #[error(transparent)]
    Strategy(#[from] super::StrategyError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochDecision {
    pub epoch: u64,
    #[serde(with = "exact::serde_rat")]
    pub survival_mass: Rat,
    #[serde(with = "exact::serde_rat")]
    pub death_mass: Rat,
    pub accept: bool,
}

/// One accept/decline verdict per epoch of `granularity` steps.
///
/// The accept bet gives mass `(1 - p)^g` to a surviving self paid for the
/// whole epoch and the rest to a dead self; declining pays nothing at no
/// risk. The x-percentile key decides between the two.
pub fn timescale_decisions(params: &TimescaleParams) -> Result<Vec<EpochDecision>, TimescaleError> {
    if params.granularity == 0 {
        return Err(TimescaleError::ZeroGranularity);
    }
    if params.horizon % params.granularity != 0 {
        return Err(TimescaleError::GranularityMismatch {
            granularity: params.granularity,
            horizon: params.horizon,
        });
    }
    if params.lethality.is_negative() || params.lethality >= Rat::one() {
        return Err(TimescaleError::LethalityRange {
            got: exact::rat_to_string(&params.lethality),
        });
    }
    if !params.death_utility.is_negative() {
        return Err(TimescaleError::DeathUtility {
            got: exact::rat_to_string(&params.death_utility),
        });
    }
    let strategy = Strategy::x_percentile(params.percentile.clone())?;
    let survival = rat_pow(&(Rat::one() - &params.lethality), params.granularity);
    let death = Rat::one() - &survival;
    let pay = &params.pay_per_step * exact::rat_int(params.granularity as i64);

    let accept_bet = if death.is_zero() {
        Prospect::from_pairs(&[(Rat::one(), pay)])
    } else {
        Prospect::from_pairs(&[
            (death.clone(), params.death_utility.clone()),
            (survival.clone(), pay),
        ])
    }
    .expect("masses sum to 1");
    let decline_bet =
        Prospect::from_pairs(&[(Rat::one(), Rat::zero())]).expect("unit weight");
    let accept = prefer(&strategy, &accept_bet, &decline_bet) == Preference::First;

    let epochs = params.horizon / params.granularity;
    Ok((0..epochs)
        .map(|epoch| EpochDecision {
            epoch,
            survival_mass: survival.clone(),
            death_mass: death.clone(),
            accept,
        })
        .collect())
}
