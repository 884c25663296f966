//! Two species, one yearly gamble: extinction with probability q or a
//! population multiplied by g. Exact branch accounting for the many-worlds
//! reading, seeded Monte Carlo for the one-world reading, and the
//! mind-count ratio between them.

use crate::exact::{self, nat_pow, rat_pow, Nat, Rat};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Always declines the option; the population never changes.
    #[serde(alias = "a")]
    RiskAverseDecline,
    /// Always accepts, chasing expected population.
    #[serde(alias = "b")]
    RiskTolerantAccept,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    #[serde(with = "exact::serde_nat")]
    pub initial_population: Nat,
    pub years: u64,
    /// Chance the option wipes the species out, strictly inside (0, 1).
    #[serde(default = "default_extinction", with = "exact::serde_rat")]
    pub extinction_probability: Rat,
    /// Population multiplier when the option pays off.
    #[serde(default = "default_growth")]
    pub growth_factor: u64,
    pub policy: Policy,
}

fn default_extinction() -> Rat {
    exact::rat(1, 2)
}

fn default_growth() -> u64 {
    3
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvolutionError {
    #[error("extinction probability must lie strictly inside (0, 1), got {got}")]
    ExtinctionRange { got: String },
    #[error("initial population must be positive")]
    EmptyPopulation,
    #[error("mind ratio requires equal initial populations")]
    UnequalPopulations,
    #[error("extinction probability denominator must fit in 64 bits for exact sampling")]
    DenominatorTooLarge,
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), EvolutionError> {
        if self.extinction_probability <= Rat::zero()
            || self.extinction_probability >= Rat::one()
        {
            return Err(EvolutionError::ExtinctionRange {
                got: exact::rat_to_string(&self.extinction_probability),
            });
        }
        if self.initial_population.is_zero() {
            return Err(EvolutionError::EmptyPopulation);
        }
        Ok(())
    }

    fn survival_probability(&self) -> Rat {
        Rat::one() - &self.extinction_probability
    }
}

/// Final populations with their exact branch weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldDistribution {
    pub outcomes: Vec<WorldOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldOutcome {
    #[serde(with = "exact::serde_nat")]
    pub population: Nat,
    #[serde(with = "exact::serde_rat")]
    pub mass: Rat,
}

impl WorldDistribution {
    /// Branch-weight-averaged population.
    pub fn expected_population(&self) -> Rat {
        self.outcomes
            .iter()
            .map(|o| Rat::from_integer(o.population.clone().into()) * &o.mass)
            .sum()
    }
}

/// Exact branch accounting after `years` decisions.
pub fn exact_many_worlds(config: &EvolutionConfig) -> Result<WorldDistribution, EvolutionError> {
    config.validate()?;
    let outcomes = match config.policy {
        Policy::RiskAverseDecline => vec![WorldOutcome {
            population: config.initial_population.clone(),
            mass: Rat::one(),
        }],
        Policy::RiskTolerantAccept => {
            let survive_all = rat_pow(&config.survival_probability(), config.years);
            let extinct_mass = Rat::one() - &survive_all;
            let final_population = &config.initial_population
                * nat_pow(&Nat::from(config.growth_factor), config.years);
            let mut outcomes = Vec::new();
            if !extinct_mass.is_zero() {
                outcomes.push(WorldOutcome {
                    population: Nat::zero(),
                    mass: extinct_mass,
                });
            }
            outcomes.push(WorldOutcome {
                population: final_population,
                mass: survive_all,
            });
            outcomes
        }
    };
    Ok(WorldDistribution { outcomes })
}

/// Ratio of weight-averaged final-year populations, second species over
/// first. With the default parameters and policies decline/accept this is
/// (g q)^years where q is the survival probability.
pub fn mind_ratio(
    first: &EvolutionConfig,
    second: &EvolutionConfig,
) -> Result<Rat, EvolutionError> {
    if first.initial_population != second.initial_population {
        return Err(EvolutionError::UnequalPopulations);
    }
    let a = exact_many_worlds(first)?.expected_population();
    let b = exact_many_worlds(second)?.expected_population();
    Ok(b / a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneWorldSummary {
    pub trials: u64,
    pub seed: u64,
    pub extinct_trials: u64,
    pub extinct_fraction: f64,
    /// Standard error of the extinction fraction estimate.
    pub standard_error: f64,
    /// Final surviving populations and how many trials reached each.
    pub survivor_histogram: Vec<SurvivorBucket>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivorBucket {
    #[serde(with = "exact::serde_nat")]
    pub population: Nat,
    pub trials: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded one-world trajectories. Each trial draws from its own generator
/// keyed by (seed, trial index), so the result is independent of any
/// execution order or thread count.
pub fn one_world_ensemble(
    config: &EvolutionConfig,
    trials: u64,
    seed: u64,
) -> Result<OneWorldSummary, EvolutionError> {
    config.validate()?;
    let numer = config
        .extinction_probability
        .numer()
        .to_u64()
        .ok_or(EvolutionError::DenominatorTooLarge)?;
    let denom = config
        .extinction_probability
        .denom()
        .to_u64()
        .ok_or(EvolutionError::DenominatorTooLarge)?;
    let mut extinct = 0u64;
    let mut histogram: std::collections::BTreeMap<Nat, u64> = std::collections::BTreeMap::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial)));
        let mut alive = true;
        let mut growth_steps = 0u64;
        if let Policy::RiskTolerantAccept = config.policy {
            for _ in 0..config.years {
                // exact Bernoulli(numer/denom)
                if rng.gen_range(0..denom) < numer {
                    alive = false;
                    break;
                }
                growth_steps += 1;
            }
        }
        if alive {
            let population = &config.initial_population
                * nat_pow(&Nat::from(config.growth_factor), growth_steps);
            *histogram.entry(population).or_insert(0) += 1;
        } else {
            extinct += 1;
        }
    }
    let fraction = extinct as f64 / trials as f64;
    Ok(OneWorldSummary {
        trials,
        seed,
        extinct_trials: extinct,
        extinct_fraction: fraction,
        standard_error: (fraction * (1.0 - fraction) / trials as f64).sqrt(),
        survivor_histogram: histogram
            .into_iter()
            .map(|(population, trials)| SurvivorBucket { population, trials })
            .collect(),
    })
}
