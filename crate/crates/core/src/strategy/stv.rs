//! Single-transferable-vote elections among percentile-indexed future
//! selves. The electorate is the percentile axis [0, 1): voter x ranks
//! prospects by the utility each one hands its x-percentile self, and a
//! voter's mass is the length of its percentile interval. The axis splits
//! into finitely many constant-ranking intervals whose breakpoints are the
//! cumulative-weight boundaries of all prospects, so tallies are exact
//! rationals; a uniform-grid electorate is available as a cross-check.

use super::{Preference, Prospect, UtilityProfile, WeightMode};
use crate::exact::{self, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// How voters are drawn from the percentile axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Electorate {
    /// Exact interval masses between cumulative-weight breakpoints.
    IntervalExact,
    /// `points` voters at x = k/points, each of mass 1/points.
    Grid { points: u64 },
}

impl Default for Electorate {
    fn default() -> Self {
        Electorate::IntervalExact
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectionRound {
    /// (prospect id, tally) for each surviving prospect, ascending by id.
    pub tallies: Vec<(usize, TallyValue)>,
    /// Prospect eliminated at the end of this round, if any.
    pub eliminated: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TallyValue(#[serde(with = "exact::serde_rat")] pub Rat);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "result")]
pub enum ElectionOutcome {
    Winner { id: usize },
    Tie { ids: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectionReport {
    /// Flags the electorate construction used for the continuum of voters.
    pub electorate: String,
    pub rounds: Vec<ElectionRound>,
    pub outcome: ElectionOutcome,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElectionError {
    #[error("an election needs at least 2 prospects, got {got}")]
    TooFewProspects { got: usize },
    #[error("grid electorate needs at least 1 point")]
    EmptyGrid,
    #[error("election tied between prospects {ids:?}")]
    Tie { ids: Vec<usize> },
}

/// A maximal set of voters sharing one utility per prospect.
struct VoterBlock {
    mass: Rat,
    /// Utility handed to this voter by each prospect.
    utilities: Vec<Rat>,
}

fn voter_blocks(
    profiles: &[UtilityProfile],
    electorate: Electorate,
) -> Result<Vec<VoterBlock>, ElectionError> {
    match electorate {
        Electorate::IntervalExact => {
            let mut cuts: BTreeSet<Rat> = BTreeSet::new();
            cuts.insert(Rat::zero());
            for p in profiles {
                for b in p.boundaries() {
                    cuts.insert(b);
                }
            }
            let cuts: Vec<Rat> = cuts.into_iter().collect();
            let mut blocks = Vec::with_capacity(cuts.len());
            for pair in cuts.windows(2) {
                let (lo, hi) = (&pair[0], &pair[1]);
                blocks.push(VoterBlock {
                    mass: hi - lo,
                    utilities: profiles.iter().map(|p| p.voter_utility(lo).clone()).collect(),
                });
            }
            Ok(blocks)
        }
        Electorate::Grid { points } => {
            if points == 0 {
                return Err(ElectionError::EmptyGrid);
            }
            let mass = Rat::new(1.into(), (points as i64).into());
            Ok((0..points)
                .map(|k| {
                    let x = Rat::new((k as i64).into(), (points as i64).into());
                    VoterBlock {
                        mass: mass.clone(),
                        utilities: profiles.iter().map(|p| p.voter_utility(&x).clone()).collect(),
                    }
                })
                .collect())
        }
    }
}

/// Runs the full election and returns the round-by-round trace.
///
/// Each round gives every voter block to its top surviving prospect,
/// splitting the block mass equally on utility ties. A prospect holding a
/// strict majority wins; if all survivors tie exactly the election is a
/// tie; otherwise the lowest-tallied survivor (lowest id on equal tallies)
/// is eliminated and its voters transfer.
pub fn run_election(
    prospects: &[Prospect],
    mode: WeightMode,
    electorate: Electorate,
) -> Result<ElectionReport, ElectionError> {
    if prospects.len() < 2 {
        return Err(ElectionError::TooFewProspects {
            got: prospects.len(),
        });
    }
    let profiles: Vec<UtilityProfile> =
        prospects.iter().map(|p| UtilityProfile::new(p, mode)).collect();
    let blocks = voter_blocks(&profiles, electorate)?;
    let half = exact::rat(1, 2);

    let mut survivors: Vec<usize> = (0..prospects.len()).collect();
    let mut rounds = Vec::new();
    let outcome = loop {
        let mut tallies: Vec<Rat> = vec![Rat::zero(); prospects.len()];
        for block in &blocks {
            let top = survivors
                .iter()
                .map(|&id| &block.utilities[id])
                .max()
                .expect("survivors non-empty");
            let winners: Vec<usize> = survivors
                .iter()
                .copied()
                .filter(|&id| &block.utilities[id] == top)
                .collect();
            let share = &block.mass / Rat::from_integer((winners.len() as i64).into());
            for id in winners {
                tallies[id] += &share;
            }
        }
        let round_tallies: Vec<(usize, TallyValue)> = survivors
            .iter()
            .map(|&id| (id, TallyValue(tallies[id].clone())))
            .collect();

        if let Some(&winner) = survivors.iter().find(|&&id| tallies[id] > half) {
            rounds.push(ElectionRound {
                tallies: round_tallies,
                eliminated: None,
            });
            break ElectionOutcome::Winner { id: winner };
        }
        let all_equal = survivors
            .windows(2)
            .all(|w| tallies[w[0]] == tallies[w[1]]);
        if all_equal {
            rounds.push(ElectionRound {
                tallies: round_tallies,
                eliminated: None,
            });
            break ElectionOutcome::Tie {
                ids: survivors.clone(),
            };
        }
        let &loser = survivors
            .iter()
            .min_by(|&&a, &&b| tallies[a].cmp(&tallies[b]).then(a.cmp(&b)))
            .expect("survivors non-empty");
        rounds.push(ElectionRound {
            tallies: round_tallies,
            eliminated: Some(loser),
        });
        survivors.retain(|&id| id != loser);
    };
    Ok(ElectionReport {
        electorate: match electorate {
            Electorate::IntervalExact => "interval-exact".to_string(),
            Electorate::Grid { points } => format!("grid:{points}"),
        },
        rounds,
        outcome,
    })
}

/// Winner id, or `ElectionError::Tie` carrying the surviving tie set.
pub fn elect_stv(
    prospects: &[Prospect],
    mode: WeightMode,
    electorate: Electorate,
) -> Result<usize, ElectionError> {
    match run_election(prospects, mode, electorate)?.outcome {
        ElectionOutcome::Winner { id } => Ok(id),
        ElectionOutcome::Tie { ids } => Err(ElectionError::Tie { ids }),
    }
}

/// Two-prospect majority vote: which prospect a weight-majority of
/// percentile selves strictly prefers.
pub(super) fn pairwise(a: &Prospect, b: &Prospect, mode: WeightMode) -> Preference {
    let profiles = [UtilityProfile::new(a, mode), UtilityProfile::new(b, mode)];
    let blocks = voter_blocks(&profiles, Electorate::IntervalExact)
        .expect("interval electorate is total");
    let mut first = Rat::zero();
    let mut second = Rat::zero();
    for block in &blocks {
        match block.utilities[0].cmp(&block.utilities[1]) {
            std::cmp::Ordering::Greater => first += &block.mass,
            std::cmp::Ordering::Less => second += &block.mass,
            std::cmp::Ordering::Equal => {}
        }
    }
    match first.cmp(&second) {
        std::cmp::Ordering::Greater => Preference::First,
        std::cmp::Ordering::Less => Preference::Second,
        std::cmp::Ordering::Equal => Preference::Indifferent,
    }
}
