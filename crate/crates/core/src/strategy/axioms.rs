//! Bounded counterexample search for the rationality postulates.
//!
//! The postulates are named after the Savage-style axiomatization they come
//! from; each is implemented as a concrete proxy so a violation is a
//! checkable relation between finitely many prospects:
//!
//! * transitivity (P1a): a strict preference cycle A > B > C > A;
//! * sure-thing (P2, proxy): two prospects agreeing on a common cell whose
//!   strict preference flips when only the shared cell's utility changes;
//! * dominance (P3): a statewise-dominated prospect strictly preferred;
//! * continuity (P6, proxy): a strict preference reversed by modifying one
//!   prospect on a cell of weight epsilon, for every epsilon in the grid.
//!
//! Searches scan a finite rational grid in a fixed lexicographic order, so
//! the first (smallest) witness is returned deterministically and every
//! witness is re-verified by direct preference evaluation before it is
//! handed out.

use super::{prefer, Preference, Prospect, Strategy};
use crate::exact::{self, Rat};
use num_traits::One;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    #[serde(alias = "transitivity")]
    P1aTransitivity,
    #[serde(rename = "p2_surething", alias = "surething")]
    P2SureThing,
    #[serde(alias = "dominance")]
    P3Dominance,
    #[serde(alias = "continuity")]
    P6Continuity,
}

/// The finite search grid. Weights are drawn from partitions of a common
/// denominator, utilities from an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    #[serde(with = "exact::serde_rat_vec")]
    pub utilities: Vec<Rat>,
    pub weight_denominator: u64,
    /// Cap on outcomes per prospect (at most 4).
    pub max_outcomes: usize,
    /// Replacement utilities tried when perturbing a cell in the
    /// continuity search.
    #[serde(with = "exact::serde_rat_vec")]
    pub continuity_probes: Vec<Rat>,
    /// Cell weights tried in the continuity search.
    #[serde(with = "exact::serde_rat_vec")]
    pub continuity_epsilons: Vec<Rat>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            utilities: (0..=10).map(exact::rat_int).collect(),
            weight_denominator: 6,
            max_outcomes: 3,
            continuity_probes: vec![exact::rat_int(-100), exact::rat_int(100)],
            continuity_epsilons: vec![exact::rat(1, 10), exact::rat(1, 100), exact::rat(1, 1000)],
        }
    }
}

/// Which side of a continuity witness was perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModifiedSide {
    Preferred,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "axiom")]
pub enum Witness {
    /// A > B, B > C, yet C > A.
    P1aTransitivity {
        prospects: Vec<Prospect>,
    },
    /// Preference between the pair flips when only the utility of the
    /// shared cell (slot `common_slot`) changes.
    #[serde(rename = "p2_surething")]
    P2SureThing {
        common_slot: usize,
        first_pair: (Prospect, Prospect),
        first_preference: Preference,
        second_pair: (Prospect, Prospect),
        second_preference: Preference,
    },
    /// `dominating` is at least as good in every aligned state and better
    /// in one, yet `preferred` is strictly preferred.
    P3Dominance {
        preferred: Prospect,
        dominating: Prospect,
    },
    /// The strict preference between the base prospects reverses after
    /// moving a cell of weight epsilon to the probe utility, for every
    /// epsilon tried.
    P6Continuity {
        base_preferred: Prospect,
        base_other: Prospect,
        modified: ModifiedSide,
        #[serde(with = "exact::serde_rat")]
        probe_utility: Rat,
        reversals: Vec<ContinuityReversal>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReversal {
    #[serde(with = "exact::serde_rat")]
    pub epsilon: Rat,
    pub preference: Preference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub witness: Option<Witness>,
    /// Number of candidate relation instances examined.
    pub candidates_checked: u64,
}

impl Witness {
    /// Re-derives the violated relation by direct preference evaluation.
    pub fn verify(&self, strategy: &Strategy) -> bool {
        match self {
            Witness::P1aTransitivity { prospects } => {
                prospects.len() == 3
                    && prefer(strategy, &prospects[0], &prospects[1]) == Preference::First
                    && prefer(strategy, &prospects[1], &prospects[2]) == Preference::First
                    && prefer(strategy, &prospects[2], &prospects[0]) == Preference::First
            }
            Witness::P2SureThing {
                common_slot,
                first_pair,
                first_preference,
                second_pair,
                second_preference,
            } => {
                let aligned = |x: &Prospect, y: &Prospect| {
                    x.entries.len() == y.entries.len()
                        && x.entries
                            .iter()
                            .zip(&y.entries)
                            .all(|(a, b)| a.weight == b.weight)
                };
                let shares_common = |pair: &(Prospect, Prospect)| {
                    pair.0.entries[*common_slot].utility == pair.1.entries[*common_slot].utility
                };
                let rest_fixed = first_pair
                    .0
                    .entries
                    .iter()
                    .zip(&second_pair.0.entries)
                    .enumerate()
                    .all(|(i, (a, b))| i == *common_slot || a.utility == b.utility)
                    && first_pair
                        .1
                        .entries
                        .iter()
                        .zip(&second_pair.1.entries)
                        .enumerate()
                        .all(|(i, (a, b))| i == *common_slot || a.utility == b.utility);
                aligned(&first_pair.0, &first_pair.1)
                    && aligned(&second_pair.0, &second_pair.1)
                    && aligned(&first_pair.0, &second_pair.0)
                    && shares_common(first_pair)
                    && shares_common(second_pair)
                    && rest_fixed
                    && *first_preference != Preference::Indifferent
                    && *second_preference == first_preference.flip()
                    && prefer(strategy, &first_pair.0, &first_pair.1) == *first_preference
                    && prefer(strategy, &second_pair.0, &second_pair.1) == *second_preference
            }
            Witness::P3Dominance {
                preferred,
                dominating,
            } => {
                let aligned = preferred.entries.len() == dominating.entries.len()
                    && preferred
                        .entries
                        .iter()
                        .zip(&dominating.entries)
                        .all(|(a, b)| a.weight == b.weight);
                let weakly_dominates = dominating
                    .entries
                    .iter()
                    .zip(&preferred.entries)
                    .all(|(d, p)| d.utility >= p.utility);
                let strictly_somewhere = dominating
                    .entries
                    .iter()
                    .zip(&preferred.entries)
                    .any(|(d, p)| d.utility > p.utility);
                aligned
                    && weakly_dominates
                    && strictly_somewhere
                    && prefer(strategy, preferred, dominating) == Preference::First
            }
            Witness::P6Continuity {
                base_preferred,
                base_other,
                modified,
                probe_utility,
                reversals,
            } => {
                if prefer(strategy, base_preferred, base_other) != Preference::First
                    || reversals.is_empty()
                {
                    return false;
                }
                reversals.iter().all(|r| {
                    let target = match modified {
                        ModifiedSide::Preferred => base_preferred,
                        ModifiedSide::Other => base_other,
                    };
                    let modified_prospect = perturb(target, &r.epsilon, probe_utility);
                    let got = match modified {
                        ModifiedSide::Preferred => {
                            prefer(strategy, &modified_prospect, base_other)
                        }
                        ModifiedSide::Other => prefer(strategy, base_preferred, &modified_prospect),
                    };
                    got == Preference::Second && got == r.preference
                })
            }
        }
    }
}

/// Non-increasing partitions of `denominator` into 1..=max_parts parts.
fn weight_partitions(denominator: u64, max_parts: usize) -> Vec<Vec<u64>> {
    fn recurse(remaining: u64, cap: u64, left: usize, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        if left == 0 {
            return;
        }
        let hi = remaining.min(cap);
        for part in (1..=hi).rev() {
            acc.push(part);
            recurse(remaining - part, part, left - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    recurse(denominator, denominator, max_parts, &mut Vec::new(), &mut out);
    out
}

fn prospect_from(weights: &[Rat], utilities: &[Rat]) -> Prospect {
    Prospect::from_pairs(
        &weights
            .iter()
            .cloned()
            .zip(utilities.iter().cloned())
            .collect::<Vec<_>>(),
    )
    .expect("grid weights sum to 1")
}

fn perturb(base: &Prospect, epsilon: &Rat, probe: &Rat) -> Prospect {
    let mut entries = base.entries.clone();
    let scale = Rat::one() - epsilon;
    for e in &mut entries {
        e.weight *= &scale;
    }
    entries.push(super::ProspectEntry {
        outcome: None,
        weight: epsilon.clone(),
        utility: probe.clone(),
        good: None,
    });
    Prospect { entries }
}

/// Odometer over `slots` positions taking values 0..bases[slot].
fn next_index(indices: &mut [usize], bases: &[usize]) -> bool {
    for i in (0..indices.len()).rev() {
        indices[i] += 1;
        if indices[i] < bases[i] {
            return true;
        }
        indices[i] = 0;
    }
    false
}

fn parts_to_weights(parts: &[u64], denominator: u64) -> Vec<Rat> {
    parts
        .iter()
        .map(|&p| Rat::new((p as i64).into(), (denominator as i64).into()))
        .collect()
}

/// All utility tuples of the given arity, odometer order (last slot varies
/// fastest), as flat index -> tuple of utility indices.
fn tuple_count(values: usize, slots: usize) -> usize {
    values.pow(slots as u32)
}

fn tuple_utilities(cfg: &SearchConfig, index: usize, slots: usize) -> Vec<Rat> {
    let base = cfg.utilities.len();
    let mut idx = index;
    let mut utils = vec![Rat::zero(); slots];
    for slot in (0..slots).rev() {
        utils[slot] = cfg.utilities[idx % base].clone();
        idx /= base;
    }
    utils
}

use num_traits::Zero;

/// Precomputed ranking keys for every utility tuple over fixed weights;
/// `None` when the strategy has no key (it is then evaluated pairwise).
fn key_table(
    strategy: &Strategy,
    cfg: &SearchConfig,
    weights: &[Rat],
) -> Option<Vec<super::RankKey>> {
    let slots = weights.len();
    let mut keys = Vec::with_capacity(tuple_count(cfg.utilities.len(), slots));
    for index in 0..tuple_count(cfg.utilities.len(), slots) {
        let prospect = prospect_from(weights, &tuple_utilities(cfg, index, slots));
        keys.push(strategy.rank_key(&prospect)?);
    }
    Some(keys)
}

fn compare_tuples(
    strategy: &Strategy,
    cfg: &SearchConfig,
    weights: &[Rat],
    keys: &Option<Vec<super::RankKey>>,
    a: usize,
    b: usize,
) -> Preference {
    match keys {
        Some(table) => match table[a].cmp(&table[b]) {
            std::cmp::Ordering::Greater => Preference::First,
            std::cmp::Ordering::Less => Preference::Second,
            std::cmp::Ordering::Equal => Preference::Indifferent,
        },
        None => {
            let slots = weights.len();
            let pa = prospect_from(weights, &tuple_utilities(cfg, a, slots));
            let pb = prospect_from(weights, &tuple_utilities(cfg, b, slots));
            prefer(strategy, &pa, &pb)
        }
    }
}

fn dominance_search(strategy: &Strategy, cfg: &SearchConfig) -> SearchOutcome {
    let values = cfg.utilities.len();
    let mut checked = 0u64;
    for parts in weight_partitions(cfg.weight_denominator, cfg.max_outcomes) {
        let weights = parts_to_weights(&parts, cfg.weight_denominator);
        let k = weights.len();
        let keys = key_table(strategy, cfg, &weights);
        // odometer over pairs (low, high) per slot with low <= high
        let pairs: Vec<(usize, usize)> = (0..values)
            .flat_map(|a| (a..values).map(move |b| (a, b)))
            .collect();
        let mut pair_indices = vec![0usize; k];
        let bases = vec![pairs.len(); k];
        loop {
            let mut a_index = 0usize;
            let mut b_index = 0usize;
            let mut strict = false;
            for &pi in &pair_indices {
                let (lo, hi) = pairs[pi];
                a_index = a_index * values + lo;
                b_index = b_index * values + hi;
                strict |= lo != hi;
            }
            if strict {
                checked += 1;
                if compare_tuples(strategy, cfg, &weights, &keys, a_index, b_index)
                    == Preference::First
                {
                    let witness = Witness::P3Dominance {
                        preferred: prospect_from(&weights, &tuple_utilities(cfg, a_index, k)),
                        dominating: prospect_from(&weights, &tuple_utilities(cfg, b_index, k)),
                    };
                    assert!(witness.verify(strategy), "search produced a bad witness");
                    return SearchOutcome {
                        witness: Some(witness),
                        candidates_checked: checked,
                    };
                }
            }
            if !next_index(&mut pair_indices, &bases) {
                break;
            }
        }
    }
    SearchOutcome {
        witness: None,
        candidates_checked: checked,
    }
}

fn surething_search(strategy: &Strategy, cfg: &SearchConfig) -> SearchOutcome {
    let values = cfg.utilities.len();
    let mut checked = 0u64;
    for parts in weight_partitions(cfg.weight_denominator, cfg.max_outcomes) {
        if parts.len() < 2 {
            continue;
        }
        let weights = parts_to_weights(&parts, cfg.weight_denominator);
        let k = weights.len();
        let keys = key_table(strategy, cfg, &weights);
        let rest_count = tuple_count(values, k - 1);
        // flat tuple index with the common cell in slot 0
        let with_common = |c: usize, rest: usize| c * rest_count + rest;
        for c1 in 0..values {
            for c2 in (c1 + 1)..values {
                for a_rest in 0..rest_count {
                    for b_rest in 0..rest_count {
                        checked += 1;
                        let p1 = compare_tuples(
                            strategy,
                            cfg,
                            &weights,
                            &keys,
                            with_common(c1, a_rest),
                            with_common(c1, b_rest),
                        );
                        if p1 == Preference::Indifferent {
                            continue;
                        }
                        let p2 = compare_tuples(
                            strategy,
                            cfg,
                            &weights,
                            &keys,
                            with_common(c2, a_rest),
                            with_common(c2, b_rest),
                        );
                        if p2 == p1.flip() {
                            let witness = Witness::P2SureThing {
                                common_slot: 0,
                                first_pair: (
                                    prospect_from(
                                        &weights,
                                        &tuple_utilities(cfg, with_common(c1, a_rest), k),
                                    ),
                                    prospect_from(
                                        &weights,
                                        &tuple_utilities(cfg, with_common(c1, b_rest), k),
                                    ),
                                ),
                                first_preference: p1,
                                second_pair: (
                                    prospect_from(
                                        &weights,
                                        &tuple_utilities(cfg, with_common(c2, a_rest), k),
                                    ),
                                    prospect_from(
                                        &weights,
                                        &tuple_utilities(cfg, with_common(c2, b_rest), k),
                                    ),
                                ),
                                second_preference: p2,
                            };
                            assert!(witness.verify(strategy), "search produced a bad witness");
                            return SearchOutcome {
                                witness: Some(witness),
                                candidates_checked: checked,
                            };
                        }
                    }
                }
            }
        }
    }
    SearchOutcome {
        witness: None,
        candidates_checked: checked,
    }
}

fn transitivity_search(strategy: &Strategy, cfg: &SearchConfig) -> SearchOutcome {
    // prospects are non-decreasing utility tuples over equal-weight cells
    let k = cfg.max_outcomes.min(3).max(2);
    let weights: Vec<Rat> = vec![Rat::new(1.into(), (k as i64).into()); k];
    let mut candidates: Vec<Prospect> = Vec::new();
    let mut tuple = vec![0usize; k];
    loop {
        if tuple.windows(2).all(|w| w[0] <= w[1]) {
            let utils: Vec<Rat> = tuple.iter().map(|&i| cfg.utilities[i].clone()).collect();
            candidates.push(prospect_from(&weights, &utils));
        }
        if !next_index(&mut tuple, &vec![cfg.utilities.len(); k]) {
            break;
        }
    }
    let n = candidates.len();
    let mut strictly_over = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                strictly_over[i][j] =
                    prefer(strategy, &candidates[i], &candidates[j]) == Preference::First;
            }
        }
    }
    let mut checked = 0u64;
    for i in 0..n {
        for j in 0..n {
            if !strictly_over[i][j] {
                continue;
            }
            for l in 0..n {
                checked += 1;
                if strictly_over[j][l] && strictly_over[l][i] {
                    let witness = Witness::P1aTransitivity {
                        prospects: vec![
                            candidates[i].clone(),
                            candidates[j].clone(),
                            candidates[l].clone(),
                        ],
                    };
                    assert!(witness.verify(strategy), "search produced a bad witness");
                    return SearchOutcome {
                        witness: Some(witness),
                        candidates_checked: checked,
                    };
                }
            }
        }
    }
    SearchOutcome {
        witness: None,
        candidates_checked: checked,
    }
}

fn continuity_search(strategy: &Strategy, cfg: &SearchConfig) -> SearchOutcome {
    let mut checked = 0u64;
    for ua in &cfg.utilities {
        for ub in &cfg.utilities {
            let a = prospect_from(&[Rat::one()], std::slice::from_ref(ua));
            let b = prospect_from(&[Rat::one()], std::slice::from_ref(ub));
            if prefer(strategy, &a, &b) != Preference::First {
                continue;
            }
            for side in [ModifiedSide::Preferred, ModifiedSide::Other] {
                for probe in &cfg.continuity_probes {
                    checked += 1;
                    let mut reversals = Vec::with_capacity(cfg.continuity_epsilons.len());
                    let mut all_reversed = true;
                    for eps in &cfg.continuity_epsilons {
                        let got = match side {
                            ModifiedSide::Preferred => {
                                prefer(strategy, &perturb(&a, eps, probe), &b)
                            }
                            ModifiedSide::Other => prefer(strategy, &a, &perturb(&b, eps, probe)),
                        };
                        if got != Preference::Second {
                            all_reversed = false;
                            break;
                        }
                        reversals.push(ContinuityReversal {
                            epsilon: eps.clone(),
                            preference: got,
                        });
                    }
                    if all_reversed {
                        let witness = Witness::P6Continuity {
                            base_preferred: a.clone(),
                            base_other: b.clone(),
                            modified: side,
                            probe_utility: probe.clone(),
                            reversals,
                        };
                        assert!(witness.verify(strategy), "search produced a bad witness");
                        return SearchOutcome {
                            witness: Some(witness),
                            candidates_checked: checked,
                        };
                    }
                }
            }
        }
    }
    SearchOutcome {
        witness: None,
        candidates_checked: checked,
    }
}

/// Scans the bounded grid for a violation of the axiom; returns the first
/// (lexicographically smallest) verified witness or none-found.
pub fn find_violation(strategy: &Strategy, axiom: Axiom, cfg: &SearchConfig) -> SearchOutcome {
    match axiom {
        Axiom::P1aTransitivity => transitivity_search(strategy, cfg),
        Axiom::P2SureThing => surething_search(strategy, cfg),
        Axiom::P3Dominance => dominance_search(strategy, cfg),
        Axiom::P6Continuity => continuity_search(strategy, cfg),
    }
}
