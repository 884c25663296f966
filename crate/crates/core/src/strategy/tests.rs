use super::*;
use crate::exact::{rat, rat_int};
use proptest::prelude::{prop, prop_assert_eq, prop_assert_ne, proptest, ProptestConfig};
use proptest::strategy::Strategy as _;

fn pairs(xs: &[((i64, i64), i64)]) -> Prospect {
    Prospect::from_pairs(
        &xs.iter()
            .map(|&((wn, wd), u)| (rat(wn, wd), rat_int(u)))
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

fn atom(k: &RankKey, i: usize) -> &KeyAtom {
    &k.0[i]
}

#[test]
fn prospect_validation() {
    assert!(matches!(
        Prospect::new(vec![]),
        Err(ProspectError::Empty)
    ));
    assert!(matches!(
        Prospect::from_pairs(&[(rat(1, 2), rat_int(1))]),
        Err(ProspectError::WeightSum { .. })
    ));
    assert!(matches!(
        Prospect::from_pairs(&[(rat(3, 2), rat_int(1)), (rat(-1, 2), rat_int(0))]),
        Err(ProspectError::NegativeWeight { index: 1 })
    ));
}

#[test]
fn mean_key_is_weighted_mean() {
    let key = Strategy::mean_utilitarian()
        .rank_key(&pairs(&[((1, 2), 10), ((1, 2), 0)]))
        .unwrap();
    assert_eq!(key, RankKey(vec![KeyAtom::Finite(rat_int(5))]));
}

#[test]
fn median_key_primary_at_cumulative_half() {
    let p = pairs(&[((3, 10), 0), ((3, 10), 5), ((4, 10), 10)]);
    let key = Strategy::median_utilitarian().rank_key(&p).unwrap();
    assert_eq!(atom(&key, 0), &KeyAtom::Finite(rat_int(5)));
}

#[test]
fn rawlsian_key_leads_with_worst_utility() {
    let risky = pairs(&[((1, 2), 10), ((1, 2), 0)]);
    let safe = pairs(&[((1, 1), 4)]);
    let s = Strategy::price_rawlsian();
    let k_risky = s.rank_key(&risky).unwrap();
    let k_safe = s.rank_key(&safe).unwrap();
    assert_eq!(atom(&k_risky, 0), &KeyAtom::Finite(rat_int(0)));
    assert_eq!(atom(&k_safe, 0), &KeyAtom::Finite(rat_int(4)));
    assert_eq!(prefer(&s, &risky, &safe), Preference::Second);
}

#[test]
fn rawlsian_tie_break_prefers_less_mass_at_the_bottom() {
    let lighter = pairs(&[((1, 10), 0), ((9, 10), 5)]);
    let heavier = pairs(&[((9, 10), 0), ((1, 10), 5)]);
    assert_eq!(
        prefer(&Strategy::price_rawlsian(), &lighter, &heavier),
        Preference::First
    );
    // elitist mirror: more mass at the top wins
    let top_heavy = pairs(&[((9, 10), 5), ((1, 10), 0)]);
    let top_light = pairs(&[((1, 10), 5), ((9, 10), 0)]);
    assert_eq!(
        prefer(&Strategy::future_self_elitist(), &top_heavy, &top_light),
        Preference::First
    );
}

#[test]
fn mean_prefers_higher_expectation() {
    let s = Strategy::mean_utilitarian();
    let a = pairs(&[((1, 2), 10), ((1, 2), 0)]);
    let b = pairs(&[((1, 1), 4)]);
    assert_eq!(prefer(&s, &a, &b), Preference::First);
}

#[test]
fn rivalrous_prefers_margin_over_statewise_dominance() {
    let s = Strategy::rivalrous_elitist();
    let a = pairs(&[((1, 2), 10), ((1, 2), 0)]);
    let b = pairs(&[((1, 2), 10), ((1, 2), 9)]);
    // b dominates a statewise, yet the wider winning margin carries the day
    assert_eq!(prefer(&s, &a, &b), Preference::First);
}

#[test]
fn rivalrous_sole_utility_wins_outright() {
    let s = Strategy::rivalrous_elitist();
    let solo = pairs(&[((1, 1), 10)]);
    let contested = pairs(&[((1, 2), 10), ((1, 2), 0)]);
    assert_eq!(prefer(&s, &solo, &contested), Preference::First);
}

#[test]
fn x_percentile_ignores_the_tail_below_x() {
    let s = Strategy::x_percentile(rat_int(10)).unwrap();
    let a = pairs(&[((1, 100), -1000), ((99, 100), 5)]);
    let b = pairs(&[((1, 1), 4)]);
    assert_eq!(prefer(&s, &a, &b), Preference::First);
}

#[test]
fn percentile_domain_is_open() {
    assert!(Strategy::x_percentile(rat_int(0)).is_err());
    assert!(Strategy::x_percentile(rat_int(100)).is_err());
    assert!(Strategy::x_percentile(rat(1, 2)).is_ok());
}

#[test]
fn distribution_engineer_tables() {
    // f1 rewards utility 1, f2 rewards spread pairs (0, 1)
    let kind = StrategyKind::DistributionEngineer {
        f1: vec![(rat_int(1), rat_int(2))],
        f2: vec![(rat_int(0), rat_int(1), rat_int(8))],
    };
    let s = Strategy::new(kind).unwrap();
    let spread = pairs(&[((1, 2), 0), ((1, 2), 1)]);
    let sure = pairs(&[((1, 1), 1)]);
    // spread: f1 term 2 * 1/2 = 1, f2 term 8 * 1/4 = 2 -> 3; sure: 2
    let k_spread = s.rank_key(&spread).unwrap();
    let k_sure = s.rank_key(&sure).unwrap();
    assert_eq!(k_spread, RankKey(vec![KeyAtom::Finite(rat_int(3))]));
    assert_eq!(k_sure, RankKey(vec![KeyAtom::Finite(rat_int(2))]));
    assert_eq!(prefer(&s, &spread, &sure), Preference::First);
}

#[test]
fn democrat_has_no_key() {
    assert!(Strategy::future_self_democrat(None)
        .rank_key(&pairs(&[((1, 1), 0)]))
        .is_none());
}

// -----------------------------------------------------------------------
// elections
// -----------------------------------------------------------------------

#[test]
fn unanimous_election() {
    let prospects = vec![pairs(&[((1, 1), 5)]), pairs(&[((1, 1), 3)])];
    let report = run_election(
        &prospects,
        WeightMode::WeightSensitive,
        Electorate::IntervalExact,
    )
    .unwrap();
    assert_eq!(report.rounds.len(), 1);
    assert_eq!(report.rounds[0].tallies[0].1 .0, rat_int(1));
    assert!(matches!(
        report.outcome,
        stv::ElectionOutcome::Winner { id: 0 }
    ));
}

#[test]
fn identical_prospects_tie() {
    let p = pairs(&[((1, 2), 1), ((1, 2), 3)]);
    let err = elect_stv(
        &[p.clone(), p],
        WeightMode::WeightSensitive,
        Electorate::IntervalExact,
    )
    .unwrap_err();
    assert_eq!(err, ElectionError::Tie { ids: vec![0, 1] });
}

/// Three prospects with cyclic pairwise majorities; derived by hand from
/// the interval electorate and cross-checked against a uniform grid.
fn condorcet_triple() -> Vec<Prospect> {
    vec![
        pairs(&[((3, 10), 3), ((3, 10), 4), ((4, 10), 8)]),
        pairs(&[((3, 10), 2), ((4, 10), 6), ((3, 10), 7)]),
        pairs(&[((3, 10), 1), ((3, 10), 5), ((4, 10), 9)]),
    ]
}

#[test]
fn condorcet_cycle_still_elects() {
    let prospects = condorcet_triple();
    let democrat = Strategy::future_self_democrat(None);
    // pairwise preference cycles: A > B > C > A
    assert_eq!(
        prefer(&democrat, &prospects[0], &prospects[1]),
        Preference::First
    );
    assert_eq!(
        prefer(&democrat, &prospects[1], &prospects[2]),
        Preference::First
    );
    assert_eq!(
        prefer(&democrat, &prospects[2], &prospects[0]),
        Preference::First
    );
    // the election is still decisive
    let winner = elect_stv(
        &prospects,
        WeightMode::WeightSensitive,
        Electorate::IntervalExact,
    )
    .unwrap();
    assert_eq!(winner, 1);
}

#[test]
fn grid_electorate_matches_intervals_on_aligned_weights() {
    let prospects = condorcet_triple();
    let exact = run_election(
        &prospects,
        WeightMode::WeightSensitive,
        Electorate::IntervalExact,
    )
    .unwrap();
    let grid = run_election(
        &prospects,
        WeightMode::WeightSensitive,
        Electorate::Grid { points: 10_000 },
    )
    .unwrap();
    assert_eq!(exact.rounds.len(), grid.rounds.len());
    for (a, b) in exact.rounds.iter().zip(&grid.rounds) {
        assert_eq!(a.tallies, b.tallies);
        assert_eq!(a.eliminated, b.eliminated);
    }
    assert_eq!(exact.outcome, grid.outcome);
}

#[test]
fn election_needs_two_prospects() {
    let err = elect_stv(
        &[pairs(&[((1, 1), 1)])],
        WeightMode::WeightSensitive,
        Electorate::IntervalExact,
    )
    .unwrap_err();
    assert!(matches!(err, ElectionError::TooFewProspects { got: 1 }));
}

// -----------------------------------------------------------------------
// axiom searches
// -----------------------------------------------------------------------

#[test]
fn rivalrous_dominance_witness_found_and_verified() {
    let s = Strategy::rivalrous_elitist();
    let outcome = find_violation(&s, Axiom::P3Dominance, &SearchConfig::default());
    let witness = outcome.witness.expect("dominance witness");
    assert!(witness.verify(&s));
}

#[test]
fn rawlsian_continuity_witness_is_the_unit_bet_family() {
    let s = Strategy::price_rawlsian();
    let outcome = find_violation(&s, Axiom::P6Continuity, &SearchConfig::default());
    match outcome.witness.expect("continuity witness") {
        Witness::P6Continuity {
            base_preferred,
            base_other,
            modified,
            probe_utility,
            reversals,
        } => {
            assert_eq!(base_preferred, pairs(&[((1, 1), 1)]));
            assert_eq!(base_other, pairs(&[((1, 1), 0)]));
            assert_eq!(modified, ModifiedSide::Preferred);
            assert_eq!(probe_utility, rat_int(-100));
            assert_eq!(reversals.len(), 3);
        }
        other => panic!("unexpected witness {other:?}"),
    }
}

#[test]
fn elitist_continuity_witness_modifies_the_loser() {
    let s = Strategy::future_self_elitist();
    let outcome = find_violation(&s, Axiom::P6Continuity, &SearchConfig::default());
    match outcome.witness.expect("continuity witness") {
        Witness::P6Continuity { modified, .. } => {
            assert_eq!(modified, ModifiedSide::Other);
        }
        other => panic!("unexpected witness {other:?}"),
    }
}

#[test]
fn median_surething_witness_found() {
    let s = Strategy::median_utilitarian();
    let outcome = find_violation(&s, Axiom::P2SureThing, &SearchConfig::default());
    let witness = outcome.witness.expect("sure-thing witness");
    assert!(witness.verify(&s));
}

#[test]
fn democrat_transitivity_witness_found() {
    let s = Strategy::future_self_democrat(None);
    let outcome = find_violation(&s, Axiom::P1aTransitivity, &SearchConfig::default());
    let witness = outcome.witness.expect("transitivity witness");
    assert!(witness.verify(&s));
}

#[test]
fn mean_utilitarian_clears_dominance_and_continuity() {
    // the remaining two proxies run in the acceptance suite; these two are
    // the fast ones
    let s = Strategy::mean_utilitarian();
    let cfg = SearchConfig::default();
    assert!(find_violation(&s, Axiom::P6Continuity, &cfg).witness.is_none());
    assert!(find_violation(&s, Axiom::P1aTransitivity, &cfg).witness.is_none());
}

// -----------------------------------------------------------------------
// caring weights and the radiation-field offer
// -----------------------------------------------------------------------

#[test]
fn caring_weights_three_then_two() {
    let tree = HistoryTree::experiment(vec![
        HistoryTree::experiment(vec![HistoryTree::leaf(), HistoryTree::leaf()]),
        HistoryTree::leaf(),
        HistoryTree::leaf(),
    ]);
    let weights =
        successor_caring_weights(&tree, CaringScheme::MemoryBranchCounting).unwrap();
    assert_eq!(weights, vec![rat(1, 6), rat(1, 6), rat(1, 3), rat(1, 3)]);
}

#[test]
fn caring_weights_trivial_trees() {
    let single = successor_caring_weights(
        &HistoryTree::leaf(),
        CaringScheme::MemoryBranchCounting,
    )
    .unwrap();
    assert_eq!(single, vec![rat_int(1)]);

    let flat = HistoryTree::experiment(vec![HistoryTree::leaf(); 4]);
    let weights =
        successor_caring_weights(&flat, CaringScheme::MemoryBranchCounting).unwrap();
    assert_eq!(weights, vec![rat(1, 4); 4]);

    let unary = HistoryTree::experiment(vec![HistoryTree::leaf()]);
    assert!(matches!(
        successor_caring_weights(&unary, CaringScheme::MemoryBranchCounting),
        Err(TreeError::UnaryExperiment { got: 1 })
    ));
}

fn radiation(granularity: u64, lethality: Rat) -> TimescaleParams {
    TimescaleParams {
        percentile: rat_int(10),
        pay_per_step: rat_int(1),
        lethality,
        horizon: 3600,
        granularity,
        death_utility: timescale_default_death_utility(),
    }
}

#[test]
fn per_second_offer_accepted() {
    let decisions = timescale_decisions(&radiation(1, rat(1, 100))).unwrap();
    assert_eq!(decisions.len(), 3600);
    assert!(decisions.iter().all(|d| d.accept));
    assert_eq!(decisions[0].death_mass, rat(1, 100));
}

#[test]
fn per_hour_offer_declined() {
    let decisions = timescale_decisions(&radiation(3600, rat(1, 100))).unwrap();
    assert_eq!(decisions.len(), 1);
    assert!(!decisions[0].accept);
    assert_eq!(
        decisions[0].survival_mass,
        crate::exact::rat_pow(&rat(99, 100), 3600)
    );
}

#[test]
fn riskless_offer_always_accepted() {
    for g in [1u64, 60, 3600] {
        let decisions = timescale_decisions(&radiation(g, rat_int(0))).unwrap();
        assert!(decisions.iter().all(|d| d.accept));
    }
}

#[test]
fn granularity_must_divide_horizon() {
    assert!(matches!(
        timescale_decisions(&radiation(7, rat(1, 100))),
        Err(TimescaleError::GranularityMismatch { .. })
    ));
}

// -----------------------------------------------------------------------
// properties
// -----------------------------------------------------------------------

fn arb_prospect(max_entries: usize) -> impl proptest::strategy::Strategy<Value = Prospect> {
    prop::collection::vec((1u8..=6, -12i16..=12), 1..=max_entries).prop_map(|cells| {
        let total: i64 = cells.iter().map(|&(w, _)| w as i64).sum();
        Prospect::from_pairs(
            &cells
                .iter()
                .map(|&(w, u)| (rat(w as i64, total), rat_int(u as i64)))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    })
}

fn key_strategies() -> Vec<Strategy> {
    vec![
        Strategy::mean_utilitarian(),
        Strategy::price_rawlsian(),
        Strategy::future_self_elitist(),
        Strategy::rivalrous_elitist(),
        Strategy::median_utilitarian(),
        Strategy::x_percentile(rat_int(10)).unwrap(),
        Strategy::x_percentile(rat_int(85)).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Key comparison yields a total preorder: strict preference is
    /// transitive and prefer() agrees with its own flip.
    #[test]
    fn prop_total_preorder(
        a in arb_prospect(4),
        b in arb_prospect(4),
        c in arb_prospect(4),
    ) {
        for s in key_strategies() {
            let ab = prefer(&s, &a, &b);
            prop_assert_eq!(ab, prefer(&s, &b, &a).flip());
            if ab == Preference::First && prefer(&s, &b, &c) == Preference::First {
                prop_assert_eq!(prefer(&s, &a, &c), Preference::First);
            }
        }
    }

    /// Statewise dominance: with aligned weights and pointwise-greater
    /// utilities, the dominated prospect is never strictly preferred.
    #[test]
    fn prop_statewise_dominance(
        cells in prop::collection::vec((1u8..=6, -10i16..=10, 0u8..=5), 1..=4),
    ) {
        let total: i64 = cells.iter().map(|&(w, _, _)| w as i64).sum();
        let low = Prospect::from_pairs(&cells.iter()
            .map(|&(w, u, _)| (rat(w as i64, total), rat_int(u as i64)))
            .collect::<Vec<_>>()).unwrap();
        let high = Prospect::from_pairs(&cells.iter()
            .map(|&(w, u, lift)| (rat(w as i64, total), rat_int(u as i64 + lift as i64)))
            .collect::<Vec<_>>()).unwrap();
        for s in [
            Strategy::mean_utilitarian(),
            Strategy::price_rawlsian(),
            Strategy::median_utilitarian(),
            Strategy::x_percentile(rat_int(25)).unwrap(),
        ] {
            prop_assert_ne!(prefer(&s, &low, &high), Preference::First);
        }
    }

    /// Splitting an entry into two of the same utility never moves the
    /// mean utilitarian's key.
    #[test]
    fn prop_mean_branch_refinement_invariance(
        p in arb_prospect(4),
        index in 0usize..4,
        num in 1u8..=3,
    ) {
        let s = Strategy::mean_utilitarian();
        let index = index % p.entries.len();
        let slice = rat(num as i64, 4) * &p.entries[index].weight;
        let mut entries = p.entries.clone();
        let rest = &entries[index].weight - &slice;
        entries[index].weight = slice;
        entries.push(ProspectEntry {
            outcome: None,
            weight: rest,
            utility: entries[index].utility.clone(),
            good: None,
        });
        let refined = Prospect { entries };
        prop_assert_eq!(s.rank_key(&p), s.rank_key(&refined));
    }

    /// A weight-indifferent strategy equals its weight-sensitive twin run
    /// on the uniform reweighting of the prospect.
    #[test]
    fn prop_weight_indifference_correspondence(p in arb_prospect(4)) {
        let n = p.entries.len() as i64;
        let uniform = Prospect::from_pairs(
            &p.entries.iter()
                .map(|e| (rat(1, n), e.utility.clone()))
                .collect::<Vec<_>>()).unwrap();
        for s in key_strategies() {
            let indifferent = s.clone().weight_indifferent();
            prop_assert_eq!(indifferent.rank_key(&p), s.rank_key(&uniform));
        }
    }

    /// When the worst utility class holds at least x/100 of the mass, the
    /// x-percentile primary key collapses to the Rawlsian primary key; the
    /// mirror statement holds at the top for the elitist.
    #[test]
    fn prop_percentile_limits(p in arb_prospect(4), x_percent in 1i64..=99) {
        let x = rat_int(x_percent);
        let s = Strategy::x_percentile(x.clone()).unwrap();
        let profile = UtilityProfile::new(&p, WeightMode::WeightSensitive);
        let (min_u, min_w) = profile.classes.first().unwrap().clone();
        let (max_u, max_w) = profile.classes.last().unwrap().clone();
        let key = s.rank_key(&p).unwrap();
        if min_w >= &x / rat_int(100) {
            prop_assert_eq!(atom(&key, 0), &KeyAtom::Finite(min_u));
        }
        if max_w > rat_int(1) - &x / rat_int(100) {
            prop_assert_eq!(atom(&key, 0), &KeyAtom::Finite(max_u));
        }
    }
}
