//! Confirmation dynamics: inhabitants infer branch weights from their
//! tapes, grade every tape class by the importance measure their own
//! theory induces, and the census tabulates how much "confirmation" each
//! class awards itself under a chosen external measure.

use crate::exact::{self, multinomial, rat_pow, Nat, Rat};
use crate::multiverse::{
    ensemble_measure, evolve, BranchClass, MeasureKind, MultiverseSpec, MultiverseError, Variant,
};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A hypothesis about the outcome weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightTheory(#[serde(with = "exact::serde_rat_vec")] pub Vec<Rat>);

impl WeightTheory {
    pub fn uniform(outcomes: usize) -> WeightTheory {
        WeightTheory(vec![
            Rat::new(1.into(), (outcomes as i64).into());
            outcomes
        ])
    }

    pub fn binary(p: Rat) -> WeightTheory {
        let q = Rat::one() - &p;
        WeightTheory(vec![p, q])
    }

    /// L-infinity distance between weight vectors.
    pub fn distance(&self, other: &WeightTheory) -> Rat {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfirmationError {
    #[error("cannot infer weights from an empty tape")]
    EmptyTape,
    #[error("every hypothesis on the grid assigns zero likelihood to the observation")]
    ZeroEvidence,
    #[error("posterior grid is empty")]
    EmptyGrid,
    #[error(transparent)]
    Multiverse(#[from] MultiverseError),
}

/// Relative-frequency inference: the weight theory an inhabitant of the
/// class settles on after reading the tape.
pub fn infer_weights(class: &BranchClass) -> Result<WeightTheory, ConfirmationError> {
    let presses = class.presses();
    if presses == 0 {
        return Err(ConfirmationError::EmptyTape);
    }
    let n = Rat::from_integer((presses as i64).into());
    Ok(WeightTheory(
        class
            .counts
            .iter()
            .map(|&r| Rat::from_integer((r as i64).into()) / n.clone())
            .collect(),
    ))
}

/// Discrete Bayesian posterior over a grid of weight hypotheses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorGrid {
    pub hypotheses: Vec<WeightTheory>,
    #[serde(with = "exact::serde_rat_vec")]
    pub masses: Vec<Rat>,
}

impl PosteriorGrid {
    /// Uniform prior over binary hypotheses p in {0, 1/resolution, ..., 1}.
    pub fn uniform_binary(resolution: u64) -> PosteriorGrid {
        let n = resolution + 1;
        let mass = Rat::new(1.into(), (n as i64).into());
        PosteriorGrid {
            hypotheses: (0..n)
                .map(|i| {
                    WeightTheory::binary(Rat::new(
                        (i as i64).into(),
                        (resolution as i64).into(),
                    ))
                })
                .collect(),
            masses: vec![mass; n as usize],
        }
    }

    pub fn mode(&self) -> &WeightTheory {
        let mut best = 0;
        for i in 1..self.masses.len() {
            if self.masses[i] > self.masses[best] {
                best = i;
            }
        }
        &self.hypotheses[best]
    }

    /// Total posterior mass on hypotheses matching the predicate.
    pub fn mass_where(&self, mut pred: impl FnMut(&WeightTheory) -> bool) -> Rat {
        self.hypotheses
            .iter()
            .zip(&self.masses)
            .filter(|(h, _)| pred(h))
            .map(|(_, m)| m.clone())
            .sum()
    }
}

/// Bayes update on an observed tape class: posterior(h) is proportional to
/// prior(h) times the per-branch likelihood of the counts under h.
pub fn update_posterior(
    grid: &PosteriorGrid,
    class: &BranchClass,
) -> Result<PosteriorGrid, ConfirmationError> {
    if grid.hypotheses.is_empty() {
        return Err(ConfirmationError::EmptyGrid);
    }
    let raw: Vec<Rat> = grid
        .hypotheses
        .iter()
        .zip(&grid.masses)
        .map(|(h, prior)| {
            let mut likelihood = Rat::one();
            for (i, &r) in class.counts.iter().enumerate() {
                likelihood *= rat_pow(&h.0[i], r);
            }
            prior * likelihood
        })
        .collect();
    let total: Rat = raw.iter().sum();
    if total.is_zero() {
        return Err(ConfirmationError::ZeroEvidence);
    }
    Ok(PosteriorGrid {
        hypotheses: grid.hypotheses.clone(),
        masses: raw.into_iter().map(|m| m / total.clone()).collect(),
    })
}

/// Importance mass the theory assigns to a whole tape class: the
/// per-branch importance `prod_i t_i^{r_i}` times the number of tapes in
/// the class. Summed over all classes at fixed press count this is exactly
/// 1 for any theory.
pub fn importance_mass(theory: &WeightTheory, counts: &[u64]) -> Rat {
    Rat::from_integer(multinomial(counts).into()) * branch_importance(theory, counts)
}

/// Per-branch importance of a single tape with the given counts.
pub fn branch_importance(theory: &WeightTheory, counts: &[u64]) -> Rat {
    let mut mass = Rat::one();
    for (i, &r) in counts.iter().enumerate() {
        mass *= rat_pow(&theory.0[i], r);
    }
    mass
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub counts: Vec<u64>,
    #[serde(with = "exact::serde_nat")]
    pub multiplicity: Nat,
    pub inferred_theory: WeightTheory,
    /// Importance mass, under this class's own inferred theory, of all
    /// classes whose inferred theory lies within the census tolerance.
    #[serde(with = "exact::serde_rat")]
    pub self_confirmation_mass: Rat,
    /// This class's mass under the externally requested measure.
    #[serde(with = "exact::serde_rat")]
    pub measure_mass: Rat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub spec: MultiverseSpec,
    pub steps: u64,
    pub measure: MeasureKind,
    #[serde(with = "exact::serde_rat")]
    pub tolerance: Rat,
    /// True when steps = 0 and the empty-tape convention (uniform theory)
    /// was applied.
    pub degenerate_empty_tape: bool,
    pub rows: Vec<CensusRow>,
}

fn inferred_or_uniform(class: &BranchClass, outcomes: usize) -> WeightTheory {
    infer_weights(class).unwrap_or_else(|_| WeightTheory::uniform(outcomes))
}

/// Runs the full confirmation census of an evolved ensemble.
///
/// The per-class sums run in big-integer arithmetic over the common
/// denominator steps^steps, so a census row costs one rational reduction
/// instead of one per term.
pub fn confirmation_census(
    spec: &MultiverseSpec,
    steps: u64,
    measure: MeasureKind,
    tolerance: &Rat,
) -> Result<CensusReport, ConfirmationError> {
    let ensemble = evolve(spec, steps)?;
    let measure_masses = ensemble_measure(&ensemble, measure)?;
    let theories: Vec<WeightTheory> = ensemble
        .classes
        .iter()
        .map(|c| inferred_or_uniform(c, spec.outcome_count))
        .collect();
    let multiplicities: Vec<Nat> = ensemble
        .classes
        .iter()
        .map(|c| multinomial(&c.counts))
        .collect();
    // theory_r = counts_r / steps, so importance sums share the
    // denominator steps^steps
    let denominator: Nat = if steps == 0 {
        Nat::one()
    } else {
        crate::exact::nat_pow(&Nat::from(steps), steps)
    };
    // |r'_k - r_k| / steps <= tolerance, cross-multiplied to integers
    let tol_times_steps: Int = tolerance.numer() * Int::from(steps);
    let tol_denom: Int = tolerance.denom().clone();
    let within = |a: &[u64], b: &[u64]| {
        a.iter()
            .zip(b)
            .all(|(&x, &y)| Int::from(x.abs_diff(y)) * &tol_denom <= tol_times_steps)
    };
    let rows = ensemble
        .classes
        .iter()
        .enumerate()
        .map(|(i, class)| {
            // power tables base^j for each component of this class's theory
            let tables: Vec<Vec<Nat>> = class
                .counts
                .iter()
                .map(|&base| {
                    let mut t = Vec::with_capacity(steps as usize + 1);
                    t.push(Nat::one());
                    for j in 1..=steps as usize {
                        let next = &t[j - 1] * Nat::from(base);
                        t.push(next);
                    }
                    t
                })
                .collect();
            let mut sum = Nat::zero();
            for (j, other) in ensemble.classes.iter().enumerate() {
                if within(&class.counts, &other.counts) {
                    let mut term = multiplicities[j].clone();
                    for (k, &rk) in other.counts.iter().enumerate() {
                        term *= &tables[k][rk as usize];
                    }
                    sum += term;
                }
            }
            CensusRow {
                counts: class.counts.clone(),
                multiplicity: class.multiplicity.clone(),
                inferred_theory: theories[i].clone(),
                self_confirmation_mass: Rat::new(sum.into(), denominator.clone().into()),
                measure_mass: measure_masses[i].clone(),
            }
        })
        .collect();
    Ok(CensusReport {
        spec: spec.clone(),
        steps,
        measure,
        tolerance: tolerance.clone(),
        degenerate_empty_tape: steps == 0,
        rows,
    })
}

/// Confirmation mass of a reference theory under the counting measure and
/// under the spec's caring measure, side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureComparison {
    pub spec: MultiverseSpec,
    pub steps: u64,
    pub reference: WeightTheory,
    #[serde(with = "exact::serde_rat")]
    pub tolerance: Rat,
    /// Classes whose inferred theory falls within tolerance of the
    /// reference.
    pub near_reference_classes: Vec<Vec<u64>>,
    /// Their mass under the explanatory counting measure. The counting
    /// measure is reported as an assumption, not a derived fact.
    #[serde(with = "exact::serde_rat")]
    pub counting_mass: Rat,
    pub caring_kind: MeasureKind,
    /// Their mass under the caring measure backing the spec (branch
    /// weights for the replicating machine, qualia intensity otherwise).
    #[serde(with = "exact::serde_rat")]
    pub caring_mass: Rat,
    pub degenerate_empty_tape: bool,
}

/// Requires a spec whose caring measure is actually backed by something:
/// replication counts or qualia factors.
pub fn compare_measures(
    spec: &MultiverseSpec,
    steps: u64,
    reference: &WeightTheory,
    tolerance: &Rat,
) -> Result<MeasureComparison, ConfirmationError> {
    let caring_kind = match (spec.variant, &spec.qualia) {
        (Variant::Replicating, _) => MeasureKind::Weight,
        (_, Some(_)) => MeasureKind::Qualia,
        _ => {
            return Err(ConfirmationError::Multiverse(
                MultiverseError::MeasureUnavailable {
                    kind: MeasureKind::Qualia,
                    reason: "spec is neither replicating nor qualia-enhanced".into(),
                },
            ))
        }
    };
    let ensemble = evolve(spec, steps)?;
    let counting = ensemble_measure(&ensemble, MeasureKind::Counting)?;
    let caring = ensemble_measure(&ensemble, caring_kind)?;
    let mut near = Vec::new();
    let mut counting_mass = Rat::zero();
    let mut caring_mass = Rat::zero();
    for (i, class) in ensemble.classes.iter().enumerate() {
        let theory = inferred_or_uniform(class, spec.outcome_count);
        if theory.distance(reference) <= *tolerance {
            near.push(class.counts.clone());
            counting_mass += &counting[i];
            caring_mass += &caring[i];
        }
    }
    Ok(MeasureComparison {
        spec: spec.clone(),
        steps,
        reference: reference.clone(),
        tolerance: tolerance.clone(),
        near_reference_classes: near,
        counting_mass,
        caring_kind,
        caring_mass,
        degenerate_empty_tape: steps == 0,
    })
}

/// Floating-point census rendition for press counts too large for exact
/// arithmetic. Reporting only: acceptance-grade numbers always come from
/// the exact path. Binary machines only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatCensusReport {
    pub steps: u64,
    pub measure: MeasureKind,
    pub tolerance: f64,
    pub rows: Vec<FloatCensusRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatCensusRow {
    pub zero_count: u64,
    pub inferred_p: f64,
    pub self_confirmation_mass: f64,
    pub measure_mass: f64,
}

fn ln_factorials(n: u64) -> Vec<f64> {
    let mut table = Vec::with_capacity((n + 1) as usize);
    table.push(0.0);
    let mut acc = 0.0f64;
    for i in 1..=n {
        acc += (i as f64).ln();
        table.push(acc);
    }
    table
}

pub fn confirmation_census_float(
    spec: &MultiverseSpec,
    steps: u64,
    measure: MeasureKind,
    tolerance: f64,
) -> Result<FloatCensusReport, ConfirmationError> {
    if spec.outcome_count != 2 {
        return Err(ConfirmationError::Multiverse(
            MultiverseError::MeasureUnavailable {
                kind: measure,
                reason: "float census is implemented for binary machines only".into(),
            },
        ));
    }
    if steps == 0 {
        return Ok(FloatCensusReport {
            steps,
            measure,
            tolerance,
            rows: vec![FloatCensusRow {
                zero_count: 0,
                inferred_p: 0.5,
                self_confirmation_mass: 1.0,
                measure_mass: 1.0,
            }],
        });
    }
    let lnf = ln_factorials(steps);
    let ln_choose = |r: u64| lnf[steps as usize] - lnf[r as usize] - lnf[(steps - r) as usize];
    // log-weight of class r under the external measure, up to normalization
    let ln_measure: Vec<f64> = match measure {
        MeasureKind::Counting => {
            let per_outcome: [f64; 2] = [
                (spec.successor_count(0) as f64).ln(),
                (spec.successor_count(1) as f64).ln(),
            ];
            (0..=steps)
                .map(|r| {
                    ln_choose(r)
                        + r as f64 * per_outcome[0]
                        + (steps - r) as f64 * per_outcome[1]
                })
                .collect()
        }
        MeasureKind::Weight => {
            let w = spec.normative_weights().ok_or(
                MultiverseError::MeasureUnavailable {
                    kind: measure,
                    reason: "spec carries no normative weights".into(),
                },
            )?;
            let (p0, p1) = (rat_to_f64_or_zero(&w[0]), rat_to_f64_or_zero(&w[1]));
            (0..=steps)
                .map(|r| {
                    ln_choose(r) + r as f64 * p0.ln() + (steps - r) as f64 * p1.ln()
                })
                .collect()
        }
        MeasureKind::Qualia => {
            let q = spec.qualia.as_ref().ok_or(MultiverseError::MeasureUnavailable {
                kind: measure,
                reason: "spec declares no qualia factors".into(),
            })?;
            let per_outcome: [f64; 2] = [
                spec.successor_count(0) as f64 * rat_to_f64_or_zero(&q[0]),
                spec.successor_count(1) as f64 * rat_to_f64_or_zero(&q[1]),
            ];
            (0..=steps)
                .map(|r| {
                    ln_choose(r)
                        + r as f64 * per_outcome[0].ln()
                        + (steps - r) as f64 * per_outcome[1].ln()
                })
                .collect()
        }
    };
    let max_ln = ln_measure.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = ln_measure.iter().map(|l| (l - max_ln).exp()).sum();
    let measure_mass: Vec<f64> = ln_measure
        .iter()
        .map(|l| (l - max_ln).exp() / total)
        .collect();

    // the tolerance window in whole classes, robust at the boundary
    let window = (tolerance * steps as f64 + 1e-9).floor() as i64;
    let rows = (0..=steps)
        .map(|r| {
            let p = r as f64 / steps as f64;
            let self_mass: f64 = (0..=steps)
                .filter(|&r2| (r2 as i64 - r as i64).abs() <= window)
                .map(|r2| {
                    let ln_term = ln_choose(r2)
                        + if r2 > 0 { r2 as f64 * p.ln() } else { 0.0 }
                        + if r2 < steps {
                            (steps - r2) as f64 * (1.0 - p).ln()
                        } else {
                            0.0
                        };
                    ln_term.exp()
                })
                .sum();
            FloatCensusRow {
                zero_count: r,
                inferred_p: p,
                self_confirmation_mass: self_mass,
                measure_mass: measure_mass[r as usize],
            }
        })
        .collect();
    Ok(FloatCensusReport {
        steps,
        measure,
        tolerance,
        rows,
    })
}

fn rat_to_f64_or_zero(x: &Rat) -> f64 {
    exact::rat_to_f64(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{binomial, rat, rat_int};

    fn class(counts: &[u64]) -> BranchClass {
        BranchClass {
            counts: counts.to_vec(),
            multiplicity: multinomial(counts),
            weight_mass: None,
            decoration: None,
        }
    }

    #[test]
    fn infer_relative_frequencies() {
        assert_eq!(
            infer_weights(&class(&[3, 1])).unwrap(),
            WeightTheory(vec![rat(3, 4), rat(1, 4)])
        );
        assert_eq!(
            infer_weights(&class(&[0, 7])).unwrap(),
            WeightTheory(vec![rat_int(0), rat_int(1)])
        );
        assert_eq!(
            infer_weights(&class(&[50, 50])).unwrap(),
            WeightTheory(vec![rat(1, 2), rat(1, 2)])
        );
        assert!(matches!(
            infer_weights(&class(&[0, 0])),
            Err(ConfirmationError::EmptyTape)
        ));
    }

    #[test]
    fn posterior_forced_by_support() {
        let grid = PosteriorGrid::uniform_binary(2); // p in {0, 1/2, 1}
        let updated = update_posterior(&grid, &class(&[1, 1])).unwrap();
        assert_eq!(updated.masses, vec![rat_int(0), rat_int(1), rat_int(0)]);
    }

    #[test]
    fn posterior_identity_on_empty_observation() {
        let grid = PosteriorGrid::uniform_binary(4);
        let updated = update_posterior(&grid, &class(&[0, 0])).unwrap();
        assert_eq!(updated, grid);
    }

    #[test]
    fn posterior_zero_evidence() {
        // hypotheses p = 0 and p = 1 both rule out a mixed tape
        let grid = PosteriorGrid {
            hypotheses: vec![
                WeightTheory::binary(rat_int(0)),
                WeightTheory::binary(rat_int(1)),
            ],
            masses: vec![rat(1, 2), rat(1, 2)],
        };
        assert!(matches!(
            update_posterior(&grid, &class(&[2, 3])),
            Err(ConfirmationError::ZeroEvidence)
        ));
    }

    #[test]
    fn posterior_concentrates_on_the_frequency() {
        let grid = PosteriorGrid::uniform_binary(100);
        let updated = update_posterior(&grid, &class(&[700, 300])).unwrap();
        assert_eq!(updated.mode(), &WeightTheory::binary(rat(70, 100)));
        let mass = updated.mass_where(|h| {
            h.0[0] >= rat(65, 100) && h.0[0] <= rat(75, 100)
        });
        assert!(mass >= rat(95, 100));
    }

    #[test]
    fn importance_per_branch_and_per_class() {
        let theory = WeightTheory(vec![rat(3, 4), rat(1, 4)]);
        assert_eq!(branch_importance(&theory, &[3, 1]), rat(27, 256));
        assert_eq!(
            importance_mass(&theory, &[3, 1]),
            rat_int(4) * rat(27, 256)
        );
        // fair theory: class mass C(n, r) / 2^n
        let fair = WeightTheory::binary(rat(1, 2));
        assert_eq!(
            importance_mass(&fair, &[2, 3]),
            Rat::from_integer(binomial(5, 2).into()) / rat_int(32)
        );
    }

    #[test]
    fn importance_normalizes_over_classes() {
        for theory in [
            WeightTheory::binary(rat(3, 4)),
            WeightTheory::binary(rat(1, 7)),
            WeightTheory(vec![rat(1, 6), rat(1, 3), rat(1, 2)]),
        ] {
            let k = theory.0.len();
            let spec = MultiverseSpec::weightless(k);
            let ensemble = evolve(&spec, 6).unwrap();
            let total: Rat = ensemble
                .classes
                .iter()
                .map(|c| importance_mass(&theory, &c.counts))
                .sum();
            assert!(total.is_one());
        }
    }

    #[test]
    fn census_small_weightless() {
        let spec = MultiverseSpec::weightless(2);
        let report =
            confirmation_census(&spec, 4, MeasureKind::Counting, &rat(1, 4)).unwrap();
        assert_eq!(report.rows.len(), 5);
        // the r = 2 class confirms classes r in {1, 2, 3} under (1/2, 1/2)
        let row = &report.rows[2];
        assert_eq!(row.inferred_theory, WeightTheory::binary(rat(1, 2)));
        let expected: Rat = (1..=3)
            .map(|r| importance_mass(&row.inferred_theory, &[r, 4 - r]))
            .sum();
        assert_eq!(row.self_confirmation_mass, expected);
        assert!(!report.degenerate_empty_tape);
    }

    #[test]
    fn census_empty_tape_is_degenerate() {
        let spec = MultiverseSpec::weightless(2);
        let report =
            confirmation_census(&spec, 0, MeasureKind::Counting, &rat(1, 10)).unwrap();
        assert!(report.degenerate_empty_tape);
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].inferred_theory, WeightTheory::uniform(2));
        assert!(report.rows[0].self_confirmation_mass.is_one());
    }

    #[test]
    fn census_symmetry_under_outcome_relabelling() {
        let spec = MultiverseSpec::weightless(2);
        let report =
            confirmation_census(&spec, 40, MeasureKind::Counting, &rat(3, 20)).unwrap();
        let n = report.rows.len();
        for i in 0..n {
            let mirror = &report.rows[n - 1 - i];
            let row = &report.rows[i];
            assert_eq!(row.counts[0], mirror.counts[1]);
            assert_eq!(row.self_confirmation_mass, mirror.self_confirmation_mass);
            assert_eq!(row.measure_mass, mirror.measure_mass);
        }
    }

    #[test]
    fn self_confirmation_grows_with_presses() {
        // the r/n = 1/2 class at fixed tolerance, across press counts
        let spec = MultiverseSpec::weightless(2);
        let mut last = Rat::zero();
        for n in [20u64, 50, 100, 200] {
            let report =
                confirmation_census(&spec, n, MeasureKind::Counting, &rat(3, 20)).unwrap();
            let row = report
                .rows
                .iter()
                .find(|r| r.counts[0] == n / 2)
                .expect("middle class");
            assert!(row.self_confirmation_mass >= last);
            last = row.self_confirmation_mass.clone();
        }
    }

    #[test]
    fn compare_measures_requires_backing() {
        let spec = MultiverseSpec::weightless(2);
        assert!(compare_measures(
            &spec,
            4,
            &WeightTheory::binary(rat(1, 2)),
            &rat(1, 10)
        )
        .is_err());
    }

    #[test]
    fn compare_measures_replicating_identity_small() {
        let spec = MultiverseSpec::replicating(vec![3, 1]);
        let reference = WeightTheory(vec![rat(3, 4), rat(1, 4)]);
        let report = compare_measures(&spec, 8, &reference, &rat(1, 8)).unwrap();
        assert_eq!(report.caring_kind, MeasureKind::Weight);
        // replication makes caring and counting coincide exactly
        assert_eq!(report.counting_mass, report.caring_mass);
    }

    #[test]
    fn float_census_tracks_exact_census() {
        let spec = MultiverseSpec::replicating(vec![3, 1]);
        let exact_report =
            confirmation_census(&spec, 60, MeasureKind::Counting, &rat(3, 20)).unwrap();
        let float_report =
            confirmation_census_float(&spec, 60, MeasureKind::Counting, 0.15).unwrap();
        for (e, f) in exact_report.rows.iter().zip(&float_report.rows) {
            assert_eq!(e.counts[0], f.zero_count);
            let self_exact = crate::exact::rat_to_f64(&e.self_confirmation_mass);
            let measure_exact = crate::exact::rat_to_f64(&e.measure_mass);
            assert!((self_exact - f.self_confirmation_mass).abs() < 1e-9);
            assert!((measure_exact - f.measure_mass).abs() < 1e-9);
        }
        // the float path stays usable far beyond exact-arithmetic scale
        let big = confirmation_census_float(&spec, 20_000, MeasureKind::Counting, 0.1).unwrap();
        assert_eq!(big.rows.len(), 20_001);
    }

    #[test]
    fn compare_measures_empty_tape_degenerate() {
        let spec = MultiverseSpec::replicating(vec![3, 1]);
        let near = compare_measures(
            &spec,
            0,
            &WeightTheory::uniform(2),
            &rat(1, 10),
        )
        .unwrap();
        assert!(near.degenerate_empty_tape);
        assert!(near.counting_mass.is_one());
        assert!(near.caring_mass.is_one());
        let far = compare_measures(
            &spec,
            0,
            &WeightTheory::binary(rat_int(1)),
            &rat(1, 10),
        )
        .unwrap();
        assert!(far.counting_mass.is_zero());
        assert!(far.caring_mass.is_zero());
    }
}
