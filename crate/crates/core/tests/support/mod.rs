//! Test oracles independent of the implementation paths they check.

use branchlab::exact::Rat;
use branchlab::multiverse::{MultiverseSpec, Variant};
use num_traits::One;
use std::collections::BTreeMap;

/// What brute-force enumeration says a class should hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleClass {
    pub multiplicity: u64,
    pub weight_mass: Option<Rat>,
    pub decoration: Option<Rat>,
}

/// Walks every individual branch of the multiverse, one simulation at a
/// time, and aggregates by outcome-count vector. Exponential in the press
/// count; usable only at toy sizes, which is the point.
pub fn enumerate_classes(
    spec: &MultiverseSpec,
    presses: u64,
) -> BTreeMap<Vec<u64>, OracleClass> {
    // per outcome: number of copies spawned and the weight share per copy
    let copies: Vec<u64> = (0..spec.outcome_count)
        .map(|i| spec.successor_count(i))
        .collect();
    let shares: Option<Vec<Vec<Rat>>> = match spec.variant {
        Variant::Weightless | Variant::Decorated => None,
        Variant::Replicating => {
            let total: u64 = copies.iter().sum();
            Some(
                copies
                    .iter()
                    .map(|&c| {
                        vec![Rat::new(1.into(), (total as i64).into()); c as usize]
                    })
                    .collect(),
            )
        }
        Variant::Split => spec.q_split.clone(),
    };
    let decorations = spec.decorative_weights().map(<[Rat]>::to_vec);

    let mut classes: BTreeMap<Vec<u64>, OracleClass> = BTreeMap::new();
    // one stack frame per partially-built branch; a branch that has seen
    // no press yet carries no decoration
    let mut stack = vec![(
        vec![0u64; spec.outcome_count],
        shares.as_ref().map(|_| Rat::one()),
        None::<Rat>,
        presses,
    )];
    while let Some((counts, share, decoration, remaining)) = stack.pop() {
        if remaining == 0 {
            let entry = classes.entry(counts).or_insert(OracleClass {
                multiplicity: 0,
                weight_mass: share.as_ref().map(|_| Rat::new(0.into(), 1.into())),
                decoration: None,
            });
            entry.multiplicity += 1;
            if let (Some(mass), Some(s)) = (&mut entry.weight_mass, &share) {
                *mass += s;
            }
            if decoration.is_some() {
                match &entry.decoration {
                    Some(existing) => assert_eq!(Some(existing), decoration.as_ref()),
                    None => entry.decoration = decoration,
                }
            }
            continue;
        }
        for outcome in 0..spec.outcome_count {
            for copy in 0..copies[outcome] {
                let mut next_counts = counts.clone();
                next_counts[outcome] += 1;
                let next_share = share.as_ref().map(|s| {
                    s * &shares.as_ref().expect("shares present")[outcome][copy as usize]
                });
                let next_decoration = decorations.as_ref().map(|labels| {
                    decoration.clone().unwrap_or_else(Rat::one) * &labels[outcome]
                });
                stack.push((next_counts, next_share, next_decoration, remaining - 1));
            }
        }
    }
    classes
}
