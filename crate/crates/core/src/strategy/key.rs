//! Lexicographic ranking keys. A key is a most-significant-first vector of
//! extended rationals; larger keys are preferred. When two keys of unequal
//! length share a prefix, the exhausted key reads as negative infinity at
//! the missing positions (having a further, better-utility class to offer
//! wins the tie-break).

use super::{Prospect, Strategy, StrategyKind, UtilityProfile};
use crate::exact::{self, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// One key position: a rational or an infinity sentinel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyAtom {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl Ord for KeyAtom {
    fn cmp(&self, other: &Self) -> Ordering {
        use KeyAtom::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for KeyAtom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for KeyAtom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            KeyAtom::NegInf => "-inf".serialize(s),
            KeyAtom::PosInf => "inf".serialize(s),
            KeyAtom::Finite(x) => exact::rat_to_string(x).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for KeyAtom {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        match raw.as_str() {
            "-inf" => Ok(KeyAtom::NegInf),
            "inf" | "+inf" => Ok(KeyAtom::PosInf),
            other => exact::rat_from_str(other)
                .map(KeyAtom::Finite)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// Most-significant-first ranking key; equal keys define indifference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankKey(pub Vec<KeyAtom>);

impl RankKey {
    fn finite(values: Vec<Rat>) -> RankKey {
        RankKey(values.into_iter().map(KeyAtom::Finite).collect())
    }
}

impl Ord for RankKey {
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.0.len().max(other.0.len());
        for i in 0..len {
            let a = self.0.get(i).unwrap_or(&KeyAtom::NegInf);
            let b = other.0.get(i).unwrap_or(&KeyAtom::NegInf);
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for RankKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(super) fn evaluate_key(strategy: &Strategy, prospect: &Prospect) -> Option<RankKey> {
    let profile = UtilityProfile::new(prospect, strategy.weight_mode);
    let key = match &strategy.kind {
        StrategyKind::MeanUtilitarian => RankKey::finite(vec![profile.mean()]),
        StrategyKind::PriceRawlsian => {
            // ascending utilities; at each level, less mass at the bad
            // utility is better
            let mut atoms = Vec::with_capacity(profile.classes.len() * 2);
            for (u, w) in &profile.classes {
                atoms.push(KeyAtom::Finite(u.clone()));
                atoms.push(KeyAtom::Finite(-w.clone()));
            }
            RankKey(atoms)
        }
        StrategyKind::FutureSelfElitist => {
            // descending utilities; more mass at the good utility is better
            let mut atoms = Vec::with_capacity(profile.classes.len() * 2);
            for (u, w) in profile.classes.iter().rev() {
                atoms.push(KeyAtom::Finite(u.clone()));
                atoms.push(KeyAtom::Finite(w.clone()));
            }
            RankKey(atoms)
        }
        StrategyKind::RivalrousElitist => {
            let mut iter = profile.classes.iter().rev();
            let (best, _) = iter.next().expect("non-empty profile");
            let mut atoms = vec![KeyAtom::Finite(best.clone())];
            let mut saw_rival = false;
            for (rival, _) in iter {
                saw_rival = true;
                atoms.push(KeyAtom::Finite(best - rival));
            }
            if !saw_rival {
                // no rival utility: the competition is won outright
                atoms.push(KeyAtom::PosInf);
            }
            RankKey(atoms)
        }
        StrategyKind::MedianUtilitarian => RankKey::finite(vec![
            profile.percentile(&exact::rat(1, 2)).clone(),
            profile.mean(),
        ]),
        StrategyKind::XPercentile { x } => {
            let frac = x / exact::rat_int(100);
            RankKey::finite(vec![profile.percentile(&frac).clone(), profile.mean()])
        }
        StrategyKind::FutureSelfDemocrat { .. } => return None,
        StrategyKind::DistributionEngineer { f1, f2 } => {
            let lookup1 = |u: &Rat| -> Rat {
                f1.iter()
                    .find(|(k, _)| k == u)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_else(Rat::zero)
            };
            let lookup2 = |a: &Rat, b: &Rat| -> Rat {
                f2.iter()
                    .find(|(ka, kb, _)| ka == a && kb == b)
                    .map(|(_, _, v)| v.clone())
                    .unwrap_or_else(Rat::zero)
            };
            let mut total = Rat::zero();
            for (u, w) in &profile.classes {
                total += lookup1(u) * w;
            }
            for (ua, wa) in &profile.classes {
                for (ub, wb) in &profile.classes {
                    total += lookup2(ua, ub) * wa * wb;
                }
            }
            RankKey::finite(vec![total])
        }
    };
    Some(key)
}
