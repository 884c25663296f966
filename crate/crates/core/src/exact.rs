//! Exact arithmetic primitives shared by every module: big integers,
//! big rationals, combinatorial counts, and the string codecs used by
//! the JSON scenario format (`"numerator/denominator"` for rationals,
//! decimal strings for big integers).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;
pub type Int = BigInt;
pub type Nat = BigUint;

/// Rational from machine integers.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(Int::from(numer), Int::from(denom))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// Nonnegative integer power with the `0^0 = 1` convention.
pub fn rat_pow(base: &Rat, exp: u64) -> Rat {
    if exp == 0 {
        return Rat::one();
    }
    let mut acc = Rat::one();
    let mut base = base.clone();
    let mut exp = exp;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &base;
        }
        exp >>= 1;
        if exp > 0 {
            base = &base * &base;
        }
    }
    acc
}

pub fn nat_pow(base: &Nat, exp: u64) -> Nat {
    if exp == 0 {
        return Nat::one();
    }
    base.pow(u32::try_from(exp).expect("exponent fits u32"))
}

/// Binomial coefficient C(n, k) as an exact big integer.
pub fn binomial(n: u64, k: u64) -> Nat {
    if k > n {
        return Nat::zero();
    }
    let k = k.min(n - k);
    let mut acc = Nat::one();
    for i in 0..k {
        acc *= Nat::from(n - i);
        acc /= Nat::from(i + 1);
    }
    acc
}

/// Multinomial coefficient N! / (r_0! r_1! ...) where N = sum of counts.
pub fn multinomial(counts: &[u64]) -> Nat {
    let mut acc = Nat::one();
    let mut seen = 0u64;
    for &r in counts {
        seen += r;
        acc *= binomial(seen, r);
    }
    acc
}

/// Number of bits in n, i.e. floor(log2 n) + 1 for n > 0.
pub fn bit_length(n: &Nat) -> u64 {
    n.bits()
}

/// Ceiling of log2(n) for n >= 1.
pub fn ceil_log2(n: &Nat) -> u64 {
    assert!(!n.is_zero(), "ceil_log2 of zero");
    let bits = n.bits();
    if n.count_ones() == 1 {
        bits - 1
    } else {
        bits
    }
}

/// Exact floor of `p*n + k*sqrt(n)` for rational p >= 0 and integers k, n >= 0.
pub fn floor_linear_sqrt(p: &Rat, n: u64, k: u64) -> u64 {
    let pn = p * Rat::from_integer(Int::from(n));
    let pn_floor = pn.floor().to_integer();
    let frac = &pn - Rat::from_integer(pn_floor.clone());
    // s = floor(k * sqrt(n))
    let s = (Nat::from(k) * Nat::from(k) * Nat::from(n)).sqrt();
    let s_int = Int::from(s.clone());
    // carry iff frac + (k*sqrt(n) - s) >= 1, i.e. k*sqrt(n) >= 1 + s - frac
    let rhs = Rat::one() + Rat::from_integer(s_int.clone()) - frac;
    let carry = if rhs.is_negative() || rhs.is_zero() {
        true
    } else {
        // compare (k^2 n) >= rhs^2 exactly
        let lhs = Rat::from_integer(Int::from(Nat::from(k) * Nat::from(k) * Nat::from(n)));
        lhs >= &rhs * &rhs
    };
    let b = pn_floor + s_int + if carry { Int::one() } else { Int::zero() };
    b.to_u64().expect("bound fits u64")
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    num_traits::FromPrimitive::from_f64(x)
}

/// Canonical string form `numer/denom` (denominator always explicit).
pub fn rat_to_string(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"n/d"` or a bare integer `"n"`.
pub fn rat_from_str(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer: Int = n.parse().map_err(|_| format!("bad rational numerator {n:?}"))?;
    let denom: Int = d.parse().map_err(|_| format!("bad rational denominator {d:?}"))?;
    if denom.is_zero() {
        return Err(format!("zero denominator in rational {s:?}"));
    }
    Ok(Rat::new(numer, denom))
}

/// Reduced fraction helpers used by percentile-style cursors.
pub fn rat_div(a: &Rat, b: &Rat) -> Rat {
    a / b
}

/// Greatest common divisor pass-through for callers that want it by role.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

// ---------------------------------------------------------------------------
// serde adapters
// ---------------------------------------------------------------------------

/// `#[serde(with = "exact::serde_rat")]` for a plain rational field.
pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        rat_to_string(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let raw = String::deserialize(d)?;
        rat_from_str(&raw).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rat_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(rat_to_string).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|r| rat_from_str(&r).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub mod serde_rat_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(rat_to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|r| rat_from_str(r).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_rat_vec_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &Option<Vec<Rat>>, s: S) -> Result<S::Ok, S::Error> {
        xs.as_ref()
            .map(|v| v.iter().map(rat_to_string).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rat>>, D::Error> {
        let raw = Option::<Vec<String>>::deserialize(d)?;
        raw.map(|v| {
            v.iter()
                .map(|r| rat_from_str(r).map_err(serde::de::Error::custom))
                .collect()
        })
        .transpose()
    }
}

pub mod serde_rat_vec_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        xs.iter()
            .map(|v| v.iter().map(rat_to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|v| {
                v.iter()
                    .map(|r| rat_from_str(r).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub mod serde_rat_vec_vec_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &Option<Vec<Vec<Rat>>>, s: S) -> Result<S::Ok, S::Error> {
        xs.as_ref()
            .map(|vv| {
                vv.iter()
                    .map(|v| v.iter().map(rat_to_string).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<Vec<Rat>>>, D::Error> {
        let raw = Option::<Vec<Vec<String>>>::deserialize(d)?;
        raw.map(|vv| {
            vv.iter()
                .map(|v| {
                    v.iter()
                        .map(|r| rat_from_str(r).map_err(serde::de::Error::custom))
                        .collect::<Result<Vec<_>, D::Error>>()
                })
                .collect()
        })
        .transpose()
    }
}

/// Pairs `(key, value)` of rationals, e.g. function tables.
pub mod serde_rat_pairs {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[(Rat, Rat)], s: S) -> Result<S::Ok, S::Error> {
        xs.iter()
            .map(|(a, b)| (rat_to_string(a), rat_to_string(b)))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Rat, Rat)>, D::Error> {
        let raw = Vec::<(String, String)>::deserialize(d)?;
        raw.iter()
            .map(|(a, b)| {
                Ok((
                    rat_from_str(a).map_err(serde::de::Error::custom)?,
                    rat_from_str(b).map_err(serde::de::Error::custom)?,
                ))
            })
            .collect()
    }
}

/// Triples `(key1, key2, value)` of rationals, e.g. binary function tables.
pub mod serde_rat_triples {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[allow(clippy::type_complexity)]
    pub fn serialize<S: Serializer>(xs: &[(Rat, Rat, Rat)], s: S) -> Result<S::Ok, S::Error> {
        xs.iter()
            .map(|(a, b, c)| (rat_to_string(a), rat_to_string(b), rat_to_string(c)))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    #[allow(clippy::type_complexity)]
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<(Rat, Rat, Rat)>, D::Error> {
        let raw = Vec::<(String, String, String)>::deserialize(d)?;
        raw.iter()
            .map(|(a, b, c)| {
                Ok((
                    rat_from_str(a).map_err(serde::de::Error::custom)?,
                    rat_from_str(b).map_err(serde::de::Error::custom)?,
                    rat_from_str(c).map_err(serde::de::Error::custom)?,
                ))
            })
            .collect()
    }
}

/// Big naturals as decimal strings.
pub mod serde_nat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Nat, s: S) -> Result<S::Ok, S::Error> {
        x.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
        let raw = String::deserialize(d)?;
        raw.trim().parse().map_err(serde::de::Error::custom)
    }
}

/// Big signed integers as decimal strings.
pub mod serde_int {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
        x.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        let raw = String::deserialize(d)?;
        raw.trim().parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_row() {
        let row: Vec<u64> = (0..=4).map(|k| binomial(4, k).to_u64().unwrap()).collect();
        assert_eq!(row, vec![1, 4, 6, 4, 1]);
        assert!(binomial(4, 5).is_zero());
    }

    #[test]
    fn multinomial_matches_binomial() {
        assert_eq!(multinomial(&[3, 1]), binomial(4, 1));
        assert_eq!(multinomial(&[1, 1, 1]).to_u64().unwrap(), 6);
        assert_eq!(multinomial(&[0, 0]).to_u64().unwrap(), 1);
    }

    #[test]
    fn pow_conventions() {
        assert_eq!(rat_pow(&rat_zero(), 0), rat_one());
        assert_eq!(rat_pow(&rat(3, 4), 2), rat(9, 16));
        assert_eq!(nat_pow(&Nat::from(4u32), 6).to_u64().unwrap(), 4096);
    }

    #[test]
    fn ceil_log2_boundaries() {
        assert_eq!(ceil_log2(&Nat::from(1u32)), 0);
        assert_eq!(ceil_log2(&Nat::from(2u32)), 1);
        assert_eq!(ceil_log2(&Nat::from(5u32)), 3);
        assert_eq!(ceil_log2(&Nat::from(8u32)), 3);
        assert_eq!(ceil_log2(&Nat::from(9u32)), 4);
    }

    #[test]
    fn floor_linear_sqrt_exact_cases() {
        // 1/4 * 100 + 10 * 10 = 125 exactly
        assert_eq!(floor_linear_sqrt(&rat(1, 4), 100, 10), 125);
        // 1/4 * 10000 + 10 * 100 = 3500 exactly
        assert_eq!(floor_linear_sqrt(&rat(1, 4), 10_000, 10), 3500);
        // sqrt(2): 0*2 + 1*sqrt(2) -> 1
        assert_eq!(floor_linear_sqrt(&rat_zero(), 2, 1), 1);
        // 1/2*3 + 2*sqrt(3) = 1.5 + 3.46... -> 4
        assert_eq!(floor_linear_sqrt(&rat(1, 2), 3, 2), 4);
        // k = 0 reduces to floor(p n)
        assert_eq!(floor_linear_sqrt(&rat(1, 3), 10, 0), 3);
    }

    #[test]
    fn rational_string_roundtrip() {
        let x = rat(-3, 7);
        assert_eq!(rat_to_string(&x), "-3/7");
        assert_eq!(rat_from_str("-3/7").unwrap(), x);
        assert_eq!(rat_from_str("5").unwrap(), rat_int(5));
        assert_eq!(rat_from_str("6/4").unwrap(), rat(3, 2));
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("x").is_err());
    }
}
