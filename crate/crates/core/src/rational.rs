//! Exact rational helpers: `"p/q"` text form, dyadic root enclosures and
//! small conveniences over [`BigRational`].

use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational;

/// Shorthand for the rational `n / d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    q.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a rational literal: {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"p/q"` or `"p"` (optional sign on `p`). Decimal notation such as
/// `"1e-6"` or `"0.25"` is also accepted and converted exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(BigRational::from_integer(n));
    }
    parse_decimal(s).ok_or_else(err)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], i32::from_str(&s[pos + 1..]).ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).ok()?);
    let shift = exponent - frac.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    value *= pow(&ten, shift);
    Some(if neg { -value } else { value })
}

/// `base^exp` for any integer exponent; `base` must be nonzero when `exp < 0`.
pub fn pow(base: &BigRational, exp: i32) -> BigRational {
    let mut out = num_traits::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp < 0 {
        out = out.recip();
    }
    out
}

pub fn two_pow(exp: i32) -> BigRational {
    pow(&int(2), exp)
}

/// Smallest `m >= 0` with `2^-m <= tolerance`.
pub fn bits_for_tolerance(tolerance: &BigRational) -> u32 {
    assert!(tolerance.is_positive(), "tolerance must be positive");
    let mut m = 0u32;
    let mut step = BigRational::one();
    while &step > tolerance {
        step /= int(2);
        m += 1;
    }
    m
}

/// Enclosure of `y^(1/k)` on the grid `2^-bits`: returns `(lo, hi)` with
/// `lo^k <= y <= hi^k`, `hi - lo <= 2^-bits`, and `lo == hi` when the root
/// lands exactly on the grid.
///
/// `hi` is the smallest grid point whose `k`-th power is at least `y`, so it
/// is monotone non-increasing in `bits` and non-decreasing in `y`.
pub fn dyadic_root_enclosure(y: &BigRational, k: u32, bits: u32) -> (BigRational, BigRational) {
    assert!(k >= 1);
    assert!(!y.is_negative(), "root of a negative rational");
    if y.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    // scaled = y * 2^(bits*k); root = scaled^(1/k) / 2^bits
    let shift = (bits as usize) * (k as usize);
    let numer = y.numer() << shift;
    let denom = y.denom().clone();
    let floor_scaled = &numer / &denom;
    let exact_integer = (&floor_scaled * &denom) == numer;
    let r = floor_scaled.nth_root(k);
    let grid = BigRational::from_integer(BigInt::one() << bits as usize);
    let lo = BigRational::from_integer(r.clone()) / &grid;
    let hits = exact_integer && num_traits::pow(r.clone(), k as usize) == floor_scaled;
    if hits {
        (lo.clone(), lo)
    } else {
        let hi = BigRational::from_integer(r + 1u32) / &grid;
        (lo, hi)
    }
}

/// Largest absolute value among `values`; zero for an empty slice.
pub fn max_abs<'a, I>(values: I) -> BigRational
where
    I: IntoIterator<Item = &'a BigRational>,
{
    values
        .into_iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Rough `f64` view, used only for diagnostics and search heuristics.
pub fn to_f64(q: &BigRational) -> f64 {
    let n = q.numer();
    let d = q.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    // Keep ~60 significant bits of each part before converting.
    let ns = (nb - 60).max(0);
    let ds = (db - 60).max(0);
    let nf = big_to_f64(&(n >> ns as usize));
    let df = big_to_f64(&(d >> ds as usize));
    nf / df * 2f64.powi((ns - ds) as i32)
}

fn big_to_f64(n: &BigInt) -> f64 {
    let (sign, digits) = n.to_u64_digits();
    let mut out = 0f64;
    for (i, d) in digits.iter().enumerate() {
        out += (*d as f64) * 2f64.powi(64 * i as i32);
    }
    if sign == Sign::Minus {
        -out
    } else {
        out
    }
}

/// Serde adapters storing rationals as `"p/q"` strings.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Sparse `index -> "p/q"` maps, as used by vector and bracket documents.
pub mod serde_sparse {
    use std::collections::BTreeMap;

    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<usize, BigRational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let text: BTreeMap<usize, String> =
            map.iter().map(|(k, v)| (*k, format_rational(v))).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<usize, BigRational>, D::Error> {
        let text = BTreeMap::<usize, String>::deserialize(d)?;
        text.into_iter()
            .map(|(k, v)| {
                parse_rational(&v)
                    .map(|q| (k, q))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("1e-6").unwrap(), ratio(1, 1_000_000));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5e1").unwrap(), int(-15));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn format_round_trip() {
        for q in [ratio(-3, 7), int(0), int(12), ratio(22, 7)] {
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
    }

    #[test]
    fn root_enclosure_brackets_the_root() {
        let two = int(2);
        let (lo, hi) = dyadic_root_enclosure(&two, 2, 20);
        assert!(&lo * &lo <= two);
        assert!(&hi * &hi >= two);
        assert!(&hi - &lo <= two_pow(-20));
    }

    #[test]
    fn root_enclosure_is_exact_on_grid_points() {
        let (lo, hi) = dyadic_root_enclosure(&ratio(25, 16), 2, 3);
        assert_eq!(lo, ratio(5, 4));
        assert_eq!(hi, ratio(5, 4));
        let (lo, hi) = dyadic_root_enclosure(&int(27), 3, 0);
        assert_eq!((lo, hi), (int(3), int(3)));
    }

    #[test]
    fn tolerance_bits() {
        assert_eq!(bits_for_tolerance(&int(1)), 0);
        assert_eq!(bits_for_tolerance(&ratio(1, 2)), 1);
        assert_eq!(bits_for_tolerance(&ratio(1, 3)), 2);
    }

    #[test]
    fn f64_view() {
        assert!((to_f64(&ratio(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
        let huge = pow(&int(10), 400) / (pow(&int(10), 399) * int(4));
        assert!((to_f64(&huge) - 2.5).abs() < 1e-12);
    }
}
