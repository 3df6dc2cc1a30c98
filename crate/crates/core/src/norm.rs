//! Strictly convex norms on the first layer and exact one-sided bounds on
//! their values.
//!
//! Bounds are computed on the normalized vector `u = v / max|v_i|` with
//! dyadic root enclosures, then scaled back. The normalization makes every
//! bound exactly positively homogeneous: the bound of `t * v` at tolerance
//! `t * tol` is `t` times the bound of `v` at tolerance `tol`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::{
    bits_for_tolerance, dyadic_root_enclosure, format_rational, max_abs, parse_rational, pow,
    to_f64, BigRational,
};
use crate::vector::LieVector;

/// Default tolerance for certified bounds: `10^-9`.
pub fn default_tolerance() -> BigRational {
    BigRational::new(1.into(), 1_000_000_000.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormFamily {
    Euclidean,
    /// `p = numer / denom`, in lowest terms, `1 < p < inf`.
    Lp { numer: u32, denom: u32 },
}

/// What a caller asked for; [`make_norm`] decides whether it is admissible.
#[derive(Debug, Clone, PartialEq)]
pub enum NormRequest {
    Euclidean,
    Lp(BigRational),
    LpInfinity,
}

impl FromStr for NormRequest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("euclidean") || s.eq_ignore_ascii_case("l2") {
            return Ok(NormRequest::Euclidean);
        }
        let Some(p) = s.strip_prefix("lp:") else {
            return Err(Error::BadNormParameter(format!(
                "unknown norm {s:?}; expected euclidean or lp:<p/q>"
            )));
        };
        if ["inf", "infinity", "oo"].iter().any(|t| p.eq_ignore_ascii_case(t)) {
            return Ok(NormRequest::LpInfinity);
        }
        parse_rational(p)
            .map(NormRequest::Lp)
            .map_err(|e| Error::BadNormParameter(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstLayerNorm {
    family: NormFamily,
}

/// Validates a norm request. Only strictly convex families are admitted.
pub fn make_norm(request: &NormRequest) -> Result<FirstLayerNorm, Error> {
    match request {
        NormRequest::Euclidean => Ok(FirstLayerNorm::euclidean()),
        NormRequest::LpInfinity => Err(Error::NotStrictlyConvex(
            "the l-infinity unit sphere contains segments".into(),
        )),
        NormRequest::Lp(p) => {
            if p.is_one() {
                return Err(Error::NotStrictlyConvex(
                    "the l1 unit sphere contains segments".into(),
                ));
            }
            if p < &BigRational::one() {
                return Err(Error::BadNormParameter(format!(
                    "p = {} is below 1, not a norm",
                    format_rational(p)
                )));
            }
            let numer = p.numer().to_u32();
            let denom = p.denom().to_u32();
            match (numer, denom) {
                (Some(numer), Some(denom)) if numer <= 64 && denom <= 64 => {
                    Ok(FirstLayerNorm {
                        family: NormFamily::Lp { numer, denom },
                    })
                }
                _ => Err(Error::BadNormParameter(format!(
                    "p = {} needs numerator and denominator at most 64",
                    format_rational(p)
                ))),
            }
        }
    }
}

impl FirstLayerNorm {
    pub fn euclidean() -> Self {
        FirstLayerNorm {
            family: NormFamily::Euclidean,
        }
    }

    pub fn family(&self) -> &NormFamily {
        &self.family
    }

    /// `euclidean` or `lp:<p/q>`, the form accepted by [`NormRequest`].
    pub fn tag(&self) -> String {
        match &self.family {
            NormFamily::Euclidean => "euclidean".into(),
            NormFamily::Lp { numer, denom } if *denom == 1 => format!("lp:{numer}"),
            NormFamily::Lp { numer, denom } => format!("lp:{numer}/{denom}"),
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self, Error> {
        make_norm(&tag.parse()?)
    }

    /// Floating-point value, for diagnostics only.
    pub fn approx(&self, coords: &[BigRational]) -> f64 {
        let xs = coords.iter().map(to_f64);
        match &self.family {
            NormFamily::Euclidean => xs.map(|x| x * x).sum::<f64>().sqrt(),
            NormFamily::Lp { numer, denom } => {
                let p = *numer as f64 / *denom as f64;
                xs.map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    }

    /// Upper bound `q >= |v|` with `q - |v| <= tolerance`.
    pub fn certified_upper(
        &self,
        v: &LieVector,
        tolerance: &BigRational,
    ) -> Result<CertifiedBound, Error> {
        if !v.is_horizontal() {
            return Err(Error::NotHorizontal);
        }
        let coords = v.coords()[v.algebra().layer_range(1)].to_vec();
        self.certified_upper_coords(&coords, tolerance)
    }

    pub fn certified_upper_coords(
        &self,
        coords: &[BigRational],
        tolerance: &BigRational,
    ) -> Result<CertifiedBound, Error> {
        if !tolerance.is_positive() {
            return Err(Error::BadTolerance(format_rational(tolerance)));
        }
        let scale = max_abs(coords);
        if scale.is_zero() {
            return Ok(CertifiedBound {
                value: BigRational::zero(),
                slack: BigRational::zero(),
                claim: BoundClaim::Norm {
                    norm: self.tag(),
                    coords: coords.to_vec(),
                    scale,
                    unit_terms: Vec::new(),
                },
            });
        }
        let unit: Vec<BigRational> = coords.iter().map(|c| c.abs() / &scale).collect();
        let unit_tol = tolerance / &scale;
        let enclosure = match &self.family {
            NormFamily::Euclidean => euclidean_unit(&unit, &unit_tol),
            NormFamily::Lp { numer, denom } => lp_unit(&unit, *numer, *denom, &unit_tol),
        };
        Ok(CertifiedBound {
            value: &enclosure.upper * &scale,
            slack: (&enclosure.upper - &enclosure.lower) * &scale,
            claim: BoundClaim::Norm {
                norm: self.tag(),
                coords: coords.to_vec(),
                scale,
                unit_terms: enclosure.terms,
            },
        })
    }
}

impl fmt::Display for FirstLayerNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Rational enclosure of the norm of a vector with entries in `[0, 1]`.
struct UnitEnclosure {
    lower: BigRational,
    upper: BigRational,
    /// Per-coordinate upper bounds on `u_i^p` (empty for the Euclidean norm,
    /// whose squares are exact).
    terms: Vec<BigRational>,
}

/// Extra grid bits beyond the tolerance, so enclosures land well inside it.
const GUARD_BITS: u32 = 4;

fn euclidean_unit(unit: &[BigRational], tol: &BigRational) -> UnitEnclosure {
    let sum: BigRational = unit.iter().map(|u| u * u).sum();
    let bits = bits_for_tolerance(tol) + GUARD_BITS;
    let (lower, upper) = dyadic_root_enclosure(&sum, 2, bits);
    UnitEnclosure {
        lower,
        upper,
        terms: Vec::new(),
    }
}

fn lp_unit(unit: &[BigRational], numer: u32, denom: u32, tol: &BigRational) -> UnitEnclosure {
    let mut bits = bits_for_tolerance(tol) + GUARD_BITS;
    loop {
        let mut hi_terms = Vec::with_capacity(unit.len());
        let mut lo_sum = BigRational::zero();
        let mut hi_sum = BigRational::zero();
        for u in unit {
            // u^(numer/denom) = (u^numer)^(1/denom)
            let (lo, hi) = dyadic_root_enclosure(&pow(u, numer as i32), denom, bits);
            lo_sum += lo;
            hi_sum += &hi;
            hi_terms.push(hi);
        }
        // |u|_p = (sum)^(denom/numer) = (sum^denom)^(1/numer)
        let (_, upper) = dyadic_root_enclosure(&pow(&hi_sum, denom as i32), numer, bits);
        let (lower, _) = dyadic_root_enclosure(&pow(&lo_sum, denom as i32), numer, bits);
        if &(&upper - &lower) <= tol {
            return UnitEnclosure {
                lower,
                upper,
                terms: hi_terms,
            };
        }
        bits += 1;
    }
}

/// An exact rational upper bound together with what it bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedBound {
    value: BigRational,
    slack: BigRational,
    claim: BoundClaim,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundClaim {
    /// `value >= |coords|` for the tagged norm. `unit_terms[i] >= (|c_i| /
    /// scale)^p` witnesses the claim for p-norms.
    Norm {
        norm: String,
        coords: Vec<BigRational>,
        scale: BigRational,
        unit_terms: Vec<BigRational>,
    },
    /// `value >= sum duration_k |direction_k|`, one part per segment.
    PathLength {
        parts: Vec<(BigRational, CertifiedBound)>,
    },
}

impl CertifiedBound {
    pub(crate) fn path_length(parts: Vec<(BigRational, CertifiedBound)>) -> Self {
        let value = parts.iter().map(|(d, b)| d * &b.value).sum();
        let slack = parts.iter().map(|(d, b)| d * &b.slack).sum();
        CertifiedBound {
            value,
            slack,
            claim: BoundClaim::PathLength { parts },
        }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// Upper bound on `value - true value`.
    pub fn slack(&self) -> &BigRational {
        &self.slack
    }

    pub fn claim(&self) -> &BoundClaim {
        &self.claim
    }

    /// Re-checks the defining polynomial inequalities in exact arithmetic.
    pub fn verify(&self) -> bool {
        if self.value.is_negative() || self.slack.is_negative() {
            return false;
        }
        match &self.claim {
            BoundClaim::Norm {
                norm,
                coords,
                scale,
                unit_terms,
            } => {
                if scale != &max_abs(coords) {
                    return false;
                }
                if scale.is_zero() {
                    return true;
                }
                let Ok(n) = FirstLayerNorm::from_tag(norm) else {
                    return false;
                };
                let q = &self.value / scale;
                let unit: Vec<BigRational> = coords.iter().map(|c| c.abs() / scale).collect();
                match n.family {
                    NormFamily::Euclidean => {
                        let sum: BigRational = unit.iter().map(|u| u * u).sum();
                        &q * &q >= sum
                    }
                    NormFamily::Lp { numer, denom } => {
                        if unit_terms.len() != unit.len() {
                            return false;
                        }
                        let terms_ok = unit.iter().zip(unit_terms).all(|(u, t)| {
                            !t.is_negative()
                                && pow(t, denom as i32) >= pow(u, numer as i32)
                        });
                        let total: BigRational = unit_terms.iter().sum();
                        terms_ok && pow(&q, numer as i32) >= pow(&total, denom as i32)
                    }
                }
            }
            BoundClaim::PathLength { parts } => {
                let total: BigRational = parts.iter().map(|(d, b)| d * &b.value).sum();
                total == self.value
                    && parts
                        .iter()
                        .all(|(d, b)| !d.is_negative() && b.verify())
            }
        }
    }
}

/// Compact serialized form of a bound: value and slack.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub value: String,
    pub slack: String,
}

impl From<&CertifiedBound> for BoundSummary {
    fn from(b: &CertifiedBound) -> Self {
        BoundSummary {
            value: format_rational(&b.value),
            slack: format_rational(&b.slack),
        }
    }
}
