//! Certificates: a candidate path, its exact endpoint check and certified
//! length bounds against the corner.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraDescription};
use crate::error::Error;
use crate::group::GroupPoint;
use crate::norm::{BoundSummary, CertifiedBound, FirstLayerNorm};
use crate::path::{make_corner, HorizontalPath, PathDocument};
use crate::rational::{format_rational, serde_sparse, serde_str, BigRational};
use crate::vector::LieVector;

pub const CERTIFICATE_FORMAT: &str = "corner-shortcut-certificate/1";

#[derive(Debug, Clone)]
pub struct ShortcutCertificate {
    algebra: Algebra,
    x1: LieVector,
    x2: LieVector,
    norm: FirstLayerNorm,
    tolerance: BigRational,
    eta: BigRational,
    epsilon: BigRational,
    candidate: HorizontalPath,
    endpoint_ok: bool,
    corner_bound: CertifiedBound,
    candidate_bound: CertifiedBound,
    margin: BigRational,
    transcript: Vec<String>,
}

impl ShortcutCertificate {
    /// Checks the endpoint and bounds the corner and the candidate.
    /// `transcript` lists identities already checked while building.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        x1: &LieVector,
        x2: &LieVector,
        norm: &FirstLayerNorm,
        tolerance: &BigRational,
        eta: BigRational,
        epsilon: BigRational,
        candidate: HorizontalPath,
        mut transcript: Vec<String>,
    ) -> Result<Self, Error> {
        let algebra = x1.algebra().clone();
        let endpoint_ok =
            candidate.endpoint(&GroupPoint::exp(x1.clone()))? == GroupPoint::exp(x2.clone());
        transcript.push(format!(
            "endpoint(candidate, exp(X1)) == exp(X2): {endpoint_ok}"
        ));
        let corner_bound = make_corner(x1, x2)?.length_upper_bound(norm, tolerance)?;
        let candidate_bound = candidate.length_upper_bound(norm, tolerance)?;
        let bounds_ok = corner_bound.verify() && candidate_bound.verify();
        if !bounds_ok {
            return Err(Error::InvariantViolation(
                "certified bound failed its own verification".into(),
            ));
        }
        transcript.push(format!(
            "corner bound {} and candidate bound {} re-verified",
            format_rational(corner_bound.value()),
            format_rational(candidate_bound.value())
        ));
        let margin = corner_bound.value() - candidate_bound.value();
        transcript.push(format!("margin = {}", format_rational(&margin)));
        Ok(ShortcutCertificate {
            algebra,
            x1: x1.clone(),
            x2: x2.clone(),
            norm: norm.clone(),
            tolerance: tolerance.clone(),
            eta,
            epsilon,
            candidate,
            endpoint_ok,
            corner_bound,
            candidate_bound,
            margin,
            transcript,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn step(&self) -> usize {
        self.algebra.step()
    }

    pub fn x1(&self) -> &LieVector {
        &self.x1
    }

    pub fn x2(&self) -> &LieVector {
        &self.x2
    }

    pub fn norm(&self) -> &FirstLayerNorm {
        &self.norm
    }

    pub fn tolerance(&self) -> &BigRational {
        &self.tolerance
    }

    pub fn eta(&self) -> &BigRational {
        &self.eta
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    pub fn candidate(&self) -> &HorizontalPath {
        &self.candidate
    }

    pub fn endpoint_ok(&self) -> bool {
        self.endpoint_ok
    }

    pub fn corner_bound(&self) -> &CertifiedBound {
        &self.corner_bound
    }

    pub fn candidate_bound(&self) -> &CertifiedBound {
        &self.candidate_bound
    }

    /// Corner bound minus candidate bound.
    pub fn margin(&self) -> &BigRational {
        &self.margin
    }

    pub fn transcript(&self) -> &[String] {
        &self.transcript
    }

    pub fn to_document(&self) -> CertificateDocument {
        CertificateDocument {
            format: CERTIFICATE_FORMAT.into(),
            algebra: self.algebra.to_description(),
            algebra_id: self.algebra.id().into(),
            step: self.step(),
            x1: self.x1.to_sparse(),
            x2: self.x2.to_sparse(),
            norm: self.norm.tag(),
            tolerance: self.tolerance.clone(),
            eta: self.eta.clone(),
            epsilon: self.epsilon.clone(),
            candidate: self.candidate.to_document(),
            endpoint_ok: self.endpoint_ok,
            corner_bound: (&self.corner_bound).into(),
            candidate_bound: (&self.candidate_bound).into(),
            margin: self.margin.clone(),
            transcript: self.transcript.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("certificate serializes")
    }
}

/// Serialized certificate. Rationals are `"p/q"` strings and vectors are
/// sparse maps from basis index to coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub format: String,
    pub algebra: AlgebraDescription,
    pub algebra_id: String,
    pub step: usize,
    #[serde(with = "serde_sparse")]
    pub x1: BTreeMap<usize, BigRational>,
    #[serde(with = "serde_sparse")]
    pub x2: BTreeMap<usize, BigRational>,
    pub norm: String,
    #[serde(with = "serde_str")]
    pub tolerance: BigRational,
    #[serde(with = "serde_str")]
    pub eta: BigRational,
    #[serde(with = "serde_str")]
    pub epsilon: BigRational,
    pub candidate: PathDocument,
    pub endpoint_ok: bool,
    pub corner_bound: BoundSummary,
    pub candidate_bound: BoundSummary,
    #[serde(with = "serde_str")]
    pub margin: BigRational,
    pub transcript: Vec<String>,
}
