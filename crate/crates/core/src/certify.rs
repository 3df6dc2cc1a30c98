//! Independent re-verification of serialized certificates and batch runs.
//!
//! Nothing here trusts the recorded verdicts: the algebra is rebuilt and
//! revalidated from its description, the endpoint is recomputed and both
//! bounds are recomputed from the path.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algebra::{build_free_nilpotent, from_description, Algebra};
use crate::error::Error;
use crate::group::GroupPoint;
use crate::norm::{BoundSummary, FirstLayerNorm};
use crate::path::{make_corner, HorizontalPath};
use crate::rational::{format_rational, to_f64, BigRational};
use crate::shortcut::{
    recursive_shortcut, CertificateDocument, EtaChoice, ShortcutCertificate, ShortcutOptions,
    CERTIFICATE_FORMAT,
};
use crate::vector::LieVector;

/// A certificate rebuilt from its serialized form.
#[derive(Debug, Clone)]
pub struct LoadedCertificate {
    pub algebra: Algebra,
    pub x1: LieVector,
    pub x2: LieVector,
    pub norm: FirstLayerNorm,
    pub tolerance: BigRational,
    pub candidate: HorizontalPath,
    pub document: CertificateDocument,
}

impl LoadedCertificate {
    pub fn from_document(doc: &CertificateDocument) -> Result<Self, Error> {
        if doc.format != CERTIFICATE_FORMAT {
            return Err(Error::Malformed(format!("unknown format {:?}", doc.format)));
        }
        let algebra = from_description(&doc.algebra)?;
        if algebra.id() != doc.algebra_id {
            return Err(Error::Malformed(format!(
                "algebra id {} does not match its description ({})",
                doc.algebra_id,
                algebra.id()
            )));
        }
        if algebra.step() != doc.step {
            return Err(Error::Malformed(format!(
                "recorded step {} but the algebra has step {}",
                doc.step,
                algebra.step()
            )));
        }
        let x1 = LieVector::from_sparse(&algebra, doc.x1.iter().map(|(k, c)| (*k, c.clone())))?;
        let x2 = LieVector::from_sparse(&algebra, doc.x2.iter().map(|(k, c)| (*k, c.clone())))?;
        let norm = FirstLayerNorm::from_tag(&doc.norm)?;
        if doc.tolerance <= BigRational::zero() {
            return Err(Error::BadTolerance(format_rational(&doc.tolerance)));
        }
        let candidate = HorizontalPath::from_document(&algebra, &doc.candidate)?;
        Ok(LoadedCertificate {
            algebra,
            x1,
            x2,
            norm,
            tolerance: doc.tolerance.clone(),
            candidate,
            document: doc.clone(),
        })
    }
}

/// Parses and rebuilds a certificate. Failures here are distinct from a
/// negative verdict.
pub fn load_certificate(text: &str) -> Result<LoadedCertificate, Error> {
    let doc: CertificateDocument =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    LoadedCertificate::from_document(&doc)
}

pub fn load_certificate_file(path: &Path) -> Result<LoadedCertificate, Error> {
    load_certificate(&std::fs::read_to_string(path)?)
}

/// `endpoint(candidate, exp(X1)) == exp(X2)`, recomputed exactly.
pub fn verify_endpoint(cert: &LoadedCertificate) -> bool {
    cert.candidate
        .endpoint(&GroupPoint::exp(cert.x1.clone()))
        .map(|e| e == GroupPoint::exp(cert.x2.clone()))
        .unwrap_or(false)
}

/// Recomputed corner bound minus recomputed candidate bound.
pub fn certify_shorter(cert: &LoadedCertificate) -> Result<BigRational, Error> {
    if !verify_endpoint(cert) {
        return Err(Error::EndpointMismatch);
    }
    let corner = make_corner(&cert.x1, &cert.x2)?.length_upper_bound(&cert.norm, &cert.tolerance)?;
    let candidate = cert.candidate.length_upper_bound(&cert.norm, &cert.tolerance)?;
    if !corner.verify() || !candidate.verify() {
        return Err(Error::InvariantViolation(
            "recomputed bound failed verification".into(),
        ));
    }
    Ok(corner.value() - candidate.value())
}

/// Outcome of re-verifying a loaded certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub endpoint_ok: bool,
    pub margin: Option<String>,
    /// Recorded endpoint flag and margin agree with the recomputation.
    pub matches_record: bool,
    pub certified: bool,
}

pub fn verify(cert: &LoadedCertificate) -> Result<Verdict, Error> {
    let endpoint_ok = verify_endpoint(cert);
    let margin = if endpoint_ok {
        Some(certify_shorter(cert)?)
    } else {
        None
    };
    let matches_record = endpoint_ok == cert.document.endpoint_ok
        && margin.as_ref().is_none_or(|m| m == &cert.document.margin);
    let certified = endpoint_ok
        && matches_record
        && margin.as_ref().is_some_and(|m| m > &BigRational::zero());
    Ok(Verdict {
        endpoint_ok,
        margin: margin.as_ref().map(format_rational),
        matches_record,
        certified,
    })
}

/// A demonstration run over one or more steps of free rank-2 groups.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub steps: Vec<usize>,
    pub norm: FirstLayerNorm,
    /// First-layer coordinates; `None` selects the canonical generator.
    pub x1: Option<Vec<BigRational>>,
    pub x2: Option<Vec<BigRational>>,
    pub options: ShortcutOptions,
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub steps: Vec<usize>,
    pub norm: String,
    pub x1: Option<Vec<String>>,
    pub x2: Option<Vec<String>>,
    pub eta: String,
    pub eta_start: String,
    pub halvings: u32,
    pub min_margin: String,
    pub tolerance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub certified: bool,
    pub eta: Option<String>,
    pub epsilon: Option<String>,
    pub corner_bound: Option<BoundSummary>,
    pub candidate_bound: Option<BoundSummary>,
    pub margin: Option<String>,
    pub margin_approx: Option<f64>,
    pub segments: Option<usize>,
    pub wall_time_ms: u128,
    pub transcript_sha256: Option<String>,
    pub certificate_file: Option<String>,
    pub error: Option<ErrorRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub steps: Vec<StepReport>,
    pub all_certified: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord {
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

fn echo(config: &RunConfig) -> ConfigEcho {
    let coords = |v: &Option<Vec<BigRational>>| {
        v.as_ref()
            .map(|c| c.iter().map(format_rational).collect())
    };
    ConfigEcho {
        steps: config.steps.clone(),
        norm: config.norm.tag(),
        x1: coords(&config.x1),
        x2: coords(&config.x2),
        eta: match &config.options.eta {
            EtaChoice::Auto => "auto".into(),
            EtaChoice::Fixed(e) => format_rational(e),
        },
        eta_start: format_rational(&config.options.start),
        halvings: config.options.halvings,
        min_margin: format_rational(&config.options.min_margin),
        tolerance: format_rational(&config.options.tolerance),
    }
}

/// SHA-256 of the transcript lines joined by newlines.
pub fn transcript_digest(lines: &[String]) -> String {
    let mut hasher = Sha256::new();
    for line in lines {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

fn generator(algebra: &Algebra, coords: &Option<Vec<BigRational>>, k: usize) -> Result<LieVector, Error> {
    match coords {
        Some(c) => LieVector::first_layer(algebra, c),
        None => Ok(LieVector::basis(algebra, k)),
    }
}

/// Builds the certificate for one step.
pub fn certify_step(config: &RunConfig, step: usize) -> Result<ShortcutCertificate, Error> {
    let algebra = build_free_nilpotent(2, step)?;
    let x1 = generator(&algebra, &config.x1, 0)?;
    let x2 = generator(&algebra, &config.x2, 1)?;
    recursive_shortcut(&algebra, &x1, &x2, &config.norm, &config.options)
}

fn run_step(config: &RunConfig, step: usize) -> StepReport {
    let started = Instant::now();
    let result = certify_step(config, step).and_then(|cert| {
        let file = match &config.out_dir {
            Some(dir) => {
                let path = dir.join(format!("certificate-step{step}.json"));
                std::fs::write(&path, cert.to_json())?;
                Some(path.display().to_string())
            }
            None => None,
        };
        Ok((cert, file))
    });
    let wall_time_ms = started.elapsed().as_millis();
    match result {
        Ok((cert, file)) => StepReport {
            step,
            certified: cert.endpoint_ok() && cert.margin() > &BigRational::zero(),
            eta: Some(format_rational(cert.eta())),
            epsilon: Some(format_rational(cert.epsilon())),
            corner_bound: Some(cert.corner_bound().into()),
            candidate_bound: Some(cert.candidate_bound().into()),
            margin: Some(format_rational(cert.margin())),
            margin_approx: Some(to_f64(cert.margin())),
            segments: Some(cert.candidate().len()),
            wall_time_ms,
            transcript_sha256: Some(transcript_digest(cert.transcript())),
            certificate_file: file,
            error: None,
        },
        Err(e) => StepReport {
            step,
            certified: false,
            eta: None,
            epsilon: None,
            corner_bound: None,
            candidate_bound: None,
            margin: None,
            margin_approx: None,
            segments: None,
            wall_time_ms,
            transcript_sha256: None,
            certificate_file: None,
            error: Some((&e).into()),
        },
    }
}

/// Certifies every configured step (concurrently) and writes the
/// certificates plus `report.json` when an output directory is set.
pub fn run_demo(config: &RunConfig) -> Result<RunReport, Error> {
    if let Some(dir) = &config.out_dir {
        std::fs::create_dir_all(dir)?;
    }
    let steps: Vec<StepReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .steps
            .iter()
            .map(|&step| scope.spawn(move || run_step(config, step)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("step worker panicked"))
            .collect()
    });
    let report = RunReport {
        config: echo(config),
        all_certified: !steps.is_empty() && steps.iter().all(|s| s.certified),
        steps,
    };
    if let Some(dir) = &config.out_dir {
        std::fs::write(dir.join("report.json"), report.to_json())?;
    }
    Ok(report)
}
