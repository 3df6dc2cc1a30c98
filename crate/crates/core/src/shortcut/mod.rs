//! Shortcuts of corners in rank-2 Carnot groups, by induction on the step.
//!
//! Step 2 uses six explicit segments. For step `s >= 3` a shortcut of the
//! projected corner in `G / exp(V_s)` is lifted, and the central error of the
//! lift is cancelled by three small conjugations realized as horizontal
//! commutator words.

pub mod candidate;
pub mod certificate;
pub mod correction;
pub mod heisenberg;
pub mod realize;

use num_traits::Zero;

pub use candidate::{build_candidate, eta_factors, CorrectionPlan};
pub use certificate::{CertificateDocument, ShortcutCertificate, CERTIFICATE_FORMAT};
pub use correction::{bracket_decompose, decompose_by_generators, solve_correction, CorrectionTriple};
pub use heisenberg::heisenberg_shortcut;
pub use realize::realize_vertical;

use crate::algebra::Algebra;
use crate::error::Error;
use crate::norm::{default_tolerance, FirstLayerNorm};
use crate::path::first_layer_rank;
use crate::quotient::QuotientMap;
use crate::rational::{format_rational, ratio, two_pow, BigRational};
use crate::vector::{same_algebra, LieVector};

#[derive(Debug, Clone, PartialEq)]
pub enum EtaChoice {
    /// Scan `start * 2^-k`, `k = 0..=halvings`.
    Auto,
    /// Use this `eta` at the outermost step; inner steps still scan.
    Fixed(BigRational),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortcutOptions {
    pub eta: EtaChoice,
    pub start: BigRational,
    pub halvings: u32,
    /// Required margin at the outermost step; zero means strictly positive.
    pub min_margin: BigRational,
    pub tolerance: BigRational,
}

impl Default for ShortcutOptions {
    fn default() -> Self {
        ShortcutOptions {
            eta: EtaChoice::Auto,
            start: ratio(1, 4),
            halvings: 40,
            min_margin: BigRational::zero(),
            tolerance: default_tolerance(),
        }
    }
}

impl ShortcutOptions {
    fn scan(&self) -> Vec<BigRational> {
        match &self.eta {
            EtaChoice::Fixed(eta) => vec![eta.clone()],
            EtaChoice::Auto => (0..=self.halvings as i32)
                .map(|k| &self.start * two_pow(-k))
                .collect(),
        }
    }

    fn inner(&self) -> ShortcutOptions {
        ShortcutOptions {
            eta: EtaChoice::Auto,
            min_margin: BigRational::zero(),
            ..self.clone()
        }
    }
}

/// Certified shortcut of the corner `exp(x1) -> e -> exp(x2)`.
///
/// Among the scanned `eta` the one with the largest predicted margin is
/// used; inner steps use the same rule so the gap handed upward is as large
/// as the scan allows. The outermost margin must reach `min_margin`.
pub fn recursive_shortcut(
    algebra: &Algebra,
    x1: &LieVector,
    x2: &LieVector,
    norm: &FirstLayerNorm,
    options: &ShortcutOptions,
) -> Result<ShortcutCertificate, Error> {
    if !same_algebra(x1.algebra(), algebra) || !same_algebra(x2.algebra(), algebra) {
        return Err(Error::MixedAlgebras);
    }
    if algebra.step() == 1 {
        return Err(Error::AbelianStep1);
    }
    if algebra.rank() != 2 {
        return Err(Error::NotRankTwo(algebra.rank()));
    }
    if !x1.is_horizontal() || !x2.is_horizontal() {
        return Err(Error::NotHorizontal);
    }
    if first_layer_rank(&[x1, x2]) < 2 {
        return Err(Error::LinearlyDependent);
    }
    if algebra.step() == 2 {
        return base_case(x1, x2, norm, options);
    }
    inductive_step(algebra, x1, x2, norm, options)
}

fn base_case(
    x1: &LieVector,
    x2: &LieVector,
    norm: &FirstLayerNorm,
    options: &ShortcutOptions,
) -> Result<ShortcutCertificate, Error> {
    let mut best: Option<(BigRational, BigRational)> = None;
    let corner = crate::path::make_corner(x1, x2)?.length_upper_bound(norm, &options.tolerance)?;
    for eps in options.scan() {
        let path = heisenberg_shortcut(x1, x2, &eps)?;
        let bound = path.length_upper_bound(norm, &options.tolerance)?;
        let margin = corner.value() - bound.value();
        if best.as_ref().is_none_or(|(_, m)| &margin > m) {
            best = Some((eps, margin));
        }
    }
    let (eps, _) = best.expect("scan is never empty");
    let path = heisenberg_shortcut(x1, x2, &eps)?;
    let transcript = vec![
        format!("step 2: six-segment shortcut with eps = {}", format_rational(&eps)),
    ];
    let cert = ShortcutCertificate::assemble(
        x1,
        x2,
        norm,
        &options.tolerance,
        eps.clone(),
        eps,
        path,
        transcript,
    )?;
    accept(cert, options)
}

fn inductive_step(
    algebra: &Algebra,
    x1: &LieVector,
    x2: &LieVector,
    norm: &FirstLayerNorm,
    options: &ShortcutOptions,
) -> Result<ShortcutCertificate, Error> {
    let step = algebra.step();
    let q = QuotientMap::new(algebra)?;
    let inner = recursive_shortcut(
        q.target(),
        &q.project_vector(x1)?,
        &q.project_vector(x2)?,
        norm,
        &options.inner(),
    )?;
    if inner.margin() <= &BigRational::zero() {
        return Err(Error::InnerNotShorter {
            inner: format_rational(inner.candidate_bound().value()),
            corner: format_rational(inner.corner_bound().value()),
        });
    }
    let plan = CorrectionPlan::new(x1, x2, inner.candidate())?;

    let (eta, tol, gap) = choose_eta(step, x1, x2, norm, &inner, &plan, options)?;
    let (eps, _) = eta_factors(&eta, step)?;
    let path = plan.assemble(&eta)?;

    let mut transcript = inner.transcript().to_vec();
    transcript.push(format!(
        "step {step}: log(h) in V_{step}, h = exp(X2) * (lifted inner endpoint)^-1"
    ));
    transcript.push(format!(
        "step {step}: Y1 + Y2 + Y3 + [X1,Y1] + [X2,Y2/2+Y3] == log(h)"
    ));
    let product = plan.triple().conjugation_product(x1, x2, &eps)?;
    let conj_ok = product == plan.discrepancy().dilate(&eps)?;
    if !conj_ok {
        return Err(Error::InvariantViolation(
            "conjugation product differs from the dilated discrepancy".into(),
        ));
    }
    transcript.push(format!(
        "step {step}: conjugation product == delta_eps(h) at eps = {}",
        format_rational(&eps)
    ));
    for (i, w) in plan.words().iter().enumerate() {
        let y = [&plan.triple().y1, &plan.triple().y2, &plan.triple().y3][i];
        if w.development() != crate::group::GroupPoint::exp(y.clone()) {
            return Err(Error::InvariantViolation(format!(
                "realization word {} misses its target",
                i + 1
            )));
        }
        transcript.push(format!(
            "step {step}: word {} ({} segments) develops to exp(Y{})",
            i + 1,
            w.len(),
            i + 1
        ));
    }
    transcript.push(format!(
        "step {step}: eta = {}, corner gap of inner shortcut = {}",
        format_rational(&eta),
        format_rational(&gap)
    ));
    let cert = ShortcutCertificate::assemble(
        x1,
        x2,
        norm,
        &tol,
        eta,
        eps,
        path,
        transcript,
    )?;
    accept(cert, options)
}

/// Picks `eta` from the scan by predicted margin and a tolerance small
/// enough not to swamp it.
///
/// The candidate length is `|x1| + |x2| - eps (|x1| + |x2| - D) + lambda C`
/// up to the tolerance, with `D` the inner bound and `C` the total length of
/// the correction words, so the scan needs only these numbers. When the
/// best prediction is within `2^20` of the tolerance, the tolerance is
/// lowered to a power of two `2^24` below the prediction and the scan is
/// repeated.
fn choose_eta(
    step: usize,
    x1: &LieVector,
    x2: &LieVector,
    norm: &FirstLayerNorm,
    inner: &ShortcutCertificate,
    plan: &CorrectionPlan,
    options: &ShortcutOptions,
) -> Result<(BigRational, BigRational, BigRational), Error> {
    let mut tol = options.tolerance.clone();
    loop {
        let a = norm.certified_upper(x1, &tol)?;
        let b = norm.certified_upper(x2, &tol)?;
        let gap = a.value() + b.value() - inner.candidate_bound().value();
        let mut c = BigRational::zero();
        for w in plan.words() {
            c += w.length_upper_bound(norm, &tol)?.value();
        }
        let mut best: Option<(BigRational, BigRational)> = None;
        for eta in options.scan() {
            let Ok((eps, lambda)) = eta_factors(&eta, step) else {
                continue;
            };
            let predicted = &eps * &gap - &lambda * &c;
            if best.as_ref().is_none_or(|(_, m)| &predicted > m) {
                best = Some((eta, predicted));
            }
        }
        let Some((eta, predicted)) = best else {
            return Err(Error::EtaOutOfRange(
                options.scan().first().map(format_rational).unwrap_or_default(),
            ));
        };
        if predicted <= BigRational::zero() || &tol * two_pow(20) <= predicted {
            return Ok((eta, tol, gap));
        }
        let exponent = predicted.numer().bits() as i64 - predicted.denom().bits() as i64 - 24;
        tol = two_pow(exponent as i32);
    }
}

fn accept(cert: ShortcutCertificate, options: &ShortcutOptions) -> Result<ShortcutCertificate, Error> {
    if !cert.endpoint_ok() {
        return Err(Error::EndpointMismatch);
    }
    let enough = if options.min_margin.is_zero() {
        cert.margin() > &BigRational::zero()
    } else {
        cert.margin() >= &options.min_margin
    };
    if !enough {
        return Err(Error::EpsilonSearchExhausted {
            required: format_rational(&options.min_margin),
            best: format_rational(cert.margin()),
        });
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_free_nilpotent;

    fn generators(a: &Algebra) -> (LieVector, LieVector) {
        (LieVector::basis(a, 0), LieVector::basis(a, 1))
    }

    #[test]
    fn heisenberg_fixed_eps() {
        let a = build_free_nilpotent(2, 2).unwrap();
        let (x1, x2) = generators(&a);
        let opts = ShortcutOptions {
            eta: EtaChoice::Fixed(ratio(1, 10)),
            ..Default::default()
        };
        let cert = recursive_shortcut(&a, &x1, &x2, &FirstLayerNorm::euclidean(), &opts).unwrap();
        assert!(cert.endpoint_ok());
        assert!(cert.margin() >= &ratio(38, 1000));
        assert_eq!(cert.corner_bound().value(), &ratio(2, 1));
    }

    #[test]
    fn step_three() {
        let a = build_free_nilpotent(2, 3).unwrap();
        let (x1, x2) = generators(&a);
        let cert = recursive_shortcut(
            &a,
            &x1,
            &x2,
            &FirstLayerNorm::euclidean(),
            &ShortcutOptions::default(),
        )
        .unwrap();
        assert!(cert.endpoint_ok());
        assert!(cert.margin() > &BigRational::zero());
    }

    #[test]
    fn guards() {
        let n = FirstLayerNorm::euclidean();
        let opts = ShortcutOptions::default();
        let a = build_free_nilpotent(2, 1).unwrap();
        let (x1, x2) = generators(&a);
        assert!(matches!(
            recursive_shortcut(&a, &x1, &x2, &n, &opts),
            Err(Error::AbelianStep1)
        ));
        let b = build_free_nilpotent(3, 2).unwrap();
        let (x1, x2) = generators(&b);
        assert!(matches!(
            recursive_shortcut(&b, &x1, &x2, &n, &opts),
            Err(Error::NotRankTwo(3))
        ));
        let c = build_free_nilpotent(2, 3).unwrap();
        let (x1, _) = generators(&c);
        assert!(matches!(
            recursive_shortcut(&c, &x1, &x1.scale(&ratio(-3, 1)), &n, &opts),
            Err(Error::LinearlyDependent)
        ));
    }
}
