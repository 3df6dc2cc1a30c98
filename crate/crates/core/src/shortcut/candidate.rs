//! Seven-piece candidate for step `s >= 3` built from a step-`(s-1)`
//! shortcut.
//!
//! The inner path is lifted horizontally; its development `L` from the
//! identity misses `exp(-x1) exp(x2)` by a central `h`. With
//! `eps = eta^(s-1)` and `lambda = eta^s` the candidate is
//!
//! ```text
//! delta_lambda(w1) ; (eps-1) x1 ; delta_eps(L) ; (1/2-eps) x2 ;
//! delta_lambda(w2) ; x2/2 ; delta_lambda(w3)
//! ```
//!
//! where `w_i` realize the correction triple solving for `h`.

use num_traits::{One, Zero};

use crate::error::Error;
use crate::group::GroupPoint;
use crate::path::{first_layer_rank, lift_path, HorizontalPath, Segment};
use crate::quotient::QuotientMap;
use crate::rational::{format_rational, pow, ratio, BigRational};
use crate::shortcut::certificate::ShortcutCertificate;
use crate::shortcut::correction::{solve_correction, CorrectionTriple};
use crate::shortcut::realize::realize_vertical;
use crate::vector::{same_algebra, LieVector};

/// `(eps, lambda) = (eta^(s-1), eta^s)`, with `0 < eps < 1/2`.
pub fn eta_factors(eta: &BigRational, step: usize) -> Result<(BigRational, BigRational), Error> {
    if !(eta > &BigRational::zero()) {
        return Err(Error::EtaOutOfRange(format_rational(eta)));
    }
    let eps = pow(eta, step as i32 - 1);
    if eps >= ratio(1, 2) {
        return Err(Error::EtaOutOfRange(format_rational(eta)));
    }
    let lambda = &eps * eta;
    Ok((eps, lambda))
}

/// Everything in the candidate that does not depend on `eta`.
#[derive(Debug, Clone)]
pub struct CorrectionPlan {
    x1: LieVector,
    x2: LieVector,
    lifted: HorizontalPath,
    h: GroupPoint,
    triple: CorrectionTriple,
    words: [HorizontalPath; 3],
}

impl CorrectionPlan {
    /// `inner` must run from `exp(pi x1)` to `exp(pi x2)` in the quotient.
    pub fn new(x1: &LieVector, x2: &LieVector, inner: &HorizontalPath) -> Result<Self, Error> {
        if !same_algebra(x1.algebra(), x2.algebra()) {
            return Err(Error::MixedAlgebras);
        }
        let algebra = x1.algebra();
        if algebra.step() < 3 {
            return Err(Error::StepTooSmall {
                needed: 3,
                step: algebra.step(),
            });
        }
        if !x1.is_horizontal() || !x2.is_horizontal() {
            return Err(Error::NotHorizontal);
        }
        if first_layer_rank(&[x1, x2]) < 2 {
            return Err(Error::LinearlyDependent);
        }
        let q = QuotientMap::new(algebra)?;
        let lifted = lift_path(&q, inner)?;
        let reached = lifted.endpoint(&GroupPoint::exp(x1.clone()))?;
        let h = GroupPoint::exp(x2.clone()).product(&reached.inverse())?;
        if !h.log().is_zero() && !h.log().is_in_layer(algebra.step()) {
            return Err(Error::InvariantViolation(
                "inner path does not end at the projected target".into(),
            ));
        }
        let triple = solve_correction(&h, x1, x2)?;
        let words = [
            realize_vertical(&triple.y1)?,
            realize_vertical(&triple.y2)?,
            realize_vertical(&triple.y3)?,
        ];
        Ok(CorrectionPlan {
            x1: x1.clone(),
            x2: x2.clone(),
            lifted,
            h,
            triple,
            words,
        })
    }

    /// Lift discrepancy `exp(x2) * (lifted endpoint from exp(x1))^-1`.
    pub fn discrepancy(&self) -> &GroupPoint {
        &self.h
    }

    pub fn triple(&self) -> &CorrectionTriple {
        &self.triple
    }

    /// Realization words of `Y1, Y2, Y3`.
    pub fn words(&self) -> &[HorizontalPath; 3] {
        &self.words
    }

    pub fn lifted(&self) -> &HorizontalPath {
        &self.lifted
    }

    pub fn assemble(&self, eta: &BigRational) -> Result<HorizontalPath, Error> {
        let algebra = self.x1.algebra();
        let (eps, lambda) = eta_factors(eta, algebra.step())?;
        let mut path = self.words[0].dilate(&lambda)?;
        path.push(Segment::unit(self.x1.scale(&(&eps - BigRational::one())))?)?;
        path.extend(&self.lifted.dilate(&eps)?)?;
        path.push(Segment::unit(self.x2.scale(&(ratio(1, 2) - &eps)))?)?;
        path.extend(&self.words[1].dilate(&lambda)?)?;
        path.push(Segment::unit(self.x2.scale(&ratio(1, 2)))?)?;
        path.extend(&self.words[2].dilate(&lambda)?)?;
        Ok(path)
    }
}

/// Candidate from `exp(x1)` to `exp(x2)` given a certified shortcut one step
/// down.
pub fn build_candidate(
    x1: &LieVector,
    x2: &LieVector,
    eta: &BigRational,
    inner: &ShortcutCertificate,
) -> Result<HorizontalPath, Error> {
    if inner.margin() <= &BigRational::zero() {
        return Err(Error::InnerNotShorter {
            inner: format_rational(inner.candidate_bound().value()),
            corner: format_rational(inner.corner_bound().value()),
        });
    }
    let q = QuotientMap::new(x1.algebra())?;
    if &q.project_vector(x1)? != inner.x1() || &q.project_vector(x2)? != inner.x2() {
        return Err(Error::InvariantViolation(
            "inner certificate is for different generators".into(),
        ));
    }
    CorrectionPlan::new(x1, x2, inner.candidate())?.assemble(eta)
}
