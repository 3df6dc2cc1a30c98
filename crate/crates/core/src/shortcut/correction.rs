//! Correction of a last-layer discrepancy by three conjugations placed
//! along the corner.
//!
//! With `X1, X2` spanning the first layer of a step-`s` algebra (`s >= 3`),
//! every `Z` in `V_s` splits as `[X1, W1] + [X2, W2]` with `W1, W2` in
//! `V_(s-1)`. Then `Y1 = W1`, `Y2 = -2 W1 - 2 W2`, `Y3 = W1 + 2 W2` solve
//!
//! ```text
//! Y1 + Y2 + Y3 + [X1, Y1] + [X2, Y2 / 2 + Y3] = Z
//! ```
//!
//! which is the logarithm of
//! `C_exp(X1)(exp Y1) * C_exp(X2/2)(exp Y2) * C_exp(X2)(exp Y3)` because
//! `exp(V_(s-1) + V_s)` is abelian. Scaling `Z` by `eps^s` scales the
//! solution by `eps^s`.

use num_traits::Zero;

use crate::error::Error;
use crate::group::GroupPoint;
use crate::linalg::{self, Matrix};
use crate::rational::{int, ratio, BigRational};
use crate::vector::{same_algebra, LieVector};

/// Solves `sum_i [gens[i], U_i] = z` for `U_i` in layer `j - 1`, where `z`
/// lies in layer `j >= 2`. Free unknowns are set to zero, pivoting left to
/// right over `(generator, basis element)` pairs.
pub fn decompose_by_generators(
    z: &LieVector,
    layer: usize,
    gens: &[&LieVector],
) -> Result<Vec<LieVector>, Error> {
    let algebra = z.algebra();
    if layer < 2 || layer > algebra.step() {
        return Err(Error::LayerOutOfRange {
            layer,
            step: algebra.step(),
        });
    }
    if !z.is_zero() && !z.is_in_layer(layer) {
        return Err(Error::WrongLayer { expected: layer });
    }
    if gens.iter().any(|g| !same_algebra(g.algebra(), algebra)) {
        return Err(Error::MixedAlgebras);
    }
    let source = algebra.layer_range(layer - 1);
    let target = algebra.layer_range(layer);
    if z.is_zero() {
        return Ok(gens.iter().map(|_| LieVector::zero(algebra)).collect());
    }
    let mut a = Matrix::zeros(target.len(), gens.len() * source.len());
    for (gi, g) in gens.iter().enumerate() {
        for (ci, b) in source.clone().enumerate() {
            let image = g.bracket_unchecked(&LieVector::basis(algebra, b));
            for (ri, t) in target.clone().enumerate() {
                let c = image.coord(t);
                if !c.is_zero() {
                    a.set(ri, gi * source.len() + ci, c.clone());
                }
            }
        }
    }
    let rhs: Vec<BigRational> = target.clone().map(|t| z.coord(t).clone()).collect();
    let x = linalg::solve(&a, &rhs).ok_or_else(|| {
        Error::InvariantViolation(format!(
            "layer {layer} is not spanned by brackets of the generators with layer {}",
            layer - 1
        ))
    })?;
    Ok(gens
        .iter()
        .enumerate()
        .map(|(gi, _)| {
            let mut u = LieVector::zero(algebra);
            for (ci, b) in source.clone().enumerate() {
                let c = &x[gi * source.len() + ci];
                if !c.is_zero() {
                    u = &u + &LieVector::basis(algebra, b).scale(c);
                }
            }
            u
        })
        .collect())
}

/// `(W1, W2)` in `V_(s-1)` with `[x1, W1] + [x2, W2] = z`, `z` in `V_s`.
pub fn bracket_decompose(
    x1: &LieVector,
    x2: &LieVector,
    z: &LieVector,
) -> Result<(LieVector, LieVector), Error> {
    let step = z.algebra().step();
    if step < 3 {
        return Err(Error::StepTooSmall { needed: 3, step });
    }
    let mut parts = decompose_by_generators(z, step, &[x1, x2])?.into_iter();
    let (w1, w2) = (parts.next().unwrap(), parts.next().unwrap());
    let back = &x1.bracket_unchecked(&w1) + &x2.bracket_unchecked(&w2);
    if &back != z {
        return Err(Error::InvariantViolation(
            "bracket decomposition failed back-substitution".into(),
        ));
    }
    Ok((w1, w2))
}

/// Three layer-`(s-1)` vectors correcting a last-layer error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionTriple {
    pub y1: LieVector,
    pub y2: LieVector,
    pub y3: LieVector,
}

impl CorrectionTriple {
    /// `Y1 + Y2 + Y3 + [x1, Y1] + [x2, Y2 / 2 + Y3]`.
    pub fn linear_form(&self, x1: &LieVector, x2: &LieVector) -> LieVector {
        let sum = &(&self.y1 + &self.y2) + &self.y3;
        let inner = &self.y2.scale(&ratio(1, 2)) + &self.y3;
        &(&sum + &x1.bracket_unchecked(&self.y1)) + &x2.bracket_unchecked(&inner)
    }

    pub fn scaled(&self, factor: &BigRational) -> CorrectionTriple {
        CorrectionTriple {
            y1: self.y1.scale(factor),
            y2: self.y2.scale(factor),
            y3: self.y3.scale(factor),
        }
    }

    /// `C_exp(x1)(exp(f Y1)) * C_exp(x2/2)(exp(f Y2)) * C_exp(x2)(exp(f Y3))`
    /// with `f = eps^s`, evaluated with the full group law.
    pub fn conjugation_product(
        &self,
        x1: &LieVector,
        x2: &LieVector,
        eps: &BigRational,
    ) -> Result<GroupPoint, Error> {
        let step = self.y1.algebra().step();
        let f = crate::rational::pow(eps, step as i32);
        let scaled = self.scaled(&f);
        let c1 = GroupPoint::exp(x1.clone()).conjugate(&GroupPoint::exp(scaled.y1))?;
        let c2 = GroupPoint::exp(x2.scale(&ratio(1, 2))).conjugate(&GroupPoint::exp(scaled.y2))?;
        let c3 = GroupPoint::exp(x2.clone()).conjugate(&GroupPoint::exp(scaled.y3))?;
        c1.product(&c2)?.product(&c3)
    }
}

/// Correction triple for a central `h = exp(Z)`, `Z` in the last layer.
pub fn solve_correction(
    h: &GroupPoint,
    x1: &LieVector,
    x2: &LieVector,
) -> Result<CorrectionTriple, Error> {
    let algebra = h.algebra();
    let step = algebra.step();
    if step < 3 {
        return Err(Error::StepTooSmall { needed: 3, step });
    }
    let z = h.log();
    if !z.is_zero() && !z.is_in_layer(step) {
        return Err(Error::WrongLayer { expected: step });
    }
    let (w1, w2) = bracket_decompose(x1, x2, z)?;
    let triple = CorrectionTriple {
        y1: w1.clone(),
        y2: (&w1 + &w2).scale(&int(-2)),
        y3: &w1 + &w2.scale(&int(2)),
    };
    if &triple.linear_form(x1, x2) != z {
        return Err(Error::InvariantViolation(
            "correction triple does not reproduce the discrepancy".into(),
        ));
    }
    Ok(triple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_free_nilpotent;

    #[test]
    fn read_off_decomposition() {
        let a = build_free_nilpotent(2, 3).unwrap();
        let x1 = LieVector::basis(&a, 0);
        let x2 = LieVector::basis(&a, 1);
        let x12 = x1.bracket(&x2).unwrap();
        let z = x1.bracket(&x12).unwrap();
        let (w1, w2) = bracket_decompose(&x1, &x2, &z).unwrap();
        assert_eq!(w1, x12);
        assert!(w2.is_zero());
        let (w1, w2) = bracket_decompose(&x1, &x2, &LieVector::zero(&a)).unwrap();
        assert!(w1.is_zero() && w2.is_zero());
    }

    #[test]
    fn explicit_solution_in_step_three() {
        let a = build_free_nilpotent(2, 3).unwrap();
        let x1 = LieVector::basis(&a, 0);
        let x2 = LieVector::basis(&a, 1);
        let x12 = x1.bracket(&x2).unwrap();
        let h = GroupPoint::exp(x1.bracket(&x12).unwrap());
        let t = solve_correction(&h, &x1, &x2).unwrap();
        assert_eq!(t.y1, x12);
        assert_eq!(t.y2, x12.scale(&int(-2)));
        assert_eq!(t.y3, x12);
        let eps = ratio(2, 5);
        assert_eq!(
            t.conjugation_product(&x1, &x2, &eps).unwrap(),
            h.dilate(&eps).unwrap()
        );
    }

    #[test]
    fn identity_needs_no_correction() {
        let a = build_free_nilpotent(2, 4).unwrap();
        let x1 = LieVector::basis(&a, 0);
        let x2 = LieVector::basis(&a, 1);
        let t = solve_correction(&GroupPoint::identity(&a), &x1, &x2).unwrap();
        assert!(t.y1.is_zero() && t.y2.is_zero() && t.y3.is_zero());
    }

    #[test]
    fn wrong_layer_and_small_step() {
        let a = build_free_nilpotent(2, 3).unwrap();
        let x1 = LieVector::basis(&a, 0);
        let x2 = LieVector::basis(&a, 1);
        let h = GroupPoint::exp(LieVector::basis(&a, 2));
        assert!(matches!(
            solve_correction(&h, &x1, &x2),
            Err(Error::WrongLayer { expected: 3 })
        ));
        let b = build_free_nilpotent(2, 2).unwrap();
        let g = GroupPoint::identity(&b);
        assert!(matches!(
            solve_correction(&g, &LieVector::basis(&b, 0), &LieVector::basis(&b, 1)),
            Err(Error::StepTooSmall { .. })
        ));
    }

    #[test]
    fn non_basis_generators() {
        let a = build_free_nilpotent(2, 4).unwrap();
        let x1 = &LieVector::basis(&a, 0).scale(&ratio(3, 2)) + &LieVector::basis(&a, 1);
        let x2 = &LieVector::basis(&a, 0) - &LieVector::basis(&a, 1).scale(&ratio(1, 3));
        for k in a.layer_range(4) {
            let z = LieVector::basis(&a, k).scale(&ratio(k as i64, 7));
            let (w1, w2) = bracket_decompose(&x1, &x2, &z).unwrap();
            assert_eq!(&x1.bracket(&w1).unwrap() + &x2.bracket(&w2).unwrap(), z);
        }
    }
}
