//! Central quotient `G / exp(V_s)`.

use crate::algebra::Algebra;
use crate::error::Error;
use crate::group::GroupPoint;
use crate::vector::{same_algebra, LieVector};

/// Quotient of a step-`s` algebra by its last layer. The target keeps the
/// basis of layers `1..s` with the same indices, so the first layers
/// correspond coordinate by coordinate.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    source: Algebra,
    target: Algebra,
}

impl QuotientMap {
    pub fn new(source: &Algebra) -> Result<Self, Error> {
        let target = source.truncated().ok_or(Error::NoQuotient)?;
        Ok(QuotientMap {
            source: source.clone(),
            target,
        })
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    /// Drops the last-layer coordinates (the differential of the projection).
    pub fn project_vector(&self, v: &LieVector) -> Result<LieVector, Error> {
        if !same_algebra(v.algebra(), &self.source) {
            return Err(Error::MixedAlgebras);
        }
        let keep = self.target.dim();
        LieVector::from_coords(&self.target, v.coords()[..keep].to_vec())
    }

    pub fn project(&self, g: &GroupPoint) -> Result<GroupPoint, Error> {
        Ok(GroupPoint::exp(self.project_vector(g.log())?))
    }

    /// Reinterprets a first-layer vector of the target in the source.
    pub fn lift_first_layer(&self, v: &LieVector) -> Result<LieVector, Error> {
        if !same_algebra(v.algebra(), &self.target) {
            return Err(Error::MixedAlgebras);
        }
        if !v.is_horizontal() {
            return Err(Error::NotHorizontal);
        }
        LieVector::from_sparse(&self.source, v.to_sparse())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_free_nilpotent;
    use crate::rational::ratio;

    #[test]
    fn step_one_has_no_quotient() {
        let a = build_free_nilpotent(2, 1).unwrap();
        assert!(matches!(QuotientMap::new(&a), Err(Error::NoQuotient)));
    }

    #[test]
    fn last_layer_projects_to_identity() {
        let a = build_free_nilpotent(2, 4).unwrap();
        let q = QuotientMap::new(&a).unwrap();
        for k in a.layer_range(4) {
            let z = GroupPoint::exp(LieVector::basis(&a, k).scale(&ratio(5, 3)));
            assert!(q.project(&z).unwrap().is_identity());
        }
        let x1 = LieVector::basis(&a, 0);
        let p = q.project(&GroupPoint::exp(x1.clone())).unwrap();
        assert_eq!(p.log().coords(), &x1.coords()[..q.target().dim()]);
        assert_eq!(q.lift_first_layer(p.log()).unwrap(), x1);
    }

    #[test]
    fn lift_rejects_vertical_vectors() {
        let a = build_free_nilpotent(2, 3).unwrap();
        let q = QuotientMap::new(&a).unwrap();
        let v = LieVector::basis(q.target(), 2);
        assert!(matches!(q.lift_first_layer(&v), Err(Error::NotHorizontal)));
    }
}
