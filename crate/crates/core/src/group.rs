//! Group law in exponential coordinates of the first kind.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::Error;
use crate::rational::{serde_sparse, BigRational};
use crate::vector::{same_algebra, LieVector};

/// The group element `exp(log)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupPoint {
    log: LieVector,
}

impl GroupPoint {
    pub fn identity(algebra: &Algebra) -> Self {
        GroupPoint {
            log: LieVector::zero(algebra),
        }
    }

    pub fn exp(log: LieVector) -> Self {
        GroupPoint { log }
    }

    pub fn log(&self) -> &LieVector {
        &self.log
    }

    pub fn into_log(self) -> LieVector {
        self.log
    }

    pub fn algebra(&self) -> &Algebra {
        self.log.algebra()
    }

    pub fn is_identity(&self) -> bool {
        self.log.is_zero()
    }

    /// `self * other` through the truncated BCH series.
    pub fn product(&self, other: &GroupPoint) -> Result<GroupPoint, Error> {
        if !same_algebra(self.algebra(), other.algebra()) {
            return Err(Error::MixedAlgebras);
        }
        Ok(self.product_unchecked(other))
    }

    pub(crate) fn product_unchecked(&self, other: &GroupPoint) -> GroupPoint {
        let series = self.algebra().bch_series();
        GroupPoint {
            log: series.evaluate(&self.log, &other.log),
        }
    }

    pub fn inverse(&self) -> GroupPoint {
        GroupPoint { log: -&self.log }
    }

    /// `self * q * self^-1`.
    pub fn conjugate(&self, q: &GroupPoint) -> Result<GroupPoint, Error> {
        Ok(self.product(q)?.product_unchecked(&self.inverse()))
    }

    /// Dilation `delta_eps`, scaling layer `j` of the logarithm by `eps^j`.
    pub fn dilate(&self, eps: &BigRational) -> Result<GroupPoint, Error> {
        if !eps.is_positive() {
            return Err(Error::NonPositiveScale(eps.to_string()));
        }
        Ok(GroupPoint {
            log: self.log.dilated(eps),
        })
    }

    pub fn to_document(&self) -> GroupPointDocument {
        GroupPointDocument {
            algebra: self.algebra().id().to_string(),
            log: self.log.to_sparse(),
        }
    }

    pub fn from_document(algebra: &Algebra, doc: &GroupPointDocument) -> Result<Self, Error> {
        if doc.algebra != algebra.id() {
            return Err(Error::MixedAlgebras);
        }
        Ok(GroupPoint::exp(LieVector::from_sparse(
            algebra,
            doc.log.iter().map(|(k, c)| (*k, c.clone())),
        )?))
    }
}

/// Serialized group point: sparse logarithm plus the algebra id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPointDocument {
    pub algebra: String,
    #[serde(with = "serde_sparse")]
    pub log: BTreeMap<usize, BigRational>,
}

/// Product of a sequence of points, left to right.
pub fn product_all<'a, I>(algebra: &Algebra, points: I) -> Result<GroupPoint, Error>
where
    I: IntoIterator<Item = &'a GroupPoint>,
{
    points
        .into_iter()
        .try_fold(GroupPoint::identity(algebra), |acc, p| acc.product(p))
}
