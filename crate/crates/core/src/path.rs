//! Piecewise-horizontal curves: words of segments `t -> exp(t X)`,
//! `X` in the first layer.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::Error;
use crate::group::GroupPoint;
use crate::linalg::Matrix;
use crate::norm::{CertifiedBound, FirstLayerNorm};
use crate::quotient::QuotientMap;
use crate::rational::{format_rational, serde_sparse, serde_str, BigRational};
use crate::vector::{same_algebra, LieVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    direction: LieVector,
    duration: BigRational,
}

impl Segment {
    pub fn new(direction: LieVector, duration: BigRational) -> Result<Self, Error> {
        if !direction.is_horizontal() {
            return Err(Error::NotHorizontal);
        }
        if !duration.is_positive() {
            return Err(Error::NonPositiveDuration(format_rational(&duration)));
        }
        Ok(Segment {
            direction,
            duration,
        })
    }

    /// Unit-duration segment `exp(direction)`.
    pub fn unit(direction: LieVector) -> Result<Self, Error> {
        Self::new(direction, BigRational::one())
    }

    pub fn direction(&self) -> &LieVector {
        &self.direction
    }

    pub fn duration(&self) -> &BigRational {
        &self.duration
    }

    /// `exp(duration * direction)`.
    pub fn increment(&self) -> GroupPoint {
        GroupPoint::exp(self.direction.scale(&self.duration))
    }

    fn reversed(&self) -> Segment {
        Segment {
            direction: -&self.direction,
            duration: self.duration.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorizontalPath {
    algebra: Algebra,
    segments: Vec<Segment>,
}

impl HorizontalPath {
    pub fn empty(algebra: &Algebra) -> Self {
        HorizontalPath {
            algebra: algebra.clone(),
            segments: Vec::new(),
        }
    }

    pub fn from_segments(algebra: &Algebra, segments: Vec<Segment>) -> Result<Self, Error> {
        if segments
            .iter()
            .any(|s| !same_algebra(s.direction.algebra(), algebra))
        {
            return Err(Error::MixedAlgebras);
        }
        Ok(HorizontalPath {
            algebra: algebra.clone(),
            segments,
        })
    }

    /// Path made of unit-duration segments along `directions`.
    pub fn from_directions<I>(algebra: &Algebra, directions: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = LieVector>,
    {
        let segments = directions
            .into_iter()
            .map(Segment::unit)
            .collect::<Result<_, _>>()?;
        Self::from_segments(algebra, segments)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn push(&mut self, segment: Segment) -> Result<(), Error> {
        if !same_algebra(segment.direction.algebra(), &self.algebra) {
            return Err(Error::MixedAlgebras);
        }
        self.segments.push(segment);
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &HorizontalPath) -> Result<HorizontalPath, Error> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::MixedAlgebras);
        }
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        Ok(HorizontalPath {
            algebra: self.algebra.clone(),
            segments,
        })
    }

    pub fn extend(&mut self, other: &HorizontalPath) -> Result<(), Error> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::MixedAlgebras);
        }
        self.segments.extend(other.segments.iter().cloned());
        Ok(())
    }

    /// Same curve traversed backwards.
    pub fn reverse(&self) -> HorizontalPath {
        HorizontalPath {
            algebra: self.algebra.clone(),
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
        }
    }

    /// Same segments in the opposite order.
    pub fn reverse_order(&self) -> HorizontalPath {
        HorizontalPath {
            algebra: self.algebra.clone(),
            segments: self.segments.iter().rev().cloned().collect(),
        }
    }

    /// `base * exp(d_1 X_1) * ... * exp(d_n X_n)`.
    pub fn endpoint(&self, base: &GroupPoint) -> Result<GroupPoint, Error> {
        if !same_algebra(base.algebra(), &self.algebra) {
            return Err(Error::MixedAlgebras);
        }
        Ok(self
            .segments
            .iter()
            .fold(base.clone(), |acc, s| acc.product_unchecked(&s.increment())))
    }

    /// Endpoint when starting at the identity.
    pub fn development(&self) -> GroupPoint {
        self.endpoint(&GroupPoint::identity(&self.algebra))
            .expect("same algebra")
    }

    /// Image under the dilation `delta_eps`: directions scaled by `eps`,
    /// durations kept.
    pub fn dilate(&self, eps: &BigRational) -> Result<HorizontalPath, Error> {
        if !eps.is_positive() {
            return Err(Error::NonPositiveScale(format_rational(eps)));
        }
        Ok(HorizontalPath {
            algebra: self.algebra.clone(),
            segments: self
                .segments
                .iter()
                .map(|s| Segment {
                    direction: s.direction.scale(eps),
                    duration: s.duration.clone(),
                })
                .collect(),
        })
    }

    /// Upper bound on the length `sum d_k |X_k|`. Each segment gets an equal
    /// share of `tolerance`.
    pub fn length_upper_bound(
        &self,
        norm: &FirstLayerNorm,
        tolerance: &BigRational,
    ) -> Result<CertifiedBound, Error> {
        if !tolerance.is_positive() {
            return Err(Error::BadTolerance(format_rational(tolerance)));
        }
        let share = tolerance / BigRational::from_integer(self.segments.len().max(1).into());
        let parts = self
            .segments
            .iter()
            .map(|s| {
                let bound = norm.certified_upper(&s.direction, &(&share / &s.duration))?;
                Ok((s.duration.clone(), bound))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(CertifiedBound::path_length(parts))
    }

    pub fn to_document(&self) -> PathDocument {
        PathDocument {
            algebra: self.algebra.id().to_string(),
            segments: self
                .segments
                .iter()
                .map(|s| SegmentDocument {
                    direction: s.direction.to_sparse(),
                    duration: s.duration.clone(),
                })
                .collect(),
        }
    }

    pub fn from_document(algebra: &Algebra, doc: &PathDocument) -> Result<Self, Error> {
        if doc.algebra != algebra.id() {
            return Err(Error::MixedAlgebras);
        }
        let segments = doc
            .segments
            .iter()
            .map(|s| {
                let direction = LieVector::from_sparse(
                    algebra,
                    s.direction.iter().map(|(k, c)| (*k, c.clone())),
                )?;
                Segment::new(direction, s.duration.clone())
            })
            .collect::<Result<_, _>>()?;
        Self::from_segments(algebra, segments)
    }
}

/// Serialized path: `{algebra, segments: [{direction, duration}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDocument {
    pub algebra: String,
    pub segments: Vec<SegmentDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentDocument {
    #[serde(with = "serde_sparse")]
    pub direction: BTreeMap<usize, BigRational>,
    #[serde(with = "serde_str")]
    pub duration: BigRational,
}

/// Rank of a family of first-layer vectors.
pub(crate) fn first_layer_rank(vectors: &[&LieVector]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let range = first.algebra().layer_range(1);
    let rows = vectors
        .iter()
        .map(|v| v.coords()[range.clone()].to_vec())
        .collect();
    Matrix::from_rows(range.len(), rows).rank()
}

/// The corner from `exp(x1)` to `exp(x2)` through the identity: segments
/// `-x1` then `x2`, each of unit duration.
pub fn make_corner(x1: &LieVector, x2: &LieVector) -> Result<HorizontalPath, Error> {
    if !same_algebra(x1.algebra(), x2.algebra()) {
        return Err(Error::MixedAlgebras);
    }
    if !x1.is_horizontal() || !x2.is_horizontal() {
        return Err(Error::NotHorizontal);
    }
    if first_layer_rank(&[x1, x2]) < 2 {
        return Err(Error::LinearlyDependent);
    }
    HorizontalPath::from_directions(x1.algebra(), [-x1, x2.clone()])
}

/// Pushes a path through the quotient map; first-layer coordinates are kept.
pub fn project_path(q: &QuotientMap, path: &HorizontalPath) -> Result<HorizontalPath, Error> {
    if !same_algebra(path.algebra(), q.source()) {
        return Err(Error::MixedAlgebras);
    }
    let segments = path
        .segments
        .iter()
        .map(|s| Segment::new(q.project_vector(&s.direction)?, s.duration.clone()))
        .collect::<Result<_, _>>()?;
    HorizontalPath::from_segments(q.target(), segments)
}

/// Horizontal lift of a quotient path to the source group.
pub fn lift_path(q: &QuotientMap, path: &HorizontalPath) -> Result<HorizontalPath, Error> {
    if !same_algebra(path.algebra(), q.target()) {
        return Err(Error::MixedAlgebras);
    }
    let segments = path
        .segments
        .iter()
        .map(|s| Segment::new(q.lift_first_layer(&s.direction)?, s.duration.clone()))
        .collect::<Result<_, _>>()?;
    HorizontalPath::from_segments(q.source(), segments)
}
