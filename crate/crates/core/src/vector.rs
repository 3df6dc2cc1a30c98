use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{self, Algebra};
use crate::error::Error;
use crate::rational::{format_rational, pow, BigRational};

/// Exact rational vector in a stratified algebra, stored densely over the
/// algebra basis.
#[derive(Clone)]
pub struct LieVector {
    algebra: Algebra,
    coords: Vec<BigRational>,
}

impl PartialEq for LieVector {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.coords == other.coords
    }
}

impl Eq for LieVector {}

impl fmt::Debug for LieVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieVector{{")?;
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{}: {}", self.algebra.label(k), format_rational(c))?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn same_algebra(a: &Algebra, b: &Algebra) -> bool {
    Arc::ptr_eq(a, b) || a.id() == b.id()
}

impl LieVector {
    pub fn zero(algebra: &Algebra) -> Self {
        LieVector {
            algebra: algebra.clone(),
            coords: vec![BigRational::zero(); algebra.dim()],
        }
    }

    /// Basis element `b_i`.
    pub fn basis(algebra: &Algebra, i: usize) -> Self {
        let mut v = Self::zero(algebra);
        v.coords[i] = BigRational::one();
        v
    }

    pub fn from_coords(algebra: &Algebra, coords: Vec<BigRational>) -> Result<Self, Error> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                got: coords.len(),
            });
        }
        Ok(LieVector {
            algebra: algebra.clone(),
            coords,
        })
    }

    pub fn from_sparse<I>(algebra: &Algebra, entries: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (usize, BigRational)>,
    {
        let mut v = Self::zero(algebra);
        for (k, c) in entries {
            if k >= algebra.dim() {
                return Err(Error::DimensionMismatch {
                    expected: algebra.dim(),
                    got: k + 1,
                });
            }
            v.coords[k] += c;
        }
        Ok(v)
    }

    /// First-layer vector from its coordinates on the first-layer basis.
    pub fn first_layer(algebra: &Algebra, coords: &[BigRational]) -> Result<Self, Error> {
        if coords.len() != algebra.rank() {
            return Err(Error::DimensionMismatch {
                expected: algebra.rank(),
                got: coords.len(),
            });
        }
        Self::from_sparse(algebra, coords.iter().cloned().enumerate())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn coord(&self, k: usize) -> &BigRational {
        &self.coords[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Nonzero coordinates keyed by basis index.
    pub fn to_sparse(&self) -> BTreeMap<usize, BigRational> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
            .collect()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        LieVector {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &LieVector) -> Result<LieVector, Error> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::MixedAlgebras);
        }
        Ok(self.bracket_unchecked(other))
    }

    pub(crate) fn bracket_unchecked(&self, other: &LieVector) -> LieVector {
        LieVector {
            algebra: self.algebra.clone(),
            coords: self.algebra.bracket_dense(&self.coords, &other.coords),
        }
    }

    /// Projection onto layer `j` (1-based).
    pub fn layer_component(&self, j: usize) -> Result<LieVector, Error> {
        if j == 0 || j > self.algebra.step() {
            return Err(Error::LayerOutOfRange {
                layer: j,
                step: self.algebra.step(),
            });
        }
        let range = self.algebra.layer_range(j);
        let mut out = Self::zero(&self.algebra);
        for k in range {
            out.coords[k] = self.coords[k].clone();
        }
        Ok(out)
    }

    /// True when all nonzero coordinates sit in layer `j`.
    pub fn is_in_layer(&self, j: usize) -> bool {
        j >= 1
            && j <= self.algebra.step()
            && algebra::supported_in(&self.coords, self.algebra.layer_range(j))
    }

    pub fn is_horizontal(&self) -> bool {
        self.is_in_layer(1)
    }

    /// Lowest layer with a nonzero coordinate; `None` for the zero vector.
    pub fn lowest_layer(&self) -> Option<usize> {
        algebra::lowest_layer(&self.algebra, &self.coords)
    }

    /// Single layer holding every nonzero coordinate, if there is one.
    pub fn homogeneous_layer(&self) -> Option<usize> {
        let j = self.lowest_layer()?;
        self.is_in_layer(j).then_some(j)
    }

    /// Applies the dilation `X -> eps^j X` on each layer `j`.
    pub fn dilated(&self, eps: &BigRational) -> LieVector {
        let mut out = self.clone();
        let mut factor = eps.clone();
        for j in 1..=self.algebra.step() {
            for k in self.algebra.layer_range(j) {
                if !out.coords[k].is_zero() {
                    out.coords[k] *= &factor;
                }
            }
            factor *= eps;
        }
        out
    }

    /// `eps^j` for layer `j`, the factor [`LieVector::dilated`] applies.
    pub fn layer_factor(eps: &BigRational, j: usize) -> BigRational {
        pow(eps, j as i32)
    }

    fn zip_with(&self, other: &LieVector, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> LieVector {
        assert!(
            same_algebra(&self.algebra, &other.algebra),
            "vectors from different algebras"
        );
        LieVector {
            algebra: self.algebra.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &LieVector {
    type Output = LieVector;
    fn add(self, rhs: &LieVector) -> LieVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &LieVector {
    type Output = LieVector;
    fn sub(self, rhs: &LieVector) -> LieVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &LieVector {
    type Output = LieVector;
    fn neg(self) -> LieVector {
        LieVector {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for LieVector {
    type Output = LieVector;
    fn add(self, rhs: LieVector) -> LieVector {
        &self + &rhs
    }
}

impl Sub for LieVector {
    type Output = LieVector;
    fn sub(self, rhs: LieVector) -> LieVector {
        &self - &rhs
    }
}

impl Neg for LieVector {
    type Output = LieVector;
    fn neg(self) -> LieVector {
        -&self
    }
}
