//! Horizontal words whose endpoint is a prescribed vertical element.

use num_traits::Zero;

use crate::algebra::Algebra;
use crate::error::Error;
use crate::group::GroupPoint;
use crate::path::{HorizontalPath, Segment};
use crate::rational::{two_pow, BigRational};
use crate::shortcut::correction::decompose_by_generators;
use crate::vector::LieVector;

/// Horizontal path from the identity ending exactly at `exp(y)`, for `y`
/// in a single layer.
///
/// A commutator word is built first; its endpoint agrees with `exp(y)` up
/// to higher layers. The residue is then realized layer by layer until it
/// vanishes, which takes at most `step - j` rounds. Two variants are built,
/// with plain and with symmetrized commutator words, and the one with the
/// smaller coordinate length is returned.
pub fn realize_vertical(y: &LieVector) -> Result<HorizontalPath, Error> {
    let algebra = y.algebra();
    if y.is_zero() {
        return Ok(HorizontalPath::empty(algebra));
    }
    let layer = y.homogeneous_layer().ok_or(Error::MixedLayers)?;
    let plain = realize_with(y, layer, false)?;
    if layer == 1 || layer == algebra.step() {
        return Ok(plain);
    }
    let symmetric = realize_with(y, layer, true)?;
    if coordinate_length(&symmetric) < coordinate_length(&plain) {
        Ok(symmetric)
    } else {
        Ok(plain)
    }
}

fn realize_with(y: &LieVector, layer: usize, symmetrize: bool) -> Result<HorizontalPath, Error> {
    let algebra = y.algebra();
    let mut word = leading_word(y, layer, symmetrize)?;
    let target = GroupPoint::exp(y.clone());
    for _ in 0..algebra.step() {
        let residue = word.development().inverse().product_unchecked(&target);
        let Some(j) = residue.log().lowest_layer() else {
            return Ok(word);
        };
        let part = residue.log().layer_component(j)?;
        let sym = symmetrize && j + 1 < algebra.step();
        word.extend(&leading_word(&part, j, sym)?)?;
    }
    Err(Error::InvariantViolation(
        "vertical realization did not terminate".into(),
    ))
}

/// Word for `u` in layer `j`. The symmetrized form is `w(u/2)` followed by
/// its image under `delta_-1` (`j` even) or its segments in reverse order
/// (`j` odd); both copies end at `exp(u/2 + ...)` with opposite layer-`j+1`
/// parts, so the product has no layer-`j+1` residue.
fn leading_word(u: &LieVector, layer: usize, symmetrize: bool) -> Result<HorizontalPath, Error> {
    if !symmetrize || layer == 1 {
        return approximate_word(u, layer);
    }
    let half = approximate_word(&u.scale(&crate::rational::ratio(1, 2)), layer)?;
    let twin = if layer.is_multiple_of(2) {
        half.reverse().reverse_order()
    } else {
        half.reverse_order()
    };
    half.concat(&twin)
}

/// `sum d_k |X_k|` with the Euclidean coordinate norm, for choosing between
/// words.
fn coordinate_length(path: &HorizontalPath) -> f64 {
    path.segments()
        .iter()
        .map(|s| {
            let d = crate::rational::to_f64(s.duration());
            let v: f64 = s
                .direction()
                .coords()
                .iter()
                .map(|c| crate::rational::to_f64(c).powi(2))
                .sum();
            d * v.sqrt()
        })
        .sum()
}

/// Word whose endpoint is `exp(u + higher layers)` for `u` in layer `j`.
///
/// `u` is first dilated to unit size by a power of two, split as
/// `sum_i [b_i, U_i]` over the first-layer basis, and each term becomes the
/// group commutator `exp(b_i) w_i exp(-b_i) w_i^-1` with `w_i` a word for
/// `U_i`.
fn approximate_word(u: &LieVector, layer: usize) -> Result<HorizontalPath, Error> {
    let algebra = u.algebra();
    if u.is_zero() {
        return Ok(HorizontalPath::empty(algebra));
    }
    if layer == 1 {
        return HorizontalPath::from_segments(algebra, vec![Segment::unit(u.clone())?]);
    }
    let scale = normalizing_scale(u, layer);
    let unit = u.dilated(&scale.recip());
    let gens = generators(algebra);
    let gen_refs: Vec<&LieVector> = gens.iter().collect();
    let parts = decompose_by_generators(&unit, layer, &gen_refs)?;
    let mut word = HorizontalPath::empty(algebra);
    for (g, part) in gens.iter().zip(&parts) {
        if part.is_zero() {
            continue;
        }
        let inner = approximate_word(part, layer - 1)?;
        word.push(Segment::unit(g.clone())?)?;
        word.extend(&inner)?;
        word.push(Segment::unit(-g)?)?;
        word.extend(&inner.reverse())?;
    }
    word.dilate(&scale)
}

fn generators(algebra: &Algebra) -> Vec<LieVector> {
    algebra
        .layer_range(1)
        .map(|k| LieVector::basis(algebra, k))
        .collect()
}

/// Power of two close to `max|u_k|^(1/layer)`.
fn normalizing_scale(u: &LieVector, layer: usize) -> BigRational {
    let m = crate::rational::max_abs(u.coords());
    debug_assert!(!m.is_zero());
    let log2 = m.numer().bits() as i64 - m.denom().bits() as i64;
    let e = (log2 as f64 / layer as f64).round() as i32;
    two_pow(e)
}
