//! Step-2 base case: six segments replacing the corner.

use num_traits::{One, Zero};

use crate::error::Error;
use crate::path::{first_layer_rank, HorizontalPath};
use crate::rational::{format_rational, ratio, BigRational};
use crate::vector::{same_algebra, LieVector};

/// Path from `exp(x1)` to `exp(x2)` in a step-2 group with segments
/// `(eps-1) x1`, `eps (x2-x1)`, `(1/2-eps) x2`, `-eps^2 x1`, `x2/2`,
/// `eps^2 x1`, each of unit duration.
///
/// Its length is `(1-eps)|x1| + eps D + |x2| - eps|x2| + 2 eps^2 |x1|` with
/// `D = |x2 - x1|`, which is `2 - (2-D) eps + 2 eps^2` for unit generators.
pub fn heisenberg_shortcut(
    x1: &LieVector,
    x2: &LieVector,
    eps: &BigRational,
) -> Result<HorizontalPath, Error> {
    if !same_algebra(x1.algebra(), x2.algebra()) {
        return Err(Error::MixedAlgebras);
    }
    let algebra = x1.algebra();
    if algebra.step() != 2 {
        return Err(Error::StepMismatch {
            expected: 2,
            step: algebra.step(),
        });
    }
    if !x1.is_horizontal() || !x2.is_horizontal() {
        return Err(Error::NotHorizontal);
    }
    if first_layer_rank(&[x1, x2]) < 2 {
        return Err(Error::LinearlyDependent);
    }
    if !(eps > &BigRational::zero() && eps < &ratio(1, 2)) {
        return Err(Error::EpsilonOutOfRange(format_rational(eps)));
    }
    let half = ratio(1, 2);
    let eps2 = eps * eps;
    HorizontalPath::from_directions(
        algebra,
        [
            x1.scale(&(eps - BigRational::one())),
            (x2 - x1).scale(eps),
            x2.scale(&(&half - eps)),
            x1.scale(&-&eps2),
            x2.scale(&half),
            x1.scale(&eps2),
        ],
    )
}
