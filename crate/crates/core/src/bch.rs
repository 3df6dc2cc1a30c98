//! Baker-Campbell-Hausdorff series in Dynkin's form, truncated at a step.
//!
//! `log(exp X exp Y)` is the sum over `n >= 1` and exponent pairs
//! `(r_i, s_i)` with `r_i + s_i >= 1` of
//!
//! ```text
//! (-1)^(n-1) / n * [X^r1 Y^s1 ... X^rn Y^sn] / ((sum r_i + s_i) * prod r_i! s_i!)
//! ```
//!
//! where `[w1 w2 ... wk]` is the right-nested bracket
//! `[w1, [w2, [..., [w(k-1), wk]]]]`. Terms with equal last two letters
//! vanish. Coefficients of identical words are merged, so evaluation is one
//! nested bracket per surviving word.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::BigRational;
use crate::vector::LieVector;

/// Letter `0` stands for `X`, letter `1` for `Y`.
#[derive(Debug, Clone)]
pub struct BchSeries {
    step: usize,
    terms: Vec<(Vec<u8>, BigRational)>,
}

impl BchSeries {
    pub fn new(step: usize) -> Self {
        let mut acc: BTreeMap<Vec<u8>, BigRational> = BTreeMap::new();
        let factorials: Vec<BigInt> = (0..=step)
            .scan(BigInt::one(), |f, k| {
                if k > 0 {
                    *f *= k;
                }
                Some(f.clone())
            })
            .collect();
        let mut pairs = Vec::new();
        for n in 1..=step {
            enumerate(n, step, &mut pairs, &mut |pairs: &[(usize, usize)]| {
                let degree: usize = pairs.iter().map(|(r, s)| r + s).sum();
                let mut word = Vec::with_capacity(degree);
                let mut denom = BigInt::from(n * degree);
                for &(r, s) in pairs {
                    word.extend(std::iter::repeat_n(0u8, r));
                    word.extend(std::iter::repeat_n(1u8, s));
                    denom *= &factorials[r] * &factorials[s];
                }
                if word.len() >= 2 && word[word.len() - 1] == word[word.len() - 2] {
                    return;
                }
                let sign = if n % 2 == 1 { 1 } else { -1 };
                let c = BigRational::new(BigInt::from(sign), denom);
                *acc.entry(word).or_insert_with(BigRational::zero) += c;
            });
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        BchSeries { step, terms }
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Surviving `(word, coefficient)` terms, ordered by degree.
    pub fn terms(&self) -> &[(Vec<u8>, BigRational)] {
        &self.terms
    }

    /// `log(exp x exp y)`, exact.
    pub fn evaluate(&self, x: &LieVector, y: &LieVector) -> LieVector {
        if x.is_zero() {
            return y.clone();
        }
        if y.is_zero() {
            return x.clone();
        }
        let letters = [x, y];
        let mut memo: HashMap<&[u8], LieVector> = HashMap::new();
        let mut out = LieVector::zero(x.algebra());
        for (word, coeff) in &self.terms {
            let value = nested(word, &letters, &mut memo);
            if !value.is_zero() {
                out = &out + &value.scale(coeff);
            }
        }
        out
    }
}

fn nested<'w>(
    word: &'w [u8],
    letters: &[&LieVector; 2],
    memo: &mut HashMap<&'w [u8], LieVector>,
) -> LieVector {
    if word.len() == 1 {
        return letters[word[0] as usize].clone();
    }
    if let Some(v) = memo.get(word) {
        return v.clone();
    }
    let tail = nested(&word[1..], letters, memo);
    let value = if tail.is_zero() {
        tail
    } else {
        letters[word[0] as usize].bracket_unchecked(&tail)
    };
    memo.insert(word, value.clone());
    value
}

type PairVisitor<'a> = dyn FnMut(&[(usize, usize)]) + 'a;

/// Calls `f` on every sequence of `n` pairs `(r, s)`, `r + s >= 1`, whose
/// total degree is at most `max_degree`.
fn enumerate(
    n: usize,
    max_degree: usize,
    pairs: &mut Vec<(usize, usize)>,
    f: &mut PairVisitor,
) {
    if pairs.len() == n {
        f(pairs);
        return;
    }
    let used: usize = pairs.iter().map(|(r, s)| r + s).sum();
    let remaining_slots = n - pairs.len() - 1;
    if used + 1 + remaining_slots > max_degree {
        return;
    }
    let budget = max_degree - used - remaining_slots;
    for d in 1..=budget {
        for r in 0..=d {
            pairs.push((r, d - r));
            enumerate(n, max_degree, pairs, f);
            pairs.pop();
        }
    }
}
