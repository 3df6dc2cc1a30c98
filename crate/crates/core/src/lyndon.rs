//! Lyndon words, their standard bracketing, and rewriting of Lie
//! polynomials (given in the free associative algebra) onto the Lyndon basis.
//!
//! For a Lyndon word `w` the associative expansion of its standard
//! bracketing `P_w` is `w` plus words strictly greater than `w` in
//! lexicographic order. Rewriting therefore peels off the smallest word of
//! the support repeatedly.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::BigRational;

pub type Word = Vec<u8>;

/// Homogeneous or mixed element of the free associative algebra.
pub type AssocPoly = BTreeMap<Word, BigRational>;

/// All Lyndon words of length `1..=max_len` on `alphabet` letters, in
/// lexicographic order (Duval's generation algorithm).
pub fn lyndon_words(alphabet: u8, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if alphabet == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let base = w.clone();
        while w.len() < max_len {
            let c = base[w.len() % base.len()];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == alphabet - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Lyndon words ordered by length, then lexicographically: the basis order
/// used for free nilpotent algebras.
pub fn graded_lyndon_basis(alphabet: u8, max_len: usize) -> Vec<Word> {
    let mut words = lyndon_words(alphabet, max_len);
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    words
}

/// Standard factorization `w = u v` with `v` the longest proper Lyndon suffix.
pub fn standard_factorization(w: &[u8]) -> Option<(&[u8], &[u8])> {
    if w.len() < 2 {
        return None;
    }
    (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .map(|i| (&w[..i], &w[i..]))
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Nested-bracket label such as `[1,[1,2]]`, letters shown 1-based.
pub fn bracket_label(w: &[u8]) -> String {
    match standard_factorization(w) {
        None => format!("{}", w[0] as u32 + 1),
        Some((u, v)) => format!("[{},{}]", bracket_label(u), bracket_label(v)),
    }
}

pub fn assoc_mul(a: &AssocPoly, b: &AssocPoly) -> AssocPoly {
    let mut out = AssocPoly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            add_term(&mut out, w, ca * cb);
        }
    }
    out
}

pub fn assoc_commutator(a: &AssocPoly, b: &AssocPoly) -> AssocPoly {
    let mut out = assoc_mul(a, b);
    for (w, c) in assoc_mul(b, a) {
        add_term(&mut out, w, -c);
    }
    out
}

fn add_term(poly: &mut AssocPoly, w: Word, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let entry = poly.entry(w.clone()).or_insert_with(BigRational::zero);
    *entry += c;
    if entry.is_zero() {
        poly.remove(&w);
    }
}

/// Associative expansion of the standard bracketing of a Lyndon word.
pub fn expand_standard_bracketing(w: &[u8]) -> AssocPoly {
    match standard_factorization(w) {
        None => AssocPoly::from([(w.to_vec(), BigRational::from_integer(1.into()))]),
        Some((u, v)) => {
            assoc_commutator(&expand_standard_bracketing(u), &expand_standard_bracketing(v))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("polynomial is not a Lie element: smallest word {0:?} is not Lyndon")]
    NotLie(Word),
    #[error("word {0:?} is outside the supplied basis")]
    OutsideBasis(Word),
}

/// Rewrites a Lie polynomial onto the supplied Lyndon basis. `expansions[i]`
/// must be the associative expansion of `basis[i]`. Returns sparse
/// coordinates `(basis index, coefficient)`.
pub fn rewrite_on_lyndon_basis(
    poly: &AssocPoly,
    basis: &[Word],
    expansions: &[AssocPoly],
) -> Result<Vec<(usize, BigRational)>, RewriteError> {
    let index: BTreeMap<&[u8], usize> = basis
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i))
        .collect();
    let mut rest = poly.clone();
    let mut coords = Vec::new();
    // Smallest word per length first; lengths are independent.
    while let Some(w) = smallest_word(&rest) {
        if !is_lyndon(&w) {
            return Err(RewriteError::NotLie(w));
        }
        let &i = index
            .get(w.as_slice())
            .ok_or_else(|| RewriteError::OutsideBasis(w.clone()))?;
        let c = rest[&w].clone();
        for (word, coeff) in &expansions[i] {
            add_term(&mut rest, word.clone(), -(&c * coeff));
        }
        coords.push((i, c));
    }
    coords.sort_by_key(|(i, _)| *i);
    Ok(coords)
}

fn smallest_word(poly: &AssocPoly) -> Option<Word> {
    poly.keys()
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
        .cloned()
}
