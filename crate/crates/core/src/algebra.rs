//! Stratified nilpotent Lie algebras given by exact rational structure
//! constants on a layer-graded basis.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bch::BchSeries;
use crate::linalg::Matrix;
use crate::lyndon::{self, Word};
use crate::rational::{serde_sparse, BigRational};

/// Shared handle to an immutable algebra.
pub type Algebra = Arc<StratifiedAlgebra>;

/// Sparse bracket output: `(basis index, coefficient)` pairs, sorted by index.
pub type SparseCoords = Vec<(usize, BigRational)>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("malformed algebra description: {0}")]
    MalformedInput(String),
    #[error("antisymmetry fails for basis pair ({i}, {j})")]
    AntisymmetryViolation { i: usize, j: usize },
    #[error("grading fails for basis pair ({i}, {j}): output has a component on basis element {k} outside layer {expected_layer}")]
    GradingViolation {
        i: usize,
        j: usize,
        k: usize,
        expected_layer: usize,
    },
    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k})")]
    JacobiViolation { i: usize, j: usize, k: usize },
    #[error("layer {layer} is not spanned by brackets of layer 1 with layer {}: rank {rank} < dimension {dim}", .layer - 1)]
    NotGenerated { layer: usize, rank: usize, dim: usize },
    #[error("free nilpotent algebra needs rank >= 2 and step >= 1 (got rank {rank}, step {step})")]
    BadFreeParameters { rank: usize, step: usize },
}

pub struct StratifiedAlgebra {
    id: String,
    layer_dims: Vec<usize>,
    layer_of: Vec<usize>,
    labels: Vec<String>,
    words: Option<Vec<Word>>,
    table: Vec<Vec<SparseCoords>>,
    bch: OnceLock<BchSeries>,
}

impl fmt::Debug for StratifiedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StratifiedAlgebra")
            .field("id", &self.id)
            .field("layer_dims", &self.layer_dims)
            .finish()
    }
}

impl PartialEq for StratifiedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for StratifiedAlgebra {}

/// Free nilpotent Lie algebra on `rank` generators truncated at `step`, on
/// the Lyndon basis ordered by length and then lexicographically.
pub fn build_free_nilpotent(rank: usize, step: usize) -> Result<Algebra, AlgebraError> {
    if rank < 2 || step < 1 || rank > u8::MAX as usize {
        return Err(AlgebraError::BadFreeParameters { rank, step });
    }
    let words = lyndon::graded_lyndon_basis(rank as u8, step);
    let expansions: Vec<_> = words
        .iter()
        .map(|w| lyndon::expand_standard_bracketing(w))
        .collect();
    let n = words.len();
    let mut table = vec![vec![SparseCoords::new(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if words[i].len() + words[j].len() > step {
                continue;
            }
            let poly = lyndon::assoc_commutator(&expansions[i], &expansions[j]);
            let coords = lyndon::rewrite_on_lyndon_basis(&poly, &words, &expansions)
                .expect("commutator of Lie polynomials is a Lie polynomial");
            table[j][i] = coords.iter().map(|(k, c)| (*k, -c)).collect();
            table[i][j] = coords;
        }
    }
    let mut layer_dims = vec![0; step];
    for w in &words {
        layer_dims[w.len() - 1] += 1;
    }
    let labels = words.iter().map(|w| lyndon::bracket_label(w)).collect();
    let algebra = StratifiedAlgebra::assemble(layer_dims, labels, Some(words), table);
    debug_assert!(algebra.validate().is_ok());
    Ok(Arc::new(algebra))
}

impl StratifiedAlgebra {
    fn assemble(
        layer_dims: Vec<usize>,
        labels: Vec<String>,
        words: Option<Vec<Word>>,
        table: Vec<Vec<SparseCoords>>,
    ) -> Self {
        let layer_of = layer_dims
            .iter()
            .enumerate()
            .flat_map(|(j, &d)| std::iter::repeat_n(j + 1, d))
            .collect();
        let mut algebra = StratifiedAlgebra {
            id: String::new(),
            layer_dims,
            layer_of,
            labels,
            words,
            table,
            bch: OnceLock::new(),
        };
        algebra.id = algebra.compute_id();
        algebra
    }

    fn compute_id(&self) -> String {
        let doc = self.structure_document();
        let canonical = serde_json::to_string(&(doc.layers, doc.brackets))
            .expect("serializing plain data");
        let digest = Sha256::digest(canonical.as_bytes());
        hex::encode(&digest[..8])
    }

    /// Content digest of the layer dimensions and structure constants.
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn step(&self) -> usize {
        self.layer_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.layer_of.len()
    }

    /// Dimension of the first layer.
    pub fn rank(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    /// Basis index range of layer `j` (1-based).
    pub fn layer_range(&self, j: usize) -> Range<usize> {
        assert!(j >= 1 && j <= self.step(), "layer {j} out of range");
        let start: usize = self.layer_dims[..j - 1].iter().sum();
        start..start + self.layer_dims[j - 1]
    }

    /// Layer (1-based) of basis element `i`.
    pub fn layer_of(&self, i: usize) -> usize {
        self.layer_of[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Lyndon words of the basis, for free nilpotent algebras.
    pub fn words(&self) -> Option<&[Word]> {
        self.words.as_deref()
    }

    /// Index of the basis element with the given label.
    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Structure constants of `[b_i, b_j]`.
    pub fn structure(&self, i: usize, j: usize) -> &[(usize, BigRational)] {
        &self.table[i][j]
    }

    pub(crate) fn bch_series(&self) -> &BchSeries {
        self.bch.get_or_init(|| BchSeries::new(self.step()))
    }

    /// Bracket of two dense coordinate vectors.
    pub(crate) fn bracket_dense(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = self.dim();
        let mut out = vec![BigRational::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let li = self.layer_of[i];
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() || li + self.layer_of[j] > self.step() {
                    continue;
                }
                let entries = &self.table[i][j];
                if entries.is_empty() {
                    continue;
                }
                let c = ai * bj;
                for (k, s) in entries {
                    out[*k] += &c * s;
                }
            }
        }
        out
    }

    /// Quotient by the last layer: same basis for layers `1..step`, brackets
    /// landing in the last layer dropped.
    pub fn truncated(&self) -> Option<Algebra> {
        if self.step() < 2 {
            return None;
        }
        let keep = self.dim() - self.layer_dims[self.step() - 1];
        let table = (0..keep)
            .map(|i| {
                (0..keep)
                    .map(|j| {
                        self.table[i][j]
                            .iter()
                            .filter(|(k, _)| *k < keep)
                            .cloned()
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let words = self
            .words
            .as_ref()
            .map(|w| w[..keep].to_vec());
        Some(Arc::new(StratifiedAlgebra::assemble(
            self.layer_dims[..self.step() - 1].to_vec(),
            self.labels[..keep].to_vec(),
            words,
            table,
        )))
    }

    /// Checks antisymmetry, grading, the Jacobi identity on all basis
    /// triples and generation of every layer by the first one.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        let s = self.step();
        for i in 0..n {
            for j in i..n {
                let a = dense(n, &self.table[i][j]);
                let b = dense(n, &self.table[j][i]);
                if a.iter().zip(&b).any(|(x, y)| !(x + y).is_zero()) {
                    return Err(AlgebraError::AntisymmetryViolation { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let expected_layer = self.layer_of[i] + self.layer_of[j];
                for (k, c) in &self.table[i][j] {
                    if !c.is_zero() && (expected_layer > s || self.layer_of[*k] != expected_layer) {
                        return Err(AlgebraError::GradingViolation {
                            i,
                            j,
                            k: *k,
                            expected_layer,
                        });
                    }
                }
            }
        }
        let basis: Vec<Vec<BigRational>> = (0..n).map(|i| unit(n, i)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.layer_of[i] + self.layer_of[j] >= s {
                    // any further bracket leaves the algebra
                    continue;
                }
                for k in (j + 1)..n {
                    if self.layer_of[i] + self.layer_of[j] + self.layer_of[k] > s {
                        continue;
                    }
                    let t1 = self.bracket_dense(&basis[i], &dense(n, &self.table[j][k]));
                    let t2 = self.bracket_dense(&basis[j], &dense(n, &self.table[k][i]));
                    let t3 = self.bracket_dense(&basis[k], &dense(n, &self.table[i][j]));
                    if (0..n).any(|m| !(&t1[m] + &t2[m] + &t3[m]).is_zero()) {
                        return Err(AlgebraError::JacobiViolation { i, j, k });
                    }
                }
            }
        }
        for layer in 2..=s {
            let target = self.layer_range(layer);
            let mut rows = Vec::new();
            for x in self.layer_range(1) {
                for y in self.layer_range(layer - 1) {
                    let v = dense(n, &self.table[x][y]);
                    rows.push(v[target.clone()].to_vec());
                }
            }
            let dim = target.len();
            let rank = Matrix::from_rows(dim, rows).rank();
            if rank < dim {
                return Err(AlgebraError::NotGenerated { layer, rank, dim });
            }
        }
        Ok(())
    }

    /// Structured description of this algebra (also the on-disk format).
    pub fn to_description(&self) -> AlgebraDescription {
        let mut doc = self.structure_document();
        doc.labels = Some(self.labels.clone());
        doc
    }

    fn structure_document(&self) -> AlgebraDescription {
        let mut brackets = Vec::new();
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                let coords: BTreeMap<usize, BigRational> = self.table[i][j]
                    .iter()
                    .filter(|(_, c)| !c.is_zero())
                    .cloned()
                    .collect();
                if !coords.is_empty() {
                    brackets.push(BracketEntry { i, j, coords });
                }
            }
        }
        AlgebraDescription {
            layers: self.layer_dims.clone(),
            labels: None,
            brackets,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_description()).expect("serializing plain data")
    }
}

fn dense(n: usize, sparse: &[(usize, BigRational)]) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    for (k, c) in sparse {
        v[*k] += c;
    }
    v
}

fn unit(n: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::from_integer(1.into());
    v
}

/// On-disk algebra description: layer dimensions plus the nonzero brackets
/// `[b_i, b_j] = sum_k coords[k] b_k` (0-based basis indices). Brackets not
/// listed are zero; `[b_j, b_i]` is inferred from `[b_i, b_j]` by
/// antisymmetry when only one of the two is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDescription {
    pub layers: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    #[serde(with = "serde_sparse")]
    pub coords: BTreeMap<usize, BigRational>,
}

/// Parses and validates a JSON algebra description.
pub fn load_stratified(text: &str) -> Result<Algebra, AlgebraError> {
    let doc: AlgebraDescription =
        serde_json::from_str(text).map_err(|e| AlgebraError::MalformedInput(e.to_string()))?;
    from_description(&doc)
}

/// Builds and eagerly validates an algebra from a parsed description.
pub fn from_description(doc: &AlgebraDescription) -> Result<Algebra, AlgebraError> {
    let malformed = |msg: String| AlgebraError::MalformedInput(msg);
    if doc.layers.is_empty() {
        return Err(malformed("no layers".into()));
    }
    if let Some(j) = doc.layers.iter().position(|&d| d == 0) {
        return Err(malformed(format!("layer {} has dimension 0", j + 1)));
    }
    let n: usize = doc.layers.iter().sum();
    let labels = match &doc.labels {
        Some(l) if l.len() != n => {
            return Err(malformed(format!("{} labels for {n} basis elements", l.len())))
        }
        Some(l) => l.clone(),
        None => (1..=n).map(|i| format!("b{i}")).collect(),
    };
    let mut given: BTreeMap<(usize, usize), SparseCoords> = BTreeMap::new();
    for entry in &doc.brackets {
        let (i, j) = (entry.i, entry.j);
        if i >= n || j >= n {
            return Err(malformed(format!("bracket ({i}, {j}) indexes past dimension {n}")));
        }
        if let Some(k) = entry.coords.keys().find(|&&k| k >= n) {
            return Err(malformed(format!(
                "bracket ({i}, {j}) has coordinate {k} past dimension {n}"
            )));
        }
        let coords: SparseCoords = entry
            .coords
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        if given.insert((i, j), coords).is_some() {
            return Err(malformed(format!("bracket ({i}, {j}) listed twice")));
        }
    }
    let mut table = vec![vec![SparseCoords::new(); n]; n];
    for (&(i, j), coords) in &given {
        if i == j && !coords.is_empty() {
            return Err(AlgebraError::AntisymmetryViolation { i, j });
        }
        match given.get(&(j, i)) {
            Some(other) => {
                let negated: SparseCoords = other.iter().map(|(k, c)| (*k, -c)).collect();
                if &negated != coords {
                    return Err(AlgebraError::AntisymmetryViolation {
                        i: i.min(j),
                        j: i.max(j),
                    });
                }
            }
            None => table[j][i] = coords.iter().map(|(k, c)| (*k, -c)).collect(),
        }
        table[i][j] = coords.clone();
    }
    let algebra = StratifiedAlgebra::assemble(doc.layers.clone(), labels, None, table);
    algebra.validate()?;
    Ok(Arc::new(algebra))
}

/// True when every coordinate of `coords` outside `range` is zero.
pub(crate) fn supported_in(coords: &[BigRational], range: Range<usize>) -> bool {
    coords
        .iter()
        .enumerate()
        .all(|(k, c)| range.contains(&k) || c.is_zero())
}

/// Smallest layer carrying a nonzero coordinate.
pub(crate) fn lowest_layer(algebra: &StratifiedAlgebra, coords: &[BigRational]) -> Option<usize> {
    coords
        .iter()
        .position(|c| !c.is_zero())
        .map(|k| algebra.layer_of(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    const HEISENBERG: &str = r#"{"layers": [2, 1], "brackets": [{"i": 0, "j": 1, "coords": {"2": "1"}}]}"#;

    #[test]
    fn free_layer_dimensions() {
        assert_eq!(build_free_nilpotent(2, 1).unwrap().layer_dims(), &[2]);
        assert_eq!(build_free_nilpotent(2, 3).unwrap().layer_dims(), &[2, 1, 2]);
        assert_eq!(build_free_nilpotent(2, 5).unwrap().layer_dims(), &[2, 1, 2, 3, 6]);
        assert_eq!(build_free_nilpotent(3, 3).unwrap().layer_dims(), &[3, 3, 8]);
    }

    #[test]
    fn abelian_case_has_no_brackets() {
        let a = build_free_nilpotent(2, 1).unwrap();
        assert!(a.structure(0, 1).is_empty());
        assert!(a.validate().is_ok());
    }

    #[test]
    fn free_parameters_rejected() {
        assert!(matches!(
            build_free_nilpotent(1, 3),
            Err(AlgebraError::BadFreeParameters { .. })
        ));
        assert!(matches!(
            build_free_nilpotent(2, 0),
            Err(AlgebraError::BadFreeParameters { .. })
        ));
    }

    #[test]
    fn free_algebras_validate() {
        for step in 1..=6 {
            build_free_nilpotent(2, step).unwrap().validate().unwrap();
        }
        build_free_nilpotent(3, 4).unwrap().validate().unwrap();
    }

    #[test]
    fn loads_heisenberg() {
        let a = load_stratified(HEISENBERG).unwrap();
        assert_eq!(a.layer_dims(), &[2, 1]);
        assert_eq!(a.structure(1, 0), &[(2, int(-1))]);
        assert_eq!(a.id(), build_free_nilpotent(2, 2).unwrap().id());
    }

    #[test]
    fn rejects_symmetric_bracket() {
        let text = r#"{"layers": [2, 1], "brackets": [
            {"i": 0, "j": 1, "coords": {"2": "1"}},
            {"i": 1, "j": 0, "coords": {"2": "1"}}]}"#;
        assert_eq!(
            load_stratified(text).unwrap_err(),
            AlgebraError::AntisymmetryViolation { i: 0, j: 1 }
        );
    }

    #[test]
    fn rejects_self_bracket() {
        let text = r#"{"layers": [2, 1], "brackets": [
            {"i": 0, "j": 1, "coords": {"2": "1"}},
            {"i": 1, "j": 1, "coords": {"2": "1"}}]}"#;
        assert_eq!(
            load_stratified(text).unwrap_err(),
            AlgebraError::AntisymmetryViolation { i: 1, j: 1 }
        );
    }

    #[test]
    fn rejects_grading_violation() {
        // [b1, b2] lands in layer 1
        let text = r#"{"layers": [2, 1], "brackets": [{"i": 0, "j": 1, "coords": {"0": "1", "2": "1"}}]}"#;
        assert!(matches!(
            load_stratified(text).unwrap_err(),
            AlgebraError::GradingViolation { i: 0, j: 1, k: 0, .. }
        ));
    }

    #[test]
    fn rejects_ungenerated_layer() {
        let text = r#"{"layers": [2, 1], "brackets": []}"#;
        assert_eq!(
            load_stratified(text).unwrap_err(),
            AlgebraError::NotGenerated { layer: 2, rank: 0, dim: 1 }
        );
    }

    #[test]
    fn rejects_jacobi_violation() {
        let text = r#"{"layers": [3, 1, 1], "brackets": [
            {"i": 0, "j": 1, "coords": {"3": "1"}},
            {"i": 0, "j": 3, "coords": {"4": "1"}},
            {"i": 2, "j": 3, "coords": {"4": "1"}}]}"#;
        // [b1,[b2,b3]] + [b2,[b3,b1]] + [b3,[b1,b2]] = 0 + 0 + [b3,b4] = b5
        assert_eq!(
            load_stratified(text).unwrap_err(),
            AlgebraError::JacobiViolation { i: 0, j: 1, k: 2 }
        );
    }

    #[test]
    fn malformed_inputs() {
        for text in [
            "not json",
            r#"{"layers": []}"#,
            r#"{"layers": [2, 0]}"#,
            r#"{"layers": [2, 1], "brackets": [{"i": 0, "j": 5, "coords": {}}]}"#,
            r#"{"layers": [2, 1], "brackets": [{"i": 0, "j": 1, "coords": {"7": "1"}}]}"#,
            r#"{"layers": [2, 1], "brackets": [{"i": 0, "j": 1, "coords": {"2": "x"}}]}"#,
            r#"{"layers": [2, 1], "labels": ["a"], "brackets": []}"#,
            r#"{"layers": [2, 1], "brackets": [
                {"i": 0, "j": 1, "coords": {"2": "1"}},
                {"i": 0, "j": 1, "coords": {"2": "1"}}]}"#,
        ] {
            assert!(
                matches!(load_stratified(text), Err(AlgebraError::MalformedInput(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn description_round_trip_is_exact() {
        for step in 1..=5 {
            let a = build_free_nilpotent(2, step).unwrap();
            let text = a.to_json();
            let b = load_stratified(&text).unwrap();
            assert_eq!(a.id(), b.id());
            assert_eq!(b.to_json(), text);
            assert_eq!(b.labels(), a.labels());
        }
    }

    #[test]
    fn truncation_of_free_algebra_is_free() {
        let a = build_free_nilpotent(2, 5).unwrap();
        let q = a.truncated().unwrap();
        assert_eq!(q.id(), build_free_nilpotent(2, 4).unwrap().id());
        assert!(build_free_nilpotent(2, 1).unwrap().truncated().is_none());
    }
}
