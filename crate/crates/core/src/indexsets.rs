//! Multi-index sets for tensor-product and total-degree polynomial spaces.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Largest cardinality accepted for a generated index set (2^53).
pub const MAX_CARDINALITY: u64 = 1 << 53;

/// A multi-index `n = (n¹, …, n^d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|n| = n¹ + … + n^d`.
    pub fn total_order(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Number of strictly positive components.
    pub fn nonzero_count(&self) -> usize {
        self.0.iter().filter(|&&e| e > 0).count()
    }

    pub fn all_nonzero(&self) -> bool {
        self.0.iter().all(|&e| e > 0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Graded lexicographic comparison: lower total order first, ties decided at
/// the first coordinate where the indices differ.
///
/// Both indices must have the same dimension.
pub fn order_cmp(a: &MultiIndex, b: &MultiIndex) -> Ordering {
    debug_assert_eq!(a.dim(), b.dim());
    a.total_order()
        .cmp(&b.total_order())
        .then_with(|| a.0.cmp(&b.0))
}

/// Strict "comes before" relation used to order basis columns.
pub fn order_less(a: &MultiIndex, b: &MultiIndex) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(invalid(format!(
            "cannot compare multi-indices of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(order_cmp(a, b) == Ordering::Less)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndexKind {
    /// `max_j n^j ≤ q`
    TensorProduct,
    /// `|n| ≤ q`
    TotalDegree,
}

impl IndexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IndexKind::TensorProduct => "tp",
            IndexKind::TotalDegree => "td",
        }
    }

    fn admits(self, entries: &[u32], q: u32) -> bool {
        match self {
            IndexKind::TensorProduct => entries.iter().all(|&e| e <= q),
            IndexKind::TotalDegree => {
                entries.iter().map(|&e| u64::from(e)).sum::<u64>() <= u64::from(q)
            }
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tp" | "tensor" | "tensor-product" => Ok(IndexKind::TensorProduct),
            "td" | "total" | "total-degree" => Ok(IndexKind::TotalDegree),
            other => Err(invalid(format!(
                "unknown index set kind `{other}` (expected tp or td)"
            ))),
        }
    }
}

/// `(q+1)^d`, or `None` past [`MAX_CARDINALITY`].
pub fn tensor_product_cardinality(q: u32, d: usize) -> Option<u64> {
    let base = u64::from(q) + 1;
    let mut n: u64 = 1;
    for _ in 0..d {
        n = n.checked_mul(base).filter(|&v| v <= MAX_CARDINALITY)?;
    }
    Some(n)
}

/// `C(q+d, d)`, or `None` past [`MAX_CARDINALITY`].
pub fn total_degree_cardinality(q: u32, d: usize) -> Option<u64> {
    // C(q+k, k) = C(q+k-1, k-1) * (q+k) / k stays integral at every step.
    let mut n: u128 = 1;
    for k in 1..=d as u128 {
        n = n * (u128::from(q) + k) / k;
        if n > u128::from(MAX_CARDINALITY) {
            return None;
        }
    }
    Some(n as u64)
}

/// An ordered, duplicate-free set of multi-indices spanning `P^Λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    kind: Option<IndexKind>,
    q: u32,
    d: usize,
    indices: Vec<MultiIndex>,
}

impl IndexSet {
    /// All indices of the tensor-product or total-degree set of order `q` in
    /// `d` variables, sorted by [`order_cmp`].
    pub fn build(kind: IndexKind, q: u32, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("dimension d must be at least 1"));
        }
        let expected = match kind {
            IndexKind::TensorProduct => tensor_product_cardinality(q, d),
            IndexKind::TotalDegree => total_degree_cardinality(q, d),
        }
        .ok_or_else(|| {
            invalid(format!(
                "{kind} index set with q={q}, d={d} exceeds 2^53 entries"
            ))
        })?;

        let mut indices = Vec::with_capacity(expected as usize);
        // Colexicographic odometer: coordinate 0 turns fastest.
        let mut cur = vec![0u32; d];
        'outer: loop {
            indices.push(MultiIndex(cur.clone()));
            let mut k = 0;
            loop {
                if k == d {
                    break 'outer;
                }
                cur[k] += 1;
                if kind.admits(&cur, q) {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
        indices.sort_by(order_cmp);
        debug_assert_eq!(indices.len() as u64, expected);

        Ok(IndexSet {
            kind: Some(kind),
            q,
            d,
            indices,
        })
    }

    /// An explicit index set. Entries are sorted and must be distinct.
    pub fn from_indices(indices: Vec<MultiIndex>) -> Result<Self> {
        let d = indices
            .first()
            .map(MultiIndex::dim)
            .ok_or_else(|| invalid("index set must not be empty"))?;
        if d == 0 {
            return Err(invalid("dimension d must be at least 1"));
        }
        if let Some(bad) = indices.iter().find(|n| n.dim() != d) {
            return Err(invalid(format!("index {bad} does not have dimension {d}")));
        }
        let mut indices = indices;
        indices.sort_by(order_cmp);
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate index {}", w[0])));
        }
        let q = indices.iter().map(MultiIndex::max_entry).max().unwrap_or(0);
        Ok(IndexSet {
            kind: None,
            q,
            d,
            indices,
        })
    }

    /// `None` for explicit sets built with [`IndexSet::from_indices`].
    pub fn kind(&self) -> Option<IndexKind> {
        self.kind
    }

    /// Order parameter: `q` for generated sets, the largest component otherwise.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn iter(&self) -> core::slice::Iter<'_, MultiIndex> {
        self.indices.iter()
    }

    /// Largest single-coordinate degree over the set.
    pub fn max_degree(&self) -> u32 {
        self.indices
            .iter()
            .map(MultiIndex::max_entry)
            .max()
            .unwrap_or(0)
    }

    /// Column position of `n`, if present.
    pub fn position(&self, n: &MultiIndex) -> Option<usize> {
        if n.dim() != self.d {
            return None;
        }
        self.indices
            .binary_search_by(|probe| order_cmp(probe, n))
            .ok()
    }

    pub fn contains(&self, n: &MultiIndex) -> bool {
        self.position(n).is_some()
    }

    /// Subset of indices with every component nonzero.
    pub fn all_nonzero_subset(&self) -> Option<IndexSet> {
        let kept: Vec<_> = self
            .indices
            .iter()
            .filter(|n| n.all_nonzero())
            .cloned()
            .collect();
        if kept.is_empty() {
            None
        } else {
            IndexSet::from_indices(kept).ok()
        }
    }
}

impl<'a> IntoIterator for &'a IndexSet {
    type Item = &'a MultiIndex;
    type IntoIter = core::slice::Iter<'a, MultiIndex>;

    fn into_iter(self) -> Self::IntoIter {
        self.indices.iter()
    }
}
