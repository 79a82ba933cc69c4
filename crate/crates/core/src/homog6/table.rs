//! Exact tables of the cubic form `alpha` for the sixfold homogeneous
//! families, stored over the quadratic-surd field.
//!
//! Frame layout: the table indexes a normalized eigenframe `e_1, .., e_{6m}`
//! grouped by distribution, with index `i` belonging to distribution
//! `(i - 1) mod 6` (0-based) and, for `m = 2`, the second basis leg of each
//! distribution sitting at index `i + 6`. Components are fully symmetric in
//! the three slots; only one representative per unordered triple is stored.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::IsoError;
use crate::surd::{parse_value_expr, to_value_expr, Surd};
use crate::Result;

/// A sparse, fully symmetric cubic-coefficient table on `R^{6m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaTable {
    m: usize,
    entries: BTreeMap<[usize; 3], Surd>,
}

impl AlphaTable {
    /// Builds a table from 1-based component triples with surd value strings.
    ///
    /// Validates index bounds, pairwise-distinct indices within a triple,
    /// uniqueness of unordered triples, and that every value parses to a
    /// nonzero surd.
    pub fn new(m: usize, components: &[(usize, usize, usize, String)]) -> Result<Self> {
        if m == 0 {
            return Err(IsoError::Config("table multiplicity must be positive".into()));
        }
        let dim = 6 * m;
        let mut entries = BTreeMap::new();
        for (i, j, k, expr) in components {
            let (i, j, k) = (*i, *j, *k);
            for idx in [i, j, k] {
                if idx == 0 || idx > dim {
                    return Err(IsoError::Parse {
                        what: "alpha component index".into(),
                        reason: format!("index {idx} outside 1..={dim}"),
                    });
                }
            }
            if i == j || j == k || i == k {
                return Err(IsoError::Parse {
                    what: "alpha component index".into(),
                    reason: format!("repeated index in triple ({i},{j},{k})"),
                });
            }
            let value = parse_value_expr(expr)?;
            if value.is_zero() {
                return Err(IsoError::Parse {
                    what: "alpha component value".into(),
                    reason: format!("zero value for triple ({i},{j},{k})"),
                });
            }
            let mut key = [i - 1, j - 1, k - 1];
            key.sort_unstable();
            if entries.insert(key, value).is_some() {
                return Err(IsoError::Parse {
                    what: "alpha component triple".into(),
                    reason: format!("duplicate unordered triple ({i},{j},{k})"),
                });
            }
        }
        Ok(AlphaTable { m, entries })
    }

    /// Common multiplicity of the six distributions.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Frame dimension `6m`.
    pub fn dim(&self) -> usize {
        6 * self.m
    }

    /// Distribution of a 0-based frame index, in `0..6`.
    pub fn dist(&self, idx: usize) -> usize {
        debug_assert!(idx < self.dim());
        idx % 6
    }

    /// Component at a 0-based index triple in any order; absent means zero.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Surd {
        let mut key = [i, j, k];
        key.sort_unstable();
        self.entries.get(&key).copied().unwrap_or_else(Surd::zero)
    }

    /// Iterates stored entries as (sorted 0-based triple, value).
    pub fn entries(&self) -> impl Iterator<Item = (&[usize; 3], &Surd)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest component magnitude as a float, for scale normalization.
    pub fn max_abs(&self) -> f64 {
        self.entries
            .values()
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Canonical 1-based export: sorted triples with canonical value strings.
    pub fn components_canonical(&self) -> Vec<(usize, usize, usize, String)> {
        self.entries
            .iter()
            .map(|(key, v)| (key[0] + 1, key[1] + 1, key[2] + 1, to_value_expr(*v)))
            .collect()
    }

    /// Returns a copy with one extra component, for synthetic perturbations.
    pub fn with_component(&self, i: usize, j: usize, k: usize, value: Surd) -> Result<Self> {
        let mut components = self.components_canonical();
        components.push((i, j, k, to_value_expr(value)));
        AlphaTable::new(self.m, &components)
    }

    /// Checks that every stored triple touches three distinct distributions.
    ///
    /// This is the sparsity forced on the cubic form by eigenvalue constancy:
    /// components with two slots in one distribution vanish.
    pub fn distinct_distribution_triples(&self) -> bool {
        self.entries.keys().all(|key| {
            let d = [self.dist(key[0]), self.dist(key[1]), self.dist(key[2])];
            d[0] != d[1] && d[1] != d[2] && d[0] != d[2]
        })
    }
}
