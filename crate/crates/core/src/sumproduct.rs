//! Exact sum-set and product-set computation with the 14/11-exponent
//! report. Grouping is by canonical encodings; no ordering of field
//! elements is assumed, so everything works over arbitrary towers.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::tower::{towers_eq, FieldElement, Tower};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumProductError {
    #[error("set must contain at least 2 elements, got {0}")]
    TooSmall(usize),
    #[error("element belongs to a different tower than the set")]
    TowerMismatch,
}

/// A finite set of field elements over one tower, stored deduplicated in
/// first-occurrence order. Equality is set equality.
#[derive(Debug, Clone)]
pub struct ElementSet {
    tower: Arc<Tower>,
    elems: Vec<FieldElement>,
}

impl ElementSet {
    pub fn new(
        tower: Arc<Tower>,
        elems: impl IntoIterator<Item = FieldElement>,
    ) -> Result<ElementSet, SumProductError> {
        let mut seen = HashSet::new();
        let mut unique = Vec::new();
        for e in elems {
            if !towers_eq(e.tower(), &tower) {
                return Err(SumProductError::TowerMismatch);
            }
            if seen.insert(e.clone()) {
                unique.push(e);
            }
        }
        Ok(ElementSet {
            tower,
            elems: unique,
        })
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FieldElement> {
        self.elems.iter()
    }

    pub fn contains(&self, e: &FieldElement) -> bool {
        self.elems.contains(e)
    }
}

impl PartialEq for ElementSet {
    fn eq(&self, other: &Self) -> bool {
        if !towers_eq(&self.tower, &other.tower) || self.elems.len() != other.elems.len() {
            return false;
        }
        let mut a = self.elems.clone();
        let mut b = other.elems.clone();
        a.sort();
        b.sort();
        a == b
    }
}
impl Eq for ElementSet {}

fn pairwise(a: &ElementSet, op: impl Fn(&FieldElement, &FieldElement) -> FieldElement) -> ElementSet {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, x) in a.elems.iter().enumerate() {
        for y in &a.elems[i..] {
            let v = op(x, y);
            if seen.insert(v.clone()) {
                out.push(v);
            }
        }
    }
    ElementSet {
        tower: a.tower.clone(),
        elems: out,
    }
}

/// A + A, exactly and deduplicated.
pub fn sumset(a: &ElementSet) -> ElementSet {
    pairwise(a, |x, y| x + y)
}

/// A · A, exactly and deduplicated.
pub fn productset(a: &ElementSet) -> ElementSet {
    pairwise(a, |x, y| x * y)
}

/// Sum-product summary. The exponent ratio takes the unknown constant of
/// the 14/11 bound as 1; raw sizes are exact and the ratio is a report,
/// never an assertion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EsReport {
    pub size: usize,
    pub sum_size: usize,
    pub prod_size: usize,
    /// max(sum_size, prod_size) / size^{14/11}.
    pub exponent_ratio: f64,
}

pub fn es_report(a: &ElementSet) -> Result<EsReport, SumProductError> {
    if a.len() < 2 {
        return Err(SumProductError::TooSmall(a.len()));
    }
    let sum_size = sumset(a).len();
    let prod_size = productset(a).len();
    let exponent_ratio =
        sum_size.max(prod_size) as f64 / (a.len() as f64).powf(14.0 / 11.0);
    Ok(EsReport {
        size: a.len(),
        sum_size,
        prod_size,
        exponent_ratio,
    })
}
