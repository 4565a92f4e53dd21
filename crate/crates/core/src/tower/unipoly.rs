//! Dense univariate polynomials with field-element coefficients, used for
//! extended Euclid during inversion and for minimal-polynomial checks.
//! The indeterminate is implicit: callers interpret it as one particular
//! algebraic generator.

use std::sync::Arc;

use super::element::FieldElement;
use super::{FieldError, Tower};

#[derive(Clone, Debug)]
pub(crate) struct UniPoly {
    tower: Arc<Tower>,
    // Coefficients degree ascending, no trailing zeros; empty means zero.
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn zero(tower: Arc<Tower>) -> UniPoly {
        UniPoly {
            tower,
            coeffs: Vec::new(),
        }
    }

    pub fn from_coeffs(tower: Arc<Tower>, mut coeffs: Vec<FieldElement>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { tower, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.tower.zero())
    }

    pub fn lead(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                c.checked_mul(&self.tower.from_int(i as i64))
                    .expect("same tower")
            })
            .collect();
        UniPoly::from_coeffs(self.tower.clone(), coeffs)
    }

    fn sub(&self, rhs: &UniPoly) -> Result<UniPoly, FieldError> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).checked_sub(&rhs.coeff(i))?);
        }
        Ok(UniPoly::from_coeffs(self.tower.clone(), out))
    }

    fn mul(&self, rhs: &UniPoly) -> Result<UniPoly, FieldError> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(UniPoly::zero(self.tower.clone()));
        }
        let mut out = vec![self.tower.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].checked_add(&a.checked_mul(b)?)?;
            }
        }
        Ok(UniPoly::from_coeffs(self.tower.clone(), out))
    }

    /// Long division; requires inverting the divisor's leading
    /// coefficient, which can surface zero-divisor errors from deeper in
    /// the tower.
    fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), FieldError> {
        let dd = d.degree().ok_or(FieldError::DivisionByZero)?;
        let lead_inv = d.lead().expect("nonzero divisor").inverse()?;
        let mut rem = self.clone();
        let mut quot = vec![self.tower.zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let q = rem.coeff(dr).checked_mul(&lead_inv)?;
            quot[dr - dd] = q.clone();
            // rem -= q * x^(dr-dd) * d
            let mut sub = vec![self.tower.zero(); dr + 1];
            for (j, c) in d.coeffs.iter().enumerate() {
                sub[dr - dd + j] = q.checked_mul(c)?;
            }
            rem = rem.sub(&UniPoly::from_coeffs(self.tower.clone(), sub))?;
        }
        Ok((UniPoly::from_coeffs(self.tower.clone(), quot), rem))
    }

    /// Render in the given variable name, highest degree first, for error
    /// messages. Integer coefficients are shown bare, anything else in
    /// parentheses.
    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let bare_int = cs.chars().enumerate().all(|(k, ch)| {
                ch.is_ascii_digit() || (k == 0 && ch == '-')
            });
            let coeff_part = if bare_int { cs } else { format!("({cs})") };
            let part = match i {
                0 => coeff_part,
                _ => {
                    let v = if i == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{i}")
                    };
                    if c.is_one() {
                        v
                    } else {
                        format!("{coeff_part}*{v}")
                    }
                }
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

/// Extended Euclid: returns (g, u) with u*a congruent to g modulo m, g the
/// last nonzero remainder. Division steps invert leading coefficients in
/// the subtower, so reducible minimal polynomials lower in the tower can
/// surface as zero-divisor errors here.
pub(crate) fn ext_gcd(a: &UniPoly, m: &UniPoly) -> Result<(UniPoly, UniPoly), FieldError> {
    let tower = a.tower.clone();
    let mut r0 = m.clone();
    let mut u0 = UniPoly::zero(tower.clone());
    let mut r1 = a.clone();
    let mut u1 = UniPoly::from_coeffs(tower.clone(), vec![tower.one()]);
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let u = u0.sub(&q.mul(&u1)?)?;
        r0 = r1;
        u0 = u1;
        r1 = r;
        u1 = u;
    }
    Ok((r0, u0))
}
