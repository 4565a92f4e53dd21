//! Bivariate algebraic curves with field coefficients: exact point-curve
//! incidence counting and a brute-force check of the degrees-of-freedom /
//! multiplicity-type hypothesis (every k points lie on at most s curves,
//! every pair of curves shares at most s of the given points).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Line, Point};
use crate::tower::{towers_eq, FieldElement, FieldError, Tower};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("the zero polynomial is not a curve")]
    ZeroPolynomial,
    #[error("coefficient belongs to a different tower")]
    TowerMismatch,
    #[error("k and s must both be at least 1")]
    BadParams,
    #[error("subset enumeration too large: C(|P|, k) * |C| = {size} exceeds {limit}")]
    GuardExceeded { size: BigUint, limit: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A nonzero polynomial in x and y, stored canonically: zero coefficients
/// dropped and the leading coefficient under graded lex order (total
/// degree, ties by x-degree) equal to 1. Equality therefore identifies
/// curves that differ by a nonzero scalar. Keys are (x-degree, y-degree).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    tower: Arc<Tower>,
    coeffs: BTreeMap<(u32, u32), FieldElement>,
}

impl Curve {
    /// Collect terms (summing repeated monomials), drop zeros, normalize
    /// the leading coefficient to 1.
    pub fn new(
        tower: Arc<Tower>,
        terms: impl IntoIterator<Item = ((u32, u32), FieldElement)>,
    ) -> Result<Curve, CurveError> {
        let mut coeffs: BTreeMap<(u32, u32), FieldElement> = BTreeMap::new();
        for (mono, c) in terms {
            if !towers_eq(c.tower(), &tower) {
                return Err(CurveError::TowerMismatch);
            }
            match coeffs.remove(&mono) {
                Some(prev) => {
                    coeffs.insert(mono, prev.checked_add(&c)?);
                }
                None => {
                    coeffs.insert(mono, c);
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        let lead_key = *coeffs
            .keys()
            .max_by_key(|(i, j)| (i + j, *i))
            .ok_or(CurveError::ZeroPolynomial)?;
        let lead = coeffs[&lead_key].clone();
        if !lead.is_one() {
            let inv = lead.inverse()?;
            for c in coeffs.values_mut() {
                *c = c.checked_mul(&inv)?;
            }
        }
        Ok(Curve { tower, coeffs })
    }

    /// The line a*x + b*y + c = 0 as a degree-1 curve. The line's own
    /// canonical form already has leading coefficient 1, so this is a
    /// plain re-keying.
    pub fn from_line(l: &Line) -> Curve {
        let terms = [
            ((1, 0), l.a().clone()),
            ((0, 1), l.b().clone()),
            ((0, 0), l.c().clone()),
        ];
        Curve::new(Arc::clone(l.tower()), terms).expect("line has a nonzero coefficient")
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    /// Total degree.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &FieldElement)> {
        self.coeffs.iter().map(|(&k, v)| (k, v))
    }

    pub fn coefficient(&self, x_deg: u32, y_deg: u32) -> Option<&FieldElement> {
        self.coeffs.get(&(x_deg, y_deg))
    }

    /// Value of the polynomial at the point.
    pub fn evaluate(&self, p: &Point) -> Result<FieldElement, CurveError> {
        if !towers_eq(p.tower(), &self.tower) {
            return Err(CurveError::TowerMismatch);
        }
        let max_x = self.coeffs.keys().map(|(i, _)| *i).max().unwrap_or(0);
        let max_y = self.coeffs.keys().map(|(_, j)| *j).max().unwrap_or(0);
        let xs = powers(p.x(), max_x);
        let ys = powers(p.y(), max_y);
        let mut acc = self.tower.zero();
        for (&(i, j), c) in &self.coeffs {
            let term = c
                .checked_mul(&xs[i as usize])
                .and_then(|t| t.checked_mul(&ys[j as usize]))
                .expect("same tower");
            acc = acc.checked_add(&term).expect("same tower");
        }
        Ok(acc)
    }
}

fn powers(base: &FieldElement, up_to: u32) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(up_to as usize + 1);
    out.push(base.tower().one());
    for k in 0..up_to as usize {
        let next = out[k].checked_mul(base).expect("same tower");
        out.push(next);
    }
    out
}

/// Render (x-degree, y-degree) as the config-file monomial key: "1", "x",
/// "y^3", "x^2*y".
pub(crate) fn monomial_key(i: u32, j: u32) -> String {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("x".to_string()),
        _ => parts.push(format!("x^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("y".to_string()),
        _ => parts.push(format!("y^{j}")),
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Inverse of monomial_key, accepting repeated factors ("x*x" = "x^2").
pub(crate) fn parse_monomial_key(s: &str) -> Option<(u32, u32)> {
    let mut i: u32 = 0;
    let mut j: u32 = 0;
    for factor in s.split('*') {
        let factor = factor.trim();
        if factor == "1" {
            continue;
        }
        let (var, exp) = match factor.split_once('^') {
            Some((v, e)) => (v.trim(), e.trim().parse::<u32>().ok()?),
            None => (factor, 1),
        };
        match var {
            "x" => i = i.checked_add(exp)?,
            "y" => j = j.checked_add(exp)?,
            _ => return None,
        }
    }
    Some((i, j))
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<(u32, u32)> = self.coeffs.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| std::cmp::Reverse((i + j, i)));
        for (idx, &(i, j)) in keys.iter().enumerate() {
            let mono = monomial_key(i, j);
            let mono = if mono == "1" { "" } else { mono.as_str() };
            crate::geometry::write_signed_term(f, idx == 0, &self.coeffs[&(i, j)], mono)?;
        }
        Ok(())
    }
}

/// True iff the point satisfies the curve equation. Same-tower inputs are
/// the caller's contract, as with line incidence.
pub fn on_curve(p: &Point, c: &Curve) -> bool {
    c.evaluate(p).expect("point and curve share a tower").is_zero()
}

/// Exact |{(p, C) : p on C}| by evaluation.
pub fn count_curve_incidences(points: &[Point], curves: &[Curve]) -> u64 {
    let mut count = 0;
    for c in curves {
        for p in points {
            if on_curve(p, c) {
                count += 1;
            }
        }
    }
    count
}

/// A witness breaking the degrees-of-freedom hypothesis for (k, s).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DofViolation {
    /// A k-subset of the points contained in more than s curves; indices
    /// into the input slices.
    SubsetRichness {
        points: Vec<usize>,
        curves: Vec<usize>,
    },
    /// Two curves sharing more than s of the given points.
    PairOverlap {
        curves: (usize, usize),
        points: Vec<usize>,
    },
}

const DOF_GUARD: u64 = 10_000_000;

/// Exhaustively verify both halves of the hypothesis: every k of the
/// points lie on at most s of the curves, and every pair of distinct
/// curves shares at most s of the points. Returns all violating
/// witnesses; the empty list means the hypothesis holds for this data.
/// Refuses inputs where C(|P|, k) * |C| exceeds 10^7.
pub fn dof_check(
    points: &[Point],
    curves: &[Curve],
    k: u32,
    s: u32,
) -> Result<Vec<DofViolation>, CurveError> {
    if k == 0 || s == 0 {
        return Err(CurveError::BadParams);
    }
    if let (Some(p), Some(c)) = (points.first(), curves.first()) {
        if !towers_eq(p.tower(), c.tower()) {
            return Err(CurveError::TowerMismatch);
        }
    }
    let size = binomial(points.len() as u64, u64::from(k)) * BigUint::from(curves.len());
    if size > BigUint::from(DOF_GUARD) {
        return Err(CurveError::GuardExceeded {
            size,
            limit: DOF_GUARD,
        });
    }

    let n_curves = curves.len();
    let width = n_curves.div_ceil(64);
    // point_bits[i]: which curves pass through point i.
    let point_bits: Vec<Vec<u64>> = points
        .iter()
        .map(|p| {
            let mut bits = vec![0u64; width];
            for (j, c) in curves.iter().enumerate() {
                if on_curve(p, c) {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        })
        .collect();

    let mut violations = Vec::new();

    // Condition (1): AND the per-point curve sets down every k-subset.
    // The intersection only shrinks as the subset grows, so a prefix
    // already at <= s curves cannot produce a violation and is pruned.
    let mut all = vec![!0u64; width];
    if width > 0 && !n_curves.is_multiple_of(64) {
        all[width - 1] = (1u64 << (n_curves % 64)) - 1;
    }
    let mut chosen = Vec::with_capacity(k as usize);
    subset_scan(
        &point_bits,
        k as usize,
        u64::from(s),
        0,
        &mut chosen,
        &all,
        &mut violations,
    );

    // Condition (2): pairwise point overlaps, via per-curve point sets.
    let p_width = points.len().div_ceil(64);
    let curve_bits: Vec<Vec<u64>> = curves
        .iter()
        .map(|c| {
            let mut bits = vec![0u64; p_width];
            for (i, p) in points.iter().enumerate() {
                if on_curve(p, c) {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            bits
        })
        .collect();
    for j1 in 0..n_curves {
        for j2 in j1 + 1..n_curves {
            let shared: Vec<usize> = bit_indices(
                &curve_bits[j1]
                    .iter()
                    .zip(&curve_bits[j2])
                    .map(|(a, b)| a & b)
                    .collect::<Vec<u64>>(),
            );
            if shared.len() as u64 > u64::from(s) {
                violations.push(DofViolation::PairOverlap {
                    curves: (j1, j2),
                    points: shared,
                });
            }
        }
    }

    Ok(violations)
}

fn subset_scan(
    point_bits: &[Vec<u64>],
    k: usize,
    s: u64,
    start: usize,
    chosen: &mut Vec<usize>,
    acc: &[u64],
    out: &mut Vec<DofViolation>,
) {
    let live: u64 = acc.iter().map(|w| u64::from(w.count_ones())).sum();
    if live <= s {
        return;
    }
    if chosen.len() == k {
        out.push(DofViolation::SubsetRichness {
            points: chosen.clone(),
            curves: bit_indices(acc),
        });
        return;
    }
    let remaining = k - chosen.len();
    let last = point_bits.len().checked_sub(remaining);
    let Some(last) = last else { return };
    for i in start..=last {
        let next: Vec<u64> = acc
            .iter()
            .zip(&point_bits[i])
            .map(|(a, b)| a & b)
            .collect();
        chosen.push(i);
        subset_scan(point_bits, k, s, i + 1, chosen, &next, out);
        chosen.pop();
    }
}

fn bit_indices(bits: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            let b = word.trailing_zeros() as usize;
            out.push(w * 64 + b);
            word &= word - 1;
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 1..=k {
        acc = acc * BigUint::from(n - k + i) / BigUint::from(i);
    }
    acc
}

/// Observed count over the curve-incidence bound shape
/// m^(k/(2k-1) + eps) * n^((2k-2)/(2k-1)) + m + n. The multiplicative
/// constant in the underlying theorem is unspecified, so this is reported,
/// never asserted.
pub fn curve_bound_ratio(
    count: u64,
    m: usize,
    n: usize,
    k: u32,
    eps: f64,
) -> Result<f64, CurveError> {
    if k == 0 {
        return Err(CurveError::BadParams);
    }
    if m == 0 && n == 0 {
        return Ok(0.0);
    }
    let kf = f64::from(k);
    let mf = m as f64;
    let nf = n as f64;
    let denom = mf.powf(kf / (2.0 * kf - 1.0) + eps) * nf.powf((2.0 * kf - 2.0) / (2.0 * kf - 1.0))
        + mf
        + nf;
    Ok(count as f64 / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{generate, FamilyId};
    use crate::incidence::count_incidences_naive;

    fn q() -> Arc<Tower> {
        Tower::rationals()
    }

    fn c(terms: &[((u32, u32), i64)]) -> Curve {
        let q = q();
        Curve::new(
            Arc::clone(&q),
            terms.iter().map(|&(m, v)| (m, q.from_int(v))),
        )
        .unwrap()
    }

    fn pt(x: i64, y: i64) -> Point {
        let q = q();
        Point::new(q.from_int(x), q.from_int(y))
    }

    #[test]
    fn membership_examples() {
        // y - x^2 - 1
        let parabola = c(&[((0, 1), 1), ((2, 0), -1), ((0, 0), -1)]);
        assert!(on_curve(&pt(1, 2), &parabola));
        assert!(!on_curve(&pt(1, 3), &parabola));

        // x^2 + y^2 - 2
        let circle = c(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -2)]);
        assert!(on_curve(&pt(1, 1), &circle));
        assert!(!on_curve(&pt(0, 0), &circle));
    }

    #[test]
    fn scalar_multiples_are_identified() {
        let a = c(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -2)]);
        let b = c(&[((2, 0), 7), ((0, 2), 7), ((0, 0), -14)]);
        assert_eq!(a, b);
    }

    #[test]
    fn zero_polynomial_rejected() {
        let q = q();
        assert!(matches!(
            Curve::new(Arc::clone(&q), [((1u32, 0u32), q.zero())]),
            Err(CurveError::ZeroPolynomial)
        ));
        // Cancellation to zero is also rejected.
        assert!(matches!(
            Curve::new(
                Arc::clone(&q),
                [((1u32, 1u32), q.one()), ((1u32, 1u32), q.from_int(-1))]
            ),
            Err(CurveError::ZeroPolynomial)
        ));
    }

    #[test]
    fn degree_and_terms() {
        let r = c(&[((2, 1), 1), ((0, 1), 1), ((0, 0), -7)]);
        assert_eq!(r.degree(), 3);
        assert_eq!(r.coefficient(2, 1), Some(&q().one()));
        assert_eq!(r.coefficient(5, 5), None);
    }

    #[test]
    fn parabola_family_count() {
        let q = q();
        let curves: Vec<Curve> = (0..3)
            .map(|b| c(&[((0, 1), 1), ((2, 0), -1), ((0, 0), -b)]))
            .collect();
        let points = vec![pt(0, 0), pt(0, 1), pt(0, 2)];
        assert_eq!(count_curve_incidences(&points, &curves), 3);
        assert_eq!(count_curve_incidences(&points, &[]), 0);
        drop(q);
    }

    #[test]
    fn lines_as_curves_match_line_engine() {
        let cfg = generate(FamilyId::StGrid, 2, &q(), None)
            .unwrap()
            .into_configuration()
            .unwrap();
        let curves: Vec<Curve> = cfg.lines().iter().map(Curve::from_line).collect();
        assert_eq!(
            count_curve_incidences(cfg.points(), &curves),
            count_incidences_naive(&cfg)
        );
    }

    #[test]
    fn dof_flags_shared_conic_points() {
        // x^2 - x and y^2 - y both vanish on the four corner points.
        let c1 = c(&[((2, 0), 1), ((1, 0), -1)]);
        let c2 = c(&[((0, 2), 1), ((0, 1), -1)]);
        let points = vec![pt(0, 0), pt(0, 1), pt(1, 0), pt(1, 1)];
        let violations = dof_check(&points, &[c1, c2], 4, 1).unwrap();
        assert!(violations.contains(&DofViolation::SubsetRichness {
            points: vec![0, 1, 2, 3],
            curves: vec![0, 1],
        }));
        assert!(violations.contains(&DofViolation::PairOverlap {
            curves: (0, 1),
            points: vec![0, 1, 2, 3],
        }));
        assert_eq!(violations.len(), 2);
    }

    #[test]
    fn dof_clean_on_disjoint_circles() {
        let c1 = c(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -1)]);
        let c2 = c(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -4)]);
        let points = vec![pt(1, 0), pt(0, 1), pt(-1, 0), pt(2, 0), pt(0, 2)];
        assert!(dof_check(&points, &[c1, c2], 3, 2).unwrap().is_empty());
    }

    #[test]
    fn dof_clean_on_grid_lines() {
        let cfg = generate(FamilyId::StGrid, 2, &q(), None)
            .unwrap()
            .into_configuration()
            .unwrap();
        let curves: Vec<Curve> = cfg.lines().iter().map(Curve::from_line).collect();
        assert!(dof_check(cfg.points(), &curves, 2, 1).unwrap().is_empty());
    }

    #[test]
    fn dof_guard_and_params() {
        let points: Vec<Point> = (0..100).map(|i| pt(i, 0)).collect();
        let curves = vec![c(&[((0, 1), 1)]); 10];
        assert!(matches!(
            dof_check(&points, &curves, 5, 1),
            Err(CurveError::GuardExceeded { .. })
        ));
        assert!(matches!(
            dof_check(&points, &curves, 0, 1),
            Err(CurveError::BadParams)
        ));
        assert!(matches!(
            dof_check(&points, &curves, 1, 0),
            Err(CurveError::BadParams)
        ));
    }

    #[test]
    fn ratio_matches_formula() {
        let r = curve_bound_ratio(16, 16, 8, 2, 0.0).unwrap();
        let denom = 16f64.powf(2.0 / 3.0) * 8f64.powf(2.0 / 3.0) + 24.0;
        assert!((r - 16.0 / denom).abs() < 1e-12);
        assert_eq!(curve_bound_ratio(0, 0, 0, 2, 0.0).unwrap(), 0.0);
        assert!(curve_bound_ratio(1, 1, 1, 0, 0.0).is_err());
    }

    #[test]
    fn monomial_keys_round_trip() {
        for (i, j) in [(0, 0), (1, 0), (0, 1), (2, 3), (1, 1), (4, 0)] {
            assert_eq!(parse_monomial_key(&monomial_key(i, j)), Some((i, j)));
        }
        assert_eq!(parse_monomial_key("x*x"), Some((2, 0)));
        assert_eq!(parse_monomial_key("x^2 * y"), Some((2, 1)));
        assert_eq!(parse_monomial_key("z"), None);
    }

    #[test]
    fn display_reads_naturally() {
        let parabola = c(&[((0, 1), -1), ((2, 0), 1), ((0, 0), 1)]);
        assert_eq!(parabola.to_string(), "x^2 - y + 1");
        let half = Curve::new(
            Arc::clone(&q()),
            [
                ((1u32, 0u32), q().one()),
                ((0u32, 0u32), q().from_rational(&crate::tower::Rational::new(
                    1.into(),
                    2.into(),
                ))),
            ],
        )
        .unwrap();
        assert_eq!(half.to_string(), "x + 1/2");
    }
}
