//! Points, lines and point-line configurations in the affine plane over a
//! tower.
//!
//! Lines are stored in a canonical scaling: the first nonzero coordinate
//! of (a, b) equals one, so equal point sets give byte-equal lines and
//! line sets deduplicate by plain equality.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::tower::{towers_eq, FieldElement, FieldError, Tower};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("element belongs to a different tower than the configuration")]
    TowerMismatch,
    #[error("degenerate line: both slope coefficients are zero")]
    DegenerateLine,
    #[error("no unique line through two identical points")]
    IdenticalPoints,
    #[error("affine map is singular")]
    SingularMatrix,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    x: FieldElement,
    y: FieldElement,
}

impl Point {
    /// Both coordinates must come from the same tower.
    pub fn new(x: FieldElement, y: FieldElement) -> Point {
        assert!(
            towers_eq(x.tower(), y.tower()),
            "point coordinates from different towers"
        );
        Point { x, y }
    }

    pub fn x(&self) -> &FieldElement {
        &self.x
    }

    pub fn y(&self) -> &FieldElement {
        &self.y
    }

    pub fn tower(&self) -> &Arc<Tower> {
        self.x.tower()
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{self}")
    }
}

/// The line a*x + b*y + c = 0 in canonical scaling.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Line {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
}

impl Line {
    /// Canonicalize (a, b, c) by dividing through by the first nonzero of
    /// (a, b). Fails when a = b = 0.
    pub fn new(
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
    ) -> Result<Line, GeometryError> {
        if !towers_eq(a.tower(), b.tower()) || !towers_eq(a.tower(), c.tower()) {
            return Err(GeometryError::TowerMismatch);
        }
        let pivot = if !a.is_zero() {
            &a
        } else if !b.is_zero() {
            &b
        } else {
            return Err(GeometryError::DegenerateLine);
        };
        let inv = pivot.inverse()?;
        Ok(Line {
            a: a.checked_mul(&inv)?,
            b: b.checked_mul(&inv)?,
            c: c.checked_mul(&inv)?,
        })
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    pub fn c(&self) -> &FieldElement {
        &self.c
    }

    pub fn tower(&self) -> &Arc<Tower> {
        self.a.tower()
    }
}

impl PartialOrd for Line {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Line {
    fn cmp(&self, other: &Self) -> Ordering {
        self.a
            .cmp(&other.a)
            .then_with(|| self.b.cmp(&other.b))
            .then_with(|| self.c.cmp(&other.c))
    }
}

/// Render one `coeff * mono` summand with the sign pulled out front, the
/// way a human writes polynomials; `mono` empty means the constant term.
pub(crate) fn write_signed_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coeff: &FieldElement,
    mono: &str,
) -> fmt::Result {
    let negative = coeff.display_negative();
    let coeff = if negative { -coeff } else { coeff.clone() };
    if first {
        if negative {
            write!(f, "-")?;
        }
    } else if negative {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if mono.is_empty() {
        write!(f, "{coeff}")
    } else if coeff.is_one() {
        write!(f, "{mono}")
    } else {
        let printed = coeff.to_string();
        // A bare multi-term numerator needs grouping next to '*'.
        if printed.contains(' ') && !printed.starts_with('(') {
            write!(f, "({printed})*{mono}")
        } else {
            write!(f, "{printed}*{mono}")
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (coeff, mono) in [(&self.a, "x"), (&self.b, "y")] {
            if !coeff.is_zero() {
                write_signed_term(f, first, coeff, mono)?;
                first = false;
            }
        }
        if !self.c.is_zero() {
            write_signed_term(f, first, &self.c, "")?;
        }
        write!(f, " = 0")
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Line({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Exact incidence test: whether a*x + b*y + c vanishes in the field.
pub fn incident(p: &Point, l: &Line) -> bool {
    let v = &(&(l.a() * p.x()) + &(l.b() * p.y())) + l.c();
    v.is_zero()
}

/// The unique line through two distinct points.
pub fn line_through(p: &Point, q: &Point) -> Result<Line, GeometryError> {
    if p == q {
        return Err(GeometryError::IdenticalPoints);
    }
    let dx = q.x().checked_sub(p.x())?;
    let dy = q.y().checked_sub(p.y())?;
    // Normal direction (dy, -dx); c makes the line pass through p.
    let c = -&(&(&dy * p.x()) - &(&dx * p.y()));
    Line::new(dy, -dx, c)
}

/// An invertible affine map p -> M p + v. Points transform directly,
/// lines by the inverse transpose, so incidence is preserved exactly.
#[derive(Clone, Debug)]
pub struct AffineMap {
    m: [[FieldElement; 2]; 2],
    v: [FieldElement; 2],
    inv: [[FieldElement; 2]; 2],
}

impl AffineMap {
    pub fn new(m: [[FieldElement; 2]; 2], v: [FieldElement; 2]) -> Result<AffineMap, GeometryError> {
        let tower = m[0][0].tower().clone();
        for e in m.iter().flatten().chain(v.iter()) {
            if !towers_eq(e.tower(), &tower) {
                return Err(GeometryError::TowerMismatch);
            }
        }
        let det = (&m[0][0] * &m[1][1]).checked_sub(&(&m[0][1] * &m[1][0]))?;
        if det.is_zero() {
            return Err(GeometryError::SingularMatrix);
        }
        let det_inv = det.inverse()?;
        let inv = [
            [&m[1][1] * &det_inv, -&(&m[0][1] * &det_inv)],
            [-&(&m[1][0] * &det_inv), &m[0][0] * &det_inv],
        ];
        Ok(AffineMap { m, v, inv })
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        let x = &(&(&self.m[0][0] * p.x()) + &(&self.m[0][1] * p.y())) + &self.v[0];
        let y = &(&(&self.m[1][0] * p.x()) + &(&self.m[1][1] * p.y())) + &self.v[1];
        Point::new(x, y)
    }

    pub fn apply_line(&self, l: &Line) -> Result<Line, GeometryError> {
        // Row vector (a b) times the inverse matrix.
        let a = &(l.a() * &self.inv[0][0]) + &(l.b() * &self.inv[1][0]);
        let b = &(l.a() * &self.inv[0][1]) + &(l.b() * &self.inv[1][1]);
        let c = l.c() - &(&(&a * &self.v[0]) + &(&b * &self.v[1]));
        Line::new(a, b, c)
    }
}

/// A finite set of points and lines over one tower. Construction
/// deduplicates both lists, preserving first-occurrence order, and
/// records how many duplicates were dropped.
#[derive(Clone, Debug)]
pub struct Configuration {
    tower: Arc<Tower>,
    points: Vec<Point>,
    lines: Vec<Line>,
    duplicate_points: usize,
    duplicate_lines: usize,
}

impl Configuration {
    pub fn new(
        tower: Arc<Tower>,
        points: Vec<Point>,
        lines: Vec<Line>,
    ) -> Result<Configuration, GeometryError> {
        for p in &points {
            if !towers_eq(p.tower(), &tower) {
                return Err(GeometryError::TowerMismatch);
            }
        }
        for l in &lines {
            if !towers_eq(l.tower(), &tower) {
                return Err(GeometryError::TowerMismatch);
            }
        }
        let mut seen_p = HashSet::new();
        let mut unique_points = Vec::with_capacity(points.len());
        let mut duplicate_points = 0;
        for p in points {
            if seen_p.insert(p.clone()) {
                unique_points.push(p);
            } else {
                duplicate_points += 1;
            }
        }
        let mut seen_l = HashSet::new();
        let mut unique_lines = Vec::with_capacity(lines.len());
        let mut duplicate_lines = 0;
        for l in lines {
            if seen_l.insert(l.clone()) {
                unique_lines.push(l);
            } else {
                duplicate_lines += 1;
            }
        }
        Ok(Configuration {
            tower,
            duplicate_points,
            duplicate_lines,
            points: unique_points,
            lines: unique_lines,
        })
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn duplicate_points(&self) -> usize {
        self.duplicate_points
    }

    pub fn duplicate_lines(&self) -> usize {
        self.duplicate_lines
    }

    /// Apply an invertible affine map to every point and line. The map is
    /// a bijection of the plane, so counts of everything incidence-related
    /// are preserved.
    pub fn affine_transform(&self, map: &AffineMap) -> Result<Configuration, GeometryError> {
        let points = self.points.iter().map(|p| map.apply_point(p)).collect();
        let lines = self
            .lines
            .iter()
            .map(|l| map.apply_line(l))
            .collect::<Result<Vec<_>, _>>()?;
        Configuration::new(self.tower.clone(), points, lines)
    }
}
