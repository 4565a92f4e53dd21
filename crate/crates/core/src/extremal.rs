//! Generators for the sharpness families and standard test sets, with
//! exact expected incidence counts for the three incidence families.
//!
//! All emitted coordinates are integers, so the same generator works over
//! every tower; callers pick the tower the objects should live in.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::geometry::{Configuration, GeometryError, Line, Point};
use crate::sumproduct::{ElementSet, SumProductError};
use crate::tower::{Rational, Tower};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    /// N^4 incidences between 2N^3 points and N^3 lines: the grid
    /// {1..N} x {1..2N^2} against the lines y = ax + b, 1 <= a <= N,
    /// 1 <= b <= N^2.
    StGrid,
    /// N collinear points and the one line through them.
    PointHeavy,
    /// One point and N lines through it.
    LineHeavy,
    /// The N x N integer grid, no lines. Feeds the Beck checks.
    SquareGrid,
    /// {1, 2, ..., N} as an element set.
    ArithmeticProgression,
    /// {1, r, r^2, ..., r^(N-1)} for a caller-supplied ratio r.
    GeometricProgression,
}

impl FamilyId {
    pub const ALL: [FamilyId; 6] = [
        FamilyId::StGrid,
        FamilyId::PointHeavy,
        FamilyId::LineHeavy,
        FamilyId::SquareGrid,
        FamilyId::ArithmeticProgression,
        FamilyId::GeometricProgression,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::StGrid => "st_grid",
            FamilyId::PointHeavy => "point_heavy",
            FamilyId::LineHeavy => "line_heavy",
            FamilyId::SquareGrid => "square_grid",
            FamilyId::ArithmeticProgression => "arithmetic_progression",
            FamilyId::GeometricProgression => "geometric_progression",
        }
    }

    /// The families for which expected_incidences is defined.
    pub fn is_incidence_family(&self) -> bool {
        matches!(
            self,
            FamilyId::StGrid | FamilyId::PointHeavy | FamilyId::LineHeavy
        )
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = ExtremalError;

    fn from_str(s: &str) -> Result<FamilyId, ExtremalError> {
        FamilyId::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| ExtremalError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtremalError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family size must be at least 1")]
    ZeroSize,
    #[error("geometric_progression requires a ratio parameter")]
    MissingRatio,
    #[error("geometric_progression ratio must not be 0, 1, or -1")]
    BadRatio,
    #[error("{0} is not an incidence family")]
    NotIncidenceFamily(FamilyId),
    #[error("expected incidence count for N = {0} overflows u64")]
    Overflow(u32),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Set(#[from] SumProductError),
}

/// Output of generate: the incidence families and square_grid produce a
/// point/line configuration, the progressions an element set.
#[derive(Debug, Clone)]
pub enum Generated {
    Configuration(Configuration),
    Set(ElementSet),
}

impl Generated {
    pub fn into_configuration(self) -> Option<Configuration> {
        match self {
            Generated::Configuration(c) => Some(c),
            Generated::Set(_) => None,
        }
    }

    pub fn into_set(self) -> Option<ElementSet> {
        match self {
            Generated::Set(s) => Some(s),
            Generated::Configuration(_) => None,
        }
    }
}

/// Build the requested family at size n over the given tower. `ratio` is
/// consulted only by geometric_progression and must then be present and
/// different from 0 and ±1.
pub fn generate(
    family: FamilyId,
    n: u32,
    tower: &Arc<Tower>,
    ratio: Option<&Rational>,
) -> Result<Generated, ExtremalError> {
    if n == 0 {
        return Err(ExtremalError::ZeroSize);
    }
    let int = |v: u64| tower.from_bigint(BigInt::from(v));
    match family {
        FamilyId::StGrid => {
            let n64 = u64::from(n);
            let mut points = Vec::with_capacity((2 * n64 * n64 * n64) as usize);
            for x in 1..=n64 {
                for y in 1..=2 * n64 * n64 {
                    points.push(Point::new(int(x), int(y)));
                }
            }
            let mut lines = Vec::with_capacity((n64 * n64 * n64) as usize);
            for a in 1..=n64 {
                for b in 1..=n64 * n64 {
                    // y = a*x + b, written a*x - y + b = 0.
                    lines.push(Line::new(int(a), tower.from_int(-1), int(b))?);
                }
            }
            let cfg = Configuration::new(Arc::clone(tower), points, lines)?;
            Ok(Generated::Configuration(cfg))
        }
        FamilyId::PointHeavy => {
            let points = (1..=u64::from(n))
                .map(|x| Point::new(int(x), tower.zero()))
                .collect();
            let axis = Line::new(tower.zero(), tower.one(), tower.zero())?;
            let cfg = Configuration::new(Arc::clone(tower), points, vec![axis])?;
            Ok(Generated::Configuration(cfg))
        }
        FamilyId::LineHeavy => {
            let origin = Point::new(tower.zero(), tower.zero());
            let lines = (1..=u64::from(n))
                .map(|a| Line::new(int(a), tower.from_int(-1), tower.zero()))
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = Configuration::new(Arc::clone(tower), vec![origin], lines)?;
            Ok(Generated::Configuration(cfg))
        }
        FamilyId::SquareGrid => {
            let n64 = u64::from(n);
            let mut points = Vec::with_capacity((n64 * n64) as usize);
            for x in 1..=n64 {
                for y in 1..=n64 {
                    points.push(Point::new(int(x), int(y)));
                }
            }
            let cfg = Configuration::new(Arc::clone(tower), points, Vec::new())?;
            Ok(Generated::Configuration(cfg))
        }
        FamilyId::ArithmeticProgression => {
            let elems: Vec<_> = (1..=u64::from(n)).map(int).collect();
            Ok(Generated::Set(ElementSet::new(Arc::clone(tower), elems)?))
        }
        FamilyId::GeometricProgression => {
            let r = ratio.ok_or(ExtremalError::MissingRatio)?;
            if r.is_zero() || r.is_one() || *r == -Rational::one() {
                return Err(ExtremalError::BadRatio);
            }
            let r = tower.from_rational(r);
            let mut elems = Vec::with_capacity(n as usize);
            let mut cur = tower.one();
            for _ in 0..n {
                elems.push(cur.clone());
                cur = cur.checked_mul(&r).expect("same tower");
            }
            Ok(Generated::Set(ElementSet::new(Arc::clone(tower), elems)?))
        }
    }
}

/// Exact incidence count of the generated family: N^4 for st_grid, N for
/// point_heavy and line_heavy. Errors on the non-incidence families.
pub fn expected_incidences(family: FamilyId, n: u32) -> Result<u64, ExtremalError> {
    if n == 0 {
        return Err(ExtremalError::ZeroSize);
    }
    match family {
        FamilyId::StGrid => u64::from(n)
            .checked_pow(4)
            .ok_or(ExtremalError::Overflow(n)),
        FamilyId::PointHeavy | FamilyId::LineHeavy => Ok(u64::from(n)),
        other => Err(ExtremalError::NotIncidenceFamily(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::count_incidences_naive;

    fn cfg(family: FamilyId, n: u32) -> Configuration {
        let q = Tower::rationals();
        generate(family, n, &q, None)
            .unwrap()
            .into_configuration()
            .unwrap()
    }

    #[test]
    fn st_grid_shape_and_count() {
        let c = cfg(FamilyId::StGrid, 2);
        assert_eq!(c.points().len(), 16);
        assert_eq!(c.lines().len(), 8);
        assert_eq!(c.duplicate_points(), 0);
        assert_eq!(c.duplicate_lines(), 0);
        assert_eq!(count_incidences_naive(&c), 16);
        assert_eq!(expected_incidences(FamilyId::StGrid, 2).unwrap(), 16);
    }

    #[test]
    fn st_grid_lines_have_richness_n() {
        let c = cfg(FamilyId::StGrid, 3);
        for l in c.lines() {
            let r = c
                .points()
                .iter()
                .filter(|p| crate::geometry::incident(p, l))
                .count();
            assert_eq!(r, 3);
        }
    }

    #[test]
    fn point_heavy_and_line_heavy() {
        let ph = cfg(FamilyId::PointHeavy, 9);
        assert_eq!((ph.points().len(), ph.lines().len()), (9, 1));
        assert_eq!(count_incidences_naive(&ph), 9);

        let lh = cfg(FamilyId::LineHeavy, 5);
        assert_eq!((lh.points().len(), lh.lines().len()), (1, 5));
        assert_eq!(lh.duplicate_lines(), 0);
        assert_eq!(count_incidences_naive(&lh), 5);
    }

    #[test]
    fn square_grid_is_lineless() {
        let c = cfg(FamilyId::SquareGrid, 3);
        assert_eq!(c.points().len(), 9);
        assert!(c.lines().is_empty());
    }

    #[test]
    fn progressions() {
        let q = Tower::rationals();
        let ap = generate(FamilyId::ArithmeticProgression, 4, &q, None)
            .unwrap()
            .into_set()
            .unwrap();
        let expect = ElementSet::new(
            Arc::clone(&q),
            (1..=4).map(|v| q.from_int(v)).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(ap, expect);

        let two = Rational::from_integer(2.into());
        let gp = generate(FamilyId::GeometricProgression, 4, &q, Some(&two))
            .unwrap()
            .into_set()
            .unwrap();
        assert_eq!(gp.len(), 4);
        assert!(gp.contains(&q.from_int(8)));

        let neg = Rational::from_integer((-2).into());
        let gp = generate(FamilyId::GeometricProgression, 4, &q, Some(&neg))
            .unwrap()
            .into_set()
            .unwrap();
        assert_eq!(gp.len(), 4);
        assert!(gp.contains(&q.from_int(-8)));
    }

    #[test]
    fn rejects_bad_parameters() {
        let q = Tower::rationals();
        assert!(matches!(
            generate(FamilyId::StGrid, 0, &q, None),
            Err(ExtremalError::ZeroSize)
        ));
        assert!(matches!(
            generate(FamilyId::GeometricProgression, 3, &q, None),
            Err(ExtremalError::MissingRatio)
        ));
        for bad in [0i64, 1, -1] {
            let r = Rational::from_integer(bad.into());
            assert!(matches!(
                generate(FamilyId::GeometricProgression, 3, &q, Some(&r)),
                Err(ExtremalError::BadRatio)
            ));
        }
        assert!(matches!(
            expected_incidences(FamilyId::SquareGrid, 3),
            Err(ExtremalError::NotIncidenceFamily(FamilyId::SquareGrid))
        ));
    }

    #[test]
    fn expected_incidence_table() {
        assert_eq!(expected_incidences(FamilyId::StGrid, 3).unwrap(), 81);
        assert_eq!(expected_incidences(FamilyId::StGrid, 1).unwrap(), 1);
        assert_eq!(expected_incidences(FamilyId::PointHeavy, 9).unwrap(), 9);
        assert!(matches!(
            expected_incidences(FamilyId::StGrid, 1 << 17),
            Err(ExtremalError::Overflow(_))
        ));
    }

    #[test]
    fn family_names_round_trip() {
        for f in FamilyId::ALL {
            assert_eq!(f.name().parse::<FamilyId>().unwrap(), f);
        }
        assert!("st-grid".parse::<FamilyId>().is_err());
    }

    #[test]
    fn works_over_extension_towers() {
        let t = Tower::rationals().with_transcendental("t").unwrap();
        let c = generate(FamilyId::StGrid, 2, &t, None)
            .unwrap()
            .into_configuration()
            .unwrap();
        assert_eq!(count_incidences_naive(&c), 16);
    }
}
