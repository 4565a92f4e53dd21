//! Field towers finitely generated over the rationals.
//!
//! A tower is an ordered list of generators, each either transcendental
//! (a fresh indeterminate) or algebraic with a monic squarefree minimal
//! polynomial over the subtower below it. Elements are canonical
//! fractions of integer polynomials in the generators; equality of
//! canonical encodings decides equality in the field, which is what all
//! incidence counting ultimately reduces to.
//!
//! Minimal polynomials are stored with denominators cleared, so reduction
//! of a numerator modulo an algebraic generator is a pseudo-division by an
//! integer polynomial; the cleared leading coefficient it introduces is
//! tracked into the element's denominator.

pub(crate) mod poly;

mod element;
mod parse;
mod unipoly;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use poly::MPoly;

pub use element::FieldElement;
pub use parse::parse_element;

/// Arbitrary-precision rational with positive denominator, always reduced.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{generator}` behaves as a zero divisor: minimal polynomial factor {factor}")]
    ZeroDivisor { generator: String, factor: String },
    #[error("elements belong to different towers")]
    TowerMismatch,
    #[error("invalid tower: {0}")]
    InvalidTower(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct AlgebraicData {
    pub degree: u32,
    // Denominator-cleared minimal polynomial coefficients, degree
    // ascending, as integer polynomials in the full variable space with
    // support only on earlier generators. cleared[degree] == lead_clear.
    pub cleared: Vec<MPoly>,
    // Sum of cleared[j] * s^j, the divisor used for pseudo-reduction.
    pub min_full: MPoly,
    pub lead_clear: MPoly,
    pub lead_is_one: bool,
    // Original fractional coefficients in canonical rendering, for
    // descriptor round-trips.
    pub coeff_display: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Generator {
    name: String,
    alg: Option<AlgebraicData>,
}

/// An immutable tower of field extensions of the rationals. Extension
/// produces a new tower; elements keep a shared handle to theirs.
#[derive(Debug)]
pub struct Tower {
    gens: Vec<Generator>,
    names: Vec<String>,
    has_algebraic: bool,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}
impl Eq for Tower {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Transcendental,
    Algebraic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub kind: GeneratorKind,
    /// Minimal polynomial coefficients over the subtower, degree
    /// ascending, ending with "1". Present exactly for algebraic kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_poly: Option<Vec<String>>,
}

/// Plain data describing a tower, suitable for serialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescriptor {
    pub generators: Vec<GeneratorSpec>,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Tower {
    /// The trivial tower: the rationals themselves.
    pub fn rationals() -> Arc<Tower> {
        static Q: OnceLock<Arc<Tower>> = OnceLock::new();
        Q.get_or_init(|| {
            Arc::new(Tower {
                gens: Vec::new(),
                names: Vec::new(),
                has_algebraic: false,
            })
        })
        .clone()
    }

    fn check_new_name(&self, name: &str) -> Result<(), FieldError> {
        if !valid_identifier(name) {
            return Err(FieldError::InvalidTower(format!(
                "generator name `{name}` is not a valid identifier"
            )));
        }
        if self.names.iter().any(|n| n == name) {
            return Err(FieldError::InvalidTower(format!(
                "generator name `{name}` already used"
            )));
        }
        Ok(())
    }

    /// Extend by a fresh indeterminate.
    pub fn with_transcendental(self: &Arc<Self>, name: &str) -> Result<Arc<Tower>, FieldError> {
        self.check_new_name(name)?;
        let n = self.gens.len() + 1;
        let mut gens: Vec<Generator> = self.gens.iter().map(|g| g.lift(n)).collect();
        gens.push(Generator {
            name: name.to_string(),
            alg: None,
        });
        let mut names = self.names.clone();
        names.push(name.to_string());
        Ok(Arc::new(Tower {
            gens,
            names,
            has_algebraic: self.has_algebraic,
        }))
    }

    /// Extend by an algebraic generator with the given monic minimal
    /// polynomial over `self`, coefficients degree ascending and ending
    /// with one. The polynomial must have degree at least 2 and be
    /// squarefree; irreducibility is not checked here, so a reducible
    /// choice surfaces later as a zero-divisor error during inversion.
    pub fn with_algebraic(
        self: &Arc<Self>,
        name: &str,
        min_poly: &[FieldElement],
    ) -> Result<Arc<Tower>, FieldError> {
        self.check_new_name(name)?;
        if min_poly.len() < 3 {
            return Err(FieldError::InvalidTower(format!(
                "minimal polynomial for `{name}` must have degree at least 2"
            )));
        }
        for c in min_poly {
            if !towers_eq(c.tower(), self) {
                return Err(FieldError::TowerMismatch);
            }
        }
        let degree = (min_poly.len() - 1) as u32;
        if !min_poly[degree as usize].is_one() {
            return Err(FieldError::InvalidTower(format!(
                "minimal polynomial for `{name}` must be monic"
            )));
        }
        // Squarefree check: gcd with the formal derivative over the
        // subtower field must be constant.
        let m = unipoly::UniPoly::from_coeffs(self.clone(), min_poly.to_vec());
        let dm = m.derivative();
        let (g, _) = unipoly::ext_gcd(&dm, &m)?;
        if g.degree().is_some_and(|d| d > 0) {
            return Err(FieldError::InvalidTower(format!(
                "minimal polynomial for `{name}` is not squarefree: repeated factor {}",
                g.format(name)
            )));
        }

        let sub_nvars = self.gens.len();
        let mut ell = MPoly::one(sub_nvars);
        for c in min_poly {
            ell = lcm(&ell, c.den_poly());
        }
        let nvars = sub_nvars + 1;
        let mut cleared = Vec::with_capacity(min_poly.len());
        for c in min_poly {
            let scale = ell
                .exact_div(c.den_poly())
                .expect("lcm is divisible by each denominator");
            cleared.push(c.num_poly().mul(&scale).lift(nvars));
        }
        let mut min_full = MPoly::zero(nvars);
        for (j, cj) in cleared.iter().enumerate() {
            min_full = min_full.add(&cj.mul_term(sub_nvars, j as u32, &BigInt::one()));
        }
        let lead_clear = cleared[degree as usize].clone();
        let data = AlgebraicData {
            degree,
            lead_is_one: lead_clear.is_one(),
            coeff_display: min_poly.iter().map(|c| c.to_string()).collect(),
            cleared,
            min_full,
            lead_clear,
        };
        let mut gens: Vec<Generator> = self.gens.iter().map(|g| g.lift(nvars)).collect();
        gens.push(Generator {
            name: name.to_string(),
            alg: Some(data),
        });
        let mut names = self.names.clone();
        names.push(name.to_string());
        Ok(Arc::new(Tower {
            gens,
            names,
            has_algebraic: true,
        }))
    }

    pub fn from_descriptor(desc: &TowerDescriptor) -> Result<Arc<Tower>, FieldError> {
        let mut tower = Tower::rationals();
        for spec in &desc.generators {
            tower = match (&spec.kind, &spec.min_poly) {
                (GeneratorKind::Transcendental, None) => tower.with_transcendental(&spec.name)?,
                (GeneratorKind::Transcendental, Some(_)) => {
                    return Err(FieldError::InvalidTower(format!(
                        "transcendental generator `{}` must not carry a minimal polynomial",
                        spec.name
                    )))
                }
                (GeneratorKind::Algebraic, Some(coeffs)) => {
                    let parsed: Result<Vec<_>, _> =
                        coeffs.iter().map(|s| parse_element(s, &tower)).collect();
                    tower.with_algebraic(&spec.name, &parsed?)?
                }
                (GeneratorKind::Algebraic, None) => {
                    return Err(FieldError::InvalidTower(format!(
                        "algebraic generator `{}` requires a minimal polynomial",
                        spec.name
                    )))
                }
            };
        }
        Ok(tower)
    }

    pub fn descriptor(&self) -> TowerDescriptor {
        TowerDescriptor {
            generators: self
                .gens
                .iter()
                .map(|g| match &g.alg {
                    None => GeneratorSpec {
                        name: g.name.clone(),
                        kind: GeneratorKind::Transcendental,
                        min_poly: None,
                    },
                    Some(data) => GeneratorSpec {
                        name: g.name.clone(),
                        kind: GeneratorKind::Algebraic,
                        min_poly: Some(data.coeff_display.clone()),
                    },
                })
                .collect(),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_algebraic_at(&self, idx: usize) -> bool {
        self.gens[idx].alg.is_some()
    }

    pub fn is_purely_transcendental(&self) -> bool {
        !self.has_algebraic
    }

    pub fn transcendental_names(&self) -> Vec<&str> {
        self.gens
            .iter()
            .filter(|g| g.alg.is_none())
            .map(|g| g.name.as_str())
            .collect()
    }

    /// Name of the first algebraic generator, if any.
    pub fn first_algebraic_name(&self) -> Option<&str> {
        self.gens
            .iter()
            .find(|g| g.alg.is_some())
            .map(|g| g.name.as_str())
    }

    pub(crate) fn nvars(&self) -> usize {
        self.gens.len()
    }

    pub(crate) fn has_algebraic(&self) -> bool {
        self.has_algebraic
    }

    pub(crate) fn alg_data(&self, idx: usize) -> Option<&AlgebraicData> {
        self.gens[idx].alg.as_ref()
    }

    pub(crate) fn name_at(&self, idx: usize) -> &str {
        &self.gens[idx].name
    }

    /// Reduce a raw numerator modulo every algebraic generator, highest
    /// first. Returns the reduced polynomial together with the product of
    /// cleared leading coefficients picked up along the way, which belongs
    /// in the denominator.
    pub(crate) fn alg_reduce(&self, mut p: MPoly) -> (MPoly, MPoly) {
        let mut extra = MPoly::one(self.nvars());
        if !self.has_algebraic {
            return (p, extra);
        }
        for i in (0..self.gens.len()).rev() {
            let Some(data) = &self.gens[i].alg else {
                continue;
            };
            loop {
                let dr = p.degree_in(i);
                if dr < data.degree {
                    break;
                }
                let lead = p.coeff_of_power(i, dr);
                let step = data
                    .min_full
                    .mul(&lead)
                    .mul_term(i, dr - data.degree, &BigInt::one());
                p = if data.lead_is_one {
                    p.sub(&step)
                } else {
                    extra = extra.mul(&data.lead_clear);
                    p.mul(&data.lead_clear).sub(&step)
                };
            }
        }
        (p, extra)
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement::from_parts(
            self.clone(),
            MPoly::zero(self.nvars()),
            MPoly::one(self.nvars()),
        )
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, v: i64) -> FieldElement {
        self.from_bigint(BigInt::from(v))
    }

    pub fn from_bigint(self: &Arc<Self>, v: BigInt) -> FieldElement {
        FieldElement::from_parts(
            self.clone(),
            MPoly::constant(self.nvars(), v),
            MPoly::one(self.nvars()),
        )
    }

    pub fn from_rational(self: &Arc<Self>, v: &Rational) -> FieldElement {
        FieldElement::from_parts(
            self.clone(),
            MPoly::constant(self.nvars(), v.numer().clone()),
            MPoly::constant(self.nvars(), v.denom().clone()),
        )
    }

    pub fn generator(self: &Arc<Self>, name: &str) -> Result<FieldElement, FieldError> {
        let idx = self
            .generator_index(name)
            .ok_or_else(|| FieldError::UnknownGenerator(name.to_string()))?;
        Ok(FieldElement::from_parts(
            self.clone(),
            MPoly::variable(self.nvars(), idx),
            MPoly::one(self.nvars()),
        ))
    }

    pub fn generators(self: &Arc<Self>) -> Vec<FieldElement> {
        (0..self.nvars())
            .map(|i| {
                FieldElement::from_parts(
                    self.clone(),
                    MPoly::variable(self.nvars(), i),
                    MPoly::one(self.nvars()),
                )
            })
            .collect()
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")?;
        let mut i = 0;
        while i < self.gens.len() {
            if self.gens[i].alg.is_none() {
                let mut j = i;
                while j < self.gens.len() && self.gens[j].alg.is_none() {
                    j += 1;
                }
                write!(f, "({})", self.names[i..j].join(","))?;
                i = j;
            } else {
                let data = self.gens[i].alg.as_ref().unwrap();
                write!(
                    f,
                    "[{}; {}]",
                    self.names[i],
                    data.min_full.format(&self.names)
                )?;
                i += 1;
            }
        }
        Ok(())
    }
}

impl Generator {
    fn lift(&self, nvars: usize) -> Generator {
        Generator {
            name: self.name.clone(),
            alg: self.alg.as_ref().map(|d| AlgebraicData {
                degree: d.degree,
                cleared: d.cleared.iter().map(|p| p.lift(nvars)).collect(),
                min_full: d.min_full.lift(nvars),
                lead_clear: d.lead_clear.lift(nvars),
                lead_is_one: d.lead_is_one,
                coeff_display: d.coeff_display.clone(),
            }),
        }
    }
}

/// True when the two handles denote the same tower, by pointer or content.
pub fn towers_eq(a: &Arc<Tower>, b: &Arc<Tower>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_one() {
        return b.clone().normalize_sign();
    }
    if b.is_one() {
        return a.clone().normalize_sign();
    }
    let g = poly::gcd(a, b);
    a.mul(b)
        .exact_div(&g)
        .expect("gcd divides the product")
        .normalize_sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_t() -> Arc<Tower> {
        Tower::rationals().with_transcendental("t").unwrap()
    }

    fn q_sqrt2() -> Arc<Tower> {
        let q = Tower::rationals();
        let m = [q.from_int(-2), q.zero(), q.one()];
        q.with_algebraic("s", &m).unwrap()
    }

    #[test]
    fn builds_and_describes() {
        let tw = q_t()
            .with_algebraic(
                "s",
                &[
                    q_t().generator("t").map(|t| -t).unwrap(),
                    q_t().zero(),
                    q_t().one(),
                ],
            )
            .unwrap();
        assert_eq!(tw.to_string(), "Q(t)[s; s^2 - t]");
        let desc = tw.descriptor();
        let again = Tower::from_descriptor(&desc).unwrap();
        assert!(towers_eq(&tw, &again));
    }

    #[test]
    fn rejects_bad_names() {
        let q = Tower::rationals();
        assert!(matches!(
            q.with_transcendental("2x"),
            Err(FieldError::InvalidTower(_))
        ));
        let t1 = q.with_transcendental("t").unwrap();
        assert!(matches!(
            t1.with_transcendental("t"),
            Err(FieldError::InvalidTower(_))
        ));
    }

    #[test]
    fn rejects_degree_one_and_nonmonic() {
        let q = Tower::rationals();
        assert!(q.with_algebraic("s", &[q.from_int(-2), q.one()]).is_err());
        assert!(q
            .with_algebraic("s", &[q.from_int(-2), q.zero(), q.from_int(3)])
            .is_err());
    }

    #[test]
    fn rejects_non_squarefree() {
        let q = Tower::rationals();
        // (s - 1)^2 = s^2 - 2s + 1
        let err = q
            .with_algebraic("s", &[q.one(), q.from_int(-2), q.one()])
            .unwrap_err();
        match err {
            FieldError::InvalidTower(msg) => assert!(msg.contains("squarefree"), "{msg}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn accepts_reducible_squarefree() {
        // s^2 - 1 factors but is squarefree; the tower is a ring with zero
        // divisors and construction is still allowed.
        let q = Tower::rationals();
        assert!(q
            .with_algebraic("s", &[q.from_int(-1), q.zero(), q.one()])
            .is_ok());
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let tw = q_sqrt2();
        let s = tw.generator("s").unwrap();
        let sq = &s * &s;
        assert_eq!(sq, tw.from_int(2));
    }

    #[test]
    fn fractional_minpoly_coeffs_are_cleared() {
        // s^2 - 1/t over Q(t): reduction of s^2 must produce 1/t exactly.
        let qt = q_t();
        let t = qt.generator("t").unwrap();
        let minus_inv_t = (-qt.one()).checked_div(&t).unwrap();
        let tw = qt
            .with_algebraic("s", &[minus_inv_t, qt.zero(), qt.one()])
            .unwrap();
        let s = tw.generator("s").unwrap();
        let lhs = &s * &s;
        let rhs = tw.one().checked_div(&tw.generator("t").unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn descriptor_rejects_mismatched_kind() {
        let desc = TowerDescriptor {
            generators: vec![GeneratorSpec {
                name: "t".into(),
                kind: GeneratorKind::Algebraic,
                min_poly: None,
            }],
        };
        assert!(Tower::from_descriptor(&desc).is_err());
    }
}
