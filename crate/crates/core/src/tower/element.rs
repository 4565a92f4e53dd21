//! Canonical field elements.
//!
//! An element is a fraction num/den of integer polynomials in the tower
//! generators where
//!   - den is nonzero and free of every algebraic generator,
//!   - num is reduced modulo each algebraic minimal polynomial,
//!   - the content of num with respect to the algebraic monomials is
//!     coprime to den,
//!   - den's lexicographically leading coefficient is positive,
//!   - zero is encoded as 0/1.
//!
//! Two elements of the same tower are equal in the field exactly when
//! their encodings are identical, so `is_zero` is a plain emptiness test.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use super::poly::{self, MPoly};
use super::unipoly::{self, UniPoly};
use super::{towers_eq, FieldError, Rational, Tower};

#[derive(Clone)]
pub struct FieldElement {
    tower: Arc<Tower>,
    num: MPoly,
    den: MPoly,
}

impl FieldElement {
    /// Canonicalize a fraction whose numerator is already reduced modulo
    /// the algebraic generators and whose denominator is nonzero and free
    /// of them.
    pub(crate) fn from_parts(tower: Arc<Tower>, num: MPoly, den: MPoly) -> FieldElement {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            let n = tower.nvars();
            return FieldElement {
                tower,
                num,
                den: MPoly::one(n),
            };
        }
        if den.is_one() {
            return FieldElement { tower, num, den };
        }
        let mut g = den.clone();
        if tower.has_algebraic() {
            for group in alg_groups(&num, &tower).values() {
                g = poly::gcd(&g, group);
                if g.is_one() {
                    break;
                }
            }
        } else {
            g = poly::gcd(&g, &num);
        }
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides the numerator"),
                den.exact_div(&g).expect("gcd divides the denominator"),
            )
        };
        if den.leading_coeff_sign_negative() {
            num = num.neg();
            den = den.neg();
        }
        FieldElement { tower, num, den }
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub(crate) fn num_poly(&self) -> &MPoly {
        &self.num
    }

    pub(crate) fn den_poly(&self) -> &MPoly {
        &self.den
    }

    /// Whether Display renders this element with a leading minus. The
    /// denominator's sign is canonicalized away, so only the numerator
    /// decides.
    pub(crate) fn display_negative(&self) -> bool {
        self.num.leading_coeff_sign_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The rational value of an element that uses no generators.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(Rational::new(n.clone(), d.clone()))
    }

    fn require_same_tower(&self, rhs: &FieldElement) -> Result<(), FieldError> {
        if towers_eq(&self.tower, &rhs.tower) {
            Ok(())
        } else {
            Err(FieldError::TowerMismatch)
        }
    }

    pub fn checked_add(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.require_same_tower(rhs)?;
        if self.den == rhs.den {
            return Ok(FieldElement::from_parts(
                self.tower.clone(),
                self.num.add(&rhs.num),
                self.den.clone(),
            ));
        }
        Ok(FieldElement::from_parts(
            self.tower.clone(),
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        ))
    }

    pub fn checked_sub(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.require_same_tower(rhs)?;
        if self.den == rhs.den {
            return Ok(FieldElement::from_parts(
                self.tower.clone(),
                self.num.sub(&rhs.num),
                self.den.clone(),
            ));
        }
        Ok(FieldElement::from_parts(
            self.tower.clone(),
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        ))
    }

    pub fn checked_mul(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.require_same_tower(rhs)?;
        let raw = self.num.mul(&rhs.num);
        let (red, extra) = self.tower.alg_reduce(raw);
        let mut den = self.den.mul(&rhs.den);
        if !extra.is_one() {
            den = den.mul(&extra);
        }
        Ok(FieldElement::from_parts(self.tower.clone(), red, den))
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        self.require_same_tower(rhs)?;
        let inv = rhs.inverse()?;
        self.checked_mul(&inv)
    }

    /// Multiplicative inverse. Fails on zero and, in towers whose minimal
    /// polynomials are reducible, on zero divisors; the latter error names
    /// the generator and the discovered factor.
    pub fn inverse(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let tower = &self.tower;
        let alg_var = self.num.max_var_where(|i| tower.is_algebraic_at(i));
        let Some(var) = alg_var else {
            // Numerator free of algebraic generators: swap the fraction.
            return Ok(FieldElement::from_parts(
                tower.clone(),
                self.den.clone(),
                self.num.clone(),
            ));
        };
        let data = tower.alg_data(var).expect("algebraic generator has data");
        let deg = self.num.degree_in(var);
        let coeffs: Vec<FieldElement> = (0..=deg)
            .map(|j| {
                FieldElement::from_parts(
                    tower.clone(),
                    self.num.coeff_of_power(var, j),
                    self.den.clone(),
                )
            })
            .collect();
        let a = UniPoly::from_coeffs(tower.clone(), coeffs);
        let m_coeffs: Vec<FieldElement> = data
            .cleared
            .iter()
            .map(|c| FieldElement::from_parts(tower.clone(), c.clone(), data.lead_clear.clone()))
            .collect();
        let m = UniPoly::from_coeffs(tower.clone(), m_coeffs);
        let (g, u) = unipoly::ext_gcd(&a, &m)?;
        match g.degree() {
            Some(0) => {
                let ginv = g.coeff(0).inverse()?;
                let s = tower.generator(tower.name_at(var)).expect("generator");
                let mut acc = tower.zero();
                let mut s_pow = tower.one();
                for j in 0..u.len() {
                    acc = acc.checked_add(&u.coeff(j).checked_mul(&ginv)?.checked_mul(&s_pow)?)?;
                    s_pow = s_pow.checked_mul(&s)?;
                }
                Ok(acc)
            }
            _ => Err(FieldError::ZeroDivisor {
                generator: tower.name_at(var).to_string(),
                factor: g.format(tower.name_at(var)),
            }),
        }
    }

    pub fn pow(&self, e: u32) -> Result<FieldElement, FieldError> {
        let mut acc = self.tower.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Evaluate at rational values for the generators, one per generator
    /// in tower order. Only meaningful for purely transcendental towers.
    /// `None` when the denominator vanishes at the assignment.
    pub(crate) fn eval_rational(&self, vals: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(vals);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(vals) / d)
    }
}

/// Coefficients of the numerator grouped by algebraic monomial: keys are
/// exponent vectors supported on algebraic generators, values the
/// transcendental-only polynomials multiplying them.
fn alg_groups(num: &MPoly, tower: &Tower) -> BTreeMap<Vec<u32>, MPoly> {
    let n = tower.nvars();
    let mut groups: BTreeMap<Vec<u32>, Vec<(Vec<u32>, num_bigint::BigInt)>> = BTreeMap::new();
    for (mono, c) in num.terms() {
        let mut alg = vec![0u32; n];
        let mut rest = mono.0.clone();
        for i in 0..n {
            if tower.is_algebraic_at(i) {
                alg[i] = rest[i];
                rest[i] = 0;
            }
        }
        groups.entry(alg).or_default().push((rest, c.clone()));
    }
    groups
        .into_iter()
        .map(|(k, terms)| (k, MPoly::from_terms(n, terms)))
        .collect()
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        towers_eq(&self.tower, &other.tower) && self.num == other.num && self.den == other.den
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Order by encoding, for deterministic containers; not an order on the
/// field.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num
            .cmp(&other.num)
            .then_with(|| self.den.cmp(&other.den))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.tower.generator_names();
        if self.den.is_one() {
            return write!(f, "{}", self.num.format(names));
        }
        // Parenthesize only what the expression grammar requires: a sum
        // always, and a denominator with several factors ("2*t"), since
        // a/2*t would regroup as (a/2)*t.
        let num = self.num.format(names);
        let den = self.den.format(names);
        if num.contains(' ') {
            write!(f, "({num})")?;
        } else {
            write!(f, "{num}")?;
        }
        if den.contains(' ') || den.contains('*') {
            write!(f, "/({den})")
        } else {
            write!(f, "/{den}")
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("field operation failed: {e}"))
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            tower: self.tower.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::parse_element;

    fn q() -> Arc<Tower> {
        Tower::rationals()
    }

    fn q_t() -> Arc<Tower> {
        q().with_transcendental("t").unwrap()
    }

    fn q_sqrt2() -> Arc<Tower> {
        let q = q();
        q.with_algebraic("s", &[q.from_int(-2), q.zero(), q.one()])
            .unwrap()
    }

    #[test]
    fn rational_reduction() {
        let tw = q();
        let half = tw.from_rational(&Rational::new(2.into(), 4.into()));
        assert_eq!(half.to_string(), "1/2");
        let sum = &half + &half;
        assert!(sum.is_one());
    }

    #[test]
    fn zero_is_canonical() {
        let tw = q_t();
        let t = tw.generator("t").unwrap();
        let z = &t - &t;
        assert!(z.is_zero());
        assert_eq!(z, tw.zero());
    }

    #[test]
    fn polynomial_fraction_reduces() {
        let tw = q_t();
        let e = parse_element("(t^2 - 1)/(t + 1)", &tw).unwrap();
        assert_eq!(e, parse_element("t - 1", &tw).unwrap());
    }

    #[test]
    fn denominator_sign_normalized() {
        let tw = q_t();
        let e = parse_element("1/(1 - t)", &tw).unwrap();
        assert_eq!(e.to_string(), "-1/(t - 1)");
    }

    #[test]
    fn inverse_in_quadratic_extension() {
        let tw = q_sqrt2();
        let one_plus_s = parse_element("1 + s", &tw).unwrap();
        let inv = one_plus_s.inverse().unwrap();
        assert_eq!(inv, parse_element("s - 1", &tw).unwrap());
        assert!((&one_plus_s * &inv).is_one());
    }

    #[test]
    fn sqrt2_times_itself_minus_two_is_zero() {
        let tw = q_sqrt2();
        let s = tw.generator("s").unwrap();
        let e = &(&s * &s) - &tw.from_int(2);
        assert!(e.is_zero());
    }

    #[test]
    fn zero_divisor_detected_on_inversion() {
        let q = q();
        let tw = q
            .with_algebraic("u", &[q.from_int(-1), q.zero(), q.one()])
            .unwrap();
        let e = parse_element("u - 1", &tw).unwrap();
        let err = e.inverse().unwrap_err();
        match err {
            FieldError::ZeroDivisor { generator, factor } => {
                assert_eq!(generator, "u");
                assert!(factor.contains('u'), "factor was {factor}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn division_by_zero() {
        let tw = q_t();
        let t = tw.generator("t").unwrap();
        let z = &t - &t;
        assert_eq!(t.checked_div(&z), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn tower_mismatch_is_an_error() {
        let a = q_t().generator("t").unwrap();
        let b = q_sqrt2().generator("s").unwrap();
        assert_eq!(a.checked_add(&b), Err(FieldError::TowerMismatch));
    }

    #[test]
    fn mixed_tower_inverse() {
        // 1/(s + t) in Q(t)[s; s^2 - t]: (s + t)(s - t) = t - t^2, so the
        // inverse is (s - t)/(t - t^2).
        let qt = q_t();
        let t = qt.generator("t").unwrap();
        let tw = qt.with_algebraic("s", &[-t, qt.zero(), qt.one()]).unwrap();
        let e = parse_element("s + t", &tw).unwrap();
        let inv = e.inverse().unwrap();
        assert!((&e * &inv).is_one());
        assert_eq!(inv, parse_element("(s - t)/(t - t^2)", &tw).unwrap());
    }

    #[test]
    fn algebraic_content_reduced_against_denominator() {
        // (2s + 2t)/2 must reduce to s + t.
        let qt = q_t();
        let t = qt.generator("t").unwrap();
        let tw = qt.with_algebraic("s", &[-t, qt.zero(), qt.one()]).unwrap();
        let e = parse_element("(2*s + 2*t)/2", &tw).unwrap();
        assert_eq!(e, parse_element("s + t", &tw).unwrap());
        // but (s + t)/t keeps its denominator.
        let f = parse_element("(s + t)/t", &tw).unwrap();
        assert_eq!(f.to_string(), "(s + t)/t");
    }

    #[test]
    fn display_reparses_identically() {
        let tw = q_t();
        for s in ["0", "t - 1", "(t - 1)/(t + 1)", "(-2)/(3)", "3*t^2 + 1"] {
            let e = parse_element(s, &tw).unwrap();
            let round = parse_element(&e.to_string(), &tw).unwrap();
            assert_eq!(e, round);
        }
    }
}
