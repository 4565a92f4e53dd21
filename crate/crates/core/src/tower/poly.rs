//! Sparse multivariate polynomials over arbitrary-precision integers.
//!
//! Exponent vectors have a fixed length equal to the number of tower
//! generators, and the term order is lexicographic in generator order.
//! These polynomials are the substrate shared by element numerators,
//! denominators and cleared minimal polynomials; gcd is the primitive
//! polynomial-remainder-sequence algorithm, recursing on the highest
//! variable that actually appears.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector ordered lexicographically from the most recently
/// adjoined generator downwards, so the newest generator dominates. Under
/// this order the leading monomial of a cleared minimal polynomial is the
/// pure power of its own generator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Mono(pub Vec<u32>);

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub(crate) struct MPoly {
    nvars: usize,
    // Nonzero coefficients only; the map's greatest key is the leading
    // monomial.
    terms: BTreeMap<Mono, BigInt>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; nvars]), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, BigInt::one())
    }

    pub fn variable(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars);
        let mut expo = vec![0; nvars];
        expo[idx] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(Mono(expo), BigInt::one());
        p
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = MPoly::zero(nvars);
        for (mono, c) in it {
            debug_assert_eq!(mono.len(), nvars);
            p.insert_add(Mono(mono), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The constant value of a degree-zero polynomial, if it is one.
    pub fn as_constant(&self) -> Option<&BigInt> {
        match self.terms.len() {
            0 => None,
            1 => {
                let (mono, c) = self.terms.iter().next().unwrap();
                mono.0.iter().all(|&e| e == 0).then_some(c)
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &BigInt)> {
        self.terms.last_key_value()
    }

    pub fn leading_coeff_sign_negative(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_negative())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigInt)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, mono: Mono, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, rhs: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_add(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, rhs: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero(self.nvars);
        }
        // Constant factors are by far the most common case in tower work.
        if let Some(c) = self.as_constant() {
            return rhs.scale(c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(c);
        }
        let mut out = MPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mono: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                out.insert_add(Mono(mono), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        if c.is_one() {
            return self.clone();
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiply by the single term `coef * x_var^exp`.
    pub fn mul_term(&self, var: usize, exp: u32, coef: &BigInt) -> MPoly {
        if coef.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2.0[var] += exp;
                    (m2, c * coef)
                })
                .collect(),
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Highest variable index with positive degree, if any.
    pub fn max_var(&self) -> Option<usize> {
        let mut best = None;
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate().rev() {
                if e > 0 {
                    best = Some(best.map_or(i, |b: usize| b.max(i)));
                    break;
                }
            }
        }
        best
    }

    /// Highest variable index satisfying `pred` with positive degree.
    pub fn max_var_where(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate().rev() {
                if e > 0 && pred(i) && best.is_none_or(|b| i > b) {
                    best = Some(i);
                }
            }
        }
        best
    }

    /// The coefficient of `x_var^d`, as a polynomial with the `var` slot zeroed.
    pub fn coeff_of_power(&self, var: usize, d: u32) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[var] == d {
                let mut m2 = m.clone();
                m2.0[var] = 0;
                out.terms.insert(m2, c.clone());
            }
        }
        out
    }

    /// Dense coefficient list with respect to `var`, degree ascending.
    pub fn univar_coeffs(&self, var: usize) -> Vec<MPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = m2.0[var] as usize;
            m2.0[var] = 0;
            out[e].terms.insert(m2, c.clone());
        }
        out
    }

    /// Exact division; `None` when `self` is not a polynomial multiple of `d`.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        debug_assert_eq!(self.nvars, d.nvars);
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(MPoly::zero(self.nvars));
        }
        if d.is_one() {
            return Some(self.clone());
        }
        if let Some(c) = d.as_constant() {
            let mut out = MPoly::zero(self.nvars);
            for (m, x) in &self.terms {
                let (q, r) = x.div_rem(c);
                if !r.is_zero() {
                    return None;
                }
                out.terms.insert(m.clone(), q);
            }
            return Some(out);
        }
        let (dm, dc) = d.leading().unwrap();
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading() {
            let mut qm = Vec::with_capacity(self.nvars);
            for (a, b) in rm.0.iter().zip(&dm.0) {
                if a < b {
                    return None;
                }
                qm.push(a - b);
            }
            let (qc, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            // rem -= (qc * x^qm) * d
            for (m, c) in &d.terms {
                let mono: Vec<u32> = m.0.iter().zip(&qm).map(|(x, y)| x + y).collect();
                rem.insert_add(Mono(mono), -(c * &qc));
            }
            quot.terms.insert(Mono(qm), qc);
        }
        Some(quot)
    }

    /// Pseudo-remainder of `self` by `g` in the variable `var`; equals
    /// `lc(g)^k * self  mod  g` for some `k >= 0`.
    pub fn prem(&self, g: &MPoly, var: usize) -> MPoly {
        let dg = g.degree_in(var);
        debug_assert!(dg >= 1);
        let lcg = g.coeff_of_power(var, dg);
        let mut r = self.clone();
        loop {
            if r.is_zero() {
                return r;
            }
            let dr = r.degree_in(var);
            if dr < dg {
                return r;
            }
            let lr = r.coeff_of_power(var, dr);
            // r = r*lc(g) - lr * x^(dr-dg) * g; the top term cancels.
            let shifted = g.mul(&lr).mul_term(var, dr - dg, &BigInt::one());
            r = r.mul(&lcg).sub(&shifted);
            debug_assert!(r.is_zero() || r.degree_in(var) < dr);
        }
    }

    /// Content with respect to `var` (gcd of the coefficient polynomials)
    /// and the corresponding primitive part.
    pub fn content_primitive_in(&self, var: usize) -> (MPoly, MPoly) {
        if self.is_zero() {
            return (MPoly::zero(self.nvars), MPoly::zero(self.nvars));
        }
        let mut content = MPoly::zero(self.nvars);
        for c in self.univar_coeffs(var) {
            if c.is_zero() {
                continue;
            }
            content = gcd(&content, &c);
            if content.is_one() {
                return (content, self.clone());
            }
        }
        let prim = self
            .exact_div(&content)
            .expect("content divides every coefficient");
        (content, prim)
    }

    /// Flip signs so the lexicographically leading coefficient is positive.
    pub fn normalize_sign(self) -> MPoly {
        if self.leading_coeff_sign_negative() {
            self.neg()
        } else {
            self
        }
    }

    /// Reinterpret over a tower with more generators appended at the end.
    pub fn lift(&self, nvars: usize) -> MPoly {
        assert!(nvars >= self.nvars);
        if nvars == self.nvars {
            return self.clone();
        }
        MPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2.0.resize(nvars, 0);
                    (m2, c.clone())
                })
                .collect(),
        }
    }

    /// Evaluate with one rational value per variable.
    pub fn eval(&self, vals: &[BigRational]) -> BigRational {
        debug_assert_eq!(vals.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut num = c.clone();
            let mut den = BigInt::one();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    num *= vals[i].numer().pow(e);
                    den *= vals[i].denom().pow(e);
                }
            }
            acc += BigRational::new(num, den);
        }
        acc
    }

    /// Render in the canonical order (leading term first) using the given
    /// variable names. The output reparses to the identical polynomial.
    pub fn format(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (mono, coef)) in self.terms.iter().rev().enumerate() {
            let mag = coef.abs();
            if i == 0 {
                if coef.is_negative() {
                    out.push('-');
                }
            } else if coef.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &e) in mono.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            if factors.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

/// Polynomial gcd over the integers, sign-normalized so the leading
/// coefficient is positive. Primitive PRS with recursion on the highest
/// variable appearing in either argument.
pub(crate) fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    debug_assert_eq!(a.nvars(), b.nvars());
    if a.is_zero() {
        return b.clone().normalize_sign();
    }
    if b.is_zero() {
        return a.clone().normalize_sign();
    }
    if a.is_one() || b.is_one() {
        return MPoly::one(a.nvars());
    }
    let va = a.max_var();
    let vb = b.max_var();
    let v = match (va, vb) {
        (None, None) => {
            let ca = a.as_constant().unwrap();
            let cb = b.as_constant().unwrap();
            return MPoly::constant(a.nvars(), ca.gcd(cb));
        }
        (x, y) => x.max(y).unwrap(),
    };
    let (ca, pa) = a.content_primitive_in(v);
    let (cb, pb) = b.content_primitive_in(v);
    let cont = gcd(&ca, &cb);
    let (mut f, mut g) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    let prim = loop {
        if g.is_zero() {
            break f;
        }
        if g.degree_in(v) == 0 {
            // Coprime primitive parts.
            break MPoly::one(a.nvars());
        }
        let r = f.prem(&g, v);
        f = g;
        g = match r.is_zero() {
            true => r,
            false => r.content_primitive_in(v).1,
        };
    };
    cont.mul(&prim).normalize_sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: i64) -> BigInt {
        BigInt::from(v)
    }

    // t = var 0, u = var 1 in a two-variable space
    fn t() -> MPoly {
        MPoly::variable(2, 0)
    }
    fn u() -> MPoly {
        MPoly::variable(2, 1)
    }
    fn k(v: i64) -> MPoly {
        MPoly::constant(2, c(v))
    }

    #[test]
    fn arithmetic_basics() {
        let p = t().add(&k(1)); // t + 1
        let q = t().sub(&k(1)); // t - 1
        let prod = p.mul(&q);
        let expect = t().mul(&t()).sub(&k(1)); // t^2 - 1
        assert_eq!(prod, expect);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn exact_division_detects_inexact() {
        let p = t().mul(&t()).sub(&k(1));
        let d = t().add(&k(1));
        assert_eq!(p.exact_div(&d), Some(t().sub(&k(1))));
        assert_eq!(p.exact_div(&t()), None);
        assert_eq!(k(6).exact_div(&k(4)), None);
        assert_eq!(k(6).exact_div(&k(3)), Some(k(2)));
    }

    #[test]
    fn gcd_univariate() {
        // gcd(t^2 - 1, t^2 - 2t + 1) = t - 1
        let a = t().mul(&t()).sub(&k(1));
        let b = t().mul(&t()).sub(&t().scale(&c(2))).add(&k(1));
        assert_eq!(gcd(&a, &b), t().sub(&k(1)));
    }

    #[test]
    fn gcd_includes_integer_content() {
        let a = t().scale(&c(6)); // 6t
        let b = k(4);
        assert_eq!(gcd(&a, &b), k(2));
    }

    #[test]
    fn gcd_multivariate() {
        // gcd((t+u)*t, (t+u)*u) = t + u
        let s = t().add(&u());
        assert_eq!(gcd(&s.mul(&t()), &s.mul(&u())), s);
    }

    #[test]
    fn gcd_sign_normalized() {
        let a = t().neg().add(&k(1)); // 1 - t
        let g = gcd(&a, &a);
        assert_eq!(g, t().sub(&k(1))); // leading coefficient positive
    }

    #[test]
    fn eval_at_rationals() {
        use num_traits::FromPrimitive;
        // p = t^2*u - 3 at t = 1/2, u = 4 -> 1/4*4 - 3 = -2
        let p = t().mul(&t()).mul(&u()).sub(&k(3));
        let vals = vec![
            BigRational::new(c(1), c(2)),
            BigRational::from_i64(4).unwrap(),
        ];
        assert_eq!(p.eval(&vals), BigRational::from_i64(-2).unwrap());
    }

    #[test]
    fn format_ordering_and_signs() {
        let names = vec!["t".to_string(), "u".to_string()];
        let p = t().mul(&t()).scale(&c(-3)).add(&u()).add(&k(5));
        // u was adjoined after t, so it leads.
        assert_eq!(p.format(&names), "u - 3*t^2 + 5");
        assert_eq!(MPoly::zero(2).format(&names), "0");
    }

    #[test]
    fn later_generator_dominates_order() {
        assert!(Mono(vec![0, 1]) > Mono(vec![5, 0]));
        assert!(Mono(vec![2, 1]) > Mono(vec![1, 1]));
    }
}
