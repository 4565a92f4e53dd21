//! Seeded random data shared by the integration suites. Everything flows
//! from a ChaCha stream, so every failure reproduces from its seed.

#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use incidence_core::geometry::{Configuration, Line, Point};
use incidence_core::{FieldElement, Tower};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q() -> Arc<Tower> {
    Tower::rationals()
}

pub fn q_t() -> Arc<Tower> {
    Tower::rationals().with_transcendental("t").unwrap()
}

pub fn q_t1_t2() -> Arc<Tower> {
    Tower::rationals()
        .with_transcendental("t1")
        .unwrap()
        .with_transcendental("t2")
        .unwrap()
}

pub fn q_sqrt2() -> Arc<Tower> {
    let q = Tower::rationals();
    let m = [q.from_int(-2), q.zero(), q.one()];
    q.with_algebraic("s", &m).unwrap()
}

pub fn q_t_sqrt_t() -> Arc<Tower> {
    let qt = q_t();
    let m = [-qt.generator("t").unwrap(), qt.zero(), qt.one()];
    qt.with_algebraic("s", &m).unwrap()
}

/// The tower shapes the arithmetic must survive: plain rationals, one and
/// two indeterminates, a quadratic number field, and a mixed tower.
pub fn tower_shapes() -> Vec<(&'static str, Arc<Tower>)> {
    vec![
        ("Q", q()),
        ("Q(t)", q_t()),
        ("Q(t1,t2)", q_t1_t2()),
        ("Q[s^2=2]", q_sqrt2()),
        ("Q(t)[s^2=t]", q_t_sqrt_t()),
    ]
}

/// A small random polynomial expression in the tower's generators:
/// `extra_terms` monomials of degree <= 2 per generator plus a constant.
pub fn random_poly_elem(
    tw: &Arc<Tower>,
    rng: &mut ChaCha8Rng,
    extra_terms: usize,
) -> FieldElement {
    let gens = tw.generators();
    let mut acc = tw.from_int(rng.gen_range(-9..=9));
    for _ in 0..extra_terms {
        let mut term = tw.from_int(rng.gen_range(-9..=9));
        for g in &gens {
            for _ in 0..rng.gen_range(0..=2u32) {
                term = term.checked_mul(g).expect("same tower");
            }
        }
        acc = acc.checked_add(&term).expect("same tower");
    }
    acc
}

pub fn random_nonzero_poly_elem(
    tw: &Arc<Tower>,
    rng: &mut ChaCha8Rng,
    extra_terms: usize,
) -> FieldElement {
    loop {
        let e = random_poly_elem(tw, rng, extra_terms);
        if !e.is_zero() {
            return e;
        }
    }
}

/// A random field element: quotient of small random polynomials.
pub fn random_element(tw: &Arc<Tower>, rng: &mut ChaCha8Rng) -> FieldElement {
    let num = random_poly_elem(tw, rng, 2);
    let den = random_nonzero_poly_elem(tw, rng, 1);
    num.checked_div(&den).expect("nonzero denominator")
}

pub fn random_line(tw: &Arc<Tower>, rng: &mut ChaCha8Rng) -> Line {
    loop {
        let a = random_poly_elem(tw, rng, 1);
        let b = random_poly_elem(tw, rng, 1);
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let c = random_element(tw, rng);
        return Line::new(a, b, c).expect("not degenerate");
    }
}

/// A point on the line with a random free coordinate.
pub fn random_point_on(l: &Line, tw: &Arc<Tower>, rng: &mut ChaCha8Rng) -> Point {
    if !l.b().is_zero() {
        let x = tw.from_int(rng.gen_range(-20..=20));
        // y = -(a*x + c) / b
        let y = l
            .a()
            .checked_mul(&x)
            .and_then(|ax| ax.checked_add(l.c()))
            .and_then(|axc| axc.checked_div(l.b()))
            .map(|v| -&v)
            .expect("b is nonzero");
        Point::new(x, y)
    } else {
        // Vertical: x = -c / a.
        let x = -&l.c().checked_div(l.a()).expect("a is nonzero");
        let y = tw.from_int(rng.gen_range(-20..=20));
        Point::new(x, y)
    }
}

/// A configuration with planted incidences: a few anchor lines carrying
/// several points each, then noise points and extra unrelated lines.
/// Duplicates are possible by construction; Configuration drops them.
pub fn random_config(
    tw: &Arc<Tower>,
    rng: &mut ChaCha8Rng,
    max_points: usize,
    max_lines: usize,
) -> Configuration {
    let anchors = rng.gen_range(1..=3usize.min(max_lines));
    let mut lines: Vec<Line> = (0..anchors).map(|_| random_line(tw, rng)).collect();

    let mut points = Vec::new();
    for l in lines.clone() {
        for _ in 0..rng.gen_range(2..=5) {
            if points.len() >= max_points {
                break;
            }
            points.push(random_point_on(&l, tw, rng));
        }
    }
    while points.len() < max_points && rng.gen_bool(0.6) {
        points.push(Point::new(
            random_element(tw, rng),
            random_element(tw, rng),
        ));
    }
    while lines.len() < max_lines && rng.gen_bool(0.5) {
        lines.push(random_line(tw, rng));
    }
    Configuration::new(Arc::clone(tw), points, lines).expect("one tower throughout")
}

/// A point set with planted collinear clusters, for connecting-line
/// statistics.
pub fn random_point_set(tw: &Arc<Tower>, rng: &mut ChaCha8Rng, max_points: usize) -> Vec<Point> {
    let mut points = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let l = random_line(tw, rng);
        for _ in 0..rng.gen_range(3..=6) {
            if points.len() >= max_points {
                break;
            }
            points.push(random_point_on(&l, tw, rng));
        }
    }
    while points.len() < max_points && rng.gen_bool(0.7) {
        points.push(Point::new(
            tw.from_int(rng.gen_range(-30..=30)),
            tw.from_int(rng.gen_range(-30..=30)),
        ));
    }
    // Connecting lines are about distinct points.
    let mut unique = Vec::new();
    for p in points {
        if !unique.contains(&p) {
            unique.push(p);
        }
    }
    unique
}
