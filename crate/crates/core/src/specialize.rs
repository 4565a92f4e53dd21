//! Specialization of transcendental generators to rational values, and the
//! machine check that generic specialization preserves every incidence.
//!
//! Assignments only exist for purely transcendental towers: sending an
//! algebraic generator somewhere would mean choosing a root, which is
//! exactly the step this engine avoids. Non-generic assignments (vanishing
//! denominator, collapsing points or lines, degenerating lines) are hard
//! errors, never silently accepted, so a completed specialization is
//! trustworthy evidence.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::geometry::{Configuration, Line, Point};
use crate::incidence::LineEval;
use crate::tower::{towers_eq, FieldElement, Rational, Tower};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecializeError {
    #[error("generator {generator} is algebraic and cannot be assigned a value")]
    UnsupportedTower { generator: String },
    #[error("assignment was built for a different tower")]
    TowerMismatch,
    #[error("assignment misses generator {name}")]
    MissingGenerator { name: String },
    #[error("assignment names unknown generator {name}")]
    UnknownGenerator { name: String },
    #[error("assignment names generator {name} twice")]
    DuplicateGenerator { name: String },
    #[error("denominator of {expr} vanishes at the assignment")]
    DenominatorVanishes { expr: String },
    #[error("points {i} and {j} collapse under the assignment")]
    PointCollapse { i: usize, j: usize },
    #[error("lines {i} and {j} collapse under the assignment")]
    LineCollapse { i: usize, j: usize },
    #[error("line {index} degenerates under the assignment")]
    LineDegenerate { index: usize },
    #[error("no generic assignment found in {retries} attempts; last failure: {last}")]
    RetriesExhausted {
        retries: u32,
        last: Box<SpecializeError>,
    },
    #[error("trial count must be at least 1")]
    InvalidTrials,
}

/// A rational value for every generator of a purely transcendental tower,
/// in tower order.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    tower: Arc<Tower>,
    values: Vec<Rational>,
}

impl Assignment {
    /// Build from (name, value) pairs, which must cover the tower's
    /// generators exactly once each.
    pub fn new(
        tower: &Arc<Tower>,
        pairs: impl IntoIterator<Item = (String, Rational)>,
    ) -> Result<Assignment, SpecializeError> {
        if let Some(g) = tower.first_algebraic_name() {
            return Err(SpecializeError::UnsupportedTower {
                generator: g.to_string(),
            });
        }
        let mut slots: Vec<Option<Rational>> = vec![None; tower.generator_count()];
        for (name, value) in pairs {
            let idx = tower
                .generator_index(&name)
                .ok_or(SpecializeError::UnknownGenerator { name: name.clone() })?;
            if slots[idx].is_some() {
                return Err(SpecializeError::DuplicateGenerator { name });
            }
            slots[idx] = Some(value);
        }
        let mut values = Vec::with_capacity(slots.len());
        for (idx, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(v) => values.push(v),
                None => {
                    return Err(SpecializeError::MissingGenerator {
                        name: tower.generator_names()[idx].clone(),
                    })
                }
            }
        }
        Ok(Assignment {
            tower: Arc::clone(tower),
            values,
        })
    }

    /// In-order values, one per generator.
    pub fn from_values(
        tower: &Arc<Tower>,
        values: Vec<Rational>,
    ) -> Result<Assignment, SpecializeError> {
        if let Some(g) = tower.first_algebraic_name() {
            return Err(SpecializeError::UnsupportedTower {
                generator: g.to_string(),
            });
        }
        if values.len() != tower.generator_count() {
            let names = tower.generator_names();
            let name = names
                .get(values.len())
                .cloned()
                .unwrap_or_else(|| format!("#{}", values.len()));
            return Err(if values.len() < names.len() {
                SpecializeError::MissingGenerator { name }
            } else {
                SpecializeError::UnknownGenerator { name }
            });
        }
        Ok(Assignment {
            tower: Arc::clone(tower),
            values,
        })
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        Some(&self.values[self.tower.generator_index(name)?])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.tower
            .generator_names()
            .iter()
            .map(String::as_str)
            .zip(self.values.iter())
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.values.len()))?;
        for (name, value) in self.iter() {
            map.serialize_entry(name, &value.to_string())?;
        }
        map.end()
    }
}

/// Evaluate the element at the assignment, landing in the rationals.
pub fn specialize_element(
    e: &FieldElement,
    asg: &Assignment,
) -> Result<FieldElement, SpecializeError> {
    if !towers_eq(e.tower(), &asg.tower) {
        return Err(SpecializeError::TowerMismatch);
    }
    match e.eval_rational(&asg.values) {
        Some(v) => Ok(Tower::rationals().from_rational(&v)),
        None => Err(SpecializeError::DenominatorVanishes {
            expr: e.to_string(),
        }),
    }
}

/// Specialize every coordinate and coefficient of the configuration,
/// rejecting the assignment if it is non-generic for this data: a
/// denominator vanishes, two distinct points or lines collapse, or a line
/// degenerates to 0 = 0.
pub fn specialize_config(
    cfg: &Configuration,
    asg: &Assignment,
) -> Result<Configuration, SpecializeError> {
    if !towers_eq(cfg.tower(), &asg.tower) {
        return Err(SpecializeError::TowerMismatch);
    }
    let rat = Tower::rationals();

    let mut points = Vec::with_capacity(cfg.points().len());
    let mut seen_points = HashMap::with_capacity(cfg.points().len());
    for (i, p) in cfg.points().iter().enumerate() {
        let x = specialize_element(p.x(), asg)?;
        let y = specialize_element(p.y(), asg)?;
        if let Some(&j) = seen_points.get(&(x.clone(), y.clone())) {
            return Err(SpecializeError::PointCollapse { i: j, j: i });
        }
        seen_points.insert((x.clone(), y.clone()), i);
        points.push(Point::new(x, y));
    }

    let mut lines = Vec::with_capacity(cfg.lines().len());
    let mut seen_lines = HashMap::with_capacity(cfg.lines().len());
    for (i, l) in cfg.lines().iter().enumerate() {
        let a = specialize_element(l.a(), asg)?;
        let b = specialize_element(l.b(), asg)?;
        let c = specialize_element(l.c(), asg)?;
        if a.is_zero() && b.is_zero() {
            return Err(SpecializeError::LineDegenerate { index: i });
        }
        let line = Line::new(a, b, c).expect("degeneracy ruled out above");
        if let Some(&j) = seen_lines.get(&line) {
            return Err(SpecializeError::LineCollapse { i: j, j: i });
        }
        seen_lines.insert(line.clone(), i);
        lines.push(line);
    }

    Ok(Configuration::new(rat, points, lines).expect("specialized data is over one tower"))
}

/// Attempts at most this scale doubling, past which coefficients would
/// overflow the i64 sampling range.
const MAX_WIDENING: u32 = 40;

/// Sample assignments from a seeded deterministic stream until one is
/// generic for the configuration. `max_retries` bounds the total number of
/// attempts (a value of 0 still makes one). Each generator draws a
/// numerator from [-10^6, 10^6] and a denominator from [1, 100]; both
/// ranges double after every failed attempt.
pub fn generic_specialize(
    cfg: &Configuration,
    seed: u64,
    max_retries: u32,
) -> Result<(Configuration, Assignment), SpecializeError> {
    let tower = cfg.tower();
    if let Some(g) = tower.first_algebraic_name() {
        return Err(SpecializeError::UnsupportedTower {
            generator: g.to_string(),
        });
    }
    if tower.generator_count() == 0 {
        let asg = Assignment::from_values(tower, Vec::new()).expect("empty cover");
        return Ok((cfg.clone(), asg));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = max_retries.max(1);
    let mut last: Option<SpecializeError> = None;
    for attempt in 0..attempts {
        let scale = 1i64 << attempt.min(MAX_WIDENING);
        let values = (0..tower.generator_count())
            .map(|_| {
                let num = rng.gen_range(-1_000_000 * scale..=1_000_000 * scale);
                let den = rng.gen_range(1..=100 * scale);
                Rational::new(BigInt::from(num), BigInt::from(den))
            })
            .collect();
        let asg = Assignment::from_values(tower, values).expect("values cover the tower");
        match specialize_config(cfg, &asg) {
            Ok(spec) => return Ok((spec, asg)),
            Err(e) => last = Some(e),
        }
    }
    Err(SpecializeError::RetriesExhausted {
        retries: attempts,
        last: Box::new(last.expect("attempts >= 1")),
    })
}

/// One trial whose specialized incidence matrix differed from the
/// original, with every disagreeing (point, line) index pair.
#[derive(Debug, Clone, Serialize)]
pub struct TrialMismatch {
    pub trial: u32,
    pub assignment: Assignment,
    pub pairs: Vec<(usize, usize)>,
}

/// Outcome of repeated generic specialization: how many trials reproduced
/// the full incidence matrix exactly.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub trials: u32,
    pub passes: u32,
    pub mismatches: Vec<TrialMismatch>,
}

impl InvarianceReport {
    pub fn all_passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl Serialize for InvarianceReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("InvarianceReport", 4)?;
        st.serialize_field("trials", &self.trials)?;
        st.serialize_field("passes", &self.passes)?;
        st.serialize_field("all_passed", &self.all_passed())?;
        st.serialize_field("mismatches", &self.mismatches)?;
        st.end()
    }
}

fn incidence_matrix(cfg: &Configuration) -> Vec<bool> {
    let tower = cfg.tower();
    let m = cfg.points().len();
    let n = cfg.lines().len();
    let mut matrix = vec![false; m * n];
    for (j, l) in cfg.lines().iter().enumerate() {
        let ev = LineEval::new(l);
        for (i, p) in cfg.points().iter().enumerate() {
            matrix[i * n + j] = ev.hits(p, tower);
        }
    }
    matrix
}

/// Run `trials` independent generic specializations and compare the full
/// point-by-line incidence matrix entrywise each time. Per-trial seeds are
/// drawn from the master seed up front, so the report is deterministic for
/// a fixed seed no matter how trials are scheduled.
pub fn invariance_check(
    cfg: &Configuration,
    trials: u32,
    seed: u64,
) -> Result<InvarianceReport, SpecializeError> {
    if trials == 0 {
        return Err(SpecializeError::InvalidTrials);
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let trial_seeds: Vec<u64> = (0..trials).map(|_| master.gen()).collect();

    let before = incidence_matrix(cfg);
    let n = cfg.lines().len();

    let mut mismatches = Vec::new();
    for (t, trial_seed) in trial_seeds.into_iter().enumerate() {
        let (spec, asg) = generic_specialize(cfg, trial_seed, 32)?;
        let after = incidence_matrix(&spec);
        if before != after {
            let pairs = before
                .iter()
                .zip(after.iter())
                .enumerate()
                .filter(|(_, (b, a))| b != a)
                .map(|(idx, _)| (idx / n, idx % n))
                .collect();
            mismatches.push(TrialMismatch {
                trial: t as u32,
                assignment: asg,
                pairs,
            });
        }
    }
    Ok(InvarianceReport {
        trials,
        passes: trials - mismatches.len() as u32,
        mismatches,
    })
}
