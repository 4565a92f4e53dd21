//! Exact incidence counting and line statistics.
//!
//! `count_incidences_naive` is the literal definition and serves as the
//! oracle. The engine path batches each line's coefficients over a common
//! denominator once, tests points against that single polynomial, and may
//! split the line list into contiguous blocks across threads; exact
//! addition is associative, so the count is bit-identical however the
//! work is partitioned.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{incident, line_through, Configuration, Line, Point};
use crate::tower::poly::MPoly;
use crate::tower::Tower;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("richness threshold must be at least 2, got {0}")]
    ThresholdTooSmall(u64),
}

/// Counting summary with the bound ratios evaluated in floating point at
/// the report boundary; the count itself is exact.
#[derive(Debug, Clone, Serialize)]
pub struct IncidenceReport {
    pub m: usize,
    pub n: usize,
    pub incidences: u64,
    pub st_bound: f64,
    pub st_ratio: f64,
    pub main_term_ratio: Option<f64>,
}

impl IncidenceReport {
    fn from_counts(m: usize, n: usize, incidences: u64) -> IncidenceReport {
        debug_assert!(incidences <= (m as u64) * (n as u64));
        let main_term = (m as f64).powf(2.0 / 3.0) * (n as f64).powf(2.0 / 3.0);
        let st_bound = main_term + m as f64 + n as f64;
        let st_ratio = if st_bound > 0.0 {
            incidences as f64 / st_bound
        } else {
            0.0
        };
        let main_term_ratio = (m > 0 && n > 0).then(|| incidences as f64 / main_term);
        IncidenceReport {
            m,
            n,
            incidences,
            st_bound,
            st_ratio,
            main_term_ratio,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RichLineRecord {
    pub line: Line,
    pub richness: u64,
}

impl Serialize for RichLineRecord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("RichLineRecord", 2)?;
        st.serialize_field(
            "line",
            &[
                self.line.a().to_string(),
                self.line.b().to_string(),
                self.line.c().to_string(),
            ],
        )?;
        st.serialize_field("richness", &self.richness)?;
        st.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RichReport {
    pub threshold: u64,
    pub records: Vec<RichLineRecord>,
    /// |records| / (m²/n³ + m/n), zero when the denominator vanishes.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeckReport {
    pub m: usize,
    pub max_richness: u64,
    pub connecting_lines: u64,
}

/// A line's coefficients scaled to integer polynomials over the common
/// denominator; the incidence test for a point then needs no fraction
/// canonicalization at all.
pub(crate) struct LineEval {
    a_s: MPoly,
    b_s: MPoly,
    c_s: MPoly,
}

impl LineEval {
    pub fn new(l: &Line) -> LineEval {
        let (a, b, c) = (l.a(), l.b(), l.c());
        let ad = a.den_poly();
        let bd = b.den_poly();
        let cd = c.den_poly();
        LineEval {
            a_s: a.num_poly().mul(bd).mul(cd),
            b_s: b.num_poly().mul(ad).mul(cd),
            c_s: c.num_poly().mul(ad).mul(bd),
        }
    }

    pub fn hits(&self, p: &Point, tower: &Tower) -> bool {
        let xn = p.x().num_poly();
        let xd = p.x().den_poly();
        let yn = p.y().num_poly();
        let yd = p.y().den_poly();
        let v = self
            .a_s
            .mul(xn)
            .mul(yd)
            .add(&self.b_s.mul(yn).mul(xd))
            .add(&self.c_s.mul(xd).mul(yd));
        if tower.has_algebraic() {
            tower.alg_reduce(v).0.is_zero()
        } else {
            v.is_zero()
        }
    }
}

/// The definition, evaluated literally: a full double loop over exact
/// incidence tests. Oracle for every faster path.
pub fn count_incidences_naive(cfg: &Configuration) -> u64 {
    let mut count = 0;
    for l in cfg.lines() {
        for p in cfg.points() {
            if incident(p, l) {
                count += 1;
            }
        }
    }
    count
}

/// Engine count with automatic thread choice.
pub fn count_incidences(cfg: &Configuration) -> IncidenceReport {
    let threads = std::thread::available_parallelism().map_or(1, |p| p.get());
    count_incidences_with_threads(cfg, threads)
}

/// Engine count over a fixed number of worker threads. The result is
/// identical for every thread count.
pub fn count_incidences_with_threads(cfg: &Configuration, threads: usize) -> IncidenceReport {
    let points = cfg.points();
    let lines = cfg.lines();
    let tower = cfg.tower();
    let evals: Vec<LineEval> = lines.iter().map(LineEval::new).collect();
    let threads = threads.max(1).min(evals.len().max(1));
    let count: u64 = if threads <= 1 || evals.len() < 2 {
        evals
            .iter()
            .map(|e| points.iter().filter(|p| e.hits(p, tower)).count() as u64)
            .sum()
    } else {
        let chunk = evals.len().div_ceil(threads);
        std::thread::scope(|s| {
            let handles: Vec<_> = evals
                .chunks(chunk)
                .map(|block| {
                    s.spawn(move || {
                        block
                            .iter()
                            .map(|e| points.iter().filter(|p| e.hits(p, tower)).count() as u64)
                            .sum::<u64>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        })
    };
    IncidenceReport::from_counts(points.len(), lines.len(), count)
}

/// All lines spanned by at least two of the given points, with exact
/// richness. Pairs are grouped by their canonical connecting line; the
/// richness is recomputed by membership, and the grouped pair count is
/// cross-checked against C(richness, 2).
pub fn connecting_lines(points: &[Point]) -> Vec<RichLineRecord> {
    let mut pair_counts: BTreeMap<Line, u64> = BTreeMap::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let l = line_through(&points[i], &points[j])
                .expect("deduplicated points are pairwise distinct");
            *pair_counts.entry(l).or_insert(0) += 1;
        }
    }
    pair_counts
        .into_iter()
        .map(|(line, pairs)| {
            let tower = line.tower().clone();
            let eval = LineEval::new(&line);
            let richness = points.iter().filter(|p| eval.hits(p, &tower)).count() as u64;
            debug_assert_eq!(pairs, richness * (richness - 1) / 2);
            RichLineRecord { line, richness }
        })
        .collect()
}

/// Lines of the configuration carrying at least `n` of its points.
pub fn rich_lines(cfg: &Configuration, n: u64) -> Result<RichReport, IncidenceError> {
    if n < 2 {
        return Err(IncidenceError::ThresholdTooSmall(n));
    }
    let tower = cfg.tower();
    let mut records = Vec::new();
    for line in cfg.lines() {
        let eval = LineEval::new(line);
        let richness = cfg.points().iter().filter(|p| eval.hits(p, tower)).count() as u64;
        if richness >= n {
            records.push(RichLineRecord {
                line: line.clone(),
                richness,
            });
        }
    }
    let m = cfg.points().len() as f64;
    let nf = n as f64;
    let denom = m * m / (nf * nf * nf) + m / nf;
    let ratio = if denom > 0.0 {
        records.len() as f64 / denom
    } else {
        0.0
    };
    Ok(RichReport {
        threshold: n,
        records,
        ratio,
    })
}

/// Connecting-line extremes: the maximum richness and the number of
/// distinct connecting lines.
pub fn beck_report(points: &[Point]) -> BeckReport {
    let records = connecting_lines(points);
    BeckReport {
        m: points.len(),
        max_richness: records.iter().map(|r| r.richness).max().unwrap_or(0),
        connecting_lines: records.len() as u64,
    }
}
