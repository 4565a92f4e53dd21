//! The JSON configuration file: a tower descriptor plus points, lines,
//! curves, and element sets, every value an element expression string.
//! Integers ride in decimal strings, so nothing is truncated on the way
//! through serde.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{monomial_key, parse_monomial_key, Curve, CurveError};
use crate::geometry::{Configuration, GeometryError, Line, Point};
use crate::sumproduct::{ElementSet, SumProductError};
use crate::tower::{parse_element, FieldError, Tower, TowerDescriptor};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed config file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Set(#[from] SumProductError),
    #[error("curve {index}: {key:?} is not a monomial key")]
    BadMonomial { index: usize, key: String },
}

/// On-disk document. `points` holds [x, y] pairs, `lines` [a, b, c]
/// triples of the equation a*x + b*y + c = 0, `curves` maps monomial keys
/// like "x^2*y" to coefficients, and `sets` lists element sets for the
/// sum-product commands. Every value is an expression in the tower's
/// generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub tower: TowerDescriptor,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<Vec<String>>,
}

/// A config file after parsing: live objects over one shared tower.
#[derive(Debug, Clone)]
pub struct ParsedConfig {
    pub tower: Arc<Tower>,
    pub configuration: Configuration,
    pub curves: Vec<Curve>,
    pub sets: Vec<ElementSet>,
}

pub fn parse_config(file: &ConfigFile) -> Result<ParsedConfig, ConfigError> {
    let tower = Tower::from_descriptor(&file.tower)?;

    let mut points = Vec::with_capacity(file.points.len());
    for [x, y] in &file.points {
        points.push(Point::new(
            parse_element(x, &tower)?,
            parse_element(y, &tower)?,
        ));
    }

    let mut lines = Vec::with_capacity(file.lines.len());
    for [a, b, c] in &file.lines {
        lines.push(Line::new(
            parse_element(a, &tower)?,
            parse_element(b, &tower)?,
            parse_element(c, &tower)?,
        )?);
    }

    let mut curves = Vec::with_capacity(file.curves.len());
    for (index, terms) in file.curves.iter().enumerate() {
        let mut parsed = Vec::with_capacity(terms.len());
        for (key, value) in terms {
            let mono = parse_monomial_key(key).ok_or_else(|| ConfigError::BadMonomial {
                index,
                key: key.clone(),
            })?;
            parsed.push((mono, parse_element(value, &tower)?));
        }
        curves.push(Curve::new(Arc::clone(&tower), parsed)?);
    }

    let mut sets = Vec::with_capacity(file.sets.len());
    for exprs in &file.sets {
        let elems = exprs
            .iter()
            .map(|e| parse_element(e, &tower))
            .collect::<Result<Vec<_>, _>>()?;
        sets.push(ElementSet::new(Arc::clone(&tower), elems)?);
    }

    let configuration = Configuration::new(Arc::clone(&tower), points, lines)?;
    Ok(ParsedConfig {
        tower,
        configuration,
        curves,
        sets,
    })
}

/// Serialize live objects back to the document form. Elements print in
/// canonical form, so render followed by parse reproduces the objects
/// exactly.
pub fn render_config(
    configuration: &Configuration,
    curves: &[Curve],
    sets: &[ElementSet],
) -> ConfigFile {
    ConfigFile {
        tower: configuration.tower().descriptor(),
        points: configuration
            .points()
            .iter()
            .map(|p| [p.x().to_string(), p.y().to_string()])
            .collect(),
        lines: configuration
            .lines()
            .iter()
            .map(|l| [l.a().to_string(), l.b().to_string(), l.c().to_string()])
            .collect(),
        curves: curves
            .iter()
            .map(|c| {
                c.terms()
                    .map(|((i, j), coeff)| (monomial_key(i, j), coeff.to_string()))
                    .collect()
            })
            .collect(),
        sets: sets
            .iter()
            .map(|s| s.iter().map(|e| e.to_string()).collect())
            .collect(),
    }
}

pub fn read_config(path: impl AsRef<Path>) -> Result<ConfigFile, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_config(path: impl AsRef<Path>, file: &ConfigFile) -> Result<(), ConfigError> {
    let mut text = serde_json::to_string_pretty(file)?;
    text.push('\n');
    Ok(std::fs::write(path, text)?)
}
