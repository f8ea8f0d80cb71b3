use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Per-coordinate domain constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Domain {
    #[default]
    Unconstrained,
    Positive,
    /// Open interval `(lo, hi)`.
    Interval(Rational, Rational),
}

impl Domain {
    pub fn contains(&self, x: f64) -> bool {
        match self {
            Domain::Unconstrained => x.is_finite(),
            Domain::Positive => x > 0.0 && x.is_finite(),
            Domain::Interval(lo, hi) => x > lo.to_f64() && x < hi.to_f64(),
        }
    }

    pub fn contains_exact(&self, x: &Rational) -> bool {
        match self {
            Domain::Unconstrained => true,
            Domain::Positive => *x > Rational::ZERO,
            Domain::Interval(lo, hi) => x > lo && x < hi,
        }
    }

    /// Sampling box: `[0.1, 2]` for positive coordinates, `[-2, 2]` otherwise,
    /// intersected with a declared interval. An interval disjoint from
    /// `[-2, 2]` falls back to its own interior.
    pub fn sample_range(&self) -> (f64, f64) {
        match self {
            Domain::Unconstrained => (-2.0, 2.0),
            Domain::Positive => (0.1, 2.0),
            Domain::Interval(lo, hi) => {
                let (lo, hi) = (lo.to_f64(), hi.to_f64());
                let (a, b) = (lo.max(-2.0), hi.min(2.0));
                if a < b {
                    (a, b)
                } else {
                    let pad = 0.05 * (hi - lo);
                    (lo + pad, hi - pad)
                }
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Unconstrained => write!(f, "unconstrained"),
            Domain::Positive => write!(f, "positive"),
            Domain::Interval(lo, hi) => write!(f, "({lo}, {hi})"),
        }
    }
}

/// A coordinate chart: ordered coordinate names with domain constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    name: String,
    coords: Vec<String>,
    domain: Vec<Domain>,
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "exp"
        && s != "log"
}

impl Chart {
    pub fn new<S: AsRef<str>>(name: &str, coords: &[S]) -> Result<Self> {
        let coords: Vec<String> = coords.iter().map(|c| c.as_ref().to_string()).collect();
        for (i, c) in coords.iter().enumerate() {
            if !valid_identifier(c) {
                return Err(Error::InvalidChart(format!("bad coordinate name `{c}`")));
            }
            if coords[..i].contains(c) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{c}`")));
            }
        }
        let domain = vec![Domain::Unconstrained; coords.len()];
        Ok(Chart {
            name: name.to_string(),
            coords,
            domain,
        })
    }

    pub fn with_domain(mut self, coord: &str, domain: Domain) -> Result<Self> {
        let i = self
            .index_of(coord)
            .ok_or_else(|| Error::UnknownIdentifier(coord.to_string()))?;
        if let Domain::Interval(lo, hi) = domain {
            if lo >= hi {
                return Err(Error::InvalidChart(format!("empty interval for `{coord}`")));
            }
        }
        self.domain[i] = domain;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &str {
        &self.coords[i]
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn index_of(&self, coord: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == coord)
    }

    /// Same coordinates and domains; the chart name is a label only.
    pub fn same_coordinates(&self, other: &Chart) -> bool {
        self.coords == other.coords && self.domain == other.domain
    }

    pub fn ensure_same(&self, other: &Chart) -> Result<()> {
        if self.same_coordinates(other) {
            Ok(())
        } else {
            Err(Error::ChartMismatch(self.name.clone(), other.name.clone()))
        }
    }

    pub fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                chart: self.name.clone(),
                expected: self.dim(),
                got: point.len(),
            });
        }
        for (i, x) in point.iter().enumerate() {
            if !self.domain[i].contains(*x) {
                return Err(Error::DomainViolation(self.coords[i].clone()));
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self, point: &[f64]) -> bool {
        self.check_point(point).is_ok()
    }

    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.domain
            .iter()
            .map(|d| {
                let (lo, hi) = d.sample_range();
                rng.random_range(lo..hi)
            })
            .collect()
    }

    /// A chart holding two suffixed copies of the coordinates (`a1, b1, a2, b2`),
    /// used for group laws.
    pub fn doubled(&self) -> Result<Chart> {
        let mut coords: Vec<String> = self.coords.iter().map(|c| format!("{c}1")).collect();
        coords.extend(self.coords.iter().map(|c| format!("{c}2")));
        let mut chart = Chart::new(&format!("{}x{}", self.name, self.name), &coords)?;
        chart.domain = self
            .domain
            .iter()
            .chain(self.domain.iter())
            .copied()
            .collect();
        Ok(chart)
    }

    /// Product chart with `other` appended; coordinate names must be distinct.
    pub fn product(&self, other: &Chart, name: &str) -> Result<Chart> {
        let coords: Vec<&String> = self.coords.iter().chain(other.coords.iter()).collect();
        let mut chart = Chart::new(name, &coords)?;
        chart.domain = self
            .domain
            .iter()
            .chain(other.domain.iter())
            .copied()
            .collect();
        Ok(chart)
    }
}

/// Serializable form of a chart, shared by the manifest and the Python bindings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChartSpec {
    pub name: String,
    pub coords: Vec<String>,
    #[serde(default)]
    pub domain: std::collections::BTreeMap<String, DomainSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainSpec {
    Keyword(String),
    Interval { interval: [String; 2] },
}

impl DomainSpec {
    pub fn to_domain(&self) -> Result<Domain> {
        match self {
            DomainSpec::Keyword(k) => match k.as_str() {
                "positive" => Ok(Domain::Positive),
                "unconstrained" => Ok(Domain::Unconstrained),
                other => Err(Error::InvalidChart(format!(
                    "unknown domain keyword `{other}`"
                ))),
            },
            DomainSpec::Interval { interval } => Ok(Domain::Interval(
                Rational::parse(&interval[0])?,
                Rational::parse(&interval[1])?,
            )),
        }
    }
}

impl ChartSpec {
    pub fn build(&self) -> Result<Chart> {
        let mut chart = Chart::new(&self.name, &self.coords)?;
        for (coord, spec) in &self.domain {
            chart = chart.with_domain(coord, spec.to_domain()?)?;
        }
        Ok(chart)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_reserved_names() {
        assert!(Chart::new("m", &["a", "a"]).is_err());
        assert!(Chart::new("m", &["exp"]).is_err());
        assert!(Chart::new("m", &["1x"]).is_err());
    }

    #[test]
    fn domain_checks_name_the_coordinate() {
        let chart = Chart::new("g", &["a", "b"])
            .unwrap()
            .with_domain("a", Domain::Positive)
            .unwrap();
        assert_eq!(
            chart.check_point(&[-1.0, 0.0]),
            Err(Error::DomainViolation("a".into()))
        );
        assert!(chart.with_domain("z", Domain::Positive).is_err());
    }

    #[test]
    fn interval_sampling_box() {
        let lo = Rational::int(1);
        let hi = Rational::int(5);
        assert_eq!(Domain::Interval(lo, hi).sample_range(), (1.0, 2.0));
        let far = Domain::Interval(Rational::int(10), Rational::int(20));
        let (a, b) = far.sample_range();
        assert!(a > 10.0 && b < 20.0);
    }
}
