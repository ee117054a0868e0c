//! Network value laws and structural value counts.
//!
//! Logarithms are base 10 throughout, so `zipf_value(100) == 200`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// How to value a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValuationMetric {
    /// `n²`
    Metcalfe,
    /// `n·log₁₀ n`
    Zipf,
    /// `2ⁿ`
    Reed,
    /// `Σ degree(v)`
    DegreeSum,
    /// `Σ reach_within(v, h)`, with `h ≥ 1`.
    HopReach(usize),
}

impl ValuationMetric {
    pub fn hop(h: usize) -> Result<Self> {
        if h == 0 {
            return Err(Error::input("hop budget must be at least 1"));
        }
        Ok(ValuationMetric::HopReach(h))
    }

    /// Formula laws depend on `n` only.
    pub fn is_formula(&self) -> bool {
        matches!(
            self,
            ValuationMetric::Metcalfe | ValuationMetric::Zipf | ValuationMetric::Reed
        )
    }

    pub fn evaluate(&self, g: &Graph) -> Result<f64> {
        let n = g.node_count();
        Ok(match *self {
            ValuationMetric::Metcalfe => metcalfe_value(n),
            ValuationMetric::Zipf => zipf_value(n),
            ValuationMetric::Reed => reed_value(n),
            ValuationMetric::DegreeSum => degree_sum_value(g),
            ValuationMetric::HopReach(h) => hop_reach_value(g, h)?,
        })
    }
}

impl fmt::Display for ValuationMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuationMetric::Metcalfe => f.write_str("metcalfe"),
            ValuationMetric::Zipf => f.write_str("zipf"),
            ValuationMetric::Reed => f.write_str("reed"),
            ValuationMetric::DegreeSum => f.write_str("degree-sum"),
            ValuationMetric::HopReach(h) => write!(f, "hop:{h}"),
        }
    }
}

impl FromStr for ValuationMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "metcalfe" => Ok(ValuationMetric::Metcalfe),
            "zipf" => Ok(ValuationMetric::Zipf),
            "reed" => Ok(ValuationMetric::Reed),
            "degree-sum" => Ok(ValuationMetric::DegreeSum),
            _ => {
                let h = s
                    .strip_prefix("hop:")
                    .and_then(|h| h.parse::<usize>().ok())
                    .ok_or_else(|| {
                        Error::input(format!(
                            "unknown metric {s:?} (expected metcalfe, zipf, reed, degree-sum or hop:<h>)"
                        ))
                    })?;
                ValuationMetric::hop(h)
            }
        }
    }
}

impl Serialize for ValuationMetric {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ValuationMetric {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One cell of a value comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueReport {
    pub metric: ValuationMetric,
    pub value: f64,
    pub n: usize,
    /// `log₂` of the value, reported for Reed where the value itself may
    /// overflow to infinity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log2_value: Option<f64>,
}

pub fn value_report(g: &Graph, metric: ValuationMetric) -> Result<ValueReport> {
    let n = g.node_count();
    Ok(ValueReport {
        metric,
        value: metric.evaluate(g)?,
        n,
        log2_value: (metric == ValuationMetric::Reed).then(|| reed_log2_value(n)),
    })
}

pub fn metcalfe_value(n: usize) -> f64 {
    let n = n as f64;
    n * n
}

/// `n·log₁₀ n`; zero for `n ≤ 1`.
pub fn zipf_value(n: usize) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let n = n as f64;
    n * n.log10()
}

/// `2ⁿ`, evaluated as `exp2` of its logarithm. Saturates to infinity past
/// `n = 1023`; use [`reed_log2_value`] there.
pub fn reed_value(n: usize) -> f64 {
    reed_log2_value(n).exp2()
}

pub fn reed_log2_value(n: usize) -> f64 {
    n as f64
}

pub fn degree_sum_value(g: &Graph) -> f64 {
    (2 * g.edge_count()) as f64
}

pub fn hop_reach_value(g: &Graph, h: usize) -> Result<f64> {
    if h == 0 {
        return Err(Error::input("hop budget must be at least 1"));
    }
    Ok(g.total_reach(h) as f64)
}

/// A value expressed as a multiple of `n·log₁₀ n`.
pub fn ratio_to_zipf(value: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::input(format!(
            "value ratio needs n >= 2 (n log n vanishes), got n = {n}"
        )));
    }
    Ok(value / zipf_value(n))
}

pub fn value_ratio(g: &Graph, metric: ValuationMetric) -> Result<f64> {
    ratio_to_zipf(metric.evaluate(g)?, g.node_count())
}
