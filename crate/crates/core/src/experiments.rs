//! Seeded Monte Carlo sweeps over network size or rewiring probability.
//!
//! Repetition `r` of every cell draws from `RngSeed::new(master_seed, r)`,
//! so a single repetition can be replayed in isolation. Repetitions run on
//! the rayon pool; results are gathered in repetition order, which keeps
//! sweep output byte-identical regardless of thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::{fit_quadratic, QuadraticFit};
use crate::generators::{
    ba_generate, random_binomial_generate, ws_generate, BaConfig, RandomBinomialConfig, RngSeed,
    WsConfig,
};
use crate::graph::Graph;
use crate::valuation::{metcalfe_value, zipf_value, ValuationMetric};

pub const DEFAULT_REPETITIONS: usize = 30;
pub const DEFAULT_K: usize = 4;
pub const DEFAULT_M: usize = 1;
pub const DEFAULT_EDGE_PROB: f64 = 0.3;

/// `0.00, 0.02, …, 0.50`.
pub fn default_p_grid() -> Vec<f64> {
    (0..=25).map(|i| i as f64 / 50.0).collect()
}

/// Network family of a plan. Watts-Strogatz rewiring probabilities live in
/// the plan's `p_grid`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Ws { k: usize },
    Ba { m: usize, seed_size: usize },
    Random { edge_prob: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Ws { .. } => "ws",
            Family::Ba { .. } => "ba",
            Family::Random { .. } => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub metric: ValuationMetric,
    pub repetitions: usize,
    pub master_seed: u64,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::config("plan has no sizes"));
        }
        if let Some(n) = self.sizes.iter().find(|&&n| n < 2) {
            return Err(Error::config(format!("plan size {n} below 2")));
        }
        if self.repetitions == 0 {
            return Err(Error::config("repetitions must be at least 1"));
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::config(format!("p_grid entry {p} outside [0, 1]")));
        }
        match self.family {
            Family::Ws { .. } if self.p_grid.is_empty() => {
                Err(Error::config("ws plan needs a non-empty p_grid"))
            }
            Family::Random { edge_prob } if !(0.0..=1.0).contains(&edge_prob) => Err(
                Error::config(format!("edge probability {edge_prob} outside [0, 1]")),
            ),
            _ => Ok(()),
        }
    }

    /// Builds one graph per repetition for a single (n, p) cell and values
    /// each. Generator configs are validated before any work starts.
    fn cell_values(&self, n: usize, p: f64) -> Result<Vec<f64>> {
        let generate: Box<dyn Fn(RngSeed) -> Graph + Sync> = match self.family {
            Family::Ws { k } => {
                let cfg = WsConfig::new(n, k, p)?;
                Box::new(move |s| ws_generate(&cfg, s))
            }
            Family::Ba { m, seed_size } => {
                let cfg = BaConfig::new(n, m, seed_size)?;
                Box::new(move |s| ba_generate(&cfg, s))
            }
            Family::Random { edge_prob } => {
                let cfg = RandomBinomialConfig::uniform(n, edge_prob)?;
                Box::new(move |s| random_binomial_generate(&cfg, s))
            }
        };
        let metric = self.metric;
        let seed = self.master_seed;
        (0..self.repetitions as u64)
            .into_par_iter()
            .map(|r| metric.evaluate(&generate(RngSeed::new(seed, r))))
            .collect()
    }
}

/// Flat JSON form of a plan. Missing fields take the harness defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub family: String,
    pub sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<ValuationMetric>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repetitions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
}

impl TryFrom<PlanFile> for ExperimentPlan {
    type Error = Error;

    fn try_from(f: PlanFile) -> Result<Self> {
        let family = match f.family.as_str() {
            "ws" => Family::Ws {
                k: f.k.unwrap_or(DEFAULT_K),
            },
            "ba" => {
                let m = f.m.unwrap_or(DEFAULT_M);
                Family::Ba {
                    m,
                    seed_size: f.seed_size.unwrap_or(m.max(3)),
                }
            }
            "random" => Family::Random {
                edge_prob: f.edge_prob.unwrap_or(DEFAULT_EDGE_PROB),
            },
            other => {
                return Err(Error::config(format!(
                    "unknown family {other:?} (expected ws, ba or random)"
                )))
            }
        };
        let metric = f.metric.unwrap_or(match family {
            Family::Ba { .. } => ValuationMetric::DegreeSum,
            _ => ValuationMetric::HopReach(2),
        });
        let p_grid = match family {
            Family::Ws { .. } => f.p_grid.unwrap_or_else(default_p_grid),
            _ => f.p_grid.unwrap_or_default(),
        };
        let plan = ExperimentPlan {
            family,
            sizes: f.sizes,
            p_grid,
            metric,
            repetitions: f.repetitions.unwrap_or(DEFAULT_REPETITIONS),
            master_seed: f.master_seed.unwrap_or(0),
        };
        plan.validate()?;
        Ok(plan)
    }
}

impl From<&ExperimentPlan> for PlanFile {
    fn from(plan: &ExperimentPlan) -> Self {
        let mut f = PlanFile {
            family: plan.family.name().to_owned(),
            sizes: plan.sizes.clone(),
            p_grid: (!plan.p_grid.is_empty()).then(|| plan.p_grid.clone()),
            k: None,
            m: None,
            seed_size: None,
            edge_prob: None,
            metric: Some(plan.metric),
            repetitions: Some(plan.repetitions),
            master_seed: Some(plan.master_seed),
        };
        match plan.family {
            Family::Ws { k } => f.k = Some(k),
            Family::Ba { m, seed_size } => {
                f.m = Some(m);
                f.seed_size = Some(seed_size);
            }
            Family::Random { edge_prob } => f.edge_prob = Some(edge_prob),
        }
        f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKey {
    /// Rows keyed by node count.
    Size,
    /// Rows keyed by rewiring probability.
    Probability,
}

/// One row: `(key, mean, std, zipf, metcalfe, ratio)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub key: f64,
    pub mean_value: f64,
    pub std_dev: f64,
    pub zipf: f64,
    pub metcalfe: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub key: SweepKey,
    pub metric: ValuationMetric,
    pub repetitions: usize,
    pub rows: Vec<SweepRow>,
}

/// Sandwich check: whether `n·log₁₀ n ≤ mean ≤ n²` for each row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichResult {
    pub sweep: SweepResult,
    pub within: Vec<bool>,
}

impl SandwichResult {
    pub fn all_within(&self) -> bool {
        self.within.iter().all(|&b| b)
    }
}

/// Mean and sample standard deviation (two-pass). A single sample has
/// zero spread.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

fn make_row(key: f64, n: usize, values: &[f64]) -> SweepRow {
    let (mean_value, std_dev) = mean_std(values);
    let zipf = zipf_value(n);
    SweepRow {
        key,
        mean_value,
        std_dev,
        zipf,
        metcalfe: metcalfe_value(n),
        ratio: mean_value / zipf,
    }
}

fn sorted_unique<T: Copy + PartialOrd>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("validated values are comparable"));
    v.dedup();
    v
}

/// Values the plan's family at each size. Watts-Strogatz plans must carry
/// exactly one rewiring probability.
pub fn run_size_sweep(plan: &ExperimentPlan) -> Result<SweepResult> {
    plan.validate()?;
    let p = match plan.family {
        Family::Ws { .. } => match plan.p_grid.as_slice() {
            [p] => *p,
            _ => {
                return Err(Error::config(
                    "a ws size sweep needs exactly one rewiring probability",
                ))
            }
        },
        _ => 0.0,
    };
    let rows = sorted_unique(plan.sizes.clone())
        .into_iter()
        .map(|n| Ok(make_row(n as f64, n, &plan.cell_values(n, p)?)))
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        key: SweepKey::Size,
        metric: plan.metric,
        repetitions: plan.repetitions,
        rows,
    })
}

/// Values Watts-Strogatz networks of one size across the plan's `p_grid`.
pub fn run_p_sweep(plan: &ExperimentPlan) -> Result<SweepResult> {
    plan.validate()?;
    if !matches!(plan.family, Family::Ws { .. }) {
        return Err(Error::config("a p sweep needs the ws family"));
    }
    let n = match plan.sizes.as_slice() {
        [n] => *n,
        _ => return Err(Error::config("a p sweep needs exactly one size")),
    };
    let rows = sorted_unique(plan.p_grid.clone())
        .into_iter()
        .map(|p| Ok(make_row(p, n, &plan.cell_values(n, p)?)))
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        key: SweepKey::Probability,
        metric: plan.metric,
        repetitions: plan.repetitions,
        rows,
    })
}

/// Quadratic fit of the ratio column against rewiring probability.
pub fn fit_fp_from_sweep(result: &SweepResult) -> Result<QuadraticFit> {
    if result.key != SweepKey::Probability {
        return Err(Error::input("f(p) fit needs a sweep keyed by probability"));
    }
    let points: Vec<(f64, f64)> = result.rows.iter().map(|r| (r.key, r.ratio)).collect();
    fit_quadratic(&points)
}

pub fn run_sandwich_check(plan: &ExperimentPlan) -> Result<SandwichResult> {
    if !matches!(plan.family, Family::Random { .. }) {
        return Err(Error::config("the sandwich check needs the random family"));
    }
    let sweep = run_size_sweep(plan)?;
    let within = sweep
        .rows
        .iter()
        .map(|r| r.zipf <= r.mean_value && r.mean_value <= r.metcalfe)
        .collect();
    Ok(SandwichResult { sweep, within })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws_plan(sizes: Vec<usize>, p_grid: Vec<f64>, reps: usize) -> ExperimentPlan {
        ExperimentPlan {
            family: Family::Ws { k: 4 },
            sizes,
            p_grid,
            metric: ValuationMetric::HopReach(2),
            repetitions: reps,
            master_seed: 42,
        }
    }

    #[test]
    fn mean_std_basics() {
        assert_eq!(mean_std(&[5.0]), (5.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn plan_validation() {
        let mut plan = ws_plan(vec![], vec![0.1], 3);
        assert!(plan.validate().is_err());
        plan.sizes = vec![1];
        assert!(plan.validate().is_err());
        plan.sizes = vec![10];
        plan.repetitions = 0;
        assert!(plan.validate().is_err());
        plan.repetitions = 1;
        plan.p_grid = vec![1.5];
        assert!(plan.validate().is_err());
        plan.p_grid = vec![];
        assert!(plan.validate().is_err());
        plan.p_grid = vec![0.5];
        assert!(plan.validate().is_ok());
    }

    #[test]
    fn lattice_row_is_exact() {
        let res = run_p_sweep(&ws_plan(vec![100], vec![0.0], 5)).unwrap();
        let row = res.rows[0];
        assert_eq!(row.mean_value, 800.0);
        assert_eq!(row.std_dev, 0.0);
        assert!((row.ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_shape_errors() {
        assert!(run_size_sweep(&ws_plan(vec![20, 30], vec![0.1, 0.2], 2)).is_err());
        assert!(run_p_sweep(&ws_plan(vec![20, 30], vec![0.1], 2)).is_err());
        let mut ba = ws_plan(vec![20], vec![0.1], 2);
        ba.family = Family::Ba { m: 1, seed_size: 3 };
        assert!(run_p_sweep(&ba).is_err());
        assert!(run_sandwich_check(&ba).is_err());
        // k too large for n surfaces as a config error
        assert!(run_size_sweep(&ws_plan(vec![4], vec![0.1], 2)).is_err());
    }

    #[test]
    fn rows_sorted_ascending() {
        let res = run_size_sweep(&ws_plan(vec![50, 20, 30, 20], vec![0.1], 2)).unwrap();
        let keys: Vec<f64> = res.rows.iter().map(|r| r.key).collect();
        assert_eq!(keys, vec![20.0, 30.0, 50.0]);
    }

    #[test]
    fn fp_fit_needs_probability_key() {
        let res = run_size_sweep(&ws_plan(vec![20, 30, 40], vec![0.1], 2)).unwrap();
        assert!(fit_fp_from_sweep(&res).is_err());
    }

    #[test]
    fn constant_ratio_fit() {
        let rows = (0..5)
            .map(|i| SweepRow {
                key: i as f64 / 10.0,
                mean_value: 0.0,
                std_dev: 0.0,
                zipf: 1.0,
                metcalfe: 1.0,
                ratio: 3.5,
            })
            .collect();
        let res = SweepResult {
            key: SweepKey::Probability,
            metric: ValuationMetric::Zipf,
            repetitions: 1,
            rows,
        };
        let fit = fit_fp_from_sweep(&res).unwrap();
        assert!(fit.a.abs() < 1e-9 && fit.b.abs() < 1e-9 && (fit.c - 3.5).abs() < 1e-9);
    }

    #[test]
    fn sandwich_edge_cases() {
        let mut plan = ExperimentPlan {
            family: Family::Random { edge_prob: 0.0 },
            sizes: vec![10, 20],
            p_grid: vec![],
            metric: ValuationMetric::HopReach(2),
            repetitions: 3,
            master_seed: 1,
        };
        let res = run_sandwich_check(&plan).unwrap();
        assert_eq!(res.within, vec![false, false]);
        plan.family = Family::Random { edge_prob: 1.0 };
        let res = run_sandwich_check(&plan).unwrap();
        assert_eq!(res.sweep.rows[1].mean_value, 380.0);
        assert!(res.all_within());
    }

    #[test]
    fn plan_file_defaults() {
        let f: PlanFile = serde_json::from_str(r#"{"family":"ba","sizes":[30,40]}"#).unwrap();
        let plan = ExperimentPlan::try_from(f).unwrap();
        assert_eq!(plan.family, Family::Ba { m: 1, seed_size: 3 });
        assert_eq!(plan.metric, ValuationMetric::DegreeSum);
        assert_eq!(plan.repetitions, DEFAULT_REPETITIONS);

        let f: PlanFile = serde_json::from_str(r#"{"family":"ws","sizes":[100]}"#).unwrap();
        let plan = ExperimentPlan::try_from(f).unwrap();
        assert_eq!(plan.p_grid.len(), 26);
        assert_eq!(plan.p_grid[3], 0.06);
        assert_eq!(plan.metric, ValuationMetric::HopReach(2));

        let bad: PlanFile = serde_json::from_str(r#"{"family":"tree","sizes":[3]}"#).unwrap();
        assert!(ExperimentPlan::try_from(bad).is_err());
        assert!(serde_json::from_str::<PlanFile>(r#"{"family":"ws","sizes":[3],"q":1}"#).is_err());
    }

    #[test]
    fn plan_file_round_trip() {
        let plan = ws_plan(vec![40, 50], vec![0.18], 7);
        let back = ExperimentPlan::try_from(PlanFile::from(&plan)).unwrap();
        assert_eq!(back, plan);
    }
}
