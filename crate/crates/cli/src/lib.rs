//! Argument parsing and command execution for the `netvalue` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use netvalue::experiments::{default_p_grid, DEFAULT_EDGE_PROB};
use netvalue::report::{self, sweep_json, sweep_svg, write_sandwich_csv, write_sweep_csv};
use netvalue::{
    fit_fp_from_sweep, fit_power_law, fit_quadratic, run_p_sweep, run_sandwich_check,
    run_size_sweep, value_report, BaConfig, DegreeHistogram, ExperimentPlan, Family,
    GeneratorConfig, Graph, PlanFile, RandomBinomialConfig, RngSeed, SweepResult, ValuationMetric,
    WsConfig,
};

#[derive(Debug, Parser)]
#[command(name = "netvalue", version, about = "Network value experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate one network and write it as graph JSON.
    Generate(GenerateArgs),
    /// Value a graph file under one metric.
    Value(ValueArgs),
    /// Run a size or rewiring-probability sweep.
    Sweep(SweepArgs),
    /// Fit a quadratic or a power law to two-column CSV data.
    Fit(FitArgs),
    /// Regenerate one of the published tables or figures as CSV.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Ws,
    Ba,
    Random,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    model: Model,
    #[arg(long)]
    n: usize,
    /// Local contacts per node (ws).
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Rewiring probability (ws).
    #[arg(long, value_parser = parse_probability, default_value_t = 0.0)]
    p: f64,
    /// Edges per new node (ba).
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Seed ring size (ba); defaults to max(m, 3).
    #[arg(long)]
    seed_size: Option<usize>,
    /// Edge probability (random).
    #[arg(long, value_parser = parse_probability, default_value_t = DEFAULT_EDGE_PROB)]
    edge_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValueArgs {
    #[arg(long)]
    graph: PathBuf,
    /// metcalfe | zipf | reed | degree-sum | hop:<h>
    #[arg(long, value_parser = parse_metric)]
    metric: ValuationMetric,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Size,
    P,
    Sandwich,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Experiment plan JSON; inline flags are used when omitted.
    #[arg(long, conflicts_with_all = ["family", "sizes", "p_grid", "k", "m", "seed_size", "edge_prob", "metric"])]
    plan: Option<PathBuf>,
    #[arg(long)]
    family: Option<Model>,
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', value_parser = parse_probability)]
    p_grid: Vec<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    seed_size: Option<usize>,
    #[arg(long, value_parser = parse_probability)]
    edge_prob: Option<f64>,
    #[arg(long, value_parser = parse_metric)]
    metric: Option<ValuationMetric>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sweep kind; inferred from the plan when omitted.
    #[arg(long)]
    mode: Option<SweepMode>,
    #[arg(long)]
    out: PathBuf,
    /// Also write a JSON mirror next to the CSV.
    #[arg(long)]
    json: bool,
    /// Also write an SVG plot next to the CSV.
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitModel {
    Quadratic,
    PowerLaw,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    model: FitModel,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["table", "figure"])))]
struct ReproduceArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    table: Option<u8>,
    #[arg(long, value_parser = parse_figure)]
    figure: Option<u8>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, default_value_t = netvalue::experiments::DEFAULT_REPETITIONS)]
    reps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    svg: bool,
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is outside [0, 1]"))
    }
}

fn parse_metric(s: &str) -> Result<ValuationMetric, String> {
    s.parse().map_err(|e: netvalue::Error| e.to_string())
}

fn parse_figure(s: &str) -> Result<u8, String> {
    match s {
        "2" => Ok(2),
        "8" => Ok(8),
        "13" => Ok(13),
        _ => Err(format!("figure {s:?} not available (expected 2, 8 or 13)")),
    }
}

/// A published table or figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Table(u8),
    Figure(u8),
}

impl Target {
    fn stem(&self) -> String {
        match self {
            Target::Table(t) => format!("table{t}"),
            Target::Figure(f) => format!("figure{f}"),
        }
    }
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum CliCommand {
    Generate {
        config: GeneratorConfig,
        seed: RngSeed,
        out: Option<PathBuf>,
    },
    Value {
        graph: PathBuf,
        metric: ValuationMetric,
        json: bool,
    },
    Sweep {
        plan: ExperimentPlan,
        mode: SweepMode,
        out: PathBuf,
        json: bool,
        svg: bool,
    },
    Fit {
        input: PathBuf,
        model: FitModel,
    },
    Reproduce {
        target: Target,
        out_dir: PathBuf,
        reps: usize,
        seed: u64,
        json: bool,
        svg: bool,
    },
}

/// Rejected command line. `Clap` carries clap's own rendering (including
/// `--help`, which is not a failure).
#[derive(Debug)]
pub enum UsageError {
    Clap(clap::Error),
    Invalid(String),
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UsageError::Clap(e) => write!(f, "{e}"),
            UsageError::Invalid(msg) => {
                write!(f, "error: {msg}\n\nFor more information, try '--help'.")
            }
        }
    }
}

impl std::error::Error for UsageError {}

fn invalid(e: impl std::fmt::Display) -> UsageError {
    UsageError::Invalid(e.to_string())
}

fn check_input_file(path: &Path) -> Result<(), UsageError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(invalid(format!(
            "input file {} does not exist",
            path.display()
        )))
    }
}

fn check_output_file(path: &Path) -> Result<(), UsageError> {
    if path.is_dir() {
        return Err(invalid(format!(
            "output path {} is a directory",
            path.display()
        )));
    }
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => Err(invalid(format!(
            "output directory {} does not exist",
            dir.display()
        ))),
        _ => Ok(()),
    }
}

/// Parses and validates a full argv (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<CliCommand, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(UsageError::Clap)?;
    match cli.command {
        Command::Generate(a) => {
            let config = match a.model {
                Model::Ws => GeneratorConfig::Ws(WsConfig::new(a.n, a.k, a.p).map_err(invalid)?),
                Model::Ba => GeneratorConfig::Ba(
                    BaConfig::new(a.n, a.m, a.seed_size.unwrap_or(a.m.max(3))).map_err(invalid)?,
                ),
                Model::Random => GeneratorConfig::RandomBinomial(
                    RandomBinomialConfig::uniform(a.n, a.edge_prob).map_err(invalid)?,
                ),
            };
            if let Some(out) = &a.out {
                check_output_file(out)?;
            }
            Ok(CliCommand::Generate {
                config,
                seed: RngSeed::new(a.seed, 0),
                out: a.out,
            })
        }
        Command::Value(a) => {
            check_input_file(&a.graph)?;
            Ok(CliCommand::Value {
                graph: a.graph,
                metric: a.metric,
                json: a.json,
            })
        }
        Command::Sweep(a) => sweep_command(a),
        Command::Fit(a) => {
            check_input_file(&a.input)?;
            Ok(CliCommand::Fit {
                input: a.input,
                model: a.model,
            })
        }
        Command::Reproduce(a) => {
            if a.reps == 0 {
                return Err(invalid("--reps must be at least 1"));
            }
            if a.out.is_file() {
                return Err(invalid(format!(
                    "{} is a file, not a directory",
                    a.out.display()
                )));
            }
            let target = match (a.table, a.figure) {
                (Some(t), None) => Target::Table(t),
                (None, Some(f)) => Target::Figure(f),
                _ => unreachable!("clap enforces exactly one target"),
            };
            Ok(CliCommand::Reproduce {
                target,
                out_dir: a.out,
                reps: a.reps,
                seed: a.seed,
                json: a.json,
                svg: a.svg,
            })
        }
    }
}

fn sweep_command(a: SweepArgs) -> Result<CliCommand, UsageError> {
    let mut file = match &a.plan {
        Some(path) => {
            check_input_file(path)?;
            let text = fs::read_to_string(path)
                .map_err(|e| invalid(format!("reading {}: {e}", path.display())))?;
            serde_json::from_str::<PlanFile>(&text)
                .map_err(|e| invalid(format!("plan {}: {e}", path.display())))?
        }
        None => {
            let family = a
                .family
                .ok_or_else(|| invalid("either --plan or --family is required"))?;
            PlanFile {
                family: match family {
                    Model::Ws => "ws",
                    Model::Ba => "ba",
                    Model::Random => "random",
                }
                .to_owned(),
                sizes: a.sizes.clone(),
                p_grid: (!a.p_grid.is_empty()).then(|| a.p_grid.clone()),
                k: a.k,
                m: a.m,
                seed_size: a.seed_size,
                edge_prob: a.edge_prob,
                metric: a.metric,
                repetitions: None,
                master_seed: None,
            }
        }
    };
    if a.reps.is_some() {
        file.repetitions = a.reps;
    }
    if a.seed.is_some() {
        file.master_seed = a.seed;
    }
    let plan = ExperimentPlan::try_from(file).map_err(invalid)?;
    let mode = a.mode.unwrap_or(match plan.family {
        Family::Ws { .. } if plan.sizes.len() == 1 && plan.p_grid.len() > 1 => SweepMode::P,
        _ => SweepMode::Size,
    });
    check_output_file(&a.out)?;
    Ok(CliCommand::Sweep {
        plan,
        mode,
        out: a.out,
        json: a.json,
        svg: a.svg,
    })
}

/// Writes through a temporary file in the target directory, renaming on
/// success so a failed run leaves nothing behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn sweep_csv(result: &SweepResult) -> anyhow::Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, result)?;
    Ok(buf)
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable") + "\n"
}

/// Output files of one command, collected before anything touches disk.
#[derive(Default)]
struct Outputs(Vec<(PathBuf, Vec<u8>)>);

impl Outputs {
    fn push(&mut self, path: PathBuf, bytes: impl Into<Vec<u8>>) {
        self.0.push((path, bytes.into()));
    }

    fn commit(self) -> anyhow::Result<()> {
        for (path, bytes) in &self.0 {
            write_atomic(path, bytes)?;
        }
        Ok(())
    }
}

/// Runs a validated command, printing results to `stdout` and diagnostics
/// to standard error.
pub fn execute(cmd: CliCommand, stdout: &mut dyn Write) -> anyhow::Result<()> {
    match cmd {
        CliCommand::Generate { config, seed, out } => {
            let graph = config.generate(seed);
            let text = graph.to_json() + "\n";
            match out {
                Some(path) => write_atomic(&path, text.as_bytes())?,
                None => stdout.write_all(text.as_bytes())?,
            }
        }
        CliCommand::Value {
            graph,
            metric,
            json,
        } => {
            let text = fs::read_to_string(&graph)
                .with_context(|| format!("reading {}", graph.display()))?;
            let g = Graph::from_json(&text)
                .with_context(|| format!("malformed graph file {}", graph.display()))?;
            let report = value_report(&g, metric)?;
            if json {
                stdout.write_all(json_line(&report).as_bytes())?;
            } else {
                writeln!(stdout, "{}", report.value)?;
            }
        }
        CliCommand::Sweep {
            plan,
            mode,
            out,
            json,
            svg,
        } => {
            let mut files = Outputs::default();
            let result = match mode {
                SweepMode::Size => run_size_sweep(&plan)?,
                SweepMode::P => run_p_sweep(&plan)?,
                SweepMode::Sandwich => {
                    let res = run_sandwich_check(&plan)?;
                    let mut buf = Vec::new();
                    write_sandwich_csv(&mut buf, &res)?;
                    files.push(out.clone(), buf);
                    res.sweep
                }
            };
            if mode != SweepMode::Sandwich {
                files.push(out.clone(), sweep_csv(&result)?);
            }
            let fit = match mode {
                SweepMode::P => {
                    let fit = fit_fp_from_sweep(&result)?;
                    stdout.write_all(json_line(&fit).as_bytes())?;
                    Some(fit)
                }
                _ => None,
            };
            if json {
                files.push(with_extension(&out, "json"), sweep_json(&result) + "\n");
            }
            if svg {
                files.push(
                    with_extension(&out, "svg"),
                    sweep_svg(
                        &format!("{} sweep", plan.family.name()),
                        &result,
                        fit.as_ref(),
                    ),
                );
            }
            files.commit()?;
        }
        CliCommand::Fit { input, model } => {
            let text = fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let points = report::read_xy_csv(text.as_slice())
                .with_context(|| format!("parsing {}", input.display()))?;
            let line = match model {
                FitModel::Quadratic => json_line(&fit_quadratic(&points)?),
                FitModel::PowerLaw => {
                    let mut pairs = Vec::with_capacity(points.len());
                    for (d, c) in points {
                        if d < 0.0 || c < 0.0 || d.fract() != 0.0 || c.fract() != 0.0 {
                            bail!("power-law input must be non-negative integer (degree, count) pairs");
                        }
                        pairs.push((d as usize, c as usize));
                    }
                    json_line(&fit_power_law(&DegreeHistogram::from_counts(pairs))?)
                }
            };
            stdout.write_all(line.as_bytes())?;
        }
        CliCommand::Reproduce {
            target,
            out_dir,
            reps,
            seed,
            json,
            svg,
        } => reproduce(target, &out_dir, reps, seed, json, svg, stdout)?,
    }
    Ok(())
}

fn ws_table_plan(p: f64, reps: usize, seed: u64) -> ExperimentPlan {
    ExperimentPlan {
        family: Family::Ws { k: 4 },
        sizes: (40..=100).step_by(10).collect(),
        p_grid: vec![p],
        metric: ValuationMetric::HopReach(2),
        repetitions: reps,
        master_seed: seed,
    }
}

fn ba_table_plan(reps: usize, seed: u64) -> ExperimentPlan {
    ExperimentPlan {
        family: Family::Ba { m: 1, seed_size: 3 },
        sizes: (30..=100).step_by(10).collect(),
        p_grid: vec![],
        metric: ValuationMetric::DegreeSum,
        repetitions: reps,
        master_seed: seed,
    }
}

fn banner(what: &str, metric: ValuationMetric) {
    eprintln!(
        "note: {what} uses the {metric} metric as its calculated value; \
         compare with the published numbers qualitatively, not cell by cell"
    );
}

fn reproduce(
    target: Target,
    out_dir: &Path,
    reps: usize,
    seed: u64,
    json: bool,
    svg: bool,
    stdout: &mut dyn Write,
) -> anyhow::Result<()> {
    let stem = target.stem();
    let csv_path = out_dir.join(format!("{stem}.csv"));
    let mut files = Outputs::default();
    let mut fit = None;
    let result = match target {
        Target::Table(t @ (1 | 2)) => {
            let p = if t == 1 { 0.18 } else { 0.32 };
            let plan = ws_table_plan(p, reps, seed);
            banner(&format!("table {t}"), plan.metric);
            let res = run_size_sweep(&plan)?;
            files.push(csv_path.clone(), sweep_csv(&res)?);
            res
        }
        Target::Table(_) | Target::Figure(13) => {
            let res = run_size_sweep(&ba_table_plan(reps, seed))?;
            files.push(csv_path.clone(), sweep_csv(&res)?);
            res
        }
        Target::Figure(2) => {
            let plan = ExperimentPlan {
                family: Family::Random {
                    edge_prob: DEFAULT_EDGE_PROB,
                },
                sizes: (20..=100).step_by(10).collect(),
                p_grid: vec![],
                metric: ValuationMetric::HopReach(2),
                repetitions: reps,
                master_seed: seed,
            };
            banner("figure 2", plan.metric);
            let res = run_sandwich_check(&plan)?;
            let mut buf = Vec::new();
            write_sandwich_csv(&mut buf, &res)?;
            files.push(csv_path.clone(), buf);
            res.sweep
        }
        Target::Figure(_) => {
            let plan = ExperimentPlan {
                family: Family::Ws { k: 4 },
                sizes: vec![100],
                p_grid: default_p_grid(),
                metric: ValuationMetric::HopReach(2),
                repetitions: reps,
                master_seed: seed,
            };
            banner("figure 8", plan.metric);
            let res = run_p_sweep(&plan)?;
            let f = fit_fp_from_sweep(&res)?;
            files.push(csv_path.clone(), sweep_csv(&res)?);
            files.push(out_dir.join(format!("{stem}_fit.json")), json_line(&f));
            stdout.write_all(json_line(&f).as_bytes())?;
            fit = Some(f);
            res
        }
    };
    if json {
        files.push(
            out_dir.join(format!("{stem}.json")),
            sweep_json(&result) + "\n",
        );
    }
    if svg {
        files.push(
            out_dir.join(format!("{stem}.svg")),
            sweep_svg(&stem, &result, fit.as_ref()),
        );
    }
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    files.commit()?;
    writeln!(stdout, "wrote {}", csv_path.display())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(line: &str) -> Result<CliCommand, UsageError> {
        parse_args(std::iter::once("netvalue").chain(line.split_whitespace()))
    }

    #[test]
    fn parses_generate() {
        let cmd =
            parse("generate --model ws --n 100 --k 4 --p 0.18 --seed 7 --out g.json").unwrap();
        assert_eq!(
            cmd,
            CliCommand::Generate {
                config: GeneratorConfig::Ws(WsConfig::new(100, 4, 0.18).unwrap()),
                seed: RngSeed::new(7, 0),
                out: Some("g.json".into()),
            }
        );
    }

    #[test]
    fn rejects_bad_generate() {
        assert!(matches!(
            parse("generate --model ws --n 100 --k 5 --p 0.1"),
            Err(UsageError::Invalid(_))
        ));
        assert!(matches!(
            parse("generate --model ws --n 100 --k 4 --p 1.5"),
            Err(UsageError::Clap(_))
        ));
        assert!(parse("generate --model ws --n ten").is_err());
        assert!(parse("generate --model ws --n 10 --bogus 1").is_err());
        assert!(parse("generate --n 10").is_err());
        assert!(parse("generate --model ba --n 10 --m 4 --seed-size 3").is_err());
    }

    #[test]
    fn value_needs_existing_graph() {
        assert!(matches!(
            parse("value --metric hop:2 --graph /nonexistent/g.json"),
            Err(UsageError::Invalid(_))
        ));
        assert!(parse("value --metric hop:0 --graph Cargo.toml").is_err());
        let cmd = parse("value --metric hop:2 --graph Cargo.toml").unwrap();
        assert!(matches!(
            cmd,
            CliCommand::Value {
                metric: ValuationMetric::HopReach(2),
                json: false,
                ..
            }
        ));
    }

    #[test]
    fn reproduce_targets() {
        assert!(matches!(
            parse("reproduce --table 3").unwrap(),
            CliCommand::Reproduce {
                target: Target::Table(3),
                reps: 30,
                seed: 42,
                ..
            }
        ));
        assert!(matches!(
            parse("reproduce --figure 13 --reps 3").unwrap(),
            CliCommand::Reproduce {
                target: Target::Figure(13),
                reps: 3,
                ..
            }
        ));
        assert!(parse("reproduce --table 4").is_err());
        assert!(parse("reproduce --figure 3").is_err());
        assert!(parse("reproduce").is_err());
        assert!(parse("reproduce --table 1 --figure 2").is_err());
        assert!(parse("reproduce --table 1 --reps 0").is_err());
    }

    #[test]
    fn sweep_inline_modes() {
        let cmd =
            parse("sweep --family ws --sizes 100 --p-grid 0,0.1,0.2 --reps 3 --out s.csv").unwrap();
        assert!(matches!(
            cmd,
            CliCommand::Sweep {
                mode: SweepMode::P,
                ..
            }
        ));
        let cmd = parse("sweep --family ba --sizes 30,40 --out s.csv").unwrap();
        match cmd {
            CliCommand::Sweep { plan, mode, .. } => {
                assert_eq!(mode, SweepMode::Size);
                assert_eq!(plan.metric, ValuationMetric::DegreeSum);
                assert_eq!(plan.sizes, vec![30, 40]);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("sweep --sizes 30 --out s.csv").is_err());
        assert!(parse("sweep --family ws --sizes 30 --p-grid 2 --out s.csv").is_err());
        assert!(parse("sweep --family ws --sizes 1 --out s.csv").is_err());
    }
}
