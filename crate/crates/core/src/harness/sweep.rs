//! Parameter sweeps: one independent run per (axis value, seed).
//!
//! ```toml
//! format_version = 1
//! scenario = "paper_arena"     # bundled name, or a path relative to this file
//! seeds = [1, 2, 3]            # default 1..=10
//! out = "sweeps/comm_range"    # optional
//!
//! [axis]
//! kind = "comm_range"          # or "beta_gamma" ([[b, g], ...]), "team_size"
//! values = [0.4, 0.5, 0.6, 0.7, 0.8]
//!
//! [config]                     # overrides applied to every run
//! points_to_log = 30
//! ```

use std::fmt;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::{apply_overrides, Scenario};
use super::HarnessError;
use crate::engine::{log::write_timeline_csv, run_with, SimConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum SweepAxis {
    /// `(β, γ)` pairs.
    BetaGamma(Vec<(f64, f64)>),
    TeamSize(Vec<usize>),
    CommRange(Vec<f64>),
}

/// One point on a sweep axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisValue {
    BetaGamma(f64, f64),
    TeamSize(usize),
    CommRange(f64),
}

impl fmt::Display for AxisValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisValue::BetaGamma(b, g) => write!(f, "{b}/{g}"),
            AxisValue::TeamSize(n) => write!(f, "{n}"),
            AxisValue::CommRange(r) => write!(f, "{r}"),
        }
    }
}

impl SweepAxis {
    pub fn values(&self) -> Vec<AxisValue> {
        match self {
            SweepAxis::BetaGamma(v) => v.iter().map(|&(b, g)| AxisValue::BetaGamma(b, g)).collect(),
            SweepAxis::TeamSize(v) => v.iter().map(|&n| AxisValue::TeamSize(n)).collect(),
            SweepAxis::CommRange(v) => v.iter().map(|&r| AxisValue::CommRange(r)).collect(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::BetaGamma(_) => "beta_gamma",
            SweepAxis::TeamSize(_) => "team_size",
            SweepAxis::CommRange(_) => "comm_range",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub scenario: Scenario,
    pub axis: SweepAxis,
    pub seeds: Vec<u64>,
    /// Where [`write_sweep`] puts its files, if anywhere.
    pub out_dir: Option<PathBuf>,
    /// Config overrides applied to every run, before the axis value.
    pub overrides: toml::Table,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    format_version: u32,
    scenario: String,
    axis: SweepAxis,
    #[serde(default = "default_seeds")]
    seeds: Vec<u64>,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    config: toml::Table,
}

fn default_seeds() -> Vec<u64> {
    (1..=10).collect()
}

impl SweepSpec {
    pub fn new(scenario: Scenario, axis: SweepAxis, seeds: Vec<u64>) -> Self {
        SweepSpec {
            scenario,
            axis,
            seeds,
            out_dir: None,
            overrides: toml::Table::new(),
        }
    }

    pub fn with_override(mut self, key: &str, value: impl Into<toml::Value>) -> Self {
        self.overrides.insert(key.to_string(), value.into());
        self
    }

    /// Reads a sweep file. A relative scenario path (and `out`) is taken
    /// relative to the sweep file's directory.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let src = fs::read_to_string(path)?;
        let file: SweepFile = toml::from_str(&src).map_err(|e| HarnessError::Parse {
            line: e.span().map_or(0, |s| {
                src[..s.start.min(src.len())].matches('\n').count() + 1
            }),
            message: e.message().trim().to_string(),
        })?;
        if file.format_version != super::scenario::FORMAT_VERSION {
            return Err(HarnessError::InvalidScenario(format!(
                "unsupported format_version {}",
                file.format_version
            )));
        }
        let base = path.parent().unwrap_or(Path::new("."));
        let scenario_path = base.join(&file.scenario);
        let scenario = if scenario_path.exists() {
            Scenario::load(&scenario_path)?
        } else {
            Scenario::resolve(&file.scenario)?
        };
        let spec = SweepSpec {
            scenario,
            axis: file.axis,
            seeds: file.seeds,
            out_dir: file.out.map(|o| base.join(o)),
            overrides: file.config,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.axis.values().is_empty() {
            return Err(HarnessError::InvalidScenario(
                "sweep axis has no values".into(),
            ));
        }
        if self.seeds.is_empty() {
            return Err(HarnessError::InvalidScenario("sweep has no seeds".into()));
        }
        for v in self.axis.values() {
            self.config_for(v, self.seeds[0])?;
        }
        Ok(())
    }

    fn config_for(&self, value: AxisValue, seed: u64) -> Result<SimConfig, HarnessError> {
        let mut cfg = apply_overrides(&self.scenario.config, &self.overrides)?;
        cfg.seed = seed;
        match value {
            AxisValue::BetaGamma(b, g) => {
                cfg.beta = b;
                cfg.gamma = g;
            }
            AxisValue::CommRange(r) => cfg.r_comm = r,
            AxisValue::TeamSize(0) => {
                return Err(HarnessError::InvalidScenario(
                    "team size must be positive".into(),
                ))
            }
            AxisValue::TeamSize(_) => {}
        }
        cfg.validate().map_err(super::invalid)?;
        Ok(cfg)
    }

    fn run_one(
        &self,
        value: AxisValue,
        seed: u64,
    ) -> Result<(RunSummary, Vec<(f64, usize)>), HarnessError> {
        let cfg = self.config_for(value, seed)?;
        let mut scenario = self.scenario.clone();
        scenario.config = cfg.clone();
        if let AxisValue::TeamSize(n) = value {
            scenario = scenario.with_team_size(n);
        }
        let starts = scenario.starts_for_seed(seed)?;
        let out = run_with(scenario.world, &starts, cfg, false)?;
        let m = out.metrics;
        Ok((
            RunSummary {
                sim_time_s: m.sim_time,
                robot_collisions: m.robot_collision_count,
                logged_points: m.total_logged_points,
                logged_points_per_s: m.logged_points_per_second,
                terminated: m.terminated_all,
            },
            m.logged_points_timeline,
        ))
    }
}

/// The per-run numbers tabulated by a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub sim_time_s: f64,
    pub robot_collisions: u64,
    pub logged_points: usize,
    pub logged_points_per_s: f64,
    pub terminated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: AxisValue,
    pub seed: u64,
    /// The run's numbers, or why it failed.
    pub result: Result<RunSummary, String>,
    pub timeline: Vec<(f64, usize)>,
}

/// Mean, minimum and maximum over the successful runs of one axis value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Standard error of the mean; zero with fewer than two runs.
    pub std_err: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Stat> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std_err = if values.len() > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Some(Stat {
            mean,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            std_err,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisSummary {
    pub axis_value: AxisValue,
    pub runs: usize,
    pub failed: usize,
    pub terminated: usize,
    pub sim_time_s: Option<Stat>,
    pub robot_collisions: Option<Stat>,
    pub logged_points: Option<Stat>,
    pub logged_points_per_s: Option<Stat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResults {
    pub axis: &'static str,
    /// Sorted by axis position, then seed.
    pub rows: Vec<SweepRow>,
    pub summary: Vec<AxisSummary>,
}

/// Runs every (axis value, seed) pair in parallel. A failing run becomes a
/// row with an error instead of aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResults, HarnessError> {
    spec.validate()?;
    let values = spec.axis.values();
    let jobs: Vec<(usize, AxisValue, u64)> = values
        .iter()
        .enumerate()
        .flat_map(|(i, &v)| spec.seeds.iter().map(move |&s| (i, v, s)))
        .collect();
    let mut keyed: Vec<((usize, u64), SweepRow)> = jobs
        .par_iter()
        .map(|&(i, axis_value, seed)| {
            let (result, timeline) = match spec.run_one(axis_value, seed) {
                Ok((summary, timeline)) => (Ok(summary), timeline),
                Err(e) => (Err(e.to_string()), Vec::new()),
            };
            (
                (i, seed),
                SweepRow {
                    axis_value,
                    seed,
                    result,
                    timeline,
                },
            )
        })
        .collect();
    keyed.sort_by_key(|(k, _)| *k);
    let rows: Vec<SweepRow> = keyed.into_iter().map(|(_, r)| r).collect();
    let summary = values
        .iter()
        .map(|&v| summarize(v, rows.iter().filter(|r| r.axis_value == v)))
        .collect();
    Ok(SweepResults {
        axis: spec.axis.name(),
        rows,
        summary,
    })
}

fn summarize<'a>(axis_value: AxisValue, rows: impl Iterator<Item = &'a SweepRow>) -> AxisSummary {
    let rows: Vec<&SweepRow> = rows.collect();
    let ok: Vec<&RunSummary> = rows.iter().filter_map(|r| r.result.as_ref().ok()).collect();
    let stat =
        |f: &dyn Fn(&RunSummary) -> f64| Stat::of(&ok.iter().map(|r| f(r)).collect::<Vec<_>>());
    AxisSummary {
        axis_value,
        runs: rows.len(),
        failed: rows.len() - ok.len(),
        terminated: ok.iter().filter(|r| r.terminated).count(),
        sim_time_s: stat(&|r| r.sim_time_s),
        robot_collisions: stat(&|r| r.robot_collisions as f64),
        logged_points: stat(&|r| r.logged_points as f64),
        logged_points_per_s: stat(&|r| r.logged_points_per_s),
    }
}

#[derive(Serialize)]
struct MetricsRecord {
    axis: &'static str,
    axis_value: String,
    seed: u64,
    sim_time_s: Option<f64>,
    robot_collisions: Option<u64>,
    logged_points: Option<usize>,
    logged_points_per_s: Option<f64>,
    terminated: Option<bool>,
    error: String,
}

#[derive(Serialize)]
struct SummaryRecord {
    axis: &'static str,
    axis_value: String,
    runs: usize,
    failed: usize,
    terminated: usize,
    sim_time_s_mean: Option<f64>,
    sim_time_s_min: Option<f64>,
    sim_time_s_max: Option<f64>,
    robot_collisions_mean: Option<f64>,
    robot_collisions_min: Option<f64>,
    robot_collisions_max: Option<f64>,
    robot_collisions_std_err: Option<f64>,
    logged_points_mean: Option<f64>,
    logged_points_min: Option<f64>,
    logged_points_max: Option<f64>,
    logged_points_per_s_mean: Option<f64>,
    logged_points_per_s_min: Option<f64>,
    logged_points_per_s_max: Option<f64>,
}

/// Writes `metrics.csv` (one row per run), `summary.csv` (one row per axis
/// value) and `timelines/<axis value>_seed<seed>.csv` into `dir`.
pub fn write_sweep(results: &SweepResults, dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir.join("timelines"))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(dir.join("metrics.csv"))?));
    for r in &results.rows {
        let ok = r.result.as_ref().ok();
        w.serialize(MetricsRecord {
            axis: results.axis,
            axis_value: r.axis_value.to_string(),
            seed: r.seed,
            sim_time_s: ok.map(|m| m.sim_time_s),
            robot_collisions: ok.map(|m| m.robot_collisions),
            logged_points: ok.map(|m| m.logged_points),
            logged_points_per_s: ok.map(|m| m.logged_points_per_s),
            terminated: ok.map(|m| m.terminated),
            error: r.result.as_ref().err().cloned().unwrap_or_default(),
        })?;
        let name = format!(
            "{}_seed{}.csv",
            r.axis_value.to_string().replace('/', "_"),
            r.seed
        );
        write_timeline_csv(
            &r.timeline,
            BufWriter::new(File::create(dir.join("timelines").join(name))?),
        )?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(dir.join("summary.csv"))?));
    for s in &results.summary {
        let (t, c, p, l) = (
            s.sim_time_s,
            s.robot_collisions,
            s.logged_points,
            s.logged_points_per_s,
        );
        w.serialize(SummaryRecord {
            axis: results.axis,
            axis_value: s.axis_value.to_string(),
            runs: s.runs,
            failed: s.failed,
            terminated: s.terminated,
            sim_time_s_mean: t.map(|x| x.mean),
            sim_time_s_min: t.map(|x| x.min),
            sim_time_s_max: t.map(|x| x.max),
            robot_collisions_mean: c.map(|x| x.mean),
            robot_collisions_min: c.map(|x| x.min),
            robot_collisions_max: c.map(|x| x.max),
            robot_collisions_std_err: c.map(|x| x.std_err),
            logged_points_mean: p.map(|x| x.mean),
            logged_points_min: p.map(|x| x.min),
            logged_points_max: p.map(|x| x.max),
            logged_points_per_s_mean: l.map(|x| x.mean),
            logged_points_per_s_min: l.map(|x| x.min),
            logged_points_per_s_max: l.map(|x| x.max),
        })?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_arena() -> Scenario {
        let mut s = Scenario::paper_arena().unwrap();
        s.config.points_to_log = 5;
        s
    }

    #[test]
    fn stat_of_values() {
        let s = Stat::of(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.min, s.max), (2.0, 1.0, 3.0));
        assert!((s.std_err - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(Stat::of(&[4.0]).unwrap().std_err, 0.0);
        assert!(Stat::of(&[]).is_none());
    }

    #[test]
    fn beta_gamma_grid_gives_one_row_per_pair_and_seed() {
        let pairs: Vec<(f64, f64)> = [0.1, 0.5, 0.9]
            .iter()
            .flat_map(|&b| [0.1, 0.5, 0.9].map(|g| (b, g)))
            .collect();
        let spec = SweepSpec::new(small_arena(), SweepAxis::BetaGamma(pairs), vec![1, 2]);
        let res = run_sweep(&spec).unwrap();
        assert_eq!(res.rows.len(), 18);
        assert_eq!(res.summary.len(), 9);
        assert_eq!(res.rows[0].axis_value, AxisValue::BetaGamma(0.1, 0.1));
        assert_eq!((res.rows[0].seed, res.rows[1].seed), (1, 2));
    }

    #[test]
    fn failing_runs_become_rows() {
        let spec = SweepSpec::new(small_arena(), SweepAxis::TeamSize(vec![2, 400]), vec![1]);
        let res = run_sweep(&spec).unwrap();
        assert_eq!(res.rows.len(), 2);
        assert!(res.rows[0].result.is_ok());
        assert!(res.rows[1].result.is_err());
        assert_eq!(res.summary[1].failed, 1);
        assert!(res.summary[1].robot_collisions.is_none());
    }

    #[test]
    fn empty_axis_or_seeds_rejected() {
        let spec = SweepSpec::new(small_arena(), SweepAxis::CommRange(vec![]), vec![1]);
        assert!(run_sweep(&spec).is_err());
        let spec = SweepSpec::new(small_arena(), SweepAxis::CommRange(vec![0.5]), vec![]);
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn sweep_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.toml");
        fs::write(
            &path,
            "format_version = 1\nscenario = \"paper_arena\"\nout = \"o\"\n\n[axis]\nkind = \"comm_range\"\nvalues = [0.4, 0.8]\n\n[config]\npoints_to_log = 5\n",
        )
        .unwrap();
        let spec = SweepSpec::load(&path).unwrap();
        assert_eq!(spec.seeds, (1..=10).collect::<Vec<_>>());
        assert_eq!(spec.axis, SweepAxis::CommRange(vec![0.4, 0.8]));
        assert_eq!(
            spec.out_dir.as_deref(),
            Some(dir.path().join("o").as_path())
        );
        let spec = SweepSpec {
            seeds: vec![1, 2],
            ..spec
        };
        let res = run_sweep(&spec).unwrap();
        write_sweep(&res, spec.out_dir.as_ref().unwrap()).unwrap();
        let metrics = fs::read_to_string(dir.path().join("o/metrics.csv")).unwrap();
        assert_eq!(metrics.lines().count(), 5);
        assert!(metrics.starts_with(
            "axis,axis_value,seed,sim_time_s,robot_collisions,logged_points,logged_points_per_s,terminated,error\n"
        ));
        assert!(dir.path().join("o/timelines/0.4_seed1.csv").exists());
        assert_eq!(
            fs::read_to_string(dir.path().join("o/summary.csv"))
                .unwrap()
                .lines()
                .count(),
            3
        );
    }
}
