//! Seeded Monte Carlo experiments in the critical window
//! `p = (k ln n + c) / n`.
//!
//! Every trial draws its own generator from `trial_seed(master_seed, i)`,
//! trials run on a rayon pool, and results are folded in trial-index order,
//! so a report depends only on the configuration and not on the number of
//! worker threads.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::betti_top;
use crate::complex::{binomial, check_capacity, sample_growth_order, sample_ynp, GrowthOrder, SimplicialComplexK};
use crate::connectivity::{components, is_hypergraph_connected};
use crate::error::{Error, Result};
use crate::oracle::{
    brute_betti, survey_cocycles, write_survey_jsonl, CocycleSurveyRecord, StructureReport, MAX_BRUTE_FACES,
    MAX_SURVEY_VERTICES,
};
use crate::process::{coincidence_flags, run_hitting_times, HittingTimes};

/// Euler-Mascheroni constant, the mean of a standard Gumbel variable.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    BettiDist,
    VanishSweep,
    Hitting,
    IsolatedDist,
    OracleCheck,
}

/// Either the window offset `c` or an explicit face probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    C(f64),
    P(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub window: Window,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub c_grid: Vec<f64>,
    /// Upper end of the vertex range for the oracle check, which runs
    /// `n..=n_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Worker threads; 0 uses the rayon default. Not part of the report.
    #[serde(skip)]
    pub threads: usize,
    /// Where complexes with `beta != isolated_count` are written.
    #[serde(skip)]
    pub dump_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(mode: Mode, n: usize, k: usize, trials: usize, master_seed: u64) -> Self {
        ExperimentConfig {
            mode,
            n,
            k,
            trials,
            master_seed,
            window: Window::C(0.0),
            c_grid: Vec::new(),
            n_max: None,
            threads: 0,
            dump_dir: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.k == 0 {
            return fail("k must be at least 1".into());
        }
        if self.n <= self.k {
            return fail(format!("need n > k, got n = {}, k = {}", self.n, self.k));
        }
        match self.window {
            Window::C(c) if !c.is_finite() => return fail(format!("window offset {c} is not finite")),
            Window::P(p) if !(0.0..=1.0).contains(&p) => return fail(format!("probability {p} outside [0, 1]")),
            _ => {}
        }
        if self.mode == Mode::VanishSweep {
            if self.c_grid.is_empty() {
                return fail("vanish sweep needs a non-empty c grid".into());
            }
            if let Some(c) = self.c_grid.iter().find(|c| !c.is_finite()) {
                return fail(format!("grid value {c} is not finite"));
            }
        }
        if self.mode == Mode::OracleCheck {
            if let Some(max) = self.n_max {
                if max < self.n {
                    return fail(format!("n_max {max} below n {}", self.n));
                }
            }
        }
        Ok(())
    }
}

/// `(k ln n + c) / n`, clamped into `[0, 1]`; the flag reports clamping.
pub fn window_probability(n: usize, k: usize, c: f64) -> (f64, bool) {
    let p = (k as f64 * (n as f64).ln() + c) / n as f64;
    let clamped = p.clamp(0.0, 1.0);
    (clamped, clamped != p)
}

/// The window offset that corresponds to `p`.
pub fn window_offset(n: usize, k: usize, p: f64) -> f64 {
    n as f64 * p - k as f64 * (n as f64).ln()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Limiting mean `e^{-c} / k!` of the isolated-face count and of `beta^{k-1}`.
pub fn poisson_lambda(c: f64, k: usize) -> f64 {
    (-c).exp() / factorial(k)
}

/// Exact mean of the isolated `(k - 1)`-face count in `Y_k(n, p)`: each of
/// the `C(n, k)` faces lies in `n - k` potential `k`-faces.
pub fn exact_isolated_mean(n: usize, k: usize, p: f64) -> f64 {
    binomial(n, k) as f64 * (1.0 - p).powi((n - k) as i32)
}

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master_seed`.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    mix64(master_seed ^ mix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

/// Generator of trial `index`.
pub fn trial_rng(master_seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master_seed, index as u64))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isolated: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connected: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub giant_plus_isolated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m3: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonFit {
    pub lambda: f64,
    /// Last bucket; it carries the Poisson tail mass beyond it.
    pub truncation: usize,
    pub tv_distance: f64,
    /// Empirical `E[(X)_1]`, `E[(X)_2]`.
    pub factorial_moments: [f64; 2],
    /// `lambda`, `lambda^2`.
    pub poisson_factorial_moments: [f64; 2],
}

/// Compares a histogram (`histogram[i]` = number of trials with value `i`)
/// with Poisson(`lambda`) truncated at the largest observed value plus 5.
pub fn poisson_fit(histogram: &[u64], lambda: f64) -> Result<PoissonFit> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("Poisson mean must be positive, got {lambda}")));
    }
    let total: u64 = histogram.iter().sum();
    if total == 0 {
        return Err(Error::InvalidInput("empty histogram".into()));
    }
    let max_observed = histogram.iter().rposition(|&h| h > 0).unwrap();
    let truncation = max_observed + 5;

    let mut pmf = Vec::with_capacity(truncation + 1);
    let mut term = (-lambda).exp();
    for i in 0..truncation {
        pmf.push(term);
        term *= lambda / (i + 1) as f64;
    }
    let head: f64 = pmf.iter().sum();
    pmf.push((1.0 - head).max(0.0));

    let t = total as f64;
    let tv = 0.5
        * pmf
            .iter()
            .enumerate()
            .map(|(i, &q)| (histogram.get(i).copied().unwrap_or(0) as f64 / t - q).abs())
            .sum::<f64>();
    let moment = |f: fn(f64) -> f64| {
        histogram
            .iter()
            .enumerate()
            .map(|(i, &h)| f(i as f64) * h as f64)
            .sum::<f64>()
            / t
    };
    Ok(PoissonFit {
        lambda,
        truncation,
        tv_distance: tv,
        factorial_moments: [moment(|x| x), moment(|x| x * (x - 1.0))],
        poisson_factorial_moments: [lambda, lambda * lambda],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub histogram: Vec<u64>,
    pub mean: f64,
    pub variance: f64,
}

impl Distribution {
    pub fn from_values(values: impl IntoIterator<Item = usize>) -> Self {
        let mut histogram: Vec<u64> = Vec::new();
        for v in values {
            if histogram.len() <= v {
                histogram.resize(v + 1, 0);
            }
            histogram[v] += 1;
        }
        let t = histogram.iter().sum::<u64>().max(1) as f64;
        let mean = histogram.iter().enumerate().map(|(i, &h)| i as f64 * h as f64).sum::<f64>() / t;
        let variance = histogram
            .iter()
            .enumerate()
            .map(|(i, &h)| (i as f64 - mean).powi(2) * h as f64)
            .sum::<f64>()
            / t;
        Distribution {
            histogram,
            mean,
            variance,
        }
    }

    pub fn frequency(&self, value: usize) -> f64 {
        let t = self.histogram.iter().sum::<u64>().max(1) as f64;
        self.histogram.get(value).copied().unwrap_or(0) as f64 / t
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsolatedSummary {
    pub distribution: Distribution,
    /// `e^{-c} / k!`
    pub lambda_limit: f64,
    /// `C(n, k) (1 - p)^{n - k}`
    pub lambda_exact: f64,
    /// `|lambda_exact - lambda_limit|`
    pub lambda_gap: f64,
    /// Binomial standard deviation of the empirical mean around
    /// `lambda_exact`.
    pub sigma_of_mean: f64,
    pub fit_exact: Option<PoissonFit>,
    pub fit_limit: Option<PoissonFit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BettiSummary {
    pub distribution: Distribution,
    pub poisson_lambda: f64,
    pub vanish_frequency: f64,
    /// `exp(-e^{-c} / k!)`
    pub predicted_vanish_probability: f64,
    pub fit: Option<PoissonFit>,
    pub beta_equals_isolated_frequency: f64,
    pub beta_isolated_mismatches: Vec<usize>,
    /// Trials with `beta < isolated` although fewer than `n - k + 1` faces
    /// are isolated. Expected to be zero.
    pub beta_below_isolated: usize,
    pub connected_frequency: f64,
    pub giant_plus_isolated_frequency: f64,
    /// Trials with `beta == 0` that are not hypergraph connected.
    pub vanishing_but_disconnected: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingSummary {
    pub freq12: f64,
    pub freq123: f64,
    pub ordering_violations: usize,
    pub m1: Distribution,
    /// `C(n, k + 1) (k ln n + c) / n` at `c = 0`.
    pub window_scale: f64,
    /// Mean of `n M1 / C(n, k + 1) - k ln n`, the window offset at which
    /// the last isolated face disappears.
    pub offset_at_m1_mean: f64,
    /// Mean of that offset under the limit law `P(C <= c) = exp(-e^{-c}/k!)`.
    pub offset_limit_mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c: f64,
    pub p: f64,
    pub p_clamped: bool,
    pub vanish_frequency: f64,
    pub predicted_vanish_probability: f64,
    pub connected_frequency: f64,
    pub mean_beta: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub complexes: usize,
    pub brute_checked: usize,
    pub brute_skipped: usize,
    /// Trial indices where elimination and enumeration disagree.
    pub betti_mismatches: Vec<usize>,
    /// Complexes with vanishing cohomology.
    pub vanishing: usize,
    /// Vanishing cohomology without hypergraph connectivity.
    pub connectivity_violations: Vec<usize>,
    pub surveyed: usize,
    pub structure: StructureReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default)]
    pub warnings: Vec<String>,
    pub trials: Vec<TrialRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<BettiSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isolated: Option<IsolatedSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hitting: Option<HittingSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
}

impl ExperimentReport {
    fn new(config: &ExperimentConfig) -> Self {
        ExperimentReport {
            config: config.clone(),
            p: None,
            c: None,
            warnings: Vec::new(),
            trials: Vec::new(),
            betti: None,
            isolated: None,
            hitting: None,
            sweep: None,
            oracle: None,
            wall_time_secs: None,
        }
    }

    /// Pretty JSON; wall time is left out unless `timing` is set so that
    /// reruns produce identical bytes.
    pub fn to_json(&self, timing: bool) -> Result<String> {
        if timing {
            Ok(serde_json::to_string_pretty(self)?)
        } else {
            let stripped = ExperimentReport {
                wall_time_secs: None,
                ..self.clone()
            };
            Ok(serde_json::to_string_pretty(&stripped)?)
        }
    }

    /// `trial,beta,isolated,m1,m2,m3`; absent values are empty fields.
    pub fn write_trials_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["trial", "beta", "isolated", "m1", "m2", "m3"])?;
        for t in &self.trials {
            w.serialize((t.trial, t.beta, t.isolated, t.m1, t.m2, t.m3))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Parses `start:end:step` into the inclusive grid `start, start + step, ...`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("grid {text:?} is not start:end:step"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [start, end, step] = parts[..] else {
        return Err(bad());
    };
    if step.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !start.is_finite() || !end.is_finite() || end < start {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

fn run_trials<T: Send>(threads: usize, trials: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    pool.install(|| (0..trials).into_par_iter().map(f).collect())
}

fn resolve_window(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> (f64, f64) {
    let (p, c) = match cfg.window {
        Window::C(c) => {
            let (p, clamped) = window_probability(cfg.n, cfg.k, c);
            if clamped {
                report.warnings.push(format!(
                    "(k ln n + c) / n leaves [0, 1] at n = {}, k = {}, c = {c}; clamped to {p}",
                    cfg.n, cfg.k
                ));
            }
            (p, c)
        }
        Window::P(p) => (p, window_offset(cfg.n, cfg.k, p)),
    };
    report.p = Some(p);
    report.c = Some(c);
    (p, c)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match cfg.mode {
        Mode::BettiDist => run_betti_experiment(cfg),
        Mode::IsolatedDist => run_isolated_experiment(cfg),
        Mode::Hitting => run_hitting_experiment(cfg),
        Mode::VanishSweep => run_sweep(cfg),
        Mode::OracleCheck => run_oracle_check(cfg),
    }
}

fn check_mode(cfg: &ExperimentConfig, expected: Mode) -> Result<()> {
    cfg.validate()?;
    if cfg.mode != expected {
        return Err(Error::Config(format!("expected mode {expected:?}, got {:?}", cfg.mode)));
    }
    check_capacity(cfg.n_max.unwrap_or(cfg.n).max(cfg.n), cfg.k)
}

fn fraction(count: usize, total: usize) -> f64 {
    count as f64 / total as f64
}

/// Regenerates the complex of a betti/isolated trial.
pub fn trial_complex(cfg: &ExperimentConfig, p: f64, trial: usize) -> Result<SimplicialComplexK> {
    sample_ynp(cfg.n, cfg.k, p, &mut trial_rng(cfg.master_seed, trial))
}

/// Regenerates the growth order of a hitting trial.
pub fn trial_growth_order(cfg: &ExperimentConfig, trial: usize) -> Result<GrowthOrder> {
    sample_growth_order(cfg.n, cfg.k, &mut trial_rng(cfg.master_seed, trial))
}

fn isolated_summary(cfg: &ExperimentConfig, p: f64, c: f64, values: &[usize]) -> Result<IsolatedSummary> {
    let distribution = Distribution::from_values(values.iter().copied());
    let lambda_limit = poisson_lambda(c, cfg.k);
    let lambda_exact = exact_isolated_mean(cfg.n, cfg.k, p);
    let faces = binomial(cfg.n, cfg.k) as f64;
    let q = lambda_exact / faces;
    let fit = |lambda: f64| {
        if lambda > 0.0 {
            poisson_fit(&distribution.histogram, lambda).map(Some)
        } else {
            Ok(None)
        }
    };
    Ok(IsolatedSummary {
        fit_exact: fit(lambda_exact)?,
        fit_limit: fit(lambda_limit)?,
        lambda_limit,
        lambda_exact,
        lambda_gap: (lambda_exact - lambda_limit).abs(),
        sigma_of_mean: (faces * q * (1.0 - q) / values.len() as f64).sqrt(),
        distribution,
    })
}

/// Samples `Y(n, p)` per trial and records `beta^{k-1}`, the isolated-face
/// count and the component structure.
pub fn run_betti_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    check_mode(cfg, Mode::BettiDist)?;
    let start = Instant::now();
    let mut report = ExperimentReport::new(cfg);
    let (p, c) = resolve_window(cfg, &mut report);

    report.trials = run_trials(cfg.threads, cfg.trials, |i| {
        let y = trial_complex(cfg, p, i)?;
        let profile = components(&y);
        Ok(TrialRecord {
            trial: i,
            beta: Some(betti_top(&y).beta),
            isolated: Some(profile.isolated_count),
            connected: Some(profile.num_components == 1),
            giant_plus_isolated: Some(profile.is_giant_plus_isolated()),
            ..Default::default()
        })
    })?;

    let t = &report.trials;
    let betas: Vec<usize> = t.iter().map(|r| r.beta.unwrap()).collect();
    let isolated: Vec<usize> = t.iter().map(|r| r.isolated.unwrap()).collect();
    let mismatches: Vec<usize> = t
        .iter()
        .filter(|r| r.beta != r.isolated)
        .map(|r| r.trial)
        .collect();
    let cut_size = cfg.n - cfg.k + 1;
    let lambda = poisson_lambda(c, cfg.k);
    let distribution = Distribution::from_values(betas.iter().copied());
    let fit = if lambda > 0.0 {
        Some(poisson_fit(&distribution.histogram, lambda)?)
    } else {
        None
    };
    report.betti = Some(BettiSummary {
        vanish_frequency: distribution.frequency(0),
        predicted_vanish_probability: (-lambda).exp(),
        poisson_lambda: lambda,
        fit,
        distribution,
        beta_equals_isolated_frequency: 1.0 - fraction(mismatches.len(), t.len()),
        beta_below_isolated: t
            .iter()
            .filter(|r| r.isolated.unwrap() < cut_size && r.beta < r.isolated)
            .count(),
        connected_frequency: fraction(t.iter().filter(|r| r.connected == Some(true)).count(), t.len()),
        giant_plus_isolated_frequency: fraction(
            t.iter().filter(|r| r.giant_plus_isolated == Some(true)).count(),
            t.len(),
        ),
        vanishing_but_disconnected: t
            .iter()
            .filter(|r| r.beta == Some(0) && r.connected == Some(false))
            .count(),
        beta_isolated_mismatches: mismatches.clone(),
    });
    report.isolated = Some(isolated_summary(cfg, p, c, &isolated)?);

    if let Some(dir) = &cfg.dump_dir {
        std::fs::create_dir_all(dir)?;
        for &i in &mismatches {
            let y = trial_complex(cfg, p, i)?;
            std::fs::write(dir.join(format!("trial-{i:06}.json")), y.to_json()?)?;
        }
    }
    report.wall_time_secs = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

/// Isolated-face counts only; much cheaper than the Betti run.
pub fn run_isolated_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    check_mode(cfg, Mode::IsolatedDist)?;
    let start = Instant::now();
    let mut report = ExperimentReport::new(cfg);
    let (p, c) = resolve_window(cfg, &mut report);
    report.trials = run_trials(cfg.threads, cfg.trials, |i| {
        let y = trial_complex(cfg, p, i)?;
        Ok(TrialRecord {
            trial: i,
            isolated: Some(crate::connectivity::isolated_count(&y)),
            ..Default::default()
        })
    })?;
    let values: Vec<usize> = report.trials.iter().map(|r| r.isolated.unwrap()).collect();
    report.isolated = Some(isolated_summary(cfg, p, c, &values)?);
    report.wall_time_secs = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

/// Runs the growth process per trial and records the three hitting times.
pub fn run_hitting_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    check_mode(cfg, Mode::Hitting)?;
    let start = Instant::now();
    let mut report = ExperimentReport::new(cfg);
    let times: Vec<HittingTimes> = run_trials(cfg.threads, cfg.trials, |i| {
        run_hitting_times(&trial_growth_order(cfg, i)?)
    })?;
    report.trials = times
        .iter()
        .enumerate()
        .map(|(i, h)| TrialRecord {
            trial: i,
            m1: Some(h.m1),
            m2: Some(h.m2),
            m3: Some(h.m3),
            ..Default::default()
        })
        .collect();

    let total = times.len();
    let flags: Vec<_> = times.iter().map(coincidence_flags).collect();
    let faces = binomial(cfg.n, cfg.k + 1) as f64;
    let (n, k) = (cfg.n as f64, cfg.k as f64);
    let offsets: f64 = times.iter().map(|h| n * h.m1 as f64 / faces - k * n.ln()).sum();
    report.hitting = Some(HittingSummary {
        freq12: fraction(flags.iter().filter(|f| f.eq12).count(), total),
        freq123: fraction(flags.iter().filter(|f| f.eq123).count(), total),
        ordering_violations: times.iter().filter(|h| !(h.m1 <= h.m2 && h.m2 <= h.m3)).count(),
        m1: Distribution::from_values(times.iter().map(|h| h.m1)),
        window_scale: faces * k * n.ln() / n,
        offset_at_m1_mean: offsets / total as f64,
        offset_limit_mean: EULER_GAMMA - factorial(cfg.k).ln(),
    });
    report.wall_time_secs = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

/// Vanishing frequency of `beta^{k-1}` across a grid of window offsets.
/// Each grid point reuses trial seeds `0..trials` under the master seed.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    check_mode(cfg, Mode::VanishSweep)?;
    let start = Instant::now();
    let mut report = ExperimentReport::new(cfg);
    let mut rows = Vec::with_capacity(cfg.c_grid.len());
    for &c in &cfg.c_grid {
        let (p, clamped) = window_probability(cfg.n, cfg.k, c);
        if clamped {
            report.warnings.push(format!("c = {c} clamped to p = {p}"));
        }
        let results: Vec<(usize, bool)> = run_trials(cfg.threads, cfg.trials, |i| {
            let y = trial_complex(cfg, p, i)?;
            Ok((betti_top(&y).beta, is_hypergraph_connected(&y)))
        })?;
        let lambda = poisson_lambda(c, cfg.k);
        rows.push(SweepRow {
            c,
            p,
            p_clamped: clamped,
            vanish_frequency: fraction(results.iter().filter(|r| r.0 == 0).count(), results.len()),
            predicted_vanish_probability: (-lambda).exp(),
            connected_frequency: fraction(results.iter().filter(|r| r.1).count(), results.len()),
            mean_beta: results.iter().map(|r| r.0 as f64).sum::<f64>() / results.len() as f64,
        });
    }
    report.sweep = Some(rows);
    report.wall_time_secs = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

/// Probability used for trial `i` of the oracle check: cycles through
/// 0.1, 0.2, ..., 0.9.
pub fn oracle_probability(trial: usize) -> f64 {
    (trial % 9 + 1) as f64 / 10.0
}

struct OracleTrial {
    brute: Option<bool>,
    vanishing: bool,
    connected: bool,
    structure: Option<StructureReport>,
    minimal_records: Vec<CocycleSurveyRecord>,
}

fn oracle_trial(n: usize, k: usize, y: &SimplicialComplexK, keep_records: bool) -> Result<OracleTrial> {
    let beta = betti_top(y).beta;
    let brute = if binomial(n, k) <= MAX_BRUTE_FACES && binomial(n, k - 1) <= MAX_BRUTE_FACES {
        Some(brute_betti(y)? == beta)
    } else {
        None
    };
    let mut structure = None;
    let mut minimal_records = Vec::new();
    if (2..=3).contains(&k) && n <= MAX_SURVEY_VERTICES {
        let mut report = StructureReport::default();
        survey_cocycles(y, |r| {
            report.observe(&r);
            if keep_records && r.is_minimal_in_coset {
                minimal_records.push(r);
            }
        })?;
        structure = Some(report);
    }
    Ok(OracleTrial {
        brute,
        vanishing: beta == 0,
        connected: is_hypergraph_connected(y),
        structure,
        minimal_records,
    })
}

/// Oracle check without survey output.
pub fn run_oracle_check(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_oracle_check_with(cfg, None)
}

/// Exact checks on `trials` random complexes for each `n` in
/// `n..=n_max`: elimination against enumeration, vanishing cohomology
/// implies hypergraph connectivity, and the extremal-cocycle structure
/// bounds. Coset-minimal survey records are written to `survey_out` as JSON
/// lines when given.
pub fn run_oracle_check_with(cfg: &ExperimentConfig, survey_out: Option<&mut dyn Write>) -> Result<ExperimentReport> {
    check_mode(cfg, Mode::OracleCheck)?;
    let start = Instant::now();
    let mut report = ExperimentReport::new(cfg);
    let n_max = cfg.n_max.unwrap_or(cfg.n);
    let keep = survey_out.is_some();
    let mut summary = OracleSummary::default();
    let mut records = Vec::new();
    let mut index = 0;
    for n in cfg.n..=n_max {
        let results = run_trials(cfg.threads, cfg.trials, |i| {
            let p = oracle_probability(i);
            let seed = trial_seed(cfg.master_seed, ((n as u64) << 32) | i as u64);
            let y = sample_ynp(n, cfg.k, p, &mut ChaCha8Rng::seed_from_u64(seed))?;
            oracle_trial(n, cfg.k, &y, keep)
        })?;
        for r in results {
            summary.complexes += 1;
            match r.brute {
                Some(true) => summary.brute_checked += 1,
                Some(false) => {
                    summary.brute_checked += 1;
                    summary.betti_mismatches.push(index);
                }
                None => summary.brute_skipped += 1,
            }
            if r.vanishing {
                summary.vanishing += 1;
                if !r.connected {
                    summary.connectivity_violations.push(index);
                }
            }
            if let Some(s) = r.structure {
                summary.surveyed += 1;
                summary.structure.merge(s);
            }
            records.extend(r.minimal_records);
            report.trials.push(TrialRecord {
                trial: index,
                connected: Some(r.connected),
                ..Default::default()
            });
            index += 1;
        }
    }
    if let Some(out) = survey_out {
        write_survey_jsonl(&records, out)?;
    }
    report.oracle = Some(summary);
    report.wall_time_secs = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_values() {
        assert!((poisson_lambda(0.0, 2) - 0.5).abs() < 1e-15);
        assert!(((-poisson_lambda(0.0, 2)).exp() - 0.606_530_659_712_633_4).abs() < 1e-12);
        let (p, clamped) = window_probability(100, 2, 0.0);
        assert!(!clamped);
        assert!((p - 2.0 * 100f64.ln() / 100.0).abs() < 1e-15);
        assert!((window_offset(100, 2, p)).abs() < 1e-12);
        let (p, clamped) = window_probability(4, 2, 5.0);
        assert!(clamped && p == 1.0);
        let (p, clamped) = window_probability(50, 2, -20.0);
        assert!(clamped && p == 0.0);
    }

    #[test]
    fn trial_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| trial_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }

    #[test]
    fn poisson_fit_point_mass() {
        let fit = poisson_fit(&[100], 0.5).unwrap();
        assert!((fit.tv_distance - (1.0 - (-0.5f64).exp())).abs() < 1e-12);
        assert_eq!(fit.truncation, 5);
        assert!(poisson_fit(&[], 0.5).is_err());
        assert!(poisson_fit(&[0, 0], 0.5).is_err());
        assert!(poisson_fit(&[3], 0.0).is_err());
    }

    #[test]
    fn poisson_fit_synthetic_pmf() {
        let lambda = 0.5f64;
        let trials = 1_000_000f64;
        let mut pmf = vec![(-lambda).exp()];
        for i in 1..12 {
            let prev = pmf[i - 1];
            pmf.push(prev * lambda / i as f64);
        }
        let histogram: Vec<u64> = pmf.iter().map(|q| (q * trials).round() as u64).collect();
        let fit = poisson_fit(&histogram, lambda).unwrap();
        // rounding moves at most half a count per bucket
        let rounding = 0.5 * 0.5 * fit.truncation as f64 / trials;
        assert!(fit.tv_distance <= rounding + 1e-12, "{}", fit.tv_distance);
    }

    #[test]
    fn factorial_moments() {
        let hist = [5, 3, 2];
        let fit = poisson_fit(&hist, 1.0).unwrap();
        let mean = (3.0 + 4.0) / 10.0;
        assert!((fit.factorial_moments[0] - mean).abs() < 1e-15);
        assert!((fit.factorial_moments[1] - 0.4).abs() < 1e-15);
        let d = Distribution::from_values([0, 0, 0, 0, 0, 1, 1, 1, 2, 2]);
        assert_eq!(d.histogram, hist);
        assert!((d.mean - fit.factorial_moments[0]).abs() < 1e-15);
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("-2:2:0.5").unwrap(), vec![-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(parse_grid("1:1:1").unwrap(), vec![1.0]);
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("a:1:1").is_err());
    }

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::new(Mode::BettiDist, 10, 2, 5, 1);
        assert!(ok.validate().is_ok());
        let bad = |f: fn(&mut ExperimentConfig)| {
            let mut c = ok.clone();
            f(&mut c);
            matches!(c.validate(), Err(Error::Config(_)))
        };
        assert!(bad(|c| c.trials = 0));
        assert!(bad(|c| c.n = 2));
        assert!(bad(|c| c.k = 0));
        assert!(bad(|c| c.window = Window::P(1.2)));
        assert!(bad(|c| c.window = Window::C(f64::NAN)));
        assert!(bad(|c| c.mode = Mode::VanishSweep));
        assert!(bad(|c| {
            c.mode = Mode::OracleCheck;
            c.n_max = Some(3)
        }));
        assert!(matches!(run_hitting_experiment(&ok), Err(Error::Config(_))));
    }

    #[test]
    fn single_trial_histogram() {
        let cfg = ExperimentConfig::new(Mode::BettiDist, 12, 2, 1, 99);
        let report = run_betti_experiment(&cfg).unwrap();
        let b = report.betti.unwrap();
        assert_eq!(b.distribution.histogram.iter().sum::<u64>(), 1);
        assert!((b.poisson_lambda - 0.5).abs() < 1e-15);
    }

    #[test]
    fn betti_trials_match_brute_force() {
        let mut cfg = ExperimentConfig::new(Mode::BettiDist, 5, 2, 60, 5);
        for c in [-2.0, 0.0, 1.5] {
            cfg.window = Window::C(c);
            let report = run_betti_experiment(&cfg).unwrap();
            let p = report.p.unwrap();
            for t in &report.trials {
                let y = trial_complex(&cfg, p, t.trial).unwrap();
                assert_eq!(t.beta, Some(brute_betti(&y).unwrap()));
            }
        }
    }

    #[test]
    fn hitting_single_face() {
        let cfg = ExperimentConfig::new(Mode::Hitting, 3, 2, 5, 1);
        let h = run_hitting_experiment(&cfg).unwrap().hitting.unwrap();
        assert_eq!(h.freq123, 1.0);
        assert_eq!(h.ordering_violations, 0);
    }

    #[test]
    fn exact_isolated_mean_matches_simulation() {
        // mean over many small complexes versus the closed form
        for (n, k, p) in [(6, 2, 0.3), (8, 2, 0.4), (7, 3, 0.25), (8, 1, 0.2)] {
            let mut cfg = ExperimentConfig::new(Mode::IsolatedDist, n, k, 20_000, 3);
            cfg.window = Window::P(p);
            let iso = run_isolated_experiment(&cfg).unwrap().isolated.unwrap();
            let sd = iso.distribution.variance.sqrt() / (cfg.trials as f64).sqrt();
            assert!(
                (iso.distribution.mean - iso.lambda_exact).abs() < 4.0 * sd,
                "n={n} k={k}: {} vs {}",
                iso.distribution.mean,
                iso.lambda_exact
            );
        }
    }

    #[test]
    fn csv_layout() {
        let cfg = ExperimentConfig::new(Mode::Hitting, 6, 2, 2, 1);
        let report = run_hitting_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        report.write_trials_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "trial,beta,isolated,m1,m2,m3");
        assert!(lines[1].starts_with("0,,,"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn sweep_rows() {
        let mut cfg = ExperimentConfig::new(Mode::VanishSweep, 15, 2, 20, 2);
        cfg.c_grid = vec![-1.0, 0.0, 3.0];
        let rows = run_sweep(&cfg).unwrap().sweep.unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert!((0.0..=1.0).contains(&r.vanish_frequency));
            assert!(r.connected_frequency >= r.vanish_frequency);
        }
    }

    #[test]
    fn oracle_check_small() {
        let mut cfg = ExperimentConfig::new(Mode::OracleCheck, 4, 2, 18, 7);
        cfg.n_max = Some(5);
        let mut out = Vec::new();
        let report = run_oracle_check_with(&cfg, Some(&mut out)).unwrap();
        let o = report.oracle.unwrap();
        assert_eq!(o.complexes, 36);
        assert_eq!(o.brute_checked, 36);
        assert!(o.betti_mismatches.is_empty());
        assert!(o.connectivity_violations.is_empty());
        assert!(o.structure.violations.is_empty());
        let text = String::from_utf8(out).unwrap();
        for line in text.lines() {
            let r: CocycleSurveyRecord = serde_json::from_str(line).unwrap();
            assert!(r.is_minimal_in_coset);
        }
    }
}
