//! Monte-Carlo harness: line-of-sight channel generation over collinear node
//! geometries, parameter sweeps with per-trial solver runs, and deterministic
//! CSV/SVG/manifest rendering.
//!
//! Reproducibility: each channel phase comes from a counter-based generator
//! keyed by (seed, trial, edge), so a (seed, trial) pair regenerates a
//! bit-identical scenario regardless of evaluation order, and trial results
//! are reduced in index order with Kahan summation so parallel schedules
//! cannot change the output bytes.

use num_complex::Complex64 as Cplx;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CVec;
use crate::model::{direct_transmission_rate, Branch, Scenario, SchemeSolution};
use crate::{cj_opt, df_multi, df_opt};

/// Node layout on a line: source at the origin, relays clustered at `d_sr`,
/// destination at `d_sd`, eavesdropper j at `d_se[j]`. Relays (and
/// eavesdroppers) are close enough together that they share path losses.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Geometry {
    pub d_sr: f64,
    pub d_sd: f64,
    pub d_se: Vec<f64>,
    pub n_relays: usize,
    pub n_eaves: usize,
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        if self.n_relays == 0 {
            return Err(Error::schema("geometry.n_relays", "must be ≥ 1"));
        }
        if self.n_eaves == 0 {
            return Err(Error::schema("geometry.n_eaves", "must be ≥ 1"));
        }
        if !(self.d_se.len() == 1 || self.d_se.len() == self.n_eaves) {
            return Err(Error::schema(
                "geometry.d_se",
                format!(
                    "needs 1 or n_eaves = {} distances, found {}",
                    self.n_eaves,
                    self.d_se.len()
                ),
            ));
        }
        for (name, d) in [("d_sr", self.d_sr), ("d_sd", self.d_sd)] {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::schema(format!("geometry.{name}"), "must be > 0"));
            }
        }
        for d in &self.d_se {
            if !(*d > 0.0 && d.is_finite()) {
                return Err(Error::schema("geometry.d_se", "distances must be > 0"));
            }
        }
        // Pairwise separations drive relay↔destination / relay↔eavesdropper
        // path losses and must stay positive.
        if (self.d_sd - self.d_sr).abs() < 1e-9 {
            return Err(Error::schema(
                "geometry.d_sd",
                "destination cannot sit on top of the relay cluster",
            ));
        }
        for d in &self.d_se {
            if (d - self.d_sr).abs() < 1e-9 {
                return Err(Error::schema(
                    "geometry.d_se",
                    "an eavesdropper cannot sit on top of the relay cluster",
                ));
            }
        }
        Ok(())
    }

    fn d_se_for(&self, j: usize) -> f64 {
        if self.d_se.len() == 1 {
            self.d_se[0]
        } else {
            self.d_se[j]
        }
    }
}

/// Line-of-sight channel parameters: gain magnitude ρ0·d^{−c/2}, phase
/// uniform on [0, 2π).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LosParams {
    #[serde(default = "default_rho0")]
    pub rho0: f64,
    /// Path-loss exponent.
    #[serde(default = "default_pl_exp", rename = "path_loss_exponent")]
    pub c: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_rho0() -> f64 {
    1.0
}
fn default_pl_exp() -> f64 {
    3.5
}

impl Default for LosParams {
    fn default() -> Self {
        LosParams {
            rho0: 1.0,
            c: 3.5,
            seed: 0,
        }
    }
}

/// Noise power assumed when a config does not specify one, flagged as an
/// assumption in manifests. At −20 dBm the bundled sweeps sit in the regime
/// where relay beamforming dominates (DF above CJ above direct); much lower
/// noise inflates every direct-path SNR until the full-slot CJ rate
/// overtakes half-slot DF and the ordering inverts.
pub const DEFAULT_SIGMA2_DBM: f64 = -20.0;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * (w / 1e-3).log10()
}

/// Uniform phase on [0, 2π) from a counter-based stream keyed by
/// (seed, trial, edge). SplitMix-style mixing feeds a ChaCha stream (stable
/// across platforms and releases, unlike `StdRng`) so the draw is identical
/// in any evaluation order.
fn edge_phase(seed: u64, trial: u64, edge: u64) -> f64 {
    let mut key = seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(trial.wrapping_mul(0xbf58_476d_1ce4_e5b9))
        .wrapping_add(edge.wrapping_mul(0x94d0_49bb_1331_11eb));
    key ^= key >> 30;
    key = key.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    key ^= key >> 27;
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.gen_range(0.0..std::f64::consts::TAU)
}

/// Generates the channel realization for one Monte-Carlo trial.
///
/// Every edge gets an independent phase even between co-located nodes
/// (receiver phase offsets differ), and all relays share each counterpart's
/// path loss per the clustered-relay approximation.
pub fn gen_channels(
    geom: &Geometry,
    los: &LosParams,
    trial: u64,
    sigma2: f64,
    p0: f64,
    p0_min: Option<f64>,
    rs0: Option<f64>,
) -> Result<Scenario> {
    geom.validate()?;
    let n = geom.n_relays;
    let j_count = geom.n_eaves;
    let mag = |d: f64| los.rho0 * d.powf(-los.c / 2.0);
    let gain =
        |edge: u64, d: f64| -> Cplx { Cplx::from_polar(mag(d), edge_phase(los.seed, trial, edge)) };

    // Edge ids: 0 = h0; 1..=N = h_i; N+1..=2N = a_i; then per eavesdropper j
    // a block of N+1 edges (g0j first, then g_ij).
    let h0 = gain(0, geom.d_sd);
    let d_rd = (geom.d_sd - geom.d_sr).abs();
    let h = CVec((0..n).map(|i| gain(1 + i as u64, d_rd)).collect());
    let a = CVec(
        (0..n)
            .map(|i| gain(1 + n as u64 + i as u64, geom.d_sr))
            .collect(),
    );
    let mut g0 = Vec::with_capacity(j_count);
    let mut g = Vec::with_capacity(j_count);
    for jj in 0..j_count {
        let base = 1 + 2 * n as u64 + (jj as u64) * (n as u64 + 1);
        let d_se = geom.d_se_for(jj);
        g0.push(gain(base, d_se));
        let d_re = (d_se - geom.d_sr).abs();
        g.push(CVec(
            (0..n).map(|i| gain(base + 1 + i as u64, d_re)).collect(),
        ));
    }

    Scenario::from_parts(h0, h, g0, g, a, sigma2, p0, p0_min, rs0)
}

/// Cooperation scheme selector shared by the sweep harness and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Optimal DF (closed form for J = 1, alternating SDR solver for J ≥ 2).
    Df,
    /// Optimal CJ (J = 1 only).
    Cj,
    /// Force the multi-eavesdropper DF algorithm.
    DfMulti,
    /// Eavesdropper-nulling DF baseline.
    DfSub,
    /// z = 0 CJ baseline.
    CjSub,
    /// No cooperation.
    Direct,
}

impl Scheme {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "df" => Ok(Scheme::Df),
            "cj" => Ok(Scheme::Cj),
            "df-multi" => Ok(Scheme::DfMulti),
            "df-sub" => Ok(Scheme::DfSub),
            "cj-sub" => Ok(Scheme::CjSub),
            "direct" => Ok(Scheme::Direct),
            other => Err(Error::schema(
                "scheme",
                format!(
                    "unknown scheme `{other}` (expected df, cj, df-multi, df-sub, cj-sub, direct)"
                ),
            )),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Df => "df",
            Scheme::Cj => "cj",
            Scheme::DfMulti => "df-multi",
            Scheme::DfSub => "df-sub",
            Scheme::CjSub => "cj-sub",
            Scheme::Direct => "direct",
        }
    }
}

/// Objective selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    MaxRate,
    MinPower,
}

impl Objective {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "max-rate" => Ok(Objective::MaxRate),
            "min-power" => Ok(Objective::MinPower),
            other => Err(Error::schema(
                "objective",
                format!("unknown objective `{other}` (expected max-rate or min-power)"),
            )),
        }
    }
}

/// Runs one scheme on one scenario. Single entry point used by the sweep
/// harness and the CLI `solve` command.
pub fn solve_scheme(sc: &Scenario, scheme: Scheme, objective: Objective) -> Result<SchemeSolution> {
    match objective {
        Objective::MaxRate => match scheme {
            Scheme::Df => {
                if sc.n_eaves() == 1 {
                    df_opt::df_max_secrecy_j1(sc)
                } else {
                    df_multi::df_multi_max(sc)
                }
            }
            Scheme::DfMulti => df_multi::df_multi_max(sc),
            Scheme::DfSub => df_multi::df_multi_suboptimal(sc),
            Scheme::Cj => cj_opt::cj_max_secrecy(sc),
            Scheme::CjSub => cj_opt::cj_suboptimal_maxrate(sc),
            Scheme::Direct => Ok(SchemeSolution::new(
                sc.p0,
                CVec::zeros(sc.n_relays()),
                direct_transmission_rate(sc),
                Branch::Direct,
            )),
        },
        Objective::MinPower => match scheme {
            Scheme::Df => df_opt::df_min_power(sc),
            Scheme::Cj => cj_opt::cj_min_power(sc),
            Scheme::CjSub => cj_opt::cj_suboptimal_minpower(sc),
            Scheme::Direct => direct_min_power(sc),
            Scheme::DfMulti | Scheme::DfSub => Err(Error::contract(format!(
                "scheme `{}` has no power-minimization variant",
                scheme.as_str()
            ))),
        },
    }
}

/// Direct-transmission power minimization: feasible only when the main
/// channel beats the strongest eavesdropper by the 2^{rs0} factor.
pub fn direct_min_power(sc: &Scenario) -> Result<SchemeSolution> {
    if !(sc.rs0 > 0.0) {
        return Err(Error::contract("direct_min_power requires rs0 > 0"));
    }
    let k = 2f64.powf(sc.rs0);
    let worst_g0 = sc
        .g0
        .iter()
        .map(|g| g.norm_sqr())
        .fold(f64::NEG_INFINITY, f64::max);
    let margin = sc.h0.norm_sqr() - k * worst_g0;
    if margin <= 0.0 {
        return Err(Error::infeasible(
            "direct transmission cannot meet the secrecy-rate constraint at any power",
        ));
    }
    let ps = (k - 1.0) * sc.sigma2 / margin;
    Ok(SchemeSolution::new(
        ps,
        CVec::zeros(sc.n_relays()),
        sc.rs0,
        Branch::Direct,
    ))
}

/// Sweep axis: either an explicit value list or a start/stop/step range.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxisSpec {
    /// One of `d_sd`, `d_se`, `n_eaves`.
    pub parameter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

impl AxisSpec {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        if !matches!(self.parameter.as_str(), "d_sd" | "d_se" | "n_eaves") {
            return Err(Error::schema(
                "axis.parameter",
                format!(
                    "unknown axis `{}` (expected d_sd, d_se, n_eaves)",
                    self.parameter
                ),
            ));
        }
        if let Some(vals) = &self.values {
            if vals.is_empty() {
                return Err(Error::schema("axis.values", "must be non-empty"));
            }
            return Ok(vals.clone());
        }
        match (self.start, self.stop, self.step) {
            (Some(start), Some(stop), Some(step)) if step > 0.0 && stop >= start => {
                let count = ((stop - start) / step).round() as usize + 1;
                Ok((0..count).map(|i| start + step * i as f64).collect())
            }
            _ => Err(Error::schema(
                "axis",
                "provide either `values` or a valid start/stop/step range",
            )),
        }
    }
}

/// Full sweep definition; the JSON schema of `sweep --config`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSpec {
    pub name: String,
    pub objective: Objective,
    pub schemes: Vec<Scheme>,
    pub axis: AxisSpec,
    pub geometry: Geometry,
    #[serde(default)]
    pub channel: LosParams,
    /// Noise power in dBm; defaults to the crate-wide assumption.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma2_dbm: Option<f64>,
    /// Total power budget in dBm.
    pub p0_dbm: f64,
    /// Minimum DF source power in watts; derived per scenario when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0_min: Option<f64>,
    /// Secrecy-rate constraint for min-power sweeps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rs0: Option<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_trials() -> usize {
    500
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.axis.resolve()?;
        if self.schemes.is_empty() {
            return Err(Error::schema("schemes", "must list at least one scheme"));
        }
        if self.trials == 0 {
            return Err(Error::schema("trials", "must be ≥ 1"));
        }
        if self.objective == Objective::MinPower && self.rs0.unwrap_or(0.0) <= 0.0 {
            return Err(Error::schema("rs0", "min-power sweeps need rs0 > 0"));
        }
        if !(self.channel.c > 0.0) {
            return Err(Error::schema("channel.path_loss_exponent", "must be > 0"));
        }
        Ok(())
    }

    pub fn sigma2_watts(&self) -> f64 {
        dbm_to_watts(self.sigma2_dbm.unwrap_or(DEFAULT_SIGMA2_DBM))
    }

    pub fn p0_watts(&self) -> f64 {
        dbm_to_watts(self.p0_dbm)
    }
}

/// Aggregates for one (axis point, scheme) cell. The metric is the secrecy
/// rate in bits/s/Hz (rate sweeps) or the total transmit power in dBm (power
/// sweeps), averaged over feasible trials only.
#[derive(Clone, Debug, Serialize)]
pub struct SweepCell {
    pub scheme: Scheme,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    pub trials: usize,
    pub feasible: usize,
    pub errors: usize,
}

impl SweepCell {
    pub fn feasible_fraction(&self) -> f64 {
        self.feasible as f64 / self.trials as f64
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub axis: f64,
    pub cells: Vec<SweepCell>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub axis_parameter: String,
    pub objective: Objective,
    pub points: Vec<SweepPoint>,
}

enum TrialOutcome {
    Value(f64),
    Infeasible,
    SolverError,
}

/// Runs the sweep: for each axis point and trial, generate channels and run
/// every selected scheme. Trials evaluate in parallel; reduction is in trial
/// order with Kahan sums, so results do not depend on the schedule. Solver
/// errors skip the trial for that scheme and are counted, never fatal.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let axis_values = spec.axis.resolve()?;
    let sigma2 = spec.sigma2_watts();
    let p0 = spec.p0_watts();

    let mut points = Vec::with_capacity(axis_values.len());
    for &axis in &axis_values {
        let geom = apply_axis(&spec.geometry, &spec.axis.parameter, axis)?;
        let outcomes: Vec<Vec<TrialOutcome>> = (0..spec.trials as u64)
            .into_par_iter()
            .map(|trial| {
                let sc = gen_channels(
                    &geom,
                    &spec.channel,
                    trial,
                    sigma2,
                    p0,
                    spec.p0_min,
                    spec.rs0,
                );
                match sc {
                    Ok(sc) => spec
                        .schemes
                        .iter()
                        .map(|&scheme| run_trial(&sc, scheme, spec.objective))
                        .collect(),
                    Err(e) => {
                        eprintln!("sweep: trial skipped (channel generation): {e}");
                        spec.schemes
                            .iter()
                            .map(|_| TrialOutcome::SolverError)
                            .collect()
                    }
                }
            })
            .collect();

        let cells = spec
            .schemes
            .iter()
            .enumerate()
            .map(|(si, &scheme)| reduce_cell(scheme, spec.trials, outcomes.iter().map(|t| &t[si])))
            .collect();
        points.push(SweepPoint { axis, cells });
    }

    Ok(SweepResult {
        axis_parameter: spec.axis.parameter.clone(),
        objective: spec.objective,
        points,
    })
}

fn apply_axis(base: &Geometry, parameter: &str, value: f64) -> Result<Geometry> {
    let mut geom = base.clone();
    match parameter {
        "d_sd" => geom.d_sd = value,
        "d_se" => geom.d_se = vec![value],
        "n_eaves" => {
            let j = value.round() as usize;
            if j == 0 || (value - j as f64).abs() > 1e-9 {
                return Err(Error::schema(
                    "axis.values",
                    format!("n_eaves axis values must be positive integers, got {value}"),
                ));
            }
            geom.n_eaves = j;
        }
        other => {
            return Err(Error::schema(
                "axis.parameter",
                format!("unknown axis `{other}`"),
            ))
        }
    }
    geom.validate()?;
    Ok(geom)
}

fn run_trial(sc: &Scenario, scheme: Scheme, objective: Objective) -> TrialOutcome {
    match solve_scheme(sc, scheme, objective) {
        Ok(sol) => match objective {
            Objective::MaxRate => TrialOutcome::Value(sol.secrecy_rate),
            Objective::MinPower => TrialOutcome::Value(watts_to_dbm(sol.total_power)),
        },
        Err(Error::Infeasible(_)) => TrialOutcome::Infeasible,
        Err(e) => {
            eprintln!("sweep: {} trial skipped: {e}", scheme.as_str());
            TrialOutcome::SolverError
        }
    }
}

fn reduce_cell<'a>(
    scheme: Scheme,
    trials: usize,
    outcomes: impl Iterator<Item = &'a TrialOutcome>,
) -> SweepCell {
    let mut kahan_sum = 0.0f64;
    let mut kahan_c = 0.0f64;
    let mut values: Vec<f64> = Vec::new();
    let mut errors = 0usize;
    for outcome in outcomes {
        match outcome {
            TrialOutcome::Value(v) => {
                let y = v - kahan_c;
                let t = kahan_sum + y;
                kahan_c = (t - kahan_sum) - y;
                kahan_sum = t;
                values.push(*v);
            }
            TrialOutcome::Infeasible => {}
            TrialOutcome::SolverError => errors += 1,
        }
    }
    let feasible = values.len();
    let (mean, stderr) = if feasible > 0 {
        let mean = kahan_sum / feasible as f64;
        let var = values
            .iter()
            .map(|v| {
                let d = v - mean;
                d * d
            })
            .sum::<f64>()
            / feasible.max(2).saturating_sub(1) as f64;
        (Some(mean), Some((var / feasible as f64).sqrt()))
    } else {
        (None, None)
    };
    SweepCell {
        scheme,
        mean,
        stderr,
        trials,
        feasible,
        errors,
    }
}

/// CSV rendering: `axis,scheme,mean,stderr,trials,feasible_fraction`, one
/// row per (axis point, scheme), empty mean/stderr when no trial was
/// feasible. Pure function of the result: rerunning an identical spec gives
/// identical bytes.
pub fn render_csv(result: &SweepResult) -> String {
    let mut out = String::from("axis,scheme,mean,stderr,trials,feasible_fraction\n");
    for point in &result.points {
        for cell in &point.cells {
            let mean = cell.mean.map(|v| format!("{v}")).unwrap_or_default();
            let stderr = cell.stderr.map(|v| format!("{v}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                point.axis,
                cell.scheme.as_str(),
                mean,
                stderr,
                cell.trials,
                cell.feasible_fraction()
            ));
        }
    }
    out
}

/// Minimal in-house SVG line plot: one polyline per scheme over the axis,
/// linear scales, tick labels. CSV remains the canonical output.
pub fn render_svg(result: &SweepResult, title: &str) -> String {
    const W: f64 = 800.0;
    const H: f64 = 500.0;
    const ML: f64 = 70.0;
    const MR: f64 = 150.0;
    const MT: f64 = 40.0;
    const MB: f64 = 50.0;
    const COLORS: [&str; 6] = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    ];

    let xs: Vec<f64> = result.points.iter().map(|p| p.axis).collect();
    let mut ys: Vec<f64> = Vec::new();
    for p in &result.points {
        for c in &p.cells {
            if let Some(m) = c.mean {
                ys.push(m);
            }
        }
    }
    let (x_min, x_max) = bounds(&xs);
    let (y_min, y_max) = bounds(&ys);
    let x_of = |x: f64| ML + (x - x_min) / (x_max - x_min).max(1e-12) * (W - ML - MR);
    let y_of = |y: f64| H - MB - (y - y_min) / (y_max - y_min).max(1e-12) * (H - MT - MB);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{}</text>\n",
        (ML + W - MR) / 2.0,
        xml_escape(title)
    ));
    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{ML}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - MB,
        W - MR,
        H - MB
    ));
    svg.push_str(&format!(
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - MB
    ));
    // Ticks.
    for k in 0..=5 {
        let xv = x_min + (x_max - x_min) * k as f64 / 5.0;
        let yv = y_min + (y_max - y_min) * k as f64 / 5.0;
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{:.4}</text>\n",
            x_of(xv),
            H - MB + 18.0,
            xv
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{:.4}</text>\n",
            ML - 6.0,
            y_of(yv) + 4.0,
            yv
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">{}</text>\n",
        (ML + W - MR) / 2.0,
        H - 10.0,
        xml_escape(&result.axis_parameter)
    ));

    for (si, _) in result.points[0].cells.iter().enumerate() {
        let scheme = result.points[0].cells[si].scheme;
        let color = COLORS[si % COLORS.len()];
        let mut path = String::new();
        for p in &result.points {
            if let Some(m) = p.cells[si].mean {
                if !path.is_empty() {
                    path.push(' ');
                }
                path.push_str(&format!("{:.2},{:.2}", x_of(p.axis), y_of(m)));
            }
        }
        if !path.is_empty() {
            svg.push_str(&format!(
                "<polyline points=\"{path}\" fill=\"none\" stroke=\"{color}\" \
                 stroke-width=\"2\"/>\n"
            ));
        }
        let ly = MT + 20.0 * si as f64;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" \
             stroke-width=\"2\"/>\n",
            W - MR + 10.0,
            W - MR + 40.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            W - MR + 46.0,
            ly + 4.0,
            scheme.as_str()
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in v {
        lo = lo.min(*x);
        hi = hi.max(*x);
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
