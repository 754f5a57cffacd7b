//! Problem-instance representation and the rate formulas every solver feeds
//! on: destination/eavesdropper rates for the decode-and-forward and
//! cooperative-jamming protocols, the secrecy rate, and the direct-transmission
//! baseline.

use num_complex::Complex64 as Cplx;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cplx_serde, CVec};

/// Secrecy-rate target (bits/s/Hz) the default `p0_min` rule asks the
/// source→relay links to support.
const P0_MIN_DECODE_RATE: f64 = 2.0;

/// One solvable problem instance: channel gains, noise variance and the
/// power/rate constraints.
#[derive(Clone, Debug, Serialize)]
pub struct Scenario {
    /// Source→destination gain.
    #[serde(with = "cplx_serde")]
    pub h0: Cplx,
    /// Relay→destination gains, length N.
    pub h: CVec,
    /// Source→eavesdropper gains, length J.
    #[serde(with = "cplx_serde::vec")]
    pub g0: Vec<Cplx>,
    /// Relay→eavesdropper gains: J vectors of length N.
    pub g: Vec<CVec>,
    /// Source→relay gains, length N. Stored for the `p0_min` rule; the
    /// solvers themselves never read it.
    pub a: CVec,
    /// Noise variance, watts.
    pub sigma2: f64,
    /// Total power budget, watts.
    pub p0: f64,
    /// Minimum DF source power, watts.
    pub p0_min: f64,
    /// Secrecy-rate constraint for power-minimization problems, bits/s/Hz.
    pub rs0: f64,
}

/// Raw JSON shape: `p0_min` and `rs0` are optional and defaulted on load.
#[derive(Deserialize)]
struct ScenarioRaw {
    #[serde(with = "cplx_serde")]
    h0: Cplx,
    h: CVec,
    #[serde(with = "cplx_serde::vec")]
    g0: Vec<Cplx>,
    g: Vec<CVec>,
    a: CVec,
    sigma2: f64,
    p0: f64,
    #[serde(default)]
    p0_min: Option<f64>,
    #[serde(default)]
    rs0: Option<f64>,
}

impl<'de> Deserialize<'de> for Scenario {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = ScenarioRaw::deserialize(de)?;
        Scenario::from_parts(
            raw.h0, raw.h, raw.g0, raw.g, raw.a, raw.sigma2, raw.p0, raw.p0_min, raw.rs0,
        )
        .map_err(serde::de::Error::custom)
    }
}

impl Scenario {
    /// Builds and validates a scenario. `p0_min` defaults to the smallest
    /// source power whose weakest source→relay link sustains 2 bits/s/Hz at
    /// the DF rate, capped at `p0/2`; `rs0` defaults to 0 (rate-max use).
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        h0: Cplx,
        h: CVec,
        g0: Vec<Cplx>,
        g: Vec<CVec>,
        a: CVec,
        sigma2: f64,
        p0: f64,
        p0_min: Option<f64>,
        rs0: Option<f64>,
    ) -> Result<Self> {
        let sc = Scenario {
            h0,
            h,
            g0,
            g,
            a,
            sigma2,
            p0,
            p0_min: 0.0,
            rs0: rs0.unwrap_or(0.0),
        };
        sc.validate_channels()?;
        let p0_min = match p0_min {
            Some(v) => v,
            None => sc.default_p0_min(),
        };
        let sc = Scenario { p0_min, ..sc };
        sc.validate()?;
        Ok(sc)
    }

    /// Number of relays.
    pub fn n_relays(&self) -> usize {
        self.h.len()
    }

    /// Number of eavesdroppers.
    pub fn n_eaves(&self) -> usize {
        self.g0.len()
    }

    /// Default minimum source power: ½log₂(1 + ps·min_i|a_i|²/σ²) ≥ 2
    /// solved for ps, capped at p0/2.
    pub fn default_p0_min(&self) -> f64 {
        let min_gain = self
            .a
            .0
            .iter()
            .map(|c| c.norm_sqr())
            .fold(f64::INFINITY, f64::min);
        if !min_gain.is_finite() || min_gain <= 0.0 {
            return self.p0 / 2.0;
        }
        let required = (2f64.powf(2.0 * P0_MIN_DECODE_RATE) - 1.0) * self.sigma2 / min_gain;
        required.min(self.p0 / 2.0)
    }

    fn validate_channels(&self) -> Result<()> {
        let n = self.h.len();
        let j = self.g0.len();
        if n == 0 {
            return Err(Error::schema("h", "at least one relay is required (N ≥ 1)"));
        }
        if j == 0 {
            return Err(Error::schema(
                "g0",
                "at least one eavesdropper is required (J ≥ 1)",
            ));
        }
        if self.g.len() != j {
            return Err(Error::schema(
                "g",
                format!(
                    "expected {} relay→eavesdropper vectors, found {}",
                    j,
                    self.g.len()
                ),
            ));
        }
        for (idx, gj) in self.g.iter().enumerate() {
            if gj.len() != n {
                return Err(Error::schema(
                    format!("g[{idx}]"),
                    format!("expected length {}, found {}", n, gj.len()),
                ));
            }
            if !gj.is_finite() {
                return Err(Error::schema(format!("g[{idx}]"), "non-finite entry"));
            }
        }
        if self.a.len() != n {
            return Err(Error::schema(
                "a",
                format!("expected length {}, found {}", n, self.a.len()),
            ));
        }
        if !self.h.is_finite() || !self.a.is_finite() {
            return Err(Error::schema("h", "non-finite entry"));
        }
        if !(self.h0.re.is_finite() && self.h0.im.is_finite()) {
            return Err(Error::schema("h0", "non-finite entry"));
        }
        if self
            .g0
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::schema("g0", "non-finite entry"));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::schema("sigma2", "must be finite and > 0"));
        }
        if !(self.p0 > 0.0 && self.p0.is_finite()) {
            return Err(Error::schema("p0", "must be finite and > 0"));
        }
        Ok(())
    }

    /// Full invariant check (channel shapes plus constraint ordering).
    pub fn validate(&self) -> Result<()> {
        self.validate_channels()?;
        if !(self.p0_min >= 0.0 && self.p0_min <= self.p0) {
            return Err(Error::schema(
                "p0_min",
                format!("must satisfy 0 ≤ p0_min ≤ p0, got {}", self.p0_min),
            ));
        }
        if !(self.rs0 >= 0.0 && self.rs0.is_finite()) {
            return Err(Error::schema("rs0", "must be finite and ≥ 0"));
        }
        Ok(())
    }
}

/// Destination and per-eavesdropper rates under decode-and-forward: the
/// relays retransmit a weighted copy in a second slot, hence the ½ factor.
///
///   R_d   = ½log₂(1 + (P_s|h0|² + |h†w|²)/σ²)
///   R_e^j = ½log₂(1 + (P_s|g0j|² + |g_j†w|²)/σ²)
pub fn df_rates(sc: &Scenario, ps: f64, w: &CVec) -> Result<(f64, Vec<f64>)> {
    if ps < 0.0 || !ps.is_finite() {
        return Err(Error::contract(format!("df_rates: ps = {ps} must be ≥ 0")));
    }
    if w.len() != sc.n_relays() {
        return Err(Error::contract("df_rates: weight length must equal N"));
    }
    let relay_d = sc.h.dot(w).norm_sqr();
    let rd = 0.5 * (1.0 + (ps * sc.h0.norm_sqr() + relay_d) / sc.sigma2).log2();
    let re = sc
        .g0
        .iter()
        .zip(sc.g.iter())
        .map(|(g0j, gj)| {
            let relay_e = gj.dot(w).norm_sqr();
            0.5 * (1.0 + (ps * g0j.norm_sqr() + relay_e) / sc.sigma2).log2()
        })
        .collect();
    Ok((rd, re))
}

/// Destination and per-eavesdropper rates under cooperative jamming: the
/// relays transmit weighted noise while the source talks, one slot, no ½.
///
///   R_d   = log₂(1 + P_s|h0|²/(|h†w|² + σ²))
///   R_e^j = log₂(1 + P_s|g0j|²/(|g_j†w|² + σ²))
pub fn cj_rates(sc: &Scenario, ps: f64, w: &CVec) -> Result<(f64, Vec<f64>)> {
    if ps < 0.0 || !ps.is_finite() {
        return Err(Error::contract(format!("cj_rates: ps = {ps} must be ≥ 0")));
    }
    if w.len() != sc.n_relays() {
        return Err(Error::contract("cj_rates: weight length must equal N"));
    }
    let jam_d = sc.h.dot(w).norm_sqr();
    let rd = (1.0 + ps * sc.h0.norm_sqr() / (jam_d + sc.sigma2)).log2();
    let re = sc
        .g0
        .iter()
        .zip(sc.g.iter())
        .map(|(g0j, gj)| {
            let jam_e = gj.dot(w).norm_sqr();
            (1.0 + ps * g0j.norm_sqr() / (jam_e + sc.sigma2)).log2()
        })
        .collect();
    Ok((rd, re))
}

/// Achievable secrecy rate: `max{0, R_d − max_j R_e^j}`.
pub fn secrecy_rate(rd: f64, re: &[f64]) -> f64 {
    let worst = re.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !worst.is_finite() {
        return rd.max(0.0);
    }
    (rd - worst).max(0.0)
}

/// Direct-transmission baseline: full power at the source, one slot, no
/// relays, secrecy rate against the strongest eavesdropper.
pub fn direct_transmission_rate(sc: &Scenario) -> f64 {
    let rd = (1.0 + sc.p0 * sc.h0.norm_sqr() / sc.sigma2).log2();
    let worst = sc
        .g0
        .iter()
        .map(|g0j| (1.0 + sc.p0 * g0j.norm_sqr() / sc.sigma2).log2())
        .fold(f64::NEG_INFINITY, f64::max);
    (rd - worst).max(0.0)
}

/// Which closed-form case or algorithm path produced a solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// DF rate-max relay branch: minimum source power, relays active.
    DfRelay,
    /// DF rate-max direct branch: full source power, relays off.
    DfDirect,
    /// Degenerate-collinear fallback: 2-D grid over (P_s, z).
    DfGridFallback,
    /// DF power-min case: source only, `(ζ, 0)`.
    DfMinSourceOnly,
    /// DF power-min case: minimum source power plus the negative
    /// eigendirection.
    DfMinNegativeEig,
    /// DF power-min case: minimum source power plus the positive
    /// eigendirection.
    DfMinPositiveEig,
    /// DF power-min equal-gain case `4^{R_s^0}|g_0|² = |h_0|²`.
    DfMinEqualGain,
    /// Alternating rate maximization for cooperative jamming.
    CjAlternating,
    /// Suboptimal CJ rate solution with jamming nulled at the destination.
    CjSuboptimalRate,
    /// Alternating power minimization for cooperative jamming.
    CjAlternatingMinPower,
    /// Suboptimal CJ power solution with jamming nulled at the destination.
    CjSuboptimalPower,
    /// Source-only CJ power minimization (jamming power clamped to zero).
    CjMinPowerSourceOnly,
    /// Multi-eavesdropper DF alternating algorithm.
    DfMultiAlternating,
    /// Eavesdropper-nulling suboptimal DF solution.
    DfMultiNulling,
    /// Direct transmission baseline.
    Direct,
}

/// Free-form solver notes attached to a solution.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Human-readable warnings (degeneracy fallbacks, retry exhaustion, ...).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Which quadratic root a closed form selected, when ambiguous.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_choice: Option<String>,
    /// Per-iteration SDR upper bounds recorded when relaxation is not tight.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sdr_upper_bounds: Vec<f64>,
}

/// Chosen source power, relay weights and the achieved objective.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchemeSolution {
    /// Source power, watts.
    pub ps: f64,
    /// Relay weight vector, √watts.
    pub w: CVec,
    /// Achieved secrecy rate, bits/s/Hz.
    pub secrecy_rate: f64,
    /// `ps + ‖w‖²`, watts.
    pub total_power: f64,
    pub iterations: usize,
    pub converged: bool,
    pub branch: Branch,
    #[serde(default)]
    pub diagnostics: Diagnostics,
}

impl SchemeSolution {
    pub fn new(ps: f64, w: CVec, secrecy_rate: f64, branch: Branch) -> Self {
        let total_power = ps + w.norm_sq();
        SchemeSolution {
            ps,
            w,
            secrecy_rate: secrecy_rate.max(0.0),
            total_power,
            iterations: 0,
            converged: true,
            branch,
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn with_iterations(mut self, iterations: usize, converged: bool) -> Self {
        self.iterations = iterations;
        self.converged = converged;
        self
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.diagnostics.warnings.push(msg.into());
    }
}
