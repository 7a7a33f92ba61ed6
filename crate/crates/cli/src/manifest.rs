//! JSON experiment manifests.
//!
//! Units are fixed: meters, Watts, and angles in degrees (fields carry a
//! `_deg` suffix). Unknown fields are rejected so typos surface early.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use secrecy_sor_core::asymptotic::ScenarioConfig;
use secrecy_sor_core::crosstalk::{AngleRange, ArrayGeometry};
use secrecy_sor_core::mc::{McEstimate, McRunSpec};
use secrecy_sor_core::sop::SuspiciousRegion;

/// A manifest that cannot be used as written. Reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("invalid manifest: {field}: {message}")]
pub struct ManifestError {
    pub field: String,
    pub message: String,
}

impl ManifestError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub scenario: ScenarioSpec,
    pub region: Option<RegionSpec>,
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub scheme: Scheme,
    /// Fixed jamming fraction. Without it the scheme optimizes its own.
    pub phi: Option<f64>,
    /// Objective of the uniform search; commands pick one when absent.
    pub objective: Option<Objective>,
    pub mc: Option<McSpec>,
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioSpec {
    pub n_antennas: usize,
    /// Element spacing in wavelengths.
    pub spacing: f64,
    pub alpha: f64,
    pub p_tot_w: f64,
    pub n0_w: f64,
    /// Target secrecy rate (bit/s/Hz).
    pub r_th: f64,
    pub bob_theta_deg: f64,
    pub bob_dist_m: f64,
    pub k_eb: f64,
    pub n_eves: usize,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            n_antennas: 100,
            spacing: 0.5,
            alpha: 3.0,
            p_tot_w: 1.0,
            n0_w: 1e-8,
            r_th: 10.0,
            bob_theta_deg: 0.0,
            bob_dist_m: 100.0,
            k_eb: 1.0,
            n_eves: 1,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub angles_deg: [f64; 2],
    pub d_min_m: f64,
    pub d_max_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    NAntennas,
    Alpha,
    RTh,
    BobThetaDeg,
    BobDistM,
    KEb,
    NEves,
    Phi,
    DMinM,
    DMaxM,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::NAntennas => "n_antennas",
            Self::Alpha => "alpha",
            Self::RTh => "r_th",
            Self::BobThetaDeg => "bob_theta_deg",
            Self::BobDistM => "bob_dist_m",
            Self::KEb => "k_eb",
            Self::NEves => "n_eves",
            Self::Phi => "phi",
            Self::DMinM => "d_min_m",
            Self::DMaxM => "d_max_m",
        }
    }

    fn is_integer(self) -> bool {
        matches!(self, Self::NAntennas | Self::NEves)
    }
}

/// Either an explicit list of values or an inclusive `start..=stop` range.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
}

impl SweepSpec {
    pub fn grid(&self) -> Result<Vec<f64>, ManifestError> {
        let values = match (&self.values, self.start, self.stop, self.step) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(h)) => {
                if !(h > 0.0) || !a.is_finite() || !b.is_finite() {
                    return Err(ManifestError::new("sweep.step", "must be positive with finite start and stop"));
                }
                // Index-based so the grid does not depend on accumulated rounding.
                let n = ((b - a) / h + 1e-9).floor();
                if n < 0.0 {
                    Vec::new()
                } else {
                    (0..=n as usize).map(|i| a + i as f64 * h).collect()
                }
            }
            _ => {
                return Err(ManifestError::new(
                    "sweep",
                    "give either `values` or all of `start`, `stop`, `step`",
                ))
            }
        };
        if values.is_empty() {
            return Err(ManifestError::new("sweep", "grid is empty"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(ManifestError::new("sweep.values", format!("non-finite value {v}")));
        }
        if self.parameter.is_integer() {
            if let Some(v) = values.iter().find(|v| v.fract() != 0.0 || **v < 0.0) {
                return Err(ManifestError::new(
                    "sweep.values",
                    format!("{} takes non-negative integers, got {v}", self.parameter.name()),
                ));
            }
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    NoJam,
    #[default]
    Uniform,
    Algo1,
    Algo2,
    Algo3,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Self::NoJam => "no_jam",
            Self::Uniform => "uniform",
            Self::Algo1 => "algo1",
            Self::Algo2 => "algo2",
            Self::Algo3 => "algo3",
        }
    }
}

/// What uniform jamming minimizes when no `phi` is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Sop,
    Area,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub n_samples: usize,
    pub seed: Option<u64>,
    /// Antennas simulated; defaults to the scenario's array size.
    pub finite_nt: Option<usize>,
    #[serde(default = "default_estimate")]
    pub estimate: McEstimate,
    /// Rician K-factor of every link; omit for pure line of sight.
    pub k_factor: Option<f64>,
}

fn default_estimate() -> McEstimate {
    McEstimate::Sop
}

/// Seed used when neither the manifest nor `--seed` gives one.
pub const DEFAULT_SEED: u64 = 1;

impl Manifest {
    pub fn load(path: &Path) -> Result<Self, ManifestError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ManifestError::new("manifest", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ManifestError> {
        let m: Manifest = serde_json::from_str(text).map_err(|e| ManifestError::new("manifest", e.to_string()))?;
        m.base_config()?;
        m.base_region()?;
        if let Some(s) = &m.sweep {
            s.grid()?;
        }
        if let Some(p) = m.phi {
            if !(0.0..=1.0).contains(&p) {
                return Err(ManifestError::new("phi", format!("must lie in [0, 1], got {p}")));
            }
        }
        if let Some(mc) = &m.mc {
            if mc.n_samples == 0 {
                return Err(ManifestError::new("mc.n_samples", "must be positive"));
            }
            if mc.k_factor.is_some_and(|k| !(k >= 0.0)) {
                return Err(ManifestError::new("mc.k_factor", "must be non-negative"));
            }
        }
        Ok(m)
    }

    /// Scenario before any sweep value is applied.
    pub fn base_config(&self) -> Result<ScenarioConfig, ManifestError> {
        let s = &self.scenario;
        let geometry = ArrayGeometry::new(s.n_antennas, s.spacing)
            .map_err(|e| ManifestError::new("scenario.n_antennas", e.to_string()))?;
        let cfg = ScenarioConfig {
            geometry,
            alpha: s.alpha,
            p_tot: s.p_tot_w,
            n0: s.n0_w,
            r_th: s.r_th,
            bob_theta: s.bob_theta_deg.to_radians(),
            bob_dist: s.bob_dist_m,
            k_eb: s.k_eb,
            n_eves: s.n_eves,
        };
        cfg.validate().map_err(|e| ManifestError::new("scenario", e.to_string()))?;
        Ok(cfg)
    }

    pub fn base_region(&self) -> Result<Option<SuspiciousRegion>, ManifestError> {
        let Some(r) = &self.region else { return Ok(None) };
        region_from(r.angles_deg, r.d_min_m, r.d_max_m).map(Some)
    }

    /// Scenario, region and fixed `φ` for one sweep value.
    pub fn at(&self, value: Option<f64>) -> Result<Point, ManifestError> {
        let mut spec = self.scenario.clone();
        let mut region = self.region.clone();
        let mut phi = self.phi;
        if let (Some(sweep), Some(v)) = (&self.sweep, value) {
            let need_region = |r: &mut Option<RegionSpec>| {
                r.as_mut().map(|_| ()).ok_or_else(|| {
                    ManifestError::new("sweep.parameter", format!("{} needs a region", sweep.parameter.name()))
                })
            };
            match sweep.parameter {
                SweepParameter::NAntennas => spec.n_antennas = v as usize,
                SweepParameter::Alpha => spec.alpha = v,
                SweepParameter::RTh => spec.r_th = v,
                SweepParameter::BobThetaDeg => spec.bob_theta_deg = v,
                SweepParameter::BobDistM => spec.bob_dist_m = v,
                SweepParameter::KEb => spec.k_eb = v,
                SweepParameter::NEves => spec.n_eves = v as usize,
                SweepParameter::Phi => phi = Some(v),
                SweepParameter::DMinM => {
                    need_region(&mut region)?;
                    region.as_mut().unwrap().d_min_m = v;
                }
                SweepParameter::DMaxM => {
                    need_region(&mut region)?;
                    region.as_mut().unwrap().d_max_m = v;
                }
            }
        }
        let m = Manifest { scenario: spec, region, phi, ..self.clone() };
        let field = self.sweep.as_ref().map_or("scenario", |s| s.parameter.name());
        let cfg = m.base_config().map_err(|e| ManifestError::new(field, e.message))?;
        let region = m.base_region().map_err(|e| ManifestError::new(field, e.message))?;
        if let Some(p) = phi {
            if !(0.0..=1.0).contains(&p) {
                return Err(ManifestError::new("phi", format!("must lie in [0, 1], got {p}")));
            }
        }
        Ok(Point { cfg, region, phi })
    }

    pub fn sweep_grid(&self) -> Result<Option<(SweepParameter, Vec<f64>)>, ManifestError> {
        self.sweep.as_ref().map(|s| Ok((s.parameter, s.grid()?))).transpose()
    }

    pub fn require_region(&self) -> Result<(), ManifestError> {
        if self.region.is_none() {
            return Err(ManifestError::new("region", "required by this command and scheme"));
        }
        Ok(())
    }

    /// Monte Carlo settings for one scenario, with `--seed` taking
    /// precedence over the manifest.
    pub fn mc_spec(&self, cfg: &ScenarioConfig, seed: Option<u64>) -> Result<McRunSpec, ManifestError> {
        let mc = self.mc.as_ref().ok_or_else(|| ManifestError::new("mc", "required by mc-validate"))?;
        Ok(McRunSpec {
            n_samples: mc.n_samples,
            master_seed: seed.or(mc.seed).unwrap_or(DEFAULT_SEED),
            finite_nt: mc.finite_nt.unwrap_or(cfg.geometry.n_antennas()),
            estimate: mc.estimate,
            k_factor: mc.k_factor.unwrap_or(f64::INFINITY),
        })
    }
}

/// One evaluation point of a manifest.
#[derive(Debug, Clone)]
pub struct Point {
    pub cfg: ScenarioConfig,
    pub region: Option<SuspiciousRegion>,
    pub phi: Option<f64>,
}

pub fn region_from(angles_deg: [f64; 2], d_min: f64, d_max: f64) -> Result<SuspiciousRegion, ManifestError> {
    let angles = AngleRange::from_degrees(angles_deg[0], angles_deg[1])
        .map_err(|e| ManifestError::new("region.angles_deg", e.to_string()))?;
    SuspiciousRegion::constant(angles, d_min, d_max).map_err(|e| ManifestError::new("region", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_a_sparse_manifest() {
        let m = Manifest::parse(r#"{"scenario": {"n_antennas": 50}}"#).unwrap();
        let cfg = m.base_config().unwrap();
        assert_eq!(cfg.geometry.n_antennas(), 50);
        assert_eq!(cfg.alpha, 3.0);
        assert_eq!(m.scheme, Scheme::Uniform);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let e = Manifest::parse(r#"{"scenario": {"n_antenas": 50}}"#).unwrap_err();
        assert!(e.message.contains("n_antenas"), "{e}");
    }

    #[test]
    fn range_sweeps_are_inclusive() {
        let s = SweepSpec { parameter: SweepParameter::BobDistM, values: None, start: Some(60.0), stop: Some(160.0), step: Some(10.0) };
        let g = s.grid().unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[10], 160.0);
    }

    #[test]
    fn empty_sweeps_are_rejected() {
        let e = Manifest::parse(r#"{"sweep": {"parameter": "phi", "values": []}}"#).unwrap_err();
        assert_eq!(e.field, "sweep");
        let e = Manifest::parse(r#"{"sweep": {"parameter": "phi", "start": 1, "stop": 0, "step": 0.1}}"#).unwrap_err();
        assert_eq!(e.field, "sweep");
    }

    #[test]
    fn sweep_values_override_the_scenario() {
        let m = Manifest::parse(
            r#"{"region": {"angles_deg": [-15, 15], "d_min_m": 50, "d_max_m": 100},
                "sweep": {"parameter": "d_max_m", "values": [120]}}"#,
        )
        .unwrap();
        let p = m.at(Some(120.0)).unwrap();
        assert_eq!(p.region.unwrap().limits_at(0.0), (50.0, 120.0));
    }
}
