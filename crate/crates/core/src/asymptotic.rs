//! Large-array SINRs and secrecy outage regions (SORs).
//!
//! With `N` antennas and maximum ratio transmission toward Bob, the SINRs
//! converge to deterministic functions of the crosstalk `s_eb(θ)`. An
//! eavesdropper at polar position `(θ, d)` causes a secrecy outage when
//! `d < d̄(θ)`, so the SOR is the star-shaped region under the boundary
//! `d̄(θ)`:
//!
//! * no jamming: `d̄^α = C1 s_eb`;
//! * uniform null-space jamming: `d̄^α = C1 s_eb − C2` where `s_eb > C3`;
//! * directional jamming: `d̄^α = h((1−φ)P̃) s_eb − Σ p̃_n |s̄(θ)ᴴ v_n|²`.
//!
//! Powers inside formulas are normalized by the noise power (`P̃ = P / N0`).

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::crosstalk::{
    dirichlet, kernel_lobes, peak_value, s_kernel, AngleRange, ArrayGeometry, CrosstalkProfile, PeakForm,
};
use crate::error::{Error, Result};
use crate::numeric::{golden_max, simpson_samples};

/// System parameters shared by every analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub geometry: ArrayGeometry,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Total transmit power (W).
    pub p_tot: f64,
    /// Noise power (W).
    pub n0: f64,
    /// Target secrecy rate (bits/s/Hz).
    pub r_th: f64,
    /// Bob's angle (rad).
    pub bob_theta: f64,
    /// Bob's distance (m).
    pub bob_dist: f64,
    /// Rician K-factor product between Eve and Bob.
    pub k_eb: f64,
    /// Number of eavesdroppers.
    pub n_eves: usize,
}

impl ScenarioConfig {
    /// The reference setting used throughout the figures: half-wavelength
    /// spacing, `α = 3`, 1 W over 1e-8 W noise, Bob at broadside 100 m away,
    /// pure line of sight and a single eavesdropper.
    pub fn reference(n_antennas: usize, r_th: f64) -> Result<Self> {
        let cfg = Self {
            geometry: ArrayGeometry::new(n_antennas, 0.5)?,
            alpha: 3.0,
            p_tot: 1.0,
            n0: 1e-8,
            r_th,
            bob_theta: 0.0,
            bob_dist: 100.0,
            k_eb: 1.0,
            n_eves: 1,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(bool, &str); 8] = [
            (self.p_tot > 0.0 && self.p_tot.is_finite(), "p_tot must be positive"),
            (self.n0 > 0.0 && self.n0.is_finite(), "n0 must be positive"),
            (self.r_th >= 0.0 && self.r_th.is_finite(), "r_th must be non-negative"),
            (self.bob_dist > 0.0 && self.bob_dist.is_finite(), "bob_dist must be positive"),
            ((2.0..=6.0).contains(&self.alpha), "alpha must lie in [2, 6]"),
            ((0.0..=1.0).contains(&self.k_eb), "k_eb must lie in [0, 1]"),
            (self.n_eves >= 1, "n_eves must be at least 1"),
            (self.bob_theta.abs() <= FRAC_PI_2 + 1e-12, "bob_theta must lie in [-π/2, π/2]"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::domain(*msg)),
            None => Ok(()),
        }
    }

    pub fn n(&self) -> f64 {
        self.geometry.n_antennas() as f64
    }

    /// `P_tot / N0`.
    pub fn p_tilde(&self) -> f64 {
        self.p_tot / self.n0
    }

    /// `2^{R_th}`.
    pub fn rate_gain(&self) -> f64 {
        self.r_th.exp2()
    }

    /// `d_b^{-α}`.
    pub fn bob_path_gain(&self) -> f64 {
        self.bob_dist.powf(-self.alpha)
    }

    /// Crosstalk relative to Bob with the scenario's K-factor product.
    pub fn bob_profile(&self) -> CrosstalkProfile {
        CrosstalkProfile::new(self.geometry, self.bob_theta, self.k_eb)
            .expect("validated scenario yields a valid profile")
    }

    /// `s_eb(θ)`.
    pub fn s_eb(&self, theta: f64) -> f64 {
        self.k_eb * s_kernel((theta.sin() - self.bob_theta.sin()).abs(), &self.geometry)
    }
}

fn check_phi(phi: f64) -> Result<()> {
    if (0.0..1.0).contains(&phi) {
        Ok(())
    } else {
        Err(Error::domain(format!("jamming fraction must lie in [0, 1), got {phi}")))
    }
}

/// Bob's SINR `P̃_b d_b^{-α} N` under null-space jamming.
pub fn sinr_bob_uniform(cfg: &ScenarioConfig, phi: f64) -> Result<f64> {
    cfg.validate()?;
    check_phi(phi)?;
    Ok((1.0 - phi) * cfg.p_tilde() * cfg.bob_path_gain() * cfg.n())
}

/// Eve's SINR under uniform null-space jamming.
pub fn sinr_eve_uniform(cfg: &ScenarioConfig, phi: f64, eve_theta: f64, eve_dist: f64) -> Result<f64> {
    cfg.validate()?;
    check_phi(phi)?;
    if !(eve_dist > 0.0) {
        return Err(Error::domain(format!("eve distance must be positive, got {eve_dist}")));
    }
    let s = cfg.s_eb(eve_theta);
    let path = eve_dist.powf(-cfg.alpha);
    let p_b = (1.0 - phi) * cfg.p_tilde();
    let p_jam = phi * cfg.p_tilde();
    Ok(p_b * path * cfg.n() * s / (1.0 + path * p_jam * (1.0 - s)))
}

/// Largest jamming fraction that still lets Bob reach `R_th`.
///
/// Returns [`Error::InfeasibleRate`] when even `φ = 0` falls short; the
/// deficit is `-φ_max`.
pub fn phi_max(cfg: &ScenarioConfig) -> Result<f64> {
    cfg.validate()?;
    let v = 1.0 - (cfg.rate_gain() - 1.0) / (cfg.p_tilde() * cfg.bob_path_gain() * cfg.n());
    if v <= 0.0 {
        return Err(Error::InfeasibleRate { deficit: -v });
    }
    Ok(v)
}

/// `h(x) = x N 2^R / (1 + x d_b^{-α} N − 2^R)`: the Eve gain that turns
/// crosstalk into `d̄^α` for Bob signal power `x` (normalized).
pub fn outage_gain(cfg: &ScenarioConfig, p_b_tilde: f64) -> f64 {
    let g = cfg.rate_gain();
    p_b_tilde * cfg.n() * g / (1.0 + p_b_tilde * cfg.bob_path_gain() * cfg.n() - g)
}

/// Eve gain `h` when a normalized jamming power `bob_jam` (same units as
/// [`PowerAllocation::jamming_at`]) also reaches Bob through beams that are
/// not orthogonal to his channel. Equals [`outage_gain`] for `bob_jam = 0`.
///
/// `None` when Bob's SINR no longer supports `R_th`.
pub fn outage_gain_leaky(cfg: &ScenarioConfig, p_b_tilde: f64, bob_jam: f64) -> Option<f64> {
    let g = cfg.rate_gain();
    let path = cfg.bob_path_gain();
    let sinr_b = p_b_tilde * path * cfg.n() / (1.0 + path * bob_jam);
    let margin = 1.0 + sinr_b - g;
    (margin > 0.0).then(|| p_b_tilde * cfg.n() * g / margin)
}

/// Eve gain `h` of an allocation, counting the jamming that leaks to Bob.
pub fn allocation_gain(cfg: &ScenarioConfig, alloc: &PowerAllocation) -> Result<f64> {
    let pm = phi_max(cfg)?;
    let leak = alloc.jamming_at(cfg, cfg.bob_theta);
    outage_gain_leaky(cfg, (1.0 - alloc.phi) * cfg.p_tilde(), leak)
        .filter(|_| alloc.phi < pm)
        .ok_or(Error::InfeasibleRate { deficit: alloc.phi - pm })
}

/// Constants describing the uniform-jamming SOR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SorConstants {
    pub c1: f64,
    pub c2: f64,
    /// `C2 / C1`, the crosstalk below which Eve can never cause outage.
    pub c3: f64,
}

/// `C1 = h((1−φ)P̃) + φP̃`, `C2 = φP̃`, `C3 = C2/C1`.
///
/// At `φ = φ_max` Bob's margin is zero and `C1` is unbounded, so the
/// admissible range is half-open.
pub fn sor_constants(cfg: &ScenarioConfig, phi: f64) -> Result<SorConstants> {
    let pm = phi_max(cfg)?;
    if phi < 0.0 {
        return Err(Error::domain(format!("jamming fraction must be non-negative, got {phi}")));
    }
    if phi >= pm {
        return Err(Error::InfeasibleRate { deficit: phi - pm });
    }
    let p = cfg.p_tilde();
    let c2 = phi * p;
    let c1 = outage_gain(cfg, (1.0 - phi) * p) + c2;
    Ok(SorConstants { c1, c2, c3: c2 / c1 })
}

/// Angles in `[-π/2, π/2]` where `s_eb` vanishes, sorted.
///
/// Offsets that are multiples of `N` land on grating peaks, not nulls.
pub fn null_angles(geom: &ArrayGeometry, theta_ref: f64) -> Vec<f64> {
    let w = geom.null_spacing();
    let n = geom.n_antennas() as i64;
    let sr = theta_ref.sin();
    let k_lo = ((-1.0 - sr) / w).ceil() as i64;
    let k_hi = ((1.0 - sr) / w).floor() as i64;
    (k_lo..=k_hi)
        .filter(|k| k % n != 0)
        .map(|k| (sr + k as f64 * w).clamp(-1.0, 1.0).asin())
        .collect()
}

/// Sorted angle grid over `[-π/2, π/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGrid {
    thetas: Vec<f64>,
}

/// Grid intervals per lobe used by the default grid.
pub const DEFAULT_INTERVALS_PER_LOBE: usize = 64;

impl ThetaGrid {
    /// Grid with nodes at every null of `s(|sin θ − sin θ_ref|)` and at
    /// `θ_ref`, each segment split into `per_lobe` equal intervals (rounded
    /// up to even, for Simpson pairs).
    pub fn lobe_aligned(geom: &ArrayGeometry, theta_ref: f64, per_lobe: usize) -> Result<Self> {
        if per_lobe < 2 {
            return Err(Error::domain("a lobe needs at least 2 grid intervals"));
        }
        let per = per_lobe + per_lobe % 2;
        let mut knots = null_angles(geom, theta_ref);
        knots.extend([-FRAC_PI_2, FRAC_PI_2, theta_ref.clamp(-FRAC_PI_2, FRAC_PI_2)]);
        knots.sort_by(f64::total_cmp);
        knots.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

        let mut thetas = Vec::with_capacity(knots.len() * per + 1);
        for w in knots.windows(2) {
            for i in 0..per {
                thetas.push(w[0] + (w[1] - w[0]) * i as f64 / per as f64);
            }
        }
        thetas.push(FRAC_PI_2);
        Ok(Self { thetas })
    }

    /// Default grid for a scenario: lobe-aligned around Bob.
    pub fn for_scenario(cfg: &ScenarioConfig) -> Self {
        Self::lobe_aligned(&cfg.geometry, cfg.bob_theta, DEFAULT_INTERVALS_PER_LOBE)
            .expect("default resolution is valid")
    }

    /// `n` evenly spaced angles over `[-π/2, π/2]`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain("a uniform grid needs at least 3 points"));
        }
        Ok(Self { thetas: crate::numeric::linspace(-FRAC_PI_2, FRAC_PI_2, n) })
    }

    /// Wrap caller-provided angles; they must be strictly increasing and lie
    /// in `[-π/2, π/2]`.
    pub fn from_thetas(thetas: Vec<f64>) -> Result<Self> {
        if thetas.len() < 2 {
            return Err(Error::domain("grid needs at least 2 points"));
        }
        if thetas.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("grid must be strictly increasing"));
        }
        if thetas[0] < -FRAC_PI_2 - 1e-12 || thetas[thetas.len() - 1] > FRAC_PI_2 + 1e-12 {
            return Err(Error::domain("grid must lie within [-π/2, π/2]"));
        }
        Ok(Self { thetas })
    }

    /// Same nodes with every interval halved.
    pub fn refined(&self) -> Self {
        let mut thetas = Vec::with_capacity(2 * self.thetas.len());
        for w in self.thetas.windows(2) {
            thetas.push(w[0]);
            thetas.push(0.5 * (w[0] + w[1]));
        }
        thetas.push(*self.thetas.last().expect("grid is non-empty"));
        Self { thetas }
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }
}

/// One lobe of an SOR boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lobe {
    /// 0 for the main lobe; side lobes count outward, negative toward
    /// smaller angles.
    pub order: i32,
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub max_radius: f64,
    /// Grid points inside `[theta_lo, theta_hi]`.
    pub n_points: usize,
}

/// SOR boundary `d̄(θ)` sampled on a grid, with its lobe decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SorBoundary {
    pub thetas: Vec<f64>,
    pub radii: Vec<f64>,
    pub lobes: Vec<Lobe>,
}

/// Minimum grid points per lobe for a trustworthy area.
pub const MIN_POINTS_PER_LOBE: usize = 32;

impl SorBoundary {
    /// Sample `radius(θ)` on `grid` and split it into lobes at the nulls of
    /// the crosstalk toward `theta_ref`.
    pub fn from_fn<F>(geom: &ArrayGeometry, theta_ref: f64, grid: &ThetaGrid, radius: F) -> Self
    where
        F: Fn(f64) -> f64,
    {
        let thetas = grid.thetas.clone();
        let radii: Vec<f64> = thetas.iter().map(|&t| radius(t).max(0.0)).collect();

        let mut edges = null_angles(geom, theta_ref);
        edges.insert(0, -FRAC_PI_2);
        edges.push(FRAC_PI_2);
        edges.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        let main = edges
            .windows(2)
            .position(|w| theta_ref >= w[0] && theta_ref <= w[1])
            .unwrap_or(0) as i32;

        let lobes = edges
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let (lo, hi) = (w[0], w[1]);
                let (count, max_radius) = thetas
                    .iter()
                    .zip(&radii)
                    .filter(|(t, _)| **t >= lo - 1e-13 && **t <= hi + 1e-13)
                    .fold((0usize, 0.0f64), |(c, m), (_, r)| (c + 1, m.max(*r)));
                Lobe { order: i as i32 - main, theta_lo: lo, theta_hi: hi, max_radius, n_points: count }
            })
            .collect();
        Self { thetas, radii, lobes }
    }

    pub fn lobe(&self, order: i32) -> Option<&Lobe> {
        self.lobes.iter().find(|l| l.order == order)
    }

    /// True when every lobe with a positive radius has at least `min_points`
    /// grid samples.
    pub fn is_resolved(&self, min_points: usize) -> bool {
        self.lobes.iter().all(|l| l.max_radius == 0.0 || l.n_points >= min_points)
    }

    /// Area of the part of the SOR inside lobe `order`.
    pub fn lobe_area(&self, order: i32) -> f64 {
        let Some(l) = self.lobe(order) else { return 0.0 };
        let (x, y): (Vec<f64>, Vec<f64>) = self
            .thetas
            .iter()
            .zip(&self.radii)
            .filter(|(t, _)| **t >= l.theta_lo - 1e-13 && **t <= l.theta_hi + 1e-13)
            .map(|(t, r)| (*t, 0.5 * r * r))
            .unzip();
        simpson_samples(&x, &y)
    }

    /// Area of the SOR restricted to the angles in `range`, with `d̄²`
    /// interpolated linearly between grid nodes.
    pub fn area_within(&self, range: &AngleRange) -> f64 {
        let (a, b) = (range.min(), range.max());
        let th = &self.thetas;
        let sq = |i: usize| 0.5 * self.radii[i] * self.radii[i];
        let at = |t: f64| {
            let i = th.partition_point(|x| *x <= t).clamp(1, th.len() - 1);
            let w = ((t - th[i - 1]) / (th[i] - th[i - 1])).clamp(0.0, 1.0);
            sq(i - 1) + w * (sq(i) - sq(i - 1))
        };
        let mut xs = vec![a];
        let mut ys = vec![at(a)];
        for (i, t) in th.iter().enumerate() {
            if *t > a && *t < b {
                xs.push(*t);
                ys.push(sq(i));
            }
        }
        xs.push(b);
        ys.push(at(b));
        crate::numeric::trapezoid_samples(&xs, &ys)
    }

    /// Largest radius over the whole boundary.
    pub fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }
}

/// How the jamming power is spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum JammingBasis {
    /// Equal power over an orthonormal basis of the null space of Bob's
    /// line-of-sight beam.
    NullSpaceUniform,
    /// Columns of the DFT matrix, identified by their sine coordinate
    /// `k/(N d)` (one entry per column, possibly outside `[-1, 1]`).
    DftSelected { sines: Vec<f64> },
    /// Steered beams `s̄(θ)/√N` given by their sine coordinate.
    Custom { sines: Vec<f64> },
    /// Steered beams projected onto the null space of Bob's line-of-sight
    /// channel and renormalized, so no jamming reaches Bob.
    Projected { sines: Vec<f64> },
}

impl JammingBasis {
    pub fn beam_sines(&self) -> Option<&[f64]> {
        match self {
            JammingBasis::NullSpaceUniform => None,
            JammingBasis::DftSelected { sines }
            | JammingBasis::Custom { sines }
            | JammingBasis::Projected { sines } => Some(sines),
        }
    }

    /// `|s̄(θ)ᴴ v|²` for the beam with sine coordinate `u`, at `sin θ = st`.
    /// Not meaningful for [`JammingBasis::NullSpaceUniform`].
    pub fn beam_response(&self, u: f64, st: f64, cfg: &ScenarioConfig) -> f64 {
        let n = cfg.n();
        let geom = &cfg.geometry;
        match self {
            JammingBasis::Projected { .. } => {
                let sb = cfg.bob_theta.sin();
                let c = dirichlet(u - sb, geom);
                let v = dirichlet(u - st, geom) - dirichlet(sb - st, geom) * c;
                n * v * v / (1.0 - c * c)
            }
            _ => n * s_kernel(st - u, geom),
        }
    }
}

/// Split of the transmit power between Bob's signal and jamming beams.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    pub phi: f64,
    /// Watts per jamming beam.
    pub beam_powers: Vec<f64>,
    pub basis: JammingBasis,
}

impl PowerAllocation {
    pub fn no_jamming() -> Self {
        Self { phi: 0.0, beam_powers: Vec::new(), basis: JammingBasis::NullSpaceUniform }
    }

    /// `φ P_tot` spread evenly over the `N − 1` null-space directions.
    pub fn uniform(cfg: &ScenarioConfig, phi: f64) -> Result<Self> {
        check_phi(phi)?;
        let n = cfg.geometry.n_antennas() - 1;
        Ok(Self { phi, beam_powers: vec![phi * cfg.p_tot / n as f64; n], basis: JammingBasis::NullSpaceUniform })
    }

    /// Explicit beam powers; `φ` is implied by their sum.
    pub fn beams(cfg: &ScenarioConfig, basis: JammingBasis, beam_powers: Vec<f64>) -> Result<Self> {
        match basis.beam_sines() {
            Some(s) if s.len() != beam_powers.len() => {
                return Err(Error::domain(format!(
                    "{} beam powers for {} beams",
                    beam_powers.len(),
                    s.len()
                )))
            }
            None => return Err(Error::domain("explicit beam powers need a beam basis")),
            _ => {}
        }
        if beam_powers.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::domain("beam powers must be non-negative"));
        }
        if let JammingBasis::Projected { sines } = &basis {
            let sb = cfg.bob_theta.sin();
            if sines.iter().any(|u| s_kernel(u - sb, &cfg.geometry) > 1.0 - 1e-12) {
                return Err(Error::domain("a projected beam points at Bob and vanishes"));
            }
        }
        let phi = beam_powers.iter().sum::<f64>() / cfg.p_tot;
        check_phi(phi)?;
        Ok(Self { phi, beam_powers, basis })
    }

    pub fn total_power(&self) -> f64 {
        self.beam_powers.iter().sum()
    }

    /// Normalized jamming power reaching a line-of-sight receiver at `θ`:
    /// `Σ p̃_n |s̄(θ)ᴴ v_n|²`.
    pub fn jamming_at(&self, cfg: &ScenarioConfig, theta: f64) -> f64 {
        let n = cfg.n();
        let st = theta.sin();
        match self.basis.beam_sines() {
            None => {
                // Σ_n |s̄ᴴ v_n|² over an orthonormal completion equals
                // ‖s̄‖² − |s̄ᴴ w_b|² = N (1 − s(Δ)).
                let total = self.total_power() / cfg.n0;
                let leak = 1.0 - s_kernel((st - cfg.bob_theta.sin()).abs(), &cfg.geometry);
                total * n * leak / (n - 1.0)
            }
            Some(sines) => sines
                .iter()
                .zip(&self.beam_powers)
                .filter(|(_, p)| **p > 0.0)
                .map(|(u, p)| p / cfg.n0 * self.basis.beam_response(*u, st, cfg))
                .sum(),
        }
    }
}

/// Uniform-jamming SOR boundary.
pub fn sor_boundary_uniform(cfg: &ScenarioConfig, phi: f64, grid: &ThetaGrid) -> Result<SorBoundary> {
    let c = sor_constants(cfg, phi)?;
    let alpha = cfg.alpha;
    Ok(SorBoundary::from_fn(&cfg.geometry, cfg.bob_theta, grid, |t| {
        let s = cfg.s_eb(t);
        if s > c.c3 {
            (c.c1 * s - c.c2).max(0.0).powf(1.0 / alpha)
        } else {
            0.0
        }
    }))
}

/// SOR boundary without jamming.
pub fn sor_boundary_nojam(cfg: &ScenarioConfig, grid: &ThetaGrid) -> Result<SorBoundary> {
    sor_boundary_uniform(cfg, 0.0, grid)
}

/// SOR boundary for an arbitrary jamming allocation.
pub fn sor_boundary_directional(
    cfg: &ScenarioConfig,
    alloc: &PowerAllocation,
    grid: &ThetaGrid,
) -> Result<SorBoundary> {
    let gain = allocation_gain(cfg, alloc)?;
    let alpha = cfg.alpha;
    Ok(SorBoundary::from_fn(&cfg.geometry, cfg.bob_theta, grid, |t| {
        let v = gain * cfg.s_eb(t) - alloc.jamming_at(cfg, t);
        if v > 0.0 {
            v.powf(1.0 / alpha)
        } else {
            0.0
        }
    }))
}

/// Radius of the main lobe and of every representable side lobe at their
/// peaks: `(C1 K PV_m − C2)^{1/α}`, clipped at zero.
pub fn lobe_radii(cfg: &ScenarioConfig, phi: f64) -> Result<Vec<f64>> {
    let c = sor_constants(cfg, phi)?;
    let radii = (0..)
        .map_while(|m| peak_value(m, &cfg.geometry, PeakForm::Exact).ok())
        .map(|pv| (c.c1 * cfg.k_eb * pv - c.c2).max(0.0).powf(1.0 / cfg.alpha))
        .collect();
    Ok(radii)
}

/// Largest angular distance from Bob at which the uniform-jamming SOR is
/// still non-empty; `π` without jamming.
pub fn delta_theta_max(cfg: &ScenarioConfig, phi: f64) -> Result<f64> {
    let c = sor_constants(cfg, phi)?;
    if c.c3 == 0.0 {
        return Ok(PI);
    }
    if cfg.k_eb <= c.c3 {
        return Ok(0.0);
    }
    let u = c.c3 / cfg.k_eb;
    let geom = &cfg.geometry;
    let sb = cfg.bob_theta.sin();
    let mut best = 0.0f64;
    for (dir, reach) in [(1.0, 1.0 - sb), (-1.0, 1.0 + sb)] {
        if reach <= 0.0 {
            continue;
        }
        for l in kernel_lobes(geom, reach) {
            let hi = l.hi.min(reach);
            let (peak_x, peak) = if l.peak_x <= hi {
                (l.peak_x, l.peak)
            } else {
                golden_max(|x| s_kernel(x, geom), l.lo, hi, 1e-13)
            };
            if peak <= u {
                continue;
            }
            let x_c = if s_kernel(hi, geom) > u {
                hi
            } else {
                crate::numeric::bisect(|x| s_kernel(x, geom) - u, peak_x, hi, 1e-13)
            };
            let theta = (sb + dir * x_c).clamp(-1.0, 1.0).asin();
            best = best.max((theta - cfg.bob_theta).abs());
        }
    }
    Ok(best)
}

/// `∫ ½ d̄(θ)² dθ` by composite Simpson over the boundary grid.
///
/// Logs a warning when some lobe has fewer than [`MIN_POINTS_PER_LOBE`]
/// samples.
pub fn sor_area(boundary: &SorBoundary) -> f64 {
    if !boundary.is_resolved(MIN_POINTS_PER_LOBE) {
        log::warn!("SOR boundary grid resolves some lobe with fewer than {MIN_POINTS_PER_LOBE} points");
    }
    let y: Vec<f64> = boundary.radii.iter().map(|r| 0.5 * r * r).collect();
    simpson_samples(&boundary.thetas, &y)
}

/// Closed-form bound on the area of side lobe `m` (one side), valid for
/// free-space loss and Bob at broadside.
pub fn side_lobe_area_bound(cfg: &ScenarioConfig, phi: f64, m: usize) -> Result<f64> {
    if cfg.alpha != 2.0 {
        return Err(Error::precondition(format!("side-lobe bound needs alpha = 2, got {}", cfg.alpha)));
    }
    if cfg.bob_theta != 0.0 {
        return Err(Error::precondition("side-lobe bound needs Bob at broadside"));
    }
    if m < 1 {
        return Err(Error::precondition("side-lobe bound needs m >= 1"));
    }
    let c = sor_constants(cfg, phi)?;
    let mf = m as f64;
    Ok((cfg.k_eb * c.c1 / (PI * PI * mf * mf) - 2.0 * c.c2) / (4.0 * cfg.n() * cfg.geometry.spacing()))
}

/// Angle range spanned by lobe `order` of a boundary.
pub fn lobe_range(lobe: &Lobe) -> AngleRange {
    AngleRange::new(lobe.theta_lo, lobe.theta_hi).expect("lobes have positive width")
}
