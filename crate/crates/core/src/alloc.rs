//! Jamming power allocation.
//!
//! * Uniform jamming: a 1-D search over the jamming fraction `φ`
//!   ([`optimize_phi_uniform`]) and, for Eves sharing one angle, the
//!   closed-form optimum ([`phi_opt_closed_form`]).
//! * Directional jamming over DFT beams: with a known suspicious region
//!   ([`algorithm1_directional`]), by coordinate descent on the SOR area
//!   ([`algorithm2_iterative`]), and restricted to the two dominating side
//!   lobes ([`algorithm3_two_lobes`]).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotic::{
    allocation_gain, outage_gain, outage_gain_leaky, phi_max, sor_area, sor_boundary_directional, sor_boundary_uniform, JammingBasis,
    PowerAllocation, ScenarioConfig, SorBoundary, ThetaGrid,
};
use crate::crosstalk::{kernel_lobes, s_kernel, AngleRange, ArrayGeometry};
use crate::error::{Error, Result};
use crate::numeric::{golden_max, golden_min, simpson_weights};
use crate::sop::{intersection_grid, sop_intersection, SopEvaluator, SuspiciousRegion};

/// Step of the φ grid in every 1-D search.
pub const PHI_GRID_STEP: f64 = 1e-3;
/// Golden-section tolerance after the φ grid search.
pub const PHI_REFINE_TOL: f64 = 1e-5;

/// What uniform jamming should minimize.
#[derive(Debug, Clone, PartialEq)]
pub enum UniformObjective {
    /// SOP over a constant-boundary suspicious region.
    Sop(SuspiciousRegion),
    /// Area of the whole SOR.
    SorArea,
    /// Area of the SOR restricted to an angle interval.
    PartialArea(AngleRange),
}

/// Result of an allocation search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationResult {
    pub phi_opt: f64,
    pub allocation: PowerAllocation,
    /// Objective value of `allocation` (probability or m²).
    pub objective: f64,
    /// Objective after each search step.
    pub trace: Vec<f64>,
}

/// Index of the smallest value; ties go to the earliest entry.
fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v < values[best] { i } else { best })
}

/// Evaluate the uniform-jamming objective at `φ`.
pub fn uniform_objective(cfg: &ScenarioConfig, objective: &UniformObjective, phi: f64) -> Result<f64> {
    UniformObjectiveEval::new(cfg, objective)?.eval(phi)
}

enum UniformObjectiveEval {
    Sop(SopEvaluator),
    Area { cfg: ScenarioConfig, grid: ThetaGrid, range: Option<AngleRange> },
}

impl UniformObjectiveEval {
    fn new(cfg: &ScenarioConfig, objective: &UniformObjective) -> Result<Self> {
        Ok(match objective {
            UniformObjective::Sop(region) => Self::Sop(SopEvaluator::new(cfg, region)?),
            UniformObjective::SorArea => Self::Area { cfg: *cfg, grid: ThetaGrid::for_scenario(cfg), range: None },
            UniformObjective::PartialArea(r) => {
                Self::Area { cfg: *cfg, grid: ThetaGrid::for_scenario(cfg), range: Some(*r) }
            }
        })
    }

    fn eval(&self, phi: f64) -> Result<f64> {
        match self {
            Self::Sop(e) => e.sop(phi),
            Self::Area { cfg, grid, range } => {
                let b = sor_boundary_uniform(cfg, phi, grid)?;
                Ok(match range {
                    None => sor_area(&b),
                    Some(r) => b.area_within(r),
                })
            }
        }
    }
}

/// Best uniform-jamming fraction on a `step` grid over `[0, φ_max)`, then
/// golden-section refinement around the grid minimizer.
pub fn optimize_phi_uniform_with_step(
    cfg: &ScenarioConfig,
    objective: &UniformObjective,
    step: f64,
) -> Result<AllocationResult> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::domain(format!("φ step must lie in (0, 1), got {step}")));
    }
    let pm = phi_max(cfg)?;
    let eval = UniformObjectiveEval::new(cfg, objective)?;
    let grid: Vec<f64> = (0..).map(|i| i as f64 * step).take_while(|p| *p < pm).collect();
    let values = grid.par_iter().map(|p| eval.eval(*p)).collect::<Result<Vec<f64>>>()?;
    let i = argmin(&values);
    let (mut phi, mut best) = (grid[i], values[i]);

    let lo = (phi - step).max(0.0);
    let hi = (phi + step).min(pm * (1.0 - 1e-12));
    if hi > lo {
        let (p, v) = golden_min(|p| eval.eval(p).unwrap_or(f64::INFINITY), lo, hi, PHI_REFINE_TOL);
        if v < best {
            phi = p;
            best = v;
        }
    }
    Ok(AllocationResult { phi_opt: phi, allocation: PowerAllocation::uniform(cfg, phi)?, objective: best, trace: values })
}

/// [`optimize_phi_uniform_with_step`] at the default step.
pub fn optimize_phi_uniform(cfg: &ScenarioConfig, objective: &UniformObjective) -> Result<AllocationResult> {
    optimize_phi_uniform_with_step(cfg, objective, PHI_GRID_STEP)
}

/// Which expression produced the closed-form optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhiBranch {
    /// Stationary point of the distance threshold.
    Stationary,
    /// Smallest fraction pushing the threshold below `d_min`.
    ZeroOutage,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormPhi {
    pub phi_opt: f64,
    pub branch: PhiBranch,
    pub phi_g: f64,
    pub phi_0: f64,
}

fn check_crosstalk(s_eb: f64) -> Result<()> {
    if s_eb >= 1.0 {
        return Err(Error::Degenerate(format!("perfect alignment with Bob (s_eb = {s_eb})")));
    }
    if !(s_eb > 0.0) {
        return Err(Error::domain(format!("crosstalk must lie in (0, 1), got {s_eb}")));
    }
    Ok(())
}

/// Optimal jamming fraction when every Eve sits at one angle with
/// crosstalk `s_eb`.
pub fn phi_opt_closed_form(cfg: &ScenarioConfig, s_eb: f64, d_min: f64) -> Result<ClosedFormPhi> {
    check_crosstalk(s_eb)?;
    if !(d_min > 0.0) {
        return Err(Error::domain(format!("d_min must be positive, got {d_min}")));
    }
    cfg.validate()?;
    let g = cfg.rate_gain();
    let b = g - 1.0;
    let n = cfg.n();
    let p = cfg.p_tilde();
    let phi_g = 1.0 - (b + (b * g * s_eb / (1.0 - s_eb) * n).sqrt()) / (cfg.bob_path_gain() * n * p);
    let phi_0 = (s_eb * outage_gain(cfg, p) - d_min.powf(cfg.alpha)) / ((1.0 - s_eb) * p);
    let (phi_opt, branch) = if (0.0..=1.0).contains(&phi_0) && phi_0 < phi_g {
        (phi_0, PhiBranch::ZeroOutage)
    } else {
        (phi_g, PhiBranch::Stationary)
    };
    Ok(ClosedFormPhi { phi_opt, branch, phi_g, phi_0 })
}

/// `g(φ) = s h((1−φ)P̃) − (1−s) φ P̃`: the α-th power of the distance below
/// which an Eve with crosstalk `s_eb` causes outage.
pub fn distance_threshold_power(cfg: &ScenarioConfig, s_eb: f64, phi: f64) -> f64 {
    let p = cfg.p_tilde();
    s_eb * outage_gain(cfg, (1.0 - phi) * p) - (1.0 - s_eb) * phi * p
}

/// Grid step of [`grid_oracle_phi`].
pub const ORACLE_PHI_STEP: f64 = 1e-4;

/// Brute-force counterpart of [`phi_opt_closed_form`]: the smallest grid
/// `φ` with `g(φ) < d_min^α` (zero outage), else the grid minimizer of `g`.
pub fn grid_oracle_phi(cfg: &ScenarioConfig, s_eb: f64, d_min: f64) -> Result<f64> {
    check_crosstalk(s_eb)?;
    let pm = phi_max(cfg)?;
    let target = d_min.powf(cfg.alpha);
    let grid: Vec<f64> = (0..).map(|i| i as f64 * ORACLE_PHI_STEP).take_while(|p| *p < pm).collect();
    let g: Vec<f64> = grid.iter().map(|p| distance_threshold_power(cfg, s_eb, *p)).collect();
    if let Some(i) = g.iter().position(|v| *v < target) {
        return Ok(grid[i]);
    }
    Ok(grid[argmin(&g)])
}

/// Columns of the `N`-point DFT matrix viewed as beams.
///
/// Column `k` is `s̄(θ_k)/√N` with `sin θ_k = k'/(N d)`, `k'` the index
/// wrapped to `(−N/2, N/2]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DftJammingBasis {
    pub geometry: ArrayGeometry,
    /// Sine coordinate `k'/(N d)` of each column.
    pub sines: Vec<f64>,
    /// Physical angle of each column; `None` when `|k'/(N d)| > 1`.
    pub beam_angles: Vec<Option<f64>>,
    /// Columns retained for jamming.
    pub selected: Vec<usize>,
}

/// DFT beam basis with every mappable column selected.
pub fn build_dft_basis(geom: &ArrayGeometry) -> DftJammingBasis {
    let n = geom.n_antennas();
    let sines: Vec<f64> = (0..n)
        .map(|k| {
            let wrapped = if 2 * k > n { k as f64 - n as f64 } else { k as f64 };
            wrapped * geom.null_spacing()
        })
        .collect();
    let beam_angles: Vec<Option<f64>> =
        sines.iter().map(|u| if u.abs() <= 1.0 { Some(u.asin()) } else { None }).collect();
    let selected = (0..n).filter(|k| beam_angles[*k].is_some()).collect();
    DftJammingBasis { geometry: *geom, sines, beam_angles, selected }
}

impl DftJammingBasis {
    pub fn len(&self) -> usize {
        self.sines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sines.is_empty()
    }

    /// Column `k` as an explicit vector.
    pub fn column(&self, k: usize) -> Vec<Complex64> {
        let n = self.geometry.n_antennas();
        let scale = 1.0 / (n as f64).sqrt();
        let step = -2.0 * PI * self.geometry.spacing() * self.sines[k];
        (0..n).map(|i| Complex64::from_polar(scale, step * i as f64)).collect()
    }

    /// `|s̄(θ)ᴴ v_k|² = N s(sin θ − sin θ_k)`.
    pub fn response(&self, k: usize, theta: f64) -> f64 {
        self.geometry.n_antennas() as f64 * s_kernel(theta.sin() - self.sines[k], &self.geometry)
    }

    /// Columns whose beam falls inside Bob's main lobe.
    pub fn main_lobe_columns(&self, bob_theta: f64) -> Vec<usize> {
        let w = self.geometry.null_spacing();
        let sb = bob_theta.sin();
        (0..self.len()).filter(|k| (self.sines[*k] - sb).abs() < w * (1.0 - 1e-9)).collect()
    }

    /// Keep only mappable columns pointing into `range`, outside Bob's main
    /// lobe.
    pub fn select_in(&self, range: &AngleRange, bob_theta: f64) -> Vec<usize> {
        let main = self.main_lobe_columns(bob_theta);
        (0..self.len())
            .filter(|k| !main.contains(k))
            .filter(|k| self.beam_angles[*k].is_some_and(|t| range.contains(t)))
            .collect()
    }

    pub fn to_jamming_basis(&self) -> JammingBasis {
        JammingBasis::DftSelected { sines: self.sines.clone() }
    }
}

/// Angle in `[-π/2, π/2]` maximizing `|s̄(θ)ᴴ v_k|²`, by explicit inner
/// products on an `n_grid`-point grid.
pub fn grid_argmax_angle(basis: &DftJammingBasis, k: usize, n_grid: usize) -> f64 {
    let col = basis.column(k);
    let thetas = crate::numeric::linspace(-PI / 2.0, PI / 2.0, n_grid);
    let power = |t: f64| {
        let s = crate::crosstalk::steering_vector_unchecked(t, &basis.geometry);
        s.iter().zip(&col).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    };
    let values: Vec<f64> = thetas.iter().map(|t| -power(*t)).collect();
    thetas[argmin(&values)]
}

/// Directional jamming with a known suspicious region.
///
/// The fraction is the uniform-jamming SOP optimum; that power is then
/// split equally over the DFT beams pointing into the region (outside Bob's
/// main lobe). The objective is the directional SOP by region intersection;
/// the trace holds the uniform SOP by intersection on the same grid, then
/// the directional one.
pub fn algorithm1_directional(cfg: &ScenarioConfig, region: &SuspiciousRegion) -> Result<AllocationResult> {
    let uniform = optimize_phi_uniform(cfg, &UniformObjective::Sop(region.clone()))?;
    let phi = uniform.phi_opt;
    let grid = intersection_grid(cfg);
    let uniform_sop = sop_intersection(&sor_boundary_uniform(cfg, phi, &grid)?, region, cfg.n_eves)?;
    let Some(allocation) = region_beam_allocation(cfg, &region.angles, phi)? else {
        log::warn!("no DFT beam points into the suspicious region; keeping uniform jamming");
        return Ok(AllocationResult { trace: vec![uniform_sop, uniform_sop], objective: uniform_sop, ..uniform });
    };
    let sop = sop_intersection(&sor_boundary_directional(cfg, &allocation, &grid)?, region, cfg.n_eves)?;
    Ok(AllocationResult { phi_opt: phi, allocation, objective: sop, trace: vec![uniform_sop, sop] })
}

/// `φ P_tot` split equally over the DFT beams aimed into `angles` (Bob's
/// main lobe excluded). `None` when no beam qualifies.
pub fn region_beam_allocation(cfg: &ScenarioConfig, angles: &AngleRange, phi: f64) -> Result<Option<PowerAllocation>> {
    let basis = build_dft_basis(&cfg.geometry);
    let selected = basis.select_in(angles, cfg.bob_theta);
    if selected.is_empty() {
        return Ok(None);
    }
    let mut powers = vec![0.0; basis.len()];
    for k in &selected {
        powers[*k] = phi * cfg.p_tot / selected.len() as f64;
    }
    let allocation = PowerAllocation::beams(cfg, basis.to_jamming_basis(), powers)?;
    Ok(Some(PowerAllocation { phi, ..allocation }))
}

/// SOP of an arbitrary allocation by region intersection on the refined
/// scenario grid.
pub fn allocation_sop(cfg: &ScenarioConfig, alloc: &PowerAllocation, region: &SuspiciousRegion) -> Result<f64> {
    let b = sor_boundary_directional(cfg, alloc, &intersection_grid(cfg))?;
    sop_intersection(&b, region, cfg.n_eves)
}

/// Fast SOR area for directional jamming on a fixed grid.
///
/// Beam responses are tabulated once, so changing one beam power costs one
/// pass over the grid.
#[derive(Debug, Clone)]
pub struct DirectionalAreaModel {
    cfg: ScenarioConfig,
    weights: Vec<f64>,
    s_eb: Vec<f64>,
    /// `responses[n][i] = |s̄(θ_i)ᴴ v_n|² / N0`.
    responses: Vec<Vec<f64>>,
    /// Same at Bob's angle.
    bob_responses: Vec<f64>,
}

impl DirectionalAreaModel {
    /// Precompute responses of the beams of `basis`, which must be a beam
    /// basis.
    pub fn new(cfg: &ScenarioConfig, grid: &ThetaGrid, basis: &JammingBasis) -> Result<Self> {
        let sines = basis.beam_sines().ok_or_else(|| Error::precondition("area model needs a beam basis"))?;
        let thetas = grid.thetas();
        let responses = sines
            .iter()
            .map(|u| thetas.iter().map(|t| basis.beam_response(*u, t.sin(), cfg) / cfg.n0).collect())
            .collect();
        Ok(Self {
            cfg: *cfg,
            weights: simpson_weights(thetas),
            s_eb: thetas.iter().map(|t| cfg.s_eb(*t)).collect(),
            responses,
            bob_responses: sines.iter().map(|u| basis.beam_response(*u, cfg.bob_theta.sin(), cfg) / cfg.n0).collect(),
        })
    }

    pub fn n_beams(&self) -> usize {
        self.responses.len()
    }

    /// Normalized jamming power per grid point for beam powers in Watts.
    pub fn jamming(&self, powers: &[f64]) -> Vec<f64> {
        let mut jam = vec![0.0; self.weights.len()];
        for (row, p) in self.responses.iter().zip(powers) {
            if *p != 0.0 {
                jam.iter_mut().zip(row).for_each(|(j, r)| *j += p * r);
            }
        }
        jam
    }

    /// Jamming reaching Bob.
    fn bob_jamming(&self, powers: &[f64]) -> f64 {
        powers.iter().zip(&self.bob_responses).map(|(p, r)| p * r).sum()
    }

    /// Eve gain `h` for a total jamming power (W) and the jamming leaking to
    /// Bob, or `None` when Bob's rate is lost.
    fn gain(&self, total_jam: f64, bob_jam: f64, phi_max: f64) -> Option<f64> {
        let phi = total_jam / self.cfg.p_tot;
        if phi >= phi_max {
            return None;
        }
        outage_gain_leaky(&self.cfg, (1.0 - phi) * self.cfg.p_tilde(), bob_jam)
    }

    /// Area with jamming `jam + delta · responses[beam]`.
    fn area_with(&self, gain: f64, jam: &[f64], beam: Option<(usize, f64)>) -> f64 {
        let e = 2.0 / self.cfg.alpha;
        let row = beam.map(|(n, _)| &self.responses[n]);
        let delta = beam.map_or(0.0, |(_, d)| d);
        let mut total = 0.0;
        for i in 0..self.weights.len() {
            let j = jam[i] + row.map_or(0.0, |r| delta * r[i]);
            let v = gain * self.s_eb[i] - j;
            if v > 0.0 {
                total += self.weights[i] * 0.5 * v.powf(e);
            }
        }
        total
    }

    /// SOR area for the given beam powers (Watts).
    pub fn area(&self, powers: &[f64]) -> Result<f64> {
        let pm = phi_max(&self.cfg)?;
        let total: f64 = powers.iter().sum();
        let gain = self
            .gain(total, self.bob_jamming(powers), pm)
            .ok_or(Error::InfeasibleRate { deficit: total / self.cfg.p_tot - pm })?;
        Ok(self.area_with(gain, &self.jamming(powers), None))
    }
}

/// Options of [`algorithm2_iterative`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Algorithm2Options {
    /// Stop when the sweep-to-sweep change of the power vector (Watts, L2)
    /// drops below this.
    pub epsilon: f64,
    /// Candidate values per coordinate line search.
    pub line_points: usize,
    pub max_sweeps: usize,
}

impl Default for Algorithm2Options {
    fn default() -> Self {
        Self { epsilon: 1e-4, line_points: 200, max_sweeps: 100 }
    }
}

/// Equal power over every DFT beam outside Bob's main lobe, totalling
/// `φ_max/2 · P_tot`.
pub fn algorithm2_default_initial(cfg: &ScenarioConfig) -> Result<PowerAllocation> {
    let pm = phi_max(cfg)?;
    dft_equal_split(cfg, 0.5 * pm)
}

/// Equal split of `φ P_tot` over the DFT beams outside Bob's main lobe.
pub fn dft_equal_split(cfg: &ScenarioConfig, phi: f64) -> Result<PowerAllocation> {
    let basis = build_dft_basis(&cfg.geometry);
    let main = basis.main_lobe_columns(cfg.bob_theta);
    let active: Vec<usize> = (0..basis.len()).filter(|k| !main.contains(k)).collect();
    let mut powers = vec![0.0; basis.len()];
    for k in &active {
        powers[*k] = phi * cfg.p_tot / active.len() as f64;
    }
    PowerAllocation::beams(cfg, basis.to_jamming_basis(), powers)
}

/// Cyclic coordinate descent on the directional SOR area.
///
/// Each beam power in turn is set to the best of `line_points` values in
/// `[0, x_max)`, `x_max` being the budget `φ_max P_tot` left by the other
/// beams; the current value is kept unless a candidate is strictly better,
/// so the area never increases. Beams inside Bob's main lobe stay at zero.
/// The trace records the area after every coordinate update.
pub fn algorithm2_iterative(
    cfg: &ScenarioConfig,
    initial: &PowerAllocation,
    options: &Algorithm2Options,
) -> Result<AllocationResult> {
    let pm = phi_max(cfg)?;
    let Some(sines) = initial.basis.beam_sines() else {
        return Err(Error::precondition("coordinate descent needs a beam basis"));
    };
    let budget = pm * cfg.p_tot;
    let mut p = initial.beam_powers.clone();
    let start_total: f64 = p.iter().sum();
    if start_total > budget * (1.0 + 1e-12) {
        return Err(Error::precondition(format!(
            "initial jamming power {start_total} W exceeds the budget {budget} W"
        )));
    }
    if options.line_points < 2 {
        return Err(Error::domain("line search needs at least 2 points"));
    }
    let grid = ThetaGrid::for_scenario(cfg);
    let model = DirectionalAreaModel::new(cfg, &grid, &initial.basis)?;
    let w = cfg.geometry.null_spacing();
    let sb = cfg.bob_theta.sin();
    let frozen: Vec<bool> = sines.iter().map(|u| (u - sb).abs() < w * (1.0 - 1e-9)).collect();
    for (k, f) in frozen.iter().enumerate() {
        if *f {
            p[k] = 0.0;
        }
    }

    let mut jam = model.jamming(&p);
    let mut total: f64 = p.iter().sum();
    let mut bob_jam = model.bob_jamming(&p);
    let Some(gain0) = model.gain(total, bob_jam, pm) else {
        return Err(Error::precondition("initial allocation leaves Bob below the target rate"));
    };
    let mut current = model.area_with(gain0, &jam, None);
    let mut trace = vec![current];
    let mut converged = false;

    for _ in 0..options.max_sweeps {
        let previous = p.clone();
        for n in 0..p.len() {
            if frozen[n] {
                continue;
            }
            let others = total - p[n];
            let x_max = budget - others;
            if x_max <= 0.0 {
                continue;
            }
            let candidates: Vec<(f64, f64)> = (0..options.line_points)
                .into_par_iter()
                .map(|i| {
                    let x = x_max * i as f64 / options.line_points as f64;
                    let leak = bob_jam + (x - p[n]) * model.bob_responses[n];
                    let area = match model.gain(others + x, leak, pm) {
                        Some(g) => model.area_with(g, &jam, Some((n, x - p[n]))),
                        None => f64::INFINITY,
                    };
                    (x, area)
                })
                .collect();
            let threshold = current - 1e-12 * current.abs();
            let best = candidates
                .iter()
                .fold(None, |acc: Option<(f64, f64)>, &(x, a)| match acc {
                    Some((_, ba)) if ba <= a => acc,
                    _ if a < threshold => Some((x, a)),
                    _ => acc,
                });
            if let Some((x, a)) = best {
                let delta = x - p[n];
                jam.iter_mut().zip(&model.responses[n]).for_each(|(j, r)| *j += delta * r);
                bob_jam += delta * model.bob_responses[n];
                total = others + x;
                p[n] = x;
                current = a;
            }
            trace.push(current);
        }
        let change = p.iter().zip(&previous).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        if change < options.epsilon {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("coordinate descent stopped after {} sweeps without converging", options.max_sweeps);
    }

    let allocation = PowerAllocation::beams(cfg, initial.basis.clone(), p)?;
    let objective = sor_area(&sor_boundary_directional(cfg, &allocation, &grid)?);
    Ok(AllocationResult { phi_opt: allocation.phi, allocation, objective, trace })
}

/// How a side lobe is represented by a single steering angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LobeAngle {
    /// Angle where the crosstalk peaks inside the lobe.
    #[default]
    Peak,
    /// Midpoint of the lobe's angular support.
    Mean,
}

/// One side lobe of Bob's crosstalk pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideLobe {
    /// Signed lobe order, negative toward smaller angles.
    pub order: i32,
    pub theta: f64,
    pub s_eb: f64,
}

/// Side lobes of `s_eb(θ)` over `[-π/2, π/2]`, each with its representative
/// angle, in order of decreasing `s_eb(θ_m)`; ties keep the negative side
/// first.
pub fn side_lobes(cfg: &ScenarioConfig, angle: LobeAngle) -> Vec<SideLobe> {
    let geom = &cfg.geometry;
    let sb = cfg.bob_theta.sin();
    let mut out = Vec::new();
    for (dir, reach) in [(-1.0, 1.0 + sb), (1.0, 1.0 - sb)] {
        for l in kernel_lobes(geom, reach).into_iter().skip(1) {
            let hi = l.hi.min(reach);
            if hi <= l.lo {
                continue;
            }
            let x = match angle {
                LobeAngle::Peak if l.peak_x <= hi => l.peak_x,
                LobeAngle::Peak => golden_max(|x| s_kernel(x, geom), l.lo, hi, 1e-13).0,
                LobeAngle::Mean => {
                    let a = (sb + dir * l.lo).clamp(-1.0, 1.0).asin();
                    let b = (sb + dir * hi).clamp(-1.0, 1.0).asin();
                    (0.5 * (a + b)).sin().mul_add(dir, -dir * sb).abs()
                }
            };
            let theta = (sb + dir * x).clamp(-1.0, 1.0).asin();
            out.push(SideLobe { order: dir as i32 * l.index as i32, theta, s_eb: cfg.s_eb(theta) });
        }
    }
    out.sort_by(|a, b| b.s_eb.total_cmp(&a.s_eb).then(a.order.cmp(&b.order)));
    out
}

/// Options of [`algorithm3_two_lobes`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Algorithm3Options {
    pub phi_step: f64,
    /// Candidate splits per φ.
    pub split_points: usize,
    pub lobe_angle: LobeAngle,
}

impl Default for Algorithm3Options {
    fn default() -> Self {
        Self { phi_step: 1e-2, split_points: 201, lobe_angle: LobeAngle::Peak }
    }
}

/// Jamming on two steered beams aimed at the dominating side lobes.
///
/// For each `φ` on the outer grid the budget `φ P_tot` is split between the
/// two beams by a 1-D search; the best `(φ, split)` by SOR area wins. The
/// trace holds the best area per `φ`.
pub fn algorithm3_two_lobes(cfg: &ScenarioConfig, options: &Algorithm3Options) -> Result<AllocationResult> {
    let pm = phi_max(cfg)?;
    let lobes = side_lobes(cfg, options.lobe_angle);
    if lobes.len() < 2 {
        return Err(Error::Degenerate("array has fewer than two side lobes".into()));
    }
    if options.split_points < 2 || !(options.phi_step > 0.0) {
        return Err(Error::domain("invalid outer or inner search resolution"));
    }
    let basis = JammingBasis::Projected { sines: vec![lobes[0].theta.sin(), lobes[1].theta.sin()] };
    let grid = ThetaGrid::for_scenario(cfg);
    let model = DirectionalAreaModel::new(cfg, &grid, &basis)?;

    let phis: Vec<f64> = (0..).map(|i| i as f64 * options.phi_step).take_while(|p| *p < pm).collect();
    let per_phi: Vec<(f64, [f64; 2], f64)> = phis
        .par_iter()
        .map(|&phi| {
            let budget = phi * cfg.p_tot;
            let splits: Vec<f64> = (0..options.split_points)
                .map(|i| i as f64 / (options.split_points - 1) as f64)
                .collect();
            let areas: Vec<f64> = splits
                .iter()
                .map(|t| {
                    let p = [t * budget, (1.0 - t) * budget];
                    match model.gain(budget, model.bob_jamming(&p), pm) {
                        Some(g) => model.area_with(g, &model.jamming(&p), None),
                        None => f64::INFINITY,
                    }
                })
                .collect();
            let i = argmin(&areas);
            (phi, [splits[i] * budget, (1.0 - splits[i]) * budget], areas[i])
        })
        .collect();
    let trace: Vec<f64> = per_phi.iter().map(|r| r.2).collect();
    let (phi, powers, _) = per_phi[argmin(&trace)];

    let allocation = PowerAllocation::beams(cfg, basis, powers.to_vec())?;
    let allocation = PowerAllocation { phi, ..allocation };
    let objective = sor_area(&sor_boundary_directional(cfg, &allocation, &grid)?);
    Ok(AllocationResult { phi_opt: phi, allocation, objective, trace })
}

/// `Σ_m (a_m − P̃_m)^{2/α}` over the side lobes, the surrogate area
/// minimized by the two-lobe scheme for a fixed `φ`.
pub fn lobe_surrogate_objective(a: &[f64], p: &[f64], alpha: f64) -> f64 {
    a.iter().zip(p).map(|(a, p)| (a - p).max(0.0).powf(2.0 / alpha)).sum()
}

/// `a_m = h((1−φ)P̃) s_eb(θ_m)` for each side lobe angle.
pub fn lobe_surrogate_weights(cfg: &ScenarioConfig, phi: f64, lobes: &[SideLobe]) -> Vec<f64> {
    let h = outage_gain(cfg, (1.0 - phi) * cfg.p_tilde());
    lobes.iter().map(|l| h * l.s_eb).collect()
}

/// Best split of `budget` (normalized) between two lobes along
/// `P̃_1 + P̃_2 = budget`, each capped by its `a_m`, by a grid of `points`.
/// Returns `(P̃_1, P̃_2, objective)`.
pub fn two_lobe_boundary_search(a: [f64; 2], budget: f64, alpha: f64, points: usize) -> (f64, f64, f64) {
    let lo = (budget - a[1]).max(0.0);
    let hi = budget.min(a[0]);
    if hi < lo {
        // both caps bind before the budget is spent
        return (a[0], a[1], 0.0);
    }
    let xs = crate::numeric::linspace(lo, hi, points.max(2));
    let vals: Vec<f64> = xs.iter().map(|x| lobe_surrogate_objective(&a, &[*x, budget - x], alpha)).collect();
    let i = argmin(&vals);
    (xs[i], budget - xs[i], vals[i])
}

/// Sector-sum approximation of the directional SOR area:
/// `π/(2(M+1)) Σ_m d̄(θ_m)²` over the main lobe and every side lobe at its
/// peak angle.
pub fn area_upper_bound(cfg: &ScenarioConfig, alloc: &PowerAllocation) -> Result<f64> {
    let gain = allocation_gain(cfg, alloc)?;
    let mut angles: Vec<f64> = side_lobes(cfg, LobeAngle::Peak).iter().map(|l| l.theta).collect();
    angles.push(cfg.bob_theta);
    let sum: f64 = angles
        .iter()
        .map(|t| (gain * cfg.s_eb(*t) - alloc.jamming_at(cfg, *t)).max(0.0).powf(2.0 / cfg.alpha))
        .sum();
    Ok(PI / (2.0 * angles.len() as f64) * sum)
}

/// Directional boundary of an allocation on the default grid.
pub fn boundary_of(cfg: &ScenarioConfig, alloc: &PowerAllocation) -> Result<SorBoundary> {
    sor_boundary_directional(cfg, alloc, &ThetaGrid::for_scenario(cfg))
}
