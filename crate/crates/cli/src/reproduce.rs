//! The reference figures: fixed scenarios swept over one parameter.
//!
//! Every figure starts from the reference setting (half-wavelength spacing,
//! `α = 3`, 1 W transmit power, 1e-8 W noise, pure line of sight).

use clap::ValueEnum;

use secrecy_sor_core::alloc::{
    algorithm2_default_initial, algorithm2_iterative, algorithm3_two_lobes, grid_oracle_phi, optimize_phi_uniform_with_step,
    phi_opt_closed_form, region_beam_allocation, Algorithm2Options, Algorithm3Options, PhiBranch, UniformObjective,
    PHI_GRID_STEP,
};
use secrecy_sor_core::asymptotic::{lobe_radii, phi_max, PowerAllocation, ScenarioConfig};
use secrecy_sor_core::crosstalk::AngleRange;
use secrecy_sor_core::sop::{sop_closed_form, SuspiciousRegion};
use secrecy_sor_core::{Error, Result};

use crate::schemes::{self, is_infeasible};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Lobe radii against the jamming fraction.
    Fig2,
    /// SOP against the jamming fraction, uniform and directional.
    Fig3,
    /// Closed-form optimal jamming fraction against a grid search.
    Fig4,
    /// SOR area against Bob's distance for four schemes.
    Fig5,
    /// SOP against Bob's distance for four schemes.
    Fig6,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReproduceOptions {
    /// Step of the `φ` sweeps (fig2, fig3) or of the uniform search
    /// (fig5, fig6); figure defaults when `None`.
    pub phi_step: Option<f64>,
    /// Also emit fig2 at `α = 2`.
    pub both_alpha: bool,
}

/// `φ` sweep step of fig2 and fig3 when none is given.
pub const SWEEP_PHI_STEP: f64 = 0.01;

pub fn run(fig: Figure, opts: ReproduceOptions) -> anyhow::Result<Table> {
    Ok(match fig {
        Figure::Fig2 => fig2(opts)?,
        Figure::Fig3 => fig3(opts)?,
        Figure::Fig4 => fig4()?,
        Figure::Fig5 => fig5(opts)?,
        Figure::Fig6 => fig6(opts)?,
    })
}

/// `0, h, 2h, …` below 1.
fn phi_sweep(step: f64) -> Vec<f64> {
    (0..).map(|i| i as f64 * step).take_while(|p| *p < 1.0).collect()
}

fn check_step(step: f64) -> Result<f64> {
    if step > 0.0 && step < 1.0 {
        Ok(step)
    } else {
        Err(Error::Domain(format!("φ step must lie in (0, 1), got {step}")))
    }
}

/// Number of lobes reported by fig2: the main lobe and side lobes 1 to 6.
pub const FIG2_LOBES: usize = 7;

/// Main-lobe and side-lobe radii for `N = 100`, Bob at broadside 100 m
/// away, `R = 10`.
pub fn fig2(opts: ReproduceOptions) -> Result<Table> {
    let step = check_step(opts.phi_step.unwrap_or(SWEEP_PHI_STEP))?;
    let alphas: &[f64] = if opts.both_alpha { &[3.0, 2.0] } else { &[3.0] };
    let mut columns = vec!["alpha".to_owned(), "phi".to_owned()];
    columns.extend((0..FIG2_LOBES).map(|m| format!("radius_m{m}")));
    let mut table = Table::new(&columns);
    for &alpha in alphas {
        let cfg = ScenarioConfig { alpha, ..ScenarioConfig::reference(100, 10.0)? };
        for phi in phi_sweep(step) {
            let mut cells: Vec<Cell> = vec![alpha.into(), phi.into()];
            match lobe_radii(&cfg, phi) {
                Ok(r) => {
                    cells.extend((0..FIG2_LOBES).map(|m| Cell::Num(r.get(m).copied().unwrap_or(f64::NAN))));
                    table.push(cells, None);
                }
                Err(e) if is_infeasible(&e) => {
                    cells.extend((0..FIG2_LOBES).map(|_| Cell::Num(f64::NAN)));
                    table.push(cells, Some(e.to_string()));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(table)
}

/// Scenario and region of fig3 for an array of `n` elements.
pub fn fig3_setup(n: usize) -> Result<(ScenarioConfig, SuspiciousRegion)> {
    let cfg = ScenarioConfig { n_eves: 10, ..ScenarioConfig::reference(n, 10.0)? };
    let region = SuspiciousRegion::constant(AngleRange::from_degrees(-15.0, 15.0)?, 50.0, 100.0)?;
    Ok((cfg, region))
}

/// SOP against `φ` for `N ∈ {50, 100}`, ten Eves in `[−15°, 15°] × [50, 100]`
/// m. The directional column spreads `φ P_tot` equally over the DFT beams
/// aimed into the region.
pub fn fig3(opts: ReproduceOptions) -> Result<Table> {
    let step = check_step(opts.phi_step.unwrap_or(SWEEP_PHI_STEP))?;
    let mut table = Table::new(&["n_antennas", "phi", "sop_uniform", "sop_directional"]);
    for n in [50, 100] {
        let (cfg, region) = fig3_setup(n)?;
        let pm = phi_max(&cfg)?;
        for phi in phi_sweep(step) {
            let uniform = sop_closed_form(&cfg, phi, &region)?;
            let (directional, warning) = if phi >= pm {
                (1.0, Some("jamming leaves Bob below the target rate: certain outage".to_owned()))
            } else {
                match region_beam_allocation(&cfg, &region.angles, phi)? {
                    Some(a) => (schemes::sop(&cfg, &a, &region)?, None),
                    None => (uniform, Some("no DFT beam inside the region".to_owned())),
                }
            };
            table.push(vec![n.into(), phi.into(), uniform.into(), directional.into()], warning);
        }
    }
    Ok(table)
}

/// `(N, d_b)` pairs of fig4.
pub const FIG4_CASES: [(usize, f64); 3] = [(50, 100.0), (100, 100.0), (100, 150.0)];
/// Number of crosstalk values per case.
pub const FIG4_POINTS: usize = 20;

pub fn fig4_config(n: usize, d_b: f64) -> Result<ScenarioConfig> {
    Ok(ScenarioConfig { bob_dist: d_b, ..ScenarioConfig::reference(n, 5.0)? })
}

/// Closed-form optimal `φ` against a brute-force grid, `s_eb` from 0.05 to
/// 0.95, nearest Eve 50 m away, `R = 5`.
pub fn fig4() -> Result<Table> {
    let d_min = 50.0;
    let mut table = Table::new(&[
        "n_antennas",
        "bob_dist_m",
        "s_eb",
        "phi_closed_form",
        "branch",
        "phi_g",
        "phi_0",
        "phi_grid",
    ]);
    for (n, d_b) in FIG4_CASES {
        let cfg = fig4_config(n, d_b)?;
        for i in 0..FIG4_POINTS {
            let s = 0.05 + 0.9 * i as f64 / (FIG4_POINTS - 1) as f64;
            let c = phi_opt_closed_form(&cfg, s, d_min)?;
            let grid = grid_oracle_phi(&cfg, s, d_min)?;
            let branch = match c.branch {
                PhiBranch::Stationary => "stationary",
                PhiBranch::ZeroOutage => "zero_outage",
            };
            table.push(
                vec![
                    n.into(),
                    d_b.into(),
                    s.into(),
                    c.phi_opt.into(),
                    branch.into(),
                    c.phi_g.into(),
                    c.phi_0.into(),
                    grid.into(),
                ],
                None,
            );
        }
    }
    Ok(table)
}

/// Bob distances of fig5 (m).
pub fn fig5_distances() -> Vec<f64> {
    (0..=10).map(|i| 60.0 + 10.0 * i as f64).collect()
}

/// SOR areas of the four schemes at one Bob distance of fig5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig5Row {
    pub no_jam: f64,
    pub uniform: f64,
    pub phi_uniform: f64,
    pub algo2: f64,
    pub phi_algo2: f64,
    pub algo3: f64,
    pub phi_algo3: f64,
}

pub fn fig5_config(d_b: f64) -> Result<ScenarioConfig> {
    Ok(ScenarioConfig { bob_dist: d_b, ..ScenarioConfig::reference(50, 5.0)? })
}

pub fn fig5_row(d_b: f64, phi_step: Option<f64>) -> Result<Fig5Row> {
    let cfg = fig5_config(d_b)?;
    let no_jam = schemes::area(&cfg, &PowerAllocation::no_jamming())?;
    let u = optimize_phi_uniform_with_step(&cfg, &UniformObjective::SorArea, phi_step.unwrap_or(PHI_GRID_STEP))?;
    let a2 = algorithm2_iterative(&cfg, &algorithm2_default_initial(&cfg)?, &Algorithm2Options::default())?;
    let a3 = algorithm3_two_lobes(&cfg, &Algorithm3Options::default())?;
    Ok(Fig5Row {
        no_jam,
        uniform: u.objective,
        phi_uniform: u.phi_opt,
        algo2: a2.objective,
        phi_algo2: a2.phi_opt,
        algo3: a3.objective,
        phi_algo3: a3.phi_opt,
    })
}

/// SOR area against Bob's distance (60 to 160 m), `N = 50`, `R = 5`.
pub fn fig5(opts: ReproduceOptions) -> Result<Table> {
    let mut table = Table::new(&[
        "bob_dist_m",
        "area_no_jam",
        "area_uniform",
        "phi_uniform",
        "area_algo2",
        "phi_algo2",
        "area_algo3",
        "phi_algo3",
    ]);
    for d_b in fig5_distances() {
        let r = fig5_row(d_b, opts.phi_step)?;
        table.push(
            vec![
                d_b.into(),
                r.no_jam.into(),
                r.uniform.into(),
                r.phi_uniform.into(),
                r.algo2.into(),
                r.phi_algo2.into(),
                r.algo3.into(),
                r.phi_algo3.into(),
            ],
            None,
        );
    }
    Ok(table)
}

/// Bob distances of fig6 (m).
pub fn fig6_distances() -> Vec<f64> {
    (0..=14).map(|i| 60.0 + 10.0 * i as f64).collect()
}

pub fn fig6_setup(d_b: f64) -> Result<(ScenarioConfig, SuspiciousRegion)> {
    let cfg = ScenarioConfig { bob_dist: d_b, n_eves: 10, ..ScenarioConfig::reference(100, 10.0)? };
    let region = SuspiciousRegion::constant(AngleRange::from_degrees(-30.0, 30.0)?, 50.0, 200.0)?;
    Ok((cfg, region))
}

/// SOP against Bob's distance, `N = 100`, `R = 10`, ten Eves in
/// `[−30°, 30°] × [50, 200]` m. The two-lobe scheme is tuned for area and
/// then scored by SOP.
pub fn fig6(opts: ReproduceOptions) -> Result<Table> {
    let mut table = Table::new(&[
        "bob_dist_m",
        "sop_no_jam",
        "sop_uniform",
        "phi_uniform",
        "sop_algo1",
        "sop_algo3",
        "phi_algo3",
    ]);
    for d_b in fig6_distances() {
        let (cfg, region) = fig6_setup(d_b)?;
        let row = (|| -> Result<Vec<Cell>> {
            let no_jam = sop_closed_form(&cfg, 0.0, &region)?;
            let u = optimize_phi_uniform_with_step(
                &cfg,
                &UniformObjective::Sop(region.clone()),
                opts.phi_step.unwrap_or(PHI_GRID_STEP),
            )?;
            let a1 = secrecy_sor_core::alloc::algorithm1_directional(&cfg, &region)?;
            let a3 = algorithm3_two_lobes(&cfg, &Algorithm3Options::default())?;
            let sop3 = schemes::sop(&cfg, &a3.allocation, &region)?;
            Ok(vec![
                no_jam.into(),
                u.objective.into(),
                u.phi_opt.into(),
                a1.objective.into(),
                sop3.into(),
                a3.phi_opt.into(),
            ])
        })();
        match row {
            Ok(cells) => {
                let mut all = vec![Cell::Num(d_b)];
                all.extend(cells);
                table.push(all, None);
            }
            Err(e) if is_infeasible(&e) => {
                let mut all = vec![Cell::Num(d_b)];
                all.extend((0..6).map(|_| Cell::Num(f64::NAN)));
                table.push(all, Some(e.to_string()));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(table)
}
