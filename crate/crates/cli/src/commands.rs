//! Manifest-driven subcommands: `sop`, `optimize`, `sor-map`, `mc-validate`.

use secrecy_sor_core::asymptotic::{sinr_eve_uniform, JammingBasis, PowerAllocation, ScenarioConfig, ThetaGrid};
use secrecy_sor_core::crosstalk::CrosstalkCdf;
use secrecy_sor_core::mc::{empirical_sop, sample_crosstalk, sample_sinrs, McEstimate};
use secrecy_sor_core::Error;

use crate::manifest::{Manifest, ManifestError, Objective, Point, Scheme};
use crate::schemes::{self, is_infeasible, Resolution};
use crate::table::{Cell, Table};
use crate::CliError;

/// Settings taken from the command line rather than the manifest.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub res: Resolution,
    pub per_lobe: usize,
}

/// Evaluate `row` at every sweep value (or once without a sweep). Rows
/// where Bob's rate is out of reach become NaN with a warning.
fn sweep_table<F>(m: &Manifest, metrics: &[&str], row: F) -> Result<Table, CliError>
where
    F: Fn(&Point) -> Result<Vec<Cell>, Error>,
{
    let sweep = m.sweep_grid()?;
    let mut columns: Vec<&str> = Vec::new();
    if let Some((p, _)) = &sweep {
        columns.push(p.name());
    }
    columns.extend_from_slice(metrics);
    let mut table = Table::new(&columns);
    let values: Vec<Option<f64>> = match &sweep {
        Some((_, v)) => v.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    for v in values {
        let point = m.at(v)?;
        let mut cells: Vec<Cell> = v.map(Cell::Num).into_iter().collect();
        match row(&point) {
            Ok(c) => {
                cells.extend(c);
                table.push(cells, None);
            }
            Err(e) if is_infeasible(&e) => {
                log::warn!("row {v:?}: {e}");
                cells.extend(std::iter::repeat_n(Cell::Num(f64::NAN), metrics.len()));
                table.push(cells, Some(e.to_string()));
            }
            Err(e) => return Err(CliError::Runtime(e.into())),
        }
    }
    Ok(table)
}

fn needs_region(m: &Manifest) -> bool {
    m.scheme == Scheme::Algo1 || m.objective == Some(Objective::Sop)
}

/// SOP of the manifest's scheme at each sweep point.
pub fn sop(m: &Manifest, opts: RunOptions) -> Result<Table, CliError> {
    m.require_region()?;
    let objective = m.objective.unwrap_or(Objective::Sop);
    sweep_table(m, &["phi", "sop"], |p| {
        let region = p.region.as_ref().expect("region checked");
        let alloc = schemes::allocate(m.scheme, &p.cfg, Some(region), p.phi, objective, opts.res)?;
        Ok(vec![alloc.phi.into(), schemes::sop(&p.cfg, &alloc, region)?.into()])
    })
}

/// Optimized allocation of the manifest's scheme: `φ`, SOR area, and SOP
/// when a region is given.
pub fn optimize(m: &Manifest, opts: RunOptions) -> Result<Table, CliError> {
    if needs_region(m) {
        m.require_region()?;
    }
    let objective = m.objective.unwrap_or(if m.region.is_some() { Objective::Sop } else { Objective::Area });
    sweep_table(m, &["phi_opt", "area_m2", "sop", "n_active_beams"], |p| {
        let alloc = schemes::allocate(m.scheme, &p.cfg, p.region.as_ref(), p.phi, objective, opts.res)?;
        let area = schemes::area(&p.cfg, &alloc)?;
        let sop = match &p.region {
            Some(r) => schemes::sop(&p.cfg, &alloc, r)?,
            None => f64::NAN,
        };
        Ok(vec![alloc.phi.into(), area.into(), sop.into(), active_beams(&alloc).into()])
    })
}

fn active_beams(alloc: &PowerAllocation) -> usize {
    alloc.beam_powers.iter().filter(|p| **p > 0.0).count()
}

/// SOR boundary samples `(θ, d̄)` on a lobe-aligned grid.
pub fn sor_map(m: &Manifest, opts: RunOptions) -> Result<Table, CliError> {
    if m.sweep.is_some() {
        return Err(ManifestError::new("sweep", "sor-map draws a single scenario; remove the sweep").into());
    }
    if needs_region(m) {
        m.require_region()?;
    }
    let p = m.at(None)?;
    let objective = m.objective.unwrap_or(Objective::Area);
    let mut table = Table::new(&["theta_deg", "radius_m", "lobe"]);
    let grid = ThetaGrid::lobe_aligned(&p.cfg.geometry, p.cfg.bob_theta, opts.per_lobe).map_err(anyhow::Error::from)?;
    let result = schemes::allocate(m.scheme, &p.cfg, p.region.as_ref(), p.phi, objective, opts.res)
        .and_then(|a| schemes::boundary(&p.cfg, &a, &grid));
    match result {
        Ok(b) => {
            let lobe_of = |t: f64| b.lobes.iter().find(|l| (l.theta_lo..=l.theta_hi).contains(&t)).map(|l| l.order);
            for (t, r) in b.thetas.iter().zip(&b.radii) {
                let lobe = lobe_of(*t).map_or(Cell::Text(String::new()), |o| Cell::Int(o as i64));
                table.push(vec![t.to_degrees().into(), (*r).into(), lobe], None);
            }
        }
        Err(e) if is_infeasible(&e) => {
            table.push(vec![f64::NAN.into(), f64::NAN.into(), Cell::Text(String::new())], Some(e.to_string()));
        }
        Err(e) => return Err(CliError::Runtime(e.into())),
    }
    Ok(table)
}

/// Monte Carlo estimate against its asymptotic counterpart.
pub fn mc_validate(m: &Manifest, opts: RunOptions) -> Result<Table, CliError> {
    m.require_region()?;
    let base = m.base_config()?;
    let estimate = m.mc_spec(&base, opts.seed)?.estimate;
    let objective = m.objective.unwrap_or(Objective::Sop);
    let metrics: &[&str] = match estimate {
        McEstimate::Sop => &["phi", "sop_asymptotic", "sop_mc", "std_error", "z_score"],
        McEstimate::CrosstalkCdf => &["ks_distance", "n_samples"],
        McEstimate::SinrBob | McEstimate::SinrEve => &["phi", "mean_asymptotic", "mean_mc", "relative_error"],
    };
    sweep_table(m, metrics, |p| {
        let spec = m.mc_spec(&p.cfg, opts.seed).map_err(|e| Error::Domain(e.to_string()))?;
        let region = p.region.as_ref().expect("region checked");
        let alloc = || schemes::allocate(m.scheme, &p.cfg, Some(region), p.phi, objective, opts.res);
        Ok(match estimate {
            McEstimate::Sop => {
                let alloc = alloc()?;
                let closed = schemes::sop(&p.cfg, &alloc, region)?;
                let est = empirical_sop(&p.cfg, region, &alloc, &spec)?;
                let z = if est.std_error > 0.0 { (est.sop - closed) / est.std_error } else { f64::NAN };
                vec![alloc.phi.into(), closed.into(), est.sop.into(), est.std_error.into(), z.into()]
            }
            McEstimate::CrosstalkCdf => {
                let samples = sample_crosstalk(&p.cfg, &region.angles, &spec)?;
                let k = spec.k_factor;
                let k_eb = if k.is_finite() { (k / (1.0 + k)).powi(2) } else { 1.0 };
                let profile = secrecy_sor_core::crosstalk::CrosstalkProfile::new(
                    spec.geometry(&p.cfg)?,
                    p.cfg.bob_theta,
                    k_eb,
                )?;
                let cdf = CrosstalkCdf::new(profile, region.angles);
                vec![ks_distance(samples, |x| cdf.eval(x)).into(), spec.n_samples.into()]
            }
            McEstimate::SinrBob | McEstimate::SinrEve => {
                let alloc = alloc()?;
                let draws = sample_sinrs(&p.cfg, region, &alloc, &spec)?;
                let n = draws.len() as f64;
                let (asym, mc) = if estimate == McEstimate::SinrBob {
                    (sinr_bob(&p.cfg, &alloc), draws.iter().map(|d| d.0).sum::<f64>() / n)
                } else {
                    let asym = draws.iter().map(|d| sinr_eve(&p.cfg, &alloc, d.2, d.3)).sum::<Result<f64, Error>>()?;
                    (asym / n, draws.iter().map(|d| d.1).sum::<f64>() / n)
                };
                vec![alloc.phi.into(), asym.into(), mc.into(), ((mc - asym) / asym).into()]
            }
        })
    })
}

/// Large-array SINR of Bob, counting any jamming that leaks onto his beam.
fn sinr_bob(cfg: &ScenarioConfig, alloc: &PowerAllocation) -> f64 {
    let path = cfg.bob_path_gain();
    let leak = alloc.jamming_at(cfg, cfg.bob_theta);
    (1.0 - alloc.phi) * cfg.p_tilde() * path * cfg.n() / (1.0 + path * leak)
}

fn sinr_eve(cfg: &ScenarioConfig, alloc: &PowerAllocation, theta: f64, dist: f64) -> Result<f64, Error> {
    if let JammingBasis::NullSpaceUniform = alloc.basis {
        return sinr_eve_uniform(cfg, alloc.phi, theta, dist);
    }
    let path = dist.powf(-cfg.alpha);
    Ok((1.0 - alloc.phi) * cfg.p_tilde() * path * cfg.n() * cfg.s_eb(theta) / (1.0 + path * alloc.jamming_at(cfg, theta)))
}

/// Kolmogorov-Smirnov distance between samples and a CDF.
pub fn ks_distance(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
