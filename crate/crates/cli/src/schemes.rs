//! Turning a scheme name into a jamming allocation and its metrics.

use secrecy_sor_core::alloc::{
    algorithm1_directional, algorithm2_default_initial, algorithm2_iterative, algorithm3_two_lobes,
    allocation_sop, dft_equal_split, optimize_phi_uniform_with_step, Algorithm2Options, Algorithm3Options,
    UniformObjective, PHI_GRID_STEP,
};
use secrecy_sor_core::asymptotic::{
    sor_area, sor_boundary_directional, sor_boundary_uniform, JammingBasis, PowerAllocation, ScenarioConfig,
    SorBoundary, ThetaGrid,
};
use secrecy_sor_core::sop::{sop_closed_form, SuspiciousRegion};
use secrecy_sor_core::Error;

use crate::manifest::{Objective, Scheme};

/// Search resolution shared by every command.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Resolution {
    /// Outer `φ` grid step of the uniform and two-lobe searches; each uses
    /// its own default when `None`.
    pub phi_step: Option<f64>,
}

/// True when the error only says Bob cannot reach the target rate; such
/// rows become NaN with a warning instead of aborting the run.
pub fn is_infeasible(e: &Error) -> bool {
    match e {
        Error::InfeasibleRate { .. } => true,
        Error::User { source, .. } => is_infeasible(source),
        _ => false,
    }
}

/// Allocation chosen by `scheme`. A fixed `phi` pins the jamming fraction of
/// the uniform scheme and sets the starting point of the iterative one.
pub fn allocate(
    scheme: Scheme,
    cfg: &ScenarioConfig,
    region: Option<&SuspiciousRegion>,
    phi: Option<f64>,
    objective: Objective,
    res: Resolution,
) -> Result<PowerAllocation, Error> {
    Ok(match scheme {
        Scheme::NoJam => PowerAllocation::no_jamming(),
        Scheme::Uniform => match phi {
            Some(p) => PowerAllocation::uniform(cfg, p)?,
            None => {
                let obj = match (objective, region) {
                    (Objective::Sop, Some(r)) => UniformObjective::Sop(r.clone()),
                    (Objective::Sop, None) => {
                        return Err(Error::Precondition("SOP objective needs a suspicious region".into()))
                    }
                    (Objective::Area, _) => UniformObjective::SorArea,
                };
                optimize_phi_uniform_with_step(cfg, &obj, res.phi_step.unwrap_or(PHI_GRID_STEP))?.allocation
            }
        },
        Scheme::Algo1 => {
            let r = region.ok_or_else(|| Error::Precondition("algo1 needs a suspicious region".into()))?;
            algorithm1_directional(cfg, r)?.allocation
        }
        Scheme::Algo2 => {
            let initial = match phi {
                Some(p) => dft_equal_split(cfg, p)?,
                None => algorithm2_default_initial(cfg)?,
            };
            algorithm2_iterative(cfg, &initial, &Algorithm2Options::default())?.allocation
        }
        Scheme::Algo3 => {
            let mut opts = Algorithm3Options::default();
            if let Some(step) = res.phi_step {
                opts.phi_step = step;
            }
            algorithm3_two_lobes(cfg, &opts)?.allocation
        }
    })
}

/// SOR boundary of an allocation; null-space jamming uses the uniform
/// formula.
pub fn boundary(cfg: &ScenarioConfig, alloc: &PowerAllocation, grid: &ThetaGrid) -> Result<SorBoundary, Error> {
    match alloc.basis {
        JammingBasis::NullSpaceUniform => sor_boundary_uniform(cfg, alloc.phi, grid),
        _ => sor_boundary_directional(cfg, alloc, grid),
    }
}

pub fn area(cfg: &ScenarioConfig, alloc: &PowerAllocation) -> Result<f64, Error> {
    Ok(sor_area(&boundary(cfg, alloc, &ThetaGrid::for_scenario(cfg))?))
}

/// SOP: the closed form for null-space jamming, region intersection for
/// beams.
pub fn sop(cfg: &ScenarioConfig, alloc: &PowerAllocation, region: &SuspiciousRegion) -> Result<f64, Error> {
    match alloc.basis {
        JammingBasis::NullSpaceUniform => sop_closed_form(cfg, alloc.phi, region),
        _ => allocation_sop(cfg, alloc, region),
    }
}
