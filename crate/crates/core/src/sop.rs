//! Secrecy outage probability (SOP) for randomly placed eavesdroppers.
//!
//! Eves are i.i.d., uniform over a suspicious region `R_sus` (angle uniform
//! on `A_e`, distance with density `2z / (d_max² − d_min²)`). Two routes are
//! provided:
//!
//! * [`sop_closed_form`] integrates the crosstalk CDF over distance, for
//!   constant distance limits;
//! * [`sop_intersection`] clips a sampled SOR boundary against the region in
//!   polar coordinates, for any region shape.

use serde::{Deserialize, Serialize};

use crate::asymptotic::{outage_gain, phi_max, ScenarioConfig, SorBoundary, ThetaGrid};
use crate::crosstalk::{s_max_feasible, AngleRange, CrosstalkCdf};
use crate::error::{Error, Result};
use crate::numeric::adaptive_simpson;

/// Relative tolerance of the distance integral.
pub const SOP_REL_TOL: f64 = 1e-6;

/// Distance limits of a suspicious region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RegionBoundary {
    Constant { d_min: f64, d_max: f64 },
    /// Limits tabulated on increasing angles; linear in between.
    Sampled { thetas: Vec<f64>, d_min: Vec<f64>, d_max: Vec<f64> },
}

/// Where eavesdroppers may be: an angle interval times a distance band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuspiciousRegion {
    pub angles: AngleRange,
    pub boundary: RegionBoundary,
}

impl SuspiciousRegion {
    pub fn constant(angles: AngleRange, d_min: f64, d_max: f64) -> Result<Self> {
        if !(d_min >= 0.0 && d_max > d_min && d_max.is_finite()) {
            return Err(Error::domain(format!("invalid distance band [{d_min}, {d_max}]")));
        }
        Ok(Self { angles, boundary: RegionBoundary::Constant { d_min, d_max } })
    }

    pub fn sampled(angles: AngleRange, thetas: Vec<f64>, d_min: Vec<f64>, d_max: Vec<f64>) -> Result<Self> {
        if thetas.len() < 2 || thetas.len() != d_min.len() || thetas.len() != d_max.len() {
            return Err(Error::domain("sampled region tables must share a length of at least 2"));
        }
        if thetas.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("sampled region angles must be strictly increasing"));
        }
        if thetas[0] > angles.min() || thetas[thetas.len() - 1] < angles.max() {
            return Err(Error::domain("sampled region tables must cover the angle interval"));
        }
        if d_min.iter().zip(&d_max).any(|(lo, hi)| !(*lo >= 0.0 && hi > lo)) {
            return Err(Error::domain("sampled region needs 0 <= d_min < d_max everywhere"));
        }
        Ok(Self { angles, boundary: RegionBoundary::Sampled { thetas, d_min, d_max } })
    }

    /// `(D_min(θ), D_max(θ))`.
    pub fn limits_at(&self, theta: f64) -> (f64, f64) {
        match &self.boundary {
            RegionBoundary::Constant { d_min, d_max } => (*d_min, *d_max),
            RegionBoundary::Sampled { thetas, d_min, d_max } => {
                let i = thetas.partition_point(|t| *t <= theta).clamp(1, thetas.len() - 1);
                let w = ((theta - thetas[i - 1]) / (thetas[i] - thetas[i - 1])).clamp(0.0, 1.0);
                (
                    d_min[i - 1] + w * (d_min[i] - d_min[i - 1]),
                    d_max[i - 1] + w * (d_max[i] - d_max[i - 1]),
                )
            }
        }
    }

    /// Region area in square meters.
    pub fn area(&self) -> f64 {
        match &self.boundary {
            RegionBoundary::Constant { d_min, d_max } => 0.5 * self.angles.width() * (d_max * d_max - d_min * d_min),
            RegionBoundary::Sampled { thetas, .. } => {
                let mut xs = vec![self.angles.min()];
                xs.extend(thetas.iter().copied().filter(|t| self.angles.contains(*t)));
                xs.push(self.angles.max());
                xs.dedup();
                let ys: Vec<f64> = xs
                    .iter()
                    .map(|t| {
                        let (lo, hi) = self.limits_at(*t);
                        0.5 * (hi * hi - lo * lo)
                    })
                    .collect();
                crate::numeric::trapezoid_samples(&xs, &ys)
            }
        }
    }
}

/// Closed-form SOP evaluator for one scenario and constant-boundary region.
///
/// The crosstalk CDF is built once, so sweeping `φ` is cheap.
#[derive(Debug, Clone)]
pub struct SopEvaluator {
    cfg: ScenarioConfig,
    d_min: f64,
    d_max: f64,
    cdf: CrosstalkCdf,
    phi_max: f64,
}

impl SopEvaluator {
    pub fn new(cfg: &ScenarioConfig, region: &SuspiciousRegion) -> Result<Self> {
        let RegionBoundary::Constant { d_min, d_max } = region.boundary else {
            return Err(Error::precondition("closed-form SOP needs constant distance limits"));
        };
        let phi_max = phi_max(cfg)?;
        let cdf = CrosstalkCdf::new(cfg.bob_profile(), region.angles);
        if cdf.is_truncated() {
            log::warn!("crosstalk CDF truncated at M = {}", cfg.bob_profile().n_side_lobes());
        }
        Ok(Self { cfg: *cfg, d_min, d_max, cdf, phi_max })
    }

    pub fn phi_max(&self) -> f64 {
        self.phi_max
    }

    pub fn cdf(&self) -> &CrosstalkCdf {
        &self.cdf
    }

    /// Probability that a single Eve causes an outage.
    pub fn single_eve_outage(&self, phi: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&phi) {
            return Err(Error::domain(format!("jamming fraction must lie in [0, 1], got {phi}")));
        }
        if phi >= self.phi_max {
            return Ok(1.0);
        }
        let cfg = &self.cfg;
        let p = cfg.p_tilde();
        let p_jam = phi * p;
        let a1 = outage_gain(cfg, (1.0 - phi) * p) + p_jam;
        let alpha = cfg.alpha;
        let (lo, hi) = (self.d_min, self.d_max);
        let norm = hi * hi - lo * lo;
        let integrand = |z: f64| (1.0 - self.cdf.eval((z.powf(alpha) + p_jam) / a1)) * 2.0 * z / norm;

        let breaks: Vec<f64> = self
            .cdf
            .breakpoints()
            .into_iter()
            .map(|b| a1 * b - p_jam)
            .filter(|v| *v > 0.0)
            .map(|v| v.powf(1.0 / alpha))
            .collect();
        let v = adaptive_simpson(&integrand, lo, hi, &breaks, SOP_REL_TOL, 1e-15);
        Ok(v.clamp(0.0, 1.0))
    }

    /// SOP for `L` Eves; certain outage once Bob's rate is unreachable
    /// (`φ ≥ φ_max`).
    pub fn sop(&self, phi: f64) -> Result<f64> {
        let p1 = self.single_eve_outage(phi)?;
        Ok(at_least_one(p1, self.cfg.n_eves))
    }
}

/// `1 − (1 − p)^L`, accurate for small `p`.
fn at_least_one(p: f64, l: usize) -> f64 {
    if p >= 1.0 {
        return 1.0;
    }
    (-(l as f64 * (-p).ln_1p()).exp_m1()).clamp(0.0, 1.0)
}

/// SOP by integrating the crosstalk CDF over Eve's distance.
pub fn sop_closed_form(cfg: &ScenarioConfig, phi: f64, region: &SuspiciousRegion) -> Result<f64> {
    SopEvaluator::new(cfg, region)?.sop(phi)
}

/// Grid intervals per lobe of [`intersection_grid`].
///
/// The clipped boundary has kinks where lobes end, so the intersection
/// converges only about linearly; 128 intervals per lobe still leave errors
/// near 1e-3 in the SOP, 512 bring them to a few 1e-5.
pub const INTERSECTION_INTERVALS_PER_LOBE: usize = 512;

/// Lobe-aligned grid around Bob used for SOP by region intersection.
pub fn intersection_grid(cfg: &ScenarioConfig) -> ThetaGrid {
    ThetaGrid::lobe_aligned(&cfg.geometry, cfg.bob_theta, INTERSECTION_INTERVALS_PER_LOBE)
        .expect("fixed resolution is valid")
}

/// SOP from the area of `SOR ∩ R_sus`, clipped in polar coordinates.
pub fn sop_intersection(boundary: &SorBoundary, region: &SuspiciousRegion, n_eves: usize) -> Result<f64> {
    let area = region.area();
    if !(area > 0.0) {
        return Err(Error::domain("suspicious region has zero area"));
    }
    let p1 = (intersection_area(boundary, region) / area).clamp(0.0, 1.0);
    Ok(at_least_one(p1, n_eves))
}

/// `∫_{A_e} ½ [min(d̄, D_max)² − D_min²]⁺ dθ` over the boundary grid.
///
/// Between grid nodes `d̄²` and the region limits are taken as linear; each
/// interval is split where the clipping switches, so the piecewise-linear
/// model is integrated exactly.
pub fn intersection_area(boundary: &SorBoundary, region: &SuspiciousRegion) -> f64 {
    let (a, b) = (region.angles.min(), region.angles.max());
    let th = &boundary.thetas;
    let r = &boundary.radii;
    let interp_sq = |t: f64| -> f64 {
        let i = th.partition_point(|x| *x <= t).clamp(1, th.len() - 1);
        let w = ((t - th[i - 1]) / (th[i] - th[i - 1])).clamp(0.0, 1.0);
        let (r0, r1) = (r[i - 1] * r[i - 1], r[i] * r[i]);
        r0 + w * (r1 - r0)
    };
    let mut xs = vec![a];
    let mut q = vec![interp_sq(a)];
    for (t, d) in th.iter().zip(r) {
        if *t > a && *t < b {
            xs.push(*t);
            q.push(d * d);
        }
    }
    xs.push(b);
    q.push(interp_sq(b));

    let clipped = |t: f64, q: f64| {
        let (lo, hi) = region.limits_at(t);
        0.5 * (q.min(hi * hi) - lo * lo).max(0.0)
    };
    let mut total = 0.0;
    for i in 1..xs.len() {
        let (t0, t1) = (xs[i - 1], xs[i]);
        let (q0, q1) = (q[i - 1], q[i]);
        let (lo0, hi0) = region.limits_at(t0);
        let (lo1, hi1) = region.limits_at(t1);
        // fractions of the interval where d̄² meets D_min² or D_max²
        let mut cuts = vec![0.0, 1.0];
        for (l0, l1) in [(lo0 * lo0, lo1 * lo1), (hi0 * hi0, hi1 * hi1)] {
            let (g0, g1) = (q0 - l0, q1 - l1);
            if g0 * g1 < 0.0 {
                cuts.push(g0 / (g0 - g1));
            }
        }
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            let (u0, u1) = (w[0], w[1]);
            let ta = t0 + u0 * (t1 - t0);
            let tb = t0 + u1 * (t1 - t0);
            let ya = clipped(ta, q0 + u0 * (q1 - q0));
            let yb = clipped(tb, q0 + u1 * (q1 - q0));
            total += 0.5 * (tb - ta) * (ya + yb);
        }
    }
    total
}

/// Largest `d_max` for which some jamming is guaranteed to lower the SOP:
/// `(s_max h(P̃))^{1/α}`, with `s_max` the largest crosstalk reachable from
/// `angles`.
pub fn jamming_beneficial_dmax(cfg: &ScenarioConfig, angles: &AngleRange) -> Result<f64> {
    phi_max(cfg)?;
    let s_max = s_max_feasible(&cfg.bob_profile(), angles);
    Ok((s_max * outage_gain(cfg, cfg.p_tilde())).powf(1.0 / cfg.alpha))
}

/// Outcome of [`is_jamming_beneficial`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JammingBenefit {
    /// `d_max` lies below the jamming-beneficial bound.
    pub beneficial: bool,
    pub dmax_bound: f64,
    /// A jamming fraction with strictly lower SOP than no jamming.
    pub witness_phi: Option<f64>,
    pub sop_at_zero: f64,
    pub sop_at_witness: Option<f64>,
}

/// Coarse and fine grid steps of the witness search.
const WITNESS_STEPS: [f64; 2] = [1e-2, 1e-3];

/// Check the jamming-beneficial condition and search for a witness `φ`.
pub fn is_jamming_beneficial(cfg: &ScenarioConfig, region: &SuspiciousRegion) -> Result<JammingBenefit> {
    let RegionBoundary::Constant { d_max, .. } = region.boundary else {
        return Err(Error::precondition("jamming-benefit test needs constant distance limits"));
    };
    let bound = jamming_beneficial_dmax(cfg, &region.angles)?;
    let eval = SopEvaluator::new(cfg, region)?;
    let sop0 = eval.sop(0.0)?;
    let mut out = JammingBenefit {
        beneficial: d_max < bound,
        dmax_bound: bound,
        witness_phi: None,
        sop_at_zero: sop0,
        sop_at_witness: None,
    };
    if !out.beneficial || sop0 == 0.0 {
        return Ok(out);
    }
    for step in WITNESS_STEPS {
        let n = (eval.phi_max() / step).ceil() as usize;
        let best = (1..n)
            .map(|i| i as f64 * step)
            .filter(|p| *p < eval.phi_max())
            .map(|p| eval.sop(p).map(|v| (p, v)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(None, |acc: Option<(f64, f64)>, (p, v)| match acc {
                Some((_, bv)) if bv <= v => acc,
                _ => Some((p, v)),
            });
        if let Some((p, v)) = best {
            if v < sop0 {
                out.witness_phi = Some(p);
                out.sop_at_witness = Some(v);
                break;
            }
        }
    }
    Ok(out)
}
