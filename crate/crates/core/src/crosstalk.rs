//! Steering vectors, the crosstalk kernel `s(x)` and the distribution of the
//! normalized crosstalk between two receivers.
//!
//! For a uniform linear array of `N` antennas with spacing `d` (wavelengths)
//! the normalized crosstalk between receivers at angles `θ_i` and `θ_j`
//! converges, as `N` grows, to `K_ij · s(Δ)` with `Δ = |sin θ_i − sin θ_j|`
//! and
//!
//! ```text
//! s(x) = sin²(N π d x) / (N² sin²(π d x)),   s(0) = 1.
//! ```
//!
//! `s` is a Dirichlet-type kernel: one main lobe around `x = 0`, side lobes
//! between the nulls `x = k / (N d)`, and grating lobes at multiples of
//! `1 / d`. The lobe structure is what drives every other computation in
//! this crate, so [`KernelLobe`] exposes it explicitly.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{golden_max, newton_bracketed};

/// Absolute tolerance, in the sine domain, for cross points and lobe peaks.
pub const CROSS_POINT_TOL: f64 = 1e-12;

/// Slack allowed when checking that an angle lies in `[-π/2, π/2]`.
const ANGLE_SLACK: f64 = 1e-12;

/// A uniform linear array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    n_antennas: usize,
    spacing: f64,
}

impl ArrayGeometry {
    pub fn new(n_antennas: usize, spacing: f64) -> Result<Self> {
        if n_antennas < 2 {
            return Err(Error::domain(format!("array needs at least 2 antennas, got {n_antennas}")));
        }
        if !(spacing > 0.0 && spacing <= 1.0) {
            return Err(Error::domain(format!("antenna spacing must lie in (0, 1] wavelengths, got {spacing}")));
        }
        Ok(Self { n_antennas, spacing })
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Distance between adjacent kernel nulls in the sine domain, `1/(N d)`.
    pub fn null_spacing(&self) -> f64 {
        1.0 / (self.n_antennas as f64 * self.spacing)
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if theta.is_finite() && theta.abs() <= FRAC_PI_2 + ANGLE_SLACK {
        Ok(())
    } else {
        Err(Error::domain(format!("angle {theta} rad is outside [-π/2, π/2]")))
    }
}

/// Line-of-sight steering vector: element `n` is `exp(-j 2π n d sin θ)`.
pub fn steering_vector(theta: f64, geom: &ArrayGeometry) -> Result<Vec<Complex64>> {
    check_angle(theta)?;
    Ok(steering_vector_unchecked(theta, geom))
}

pub(crate) fn steering_vector_unchecked(theta: f64, geom: &ArrayGeometry) -> Vec<Complex64> {
    let step = -2.0 * PI * geom.spacing * theta.sin();
    (0..geom.n_antennas)
        .map(|n| Complex64::from_polar(1.0, step * n as f64))
        .collect()
}

/// The crosstalk kernel `s(x)`, valued in `[0, 1]`.
///
/// Removable singularities (`sin(π d x) = 0`) evaluate to 1, the grating
/// lobe limit.
pub fn s_kernel(x: f64, geom: &ArrayGeometry) -> f64 {
    let n = geom.n_antennas as f64;
    let arg = PI * geom.spacing * x;
    let den = arg.sin();
    if den.abs() < 1e-300 || x == 0.0 {
        return 1.0;
    }
    let num = (n * arg).sin();
    // Near a grating point both sines vanish and rounding can push the
    // ratio a hair above 1.
    (num * num / (n * n * den * den)).min(1.0)
}

/// Signed array factor `D(x) = sin(Nπdx)/(N sin(πdx))`, so that
/// `s(x) = D(x)²` and `s̄(θ)ᴴ s̄(θ') / N` has modulus `|D(sin θ' − sin θ)|`.
pub fn dirichlet(x: f64, geom: &ArrayGeometry) -> f64 {
    let n = geom.n_antennas as f64;
    let arg = PI * geom.spacing * x;
    let den = arg.sin();
    if den.abs() < 1e-12 {
        // removable singularity: ratio of derivatives
        return (n * arg).cos() / arg.cos();
    }
    (n * arg).sin() / (n * den)
}

/// `s(x)` and its derivative, away from removable singularities.
fn s_kernel_with_slope(x: f64, geom: &ArrayGeometry) -> (f64, f64) {
    let n = geom.n_antennas as f64;
    let c = PI * geom.spacing;
    let arg = c * x;
    let (sa, ca) = arg.sin_cos();
    if sa.abs() < 1e-12 {
        return (1.0, 0.0);
    }
    let (sn, cn) = (n * arg).sin_cos();
    let q = sn / (n * sa);
    let dq = c * (n * cn * sa - sn * ca) / (n * sa * sa);
    (q * q, 2.0 * q * dq)
}

/// `K_i K_j / ((1 + K_i)(1 + K_j))`, with an infinite K-factor meaning pure
/// line of sight.
pub fn k_factor_product(k_i: f64, k_j: f64) -> f64 {
    let frac = |k: f64| if k.is_infinite() { 1.0 } else { k / (1.0 + k) };
    frac(k_i) * frac(k_j)
}

/// Which peak-value formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PeakForm {
    /// `1 / (N² sin²(π (m + ½) / N))`.
    #[default]
    Exact,
    /// The large-array limit `1 / (π² (m + ½)²)`.
    LargeArray,
}

/// Peak value of the `m`-th lobe of `s(x)` (`m = 0` is the main lobe).
///
/// Only lobes in the decaying half-period (`m + ½ < N/2`) are representable;
/// beyond it the kernel rises again toward the next grating lobe.
pub fn peak_value(m: usize, geom: &ArrayGeometry, form: PeakForm) -> Result<f64> {
    if m == 0 {
        return Ok(1.0);
    }
    let n = geom.n_antennas as f64;
    let half = m as f64 + 0.5;
    if half >= n / 2.0 {
        return Err(Error::LobeRange { m, limit: geom.n_antennas / 2 });
    }
    Ok(match form {
        PeakForm::Exact => {
            let s = (PI * half / n).sin();
            1.0 / (n * n * s * s)
        }
        PeakForm::LargeArray => 1.0 / (PI * PI * half * half),
    })
}

/// One lobe of `s(x)` on `x ≥ 0`: the kernel is unimodal on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelLobe {
    /// 0 for the main lobe, then 1, 2, ... outward.
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    pub peak_x: f64,
    pub peak: f64,
}

impl KernelLobe {
    /// Points where the kernel crosses `u` inside this lobe, or `None` when
    /// the lobe peak does not exceed `u`.
    pub fn crossings(&self, u: f64, geom: &ArrayGeometry) -> Option<(f64, f64)> {
        if self.peak <= u {
            return None;
        }
        let f = |x: f64| {
            let (v, dv) = s_kernel_with_slope(x, geom);
            (v - u, dv)
        };
        let left = if self.peak_x <= self.lo {
            self.lo
        } else {
            newton_bracketed(f, self.lo, self.peak_x, CROSS_POINT_TOL)
        };
        let right = if self.peak_x >= self.hi {
            self.hi
        } else {
            newton_bracketed(f, self.peak_x, self.hi, CROSS_POINT_TOL)
        };
        Some((left, right))
    }
}

/// All lobes of `s(x)` whose support starts below `x_max`.
///
/// Lobe boundaries are the analytic nulls `k/(N d)`; nulls at multiples of
/// `N` are removable singularities, so the two lobes on either side merge
/// into one grating lobe.
pub fn kernel_lobes(geom: &ArrayGeometry, x_max: f64) -> Vec<KernelLobe> {
    let n = geom.n_antennas;
    let w = geom.null_spacing();
    let mut lobes = vec![KernelLobe { index: 0, lo: 0.0, hi: w, peak_x: 0.0, peak: 1.0 }];
    let mut k = 1usize;
    while (k as f64) * w < x_max {
        let lo_k = k;
        let mut hi_k = k + 1;
        if hi_k.is_multiple_of(n) {
            hi_k += 1;
        }
        let lo = lo_k as f64 * w;
        let hi = hi_k as f64 * w;
        let (peak_x, peak) = if (lo_k + 1).is_multiple_of(n) {
            // grating lobe centred on a multiple of 1/d
            let c = (lo_k + 1) as f64 * w;
            (c, 1.0)
        } else {
            golden_max(|x| s_kernel(x, geom), lo, hi, CROSS_POINT_TOL)
        };
        lobes.push(KernelLobe { index: lobes.len(), lo, hi, peak_x, peak });
        k = hi_k;
    }
    lobes
}

/// Angular support `[θ_min, θ_max]` of a uniformly distributed receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleRange {
    min: f64,
    max: f64,
}

impl AngleRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        check_angle(min)?;
        check_angle(max)?;
        if !(min < max) {
            return Err(Error::domain(format!("empty angle range [{min}, {max}]")));
        }
        Ok(Self { min: min.max(-FRAC_PI_2), max: max.min(FRAC_PI_2) })
    }

    pub fn from_degrees(min_deg: f64, max_deg: f64) -> Result<Self> {
        Self::new(min_deg.to_radians(), max_deg.to_radians())
    }

    /// The whole front half-plane.
    pub fn half_plane() -> Self {
        Self { min: -FRAC_PI_2, max: FRAC_PI_2 }
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.min && theta <= self.max
    }

    /// Range of `Δ = |sin θ − sin θ_ref|` reachable from this angle range.
    pub fn offset_range(&self, theta_ref: f64) -> (f64, f64) {
        let (sa, sb) = (self.min.sin(), self.max.sin());
        let sr = theta_ref.sin();
        let lo = if sr >= sa && sr <= sb { 0.0 } else { (sa - sr).abs().min((sb - sr).abs()) };
        let hi = (sa - sr).abs().max((sb - sr).abs());
        (lo, hi)
    }
}

/// CDF of `Δ = |sin θ − sin θ_ref|` for `θ` uniform on `range`.
pub fn delta_cdf(z: f64, theta_ref: f64, range: &AngleRange) -> Result<f64> {
    check_angle(theta_ref)?;
    Ok(delta_cdf_unchecked(z, theta_ref.sin(), range))
}

fn delta_cdf_unchecked(z: f64, sin_ref: f64, range: &AngleRange) -> f64 {
    let upper = (z + sin_ref).min(1.0).asin().min(range.max);
    let lower = (sin_ref - z).max(-1.0).asin().max(range.min);
    ((upper - lower) / range.width()).clamp(0.0, 1.0)
}

/// Normalized crosstalk seen from a reference receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrosstalkProfile {
    geometry: ArrayGeometry,
    theta_ref: f64,
    k_factor_product: f64,
    n_side_lobes: usize,
}

impl CrosstalkProfile {
    /// Profile with the default side-lobe count, enough lobes to cover every
    /// reachable offset `Δ ∈ [0, 1 + |sin θ_ref|]`.
    pub fn new(geometry: ArrayGeometry, theta_ref: f64, k_factor_product: f64) -> Result<Self> {
        check_angle(theta_ref)?;
        if !(0.0..=1.0).contains(&k_factor_product) {
            return Err(Error::domain(format!("K-factor product must lie in [0, 1], got {k_factor_product}")));
        }
        let n_side_lobes = Self::default_side_lobes(&geometry, theta_ref);
        Ok(Self { geometry, theta_ref, k_factor_product, n_side_lobes })
    }

    /// Override the number of side lobes `M` retained by the CDF.
    pub fn with_side_lobes(mut self, m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain("at least one side lobe is required"));
        }
        self.n_side_lobes = m;
        Ok(self)
    }

    pub fn default_side_lobes(geometry: &ArrayGeometry, theta_ref: f64) -> usize {
        let span = geometry.n_antennas as f64 * geometry.spacing * (1.0 + theta_ref.sin().abs());
        (span.ceil() as usize).saturating_sub(1).max(1)
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn theta_ref(&self) -> f64 {
        self.theta_ref
    }

    pub fn k_factor_product(&self) -> f64 {
        self.k_factor_product
    }

    pub fn n_side_lobes(&self) -> usize {
        self.n_side_lobes
    }

    /// `|sin θ_i − sin θ_ref|`.
    pub fn offset(&self, theta_i: f64) -> f64 {
        (theta_i.sin() - self.theta_ref.sin()).abs()
    }

    /// `K · s(|sin θ_i − sin θ_ref|)`.
    pub fn normalized_crosstalk(&self, theta_i: f64) -> f64 {
        self.k_factor_product * s_kernel(self.offset(theta_i), &self.geometry)
    }
}

/// Crossings of `s(x) = u` on the main lobe and every side lobe up to `M`
/// whose peak exceeds `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LobeLandmarks {
    /// `PV_0 ..= PV_M'`, truncated at the last representable lobe.
    pub peak_values: Vec<f64>,
    /// Falling-edge crossing of the main lobe.
    pub cross_point_main: f64,
    pub cross_points_side: Vec<SideCrossing>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideCrossing {
    pub lobe: usize,
    pub left: f64,
    pub right: f64,
}

/// Cross points of the threshold `u ∈ (0, 1)` with the kernel.
pub fn cross_points(u: f64, profile: &CrosstalkProfile) -> Result<LobeLandmarks> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("threshold must lie in (0, 1), got {u}")));
    }
    let geom = profile.geometry;
    let m_cap = profile.n_side_lobes;
    let x_max = (m_cap + 1) as f64 * geom.null_spacing();
    let lobes = kernel_lobes(&geom, x_max);

    let peak_values = (0..=m_cap)
        .map_while(|m| peak_value(m, &geom, PeakForm::Exact).ok())
        .collect();
    let cross_point_main = lobes[0].crossings(u, &geom).map(|(_, r)| r).unwrap_or(0.0);
    let cross_points_side = lobes[1..]
        .iter()
        .filter(|l| l.index <= m_cap)
        .filter_map(|l| l.crossings(u, &geom).map(|(left, right)| SideCrossing { lobe: l.index, left, right }))
        .collect();
    Ok(LobeLandmarks { peak_values, cross_point_main, cross_points_side })
}

/// Distribution of the normalized crosstalk `K s(Δ)` when the other
/// receiver's angle is uniform on an [`AngleRange`].
///
/// Lobe geometry is computed once; each evaluation then costs one pair of
/// bisections per lobe whose peak clears the threshold.
#[derive(Debug, Clone)]
pub struct CrosstalkCdf {
    profile: CrosstalkProfile,
    range: AngleRange,
    sin_ref: f64,
    lobes: Vec<KernelLobe>,
    truncated: bool,
    s_max: f64,
}

impl CrosstalkCdf {
    pub fn new(profile: CrosstalkProfile, range: AngleRange) -> Self {
        let geom = profile.geometry;
        let (d_lo, d_hi) = range.offset_range(profile.theta_ref);
        let all: Vec<KernelLobe> = kernel_lobes(&geom, d_hi)
            .into_iter()
            .filter(|l| l.hi > d_lo && l.lo < d_hi)
            .collect();
        let truncated = all.iter().any(|l| l.index > profile.n_side_lobes);
        let lobes: Vec<KernelLobe> = all.into_iter().filter(|l| l.index <= profile.n_side_lobes).collect();

        let s_max = lobes
            .iter()
            .map(|l| {
                let a = l.lo.max(d_lo);
                let b = l.hi.min(d_hi);
                if l.peak_x >= a && l.peak_x <= b {
                    l.peak
                } else {
                    s_kernel(a, &geom).max(s_kernel(b, &geom))
                }
            })
            .fold(0.0, f64::max);

        Self {
            profile,
            range,
            sin_ref: profile.theta_ref.sin(),
            lobes,
            truncated,
            s_max: profile.k_factor_product * s_max,
        }
    }

    pub fn profile(&self) -> &CrosstalkProfile {
        &self.profile
    }

    pub fn range(&self) -> &AngleRange {
        &self.range
    }

    /// True when `M` is too small to cover every reachable lobe; the CDF
    /// then over-estimates below the first dropped peak.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Largest attainable crosstalk over the angle range.
    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    /// Crosstalk values where the CDF has kinks: scaled lobe peaks and the
    /// kernel at the angle-range edges.
    pub fn breakpoints(&self) -> Vec<f64> {
        let k = self.profile.k_factor_product;
        let geom = &self.profile.geometry;
        let (d_lo, d_hi) = self.range.offset_range(self.profile.theta_ref);
        let mut out: Vec<f64> = self.lobes.iter().map(|l| k * l.peak).collect();
        out.push(k * s_kernel(d_lo, geom));
        out.push(k * s_kernel(d_hi, geom));
        out.push(k * s_kernel((self.range.min.sin() - self.sin_ref).abs(), geom));
        out.push(k * s_kernel((self.range.max.sin() - self.sin_ref).abs(), geom));
        out
    }

    /// `Pr{K s(Δ) ≤ x}`.
    pub fn eval(&self, x: f64) -> f64 {
        let k = self.profile.k_factor_product;
        if x < 0.0 {
            return 0.0;
        }
        if k == 0.0 || x >= k {
            return 1.0;
        }
        let u = x / k;
        if u <= 0.0 {
            return 0.0;
        }
        let geom = &self.profile.geometry;
        let above: f64 = self
            .lobes
            .iter()
            .filter_map(|l| l.crossings(u, geom))
            .map(|(a, b)| {
                delta_cdf_unchecked(b, self.sin_ref, &self.range) - delta_cdf_unchecked(a, self.sin_ref, &self.range)
            })
            .sum();
        (1.0 - above).clamp(0.0, 1.0)
    }
}

/// One-shot CDF evaluation; prefer [`CrosstalkCdf`] for repeated queries.
pub fn crosstalk_cdf(x: f64, profile: &CrosstalkProfile, range: &AngleRange) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("crosstalk value must be non-negative, got {x}")));
    }
    Ok(CrosstalkCdf::new(*profile, *range).eval(x))
}

/// `K · max s(Δ)` over the offsets reachable from `range`.
pub fn s_max_feasible(profile: &CrosstalkProfile, range: &AngleRange) -> f64 {
    CrosstalkCdf::new(*profile, *range).s_max()
}
