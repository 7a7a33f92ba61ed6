//! Finite-array Monte Carlo: Rician channel draws, exact SINRs with MRT and
//! artificial-noise jamming, and the empirical secrecy outage probability.
//!
//! Everything here works with explicit `N`-element vectors and makes no
//! large-array approximation, so it serves as the ground truth for the
//! asymptotic formulas.
//!
//! Randomness is counter-based: the draws of receiver `r` in sample `i`
//! come from a ChaCha stream keyed by `(master_seed, i, r)`. Results are
//! therefore identical for any thread count, and adding Eves never changes
//! Bob's (or earlier Eves') draws.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{JammingBasis, PowerAllocation, ScenarioConfig};
use crate::crosstalk::{dirichlet, steering_vector, AngleRange, ArrayGeometry};
use crate::error::{Error, Result};
use crate::sop::{RegionBoundary, SuspiciousRegion};

/// Words reserved in a sample's stream for each receiver.
const RECEIVER_STRIDE: u128 = 1 << 40;

/// Quantity a Monte Carlo run estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McEstimate {
    SinrBob,
    SinrEve,
    CrosstalkCdf,
    Sop,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McRunSpec {
    pub n_samples: usize,
    pub master_seed: u64,
    /// Number of antennas actually simulated.
    pub finite_nt: usize,
    pub estimate: McEstimate,
    /// Rician K-factor of every link; `f64::INFINITY` for pure line of sight.
    pub k_factor: f64,
}

impl McRunSpec {
    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::domain("Monte Carlo needs at least one sample"));
        }
        if !(self.k_factor >= 0.0) {
            return Err(Error::domain(format!("K-factor must be non-negative, got {}", self.k_factor)));
        }
        Ok(())
    }

    /// Array geometry of the simulation: `finite_nt` elements at the
    /// scenario's spacing.
    pub fn geometry(&self, cfg: &ScenarioConfig) -> Result<ArrayGeometry> {
        ArrayGeometry::new(self.finite_nt, cfg.geometry.spacing())
    }
}

/// Deterministic stream for one receiver in one sample.
pub fn receiver_rng(master_seed: u64, sample: u64, receiver: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(sample);
    rng.set_word_pos(receiver as u128 * RECEIVER_STRIDE);
    rng
}

/// One receiver's channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    pub h: Vec<Complex64>,
    pub k_factor: f64,
    pub theta: f64,
    pub dist: f64,
}

fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Rician channel `√(K/(1+K)) s̄(θ) + √(1/(1+K)) g` with `g ~ CN(0, I)`.
pub fn draw_channel<R: Rng>(
    theta: f64,
    dist: f64,
    k_factor: f64,
    geom: &ArrayGeometry,
    rng: &mut R,
) -> Result<ChannelDraw> {
    if !(k_factor >= 0.0) {
        return Err(Error::domain(format!("K-factor must be non-negative, got {k_factor}")));
    }
    let los = steering_vector(theta, geom)?;
    let h = if k_factor.is_infinite() {
        los
    } else {
        let a = (k_factor / (1.0 + k_factor)).sqrt();
        let b = (1.0 / (1.0 + k_factor)).sqrt();
        los.into_iter().map(|s| s * a + complex_normal(rng) * b).collect()
    };
    Ok(ChannelDraw { h, k_factor, theta, dist })
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Orthonormal basis of the orthogonal complement of `h`, from the columns
/// of a Householder reflector mapping `h` onto the first axis.
pub fn null_space_basis(h: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
    let norm = norm_sqr(h).sqrt();
    if !(norm > 0.0) || h.len() < 2 {
        return Err(Error::domain("null space needs a nonzero vector of length at least 2"));
    }
    let phase = if h[0].norm() > 0.0 { h[0] / h[0].norm() } else { Complex64::new(1.0, 0.0) };
    // u = x − α e1 with α = −phase·‖x‖ avoids cancellation
    let mut u = h.to_vec();
    u[0] += phase * norm;
    let scale = 2.0 / norm_sqr(&u);
    Ok((1..h.len())
        .map(|j| {
            let c = u[j].conj() * scale;
            let mut col: Vec<Complex64> = u.iter().map(|x| -x * c).collect();
            col[j] += 1.0;
            col
        })
        .collect())
}

/// Unit-norm jamming vectors of a beam basis (absent for null-space
/// jamming, which is handled through the completeness identity).
fn beam_vectors(basis: &JammingBasis, geom: &ArrayGeometry, bob_theta: f64) -> Option<Vec<Vec<Complex64>>> {
    let n = geom.n_antennas();
    let steer = |u: f64| -> Vec<Complex64> {
        let step = -2.0 * PI * geom.spacing() * u;
        (0..n).map(|i| Complex64::from_polar(1.0 / (n as f64).sqrt(), step * i as f64)).collect()
    };
    match basis {
        JammingBasis::NullSpaceUniform => None,
        JammingBasis::DftSelected { sines } | JammingBasis::Custom { sines } => {
            Some(sines.iter().map(|u| steer(*u)).collect())
        }
        JammingBasis::Projected { sines } => {
            let sb = bob_theta.sin();
            let b = steer(sb);
            Some(
                sines
                    .iter()
                    .map(|u| {
                        let v = steer(*u);
                        let c = inner(&b, &v);
                        let p: Vec<Complex64> = v.iter().zip(&b).map(|(x, y)| x - y * c).collect();
                        let scale = 1.0 / (1.0 - dirichlet(u - sb, geom).powi(2)).sqrt();
                        p.into_iter().map(|x| x * scale).collect()
                    })
                    .collect(),
            )
        }
    }
}

/// Transmit side of a run: signal and jamming powers plus jamming vectors.
struct Transmitter {
    p_signal: f64,
    beams: Option<Vec<Vec<Complex64>>>,
    beam_powers: Vec<f64>,
    jam_total: f64,
}

impl Transmitter {
    fn new(cfg: &ScenarioConfig, alloc: &PowerAllocation, geom: &ArrayGeometry) -> Result<Self> {
        let beams = beam_vectors(&alloc.basis, geom, cfg.bob_theta);
        if let Some(b) = &beams {
            if b.len() != alloc.beam_powers.len() {
                return Err(Error::domain("beam powers do not match the basis"));
            }
        }
        Ok(Self {
            p_signal: (1.0 - alloc.phi) * cfg.p_tot,
            beams,
            beam_powers: alloc.beam_powers.clone(),
            jam_total: alloc.total_power(),
        })
    }

    /// `(SINR_b, SINR_e)` for MRT towards `bob`.
    fn sinrs(&self, cfg: &ScenarioConfig, bob: &ChannelDraw, eve: &ChannelDraw) -> (f64, f64) {
        let hb2 = norm_sqr(&bob.h);
        let gain_b = bob.dist.powf(-cfg.alpha);
        let gain_e = eve.dist.powf(-cfg.alpha);
        let eve_sig = inner(&eve.h, &bob.h).norm_sqr() / hb2;
        let (jam_b, jam_e) = match &self.beams {
            // jamming lives in null(h_b): none reaches Bob, and an Eve
            // collects ‖h_e‖² − |h_eᴴ w_b|² spread over N − 1 directions
            None => {
                let per_dir = self.jam_total / (bob.h.len() - 1) as f64;
                (0.0, per_dir * (norm_sqr(&eve.h) - eve_sig).max(0.0))
            }
            Some(vs) => vs.iter().zip(&self.beam_powers).filter(|(_, p)| **p > 0.0).fold(
                (0.0, 0.0),
                |(b, e), (v, p)| (b + p * inner(&bob.h, v).norm_sqr(), e + p * inner(&eve.h, v).norm_sqr()),
            ),
        };
        let sinr_b = self.p_signal * gain_b * hb2 / (cfg.n0 + gain_b * jam_b);
        let sinr_e = self.p_signal * gain_e * eve_sig / (cfg.n0 + gain_e * jam_e);
        (sinr_b, sinr_e)
    }
}

/// Exact SINRs of Bob and one Eve under MRT `w_b = h_b/‖h_b‖` and the
/// allocation's jamming. Null-space jamming is orthogonal to `h_b` by
/// construction, so Bob's interference term is exactly zero.
pub fn sinr_exact(
    bob: &ChannelDraw,
    eve: &ChannelDraw,
    alloc: &PowerAllocation,
    cfg: &ScenarioConfig,
) -> Result<(f64, f64)> {
    if bob.h.len() != eve.h.len() {
        return Err(Error::domain("Bob and Eve channels differ in length"));
    }
    let geom = ArrayGeometry::new(bob.h.len(), cfg.geometry.spacing())?;
    Ok(Transmitter::new(cfg, alloc, &geom)?.sinrs(cfg, bob, eve))
}

/// `[log2(1+γ_b) − log2(1+γ_e)]⁺`.
pub fn secrecy_rate(sinr_bob: f64, sinr_eve: f64) -> f64 {
    (sinr_bob.ln_1p() - sinr_eve.ln_1p()).max(0.0) / std::f64::consts::LN_2
}

/// Outage when the secrecy rate falls short of `r_th`; a zero secrecy rate
/// counts as outage even for `r_th = 0`.
pub fn is_secrecy_outage(rate: f64, r_th: f64) -> bool {
    rate < r_th || rate == 0.0
}

/// Eve position uniform over the region's area, by rejection from the
/// enclosing annular sector.
pub fn sample_eve_position<R: Rng>(region: &SuspiciousRegion, rng: &mut R) -> (f64, f64) {
    let (lo, hi) = match &region.boundary {
        RegionBoundary::Constant { d_min, d_max } => (*d_min, *d_max),
        RegionBoundary::Sampled { d_min, d_max, .. } => (
            d_min.iter().copied().fold(f64::INFINITY, f64::min),
            d_max.iter().copied().fold(0.0, f64::max),
        ),
    };
    loop {
        let theta = rng.random_range(region.angles.min()..=region.angles.max());
        let d = (lo * lo + rng.random::<f64>() * (hi * hi - lo * lo)).sqrt();
        let (a, b) = region.limits_at(theta);
        if d >= a && d <= b {
            return (theta, d);
        }
    }
}

/// Empirical SOP with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SopEstimate {
    pub sop: f64,
    pub std_error: f64,
    pub outages: usize,
    pub n_samples: usize,
}

fn run_samples<T, F>(spec: &McRunSpec, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    spec.validate()?;
    (0..spec.n_samples as u64).into_par_iter().map(f).collect()
}

/// Fraction of trials where `L` Eves, uniform in the region, push the
/// secrecy rate below `R_th` (the best Eve decides).
pub fn empirical_sop(
    cfg: &ScenarioConfig,
    region: &SuspiciousRegion,
    alloc: &PowerAllocation,
    spec: &McRunSpec,
) -> Result<SopEstimate> {
    let geom = spec.geometry(cfg)?;
    let tx = Transmitter::new(cfg, alloc, &geom)?;
    let flags = run_samples(spec, |i| {
        let mut rng = receiver_rng(spec.master_seed, i, 0);
        let bob = draw_channel(cfg.bob_theta, cfg.bob_dist, spec.k_factor, &geom, &mut rng)?;
        let mut best_eve = 0.0f64;
        let mut sinr_b = 0.0;
        for l in 0..cfg.n_eves {
            let mut rng = receiver_rng(spec.master_seed, i, l as u64 + 1);
            let (theta, d) = sample_eve_position(region, &mut rng);
            let eve = draw_channel(theta, d, spec.k_factor, &geom, &mut rng)?;
            let (b, e) = tx.sinrs(cfg, &bob, &eve);
            sinr_b = b;
            best_eve = best_eve.max(e);
        }
        Ok(is_secrecy_outage(secrecy_rate(sinr_b, best_eve), cfg.r_th))
    })?;
    let outages = flags.iter().filter(|f| **f).count();
    let n = spec.n_samples as f64;
    let p = outages as f64 / n;
    Ok(SopEstimate { sop: p, std_error: (p * (1.0 - p) / n).sqrt(), outages, n_samples: spec.n_samples })
}

/// Samples of `|h_eᴴ h_b / N|²` with Bob at his angle and Eve's angle
/// uniform on `angles`.
pub fn sample_crosstalk(cfg: &ScenarioConfig, angles: &AngleRange, spec: &McRunSpec) -> Result<Vec<f64>> {
    let geom = spec.geometry(cfg)?;
    let n = geom.n_antennas() as f64;
    run_samples(spec, |i| {
        let mut rng = receiver_rng(spec.master_seed, i, 0);
        let bob = draw_channel(cfg.bob_theta, cfg.bob_dist, spec.k_factor, &geom, &mut rng)?;
        let mut rng = receiver_rng(spec.master_seed, i, 1);
        let theta = rng.random_range(angles.min()..=angles.max());
        let eve = draw_channel(theta, 1.0, spec.k_factor, &geom, &mut rng)?;
        Ok((inner(&eve.h, &bob.h) / n).norm_sqr())
    })
}

/// `(SINR_b, SINR_e, θ_e, d_e)` per sample, one Eve uniform in the region.
pub fn sample_sinrs(
    cfg: &ScenarioConfig,
    region: &SuspiciousRegion,
    alloc: &PowerAllocation,
    spec: &McRunSpec,
) -> Result<Vec<(f64, f64, f64, f64)>> {
    let geom = spec.geometry(cfg)?;
    let tx = Transmitter::new(cfg, alloc, &geom)?;
    run_samples(spec, |i| {
        let mut rng = receiver_rng(spec.master_seed, i, 0);
        let bob = draw_channel(cfg.bob_theta, cfg.bob_dist, spec.k_factor, &geom, &mut rng)?;
        let mut rng = receiver_rng(spec.master_seed, i, 1);
        let (theta, d) = sample_eve_position(region, &mut rng);
        let eve = draw_channel(theta, d, spec.k_factor, &geom, &mut rng)?;
        let (b, e) = tx.sinrs(cfg, &bob, &eve);
        Ok((b, e, theta, d))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotic::sinr_eve_uniform;
    use approx::assert_relative_eq;

    fn spec(n: usize, k: f64, nt: usize) -> McRunSpec {
        McRunSpec { n_samples: n, master_seed: 7, finite_nt: nt, estimate: McEstimate::Sop, k_factor: k }
    }

    #[test]
    fn los_limit_is_the_steering_vector() {
        let g = ArrayGeometry::new(8, 0.5).unwrap();
        let mut rng = receiver_rng(1, 0, 0);
        let c = draw_channel(0.3, 10.0, f64::INFINITY, &g, &mut rng).unwrap();
        assert_eq!(c.h, steering_vector(0.3, &g).unwrap());
        assert!(c.h.iter().all(|x| (x.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn rayleigh_power_normalization() {
        let g = ArrayGeometry::new(16, 0.5).unwrap();
        let draws = 10_000;
        let vals: Vec<f64> = (0..draws)
            .map(|i| {
                let mut rng = receiver_rng(3, i, 0);
                norm_sqr(&draw_channel(0.0, 1.0, 0.0, &g, &mut rng).unwrap().h) / 16.0
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / draws as f64;
        // ‖h‖²/N is Gamma(N, 1/N): variance 1/N
        let sigma = (1.0 / 16.0 / draws as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn null_space_basis_is_unitary_completion() {
        let g = ArrayGeometry::new(12, 0.5).unwrap();
        let mut rng = receiver_rng(5, 0, 0);
        let hb = draw_channel(0.2, 1.0, 2.0, &g, &mut rng).unwrap().h;
        let he = draw_channel(-0.4, 1.0, 2.0, &g, &mut rng).unwrap().h;
        let basis = null_space_basis(&hb).unwrap();
        assert_eq!(basis.len(), 11);
        let wb: Vec<Complex64> = hb.iter().map(|x| x / norm_sqr(&hb).sqrt()).collect();
        let mut all = vec![wb.clone()];
        all.extend(basis.iter().cloned());
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((inner(a, b) - expect).norm() < 1e-12);
            }
        }
        assert!(basis.iter().all(|v| inner(v, &hb).norm() < 1e-10));
        let sum: f64 = basis.iter().map(|v| inner(&he, v).norm_sqr()).sum();
        assert_relative_eq!(sum, norm_sqr(&he) - inner(&he, &wb).norm_sqr(), max_relative = 1e-9);
    }

    #[test]
    fn null_space_sinr_matches_explicit_basis() {
        let cfg = ScenarioConfig::reference(10, 2.0).unwrap();
        let g = cfg.geometry;
        let mut rng = receiver_rng(9, 0, 0);
        let bob = draw_channel(0.0, 100.0, 5.0, &g, &mut rng).unwrap();
        let eve = draw_channel(0.25, 60.0, 5.0, &g, &mut rng).unwrap();
        let alloc = PowerAllocation::uniform(&cfg, 0.4).unwrap();
        let (b, e) = sinr_exact(&bob, &eve, &alloc, &cfg).unwrap();
        let basis = null_space_basis(&bob.h).unwrap();
        let per = 0.4 / 9.0;
        let jam_b: f64 = basis.iter().map(|v| per * inner(&bob.h, v).norm_sqr()).sum();
        let jam_e: f64 = basis.iter().map(|v| per * inner(&eve.h, v).norm_sqr()).sum();
        let hb2 = norm_sqr(&bob.h);
        let ge = 60f64.powf(-3.0);
        let e_ref = 0.6 * ge * inner(&eve.h, &bob.h).norm_sqr() / hb2 / (cfg.n0 + ge * jam_e);
        assert!(jam_b < 1e-12);
        assert_relative_eq!(b, 0.6 * 1e-6 * hb2 / cfg.n0, max_relative = 1e-14);
        assert_relative_eq!(e, e_ref, max_relative = 1e-9);
    }

    #[test]
    fn clone_of_bob_without_jamming_has_equal_sinr() {
        let cfg = ScenarioConfig::reference(16, 2.0).unwrap();
        let mut rng = receiver_rng(2, 0, 0);
        let bob = draw_channel(0.1, 100.0, 3.0, &cfg.geometry, &mut rng).unwrap();
        let (b, e) = sinr_exact(&bob, &bob.clone(), &PowerAllocation::no_jamming(), &cfg).unwrap();
        assert_relative_eq!(b, e, max_relative = 1e-12);
    }

    #[test]
    fn eve_sinr_approaches_large_array_form() {
        let cfg = ScenarioConfig::reference(400, 5.0).unwrap();
        let region = SuspiciousRegion::constant(AngleRange::from_degrees(-15.0, 15.0).unwrap(), 50.0, 100.0).unwrap();
        let alloc = PowerAllocation::uniform(&cfg, 0.3).unwrap();
        let s = sample_sinrs(&cfg, &region, &alloc, &spec(2000, f64::INFINITY, 400)).unwrap();
        let mut ratios: Vec<f64> = s
            .iter()
            .map(|(_, e, t, d)| e / sinr_eve_uniform(&cfg, 0.3, *t, *d).unwrap())
            .filter(|r| r.is_finite())
            .collect();
        ratios.sort_by(f64::total_cmp);
        let median = ratios[ratios.len() / 2];
        assert!((median - 1.0).abs() < 0.1, "median ratio {median}");
    }

    #[test]
    fn zero_rate_counts_only_eves_beating_bob() {
        let cfg = ScenarioConfig { r_th: 0.0, ..ScenarioConfig::reference(16, 1.0).unwrap() };
        let region = SuspiciousRegion::constant(AngleRange::from_degrees(-10.0, 10.0).unwrap(), 20.0, 150.0).unwrap();
        let alloc = PowerAllocation::no_jamming();
        let sp = spec(3000, 10.0, 16);
        let est = empirical_sop(&cfg, &region, &alloc, &sp).unwrap();
        let direct = sample_sinrs(&cfg, &region, &alloc, &sp).unwrap();
        let beaten = direct.iter().filter(|(b, e, _, _)| e >= b).count();
        assert_eq!(est.outages, beaten);
        assert!(est.outages > 0 && est.outages < 3000);
    }

    #[test]
    fn sop_grows_with_eve_count_on_shared_seeds() {
        let region = SuspiciousRegion::constant(AngleRange::from_degrees(-20.0, 20.0).unwrap(), 30.0, 120.0).unwrap();
        let sp = spec(2000, 20.0, 32);
        let mut last = 0;
        for l in [1, 2, 4, 8] {
            let cfg = ScenarioConfig { n_eves: l, ..ScenarioConfig::reference(32, 5.0).unwrap() };
            let alloc = PowerAllocation::uniform(&cfg, 0.2).unwrap();
            let e = empirical_sop(&cfg, &region, &alloc, &sp).unwrap();
            assert!(e.outages >= last);
            last = e.outages;
        }
    }

    #[test]
    fn results_do_not_depend_on_thread_count() {
        let cfg = ScenarioConfig { n_eves: 3, ..ScenarioConfig::reference(24, 5.0).unwrap() };
        let region = SuspiciousRegion::constant(AngleRange::from_degrees(-20.0, 20.0).unwrap(), 30.0, 120.0).unwrap();
        let alloc = PowerAllocation::uniform(&cfg, 0.2).unwrap();
        let sp = spec(500, 1.0, 24);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sample_sinrs(&cfg, &region, &alloc, &sp).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn projected_beams_do_not_reach_los_bob() {
        let cfg = ScenarioConfig { bob_theta: 0.3, ..ScenarioConfig::reference(16, 2.0).unwrap() };
        let vs = beam_vectors(&JammingBasis::Projected { sines: vec![0.1, 0.7] }, &cfg.geometry, 0.3).unwrap();
        let sb = steering_vector(0.3, &cfg.geometry).unwrap();
        for v in &vs {
            assert!(inner(&sb, v).norm() < 1e-12);
            assert_relative_eq!(norm_sqr(v), 1.0, epsilon = 1e-12);
        }
    }
}
