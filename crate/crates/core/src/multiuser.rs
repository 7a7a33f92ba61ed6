//! Secrecy outage regions when Alice serves several users at once.
//!
//! Seen from an eavesdropper that decodes one user, the beams carrying the
//! other users' data are extra jamming: user `u`'s SOR shrinks in the
//! directions of the other users. Users are assumed scheduled far enough
//! apart in angle that they do not interfere with one another.

use serde::{Deserialize, Serialize};

use crate::asymptotic::{
    outage_gain_leaky, sor_area, PowerAllocation, ScenarioConfig, SorBoundary, ThetaGrid,
};
use crate::crosstalk::s_kernel;
use crate::error::{Error, Result};

/// One legitimate user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct User {
    /// Angle (rad).
    pub theta: f64,
    /// Distance (m).
    pub dist: f64,
    /// Signal power (W).
    pub power: f64,
}

/// Users sharing one array, plus optional dedicated jamming.
///
/// `cfg` supplies the array, channel and rate parameters; its `bob_*` fields
/// are ignored in favor of each user's own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiuserScenario {
    pub cfg: ScenarioConfig,
    pub users: Vec<User>,
    /// Jamming beams, or `None` for no dedicated jamming.
    pub jamming: Option<PowerAllocation>,
}

impl MultiuserScenario {
    /// Check the power budget and the scheduling assumption (user sines at
    /// least one main-lobe width `2/(N d)` apart).
    pub fn validate(&self) -> Result<()> {
        self.cfg.validate()?;
        if self.users.is_empty() {
            return Err(Error::domain("multiuser scenario needs at least one user"));
        }
        for (i, u) in self.users.iter().enumerate() {
            if !(u.power >= 0.0) || !(u.dist > 0.0) || u.theta.abs() > std::f64::consts::FRAC_PI_2 {
                return Err(Error::User { user: i, source: Box::new(Error::domain("invalid user parameters")) });
            }
        }
        if let Some(j) = &self.jamming {
            if j.basis.beam_sines().is_none() {
                return Err(Error::domain("multiuser jamming must use explicit beams"));
            }
        }
        let jam = self.jamming.as_ref().map_or(0.0, |j| j.total_power());
        let total = self.users.iter().map(|u| u.power).sum::<f64>() + jam;
        if total > self.cfg.p_tot * (1.0 + 1e-12) {
            return Err(Error::domain(format!("powers add to {total} W, above the {} W budget", self.cfg.p_tot)));
        }
        let width = 2.0 * self.cfg.geometry.null_spacing();
        for i in 0..self.users.len() {
            for j in i + 1..self.users.len() {
                let gap = (self.users[i].theta.sin() - self.users[j].theta.sin()).abs();
                if gap < width * (1.0 - 1e-12) {
                    return Err(Error::precondition(format!(
                        "users {i} and {j} are closer than one main-lobe width"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Single-user view of user `u`: Bob at the user's position.
    pub fn user_config(&self, u: usize) -> Result<ScenarioConfig> {
        let user = self.users.get(u).ok_or_else(|| Error::domain(format!("no user {u}")))?;
        Ok(ScenarioConfig { bob_theta: user.theta, bob_dist: user.dist, ..self.cfg })
    }

    /// Lobe-aligned angle grid around user `u`.
    pub fn user_grid(&self, u: usize, per_lobe: usize) -> Result<ThetaGrid> {
        ThetaGrid::lobe_aligned(&self.cfg.geometry, self.user_config(u)?.bob_theta, per_lobe)
    }
}

/// SOR boundary of user `u`: the directional formula with the other users'
/// beams `s̄(θ_u')/√N` (powers `P_u'`) counted as jamming.
pub fn mu_sor_boundary(scn: &MultiuserScenario, u: usize, grid: &ThetaGrid) -> Result<SorBoundary> {
    scn.validate()?;
    let cfg = scn.user_config(u)?;
    let user = scn.users[u];
    let tag = |e: Error| Error::User { user: u, source: Box::new(e) };

    let n = cfg.n();
    let co_users: Vec<(f64, f64)> = scn
        .users
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != u)
        .map(|(_, o)| (o.theta.sin(), o.power / cfg.n0))
        .collect();
    let dedicated = |theta: f64| scn.jamming.as_ref().map_or(0.0, |j| j.jamming_at(&cfg, theta));
    let jam = |theta: f64| {
        let st = theta.sin();
        dedicated(theta) + co_users.iter().map(|(s, p)| p * n * s_kernel(st - s, &cfg.geometry)).sum::<f64>()
    };

    let leak = dedicated(user.theta);
    let gain = outage_gain_leaky(&cfg, user.power / cfg.n0, leak).ok_or_else(|| {
        let path = cfg.bob_path_gain();
        let sinr = user.power / cfg.n0 * path * n / (1.0 + path * leak);
        tag(Error::InfeasibleRate { deficit: 1.0 - sinr / (cfg.rate_gain() - 1.0) })
    })?;
    let alpha = cfg.alpha;
    Ok(SorBoundary::from_fn(&cfg.geometry, user.theta, grid, |t| {
        let v = gain * cfg.s_eb(t) - jam(t);
        if v > 0.0 {
            v.powf(1.0 / alpha)
        } else {
            0.0
        }
    }))
}

/// Largest per-user SOR area and the user attaining it (smallest index on
/// ties). Each user's area is taken on a lobe-aligned grid around that
/// user with `per_lobe` intervals per lobe.
pub fn mu_worst_area(scn: &MultiuserScenario, per_lobe: usize) -> Result<(f64, usize)> {
    let mut worst = (f64::NEG_INFINITY, 0);
    for u in 0..scn.users.len() {
        let a = sor_area(&mu_sor_boundary(scn, u, &scn.user_grid(u, per_lobe)?)?);
        if a > worst.0 {
            worst = (a, u);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotic::{JammingBasis, sor_boundary_directional, sor_boundary_nojam, DEFAULT_INTERVALS_PER_LOBE};
    use approx::assert_relative_eq;

    fn base() -> ScenarioConfig {
        ScenarioConfig::reference(32, 5.0).unwrap()
    }

    #[test]
    fn single_user_without_jamming_is_the_plain_sor() {
        let cfg = base();
        let scn = MultiuserScenario {
            cfg,
            users: vec![User { theta: 0.0, dist: 100.0, power: 1.0 }],
            jamming: None,
        };
        let grid = scn.user_grid(0, DEFAULT_INTERVALS_PER_LOBE).unwrap();
        let mu = mu_sor_boundary(&scn, 0, &grid).unwrap();
        let su = sor_boundary_nojam(&cfg, &grid).unwrap();
        for (a, b) in mu.radii.iter().zip(&su.radii) {
            assert_relative_eq!(*a, *b, max_relative = 1e-12);
        }
        let (area, who) = mu_worst_area(&scn, DEFAULT_INTERVALS_PER_LOBE).unwrap();
        assert_eq!(who, 0);
        assert_relative_eq!(area, sor_area(&su), max_relative = 1e-12);
    }

    #[test]
    fn silent_co_user_matches_single_user_directional() {
        let cfg = base();
        let jam = PowerAllocation::beams(&cfg, JammingBasis::Projected { sines: vec![0.3, -0.5] }, vec![0.1, 0.2])
            .unwrap();
        let scn = MultiuserScenario {
            cfg,
            users: vec![
                User { theta: 0.0, dist: 100.0, power: 0.7 },
                User { theta: 0.6, dist: 80.0, power: 0.0 },
            ],
            jamming: Some(jam.clone()),
        };
        let grid = scn.user_grid(0, 64).unwrap();
        let mu = mu_sor_boundary(&scn, 0, &grid).unwrap();
        let su = sor_boundary_directional(&cfg, &jam, &grid).unwrap();
        for (a, b) in mu.radii.iter().zip(&su.radii) {
            assert_relative_eq!(*a, *b, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn second_user_only_shrinks_the_first() {
        let cfg = base();
        let one = MultiuserScenario {
            cfg,
            users: vec![User { theta: 0.0, dist: 100.0, power: 0.5 }],
            jamming: None,
        };
        let two = MultiuserScenario {
            users: vec![one.users[0], User { theta: 0.5, dist: 120.0, power: 0.4 }],
            ..one.clone()
        };
        let grid = one.user_grid(0, 64).unwrap();
        let a = mu_sor_boundary(&one, 0, &grid).unwrap();
        let b = mu_sor_boundary(&two, 0, &grid).unwrap();
        assert!(a.radii.iter().zip(&b.radii).all(|(x, y)| y <= x));
        let near = grid.thetas().iter().position(|t| (t - 0.5f64).abs() < 0.02).unwrap();
        assert!(b.radii[near] < a.radii[near]);
    }

    #[test]
    fn mirrored_users_have_mirrored_boundaries() {
        let scn = MultiuserScenario {
            cfg: base(),
            users: vec![
                User { theta: -0.4, dist: 100.0, power: 0.4 },
                User { theta: 0.4, dist: 100.0, power: 0.4 },
            ],
            jamming: None,
        };
        let g0 = scn.user_grid(0, 64).unwrap();
        let mirrored: Vec<f64> = g0.thetas().iter().rev().map(|t| -t).collect();
        let g1 = ThetaGrid::from_thetas(mirrored).unwrap();
        let b0 = mu_sor_boundary(&scn, 0, &g0).unwrap();
        let b1 = mu_sor_boundary(&scn, 1, &g1).unwrap();
        for (x, y) in b0.radii.iter().zip(b1.radii.iter().rev()) {
            assert_relative_eq!(*x, *y, max_relative = 1e-9, epsilon = 1e-9);
        }
        let (_, who) = mu_worst_area(&scn, 64).unwrap();
        assert_eq!(who, 0);
    }

    #[test]
    fn jamming_the_worst_users_lobes_lowers_the_max() {
        let cfg = base();
        let users = vec![
            User { theta: 0.0, dist: 140.0, power: 0.35 },
            User { theta: 0.7, dist: 80.0, power: 0.35 },
        ];
        let plain = MultiuserScenario { cfg, users: users.clone(), jamming: None };
        let (before, worst) = mu_worst_area(&plain, 64).unwrap();
        assert_eq!(worst, 0);
        let w = cfg.geometry.null_spacing();
        let sines = vec![1.5 * w, -1.5 * w];
        let cfg0 = plain.user_config(0).unwrap();
        let jam = PowerAllocation::beams(&cfg0, JammingBasis::Projected { sines }, vec![0.1, 0.1]).unwrap();
        let jammed = MultiuserScenario { jamming: Some(jam), ..plain };
        let (after, _) = mu_worst_area(&jammed, 64).unwrap();
        assert!(after < before, "{after} !< {before}");
    }

    #[test]
    fn scheduling_and_budget_are_checked() {
        let cfg = base();
        let close = MultiuserScenario {
            cfg,
            users: vec![
                User { theta: 0.0, dist: 100.0, power: 0.3 },
                User { theta: 0.02, dist: 100.0, power: 0.3 },
            ],
            jamming: None,
        };
        assert!(matches!(close.validate(), Err(Error::Precondition(_))));
        let rich = MultiuserScenario {
            users: vec![
                User { theta: 0.0, dist: 100.0, power: 0.8 },
                User { theta: 0.5, dist: 100.0, power: 0.8 },
            ],
            ..close.clone()
        };
        assert!(rich.validate().is_err());
        let starved = MultiuserScenario {
            users: vec![
                User { theta: 0.0, dist: 100.0, power: 0.5 },
                User { theta: 0.5, dist: 500.0, power: 1e-6 },
            ],
            ..close
        };
        let grid = starved.user_grid(1, 64).unwrap();
        assert!(matches!(mu_sor_boundary(&starved, 1, &grid), Err(Error::User { user: 1, .. })));
    }
}
