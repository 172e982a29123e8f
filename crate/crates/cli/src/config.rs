//! Run configuration: TOML file, then command-line overrides.

use std::path::Path;

use carnot47::optimality::TauGrid;
use carnot47::verify::VerifyConfig;
use carnot47::{ConnectOptions, SeedGrid};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub rk4_step: f64,
    /// `τ` grid of the off-C_n determinant check.
    pub grid: TauGrid,
    pub seeds: SeedGrid,
    pub verify: VerifySection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub collinearity: f64,
    pub newton: f64,
    pub oracle: f64,
    /// Level-set residual accepted by classification.
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub grid_points: usize,
    pub tau_max: f64,
    pub draws: usize,
    pub round_trips: usize,
    pub oracle_t_max: f64,
}

impl Default for Config {
    fn default() -> Self {
        let v = VerifyConfig::default();
        Self {
            seed: v.seed,
            tolerances: Tolerances::default(),
            rk4_step: v.rk4_step,
            grid: v.det_grid,
            seeds: SeedGrid::default(),
            verify: VerifySection::default(),
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        let c = ConnectOptions::<f64>::default();
        Self { collinearity: c.collinearity_tol, newton: c.tol, oracle: VerifyConfig::default().oracle_tol, level: 1e-10 }
    }
}

impl Default for VerifySection {
    fn default() -> Self {
        let v = VerifyConfig::default();
        Self { grid_points: v.grid_points, tau_max: v.tau_max, draws: v.draws, round_trips: v.round_trips, oracle_t_max: v.oracle_t_max }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn validate(&self) -> Result<(), String> {
        let t = &self.tolerances;
        let positive = [
            ("tolerances.collinearity", t.collinearity),
            ("tolerances.newton", t.newton),
            ("tolerances.oracle", t.oracle),
            ("tolerances.level", t.level),
            ("rk4_step", self.rk4_step),
            ("grid.step", self.grid.step),
            ("grid.tau_max", self.grid.tau_max),
            ("verify.tau_max", self.verify.tau_max),
            ("verify.oracle_t_max", self.verify.oracle_t_max),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if self.seeds.thetas < 2 || self.seeds.periods == 0 {
            return Err("seeds.thetas must be >= 2 and seeds.periods >= 1".into());
        }
        if self.verify.grid_points == 0 || self.verify.draws == 0 {
            return Err("verify.grid_points and verify.draws must be positive".into());
        }
        Ok(())
    }

    /// SHA-256 of the effective configuration.
    pub fn hash(&self) -> String {
        let text = toml::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn connect_options(&self) -> ConnectOptions<f64> {
        ConnectOptions { tol: self.tolerances.newton, collinearity_tol: self.tolerances.collinearity, seeds: self.seeds.clone() }
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            seed: self.seed,
            grid_points: self.verify.grid_points,
            tau_max: self.verify.tau_max,
            det_grid: self.grid,
            draws: self.verify.draws,
            round_trips: self.verify.round_trips,
            rk4_step: self.rk4_step,
            oracle_t_max: self.verify.oracle_t_max,
            oracle_tol: self.tolerances.oracle,
            mutation: None,
        }
    }
}
