//! Run configuration: command-line flags layered over an optional TOML file.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use weighted_radius::suite::SuiteEnsemble;

use crate::failure::Failure;

/// Every key accepted in a config file. Flags override these field by field.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub weight: Option<PathBuf>,
    pub matrix: Option<PathBuf>,
    pub t: Option<f64>,
    pub s: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub heavy_trials: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub subalgebra: Option<String>,
    pub budget: Option<usize>,
    pub checkers: Option<Vec<String>>,
    pub ensembles: Option<Vec<SuiteEnsemble>>,
    pub kind: Option<String>,
    pub checker: Option<String>,
    pub pair: Option<usize>,
    pub dim: Option<usize>,
    pub rank: Option<usize>,
    pub n_random: Option<usize>,
    pub n_boundary: Option<usize>,
}

pub const DEFAULT_SEED: u64 = 20240607;
pub const DEFAULT_T: f64 = 0.5;
pub const DEFAULT_S: f64 = 0.5;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_BUDGET: usize = 2000;
pub const DEFAULT_N_RANDOM: usize = 2000;
pub const DEFAULT_N_BOUNDARY: usize = 256;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
    }

    /// Fills every unset field from `base`.
    pub fn or(self, base: RunConfig) -> RunConfig {
        RunConfig {
            weight: self.weight.or(base.weight),
            matrix: self.matrix.or(base.matrix),
            t: self.t.or(base.t),
            s: self.s.or(base.s),
            seed: self.seed.or(base.seed),
            trials: self.trials.or(base.trials),
            heavy_trials: self.heavy_trials.or(base.heavy_trials),
            tol: self.tol.or(base.tol),
            out: self.out.or(base.out),
            subalgebra: self.subalgebra.or(base.subalgebra),
            budget: self.budget.or(base.budget),
            checkers: self.checkers.or(base.checkers),
            ensembles: self.ensembles.or(base.ensembles),
            kind: self.kind.or(base.kind),
            checker: self.checker.or(base.checker),
            pair: self.pair.or(base.pair),
            dim: self.dim.or(base.dim),
            rank: self.rank.or(base.rank),
            n_random: self.n_random.or(base.n_random),
            n_boundary: self.n_boundary.or(base.n_boundary),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn require_weight(&self) -> Result<&Path, Failure> {
        self.weight
            .as_deref()
            .ok_or_else(|| Failure::config("--weight is required"))
    }

    pub fn require_matrix(&self) -> Result<&Path, Failure> {
        self.matrix
            .as_deref()
            .ok_or_else(|| Failure::config("--matrix is required"))
    }
}
