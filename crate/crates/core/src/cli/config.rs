use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bases::{block_repeat, difference_basis, direct_sum, summing_basis, unit_vector_basis, BasisRep};
use crate::condest::{Mode, SearchBudget};
use crate::dkk::{DkkSpace, Partition};
use crate::error::{Error, Result};
use crate::search::AscentConfig;
use crate::seqspace::SymSpace;

pub const MAX_DYADIC_BLOCKS: usize = 16;
pub const MAX_DIM: usize = 1 << 16;
pub const MAX_TRIALS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    Exact,
    #[default]
    Search,
}

impl From<ModeSpec> for Mode {
    fn from(m: ModeSpec) -> Self {
        match m {
            ModeSpec::Exact => Mode::Exact,
            ModeSpec::Search => Mode::Search,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisSpec {
    /// Unit vectors of `space`, or of the top-level `[space]` when omitted.
    Unit { space: Option<SymSpace> },
    Summing,
    Difference,
    DirectSum { first: Box<BasisSpec>, second: Box<BasisSpec> },
    BlockRepeat { base: Box<BasisSpec>, sizes: Vec<usize>, p: f64 },
}

impl BasisSpec {
    pub fn build(&self, default_space: Option<&SymSpace>) -> Result<BasisRep> {
        match self {
            BasisSpec::Unit { space } => {
                let s = space
                    .as_ref()
                    .or(default_space)
                    .ok_or_else(|| Error::Config("unit basis needs a space".into()))?;
                unit_vector_basis(s.clone())
            }
            BasisSpec::Summing => Ok(summing_basis()),
            BasisSpec::Difference => Ok(difference_basis()),
            BasisSpec::DirectSum { first, second } => {
                Ok(direct_sum(first.build(default_space)?, second.build(default_space)?))
            }
            BasisSpec::BlockRepeat { base, sizes, p } => block_repeat(base.build(default_space)?, sizes.clone(), *p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionSpec {
    Dyadic { blocks: usize },
    Explicit { sizes: Vec<usize> },
}

impl PartitionSpec {
    pub fn build(&self) -> Result<Partition> {
        match self {
            PartitionSpec::Dyadic { blocks } => {
                if *blocks > MAX_DYADIC_BLOCKS {
                    return Err(Error::Budget(format!("dyadic partitions are capped at {MAX_DYADIC_BLOCKS} blocks")));
                }
                Partition::dyadic(*blocks)
            }
            PartitionSpec::Explicit { sizes } => {
                let p = Partition::new(sizes.clone())?;
                if p.total() > MAX_DIM {
                    return Err(Error::Budget(format!("partition covers {} coordinates, cap {MAX_DIM}", p.total())));
                }
                Ok(p)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub seed: Option<u64>,
    #[serde(default = "one")]
    pub m_min: usize,
    pub m_max: Option<usize>,
    pub r_max: Option<usize>,
    #[serde(default)]
    pub mode: ModeSpec,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_random_subsets")]
    pub random_subsets: usize,
    #[serde(default = "default_sweeps")]
    pub sweeps: usize,
    /// Truncation for `k_m`, greedy sweeps and super-democracy.
    pub dim: Option<usize>,
    /// Horizon of the regularity checks.
    pub horizon: Option<usize>,
    #[serde(default = "default_inner_cap")]
    pub inner_dim_cap: usize,
    #[serde(default = "one_f")]
    pub fit_exponent: f64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn one() -> usize {
    1
}
fn one_f() -> f64 {
    1.0
}
fn default_trials() -> usize {
    1000
}
fn default_restarts() -> usize {
    2
}
fn default_random_subsets() -> usize {
    32
}
fn default_sweeps() -> usize {
    40
}
fn default_inner_cap() -> usize {
    10
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            seed: None,
            m_min: 1,
            m_max: None,
            r_max: None,
            mode: ModeSpec::Search,
            trials: default_trials(),
            restarts: default_restarts(),
            random_subsets: default_random_subsets(),
            sweeps: default_sweeps(),
            dim: None,
            horizon: None,
            inner_dim_cap: default_inner_cap(),
            fit_exponent: 1.0,
            out: None,
            format: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub vectors: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub space: Option<SymSpace>,
    pub basis: Option<BasisSpec>,
    pub partition: Option<PartitionSpec>,
    #[serde(default)]
    pub run: RunSpec,
    pub norm: Option<NormSpec>,
}

/// What a config describes: a basis on its own, or the DKK space built over it.
pub enum Target {
    Basis(BasisRep),
    Dkk(Box<DkkSpace>),
}

impl Target {
    pub fn normer(&self) -> &dyn crate::normer::Normer {
        match self {
            Target::Basis(b) => b,
            Target::Dkk(y) => y.as_ref(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        ExperimentConfig::from_toml(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = &self.space {
            s.validate()?;
        }
        let r = &self.run;
        if r.trials == 0 || r.trials > MAX_TRIALS {
            return Err(Error::Budget(format!("trials must be in [1, {MAX_TRIALS}], got {}", r.trials)));
        }
        for (name, v) in [("dim", r.dim), ("m_max", r.m_max), ("horizon", r.horizon)] {
            if let Some(v) = v {
                if v == 0 || v > MAX_DIM {
                    return Err(Error::Budget(format!("{name} must be in [1, {MAX_DIM}], got {v}")));
                }
            }
        }
        if r.m_min == 0 || r.m_max.is_some_and(|m| m < r.m_min) {
            return Err(Error::Config("m range must satisfy 1 <= m_min <= m_max".into()));
        }
        if !(r.fit_exponent > 0.0 && r.fit_exponent.is_finite()) {
            return Err(Error::Config("fit_exponent must be positive".into()));
        }
        if let Some(p) = &self.partition {
            p.build()?;
            if self.space.is_none() {
                return Err(Error::Config("a partition needs a [space]".into()));
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> Result<u64> {
        self.run
            .seed
            .ok_or_else(|| Error::Config("this command is randomized and needs run.seed or --seed".into()))
    }

    pub fn basis(&self) -> Result<BasisRep> {
        match &self.basis {
            Some(b) => b.build(self.space.as_ref()),
            None => {
                let s = self.space.clone().ok_or_else(|| Error::Config("config needs [space] or [basis]".into()))?;
                unit_vector_basis(s)
            }
        }
    }

    pub fn dkk(&self) -> Result<Option<DkkSpace>> {
        match &self.partition {
            None => Ok(None),
            Some(p) => {
                let space = self.space.clone().ok_or_else(|| Error::Config("a partition needs a [space]".into()))?;
                Ok(Some(DkkSpace::new(self.basis()?, space, p.build()?)?))
            }
        }
    }

    pub fn target(&self) -> Result<Target> {
        Ok(match self.dkk()? {
            Some(y) => Target::Dkk(Box::new(y)),
            None => Target::Basis(self.basis()?),
        })
    }

    pub fn budget(&self) -> SearchBudget {
        SearchBudget {
            restarts: self.run.restarts,
            random_subsets: self.run.random_subsets,
            ascent: AscentConfig { sweeps: self.run.sweeps, ..AscentConfig::default() },
        }
    }
}
