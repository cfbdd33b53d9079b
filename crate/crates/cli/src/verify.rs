//! The `verify` subcommand: runs one of the exact verification suites.

use anyhow::{bail, Result};
use rmfm::verify::{self, SuiteReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Table1,
    Prop1,
    Prop2,
    Prop3,
    Fdist,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "table1" => Suite::Table1,
            "prop1" => Suite::Prop1,
            "prop2" | "dominance" => Suite::Prop2,
            "prop3" => Suite::Prop3,
            "fdist" => Suite::Fdist,
            _ => bail!("unknown suite {s:?} (table1, prop1, prop2, dominance, prop3, fdist)"),
        })
    }
}

pub struct VerifyConfig {
    pub suite: Suite,
    pub seed: u64,
    pub trials: Option<usize>,
    pub factors: Option<usize>,
    pub dims: Option<Vec<usize>>,
}

/// Factor level counts for the span suite. `--dims` wins; `--factors f`
/// alone means three levels per factor.
fn prop3_dims(cfg: &VerifyConfig) -> Result<Vec<usize>> {
    let dims = match (&cfg.dims, cfg.factors) {
        (Some(d), Some(f)) if d.len() != f => bail!("--dims lists {} factors but --factors is {f}", d.len()),
        (Some(d), _) => d.clone(),
        (None, Some(f)) => vec![3; f],
        (None, None) => vec![3, 3],
    };
    if dims.is_empty() || dims.contains(&0) {
        bail!("every factor needs at least one level");
    }
    Ok(dims)
}

pub fn run(cfg: &VerifyConfig) -> Result<SuiteReport> {
    Ok(match cfg.suite {
        Suite::Table1 => verify::table1()?,
        Suite::Prop1 => verify::prop1(cfg.seed, cfg.trials.unwrap_or(500))?,
        Suite::Prop2 => verify::prop2(cfg.seed, cfg.trials.unwrap_or(200))?,
        Suite::Prop3 => verify::prop3(&prop3_dims(cfg)?)?,
        Suite::Fdist => verify::fdist_suite()?,
    })
}
