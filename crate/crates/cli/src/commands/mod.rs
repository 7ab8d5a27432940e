pub mod calibrate;
pub mod cluster;
pub mod gen;
pub mod granulate;

use clap::ValueEnum;
use granulate_core::LmfStat;

/// CLI-facing spelling of the lower-membership row statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LmfStatArg {
    Mean,
    #[value(name = "std-dev")]
    StdDev,
}

impl From<LmfStatArg> for LmfStat {
    fn from(arg: LmfStatArg) -> Self {
        match arg {
            LmfStatArg::Mean => LmfStat::Mean,
            LmfStatArg::StdDev => LmfStat::StdDev,
        }
    }
}
