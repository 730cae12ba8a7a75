use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use weightraise_core::cong::SubgroupSpec;

use crate::run::CliError;

/// Environment variable consulted when `--cache-dir` is absent.
pub const CACHE_ENV: &str = "WEIGHTRAISE_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// `gamma0`, `gamma1` or `gammaH:h1,h2,...` (generators of H in (Z/N)^*).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "gens")]
pub enum Subgroup {
    Gamma0,
    Gamma1,
    GammaH(Vec<u64>),
}

impl FromStr for Subgroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gamma0" | "g0" => Ok(Subgroup::Gamma0),
            "gamma1" | "g1" => Ok(Subgroup::Gamma1),
            _ => {
                let rest = s
                    .strip_prefix("gammaH:")
                    .or_else(|| s.strip_prefix("gammah:"))
                    .ok_or_else(|| format!("unknown subgroup `{s}` (gamma0, gamma1, gammaH:h1,h2)"))?;
                rest.split(',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.trim().parse::<u64>().map_err(|e| format!("bad generator `{t}`: {e}")))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Subgroup::GammaH)
            }
        }
    }
}

impl Subgroup {
    pub fn spec(&self, n: u64) -> Result<SubgroupSpec, CliError> {
        match self {
            Subgroup::Gamma0 => Ok(SubgroupSpec::gamma0(n)),
            Subgroup::Gamma1 => Ok(SubgroupSpec::gamma1(n)),
            Subgroup::GammaH(h) => SubgroupSpec::gamma_h(n, h).map_err(|e| CliError::Usage(format!("subgroup: {e}"))),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "weightraise", version, about = "Mod-p modular symbols and weight-raising checks")]
pub struct Cli {
    /// Report destination; stdout when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Operator cache directory (overrides $WEIGHTRAISE_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Args, Debug, Clone)]
pub struct SpaceArgs {
    #[arg(long)]
    pub level: u64,
    #[arg(long)]
    pub p: u64,
    /// Prime bound for eigensystem matching; defaults to a Sturm bound.
    #[arg(long)]
    pub bound: Option<u64>,
    /// Largest residue degree split into eigensystems.
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Weight-raising suite (Lemma 1, Shapiro, splitting, Lemma 2, Corollary 1).
    Verify {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value = "gamma1")]
        subgroup: Subgroup,
    },
    /// Cuspidal eigensystems of one space.
    Eig {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 2)]
        weight: u32,
        #[arg(long, default_value = "gamma0")]
        subgroup: Subgroup,
    },
    /// Level-raising criterion against p-new occurrence, on Gamma_0(N).
    Levelraise {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        weight: u32,
    },
    /// SL_2(F_q) checks: Brauer signatures, MeatAxe, semisimplicity.
    Rep {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p: u64,
    },
    /// q-expansion checks: E_(p-1), von Staudt-Clausen, theta, Delta.
    Classical {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 100)]
        precision: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Eig,
    Levelraise,
    Rep,
    Classical,
}

/// Validated run configuration; echoed verbatim into the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub level: Option<u64>,
    pub p: u64,
    pub q: Option<u64>,
    pub weight: Option<u32>,
    pub subgroup: Option<Subgroup>,
    pub bound: Option<u64>,
    pub degree: Option<usize>,
    pub precision: Option<usize>,
    pub output: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl RunConfig {
    fn blank(command: Command, p: u64, format: Format) -> Self {
        RunConfig {
            command,
            level: None,
            p,
            q: None,
            weight: None,
            subgroup: None,
            bound: None,
            degree: None,
            precision: None,
            output: None,
            cache_dir: None,
            format,
        }
    }

    /// Builds and validates a config from parsed flags. The cache directory
    /// falls back to `$WEIGHTRAISE_CACHE_DIR`.
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let mut c = match cli.command {
            CliCommand::Verify { space, subgroup } => {
                let mut c = RunConfig::blank(Command::Verify, space.p, cli.format);
                c.set_space(&space);
                c.subgroup = Some(subgroup);
                c
            }
            CliCommand::Eig { space, weight, subgroup } => {
                let mut c = RunConfig::blank(Command::Eig, space.p, cli.format);
                c.set_space(&space);
                c.weight = Some(weight);
                c.subgroup = Some(subgroup);
                c
            }
            CliCommand::Levelraise { space, weight } => {
                let mut c = RunConfig::blank(Command::Levelraise, space.p, cli.format);
                c.set_space(&space);
                c.weight = Some(weight);
                c.subgroup = Some(Subgroup::Gamma0);
                c
            }
            CliCommand::Rep { q, p } => {
                let mut c = RunConfig::blank(Command::Rep, p, cli.format);
                c.q = Some(q);
                c
            }
            CliCommand::Classical { p, precision } => {
                let mut c = RunConfig::blank(Command::Classical, p, cli.format);
                c.precision = Some(precision);
                c
            }
        };
        c.output = cli.output;
        c.cache_dir = cli.cache_dir.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
        c.validate()?;
        Ok(c)
    }

    fn set_space(&mut self, s: &SpaceArgs) {
        self.level = Some(s.level);
        self.bound = s.bound;
        self.degree = Some(s.degree);
    }

    /// Checks every hypothesis that does not need a computation.
    pub fn validate(&self) -> Result<(), CliError> {
        let p = self.p;
        let hyp = |s: String| Err(CliError::Hypothesis(s));
        if !is_prime(p) {
            return hyp(format!("p prime fails: {p}"));
        }
        if self.format == Format::Csv && matches!(self.command, Command::Rep | Command::Classical) {
            return Err(CliError::Usage(String::from("csv output is only available for eigensystem tables (verify, eig, levelraise)")));
        }
        if matches!(self.command, Command::Verify | Command::Levelraise | Command::Rep | Command::Classical) && p < 5 {
            return hyp(format!("p >= 5 fails: p = {p}"));
        }
        if let Some(n) = self.level {
            if n == 0 {
                return Err(CliError::Usage(String::from("--level must be positive")));
            }
            if n % p == 0 && self.command != Command::Eig {
                return hyp(format!("p does not divide N fails: {p} divides {n}"));
            }
            if self.command == Command::Verify && n < 5 {
                return hyp(format!("N >= 5 fails: N = {n}"));
            }
            if let Some(sg) = &self.subgroup {
                sg.spec(n)?;
            }
        }
        if let Some(k) = self.weight {
            if k < 2 {
                return Err(CliError::Usage(format!("--weight must be at least 2, got {k}")));
            }
        }
        if self.degree == Some(0) {
            return Err(CliError::Usage(String::from("--degree must be at least 1")));
        }
        if let Some(q) = self.q {
            let mut r = q;
            while r % p == 0 && r > 1 {
                r /= p;
            }
            if r != 1 || q < p {
                return hyp(format!("q a power of p fails: q = {q}, p = {p}"));
            }
            if q > weightraise_core::rep::DESK_BOUND {
                return Err(CliError::Usage(format!("q = {q} exceeds the desk bound {}", weightraise_core::rep::DESK_BOUND)));
            }
        }
        if self.precision == Some(0) {
            return Err(CliError::Usage(String::from("--precision must be positive")));
        }
        Ok(())
    }
}
