//! Command-line grammar and conversion of flags into engine inputs.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lightcone::{ExactScalar, Family, GroupContext, SpectralParam, Summand, Window};

use crate::error::CliError;

/// Structure, unitarity and diagrams of degenerate principal series on light cones.
#[derive(Debug, Parser)]
#[command(name = "lightcone", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Constituents and their submodule order.
    Structure(QueryArgs),
    /// Constituents with per-constituent unitarity verdicts.
    Unitarity(UnitarityArgs),
    /// One JSON record per point of a parameter grid.
    Sweep(SweepArgs),
    /// Exact symbolic verification of the transition identities.
    Verify(VerifyArgs),
    /// K-type lattice with barriers, constituents and a Hasse inset.
    Diagram(DiagramArgs),
    /// K-types and their dimensions over a range of base points.
    Dims(DimsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(name = "O")]
    O,
    #[value(name = "U")]
    U,
    #[value(name = "Sp")]
    Sp,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::O => Family::O,
            FamilyArg::U => Family::U,
            FamilyArg::Sp => Family::Sp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SummandArg {
    Plus,
    Minus,
    Both,
}

impl From<SummandArg> for Summand {
    fn from(s: SummandArg) -> Summand {
        match s {
            SummandArg::Plus => Summand::Plus,
            SummandArg::Minus => Summand::Minus,
            SummandArg::Both => Summand::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Svg,
    Text,
}

/// The group `G(p,q)`.
#[derive(Clone, Debug, Args)]
pub struct GroupArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub q: u32,
}

impl GroupArgs {
    /// Validated group context.
    pub fn context(&self) -> Result<GroupContext, CliError> {
        Ok(GroupContext::new(self.family.into(), self.p, self.q)?)
    }
}

/// Family-specific spectral parameters.
///
/// Scalars accept integers, `p/q` fractions, exact decimals, complex values
/// such as `1+2i`, and `generic` for the symbolic parameter.
#[derive(Clone, Debug, Default, Args)]
pub struct ParamArgs {
    /// Shadow degree for `O` and `Sp`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Parity summand for `O`.
    #[arg(long, value_enum)]
    pub summand: Option<SummandArg>,
    /// First weight for `U`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Second weight for `U`.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Fiber index for `Sp`.
    #[arg(long)]
    pub j: Option<u32>,
}

/// Parses one scalar flag.
pub fn parse_scalar(flag: &str, s: &str) -> Result<ExactScalar, CliError> {
    s.parse::<ExactScalar>()
        .map_err(|e| CliError::Usage(format!("invalid --{flag} {s:?}: {e}")))
}

fn required<'a>(
    flag: &str,
    v: &'a Option<String>,
    ctx: &GroupContext,
) -> Result<&'a str, CliError> {
    v.as_deref()
        .ok_or_else(|| CliError::Usage(format!("{ctx} requires --{flag}")))
}

fn forbid<T>(flag: &str, v: &Option<T>, ctx: &GroupContext) -> Result<(), CliError> {
    match v {
        Some(_) => Err(CliError::Usage(format!("--{flag} does not apply to {ctx}"))),
        None => Ok(()),
    }
}

impl ParamArgs {
    /// Spectral parameter for `ctx`, rejecting flags of other families.
    pub fn param(&self, ctx: &GroupContext) -> Result<SpectralParam, CliError> {
        let sp = match ctx.family {
            Family::O => {
                forbid("alpha", &self.alpha, ctx)?;
                forbid("beta", &self.beta, ctx)?;
                forbid("j", &self.j, ctx)?;
                SpectralParam::O {
                    a: parse_scalar("a", required("a", &self.a, ctx)?)?,
                    summand: self.summand.map_or(Summand::Both, Summand::from),
                }
            }
            Family::U => {
                forbid("a", &self.a, ctx)?;
                forbid("summand", &self.summand, ctx)?;
                forbid("j", &self.j, ctx)?;
                SpectralParam::U {
                    alpha: parse_scalar("alpha", required("alpha", &self.alpha, ctx)?)?,
                    beta: parse_scalar("beta", required("beta", &self.beta, ctx)?)?,
                }
            }
            Family::Sp => {
                forbid("alpha", &self.alpha, ctx)?;
                forbid("beta", &self.beta, ctx)?;
                forbid("summand", &self.summand, ctx)?;
                SpectralParam::Sp {
                    a: parse_scalar("a", required("a", &self.a, ctx)?)?,
                    j: self.j.unwrap_or(0),
                }
            }
        };
        sp.validate(ctx)?;
        Ok(sp)
    }
}

/// Flags shared by the single-parameter queries.
#[derive(Clone, Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[command(flatten)]
    pub param: ParamArgs,
    /// Output format; `json` for queries and `svg` for diagrams by default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Lattice window extent; chosen automatically when absent.
    #[arg(long)]
    pub window: Option<i64>,
}

impl QueryArgs {
    /// Context, parameter and optional window override.
    pub fn resolve(&self) -> Result<(GroupContext, SpectralParam, Option<Window>), CliError> {
        let ctx = self.group.context()?;
        let sp = self.param.param(&ctx)?;
        let window = match self.window {
            Some(extent) if extent < 1 => {
                return Err(CliError::Usage(format!(
                    "--window must be positive, got {extent}"
                )))
            }
            Some(extent) => Some(Window { extent }),
            None => None,
        };
        Ok((ctx, sp, window))
    }
}

#[derive(Clone, Debug, Args)]
pub struct UnitarityArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    /// Also report the interval of the whole-module complementary series.
    #[arg(long)]
    pub interval: bool,
}

#[derive(Clone, Debug, Args)]
pub struct DiagramArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    /// Draw only the Hasse diagram of the constituents.
    #[arg(long)]
    pub hasse_only: bool,
}

/// A parameter grid.
///
/// The swept coordinate is `a` for `O` and `Sp` and `α + β` for `U`, from
/// `--from` to `--to` inclusive in steps of `--step`.
#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    #[arg(long, default_value = "1")]
    pub step: String,
    /// Parity summand for `O`.
    #[arg(long, value_enum, default_value = "both")]
    pub summand: SummandArg,
    /// Fixed `α − β` for `U`.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub weight_difference: i64,
    /// Smallest `j` for `Sp`.
    #[arg(long, default_value = "0")]
    pub j_min: u32,
    /// Largest `j` for `Sp`.
    #[arg(long, default_value = "0")]
    pub j_max: u32,
    /// Worker threads; output order does not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    /// Orthogonal transition coefficients.
    Transition,
    /// Coefficients of the `O(p,1)` chain.
    Chain,
    /// Unitary transition coefficients.
    UnitaryTransitions,
    /// Symplectic fiber moves.
    FiberMoves,
    /// Symplectic highest weight vectors.
    HighestWeight,
    /// The invariant pairing between dual parameters.
    Pairing,
    /// Every suite.
    All,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Largest signature index; each suite has its own default.
    #[arg(long)]
    pub max_pq: Option<u32>,
    /// Largest degree or exponent; each suite has its own default.
    #[arg(long)]
    pub max_deg: Option<u32>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct DimsArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[command(flatten)]
    pub param: ParamArgs,
    /// Largest `m` and `|n|` listed.
    #[arg(long, default_value = "3")]
    pub max: i64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl DimsArgs {
    /// Context and parameter; the parameter defaults to zero.
    pub fn resolve(&self) -> Result<(GroupContext, SpectralParam), CliError> {
        let ctx = self.group.context()?;
        let mut p = self.param.clone();
        match ctx.family {
            Family::O | Family::Sp => {
                p.a.get_or_insert_with(|| "0".into());
            }
            Family::U => {
                p.alpha.get_or_insert_with(|| "0".into());
                p.beta.get_or_insert_with(|| "0".into());
            }
        }
        let sp = p.param(&ctx)?;
        Ok((ctx, sp))
    }
}
