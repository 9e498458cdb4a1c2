//! Parameter sweeps with closed-form reducibility predicates.

use lightcone::scalar::{parse_rational, rat};
use lightcone::{
    analyze, hermitian_exists, verdicts, ExactScalar, Family, GroupContext, HermitianKind,
    Rational, SpectralParam, Summand,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::SweepArgs;
use crate::error::CliError;
use crate::report::{param_echo, shape_code, ContextEcho, ParamEcho};

/// One grid point of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub context: ContextEcho,
    pub param: ParamEcho,
    pub reducible: bool,
    pub constituents: usize,
    pub finite: usize,
    /// One token per constituent, see [`shape_code`].
    pub shape: String,
    /// Per-constituent verdicts; absent when no invariant form exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Vec<String>>,
    /// Closed-form reducibility prediction, when one is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_reducible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
}

fn is_int(x: &Rational) -> bool {
    x.is_integer()
}

fn parity_matches(a: &Rational, j: i64) -> bool {
    is_int(a) && ((a.to_integer() - j) % 2 == 0.into())
}

/// Closed-form reducibility of a real parameter, where one is known.
///
/// * `O(p,q)`, `q ≥ 2`: non-integer `a` is irreducible; integer `a` makes
///   the sum of both summands reducible.
/// * `O(p,1)`: reducible iff `a` is an integer with `a ≥ 0` or `a ≤ 1 − p`.
/// * `U(p,q)`, `q ≥ 2`: reducible iff `α, β ∈ ℤ`.
/// * `U(p,1)`: reducible iff `α, β ∈ ℤ` outside the open square `(−p, 0)²`.
/// * `Sp(p,q)`, `q ≥ 2`: reducible iff `a ∈ ℤ` and `a ≡ j (mod 2)`.
/// * `Sp(p,1)`, `p ≥ 2`: as for `q ≥ 2`, except inside the open triangle
///   `−4p + j < a < −2 − j`, which is irreducible.
pub fn predicted_reducible(ctx: &GroupContext, sp: &SpectralParam) -> Option<bool> {
    let (p, q) = (ctx.p as i64, ctx.q as i64);
    match sp {
        SpectralParam::O { a, summand } => {
            let a = a.as_rational()?;
            if !is_int(a) {
                return Some(false);
            }
            if q == 1 {
                let a = a.to_integer();
                return Some(a >= 0.into() || a <= (1 - p).into());
            }
            (*summand == Summand::Both).then_some(true)
        }
        SpectralParam::U { alpha, beta } => {
            let (al, be) = (alpha.as_rational()?, beta.as_rational()?);
            let integral = is_int(al) && is_int(be);
            if q >= 2 || !integral {
                return Some(integral);
            }
            let inside = |x: &Rational| &rat(-p) < x && x < &rat(0);
            Some(!(inside(al) && inside(be)))
        }
        SpectralParam::Sp { a, j } => {
            let a = a.as_rational()?;
            let j = *j as i64;
            if !parity_matches(a, j) {
                return Some(false);
            }
            if q >= 2 {
                return Some(true);
            }
            if p < 2 {
                return None;
            }
            Some(!(&rat(-4 * p + j) < a && a < &rat(-2 - j)))
        }
    }
}

/// Record for one parameter.
pub fn sweep_point(ctx: &GroupContext, sp: &SpectralParam) -> Result<SweepRecord, CliError> {
    let d = analyze(ctx, sp)?;
    let v = match hermitian_exists(ctx, sp) {
        HermitianKind::None => None,
        _ => Some(verdicts(&d)?),
    };
    let reducible = match sp.summand() {
        Some(Summand::Both) => d.len() > 2,
        _ => d.len() > 1,
    };
    let predicted = predicted_reducible(ctx, sp);
    Ok(SweepRecord {
        context: ContextEcho {
            family: ctx.family.to_string(),
            p: ctx.p,
            q: ctx.q,
        },
        param: param_echo(sp),
        reducible,
        constituents: d.len(),
        finite: d.finite().len(),
        shape: shape_code(&d, v.as_deref()),
        verdicts: v.map(|v| v.iter().map(|x| x.to_string()).collect()),
        predicted_reducible: predicted,
        agrees: predicted.map(|p| p == reducible),
    })
}

/// Grid points in deterministic order: the swept coordinate outermost, `j`
/// innermost.
pub fn grid(args: &SweepArgs) -> Result<(GroupContext, Vec<SpectralParam>), CliError> {
    let ctx = args.group.context()?;
    let parse = |flag: &str, s: &str| {
        parse_rational(s).map_err(|e| CliError::Usage(format!("invalid --{flag} {s:?}: {e}")))
    };
    let (from, to, step) = (
        parse("from", &args.from)?,
        parse("to", &args.to)?,
        parse("step", &args.step)?,
    );
    if step <= rat(0) {
        return Err(CliError::Usage("--step must be positive".into()));
    }
    if args.j_min > args.j_max {
        return Err(CliError::Usage("--j-min exceeds --j-max".into()));
    }
    let mut out = Vec::new();
    let mut x = from;
    while x <= to {
        let s = ExactScalar::rational(x.clone());
        match ctx.family {
            Family::O => out.push(SpectralParam::O {
                a: s,
                summand: args.summand.into(),
            }),
            Family::U => {
                let k = rat(args.weight_difference);
                out.push(SpectralParam::U {
                    alpha: ExactScalar::rational((&x + &k) / rat(2)),
                    beta: ExactScalar::rational((&x - &k) / rat(2)),
                });
            }
            Family::Sp => {
                for j in args.j_min..=args.j_max {
                    out.push(SpectralParam::Sp { a: s.clone(), j });
                }
            }
        }
        x += &step;
    }
    for sp in &out {
        sp.validate(&ctx)?;
    }
    Ok((ctx, out))
}

/// Runs `f` over `items` on `jobs` threads, keeping input order.
pub fn parallel_map<T, R, F>(jobs: Option<usize>, items: &[T], f: F) -> Result<Vec<R>, CliError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, CliError> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs:?} workers: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

/// All records of a sweep.
pub fn run_sweep(args: &SweepArgs) -> Result<Vec<SweepRecord>, CliError> {
    let (ctx, params) = grid(args)?;
    parallel_map(args.jobs, &params, |sp| sweep_point(&ctx, sp))
}

/// JSON lines, one record per line.
pub fn to_json_lines(records: &[SweepRecord]) -> Result<String, CliError> {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r)?);
        s.push('\n');
    }
    Ok(s)
}
