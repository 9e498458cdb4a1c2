//! Versioned, serializable structure reports and their text rendering.

use std::fmt::Write as _;

use lightcone::scalar::fmt_rational;
use lightcone::{
    analyze, axis_centred, compute_constituents, fiber_enumerate, full_module_unitary_interval,
    stabilization_check, unitary_axis, verdicts, CompositionDiagram, Constituent, Count,
    GroupContext, Interval, KPoint, SpectralParam, Summand, Verdict, Window,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Version of the JSON layout; bumped on any incompatible change.
pub const SCHEMA_VERSION: u32 = 1;

/// Everything known about one module, in a fixed key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub schema_version: u32,
    pub context: ContextEcho,
    pub param: ParamEcho,
    pub window: WindowEcho,
    pub constituents: Vec<ConstituentEcho>,
    pub hasse: Vec<Cover>,
    pub verdicts: Vec<VerdictEcho>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<IntervalEcho>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextEcho {
    pub family: String,
    pub p: u32,
    pub q: u32,
}

/// Parameter echo; only the fields of the family are present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summand: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowEcho {
    pub extent: i64,
    pub stable: bool,
}

/// Position of a constituent in the submodule order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Both minimal and maximal: a direct summand.
    Isolated,
    /// Minimal only: an irreducible submodule.
    Submodule,
    /// Maximal only: an irreducible quotient.
    Quotient,
    Middle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstituentEcho {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summand: Option<String>,
    pub role: Role,
    pub finite: bool,
    pub trivial: bool,
    pub single_line: bool,
    /// Number of base points; `None` when infinite.
    pub ktypes: Option<usize>,
    /// Total dimension: a decimal integer, `infinite` or `unknown`.
    pub dimension: String,
    pub min_point: [i64; 2],
    /// Base points inside the window; truncated when `finite` is false.
    pub points: Vec<[i64; 2]>,
}

/// `lower` is a constituent of the submodule generated by `upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictEcho {
    pub constituent: usize,
    pub verdict: String,
}

/// Whole-module complementary series around the unitary axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalEcho {
    pub axis: String,
    /// False when the module is reducible on the axis.
    pub exists: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<String>,
    /// Endpoints in the axis-centred coordinate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centred_lo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centred_hi: Option<String>,
}

fn pt(p: KPoint) -> [i64; 2] {
    [p.m, p.n]
}

/// Parameter echo of `sp`.
pub fn param_echo(sp: &SpectralParam) -> ParamEcho {
    let mut e = ParamEcho {
        a: None,
        summand: None,
        alpha: None,
        beta: None,
        j: None,
    };
    match sp {
        SpectralParam::O { a, summand } => {
            e.a = Some(a.to_string());
            e.summand = Some(summand.to_string());
        }
        SpectralParam::U { alpha, beta } => {
            e.alpha = Some(alpha.to_string());
            e.beta = Some(beta.to_string());
        }
        SpectralParam::Sp { a, j } => {
            e.a = Some(a.to_string());
            e.j = Some(*j);
        }
    }
    e
}

/// Role of constituent `c`.
pub fn role(d: &CompositionDiagram, c: usize) -> Role {
    let minimal = !d.order.iter().any(|&(_, u)| u == c);
    let maximal = !d.order.iter().any(|&(l, _)| l == c);
    match (minimal, maximal) {
        (true, true) => Role::Isolated,
        (true, false) => Role::Submodule,
        (false, true) => Role::Quotient,
        (false, false) => Role::Middle,
    }
}

/// True when `c` is the trivial representation.
pub fn is_trivial(d: &CompositionDiagram, c: &Constituent) -> bool {
    let origin = KPoint::new(0, 0);
    !c.boundary_open && c.points == [origin] && fiber_enumerate(&d.ctx, &d.param, origin).len() == 1
}

fn constituent_echo(d: &CompositionDiagram, c: &Constituent) -> ConstituentEcho {
    ConstituentEcho {
        id: c.id,
        summand: c.summand.map(|s| s.to_string()),
        role: role(d, c.id),
        finite: !c.boundary_open,
        trivial: is_trivial(d, c),
        single_line: c.is_single_line(),
        ktypes: match c.ktype_count {
            Count::Finite(n) => Some(n),
            Count::Infinite => None,
        },
        dimension: c.total_dimension.to_string(),
        min_point: pt(c.min_point()),
        points: c.points.iter().map(|&p| pt(p)).collect(),
    }
}

/// Complementary series of the module; for both orthogonal summands, the
/// parameters where each summand is irreducible and unitary.
pub fn module_interval(
    ctx: &GroupContext,
    sp: &SpectralParam,
) -> Result<Option<Interval>, CliError> {
    if sp.summand() != Some(Summand::Both) {
        return Ok(full_module_unitary_interval(ctx, sp)?);
    }
    let plus = full_module_unitary_interval(ctx, &sp.with_summand(Summand::Plus))?;
    let minus = full_module_unitary_interval(ctx, &sp.with_summand(Summand::Minus))?;
    Ok(match (plus, minus) {
        (Some(a), Some(b)) => Some(Interval {
            lo: a.lo.max(b.lo),
            hi: a.hi.min(b.hi),
        }),
        _ => None,
    })
}

/// Diagram on the requested window, or on the automatic one.
pub fn diagram(
    ctx: &GroupContext,
    sp: &SpectralParam,
    window: Option<Window>,
) -> Result<CompositionDiagram, CliError> {
    Ok(match window {
        Some(w) => compute_constituents(ctx, sp, w)?,
        None => analyze(ctx, sp)?,
    })
}

impl StructureReport {
    /// Report without verdicts.
    pub fn structure(d: &CompositionDiagram) -> Self {
        StructureReport {
            schema_version: SCHEMA_VERSION,
            context: ContextEcho {
                family: d.ctx.family.to_string(),
                p: d.ctx.p,
                q: d.ctx.q,
            },
            param: param_echo(&d.param),
            window: WindowEcho {
                extent: d.window.extent,
                stable: stabilization_check(&d.ctx, &d.param, d.window),
            },
            constituents: d
                .constituents
                .iter()
                .map(|c| constituent_echo(d, c))
                .collect(),
            hasse: d
                .covers
                .iter()
                .map(|&(lower, upper)| Cover { lower, upper })
                .collect(),
            verdicts: Vec::new(),
            interval: None,
        }
    }

    /// Report with per-constituent verdicts and, optionally, the
    /// complementary-series interval.
    pub fn unitarity(d: &CompositionDiagram, with_interval: bool) -> Result<Self, CliError> {
        let mut r = Self::structure(d);
        r.verdicts = verdicts(d)?
            .into_iter()
            .enumerate()
            .map(|(constituent, v)| VerdictEcho {
                constituent,
                verdict: v.to_string(),
            })
            .collect();
        if with_interval {
            let axis = unitary_axis(&d.ctx);
            let found = module_interval(&d.ctx, &d.param)?;
            r.interval = Some(IntervalEcho {
                axis: fmt_rational(&axis),
                exists: found.is_some(),
                lo: found.as_ref().map(|i| fmt_rational(&i.lo)),
                hi: found.as_ref().map(|i| fmt_rational(&i.hi)),
                centred_lo: found
                    .as_ref()
                    .map(|i| fmt_rational(&axis_centred(&d.ctx, &i.lo))),
                centred_hi: found
                    .as_ref()
                    .map(|i| fmt_rational(&axis_centred(&d.ctx, &i.hi))),
            });
        }
        Ok(r)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.context;
        let p = &self.param;
        let mut param = Vec::new();
        for (k, v) in [
            ("a", &p.a),
            ("alpha", &p.alpha),
            ("beta", &p.beta),
            ("summand", &p.summand),
        ] {
            if let Some(v) = v {
                param.push(format!("{k}={v}"));
            }
        }
        if let Some(j) = p.j {
            param.push(format!("j={j}"));
        }
        let _ = writeln!(s, "{}({},{}) {}", c.family, c.p, c.q, param.join(" "));
        let stable = if self.window.stable {
            "stable"
        } else {
            "unstable"
        };
        let _ = writeln!(s, "window {} ({stable})", self.window.extent);
        let _ = writeln!(s, "constituents {}", self.constituents.len());
        for k in &self.constituents {
            let mut flags = Vec::new();
            if let Some(sm) = &k.summand {
                flags.push(sm.clone());
            }
            flags.push(format!("{:?}", k.role).to_lowercase());
            flags.push(if k.finite { "finite" } else { "infinite" }.to_string());
            if k.trivial {
                flags.push("trivial".into());
            }
            if k.single_line {
                flags.push("single-line".into());
            }
            let ktypes = k.ktypes.map_or("infinite".to_string(), |n| n.to_string());
            let _ = writeln!(
                s,
                "  #{} {} base-points={} dim={} min=({},{})",
                k.id,
                flags.join(" "),
                ktypes,
                k.dimension,
                k.min_point[0],
                k.min_point[1]
            );
        }
        if !self.hasse.is_empty() {
            let _ = writeln!(s, "hasse");
            for h in &self.hasse {
                let _ = writeln!(s, "  #{} < #{}", h.lower, h.upper);
            }
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(s, "verdicts");
            for v in &self.verdicts {
                let _ = writeln!(s, "  #{} {}", v.constituent, v.verdict);
            }
        }
        if let Some(i) = &self.interval {
            match (&i.lo, &i.hi) {
                (Some(lo), Some(hi)) => {
                    let _ = writeln!(
                        s,
                        "complementary series ({lo}, {hi}) around axis {}",
                        i.axis
                    );
                }
                _ => {
                    let _ = writeln!(s, "no complementary series: reducible on axis {}", i.axis);
                }
            }
        }
        s
    }
}

/// Compact shape code: one token per constituent in id order, made of the
/// role letter (`d` isolated, `s` submodule, `q` quotient, `m` middle), `F`
/// for finite, and the verdict sign (`+` unitary, `-` nonunitary, `~` no form).
pub fn shape_code(d: &CompositionDiagram, v: Option<&[Verdict]>) -> String {
    d.constituents
        .iter()
        .map(|c| {
            let mut t = String::from(match role(d, c.id) {
                Role::Isolated => "d",
                Role::Submodule => "s",
                Role::Quotient => "q",
                Role::Middle => "m",
            });
            if !c.boundary_open {
                t.push('F');
            }
            if let Some(v) = v {
                t.push(match v[c.id] {
                    Verdict::Unitary => '+',
                    Verdict::HermitianNonunitary => '-',
                    Verdict::NoInvariantForm => '~',
                });
            }
            t
        })
        .collect::<Vec<_>>()
        .join(" ")
}
