//! Transition coefficients between neighbouring K-types and their barrier lines.

use std::fmt;

use thiserror::Error;

use crate::lattice::{region_contains, GroupContext, KPoint, SpectralParam};
use crate::scalar::ExactScalar;

/// A diagonal move `(m, n) → (m + dm, n + dn)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    pub dm: i8,
    pub dn: i8,
}

impl Direction {
    pub const PP: Direction = Direction { dm: 1, dn: 1 };
    pub const PM: Direction = Direction { dm: 1, dn: -1 };
    pub const MP: Direction = Direction { dm: -1, dn: 1 };
    pub const MM: Direction = Direction { dm: -1, dn: -1 };
    pub const ALL: [Direction; 4] = [Self::PP, Self::PM, Self::MP, Self::MM];

    /// The reverse move.
    pub fn reverse(self) -> Direction {
        Direction {
            dm: -self.dm,
            dn: -self.dn,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |d: i8| if d > 0 { '+' } else { '-' };
        write!(f, "{}{}", s(self.dm), s(self.dn))
    }
}

/// Errors raised by coefficient queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransitionError {
    #[error("direction {dir} is not defined for {ctx}")]
    UndefinedDirection { ctx: GroupContext, dir: Direction },
    #[error("point {0} lies outside the K-type region")]
    PointOutsideRegion(KPoint),
}

/// A coefficient attached to one move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionCoeff {
    pub value: ExactScalar,
    pub direction: Direction,
    pub source: KPoint,
}

/// Affine form `constant + cx·x + cy·y` in the plane of base points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub constant: ExactScalar,
    pub cx: i64,
    pub cy: i64,
}

impl AffineForm {
    /// Value at an integer point.
    pub fn eval(&self, pt: KPoint) -> ExactScalar {
        self.constant.add_int(self.cx * pt.m + self.cy * pt.n)
    }
}

/// Which side of a barrier carries positive coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Above => "above",
            Side::Below => "below",
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Zero locus of one transition coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarrierLine {
    pub direction: Direction,
    pub form: AffineForm,
    /// Side of the line where the coefficient is positive; `None` for
    /// non-real parameters, where the coefficient never vanishes.
    pub positive_side: Option<Side>,
}

impl BarrierLine {
    /// Human-readable equation, e.g. `x+y=2` or `y=x-3`.
    pub fn equation(&self) -> String {
        let c = self.form.constant.neg();
        let (cx, cy) = (self.form.cx, self.form.cy);
        if cy == 0 {
            let rhs = if cx < 0 { c.neg() } else { c };
            return format!("x={rhs}");
        }
        // Normalise to y = s·x + t or x + y = t.
        if cx == cy {
            let rhs = if cx < 0 { c.neg() } else { c };
            return format!("x+y={rhs}");
        }
        // cx = -cy: cy·(y - x) = c  ⇒  y = x + c/cy.
        let t = if cy < 0 { c.neg() } else { c };
        let t_s = t.to_string();
        if t.is_zero() {
            "y=x".to_string()
        } else if t_s.starts_with('-') {
            format!("y=x{t_s}")
        } else {
            format!("y=x+{t_s}")
        }
    }

    /// Same zero locus as another barrier.
    pub fn coincides_with(&self, other: &BarrierLine) -> bool {
        let (a, b) = (&self.form, &other.form);
        (a.cx == b.cx && a.cy == b.cy && a.constant == b.constant)
            || (a.cx == -b.cx && a.cy == -b.cy && a.constant == b.constant.neg())
    }
}

/// Shadow coefficient `A^{dir}_{P,Q,a}(m, n)` written as an affine form in `(m, n)`.
fn shadow_form(
    ctx: &GroupContext,
    sp: &SpectralParam,
    dir: Direction,
) -> Result<AffineForm, TransitionError> {
    let a = sp.shadow_a();
    let p = ctx.p as i64;
    if ctx.is_chain() {
        return match dir {
            Direction::PP => Ok(AffineForm {
                constant: a,
                cx: -1,
                cy: 0,
            }),
            Direction::MM => Ok(AffineForm {
                constant: a.add_int(p - 2),
                cx: 1,
                cy: 0,
            }),
            _ => Err(TransitionError::UndefinedDirection { ctx: *ctx, dir }),
        };
    }
    if ctx.has_signed_n() {
        let form = match dir {
            Direction::PP => AffineForm {
                constant: a,
                cx: -1,
                cy: -1,
            },
            Direction::PM => AffineForm {
                constant: a,
                cx: -1,
                cy: 1,
            },
            Direction::MP => AffineForm {
                constant: a.add_int(2 * p - 2),
                cx: 1,
                cy: -1,
            },
            _ => AffineForm {
                constant: a.add_int(2 * p - 2),
                cx: 1,
                cy: 1,
            },
        };
        return Ok(form);
    }
    let (sp_, sq) = ctx.o_signature();
    let form = match dir {
        Direction::PP => AffineForm {
            constant: a,
            cx: -1,
            cy: -1,
        },
        Direction::PM => AffineForm {
            constant: a.add_int(sq - 2),
            cx: -1,
            cy: 1,
        },
        Direction::MP => AffineForm {
            constant: a.add_int(sp_ - 2),
            cx: 1,
            cy: -1,
        },
        _ => AffineForm {
            constant: a.add_int(sp_ + sq - 4),
            cx: 1,
            cy: 1,
        },
    };
    Ok(form)
}

/// Directions defined in this context.
pub fn directions(ctx: &GroupContext) -> &'static [Direction] {
    if ctx.is_chain() {
        &[Direction::PP, Direction::MM]
    } else {
        &Direction::ALL
    }
}

/// Lattice neighbour of `pt` in direction `dir` (before region filtering).
pub fn step(ctx: &GroupContext, pt: KPoint, dir: Direction) -> KPoint {
    if ctx.is_chain() {
        KPoint::new(pt.m + dir.dm as i64, 0)
    } else {
        KPoint::new(pt.m + dir.dm as i64, pt.n + dir.dn as i64)
    }
}

/// The coefficient of the move from `pt` in direction `dir`.
pub fn transition_coeff(
    ctx: &GroupContext,
    sp: &SpectralParam,
    pt: KPoint,
    dir: Direction,
) -> Result<ExactScalar, TransitionError> {
    Ok(shadow_form(ctx, sp, dir)?.eval(pt))
}

/// Same as [`transition_coeff`], packaged with its move.
pub fn transition(
    ctx: &GroupContext,
    sp: &SpectralParam,
    pt: KPoint,
    dir: Direction,
) -> Result<TransitionCoeff, TransitionError> {
    Ok(TransitionCoeff {
        value: transition_coeff(ctx, sp, pt, dir)?,
        direction: dir,
        source: pt,
    })
}

/// Zero line of a coefficient, with the side on which it is positive.
pub fn barrier_line(
    ctx: &GroupContext,
    sp: &SpectralParam,
    dir: Direction,
) -> Result<BarrierLine, TransitionError> {
    let form = shadow_form(ctx, sp, dir)?;
    let positive_side = if form.constant.is_real() {
        Some(if form.cy == 0 {
            if form.cx < 0 {
                Side::Left
            } else {
                Side::Right
            }
        } else if form.cy < 0 {
            Side::Below
        } else {
            Side::Above
        })
    } else {
        None
    };
    Ok(BarrierLine {
        direction: dir,
        form,
        positive_side,
    })
}

/// An outgoing move into the region with its coefficient (possibly zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub target: KPoint,
    pub direction: Direction,
    pub coeff: ExactScalar,
}

/// All defined moves from `pt` whose target lies in the region.
pub fn edges_from(
    ctx: &GroupContext,
    sp: &SpectralParam,
    pt: KPoint,
) -> Result<Vec<Edge>, TransitionError> {
    if !region_contains(ctx, sp, pt) {
        return Err(TransitionError::PointOutsideRegion(pt));
    }
    let mut out = Vec::new();
    for &dir in directions(ctx) {
        let target = step(ctx, pt, dir);
        if region_contains(ctx, sp, target) {
            out.push(Edge {
                target,
                direction: dir,
                coeff: transition_coeff(ctx, sp, pt, dir)?,
            });
        }
    }
    Ok(out)
}
