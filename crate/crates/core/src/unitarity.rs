//! Invariant Hermitian forms, the sign criterion for unitarity and
//! complementary-series intervals.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{GroupContext, KPoint, SpectralParam};
use crate::scalar::{ceil_i64, floor_i64, rat, ratio, ExactScalar, Rational};
use crate::structure::{analyze, CompositionDiagram, StructureError};
use crate::transitions::{directions, step, transition_coeff, Direction};

/// Errors raised by unitarity queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitarityError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("parameter {0} admits no invariant Hermitian form")]
    NoInvariantForm(String),
    #[error("parameter {0} is symbolic; signs are undetermined")]
    SymbolicParameter(String),
    #[error("form propagation blocked between {0} and {1} inside one constituent")]
    BlockedPropagation(KPoint, KPoint),
}

/// Kind of invariant Hermitian form carried by a module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermitianKind {
    /// On the unitary axis: the standard inner product is invariant.
    OnAxisUnitary,
    /// Real parameter: every constituent carries an invariant form.
    RealHermitian,
    None,
}

/// Unitarity verdict for one constituent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Unitary,
    HermitianNonunitary,
    NoInvariantForm,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Unitary => "unitary",
            Verdict::HermitianNonunitary => "hermitian_nonunitary",
            Verdict::NoInvariantForm => "no_invariant_form",
        })
    }
}

/// Form coefficients `c_{m,n}` on one constituent, normalized to 1 at the base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianForm {
    pub base_point: KPoint,
    pub coeffs: BTreeMap<KPoint, Rational>,
    pub consistent: bool,
}

/// Open interval of real parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    /// Strict membership.
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }

    /// Half the length.
    pub fn half_width(&self) -> Rational {
        (&self.hi - &self.lo) / rat(2)
    }
}

/// Real part of the shadow degree on the unitary axis, `1 − (P+Q)/2`.
pub fn unitary_axis(ctx: &GroupContext) -> Rational {
    let (pp, qq) = ctx.o_signature();
    rat(1) - ratio(pp + qq, 2)
}

/// Which invariant Hermitian form exists.
pub fn hermitian_exists(ctx: &GroupContext, sp: &SpectralParam) -> HermitianKind {
    let a = sp.shadow_a();
    if !a.is_generic() && a.re() == &unitary_axis(ctx) {
        HermitianKind::OnAxisUnitary
    } else if a.is_real() {
        HermitianKind::RealHermitian
    } else {
        HermitianKind::None
    }
}

/// Reflection of the parameter through the unitary axis, keeping the
/// discrete data (`summand`, `α − β`, `j`).
pub fn duality_partner(ctx: &GroupContext, sp: &SpectralParam) -> SpectralParam {
    let two_axis = ExactScalar::rational(unitary_axis(ctx) * rat(2));
    match sp {
        SpectralParam::U { alpha, beta } => {
            let c = ExactScalar::int(1 - ctx.p as i64 - ctx.q as i64);
            SpectralParam::U {
                alpha: c.sub(&beta.conj()),
                beta: c.sub(&alpha.conj()),
            }
        }
        _ => sp.with_shadow_a(two_axis.sub(&sp.shadow_a().conj())),
    }
}

fn real_param(sp: &SpectralParam) -> Result<Rational, UnitarityError> {
    let a = sp.shadow_a();
    if a.is_generic() {
        return Err(UnitarityError::SymbolicParameter(a.to_string()));
    }
    a.as_rational()
        .cloned()
        .ok_or_else(|| UnitarityError::NoInvariantForm(a.to_string()))
}

fn coeff_rational(ctx: &GroupContext, sp: &SpectralParam, pt: KPoint, dir: Direction) -> Rational {
    transition_coeff(ctx, sp, pt, dir)
        .expect("direction defined")
        .as_rational()
        .cloned()
        .expect("real parameter")
}

/// Adjacent pairs `(u, v, dir)` with `v = u + dir`, both in the point set,
/// for the raising directions only (each unordered pair once).
fn adjacent_pairs(
    ctx: &GroupContext,
    points: &BTreeSet<KPoint>,
) -> Vec<(KPoint, KPoint, Direction)> {
    let mut out = Vec::new();
    for &u in points {
        for &dir in directions(ctx) {
            if dir.dm < 0 {
                continue;
            }
            let v = step(ctx, u, dir);
            if points.contains(&v) {
                out.push((u, v, dir));
            }
        }
    }
    out
}

/// Propagates the form coefficients over one constituent of `diagram`.
pub fn form_coefficients(
    diagram: &CompositionDiagram,
    constituent: usize,
) -> Result<HermitianForm, UnitarityError> {
    let ctx = &diagram.ctx;
    let sp = &diagram.param;
    let c = &diagram.constituents[constituent];
    let base = c.min_point();
    let points: BTreeSet<KPoint> = c.points.iter().copied().collect();
    match hermitian_exists(ctx, sp) {
        HermitianKind::None => {
            return Err(UnitarityError::NoInvariantForm(sp.shadow_a().to_string()))
        }
        HermitianKind::OnAxisUnitary if !sp.shadow_a().is_real() => {
            let coeffs = points.iter().map(|&pt| (pt, Rational::one())).collect();
            return Ok(HermitianForm {
                base_point: base,
                coeffs,
                consistent: true,
            });
        }
        _ => {}
    }
    real_param(sp)?;
    // Ratio c_v / c_u across the pair (u, v = u + dir).
    let pair_ratio =
        |u: KPoint, v: KPoint, dir: Direction| -> Result<Option<Rational>, UnitarityError> {
            let up = coeff_rational(ctx, sp, u, dir);
            let down = coeff_rational(ctx, sp, v, dir.reverse());
            match (up.is_zero(), down.is_zero()) {
                (true, true) => Ok(None),
                (false, false) => Ok(Some(-down / up)),
                _ => Err(UnitarityError::BlockedPropagation(u, v)),
            }
        };
    let mut neighbours: BTreeMap<KPoint, Vec<(KPoint, Rational)>> = BTreeMap::new();
    let pairs = adjacent_pairs(ctx, &points);
    for &(u, v, dir) in &pairs {
        if let Some(r) = pair_ratio(u, v, dir)? {
            neighbours.entry(u).or_default().push((v, r.clone()));
            neighbours
                .entry(v)
                .or_default()
                .push((u, Rational::one() / r));
        }
    }
    let mut coeffs: BTreeMap<KPoint, Rational> = BTreeMap::new();
    coeffs.insert(base, Rational::one());
    let mut queue = VecDeque::from([base]);
    while let Some(u) = queue.pop_front() {
        let cu = coeffs[&u].clone();
        for (v, r) in neighbours.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            if !coeffs.contains_key(v) {
                coeffs.insert(*v, &cu * r);
                queue.push_back(*v);
            }
        }
    }
    let mut consistent = coeffs.len() == points.len();
    for &(u, v, dir) in &pairs {
        if let (Some(r), Some(cu), Some(cv)) =
            (pair_ratio(u, v, dir)?, coeffs.get(&u), coeffs.get(&v))
        {
            if &(cu * &r) != cv {
                consistent = false;
            }
        }
    }
    Ok(HermitianForm {
        base_point: base,
        coeffs,
        consistent,
    })
}

/// Criterion: every transition inside the constituent has a negative ratio
/// `A^{d}(u) / A^{−d}(u + d)`.
pub fn constituent_is_unitary(
    diagram: &CompositionDiagram,
    constituent: usize,
) -> Result<bool, UnitarityError> {
    let ctx = &diagram.ctx;
    let sp = &diagram.param;
    match hermitian_exists(ctx, sp) {
        HermitianKind::None => {
            return Err(UnitarityError::NoInvariantForm(sp.shadow_a().to_string()))
        }
        HermitianKind::OnAxisUnitary if !sp.shadow_a().is_real() => return Ok(true),
        _ => {}
    }
    real_param(sp)?;
    let points: BTreeSet<KPoint> = diagram.constituents[constituent]
        .points
        .iter()
        .copied()
        .collect();
    for (u, v, dir) in adjacent_pairs(ctx, &points) {
        let up = coeff_rational(ctx, sp, u, dir);
        let down = coeff_rational(ctx, sp, v, dir.reverse());
        if up.is_zero() && down.is_zero() {
            continue;
        }
        if up.is_zero() || down.is_zero() {
            return Err(UnitarityError::BlockedPropagation(u, v));
        }
        if (up * down).is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verdict for one constituent.
pub fn verdict(
    diagram: &CompositionDiagram,
    constituent: usize,
) -> Result<Verdict, UnitarityError> {
    if hermitian_exists(&diagram.ctx, &diagram.param) == HermitianKind::None {
        return Ok(Verdict::NoInvariantForm);
    }
    Ok(if constituent_is_unitary(diagram, constituent)? {
        Verdict::Unitary
    } else {
        Verdict::HermitianNonunitary
    })
}

/// Verdicts for all constituents, in id order.
pub fn verdicts(diagram: &CompositionDiagram) -> Result<Vec<Verdict>, UnitarityError> {
    (0..diagram.len()).map(|c| verdict(diagram, c)).collect()
}

/// True iff the module at real parameter `a` is irreducible and unitary.
fn irreducible_unitary_at(
    ctx: &GroupContext,
    template: &SpectralParam,
    a: &Rational,
) -> Result<bool, UnitarityError> {
    let sp = template.with_shadow_a(ExactScalar::rational(a.clone()));
    let d = analyze(ctx, &sp)?;
    Ok(d.len() == 1 && constituent_is_unitary(&d, 0)?)
}

/// Largest open interval around the axis where the whole module is
/// irreducible and unitary, in the shadow degree (`α + β` for U).
///
/// Coefficients are `a` plus integers, so signs and reducibility can only
/// change at integers: each open gap between consecutive integers is probed
/// at its midpoint and each integer is probed itself. Returns `None` when
/// the module is reducible on the axis.
pub fn full_module_unitary_interval(
    ctx: &GroupContext,
    template: &SpectralParam,
) -> Result<Option<Interval>, UnitarityError> {
    let axis = unitary_axis(ctx);
    if !irreducible_unitary_at(ctx, template, &axis)? {
        return Ok(None);
    }
    let (pp, qq) = ctx.o_signature();
    let reach = pp + qq + 2 * (template.j() + template.weight_difference().abs()) + 8;
    let scan = |sign: i64| -> Result<Rational, UnitarityError> {
        let mut prev = axis.clone();
        let first = if sign > 0 {
            floor_i64(&axis) + 1
        } else {
            ceil_i64(&axis) - 1
        };
        for s in 0..reach {
            let grid = rat(first + sign * s);
            let mid = (&prev + &grid) / rat(2);
            if !irreducible_unitary_at(ctx, template, &mid)? {
                return Ok(prev);
            }
            if !irreducible_unitary_at(ctx, template, &grid)? {
                return Ok(grid);
            }
            prev = grid;
        }
        panic!("complementary series did not terminate within {reach} steps");
    };
    let hi = scan(1)?;
    let lo = scan(-1)?;
    Ok(Some(Interval { lo, hi }))
}

/// Converts a shadow degree to the axis-centred coordinate `ã = a − axis`.
pub fn axis_centred(ctx: &GroupContext, a: &Rational) -> Rational {
    a - unitary_axis(ctx)
}
