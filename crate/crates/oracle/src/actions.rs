//! Lie algebra operators on the cone and exact verification of the
//! transition formulas the structure engine relies on.
//!
//! Every check works by two independent routes: the difference of both
//! sides must vanish on the cone (normal form modulo the cone relation), and
//! the K-type components of the action must match the predicted harmonic
//! pieces one by one. Transition coefficients are taken from the engine,
//! interpolated as polynomials in the spectral parameter, so a pass
//! certifies the engine's formulas identically in that parameter.

use std::collections::BTreeMap;
use std::fmt;

use lightcone::scalar::{rat, ratio};
use lightcone::{
    transition_coeff, Direction, ExactScalar, Family, GroupContext, KPoint, Rational,
    SpectralParam, Summand,
};
use num_traits::Zero;

use crate::cone::{Cone, ConeFunction, ConeKind, DiffOp, KComponent};
use crate::error::OracleError;
use crate::poly::{MultiPoly, ParamPoly, PARAM_A, PARAM_D};
use crate::space::{gram_matrix, is_positive_definite, BlockDegree, BlockKind, Space};

/// A named Lie algebra element acting by a first-order operator.
///
/// Indices are 1-based, as in the usual matrix conventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorSpec {
    /// `x_j ∂/∂x_k − x_k ∂/∂x_j`.
    RotationX { j: usize, k: usize },
    /// `y_l ∂/∂y_m − y_m ∂/∂y_l`.
    RotationY { l: usize, m: usize },
    /// `x_j ∂/∂y_l + y_l ∂/∂x_j`.
    Boost { j: usize, l: usize },
    /// `S_ij = z_i ∂/∂w_j + w̄_j ∂/∂z̄_i`.
    Raise { i: usize, j: usize },
    /// `T_ij = w_j ∂/∂z_i + z̄_i ∂/∂w̄_j`.
    Lower { i: usize, j: usize },
    /// `A_ij` of the first (`block = 1`) or second symplectic factor.
    SpA { block: u8, i: usize, j: usize },
    /// `B_ij` of the first or second symplectic factor.
    SpB { block: u8, i: usize, j: usize },
    /// `C_ij` of the first or second symplectic factor.
    SpC { block: u8, i: usize, j: usize },
    /// Noncompact `P_ij`.
    SpP { i: usize, j: usize },
    /// Noncompact `Q_ij`.
    SpQ { i: usize, j: usize },
    /// Noncompact `U_ij`.
    SpU { i: usize, j: usize },
    /// Noncompact `V_ij`.
    SpV { i: usize, j: usize },
    /// The `gl(2)` operator `E_ab` commuting with the first symplectic factor.
    SpE { a: u8, b: u8 },
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OperatorSpec::RotationX { j, k } => write!(f, "k1[{j},{k}]"),
            OperatorSpec::RotationY { l, m } => write!(f, "k2[{l},{m}]"),
            OperatorSpec::Boost { j, l } => write!(f, "p[{j},{l}]"),
            OperatorSpec::Raise { i, j } => write!(f, "S[{i},{j}]"),
            OperatorSpec::Lower { i, j } => write!(f, "T[{i},{j}]"),
            OperatorSpec::SpA { block, i, j } => write!(f, "A{block}[{i},{j}]"),
            OperatorSpec::SpB { block, i, j } => write!(f, "B{block}[{i},{j}]"),
            OperatorSpec::SpC { block, i, j } => write!(f, "C{block}[{i},{j}]"),
            OperatorSpec::SpP { i, j } => write!(f, "P[{i},{j}]"),
            OperatorSpec::SpQ { i, j } => write!(f, "Q[{i},{j}]"),
            OperatorSpec::SpU { i, j } => write!(f, "U[{i},{j}]"),
            OperatorSpec::SpV { i, j } => write!(f, "V[{i},{j}]"),
            OperatorSpec::SpE { a, b } => write!(f, "E[{a},{b}]"),
        }
    }
}

/// Builder for sums of `±u ∂/∂v` with variables given by index closures.
struct Terms(DiffOp);

impl Terms {
    fn new() -> Self {
        Terms(DiffOp::new())
    }
    fn add(self, sign: i64, u: usize, v: usize) -> Self {
        Terms(self.0.with_vars(sign, u, v))
    }
}

impl OperatorSpec {
    fn invalid(&self, space: &Space) -> OracleError {
        let blocks: Vec<String> = space
            .blocks()
            .iter()
            .map(|b| format!("{}{}", b.name, b.dim))
            .collect();
        OracleError::InvalidOperator {
            op: self.to_string(),
            cone: blocks.join("+"),
        }
    }

    /// The first-order operator on a cone model.
    pub fn expand(&self, cone: &Cone) -> Result<DiffOp, OracleError> {
        let sp = &cone.space;
        let bad = || self.invalid(sp);
        let check = |ok: bool| if ok { Ok(()) } else { Err(self.invalid(sp)) };
        match (*self, cone.kind) {
            (
                OperatorSpec::RotationX { j, k },
                ConeKind::Orthogonal { p, .. } | ConeKind::Chain { p },
            ) => {
                check(j >= 1 && k >= 1 && j <= p && k <= p && j != k)?;
                let x = sp.block(0);
                Ok(Terms::new()
                    .add(1, x.coord(j), x.coord(k))
                    .add(-1, x.coord(k), x.coord(j))
                    .0)
            }
            (OperatorSpec::RotationY { l, m }, ConeKind::Orthogonal { q, .. }) => {
                check(l >= 1 && m >= 1 && l <= q && m <= q && l != m)?;
                let y = sp.block(1);
                Ok(Terms::new()
                    .add(1, y.coord(l), y.coord(m))
                    .add(-1, y.coord(m), y.coord(l))
                    .0)
            }
            (
                OperatorSpec::Boost { j, l },
                ConeKind::Orthogonal { .. } | ConeKind::Chain { .. },
            ) => {
                let (x, y) = (sp.block(0), sp.block(1));
                check(j >= 1 && l >= 1 && j <= x.dim && l <= y.dim)?;
                Ok(Terms::new()
                    .add(1, x.coord(j), y.coord(l))
                    .add(1, y.coord(l), x.coord(j))
                    .0)
            }
            (OperatorSpec::Raise { i, j }, ConeKind::Unitary { p, q }) => {
                check(i >= 1 && j >= 1 && i <= p && j <= q)?;
                let (z, w) = (sp.block(0), sp.block(1));
                Ok(Terms::new()
                    .add(1, z.coord(i), w.coord(j))
                    .add(1, w.conj_coord(j), z.conj_coord(i))
                    .0)
            }
            (OperatorSpec::Lower { i, j }, ConeKind::Unitary { p, q }) => {
                check(i >= 1 && j >= 1 && i <= p && j <= q)?;
                let (z, w) = (sp.block(0), sp.block(1));
                Ok(Terms::new()
                    .add(1, w.coord(j), z.coord(i))
                    .add(1, z.conj_coord(i), w.conj_coord(j))
                    .0)
            }
            (
                OperatorSpec::SpA { block, i, j }
                | OperatorSpec::SpB { block, i, j }
                | OperatorSpec::SpC { block, i, j },
                ConeKind::Symplectic { p, q },
            ) => {
                let (b, n) = match block {
                    1 => (sp.block(0), p),
                    2 => (sp.block(1), q),
                    _ => return Err(bad()),
                };
                check(i >= 1 && j >= 1 && i <= n && j <= n)?;
                let v = |k: usize| b.coord(k);
                let vb = |k: usize| b.conj_coord(k);
                Ok(match *self {
                    OperatorSpec::SpA { .. } => Terms::new()
                        .add(1, v(i), v(j))
                        .add(-1, vb(j), vb(i))
                        .add(1, vb(i + n), vb(j + n))
                        .add(-1, v(j + n), v(i + n)),
                    OperatorSpec::SpB { .. } => Terms::new()
                        .add(1, v(i), v(j + n))
                        .add(-1, vb(j + n), vb(i))
                        .add(1, v(j), v(i + n))
                        .add(-1, vb(i + n), vb(j)),
                    _ => Terms::new()
                        .add(1, v(j + n), v(i))
                        .add(-1, vb(i), vb(j + n))
                        .add(1, v(i + n), v(j))
                        .add(-1, vb(j), vb(i + n)),
                }
                .0)
            }
            (
                OperatorSpec::SpP { i, j }
                | OperatorSpec::SpQ { i, j }
                | OperatorSpec::SpU { i, j }
                | OperatorSpec::SpV { i, j },
                ConeKind::Symplectic { p, q },
            ) => {
                check(i >= 1 && j >= 1 && i <= p && j <= q)?;
                let (zb, wb) = (sp.block(0), sp.block(1));
                let z = |k: usize| zb.coord(k);
                let zc = |k: usize| zb.conj_coord(k);
                let w = |k: usize| wb.coord(k);
                let wc = |k: usize| wb.conj_coord(k);
                Ok(match *self {
                    OperatorSpec::SpP { .. } => Terms::new()
                        .add(1, z(i), w(j))
                        .add(1, w(q + j), z(p + i))
                        .add(1, wc(j), zc(i))
                        .add(1, zc(p + i), wc(q + j)),
                    OperatorSpec::SpQ { .. } => Terms::new()
                        .add(1, z(i), w(q + j))
                        .add(-1, w(j), z(p + i))
                        .add(1, wc(q + j), zc(i))
                        .add(-1, zc(p + i), wc(j)),
                    OperatorSpec::SpU { .. } => Terms::new()
                        .add(1, z(p + i), w(j))
                        .add(-1, w(q + j), z(i))
                        .add(1, wc(j), zc(p + i))
                        .add(-1, zc(i), wc(q + j)),
                    _ => Terms::new()
                        .add(1, z(p + i), w(q + j))
                        .add(1, w(j), z(i))
                        .add(1, wc(q + j), zc(p + i))
                        .add(1, zc(i), wc(j)),
                }
                .0)
            }
            (OperatorSpec::SpE { a, b }, ConeKind::Symplectic { p, .. }) => {
                Ok(sp_e_operator(sp.block(0), p, a, b).ok_or_else(bad)?)
            }
            _ => Err(bad()),
        }
    }
}

/// `E_ab` on a complex block of dimension `2p`.
fn sp_e_operator(zb: &crate::space::Block, p: usize, a: u8, b: u8) -> Option<DiffOp> {
    let z = |k: usize| zb.coord(k);
    let zc = |k: usize| zb.conj_coord(k);
    let mut t = Terms::new();
    match (a, b) {
        (1, 1) => {
            for l in 1..=2 * p {
                t = t.add(1, z(l), z(l));
            }
        }
        (2, 2) => {
            for l in 1..=2 * p {
                t = t.add(1, zc(l), zc(l));
            }
        }
        (1, 2) => {
            for l in 1..=p {
                t = t.add(1, z(l + p), zc(l)).add(-1, z(l), zc(l + p));
            }
        }
        (2, 1) => {
            for l in 1..=p {
                t = t.add(1, zc(l), z(l + p)).add(-1, zc(l + p), z(l));
            }
        }
        _ => return None,
    }
    Some(t.0)
}

/// Action of `op` on `f`, split into K-type components.
pub fn apply_operator(
    cone: &Cone,
    op: OperatorSpec,
    f: &ConeFunction,
) -> Result<Vec<KComponent>, OracleError> {
    let raw = cone.apply(&op.expand(cone)?, f);
    cone.ktype_components(&raw)
}

/// Outcome of one verification suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub identity: String,
    pub ranges: String,
    pub cases: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

impl VerificationReport {
    fn new(identity: &str, ranges: String) -> Self {
        VerificationReport {
            identity: identity.to_string(),
            ranges,
            cases: 0,
            passed: true,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.passed {
            self.passed = false;
            self.counterexample = Some(describe());
        }
    }

    /// Combines several reports into one.
    pub fn merge(identity: &str, reports: Vec<VerificationReport>) -> Self {
        let ranges: Vec<String> = reports.iter().map(|r| r.ranges.clone()).collect();
        let mut out = Self::new(identity, ranges.join("; "));
        for r in reports {
            out.cases += r.cases;
            if !r.passed && out.passed {
                out.passed = false;
                out.counterexample = r.counterexample;
            }
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        write!(
            f,
            "{verdict} {} [{}] {} cases",
            self.identity, self.ranges, self.cases
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// The engine's coefficient of `dir` at `pt`, as a polynomial in the
/// spectral parameter `a`. Sampled at three points; fails unless affine.
pub fn engine_coefficient(
    ctx: &GroupContext,
    pt: KPoint,
    dir: Direction,
    param: &dyn Fn(&Rational) -> SpectralParam,
) -> Result<ParamPoly, OracleError> {
    let sample = |a: i64| -> Result<Rational, OracleError> {
        let v = transition_coeff(ctx, &param(&rat(a)), pt, dir)?;
        v.as_rational()
            .cloned()
            .ok_or(OracleError::NonAffineCoefficient)
    };
    let (v0, v1, v2) = (sample(0)?, sample(1)?, sample(2)?);
    if &v2 - &v1 != &v1 - &v0 {
        return Err(OracleError::NonAffineCoefficient);
    }
    Ok(ParamPoly::affine_in_a(v0.clone(), v1 - v0))
}

fn o_param(a: &Rational) -> SpectralParam {
    SpectralParam::O {
        a: ExactScalar::rational(a.clone()),
        summand: Summand::Both,
    }
}

fn a_minus(k: i64) -> ParamPoly {
    ParamPoly::param(PARAM_A) - ParamPoly::int(k)
}

/// Inverse of `n`, or zero when the paired derivative vanishes anyway.
fn inverse_or_zero(n: i64) -> Rational {
    if n == 0 {
        Rational::zero()
    } else {
        ratio(1, n)
    }
}

/// The four harmonic maps `T^{±±}(p_il ⊗ h1 ⊗ h2)` with their radial shifts.
fn orthogonal_maps(
    cone: &Cone,
    i: usize,
    l: usize,
    h1: &MultiPoly,
    h2: &MultiPoly,
    m: u32,
    n: u32,
) -> Result<Vec<(Direction, MultiPoly, i64)>, OracleError> {
    let (x, y) = (cone.space.block(0), cone.space.block(1));
    let (xv, yv) = (x.coord(i), y.coord(l));
    let c1 = inverse_or_zero(2 * m as i64 - 2 + x.real_dim());
    let c2 = inverse_or_zero(2 * n as i64 - 2 + y.real_dim());
    let xh = x.harmonic_project(&(&MultiPoly::var(xv) * h1))?;
    let yh = y.harmonic_project(&(&MultiPoly::var(yv) * h2))?;
    let dh1 = h1.derivative(xv).scale_rational(&c1);
    let dh2 = h2.derivative(yv).scale_rational(&c2);
    Ok(vec![
        (Direction::PP, &xh * &yh, -2),
        (Direction::PM, &xh * &dh2, 0),
        (Direction::MP, &dh1 * &yh, 0),
        (Direction::MM, &dh1 * &dh2, 2),
    ])
}

/// Compares predicted K-type pieces with the computed decomposition.
fn components_match(
    computed: &[KComponent],
    expected: &[(Vec<BlockDegree>, i64, MultiPoly)],
) -> bool {
    let mut want: BTreeMap<(Vec<BlockDegree>, i64), MultiPoly> = BTreeMap::new();
    for (d, s, p) in expected {
        if p.is_zero() {
            continue;
        }
        let e = want.entry((d.clone(), *s)).or_insert_with(MultiPoly::zero);
        *e = &*e + p;
    }
    want.retain(|_, p| !p.is_zero());
    let got: BTreeMap<(Vec<BlockDegree>, i64), MultiPoly> = computed
        .iter()
        .map(|c| ((c.degrees.clone(), c.shift), c.poly.clone()))
        .collect();
    got == want
}

fn shifted(deg: u32, d: i8) -> Option<u32> {
    let v = deg as i64 + d as i64;
    (v >= 0).then_some(v as u32)
}

/// Checks that each term `P_k ρ^{base+k}` of `f` has total degree `total`
/// given `base = a − base_offset`.
fn homogeneous(f: &ConeFunction, base_offset: i64, target: i64) -> bool {
    f.terms().all(|(&k, p)| {
        p.terms().all(|(mono, _)| {
            let d: i64 = mono.iter().map(|&e| e as i64).sum();
            d + k - base_offset == target
        })
    })
}

fn real_product_basis(
    cone: &Cone,
    m: u32,
    n: u32,
) -> Result<Vec<(MultiPoly, MultiPoly)>, OracleError> {
    let h1 = cone.space.block(0).harmonic_basis(BlockDegree::Real(m))?;
    let h2 = cone.space.block(1).harmonic_basis(BlockDegree::Real(n))?;
    let mut out = Vec::new();
    for a in &h1 {
        for b in &h2 {
            out.push((a.clone(), b.clone()));
        }
    }
    Ok(out)
}

/// Action of every `p_il` on `j_a(H^m ⊗ H^n)` for `O(p,q)`, `q ≥ 2`: the
/// result must equal `Σ A^{±±}(m,n) j_a(T^{±±}(p_il ⊗ φ))` identically in `a`.
pub fn verify_transition_formula(
    p: usize,
    q: usize,
    m: u32,
    n: u32,
) -> Result<VerificationReport, OracleError> {
    if q < 2 || p < q {
        return Err(OracleError::InvalidInput(format!(
            "transition formula needs p >= q >= 2, got ({p},{q})"
        )));
    }
    let cone = Cone::orthogonal(p, q);
    let ctx = GroupContext::new(Family::O, p as u32, q as u32)
        .map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let pt = KPoint::new(m as i64, n as i64);
    let mut coeff = BTreeMap::new();
    for dir in Direction::ALL {
        coeff.insert(dir, engine_coefficient(&ctx, pt, dir, &o_param)?);
    }
    let base = a_minus((m + n) as i64);
    let mut report =
        VerificationReport::new("transition formula", format!("O({p},{q}) m={m} n={n}"));
    let (x, y) = (cone.space.block(0).clone(), cone.space.block(1).clone());
    for (h1, h2) in real_product_basis(&cone, m, n)? {
        for i in 1..=p {
            for l in 1..=q {
                let f = ConeFunction::single(&h1 * &h2, base.clone(), 0);
                let lhs = cone.apply(&OperatorSpec::Boost { j: i, l }.expand(&cone)?, &f);
                let maps = orthogonal_maps(&cone, i, l, &h1, &h2, m, n)?;
                let mut rhs = ConeFunction::zero(base.clone());
                let mut expected = Vec::new();
                let mut harmonic = true;
                for (dir, t, shift) in &maps {
                    harmonic &= x.is_harmonic(t) && y.is_harmonic(t);
                    let term = t.scale(&coeff[dir]);
                    rhs.add_term(*shift, term.clone());
                    if let (Some(dm), Some(dn)) = (shifted(m, dir.dm), shifted(n, dir.dn)) {
                        expected.push((
                            vec![BlockDegree::Real(dm), BlockDegree::Real(dn)],
                            *shift,
                            term,
                        ));
                    } else {
                        harmonic &= t.is_zero();
                    }
                }
                let vanishes = cone.vanishes(&lhs.minus(&rhs)?)?;
                let split = components_match(&cone.ktype_components(&lhs)?, &expected);
                let degree_ok = homogeneous(&lhs, (m + n) as i64, 0);
                report.record(vanishes && split && harmonic && degree_ok, || {
                    format!(
                        "p[{i},{l}] on h1={} h2={}: cone residual {}, components {}, harmonic {}, homogeneous {}",
                        cone.space.render(&h1),
                        cone.space.render(&h2),
                        cone.space.render(&cone.normal_form(&lhs.minus(&rhs).unwrap()).unwrap().1),
                        split,
                        harmonic,
                        degree_ok
                    )
                });
            }
        }
    }
    Ok(report)
}

/// Action of `x_j ∂/∂y + y ∂/∂x_j` on `h(x) y^{a−m}` for `O(p,1)`.
pub fn verify_chain_formula(p: usize, m: u32) -> Result<VerificationReport, OracleError> {
    if p < 2 {
        return Err(OracleError::InvalidInput(format!(
            "chain formula needs p >= 2, got {p}"
        )));
    }
    let cone = Cone::chain(p);
    let ctx = GroupContext::new(Family::O, p as u32, 1)
        .map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let pt = KPoint::new(m as i64, 0);
    let up = engine_coefficient(&ctx, pt, Direction::PP, &o_param)?;
    let down = engine_coefficient(&ctx, pt, Direction::MM, &o_param)?;
    let base = a_minus(m as i64);
    let x = cone.space.block(0).clone();
    let c = inverse_or_zero(2 * m as i64 + p as i64 - 2);
    let mut report = VerificationReport::new("chain formula", format!("O({p},1) m={m}"));
    for h in x.harmonic_basis(BlockDegree::Real(m))? {
        for j in 1..=p {
            let xv = x.coord(j);
            let f = ConeFunction::single(h.clone(), base.clone(), 0);
            let lhs = cone.apply(&OperatorSpec::Boost { j, l: 1 }.expand(&cone)?, &f);
            let dh = h.derivative(xv).scale_rational(&c);
            let h_plus = &(&MultiPoly::var(xv) * &h) - &(&dh * &x.r2());
            let h_minus = dh;
            let projected = x.harmonic_project(&(&MultiPoly::var(xv) * &h))?;
            let harmonic = x.is_harmonic(&h_plus) && x.is_harmonic(&h_minus) && projected == h_plus;
            let mut rhs = ConeFunction::zero(base.clone());
            rhs.add_term(-1, h_plus.scale(&up));
            rhs.add_term(1, h_minus.scale(&down));
            let mut expected = vec![(vec![BlockDegree::Real(m + 1)], -1, h_plus.scale(&up))];
            if m > 0 {
                expected.push((vec![BlockDegree::Real(m - 1)], 1, h_minus.scale(&down)));
            }
            let vanishes = cone.vanishes(&lhs.minus(&rhs)?)?;
            let split = components_match(&cone.ktype_components(&lhs)?, &expected);
            report.record(vanishes && split && harmonic, || {
                format!(
                    "j={j} h={}: cone residual {}, components {split}, harmonic {harmonic}",
                    cone.space.render(&h),
                    cone.space
                        .render(&cone.normal_form(&lhs.minus(&rhs).unwrap()).unwrap().1)
                )
            });
        }
    }
    Ok(report)
}

/// Bidegree `(m1, m2, n1, n2)` of a `U(p,q)` K-type.
pub type Bidegree = (u32, u32, u32, u32);

fn complex_product_basis(
    cone: &Cone,
    (m1, m2, n1, n2): Bidegree,
) -> Result<Vec<(MultiPoly, MultiPoly)>, OracleError> {
    let h1 = cone
        .space
        .block(0)
        .harmonic_basis(BlockDegree::Complex(m1, m2))?;
    let h2 = cone
        .space
        .block(1)
        .harmonic_basis(BlockDegree::Complex(n1, n2))?;
    let mut out = Vec::new();
    for a in &h1 {
        for b in &h2 {
            out.push((a.clone(), b.clone()));
        }
    }
    Ok(out)
}

/// Action of `S_ij` and `T_ij` on `j_{α,β}(H^{m1,m2} ⊗ H^{n1,n2})` for
/// `U(p,q)`: each equals one half of `Σ A^{±±}_{2p,2q,α+β}(m,n)` times the
/// eight harmonic maps built from `z_i h1`, `∂h1/∂z̄_i`, `w̄_j h2`, `∂h2/∂w_j`
/// (and their conjugate counterparts for `T_ij`).
pub fn verify_unitary_transitions(
    p: usize,
    q: usize,
    bidegree: Bidegree,
) -> Result<VerificationReport, OracleError> {
    if q < 2 || p < q {
        return Err(OracleError::InvalidInput(format!(
            "unitary transitions need p >= q >= 2, got ({p},{q})"
        )));
    }
    let (m1, m2, n1, n2) = bidegree;
    let (m, n) = (m1 + m2, n1 + n2);
    let k = m1 as i64 - m2 as i64 + n1 as i64 - n2 as i64;
    let k0 = m1 as i64 - m2 as i64 - (n1 as i64 - n2 as i64);
    let cone = Cone::unitary(p, q);
    let ctx = GroupContext::new(Family::U, p as u32, q as u32)
        .map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let u_param = move |a: &Rational| SpectralParam::U {
        alpha: ExactScalar::rational((a + rat(k)) / rat(2)),
        beta: ExactScalar::rational((a - rat(k)) / rat(2)),
    };
    let pt = KPoint::new(m as i64, n as i64);
    let mut coeff = BTreeMap::new();
    for dir in Direction::ALL {
        let c = engine_coefficient(&ctx, pt, dir, &u_param)?;
        coeff.insert(dir, c.scale_rational(&ratio(1, 2)));
    }
    let base = a_minus((m + n) as i64);
    let (z, w) = (cone.space.block(0).clone(), cone.space.block(1).clone());
    let c1 = inverse_or_zero(p as i64 + m as i64 - 1);
    let c2 = inverse_or_zero(q as i64 + n as i64 - 1);
    let mut report = VerificationReport::new(
        "unitary transitions",
        format!("U({p},{q}) bidegree ({m1},{m2},{n1},{n2})"),
    );
    for (h1, h2) in complex_product_basis(&cone, bidegree)? {
        for i in 1..=p {
            for j in 1..=q {
                for raising in [true, false] {
                    // Raising: multiply by z_i, w̄_j; differentiate in z̄_i, w_j.
                    let (zm, zd, wm, wd) = if raising {
                        (z.coord(i), z.conj_coord(i), w.conj_coord(j), w.coord(j))
                    } else {
                        (z.conj_coord(i), z.coord(i), w.coord(j), w.conj_coord(j))
                    };
                    let zh = z.harmonic_project(&(&MultiPoly::var(zm) * &h1))?;
                    let wh = w.harmonic_project(&(&MultiPoly::var(wm) * &h2))?;
                    let dz = h1.derivative(zd).scale_rational(&c1);
                    let dw = h2.derivative(wd).scale_rational(&c2);
                    // (direction, map, radial shift, change of (m1, m2, n1, n2))
                    let maps: [(Direction, MultiPoly, i64, [i8; 4]); 4] = if raising {
                        [
                            (Direction::PP, &zh * &wh, -2, [1, 0, 0, 1]),
                            (Direction::MP, &dz * &wh, 0, [0, -1, 0, 1]),
                            (Direction::PM, &zh * &dw, 0, [1, 0, -1, 0]),
                            (Direction::MM, &dz * &dw, 2, [0, -1, -1, 0]),
                        ]
                    } else {
                        [
                            (Direction::PP, &zh * &wh, -2, [0, 1, 1, 0]),
                            (Direction::MP, &dz * &wh, 0, [-1, 0, 1, 0]),
                            (Direction::PM, &zh * &dw, 0, [0, 1, 0, -1]),
                            (Direction::MM, &dz * &dw, 2, [-1, 0, 0, -1]),
                        ]
                    };
                    let mut rhs = ConeFunction::zero(base.clone());
                    let mut expected = Vec::new();
                    let mut harmonic = true;
                    for (dir, t, shift, d) in &maps {
                        harmonic &= z.is_harmonic(t) && w.is_harmonic(t);
                        let term = t.scale(&coeff[dir]);
                        rhs.add_term(*shift, term.clone());
                        let degs = [m1, m2, n1, n2];
                        let nd: Vec<Option<u32>> =
                            degs.iter().zip(d).map(|(&x, &dx)| shifted(x, dx)).collect();
                        if nd.iter().all(Option::is_some) {
                            let nd: Vec<u32> = nd.into_iter().map(Option::unwrap).collect();
                            expected.push((
                                vec![
                                    BlockDegree::Complex(nd[0], nd[1]),
                                    BlockDegree::Complex(nd[2], nd[3]),
                                ],
                                *shift,
                                term,
                            ));
                        } else {
                            harmonic &= t.is_zero();
                        }
                    }
                    let op = if raising {
                        OperatorSpec::Raise { i, j }
                    } else {
                        OperatorSpec::Lower { i, j }
                    };
                    let f = ConeFunction::single(&h1 * &h2, base.clone(), 0);
                    let lhs = cone.apply(&op.expand(&cone)?, &f);
                    let vanishes = cone.vanishes(&lhs.minus(&rhs)?)?;
                    let components = cone.ktype_components(&lhs)?;
                    let split = components_match(&components, &expected);
                    let want = if raising { 2 } else { -2 };
                    let graded = components.iter().all(|c| match c.degrees[..] {
                        [BlockDegree::Complex(a, b), BlockDegree::Complex(c, d)] => {
                            (a as i64 - b as i64) - (c as i64 - d as i64) - k0 == want
                        }
                        _ => false,
                    });
                    report.record(vanishes && split && harmonic && graded, || {
                        format!(
                            "{op} on h1={} h2={}: cone residual {}, components {split}, harmonic {harmonic}, graded {graded}",
                            cone.space.render(&h1),
                            cone.space.render(&h2),
                            cone.space.render(&cone.normal_form(&lhs.minus(&rhs).unwrap()).unwrap().1)
                        )
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Exponents `(a1, a2, b1, b2, c)` of a symplectic test vector.
pub type FiberExponents = (u32, u32, u32, u32, u32);

/// The polynomial part of
/// `γ = z1^{a1} D_z^{a2} w1^{b1} D_w^{b2} X^c` with
/// `D_z = z1 z̄_{p+2} − z̄_{p+1} z2`, `D_w = w1 w̄_{q+2} − w̄_{q+1} w2` and
/// `X = z1 w̄_{q+1} − z̄_{p+1} w1`. The full vector is `γ · (r_p²)^d`.
pub fn gamma_polynomial(cone: &Cone, (a1, a2, b1, b2, c): FiberExponents) -> MultiPoly {
    let (p, q) = match cone.kind {
        ConeKind::Symplectic { p, q } => (p, q),
        _ => panic!("gamma vectors live on a symplectic cone"),
    };
    let s = &cone.space;
    let z = |k: usize| s.coord(0, k);
    let zc = |k: usize| s.conj_coord(0, k);
    let w = |k: usize| s.coord(1, k);
    let wc = |k: usize| s.conj_coord(1, k);
    let dz = &(&z(1) * &zc(p + 2)) - &(&zc(p + 1) * &z(2));
    let dw = &(&w(1) * &wc(q + 2)) - &(&wc(q + 1) * &w(2));
    let x = &(&z(1) * &wc(q + 1)) - &(&zc(p + 1) * &w(1));
    z(1).pow(a1) * dz.pow(a2) * w(1).pow(b1) * dw.pow(b2) * x.pow(c)
}

/// The four fiber-move identities for `Sp(p,q)`, identically in `d`:
///
/// * `Q11 γ = d γ(c+1, d−1)`
/// * `(A²21 Q11 − (b1+c+1) Q12) γ = −b1 d γ(a1+1, b1−1, b2+1, d−1)`
/// * `(A¹21 Q11 − (a1+c+1) Q21) γ = a1 d γ(a1−1, a2+1, b1+1, d−1)`
/// * `(A¹21 A²21 Q11 − (a1+c+1) A²21 Q21 − (b1+c+1) A¹21 Q12
///    + (a1+c+1)(b1+c+1) Q22) γ = c(a1+b1+c+1) d γ(a2+1, b2+1, c−1, d−1)`
pub fn verify_fiber_moves(
    p: usize,
    q: usize,
    exps: FiberExponents,
) -> Result<VerificationReport, OracleError> {
    verify_fiber_moves_with_sign(p, q, exps, 1)
}

/// [`verify_fiber_moves`] with the `(0,1,1,0)` coefficient `a1 d` multiplied
/// by `sign`, so the opposite sign convention can be tested.
pub fn verify_fiber_moves_with_sign(
    p: usize,
    q: usize,
    exps: FiberExponents,
    sign: i64,
) -> Result<VerificationReport, OracleError> {
    if p < 2 || q < 2 {
        return Err(OracleError::InvalidInput(format!(
            "fiber moves need p, q >= 2, got ({p},{q})"
        )));
    }
    let (a1, a2, b1, b2, c) = exps;
    let cone = Cone::symplectic(p, q);
    let d = ParamPoly::param(PARAM_D);
    let base = d.scale_rational(&rat(2));
    let gamma =
        |e: FiberExponents| ConeFunction::single(gamma_polynomial(&cone, e), base.clone(), 0);
    let lowered = |e: Option<FiberExponents>, coeff: i64| -> ConeFunction {
        match e {
            Some(e) if coeff != 0 => ConeFunction::single(
                gamma_polynomial(&cone, e).scale(&d.scale_rational(&rat(coeff))),
                base.clone(),
                -2,
            ),
            _ => ConeFunction::zero(base.clone()),
        }
    };
    let op = |spec: OperatorSpec| spec.expand(&cone);
    let q11 = op(OperatorSpec::SpQ { i: 1, j: 1 })?;
    let q12 = op(OperatorSpec::SpQ { i: 1, j: 2 })?;
    let q21 = op(OperatorSpec::SpQ { i: 2, j: 1 })?;
    let q22 = op(OperatorSpec::SpQ { i: 2, j: 2 })?;
    let a1_21 = op(OperatorSpec::SpA {
        block: 1,
        i: 2,
        j: 1,
    })?;
    let a2_21 = op(OperatorSpec::SpA {
        block: 2,
        i: 2,
        j: 1,
    })?;
    let apply = |ops: &[&DiffOp], f: &ConeFunction| {
        ops.iter()
            .rev()
            .fold(f.clone(), |acc, o| cone.apply(o, &acc))
    };
    let g = gamma(exps);
    let ca = (a1 + c + 1) as i64;
    let cb = (b1 + c + 1) as i64;
    let sub1 = |x: u32| x.checked_sub(1);

    let mut report = VerificationReport::new(
        "fiber moves",
        format!("Sp({p},{q}) exponents ({a1},{a2},{b1},{b2},{c})"),
    );
    let mut check = |name: &str, lhs: ConeFunction, rhs: ConeFunction| -> Result<(), OracleError> {
        let diff = lhs.minus(&rhs)?;
        let ok = cone.vanishes(&diff)?;
        let residual = cone.space.render(&cone.normal_form(&diff)?.1);
        report.record(ok, || format!("{name}: residual {residual}"));
        Ok(())
    };

    check(
        "Q11",
        apply(&[&q11], &g),
        lowered(Some((a1, a2, b1, b2, c + 1)), 1),
    )?;
    let lhs = apply(&[&a2_21, &q11], &g).minus(&apply(&[&q12], &g).scale(&ParamPoly::int(cb)))?;
    check(
        "(1,0,0,1) move",
        lhs,
        lowered(sub1(b1).map(|b| (a1 + 1, a2, b, b2 + 1, c)), -(b1 as i64)),
    )?;
    let lhs = apply(&[&a1_21, &q11], &g).minus(&apply(&[&q21], &g).scale(&ParamPoly::int(ca)))?;
    check(
        "(0,1,1,0) move",
        lhs,
        lowered(
            sub1(a1).map(|a| (a, a2 + 1, b1 + 1, b2, c)),
            sign * a1 as i64,
        ),
    )?;
    let lhs = apply(&[&a1_21, &a2_21, &q11], &g)
        .minus(&apply(&[&a2_21, &q21], &g).scale(&ParamPoly::int(ca)))?
        .minus(&apply(&[&a1_21, &q12], &g).scale(&ParamPoly::int(cb)))?
        .plus(&apply(&[&q22], &g).scale(&ParamPoly::int(ca * cb)))?;
    check(
        "(0,1,0,1) move",
        lhs,
        lowered(
            sub1(c).map(|cc| (a1, a2 + 1, b1, b2 + 1, cc)),
            (c * (a1 + b1 + c + 1)) as i64,
        ),
    )?;
    Ok(report)
}

/// `z1^{ξ1−ξ2} (z1 z̄_{p+2} − z̄_{p+1} z2)^{ξ2}` in a complex block of
/// dimension `2p`.
pub fn joint_highest_weight_vector(space: &Space, p: usize, xi1: u32, xi2: u32) -> MultiPoly {
    let z = |k: usize| space.coord(0, k);
    let zc = |k: usize| space.conj_coord(0, k);
    let det = &(&z(1) * &zc(p + 2)) - &(&zc(p + 1) * &z(2));
    &z(1).pow(xi1 - xi2) * &det.pow(xi2)
}

/// Highest weight vectors of `Sp(p) × Sp(1)` in the harmonics on `ℍ^p`.
///
/// For each `j ≤ ξ1 − ξ2` the vector `z̄_{p+1}^j h_{(ξ1−j, ξ2)}` must be
/// harmonic, annihilated by the positive root operators `A¹_ij` (`i < j`) and
/// `B¹_ij` (`i ≤ j`), of weight `(ξ1, ξ2, 0, …)` under the diagonal `A¹_ii`,
/// and of degrees `(ξ1 − j, ξ2 + j)` in `(z, z̄)`. The joint vector (`j = 0`)
/// is killed by `E12`, and the vectors `E21^k h` span the same space as the
/// listed family.
pub fn verify_highest_weight_vectors(
    p: usize,
    xi1: u32,
    xi2: u32,
) -> Result<VerificationReport, OracleError> {
    if p < 2 || xi1 < xi2 {
        return Err(OracleError::InvalidInput(format!(
            "highest weight vectors need p >= 2 and xi1 >= xi2, got p={p} ({xi1},{xi2})"
        )));
    }
    let cone = Cone::symplectic(p, 1);
    let space = Space::new(&[("z", BlockKind::Complex, 2 * p)]);
    let zb = space.block(0).clone();
    let expand = |spec: OperatorSpec| spec.expand(&cone);
    let mut report = VerificationReport::new(
        "highest weight vectors",
        format!("Sp({p}) weight ({xi1},{xi2})"),
    );
    let top = joint_highest_weight_vector(&space, p, xi1, xi2);
    let mut family = Vec::new();
    for j in 0..=(xi1 - xi2) {
        let v = &space.conj_coord(0, p + 1).pow(j)
            * &joint_highest_weight_vector(&space, p, xi1 - j, xi2);
        family.push(v.clone());
        let harmonic = zb.is_harmonic(&v);
        let mut killed = true;
        for a in 1..=p {
            for b in a..=p {
                if a < b {
                    killed &= expand(OperatorSpec::SpA {
                        block: 1,
                        i: a,
                        j: b,
                    })?
                    .apply_poly(&v)
                    .is_zero();
                }
                killed &= expand(OperatorSpec::SpB {
                    block: 1,
                    i: a,
                    j: b,
                })?
                .apply_poly(&v)
                .is_zero();
            }
        }
        let mut weight_ok = true;
        for a in 1..=p {
            let lambda = match a {
                1 => xi1,
                2 => xi2,
                _ => 0,
            };
            let av = expand(OperatorSpec::SpA {
                block: 1,
                i: a,
                j: a,
            })?
            .apply_poly(&v);
            weight_ok &= av == v.scale_rational(&rat(lambda as i64));
        }
        let deg_ok = zb.degree(&v)? == Some(BlockDegree::Complex(xi1 - j, xi2 + j));
        report.record(harmonic && killed && weight_ok && deg_ok, || {
            format!(
                "j={j} v={}: harmonic {harmonic}, annihilated {killed}, weight {weight_ok}, degrees {deg_ok}",
                space.render(&v)
            )
        });
    }
    let e11 = sp_e_operator(&zb, p, 1, 1).expect("E11");
    let e22 = sp_e_operator(&zb, p, 2, 2).expect("E22");
    let e12 = sp_e_operator(&zb, p, 1, 2).expect("E12");
    let e21 = sp_e_operator(&zb, p, 2, 1).expect("E21");
    let h_weight = &e11.apply_poly(&top) - &e22.apply_poly(&top);
    let sp1_ok = e12.apply_poly(&top).is_zero()
        && h_weight == top.scale_rational(&rat(xi1 as i64 - xi2 as i64));
    report.record(sp1_ok, || {
        format!(
            "joint vector {} is not an sp(1) highest weight vector",
            space.render(&top)
        )
    });
    let mut lowered = Vec::new();
    let mut v = top.clone();
    for _ in 0..=(xi1 - xi2) {
        lowered.push(v.clone());
        v = e21.apply_poly(&v);
    }
    let terminated = v.is_zero();
    let expected_dim = (xi1 - xi2 + 1) as usize;
    let mut both = family.clone();
    both.extend(lowered.iter().cloned());
    let span_ok = crate::space::span_dimension(&family) == expected_dim
        && crate::space::span_dimension(&lowered) == expected_dim
        && crate::space::span_dimension(&both) == expected_dim;
    report.record(span_ok && terminated, || {
        format!("lowering span mismatch: span {span_ok}, E21 string terminates {terminated}")
    });
    Ok(report)
}

/// Invariant pairing on `O(p,q)` K-types with the sphere inner product:
///
/// * `⟨T^{++}(z⊗φ), φ'⟩ = ⟨φ, T^{−−}(z⊗φ')⟩` and
///   `⟨T^{+−}(z⊗φ), φ''⟩ = ⟨φ, T^{−+}(z⊗φ'')⟩` for every `z = p_il`;
/// * on the unitary axis the engine's coefficients make every boost skew
///   adjoint for the standard forms (all `c = 1`);
/// * the rotations are skew adjoint on `H^m ⊗ H^n`;
/// * the Gram matrix of `H^m ⊗ H^n` is positive definite.
pub fn verify_invariant_pairing(
    p: usize,
    q: usize,
    m: u32,
    n: u32,
) -> Result<VerificationReport, OracleError> {
    if q < 2 || p < q {
        return Err(OracleError::InvalidInput(format!(
            "invariant pairing needs p >= q >= 2, got ({p},{q})"
        )));
    }
    let cone = Cone::orthogonal(p, q);
    let space = &cone.space;
    let ctx = GroupContext::new(Family::O, p as u32, q as u32)
        .map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let axis = ratio(2 - p as i64 - q as i64, 2);
    let at_axis = |c: ParamPoly| c.eval(std::slice::from_ref(&axis));
    let pt = KPoint::new(m as i64, n as i64);
    let mut report =
        VerificationReport::new("invariant pairing", format!("O({p},{q}) m={m} n={n}"));
    let basis = real_product_basis(&cone, m, n)?;
    let phis: Vec<MultiPoly> = basis.iter().map(|(a, b)| a * b).collect();
    let gram_ok = is_positive_definite(&gram_matrix(space, &phis));
    report.record(gram_ok, || {
        format!("Gram matrix of H^{m} x H^{n} is not positive definite")
    });

    let neighbours = [
        (Direction::PP, Direction::MM),
        (Direction::PM, Direction::MP),
    ];
    for (fwd, back) in neighbours {
        let (Some(m2), Some(n2)) = (shifted(m, fwd.dm), shifted(n, fwd.dn)) else {
            continue;
        };
        let target = KPoint::new(m2 as i64, n2 as i64);
        let forward_coeff = at_axis(engine_coefficient(&ctx, pt, fwd, &o_param)?);
        let back_coeff = at_axis(engine_coefficient(&ctx, target, back, &o_param)?);
        let partners = real_product_basis(&cone, m2, n2)?;
        for (h1, h2) in &basis {
            for (g1, g2) in &partners {
                for i in 1..=p {
                    for l in 1..=q {
                        let t_fwd = orthogonal_maps(&cone, i, l, h1, h2, m, n)?
                            .into_iter()
                            .find(|(d, _, _)| *d == fwd)
                            .map(|(_, t, _)| t)
                            .expect("all four maps are present");
                        let t_back = orthogonal_maps(&cone, i, l, g1, g2, m2, n2)?
                            .into_iter()
                            .find(|(d, _, _)| *d == back)
                            .map(|(_, t, _)| t)
                            .expect("all four maps are present");
                        let lhs = space.inner_product(&t_fwd, &(g1 * g2));
                        let rhs = space.inner_product(&(h1 * h2), &t_back);
                        let adjoint = lhs == rhs;
                        let skew = (lhs.scale_rational(&forward_coeff)
                            + rhs.scale_rational(&back_coeff))
                        .is_zero();
                        report.record(adjoint && skew, || {
                            format!(
                                "p[{i},{l}] {fwd}: <T phi, phi'> = {} but <phi, T phi'> = {}",
                                lhs.render_with(&|_| "a".into()),
                                rhs.render_with(&|_| "a".into())
                            )
                        });
                    }
                }
            }
        }
    }

    let mut rotations = Vec::new();
    for j in 1..=p {
        for k in j + 1..=p {
            rotations.push(OperatorSpec::RotationX { j, k });
        }
    }
    for l in 1..=q {
        for mm in l + 1..=q {
            rotations.push(OperatorSpec::RotationY { l, m: mm });
        }
    }
    for rot in rotations {
        let op = rot.expand(&cone)?;
        for f in &phis {
            for g in &phis {
                let s = space.inner_product(&op.apply_poly(f), g)
                    + space.inner_product(f, &op.apply_poly(g));
                report.record(s.is_zero(), || format!("{rot} is not skew adjoint"));
            }
        }
    }
    Ok(report)
}

/// One verification run of each suite over the standard ranges.
pub fn standard_suite() -> Result<Vec<VerificationReport>, OracleError> {
    let mut out = Vec::new();
    let mut trans = Vec::new();
    for (p, q) in [(2, 2), (3, 2), (3, 3)] {
        for m in 0..=3 {
            for n in 0..=3 {
                trans.push(verify_transition_formula(p, q, m, n)?);
            }
        }
    }
    out.push(VerificationReport::merge("transition formula", trans));

    let mut chain = Vec::new();
    for p in [3, 4] {
        for m in 0..=3 {
            chain.push(verify_chain_formula(p, m)?);
        }
    }
    out.push(VerificationReport::merge("chain formula", chain));

    let mut unitary = Vec::new();
    for m in 0..=2u32 {
        for n in 0..=2u32 {
            for m1 in 0..=m {
                for n1 in 0..=n {
                    unitary.push(verify_unitary_transitions(2, 2, (m1, m - m1, n1, n - n1))?);
                }
            }
        }
    }
    out.push(VerificationReport::merge("unitary transitions", unitary));

    let mut fiber = Vec::new();
    for a1 in 0..=2 {
        for a2 in 0..=2 {
            for b1 in 0..=2 {
                for b2 in 0..=2 {
                    for c in 0..=2 {
                        fiber.push(verify_fiber_moves(2, 2, (a1, a2, b1, b2, c))?);
                    }
                }
            }
        }
    }
    out.push(VerificationReport::merge("fiber moves", fiber));

    let mut hwv = Vec::new();
    for xi1 in 0..=3 {
        for xi2 in 0..=xi1 {
            hwv.push(verify_highest_weight_vectors(2, xi1, xi2)?);
        }
    }
    out.push(VerificationReport::merge("highest weight vectors", hwv));

    let mut pairing = Vec::new();
    for (p, q) in [(2, 2), (3, 2), (3, 3)] {
        for m in 0..=2 {
            for n in 0..=2 {
                pairing.push(verify_invariant_pairing(p, q, m, n)?);
            }
        }
    }
    out.push(VerificationReport::merge("invariant pairing", pairing));
    Ok(out)
}
