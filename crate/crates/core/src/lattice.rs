//! Group contexts, spectral parameters, K-type lattices, regions and fibers.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::scalar::{rational_to_i64, ExactScalar};

/// The three classical families acting on a light cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    O,
    U,
    Sp,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::O => "O",
            Family::U => "U",
            Family::Sp => "Sp",
        })
    }
}

/// Errors raised by invalid contexts or parameters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("signature ({p},{q}) must satisfy p >= q >= 1 and p + q >= 2")]
    BadSignature { p: u32, q: u32 },
    #[error("parameter family {param} does not match group family {group}")]
    FamilyMismatch { group: Family, param: Family },
    #[error("alpha - beta must be an integer, got {0}")]
    NonIntegralDifference(String),
}

/// A group `O(p,q)`, `U(p,q)` or `Sp(p,q)` with `p ≥ q ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupContext {
    pub family: Family,
    pub p: u32,
    pub q: u32,
}

impl GroupContext {
    /// Validated constructor.
    pub fn new(family: Family, p: u32, q: u32) -> Result<Self, LatticeError> {
        if q < 1 || p < q || p + q < 2 {
            return Err(LatticeError::BadSignature { p, q });
        }
        Ok(GroupContext { family, p, q })
    }

    /// Signature of the orthogonal group containing this one.
    pub fn o_signature(&self) -> (i64, i64) {
        let k = match self.family {
            Family::O => 1,
            Family::U => 2,
            Family::Sp => 4,
        };
        (k * self.p as i64, k * self.q as i64)
    }

    /// True for `O(p,1)`, whose K-types form a single chain indexed by `m`.
    pub fn is_chain(&self) -> bool {
        self.family == Family::O && self.q == 1
    }

    /// True for `U(p,1)`, whose base lattice uses a signed `n`.
    pub fn has_signed_n(&self) -> bool {
        self.family == Family::U && self.q == 1
    }
}

impl fmt::Display for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.family, self.p, self.q)
    }
}

/// Parity summand of an orthogonal module: even or odd functions on the cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Summand {
    Plus,
    Minus,
    Both,
}

impl Summand {
    /// Parity of `m + n` for K-types in this summand.
    pub fn parity(&self) -> Option<i64> {
        match self {
            Summand::Plus => Some(0),
            Summand::Minus => Some(1),
            Summand::Both => None,
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Summand::Plus => "plus",
            Summand::Minus => "minus",
            Summand::Both => "both",
        })
    }
}

/// Parameters selecting one representation space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpectralParam {
    O {
        a: ExactScalar,
        summand: Summand,
    },
    U {
        alpha: ExactScalar,
        beta: ExactScalar,
    },
    Sp {
        a: ExactScalar,
        j: u32,
    },
}

impl SpectralParam {
    /// Family the parameter belongs to.
    pub fn family(&self) -> Family {
        match self {
            SpectralParam::O { .. } => Family::O,
            SpectralParam::U { .. } => Family::U,
            SpectralParam::Sp { .. } => Family::Sp,
        }
    }

    /// Homogeneity degree seen by the orthogonal shadow (`α+β` for U).
    pub fn shadow_a(&self) -> ExactScalar {
        match self {
            SpectralParam::O { a, .. } | SpectralParam::Sp { a, .. } => a.clone(),
            SpectralParam::U { alpha, beta } => alpha.add(beta),
        }
    }

    /// `α − β` for U, zero otherwise.
    pub fn weight_difference(&self) -> i64 {
        match self {
            SpectralParam::U { alpha, beta } => alpha
                .sub(beta)
                .as_integer()
                .expect("alpha - beta validated as integer"),
            _ => 0,
        }
    }

    /// The discrete index `j` for Sp, zero otherwise.
    pub fn j(&self) -> i64 {
        match self {
            SpectralParam::Sp { j, .. } => *j as i64,
            _ => 0,
        }
    }

    /// Parity constraint on `m + n` for orthogonal summands.
    pub fn summand(&self) -> Option<Summand> {
        match self {
            SpectralParam::O { summand, .. } => Some(*summand),
            _ => None,
        }
    }

    /// Same parameter with the orthogonal summand replaced.
    pub fn with_summand(&self, s: Summand) -> SpectralParam {
        match self {
            SpectralParam::O { a, .. } => SpectralParam::O {
                a: a.clone(),
                summand: s,
            },
            other => other.clone(),
        }
    }

    /// Same discrete data with the shadow degree replaced by `a`. For U the
    /// difference `α − β` is kept.
    pub fn with_shadow_a(&self, a: ExactScalar) -> SpectralParam {
        match self {
            SpectralParam::O { summand, .. } => SpectralParam::O {
                a,
                summand: *summand,
            },
            SpectralParam::Sp { j, .. } => SpectralParam::Sp { a, j: *j },
            SpectralParam::U { .. } => {
                let k = self.weight_difference();
                let half = crate::scalar::ratio(1, 2);
                let alpha = a
                    .add_int(k)
                    .scale_rational(&half)
                    .expect("generic parts are not halved");
                let beta = alpha.add_int(-k);
                SpectralParam::U { alpha, beta }
            }
        }
    }

    /// Checks family agreement and the integrality of `α − β`.
    pub fn validate(&self, ctx: &GroupContext) -> Result<(), LatticeError> {
        if self.family() != ctx.family {
            return Err(LatticeError::FamilyMismatch {
                group: ctx.family,
                param: self.family(),
            });
        }
        if let SpectralParam::U { alpha, beta } = self {
            let d = alpha.sub(beta);
            if d.as_rational().and_then(rational_to_i64).is_none() {
                return Err(LatticeError::NonIntegralDifference(d.to_string()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SpectralParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralParam::O { a, summand } => write!(f, "a={a}, summand={summand}"),
            SpectralParam::U { alpha, beta } => write!(f, "alpha={alpha}, beta={beta}"),
            SpectralParam::Sp { a, j } => write!(f, "a={a}, j={j}"),
        }
    }
}

/// A base lattice point `(m, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KPoint {
    pub m: i64,
    pub n: i64,
}

impl KPoint {
    pub const fn new(m: i64, n: i64) -> Self {
        KPoint { m, n }
    }
}

impl fmt::Display for KPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// One irreducible K-module over a base point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberPoint {
    /// The single K-type over an orthogonal base point.
    Orthogonal,
    /// `H^{m1,m2}(C^p) ⊗ H^{n1,n2}(C^q)`.
    Unitary { m1: i64, m2: i64, n1: i64, n2: i64 },
    /// `V_p^{(ξ1,ξ2)} ⊗ V_q^{(η1,η2)}` with its `Sp(1)` factor.
    Symplectic {
        xi1: i64,
        xi2: i64,
        eta1: i64,
        eta2: i64,
    },
}

impl fmt::Display for FiberPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberPoint::Orthogonal => f.write_str("*"),
            FiberPoint::Unitary { m1, m2, n1, n2 } => write!(f, "({m1},{m2},{n1},{n2})"),
            FiberPoint::Symplectic {
                xi1,
                xi2,
                eta1,
                eta2,
            } => write!(f, "({xi1},{xi2},{eta1},{eta2})"),
        }
    }
}

/// Dimension of a K-type or constituent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    Finite(u128),
    Infinite,
    Unknown,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(d) => write!(f, "{d}"),
            Dimension::Infinite => f.write_str("infinite"),
            Dimension::Unknown => f.write_str("unknown"),
        }
    }
}

fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Dimension of the spherical harmonics of degree `m` on `R^p`.
pub fn harmonic_dim(p: u32, m: u32) -> u128 {
    let (p, m) = (p as i64, m as i64);
    if p == 1 {
        return u128::from(m <= 1);
    }
    binomial(m + p - 1, p - 1) - binomial(m + p - 3, p - 1)
}

fn harmonic_nonzero(p: i64, m: i64) -> bool {
    m >= 0 && (p >= 2 || m <= 1)
}

/// Closed-form description of the K-type support.
pub fn region_contains(ctx: &GroupContext, sp: &SpectralParam, pt: KPoint) -> bool {
    let KPoint { m, n } = pt;
    if m < 0 {
        return false;
    }
    let (p, q) = (ctx.p as i64, ctx.q as i64);
    match ctx.family {
        Family::O => {
            if ctx.is_chain() {
                return n == 0 && harmonic_nonzero(p, m);
            }
            let parity_ok = match sp.summand().and_then(|s| s.parity()) {
                Some(e) => (m + n).mod_floor(&2) == e,
                None => true,
            };
            n >= 0 && harmonic_nonzero(p, m) && harmonic_nonzero(q, n) && parity_ok
        }
        Family::U => {
            let k = sp.weight_difference();
            if (m + n - k).is_odd() {
                return false;
            }
            if q == 1 {
                if p == 1 {
                    m == (n - k).abs()
                } else {
                    m >= (n - k).abs()
                }
            } else {
                n >= 0 && m + n >= k.abs()
            }
        }
        Family::Sp => {
            let j = sp.j();
            if n < 0 || (m + n - j).is_odd() {
                return false;
            }
            match (p, q) {
                (1, 1) => m + n >= j && j >= (m - n).abs(),
                (_, 1) => m >= (j - n).abs(),
                _ => m + n >= j,
            }
        }
    }
}

/// All K-types over `pt`, sorted lexicographically.
pub fn fiber_enumerate(ctx: &GroupContext, sp: &SpectralParam, pt: KPoint) -> Vec<FiberPoint> {
    let KPoint { m, n } = pt;
    let (p, q) = (ctx.p as i64, ctx.q as i64);
    let mut out = Vec::new();
    match ctx.family {
        Family::O => {
            if region_contains(ctx, sp, pt) {
                out.push(FiberPoint::Orthogonal);
            }
        }
        Family::U => {
            let k = sp.weight_difference();
            if m < 0 || (!ctx.has_signed_n() && n < 0) {
                return out;
            }
            let n_splits: Vec<(i64, i64)> = if ctx.has_signed_n() {
                vec![(n.max(0), (-n).max(0))]
            } else {
                (0..=n)
                    .map(|n1| (n1, n - n1))
                    .filter(|&(n1, n2)| q > 1 || n1 * n2 == 0)
                    .collect()
            };
            for m1 in 0..=m {
                let m2 = m - m1;
                if p == 1 && m1 * m2 != 0 {
                    continue;
                }
                for &(n1, n2) in &n_splits {
                    if m1 - m2 + n1 - n2 == k {
                        out.push(FiberPoint::Unitary { m1, m2, n1, n2 });
                    }
                }
            }
        }
        Family::Sp => {
            let j = sp.j();
            if m < 0 || n < 0 {
                return out;
            }
            for xi2 in 0..=m / 2 {
                let xi1 = m - xi2;
                if p == 1 && xi2 != 0 {
                    continue;
                }
                for eta2 in 0..=n / 2 {
                    let eta1 = n - eta2;
                    if q == 1 && eta2 != 0 {
                        continue;
                    }
                    let (s, t) = (xi1 - xi2, eta1 - eta2);
                    if s + t >= j && j >= (s - t).abs() && (s + t - j).is_even() {
                        out.push(FiberPoint::Symplectic {
                            xi1,
                            xi2,
                            eta1,
                            eta2,
                        });
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Dimension of one K-type; only known in closed form for the orthogonal family.
pub fn ktype_dimension(ctx: &GroupContext, base: KPoint, fiber: &FiberPoint) -> Dimension {
    match fiber {
        FiberPoint::Orthogonal => {
            let dq = if ctx.is_chain() {
                1
            } else {
                harmonic_dim(ctx.q, base.n as u32)
            };
            Dimension::Finite(harmonic_dim(ctx.p, base.m as u32) * dq)
        }
        _ => Dimension::Unknown,
    }
}
