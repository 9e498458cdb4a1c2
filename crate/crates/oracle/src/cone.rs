//! Functions on the light cone with a formal radial exponent.
//!
//! A [`ConeFunction`] is a finite sum `Σ_k P_k ρ^{E + k}` where the `P_k` are
//! polynomials, `E` is a formal exponent (a parameter polynomial) and `ρ` is
//! the radial coordinate: `ρ² = R` with `R = r_x²` (or `R = y²` for the
//! one-dimensional second block). Derivatives follow
//! `∂ρ^E = (E/2)(∂R)ρ^{E−2}`. Two cone functions agree on the cone exactly
//! when their difference, collected to the lowest power of `ρ`, lies in the
//! ideal of the cone relation; that is decided by the unique remainder of
//! division by the relation.

use std::collections::BTreeMap;
use std::fmt;

use lightcone::scalar::ratio;
use num_traits::One;

use crate::error::OracleError;
use crate::poly::{mono_div, mono_from, Mono, MultiPoly, ParamPoly};
use crate::space::{BlockDegree, Space};

/// First-order differential operator `Σ c_v ∂/∂v`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiffOp {
    parts: Vec<(MultiPoly, usize)>,
}

impl DiffOp {
    pub fn new() -> Self {
        DiffOp { parts: Vec::new() }
    }

    /// Adds `coeff · ∂/∂var`.
    pub fn with(mut self, coeff: MultiPoly, var: usize) -> Self {
        self.parts.push((coeff, var));
        self
    }

    /// Adds `sign · u ∂/∂v` for variables `u`, `v`.
    pub fn with_vars(self, sign: i64, u: usize, v: usize) -> Self {
        self.with(MultiPoly::var(u).scale_rational(&ratio(sign, 1)), v)
    }

    /// The sum of two operators.
    pub fn plus(mut self, other: &DiffOp) -> Self {
        self.parts.extend(other.parts.iter().cloned());
        self
    }

    pub fn parts(&self) -> &[(MultiPoly, usize)] {
        &self.parts
    }

    /// Action on a polynomial.
    pub fn apply_poly(&self, p: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (c, v) in &self.parts {
            let d = p.derivative(*v);
            if !d.is_zero() {
                out = out + c * &d;
            }
        }
        out
    }
}

/// The group family a cone model belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeKind {
    /// `O(p,q)` with `q ≥ 2`: real blocks `x ∈ ℝ^p`, `y ∈ ℝ^q`.
    Orthogonal { p: usize, q: usize },
    /// `O(p,1)`: the second block is a single coordinate `y = ρ`.
    Chain { p: usize },
    /// `U(p,q)`: complex blocks `z ∈ ℂ^p`, `w ∈ ℂ^q`.
    Unitary { p: usize, q: usize },
    /// `Sp(p,q)`: complex blocks `z ∈ ℂ^{2p}`, `w ∈ ℂ^{2q}`.
    Symplectic { p: usize, q: usize },
}

impl fmt::Display for ConeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConeKind::Orthogonal { p, q } => write!(f, "O({p},{q})"),
            ConeKind::Chain { p } => write!(f, "O({p},1)"),
            ConeKind::Unitary { p, q } => write!(f, "U({p},{q})"),
            ConeKind::Symplectic { p, q } => write!(f, "Sp({p},{q})"),
        }
    }
}

/// A light cone with its radial coordinate and defining relation.
#[derive(Clone, Debug)]
pub struct Cone {
    pub kind: ConeKind,
    pub space: Space,
    radial: MultiPoly,
    root: Option<MultiPoly>,
    relation: MultiPoly,
    lead: Mono,
}

/// `Σ_k P_k ρ^{base + k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeFunction {
    pub base: ParamPoly,
    terms: BTreeMap<i64, MultiPoly>,
}

/// One K-type component `poly · ρ^{base + shift}` with `poly` harmonic in
/// every block and of the listed block degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct KComponent {
    pub degrees: Vec<BlockDegree>,
    pub shift: i64,
    pub poly: MultiPoly,
}

impl ConeFunction {
    /// The zero function with the given radial base.
    pub fn zero(base: ParamPoly) -> Self {
        ConeFunction {
            base,
            terms: BTreeMap::new(),
        }
    }

    /// `p · ρ^{base + shift}`.
    pub fn single(p: MultiPoly, base: ParamPoly, shift: i64) -> Self {
        let mut f = Self::zero(base);
        f.add_term(shift, p);
        f
    }

    /// Adds `p · ρ^{base + shift}` in place.
    pub fn add_term(&mut self, shift: i64, p: MultiPoly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(shift).or_insert_with(MultiPoly::zero);
        *entry = &*entry + &p;
        if entry.is_zero() {
            self.terms.remove(&shift);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of two functions on the same radial base.
    pub fn plus(&self, other: &ConeFunction) -> Result<ConeFunction, OracleError> {
        if self.base != other.base {
            return Err(OracleError::BaseMismatch);
        }
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_term(*k, p.clone());
        }
        Ok(out)
    }

    /// Difference of two functions on the same radial base.
    pub fn minus(&self, other: &ConeFunction) -> Result<ConeFunction, OracleError> {
        self.plus(&other.scale(&-ParamPoly::one()))
    }

    /// Multiplies by a parameter polynomial.
    pub fn scale(&self, c: &ParamPoly) -> ConeFunction {
        let mut out = Self::zero(self.base.clone());
        for (k, p) in &self.terms {
            out.add_term(*k, p.scale(c));
        }
        out
    }
}

impl Cone {
    /// Cone of `O(p,q)`; uses the chain model when `q = 1`.
    pub fn orthogonal(p: usize, q: usize) -> Self {
        if q == 1 {
            return Self::chain(p);
        }
        let space = Space::real_pair(p, q);
        let (x, y) = (space.block(0).clone(), space.block(1).clone());
        Cone {
            kind: ConeKind::Orthogonal { p, q },
            radial: x.r2(),
            root: None,
            relation: &x.r2() - &y.r2(),
            lead: y.r2_lead(),
            space,
        }
    }

    /// Cone of `O(p,1)` modelled on `h(x) y^E` with `ρ = y`.
    pub fn chain(p: usize) -> Self {
        let space = Space::real_pair(p, 1);
        let (x, y) = (space.block(0).clone(), space.block(1).clone());
        Cone {
            kind: ConeKind::Chain { p },
            radial: y.r2(),
            root: Some(MultiPoly::var(y.coord(1))),
            relation: &y.r2() - &x.r2(),
            lead: y.r2_lead(),
            space,
        }
    }

    /// Cone of `U(p,q)` in coordinates `z, z̄, w, w̄`.
    pub fn unitary(p: usize, q: usize) -> Self {
        Self::complex(ConeKind::Unitary { p, q }, p, q)
    }

    /// Cone of `Sp(p,q)` in coordinates `z_1..z_{2p}`, `w_1..w_{2q}` and
    /// their conjugates.
    pub fn symplectic(p: usize, q: usize) -> Self {
        Self::complex(ConeKind::Symplectic { p, q }, 2 * p, 2 * q)
    }

    fn complex(kind: ConeKind, zp: usize, wq: usize) -> Self {
        let space = Space::complex_pair(zp, wq);
        let (z, w) = (space.block(0).clone(), space.block(1).clone());
        Cone {
            kind,
            radial: z.r2(),
            root: None,
            relation: &z.r2() - &w.r2(),
            lead: w.r2_lead(),
            space,
        }
    }

    /// `R = ρ²`.
    pub fn radial(&self) -> &MultiPoly {
        &self.radial
    }

    /// The polynomial whose vanishing defines the cone.
    pub fn relation(&self) -> &MultiPoly {
        &self.relation
    }

    /// `ρ^k` for `k ≥ 0` as a polynomial.
    fn rho_power(&self, k: i64) -> Result<MultiPoly, OracleError> {
        let even = self.radial.pow((k / 2) as u32);
        if k % 2 == 0 {
            Ok(even)
        } else {
            let root = self.root.as_ref().ok_or(OracleError::OddRadialShift)?;
            Ok(&even * root)
        }
    }

    /// Action of a first-order operator.
    pub fn apply(&self, op: &DiffOp, f: &ConeFunction) -> ConeFunction {
        let mut out = ConeFunction::zero(f.base.clone());
        for (&k, p) in &f.terms {
            out.add_term(k, op.apply_poly(p));
            let half_e = (&f.base + &ParamPoly::int(k)).scale_rational(&ratio(1, 2));
            for (c, v) in op.parts() {
                let dr = self.radial.derivative(*v);
                if dr.is_zero() {
                    continue;
                }
                out.add_term(k - 2, (&(c * p) * &dr).scale(&half_e));
            }
        }
        out
    }

    /// `(k_min, Σ_k P_k ρ^{k − k_min})`: the function equals
    /// `ρ^{base + k_min}` times the returned polynomial.
    pub fn collect(&self, f: &ConeFunction) -> Result<(i64, MultiPoly), OracleError> {
        let Some(&kmin) = f.terms.keys().next() else {
            return Ok((0, MultiPoly::zero()));
        };
        let mut total = MultiPoly::zero();
        for (&k, p) in &f.terms {
            total = total + p * &self.rho_power(k - kmin)?;
        }
        Ok((kmin, total))
    }

    /// Remainder of a polynomial modulo the cone relation.
    pub fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        p.divide_by_lead(&self.relation, &self.lead).1
    }

    /// Collected polynomial reduced modulo the cone relation.
    pub fn normal_form(&self, f: &ConeFunction) -> Result<(i64, MultiPoly), OracleError> {
        let (kmin, p) = self.collect(f)?;
        Ok((kmin, self.reduce(&p)))
    }

    /// True when `f` vanishes identically on the cone, for every value of
    /// the formal parameters.
    pub fn vanishes(&self, f: &ConeFunction) -> Result<bool, OracleError> {
        Ok(self.normal_form(f)?.1.is_zero())
    }

    /// Splits `f` into K-type components: each polynomial is decomposed into
    /// products of harmonics and powers of `r²` in each block, and every
    /// power of `r²` is absorbed into `ρ` using the cone relation.
    pub fn ktype_components(&self, f: &ConeFunction) -> Result<Vec<KComponent>, OracleError> {
        let x = self.space.block(0);
        let y = self.space.block(1);
        let mut acc: BTreeMap<(Vec<BlockDegree>, i64), MultiPoly> = BTreeMap::new();
        let mut push = |degrees: Vec<BlockDegree>, shift: i64, p: MultiPoly| {
            let e = acc.entry((degrees, shift)).or_insert_with(MultiPoly::zero);
            *e = &*e + &p;
        };
        for (&k, p) in &f.terms {
            for (dx, px) in x.split(p) {
                for (h, i) in x.harmonic_decompose(&px)? {
                    let shift = k + 2 * i as i64;
                    match self.kind {
                        ConeKind::Chain { .. } => {
                            let yv = y.coord(1);
                            for (m, c) in h.terms() {
                                let t = crate::poly::exponent(m, yv);
                                let rest = mono_div(m, &mono_from(&[(yv, t)]))
                                    .expect("monomial contains its own y power");
                                push(
                                    vec![dx.lowered(i)],
                                    shift + t as i64,
                                    MultiPoly::term(&rest, c.clone()),
                                );
                            }
                        }
                        _ => {
                            for (dy, py) in y.split(&h) {
                                for (g, j) in y.harmonic_decompose(&py)? {
                                    push(
                                        vec![dx.lowered(i), dy.lowered(j)],
                                        shift + 2 * j as i64,
                                        g,
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(acc
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|((degrees, shift), poly)| KComponent {
                degrees,
                shift,
                poly,
            })
            .collect())
    }
}
