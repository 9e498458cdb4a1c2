//! Sparse multivariate polynomials with exact coefficients.
//!
//! [`Poly<C>`] maps exponent vectors to coefficients in any [`Coeff`] ring.
//! Two instances do all the work: [`ParamPoly`] holds polynomials in the
//! formal parameters (the spectral parameter `a` and the radial exponent
//! `d`), and [`MultiPoly`] holds polynomials in the ambient coordinates whose
//! coefficients are parameter polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use lightcone::scalar::{fmt_rational, rat};
use lightcone::Rational;
use num_traits::{One, Zero};

/// Exponent vector with trailing zeros trimmed.
pub type Mono = Vec<u16>;

/// Coefficient rings usable inside [`Poly`].
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Embeds a rational constant.
    fn from_rational(r: Rational) -> Self;
    /// Multiplies by a rational constant.
    fn scale_rational(&self, r: &Rational) -> Self;
    /// The value as a rational constant, if it is one.
    fn as_rational(&self) -> Option<Rational>;
    /// Human-readable rendering.
    fn render(&self) -> String;
}

impl Coeff for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn scale_rational(&self, r: &Rational) -> Self {
        self * r
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn render(&self) -> String {
        fmt_rational(self)
    }
}

/// Sparse polynomial over `C`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly<C> {
    terms: BTreeMap<Mono, C>,
}

/// Polynomials in the formal parameters.
pub type ParamPoly = Poly<Rational>;

/// Polynomials in the ambient coordinates over [`ParamPoly`].
pub type MultiPoly = Poly<ParamPoly>;

/// Index of the spectral parameter `a` in a [`ParamPoly`].
pub const PARAM_A: usize = 0;
/// Index of the radial exponent `d` in a [`ParamPoly`].
pub const PARAM_D: usize = 1;
const PARAM_NAMES: [&str; 2] = ["a", "d"];

fn trim(mut mono: Mono) -> Mono {
    while mono.last() == Some(&0) {
        mono.pop();
    }
    mono
}

/// Exponent of variable `i` in `mono`.
pub fn exponent(mono: &[u16], i: usize) -> u16 {
    mono.get(i).copied().unwrap_or(0)
}

/// Product of two monomials.
pub fn mono_mul(a: &[u16], b: &[u16]) -> Mono {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, e) in out.iter_mut().zip(short) {
        *o += e;
    }
    out
}

/// `a / b` if `b` divides `a`.
pub fn mono_div(a: &[u16], b: &[u16]) -> Option<Mono> {
    if b.len() > a.len() && b[a.len()..].iter().any(|&e| e > 0) {
        return None;
    }
    let mut out = a.to_vec();
    for (i, &e) in b.iter().enumerate() {
        if i < out.len() {
            out[i] = out[i].checked_sub(e)?;
        }
    }
    Some(trim(out))
}

/// The monomial `∏ v_i^{e_i}` from `(variable, exponent)` pairs.
pub fn mono_from(pairs: &[(usize, u16)]) -> Mono {
    let len = pairs.iter().map(|&(v, _)| v + 1).max().unwrap_or(0);
    let mut out = vec![0; len];
    for &(v, e) in pairs {
        out[v] += e;
    }
    trim(out)
}

impl<C: Coeff> Poly<C> {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(c: C) -> Self {
        Self::term(&[], c)
    }

    /// A rational constant.
    pub fn rational(r: Rational) -> Self {
        Self::constant(C::from_rational(r))
    }

    /// An integer constant.
    pub fn int(n: i64) -> Self {
        Self::rational(rat(n))
    }

    /// The variable with index `i`.
    pub fn var(i: usize) -> Self {
        Self::term(&mono_from(&[(i, 1)]), C::one())
    }

    /// The single term `c·mono`.
    pub fn term(mono: &[u16], c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(mono.to_vec(), c);
        p
    }

    /// Sum of `(monomial, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (Mono, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c·mono` in place.
    pub fn add_term(&mut self, mono: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        let mono = trim(mono);
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&mono);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    /// Coefficient of `mono` (zero if absent).
    pub fn coeff(&self, mono: &[u16]) -> C {
        self.terms
            .get(&trim(mono.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> C {
        self.coeff(&[])
    }

    /// True when only a constant term is present.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, x)| (m.clone(), x.clone() * c.clone())),
        )
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.scale_rational(r)))
                .collect(),
        }
    }

    /// Multiplies by a monomial.
    pub fn mul_mono(&self, mono: &[u16]) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (mono_mul(m, mono), x.clone()))
                .collect(),
        }
    }

    /// `self^k`.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = exponent(m, i);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[i] -= 1;
            out.add_term(dm, c.scale_rational(&rat(e as i64)));
        }
        out
    }

    /// Largest total degree of a term (`None` for zero).
    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
    }

    /// Degree of each term restricted to `vars`, grouped.
    pub fn split_by_degree(&self, vars: &[usize]) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = vars.iter().map(|&v| exponent(m, v) as u32).sum();
            out.entry(d)
                .or_insert_with(Self::zero)
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Renames variables: variable `i` becomes `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let pairs: Vec<(usize, u16)> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (perm.get(i).copied().unwrap_or(i), e))
                .collect();
            (mono_from(&pairs), c.clone())
        }))
    }

    /// Substitutes polynomials for variables; unlisted variables stay put.
    pub fn substitute(&self, images: &BTreeMap<usize, Self>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            let mut kept = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match images.get(&i) {
                    Some(img) => t = &t * &img.pow(e as u32),
                    None => kept.push((i, e)),
                }
            }
            out = out + t.mul_mono(&mono_from(&kept));
        }
        out
    }

    /// Division by `g` with respect to the monomial `lead`.
    ///
    /// `lead` must carry coefficient `±1` in `g`, and its first variable
    /// (the pivot) must not occur in any other term of `g`. Terms are
    /// rewritten in decreasing pivot degree, so the remainder has no
    /// monomial divisible by `lead`. It is the unique normal form modulo
    /// the principal ideal `(g)`. Returns `(quotient, remainder)`.
    pub fn divide_by_lead(&self, g: &Self, lead: &[u16]) -> (Self, Self) {
        let lc = g.coeff(lead);
        let inv = if lc == C::one() {
            C::one()
        } else if lc == -C::one() {
            -C::one()
        } else {
            panic!("divide_by_lead needs a unit lead coefficient");
        };
        let pivot = lead
            .iter()
            .position(|&e| e > 0)
            .expect("lead monomial must be non-constant");
        let tail = g.clone() - Self::term(lead, lc);
        debug_assert!(tail.terms.keys().all(|m| exponent(m, pivot) == 0));

        let mut buckets: BTreeMap<u16, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            buckets
                .entry(exponent(m, pivot))
                .or_insert_with(Self::zero)
                .add_term(m.clone(), c.clone());
        }
        let mut quotient = Self::zero();
        let mut remainder = Self::zero();
        while let Some((_, bucket)) = buckets.pop_last() {
            for (m, c) in bucket.terms {
                match mono_div(&m, lead) {
                    Some(rest) => {
                        let qc = c * inv.clone();
                        quotient.add_term(rest.clone(), qc.clone());
                        // m = lead·rest ≡ −inv·tail·rest modulo g
                        for (tm, tc) in &tail.terms {
                            let nm = mono_mul(&rest, tm);
                            buckets
                                .entry(exponent(&nm, pivot))
                                .or_insert_with(Self::zero)
                                .add_term(nm, -(qc.clone() * tc.clone()));
                        }
                    }
                    None => remainder.add_term(m, c),
                }
            }
        }
        (quotient, remainder)
    }

    /// Renders with the given variable names.
    pub fn render_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        names(i)
                    } else {
                        format!("{}^{}", names(i), e)
                    }
                })
                .collect();
            let cs = c.render();
            let compound = cs.contains(['+', ' ']) || cs[1..].contains('-');
            let cs = if compound { format!("({cs})") } else { cs };
            parts.push(match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono.join("*"),
                (false, "-1") => format!("-{}", mono.join("*")),
                (false, _) => format!("{}*{}", cs, mono.join("*")),
            });
        }
        parts.join(" + ")
    }
}

impl ParamPoly {
    /// The formal parameter with index `i`.
    pub fn param(i: usize) -> Self {
        Self::var(i)
    }

    /// The affine polynomial `c0 + c1·a`.
    pub fn affine_in_a(c0: Rational, c1: Rational) -> Self {
        Self::rational(c0) + Self::param(PARAM_A).scale_rational(&c1)
    }

    /// Evaluates at rational parameter values (missing values count as 0).
    pub fn eval(&self, values: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in self.terms() {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                let v = values.get(i).cloned().unwrap_or_else(Rational::zero);
                for _ in 0..e {
                    t *= &v;
                }
            }
            total += t;
        }
        total
    }
}

impl Coeff for ParamPoly {
    fn from_rational(r: Rational) -> Self {
        Self::constant(r)
    }
    fn scale_rational(&self, r: &Rational) -> Self {
        Poly::scale_rational(self, r)
    }
    fn as_rational(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }
    fn render(&self) -> String {
        self.render_with(&|i| {
            PARAM_NAMES
                .get(i)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("t{i}"))
        })
    }
}

impl MultiPoly {
    /// Lifts a parameter polynomial to a constant.
    pub fn from_param(c: ParamPoly) -> Self {
        Self::constant(c)
    }

    /// Multiplies by a parameter polynomial.
    pub fn scale_param(&self, c: &ParamPoly) -> Self {
        self.scale(c)
    }

    /// True when every coefficient is a rational constant.
    pub fn has_rational_coefficients(&self) -> bool {
        self.terms().all(|(_, c)| c.is_constant())
    }

    /// Specializes the formal parameters to rational values.
    pub fn specialize(&self, values: &[Rational]) -> Self {
        Self::from_terms(
            self.terms()
                .map(|(m, c)| (m.clone(), ParamPoly::constant(c.eval(values)))),
        )
    }
}

impl<C: Coeff> Zero for Poly<C> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for Poly<C> {
    fn one() -> Self {
        Poly::constant(C::one())
    }
}

impl<C: Coeff> Add<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl<C: Coeff> $tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$method(&rhs)
            }
        }
        impl<C: Coeff> $tr<&Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: &Poly<C>) -> Poly<C> {
                (&self).$method(rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}
