//! Coordinate blocks, Laplacians, harmonic decomposition and sphere integrals.
//!
//! An ambient space is a list of blocks. A real block of dimension `n` has
//! coordinates `x_1..x_n`; a complex block of dimension `n` has independent
//! coordinates `z_1..z_n` and `z̄_1..z̄_n` and real dimension `2n`. In a
//! complex block the Laplacian is `4 Σ ∂²/∂z_j∂z̄_j`, so every real formula
//! applies with `n` replaced by `2n`.

use std::collections::BTreeMap;

use lightcone::scalar::{rat, ratio};
use lightcone::Rational;
use num_traits::{One, Signed, Zero};

use crate::error::OracleError;
use crate::poly::{exponent, mono_from, Coeff, Mono, MultiPoly, ParamPoly};

/// Real or complex coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Real,
    Complex,
}

/// One block of coordinates inside a [`Space`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub name: String,
    pub kind: BlockKind,
    pub dim: usize,
    pub start: usize,
}

/// Degree data of a polynomial homogeneous in one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockDegree {
    Real(u32),
    /// Degrees in the holomorphic and antiholomorphic coordinates.
    Complex(u32, u32),
}

impl BlockDegree {
    /// Total degree.
    pub fn total(&self) -> u32 {
        match *self {
            BlockDegree::Real(d) => d,
            BlockDegree::Complex(a, b) => a + b,
        }
    }

    /// Degree after dividing by `(r²)^k`.
    pub fn lowered(&self, k: u32) -> BlockDegree {
        match *self {
            BlockDegree::Real(d) => BlockDegree::Real(d - 2 * k),
            BlockDegree::Complex(a, b) => BlockDegree::Complex(a - k, b - k),
        }
    }
}

impl Block {
    /// Index of coordinate `x_i` or `z_i` (1-based).
    pub fn coord(&self, i: usize) -> usize {
        assert!(
            (1..=self.dim).contains(&i),
            "coordinate {i} out of range in block {}",
            self.name
        );
        self.start + i - 1
    }

    /// Index of `z̄_i` (1-based) in a complex block.
    pub fn conj_coord(&self, i: usize) -> usize {
        assert_eq!(self.kind, BlockKind::Complex, "real blocks have no z̄");
        self.coord(i) + self.dim
    }

    /// Holomorphic (or real) coordinates.
    pub fn holomorphic(&self) -> Vec<usize> {
        (self.start..self.start + self.dim).collect()
    }

    /// Antiholomorphic coordinates (empty for a real block).
    pub fn antiholomorphic(&self) -> Vec<usize> {
        match self.kind {
            BlockKind::Real => Vec::new(),
            BlockKind::Complex => (self.start + self.dim..self.start + 2 * self.dim).collect(),
        }
    }

    /// All variable indices of the block.
    pub fn vars(&self) -> Vec<usize> {
        let mut v = self.holomorphic();
        v.extend(self.antiholomorphic());
        v
    }

    /// Number of variables the block occupies.
    pub fn width(&self) -> usize {
        match self.kind {
            BlockKind::Real => self.dim,
            BlockKind::Complex => 2 * self.dim,
        }
    }

    /// Real dimension `n` of the underlying Euclidean space.
    pub fn real_dim(&self) -> i64 {
        self.width() as i64
    }

    pub fn contains(&self, var: usize) -> bool {
        (self.start..self.start + self.width()).contains(&var)
    }

    /// `r² = Σ x_j²` or `Σ z_j z̄_j`.
    pub fn r2(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for i in 1..=self.dim {
            let mono = match self.kind {
                BlockKind::Real => mono_from(&[(self.coord(i), 2)]),
                BlockKind::Complex => mono_from(&[(self.coord(i), 1), (self.conj_coord(i), 1)]),
            };
            out.add_term(mono, ParamPoly::one());
        }
        out
    }

    /// Monomial that leads `r²` in the division order.
    pub fn r2_lead(&self) -> Mono {
        match self.kind {
            BlockKind::Real => mono_from(&[(self.coord(1), 2)]),
            BlockKind::Complex => mono_from(&[(self.coord(1), 1), (self.conj_coord(1), 1)]),
        }
    }

    /// The Euclidean Laplacian of the block.
    pub fn laplacian(&self, p: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for i in 1..=self.dim {
            out = match self.kind {
                BlockKind::Real => {
                    let v = self.coord(i);
                    out + p.derivative(v).derivative(v)
                }
                BlockKind::Complex => {
                    let d = p.derivative(self.coord(i)).derivative(self.conj_coord(i));
                    out + d.scale_rational(&rat(4))
                }
            };
        }
        out
    }

    /// Euler operator `Σ v ∂/∂v` over the block's variables.
    pub fn euler(&self, p: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in p.terms() {
            let d: u32 = self.vars().iter().map(|&v| exponent(m, v) as u32).sum();
            out.add_term(m.clone(), c.scale_rational(&rat(d as i64)));
        }
        out
    }

    /// Degree of a single monomial in this block.
    pub fn mono_degree(&self, m: &[u16]) -> BlockDegree {
        let sum = |vs: Vec<usize>| vs.iter().map(|&v| exponent(m, v) as u32).sum::<u32>();
        match self.kind {
            BlockKind::Real => BlockDegree::Real(sum(self.holomorphic())),
            BlockKind::Complex => {
                BlockDegree::Complex(sum(self.holomorphic()), sum(self.antiholomorphic()))
            }
        }
    }

    /// The common block degree of all terms, if `p` is homogeneous in the block.
    pub fn degree(&self, p: &MultiPoly) -> Result<Option<BlockDegree>, OracleError> {
        let mut found: Option<BlockDegree> = None;
        for (m, _) in p.terms() {
            let d = self.mono_degree(m);
            match found {
                None => found = Some(d),
                Some(f) if f == d => {}
                Some(_) => {
                    return Err(OracleError::NotHomogeneous {
                        block: self.name.clone(),
                    })
                }
            }
        }
        Ok(found)
    }

    /// Splits `p` into pieces homogeneous in the block.
    pub fn split(&self, p: &MultiPoly) -> BTreeMap<BlockDegree, MultiPoly> {
        let mut out: BTreeMap<BlockDegree, MultiPoly> = BTreeMap::new();
        for (m, c) in p.terms() {
            out.entry(self.mono_degree(m))
                .or_insert_with(MultiPoly::zero)
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// True when the block Laplacian annihilates `p`.
    pub fn is_harmonic(&self, p: &MultiPoly) -> bool {
        self.laplacian(p).is_zero()
    }

    /// `P~ = P − r²ΔP / (4(deg P − 2) + 2n)`, the harmonic part of a
    /// biharmonic homogeneous `P`.
    pub fn harmonic_project(&self, p: &MultiPoly) -> Result<MultiPoly, OracleError> {
        let lap = self.laplacian(p);
        if lap.is_zero() {
            return Ok(p.clone());
        }
        if !self.laplacian(&lap).is_zero() {
            return Err(OracleError::NotBiharmonic {
                block: self.name.clone(),
            });
        }
        let deg = self.degree(p)?.map(|d| d.total()).unwrap_or(0) as i64;
        let denom = 4 * (deg - 2) + 2 * self.real_dim();
        Ok(p - &(&self.r2() * &lap).scale_rational(&ratio(1, denom)))
    }

    /// Harmonic component of a homogeneous `P` of any order:
    /// `Σ_k (−1)^k r^{2k} Δ^k P / ∏_{i<k} (2i+2)(2 deg − 2i − 4 + n)`.
    pub fn harmonic_part(&self, p: &MultiPoly) -> Result<MultiPoly, OracleError> {
        let deg = self.degree(p)?.map(|d| d.total()).unwrap_or(0) as i64;
        let n = self.real_dim();
        let r2 = self.r2();
        let mut out = p.clone();
        let mut lap_k = p.clone();
        let mut r2_k = MultiPoly::one();
        let mut denom = rat(1);
        for k in 0.. {
            lap_k = self.laplacian(&lap_k);
            if lap_k.is_zero() {
                break;
            }
            let i = k as i64;
            let factor = (2 * i + 2) * (2 * deg - 2 * i - 4 + n);
            if factor == 0 {
                return Err(OracleError::SingularProjection {
                    block: self.name.clone(),
                });
            }
            denom *= rat(factor);
            r2_k = &r2_k * &r2;
            let sign = if k % 2 == 0 { -rat(1) } else { rat(1) };
            out = out + (&r2_k * &lap_k).scale_rational(&(sign / denom.clone()));
        }
        Ok(out)
    }

    /// Exact division by `r²`.
    pub fn divide_r2(&self, p: &MultiPoly) -> Result<MultiPoly, OracleError> {
        let (q, rem) = p.divide_by_lead(&self.r2(), &self.r2_lead());
        if rem.is_zero() {
            Ok(q)
        } else {
            Err(OracleError::NotDivisible {
                block: self.name.clone(),
            })
        }
    }

    /// Decomposition `P = Σ h_i (r²)^{a_i}` with `h_i` harmonic, found by
    /// peeling off the harmonic part and dividing the rest by `r²`.
    pub fn harmonic_decompose(&self, p: &MultiPoly) -> Result<Vec<(MultiPoly, u32)>, OracleError> {
        let mut out = Vec::new();
        let mut rest = p.clone();
        let mut power = 0;
        while !rest.is_zero() {
            let h = self.harmonic_part(&rest)?;
            let remainder = &rest - &h;
            if !h.is_zero() {
                out.push((h, power));
            }
            rest = self.divide_r2(&remainder)?;
            power += 1;
        }
        Ok(out)
    }

    /// Decomposition by repeated `Δ`: the top-order harmonic is recovered
    /// first from `Δ^k P`, then subtracted. Used as an independent route.
    pub fn harmonic_decompose_top_down(
        &self,
        p: &MultiPoly,
    ) -> Result<Vec<(MultiPoly, u32)>, OracleError> {
        let deg = self.degree(p)?.map(|d| d.total()).unwrap_or(0) as i64;
        let n = self.real_dim();
        // Δ^k (r^{2k} h) = c_k h for h harmonic of degree deg − 2k.
        let coeff = |k: i64| -> Rational {
            let hd = deg - 2 * k;
            let mut c = rat(1);
            for i in 1..=k {
                // Δ(r^{2i} h) = 2i(2i − 2 + 2hd + n) r^{2i−2} h
                c *= rat(2 * i * (2 * i - 2 + 2 * hd + n));
            }
            c
        };
        let mut rest = p.clone();
        let mut out = Vec::new();
        loop {
            if rest.is_zero() {
                break;
            }
            let mut k = 0;
            let mut lap = rest.clone();
            loop {
                let next = self.laplacian(&lap);
                if next.is_zero() {
                    break;
                }
                lap = next;
                k += 1;
            }
            let c = coeff(k);
            if c.is_zero() {
                return Err(OracleError::SingularProjection {
                    block: self.name.clone(),
                });
            }
            let h = lap.scale_rational(&(rat(1) / c));
            rest = &rest - &(&self.r2().pow(k as u32) * &h);
            out.push((h, k as u32));
        }
        out.sort_by_key(|(_, k)| *k);
        Ok(out)
    }

    /// Monomials of the given real degree (or bidegree in a complex block).
    pub fn monomials(&self, degree: BlockDegree) -> Vec<Mono> {
        fn compositions(
            vars: &[usize],
            total: u32,
            acc: &mut Vec<(usize, u16)>,
            out: &mut Vec<Mono>,
        ) {
            match vars.split_first() {
                None => {
                    if total == 0 {
                        out.push(mono_from(acc));
                    }
                }
                Some((&v, rest)) => {
                    for e in (0..=total).rev() {
                        if rest.is_empty() && e != total {
                            continue;
                        }
                        acc.push((v, e as u16));
                        compositions(rest, total - e, acc, out);
                        acc.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        match (self.kind, degree) {
            (BlockKind::Real, BlockDegree::Real(d)) => {
                compositions(&self.holomorphic(), d, &mut Vec::new(), &mut out)
            }
            (BlockKind::Complex, BlockDegree::Complex(a, b)) => {
                let mut left = Vec::new();
                let mut right = Vec::new();
                compositions(&self.holomorphic(), a, &mut Vec::new(), &mut left);
                compositions(&self.antiholomorphic(), b, &mut Vec::new(), &mut right);
                for l in &left {
                    for r in &right {
                        out.push(crate::poly::mono_mul(l, r));
                    }
                }
            }
            _ => panic!("degree kind does not match block {}", self.name),
        }
        out
    }

    /// A basis of the harmonic polynomials of the given degree, obtained by
    /// projecting monomials and discarding dependent ones.
    pub fn harmonic_basis(&self, degree: BlockDegree) -> Result<Vec<MultiPoly>, OracleError> {
        let mut projected = Vec::new();
        for m in self.monomials(degree) {
            projected.push(self.harmonic_part(&MultiPoly::term(&m, ParamPoly::one()))?);
        }
        Ok(independent_subset(&projected))
    }

    /// `∫ mono` over the unit sphere of the block under the rotation-invariant
    /// probability measure (only the block's variables are read).
    pub fn sphere_moment(&self, m: &[u16]) -> Rational {
        match self.kind {
            BlockKind::Real => {
                let es: Vec<u32> = self
                    .holomorphic()
                    .iter()
                    .map(|&v| exponent(m, v) as u32)
                    .collect();
                real_sphere_moment(&es, self.dim as u32)
            }
            BlockKind::Complex => {
                let a: Vec<u32> = self
                    .holomorphic()
                    .iter()
                    .map(|&v| exponent(m, v) as u32)
                    .collect();
                let b: Vec<u32> = self
                    .antiholomorphic()
                    .iter()
                    .map(|&v| exponent(m, v) as u32)
                    .collect();
                complex_sphere_moment(&a, &b, self.dim as u32)
            }
        }
    }

    /// Formal complex conjugation: swaps `z_i` and `z̄_i`.
    pub fn conjugation(&self) -> Vec<(usize, usize)> {
        match self.kind {
            BlockKind::Real => Vec::new(),
            BlockKind::Complex => (1..=self.dim)
                .map(|i| (self.coord(i), self.conj_coord(i)))
                .collect(),
        }
    }
}

/// `∫_{S^{n−1}} x^e` under the probability measure:
/// `∏ (e_i − 1)!! / ∏_{k < |e|/2} (n + 2k)`, or zero if some `e_i` is odd.
pub fn real_sphere_moment(e: &[u32], n: u32) -> Rational {
    if e.iter().any(|x| x % 2 == 1) {
        return Rational::zero();
    }
    let mut num = rat(1);
    for &x in e {
        let mut k = x as i64 - 1;
        while k > 1 {
            num *= rat(k);
            k -= 2;
        }
    }
    let half: u32 = e.iter().sum::<u32>() / 2;
    let mut den = rat(1);
    for k in 0..half {
        den *= rat((n + 2 * k) as i64);
    }
    num / den
}

/// `∫_{S^{2n−1}} z^α z̄^β` under the probability measure:
/// `δ_{αβ} ∏ α_i! / (n(n+1)⋯(n+|α|−1))`.
pub fn complex_sphere_moment(alpha: &[u32], beta: &[u32], n: u32) -> Rational {
    if alpha != beta {
        return Rational::zero();
    }
    let mut num = rat(1);
    for &x in alpha {
        for k in 2..=x as i64 {
            num *= rat(k);
        }
    }
    let total: u32 = alpha.iter().sum();
    let mut den = rat(1);
    for k in 0..total {
        den *= rat((n + k) as i64);
    }
    num / den
}

/// An ambient coordinate space made of blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    blocks: Vec<Block>,
}

impl Space {
    /// Builds a space from `(name, kind, dim)` triples laid out in order.
    pub fn new(layout: &[(&str, BlockKind, usize)]) -> Self {
        let mut start = 0;
        let mut blocks = Vec::new();
        for &(name, kind, dim) in layout {
            let b = Block {
                name: name.to_string(),
                kind,
                dim,
                start,
            };
            start += b.width();
            blocks.push(b);
        }
        Space { blocks }
    }

    /// Real coordinates `x ∈ ℝ^p`, `y ∈ ℝ^q`.
    pub fn real_pair(p: usize, q: usize) -> Self {
        Self::new(&[("x", BlockKind::Real, p), ("y", BlockKind::Real, q)])
    }

    /// Complex coordinates `z ∈ ℂ^p`, `w ∈ ℂ^q`.
    pub fn complex_pair(p: usize, q: usize) -> Self {
        Self::new(&[("z", BlockKind::Complex, p), ("w", BlockKind::Complex, q)])
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Block by position.
    pub fn block(&self, i: usize) -> &Block {
        &self.blocks[i]
    }

    /// Total number of variables.
    pub fn nvars(&self) -> usize {
        self.blocks.iter().map(Block::width).sum()
    }

    /// Display name of a variable.
    pub fn var_name(&self, v: usize) -> String {
        for b in &self.blocks {
            if b.contains(v) {
                let off = v - b.start;
                return if off < b.dim {
                    format!("{}{}", b.name, off + 1)
                } else {
                    format!("{}b{}", b.name, off - b.dim + 1)
                };
            }
        }
        format!("v{v}")
    }

    /// Renders a polynomial with this space's variable names.
    pub fn render(&self, p: &MultiPoly) -> String {
        p.render_with(&|v| self.var_name(v))
    }

    /// The variable `x_i`/`z_i` of block `b` as a polynomial.
    pub fn coord(&self, b: usize, i: usize) -> MultiPoly {
        MultiPoly::var(self.blocks[b].coord(i))
    }

    /// The variable `z̄_i` of block `b` as a polynomial.
    pub fn conj_coord(&self, b: usize, i: usize) -> MultiPoly {
        MultiPoly::var(self.blocks[b].conj_coord(i))
    }

    /// Formal complex conjugation of every complex block; coefficients are
    /// treated as real.
    pub fn conjugate(&self, p: &MultiPoly) -> MultiPoly {
        let mut perm: Vec<usize> = (0..self.nvars()).collect();
        for b in &self.blocks {
            for (u, v) in b.conjugation() {
                perm[u] = v;
                perm[v] = u;
            }
        }
        p.permute_vars(&perm)
    }

    /// `∫ p` over the product of the blocks' unit spheres.
    pub fn sphere_integral(&self, p: &MultiPoly) -> ParamPoly {
        let mut total = ParamPoly::zero();
        for (m, c) in p.terms() {
            let mut w = rat(1);
            for b in &self.blocks {
                w *= b.sphere_moment(m);
                if w.is_zero() {
                    break;
                }
            }
            total = total + c.scale_rational(&w);
        }
        total
    }

    /// `⟨f, g⟩ = ∫ f ḡ` over the product of unit spheres.
    pub fn inner_product(&self, f: &MultiPoly, g: &MultiPoly) -> ParamPoly {
        self.sphere_integral(&(f * &self.conjugate(g)))
    }
}

/// Rank of a rational matrix by Gaussian elimination.
#[allow(clippy::needless_range_loop)]
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for k in c..cols {
                    let sub = &m[r][k] * &f;
                    m[i][k] -= sub;
                }
            }
        }
        r += 1;
    }
    r
}

fn coefficient_rows(polys: &[MultiPoly]) -> Vec<Vec<Rational>> {
    let mut index: BTreeMap<Mono, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let n = index.len();
            index.entry(m.clone()).or_insert(n);
        }
    }
    polys
        .iter()
        .map(|p| {
            let mut row = vec![Rational::zero(); index.len()];
            for (m, c) in p.terms() {
                row[index[m]] = c
                    .as_rational()
                    .expect("linear algebra needs rational coefficients");
            }
            row
        })
        .collect()
}

/// Dimension of the span of polynomials with rational coefficients.
pub fn span_dimension(polys: &[MultiPoly]) -> usize {
    rank(&coefficient_rows(polys))
}

/// A maximal linearly independent subfamily, kept in input order.
pub fn independent_subset(polys: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut chosen: Vec<MultiPoly> = Vec::new();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(p.clone());
        if span_dimension(&trial) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

/// `dim ker Δ` on homogeneous polynomials of degree `m` in `ℝ^p`, computed
/// as the corank of the Laplacian matrix over ℚ.
pub fn laplacian_kernel_dim(p: usize, m: u32) -> usize {
    let space = Space::new(&[("x", BlockKind::Real, p)]);
    let b = space.block(0);
    let source = b.monomials(BlockDegree::Real(m));
    let images: Vec<MultiPoly> = source
        .iter()
        .map(|mono| b.laplacian(&MultiPoly::term(mono, ParamPoly::one())))
        .collect();
    source.len() - span_dimension(&images)
}

/// Gram matrix `G_ij = ⟨f_i, f_j⟩` (rational coefficients required).
pub fn gram_matrix(space: &Space, basis: &[MultiPoly]) -> Vec<Vec<Rational>> {
    basis
        .iter()
        .map(|f| {
            basis
                .iter()
                .map(|g| {
                    space
                        .inner_product(f, g)
                        .as_rational()
                        .expect("Gram entries must be rational")
                })
                .collect()
        })
        .collect()
}

/// Positive definiteness of a symmetric rational matrix via the pivots of
/// an `LDLᵀ` factorization without pivoting.
#[allow(clippy::needless_range_loop)]
pub fn is_positive_definite(g: &[Vec<Rational>]) -> bool {
    let n = g.len();
    let mut a: Vec<Vec<Rational>> = g.to_vec();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if !pivot.is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let sub = &a[k][j] * &f;
                a[i][j] -= sub;
            }
        }
    }
    true
}
