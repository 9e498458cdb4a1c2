//! Constituents and submodule order from the transition graph.
//!
//! Constituents are the strongly connected components of the digraph whose
//! arcs are nonzero transitions between region points. One constituent lies
//! below another when the second reaches the first.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use thiserror::Error;

use crate::lattice::{
    fiber_enumerate, ktype_dimension, region_contains, Dimension, GroupContext, KPoint,
    LatticeError, SpectralParam, Summand,
};
use crate::transitions::{barrier_line, edges_from, Direction, TransitionError};

/// Errors raised by the structure engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Transition(#[from] TransitionError),
    #[error("summand must be plus or minus for this query")]
    AmbiguousSummand,
    #[error("window of extent {0} does not stabilize")]
    WindowTooSmall(i64),
    #[error("parameter {0} is not an integer")]
    NotInteger(String),
    #[error("query requires the orthogonal family")]
    NotOrthogonal,
}

/// Truncation of the lattice to `0 ≤ m ≤ W` and `|n| ≤ W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub extent: i64,
}

/// Number of K-types in a constituent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Count {
    Finite(usize),
    Infinite,
}

/// One irreducible constituent, truncated to the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituent {
    pub id: usize,
    /// Orthogonal summand the constituent lives in.
    pub summand: Option<Summand>,
    /// Base points in the window, sorted.
    pub points: Vec<KPoint>,
    pub boundary_open: bool,
    pub ktype_count: Count,
    pub total_dimension: Dimension,
}

impl Constituent {
    /// Lexicographically minimal base point.
    pub fn min_point(&self) -> KPoint {
        self.points[0]
    }

    /// True when every point lies on one line parallel to a lattice diagonal
    /// or axis, i.e. the K-types form a single ladder.
    pub fn is_single_line(&self) -> bool {
        if self.points.len() < 2 {
            return false;
        }
        let first = self.points[0];
        let same = |f: &dyn Fn(KPoint) -> i64| self.points.iter().all(|&pt| f(pt) == f(first));
        same(&|pt| pt.m - pt.n) || same(&|pt| pt.m + pt.n) || same(&|pt| pt.n)
    }
}

/// Constituents with the submodule order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionDiagram {
    pub ctx: GroupContext,
    pub param: SpectralParam,
    pub window: Window,
    pub constituents: Vec<Constituent>,
    /// Strict order: `(lower, upper)` when `lower` lies in the submodule generated by `upper`.
    pub order: BTreeSet<(usize, usize)>,
    /// Covering relations of `order`.
    pub covers: Vec<(usize, usize)>,
}

impl CompositionDiagram {
    /// Number of constituents.
    pub fn len(&self) -> usize {
        self.constituents.len()
    }

    /// True when there are no constituents.
    pub fn is_empty(&self) -> bool {
        self.constituents.is_empty()
    }

    /// `lower < upper` in the submodule order.
    pub fn below(&self, lower: usize, upper: usize) -> bool {
        self.order.contains(&(lower, upper))
    }

    /// Minimal constituents (irreducible submodules).
    pub fn submodules(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| !self.order.iter().any(|&(_, u)| u == c))
            .collect()
    }

    /// Maximal constituents (irreducible quotients).
    pub fn quotients(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| !self.order.iter().any(|&(l, _)| l == c))
            .collect()
    }

    /// Constituents of one orthogonal summand.
    pub fn of_summand(&self, s: Summand) -> Vec<usize> {
        self.constituents
            .iter()
            .filter(|c| c.summand == Some(s))
            .map(|c| c.id)
            .collect()
    }

    /// Constituent holding a base point.
    pub fn constituent_of(&self, pt: KPoint) -> Option<usize> {
        self.constituents
            .iter()
            .find(|c| c.points.binary_search(&pt).is_ok())
            .map(|c| c.id)
    }

    /// Finite constituents.
    pub fn finite(&self) -> Vec<usize> {
        self.constituents
            .iter()
            .filter(|c| !c.boundary_open)
            .map(|c| c.id)
            .collect()
    }
}

/// Default window: `|a| + 2(P+Q) + 4` on the orthogonal shadow, widened by
/// `|α−β|` and `j`, whose barriers and region corners move with them.
pub fn default_window(ctx: &GroupContext, sp: &SpectralParam) -> Window {
    let (pp, qq) = ctx.o_signature();
    let a = sp.shadow_a().abs_re_ceil();
    let extra = sp.weight_difference().abs() + sp.j();
    Window {
        extent: a + 2 * (pp + qq) + 4 + extra,
    }
}

/// Region points inside a window.
pub fn window_points(ctx: &GroupContext, sp: &SpectralParam, w: Window) -> Vec<KPoint> {
    let n_lo = if ctx.has_signed_n() { -w.extent } else { 0 };
    let n_hi = if ctx.is_chain() { 0 } else { w.extent };
    let mut pts = Vec::new();
    for m in 0..=w.extent {
        for n in n_lo..=n_hi {
            let pt = KPoint::new(m, n);
            if region_contains(ctx, sp, pt) {
                pts.push(pt);
            }
        }
    }
    pts
}

fn on_boundary(ctx: &GroupContext, w: Window, pt: KPoint) -> bool {
    pt.m == w.extent || (!ctx.is_chain() && pt.n.abs() == w.extent)
}

fn transitive_reduction(n: usize, order: &BTreeSet<(usize, usize)>) -> Vec<(usize, usize)> {
    let mut covers = Vec::new();
    for &(l, u) in order {
        let skipped = (0..n).any(|k| order.contains(&(l, k)) && order.contains(&(k, u)));
        if !skipped {
            covers.push((l, u));
        }
    }
    covers
}

/// Diagram for one summand (or one U/Sp module) without any stability check.
fn raw_single(
    ctx: &GroupContext,
    sp: &SpectralParam,
    w: Window,
) -> Result<CompositionDiagram, StructureError> {
    let pts = window_points(ctx, sp, w);
    let index: HashMap<KPoint, usize> = pts.iter().enumerate().map(|(k, &pt)| (pt, k)).collect();
    let mut graph = DiGraph::<(), ()>::with_capacity(pts.len(), 4 * pts.len());
    let nodes: Vec<_> = pts.iter().map(|_| graph.add_node(())).collect();
    for (k, &pt) in pts.iter().enumerate() {
        for e in edges_from(ctx, sp, pt)? {
            if e.coeff.is_zero() {
                continue;
            }
            if let Some(&t) = index.get(&e.target) {
                graph.add_edge(nodes[k], nodes[t], ());
            }
        }
    }
    let sccs = kosaraju_scc(&graph);
    let mut comp_of = vec![0usize; pts.len()];
    let mut groups: Vec<Vec<KPoint>> = Vec::with_capacity(sccs.len());
    for comp in &sccs {
        let mut members: Vec<KPoint> = comp.iter().map(|nx| pts[nx.index()]).collect();
        members.sort();
        groups.push(members);
    }
    let mut perm: Vec<usize> = (0..groups.len()).collect();
    perm.sort_by_key(|&g| groups[g][0]);
    let mut rank = vec![0usize; groups.len()];
    for (r, &g) in perm.iter().enumerate() {
        rank[g] = r;
    }
    for (g, comp) in sccs.iter().enumerate() {
        for nx in comp {
            comp_of[nx.index()] = rank[g];
        }
    }
    let nc = groups.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nc];
    for edge in graph.raw_edges() {
        let (s, t) = (
            comp_of[edge.source().index()],
            comp_of[edge.target().index()],
        );
        if s != t {
            succ[s].insert(t);
        }
    }
    let mut order = BTreeSet::new();
    for start in 0..nc {
        let mut stack: Vec<usize> = succ[start].iter().copied().collect();
        let mut seen = BTreeSet::new();
        while let Some(c) = stack.pop() {
            if seen.insert(c) {
                order.insert((c, start));
                stack.extend(succ[c].iter().copied());
            }
        }
    }
    let summand = sp.summand();
    let constituents = perm
        .iter()
        .enumerate()
        .map(|(id, &g)| build_constituent(ctx, sp, w, id, summand, groups[g].clone()))
        .collect();
    let covers = transitive_reduction(nc, &order);
    Ok(CompositionDiagram {
        ctx: *ctx,
        param: sp.clone(),
        window: w,
        constituents,
        order,
        covers,
    })
}

fn build_constituent(
    ctx: &GroupContext,
    sp: &SpectralParam,
    w: Window,
    id: usize,
    summand: Option<Summand>,
    points: Vec<KPoint>,
) -> Constituent {
    let boundary_open = points.iter().any(|&pt| on_boundary(ctx, w, pt));
    let (ktype_count, total_dimension) = if boundary_open {
        (Count::Infinite, Dimension::Infinite)
    } else {
        let mut count = 0usize;
        let mut dim = Some(0u128);
        for &pt in &points {
            for f in fiber_enumerate(ctx, sp, pt) {
                count += 1;
                dim = match (dim, ktype_dimension(ctx, pt, &f)) {
                    (Some(acc), Dimension::Finite(d)) => Some(acc + d),
                    _ => None,
                };
            }
        }
        (
            Count::Finite(count),
            dim.map_or(Dimension::Unknown, Dimension::Finite),
        )
    };
    Constituent {
        id,
        summand,
        points,
        boundary_open,
        ktype_count,
        total_dimension,
    }
}

/// Diagram on a fixed window, merging both orthogonal summands when asked.
fn raw(
    ctx: &GroupContext,
    sp: &SpectralParam,
    w: Window,
) -> Result<CompositionDiagram, StructureError> {
    sp.validate(ctx)?;
    if sp.summand() != Some(Summand::Both) {
        return raw_single(ctx, sp, w);
    }
    let plus = raw_single(ctx, &sp.with_summand(Summand::Plus), w)?;
    let minus = raw_single(ctx, &sp.with_summand(Summand::Minus), w)?;
    let offset = plus.len();
    let mut constituents = plus.constituents;
    constituents.extend(minus.constituents.into_iter().map(|mut c| {
        c.id += offset;
        c
    }));
    let mut order = plus.order;
    order.extend(minus.order.iter().map(|&(l, u)| (l + offset, u + offset)));
    let mut covers = plus.covers;
    covers.extend(minus.covers.iter().map(|&(l, u)| (l + offset, u + offset)));
    Ok(CompositionDiagram {
        ctx: *ctx,
        param: sp.clone(),
        window: w,
        constituents,
        order,
        covers,
    })
}

/// Window-independent shape: finite point sets, infinite constituents by
/// their minimal point, and the order.
type Signature = (
    Vec<(Option<Summand>, KPoint, Option<Vec<KPoint>>)>,
    BTreeSet<(usize, usize)>,
);

fn signature(d: &CompositionDiagram) -> Signature {
    let cs = d
        .constituents
        .iter()
        .map(|c| {
            (
                c.summand,
                c.min_point(),
                if c.boundary_open {
                    None
                } else {
                    Some(c.points.clone())
                },
            )
        })
        .collect();
    (cs, d.order.clone())
}

/// True iff the diagram at extents `W` and `W + 2` agree.
pub fn stabilization_check(ctx: &GroupContext, sp: &SpectralParam, w: Window) -> bool {
    match (
        raw(ctx, sp, w),
        raw(
            ctx,
            sp,
            Window {
                extent: w.extent + 2,
            },
        ),
    ) {
        (Ok(a), Ok(b)) => signature(&a) == signature(&b),
        _ => false,
    }
}

/// Constituents and order on a window that must pass the stability check.
pub fn compute_constituents(
    ctx: &GroupContext,
    sp: &SpectralParam,
    w: Window,
) -> Result<CompositionDiagram, StructureError> {
    let d = raw(ctx, sp, w)?;
    let wider = raw(
        ctx,
        sp,
        Window {
            extent: w.extent + 2,
        },
    )?;
    if signature(&d) != signature(&wider) {
        return Err(StructureError::WindowTooSmall(w.extent));
    }
    Ok(d)
}

/// Constituents on the default window, widened until it stabilizes.
pub fn analyze(
    ctx: &GroupContext,
    sp: &SpectralParam,
) -> Result<CompositionDiagram, StructureError> {
    let mut w = default_window(ctx, sp);
    for _ in 0..4 {
        match compute_constituents(ctx, sp, w) {
            Err(StructureError::WindowTooSmall(_)) => w.extent *= 2,
            other => return other,
        }
    }
    compute_constituents(ctx, sp, w)
}

/// True iff the module has a single constituent.
pub fn is_irreducible(ctx: &GroupContext, sp: &SpectralParam) -> Result<bool, StructureError> {
    if sp.summand() == Some(Summand::Both) {
        return Err(StructureError::AmbiguousSummand);
    }
    Ok(analyze(ctx, sp)?.len() == 1)
}

/// Finite-dimensionality and dimension of one constituent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstituentClass {
    pub finite_dim: bool,
    pub dimension: Dimension,
}

/// Classifies a constituent produced by [`compute_constituents`].
pub fn classify_constituent(c: &Constituent) -> ConstituentClass {
    ConstituentClass {
        finite_dim: !c.boundary_open,
        dimension: c.total_dimension,
    }
}

/// Parity summand whose K-types meet the barrier of `dir`, if any.
///
/// For the one-dimensional chain both summands carry the same K-types, so a
/// barrier meeting the chain affects both.
pub fn affected_summand(
    ctx: &GroupContext,
    sp: &SpectralParam,
    dir: Direction,
) -> Result<Option<Summand>, StructureError> {
    if ctx.family != crate::lattice::Family::O {
        return Err(StructureError::NotOrthogonal);
    }
    let a = sp.shadow_a();
    if !a.is_integer() {
        return Err(StructureError::NotInteger(a.to_string()));
    }
    let line = barrier_line(ctx, sp, dir)?;
    let c = line.form.constant.as_integer().expect("integer parameter");
    let all = sp.with_summand(Summand::Both);
    let bound = c.abs() + 2;
    for m in 0..=bound {
        let ns: Vec<i64> = if ctx.is_chain() {
            vec![0]
        } else {
            (0..=bound + m).collect()
        };
        for n in ns {
            let pt = KPoint::new(m, n);
            if region_contains(ctx, &all, pt) && line.form.eval(pt).is_zero() {
                if ctx.is_chain() {
                    return Ok(Some(Summand::Both));
                }
                return Ok(Some(if (m + n).is_even() {
                    Summand::Plus
                } else {
                    Summand::Minus
                }));
            }
        }
    }
    Ok(None)
}

/// Constituent point sets keyed by minimal point, for comparisons.
pub fn point_sets(d: &CompositionDiagram) -> BTreeMap<KPoint, Vec<KPoint>> {
    d.constituents
        .iter()
        .map(|c| (c.min_point(), c.points.clone()))
        .collect()
}
