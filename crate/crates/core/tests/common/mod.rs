//! Shared constructors and independent reference computations for the
//! integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lightcone::scalar::{rat, ratio, Rational};
use lightcone::transitions::{directions, step};
use lightcone::*;
use num_traits::Zero;

pub fn ctx(family: Family, p: u32, q: u32) -> GroupContext {
    GroupContext::new(family, p, q).unwrap()
}

pub fn int(n: i64) -> ExactScalar {
    ExactScalar::int(n)
}

pub fn frac(n: i64, d: i64) -> ExactScalar {
    ExactScalar::rational(ratio(n, d))
}

pub fn o_param(a: ExactScalar, summand: Summand) -> SpectralParam {
    SpectralParam::O { a, summand }
}

pub fn u_param(alpha: i64, beta: i64) -> SpectralParam {
    SpectralParam::U {
        alpha: int(alpha),
        beta: int(beta),
    }
}

pub fn sp_param(a: i64, j: u32) -> SpectralParam {
    SpectralParam::Sp { a: int(a), j }
}

/// Reference transition coefficient, written directly from the orthogonal
/// shadow formulas with the chain and signed-lattice foldings.
pub fn reference_coeff(
    c: &GroupContext,
    sp: &SpectralParam,
    pt: KPoint,
    dir: Direction,
) -> Option<Rational> {
    let a = sp.shadow_a().as_rational()?.clone();
    let (pp, qq) = c.o_signature();
    let (m, n) = (rat(pt.m), rat(pt.n));
    if c.family == Family::O && c.q == 1 {
        return match (dir.dm, dir.dn) {
            (1, 1) => Some(a - m),
            (-1, -1) => Some(a + m + rat(pp - 2)),
            _ => None,
        };
    }
    if c.family == Family::U && c.q == 1 {
        // O(2p, 2) coefficient at (m, |n|) with the n-step reflected for n < 0.
        let sign = if pt.n < 0 { -1 } else { 1 };
        let folded = Direction {
            dm: dir.dm,
            dn: dir.dn * sign,
        };
        let o = GroupContext::new(Family::O, 2 * c.p, 2).unwrap();
        let osp = SpectralParam::O {
            a: ExactScalar::rational(a),
            summand: Summand::Both,
        };
        return reference_coeff(&o, &osp, KPoint::new(pt.m, pt.n.abs()), folded);
    }
    Some(match (dir.dm, dir.dn) {
        (1, 1) => a - m - n,
        (1, -1) => a - m + n + rat(qq - 2),
        (-1, 1) => a + m - n + rat(pp - 2),
        _ => a + m + n + rat(pp + qq - 4),
    })
}

/// Reference constituent partition: mutual reachability by transitive
/// closure over nonzero reference coefficients, independent of the graph
/// library used by the engine.
#[allow(clippy::needless_range_loop)]
pub fn reference_partition(
    c: &GroupContext,
    sp: &SpectralParam,
    points: &[KPoint],
) -> BTreeSet<BTreeSet<KPoint>> {
    let index: BTreeMap<KPoint, usize> =
        points.iter().enumerate().map(|(k, &pt)| (pt, k)).collect();
    let n = points.len();
    let mut reach = vec![vec![false; n]; n];
    for (k, &pt) in points.iter().enumerate() {
        reach[k][k] = true;
        for &dir in directions(c) {
            let target = step(c, pt, dir);
            if let Some(&t) = index.get(&target) {
                let value = match sp.shadow_a().as_rational() {
                    Some(_) => !reference_coeff(c, sp, pt, dir).unwrap().is_zero(),
                    None => !transition_coeff(c, sp, pt, dir).unwrap().is_zero(),
                };
                if value {
                    reach[k][t] = true;
                }
            }
        }
    }
    for mid in 0..n {
        for i in 0..n {
            if reach[i][mid] {
                for j in 0..n {
                    if reach[mid][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut parts = BTreeSet::new();
    for i in 0..n {
        let part: BTreeSet<KPoint> = (0..n)
            .filter(|&j| reach[i][j] && reach[j][i])
            .map(|j| points[j])
            .collect();
        parts.insert(part);
    }
    parts
}

/// Constituent point sets of a diagram as a set of sets.
pub fn partition_of(d: &CompositionDiagram) -> BTreeSet<BTreeSet<KPoint>> {
    d.constituents
        .iter()
        .map(|c| c.points.iter().copied().collect())
        .collect()
}

/// `(submodule count, quotient count, total)` for the constituents of one summand.
pub fn shape(d: &CompositionDiagram, ids: &[usize]) -> (usize, usize, usize) {
    let subs = d
        .submodules()
        .into_iter()
        .filter(|c| ids.contains(c))
        .count();
    let quots = d
        .quotients()
        .into_iter()
        .filter(|c| ids.contains(c))
        .count();
    (subs, quots, ids.len())
}
