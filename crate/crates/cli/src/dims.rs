//! K-types over a range of base points.

use std::fmt::Write as _;

use lightcone::{
    fiber_enumerate, ktype_dimension, region_contains, GroupContext, KPoint, SpectralParam,
};
use serde::Serialize;

/// K-types over one base point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseRow {
    pub base: [i64; 2],
    pub ktypes: Vec<KTypeRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KTypeRow {
    pub fiber: String,
    pub dimension: String,
}

/// Rows for base points with `m ≤ max` and `|n| ≤ max` in the region.
pub fn table(ctx: &GroupContext, sp: &SpectralParam, max: i64) -> Vec<BaseRow> {
    let n_lo = if ctx.has_signed_n() { -max } else { 0 };
    let n_hi = if ctx.is_chain() { 0 } else { max };
    let mut out = Vec::new();
    for m in 0..=max {
        for n in n_lo..=n_hi {
            let pt = KPoint::new(m, n);
            if !region_contains(ctx, sp, pt) {
                continue;
            }
            let ktypes: Vec<KTypeRow> = fiber_enumerate(ctx, sp, pt)
                .iter()
                .map(|f| KTypeRow {
                    fiber: f.to_string(),
                    dimension: ktype_dimension(ctx, pt, f).to_string(),
                })
                .collect();
            out.push(BaseRow {
                base: [m, n],
                ktypes,
            });
        }
    }
    out
}

/// One line per K-type.
pub fn to_text(rows: &[BaseRow]) -> String {
    let mut s = String::new();
    for r in rows {
        for k in &r.ktypes {
            let _ = writeln!(
                s,
                "({},{}) {} dim={}",
                r.base[0], r.base[1], k.fiber, k.dimension
            );
        }
    }
    s
}
