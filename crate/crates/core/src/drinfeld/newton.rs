//! Newton polygons for `sum c_k x^k` over a non-archimedean field, in
//! magnitude form: points are `(k, log|c_k|)` and a segment of slope `s`
//! (computed on `(k, -log|c_k|)`) accounts for roots with `log|xi| = s`.

use crate::rational::{int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub from: u64,
    pub to: u64,
    /// `log |xi|` of the `to - from` roots on this segment.
    pub root_log: Rat,
}

/// Lower convex hull of `(k, -log|c_k|)`. Terms with `c_k = 0` are passed as
/// `None` and skipped.
pub fn segments(points: &[(u64, Option<Rat>)]) -> Vec<Segment> {
    let pts: Vec<(u64, Rat)> = points
        .iter()
        .filter_map(|(k, l)| l.as_ref().map(|l| (*k, -l.clone())))
        .collect();
    let mut hull: Vec<(u64, Rat)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            // drop b if it lies on or above the chord a..p
            let lhs = (&b.1 - &a.1) * int((p.0 - a.0) as i64);
            let rhs = (&p.1 - &a.1) * int((b.0 - a.0) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2)
        .map(|w| Segment {
            from: w[0].0,
            to: w[1].0,
            root_log: (&w[1].1 - &w[0].1) / int((w[1].0 - w[0].0) as i64),
        })
        .collect()
}

/// Largest `log |xi|` among roots; `None` when there are no nonzero roots.
pub fn max_root_log(points: &[(u64, Option<Rat>)]) -> Option<Rat> {
    segments(points).last().map(|s| s.root_log.clone())
}
