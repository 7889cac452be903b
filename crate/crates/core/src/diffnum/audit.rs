use alloc::vec::Vec;

use super::{mixed_iterated, mixed_reach};
use crate::funcs::{Function2D, Rectangle};
use crate::sampling::linspace;
use crate::{math, Axis, Point};

/// Classification of one audit node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum NodeStatus {
    Pass,
    Mismatch,
    Excluded,
}

impl NodeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeStatus::Pass => "pass",
            NodeStatus::Mismatch => "mismatch",
            NodeStatus::Excluded => "excluded",
        }
    }
}

/// Both iterated mixed estimates at one node.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AuditNode {
    pub x: f64,
    pub y: f64,
    /// `d/dy (d/dx f)`.
    pub d21: f64,
    /// `d/dx (d/dy f)`.
    pub d12: f64,
    pub delta: f64,
    pub status: NodeStatus,
}

/// Grid record of `|d21 f - d12 f|`.
///
/// Fractions are of all interior nodes, so `pass + mismatch + excluded`
/// fractions add to one. `mismatch_measure` is the mismatch count over
/// non-excluded nodes: the finite stand-in for the measure of the set where
/// the mixed partials differ. No grid certifies an almost-everywhere
/// statement; refining `nx, ny` is the convergence check.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SchwarzAuditReport {
    pub nx: usize,
    pub ny: usize,
    pub rect: Rectangle,
    pub tol: f64,
    pub pass_count: usize,
    pub mismatch_count: usize,
    pub excluded_count: usize,
    pub pass_fraction: f64,
    pub mismatch_fraction: f64,
    pub excluded_fraction: f64,
    pub mismatch_measure: f64,
    pub max_discrepancy: f64,
    /// Node attaining `max_discrepancy`; the first in `(i, j)` order on ties.
    pub argmax_point: Option<Point>,
    /// Mismatch share among non-excluded nodes of each column (fixed `x`).
    pub column_mismatch: Vec<f64>,
    /// Mismatch share among non-excluded nodes of each row (fixed `y`).
    pub row_mismatch: Vec<f64>,
    /// Per-node detail in `(i, j)` order, `x` index outermost.
    #[cfg_attr(feature = "serde", serde(skip))]
    pub nodes: Vec<AuditNode>,
}

/// Node coordinates along one axis: `n` uniform points inset from both ends
/// by the reach of an iterated mixed stencil. Even counts on a symmetric
/// interval never include its midpoint.
pub fn audit_axis(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    let inset = mixed_reach(math::abs(lo).max(math::abs(hi)));
    linspace(lo + inset, hi - inset, n)
}

/// Compares both iterated mixed partials over an `nx x ny` interior grid.
///
/// Panics if `nx < 3` or `ny < 3`.
pub fn schwarz_audit(
    f: &Function2D,
    rect: Rectangle,
    nx: usize,
    ny: usize,
    tol: f64,
) -> SchwarzAuditReport {
    assert!(nx >= 3 && ny >= 3, "audit grid needs at least 3x3 nodes");
    let xs: Vec<f64> = audit_axis(rect.a, rect.b, nx).collect();
    let ys: Vec<f64> = audit_axis(rect.c, rect.d, ny).collect();

    let mut nodes = Vec::with_capacity(nx * ny);
    for &x in &xs {
        for &y in &ys {
            let p = Point::new(x, y);
            let d21 = mixed_iterated(f, (Axis::X, Axis::Y), p);
            let d12 = mixed_iterated(f, (Axis::Y, Axis::X), p);
            let (delta, status) = if d21.excluded || d12.excluded {
                (f64::NAN, NodeStatus::Excluded)
            } else {
                let delta = math::abs(d21.value - d12.value);
                let status = if delta <= tol {
                    NodeStatus::Pass
                } else {
                    NodeStatus::Mismatch
                };
                (delta, status)
            };
            nodes.push(AuditNode {
                x,
                y,
                d21: d21.value,
                d12: d12.value,
                delta,
                status,
            });
        }
    }
    summarize(nodes, nx, ny, rect, tol)
}

fn share(mismatch: usize, counted: usize) -> f64 {
    if counted == 0 {
        0.0
    } else {
        mismatch as f64 / counted as f64
    }
}

fn summarize(
    nodes: Vec<AuditNode>,
    nx: usize,
    ny: usize,
    rect: Rectangle,
    tol: f64,
) -> SchwarzAuditReport {
    let mut counts = [0usize; 3];
    let mut col = alloc::vec![(0usize, 0usize); nx];
    let mut row = alloc::vec![(0usize, 0usize); ny];
    let mut max_discrepancy = 0.0;
    let mut argmax_point = None;
    for (idx, n) in nodes.iter().enumerate() {
        let (i, j) = (idx / ny, idx % ny);
        counts[n.status as usize] += 1;
        if n.status == NodeStatus::Excluded {
            continue;
        }
        let hit = usize::from(n.status == NodeStatus::Mismatch);
        col[i].0 += hit;
        col[i].1 += 1;
        row[j].0 += hit;
        row[j].1 += 1;
        if argmax_point.is_none() || n.delta > max_discrepancy {
            max_discrepancy = n.delta;
            argmax_point = Some(Point::new(n.x, n.y));
        }
    }
    let total = nodes.len() as f64;
    let [pass, mismatch, excluded] = counts;
    SchwarzAuditReport {
        nx,
        ny,
        rect,
        tol,
        pass_count: pass,
        mismatch_count: mismatch,
        excluded_count: excluded,
        pass_fraction: pass as f64 / total,
        mismatch_fraction: mismatch as f64 / total,
        excluded_fraction: excluded as f64 / total,
        mismatch_measure: share(mismatch, pass + mismatch),
        max_discrepancy,
        argmax_point,
        column_mismatch: col.iter().map(|&(m, c)| share(m, c)).collect(),
        row_mismatch: row.iter().map(|&(m, c)| share(m, c)).collect(),
        nodes,
    }
}
