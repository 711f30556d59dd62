//! The growth process: faces are added one at a time in a [`GrowthOrder`]
//! and three hitting times are tracked.
//!
//! * `m1`: no `(k - 1)`-face is isolated (per-face degree counters),
//! * `m2`: the `(k - 1)`-faces form one hypergraph component (union-find),
//! * `m3`: `beta^{k-1}` vanishes, i.e. the boundary columns of the present
//!   faces span a space of dimension `C(n, k) - rank_complete_lower(n, k)`
//!   (incremental [`ColumnBasis`]).
//!
//! For `k = 1` the reduced convention makes `m3` the connectivity time, so
//! `m2 == m3` there.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cohomology::rank_complete_lower;
use crate::complex::{binomial, boundary_ranks_into, unrank_into, GrowthOrder};
use crate::connectivity::UnionFind;
use crate::error::{invalid, Result};
use crate::gf2::ColumnBasis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HittingTimes {
    pub m1: usize,
    pub m2: usize,
    pub m3: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceFlags {
    pub eq12: bool,
    pub eq123: bool,
}

pub fn coincidence_flags(h: &HittingTimes) -> CoincidenceFlags {
    CoincidenceFlags {
        eq12: h.m1 == h.m2,
        eq123: h.m1 == h.m2 && h.m2 == h.m3,
    }
}

/// State after `m` insertions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub m: usize,
    pub isolated_count: usize,
    pub num_components: usize,
    pub rank: usize,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ProcessOptions {
    /// Stop inserting once `m3` is known.
    pub early_exit: bool,
    pub trace: bool,
}

#[derive(Clone, Debug)]
pub struct ProcessRun {
    pub times: HittingTimes,
    /// Number of faces inserted before stopping.
    pub inserted: usize,
    pub trace: Option<Vec<TraceRow>>,
}

/// Runs the whole order with early exit at `m3`.
pub fn run_hitting_times(order: &GrowthOrder) -> Result<HittingTimes> {
    Ok(run_process(
        order,
        ProcessOptions {
            early_exit: true,
            trace: false,
        },
    )?
    .times)
}

pub fn run_process(order: &GrowthOrder, opts: ProcessOptions) -> Result<ProcessRun> {
    let (n, k) = (order.n(), order.k());
    let total = binomial(n, k + 1);
    if order.len() != total {
        return invalid(format!("growth order has {} faces, expected {total}", order.len()));
    }
    let lower = binomial(n, k);
    let target_rank = lower - rank_complete_lower(n, k);

    let mut degree = vec![0u32; lower];
    let mut isolated = lower;
    let mut uf = UnionFind::new(lower);
    let mut basis = ColumnBasis::new(lower);

    let (mut m1, mut m2, mut m3) = (None, None, None);
    let mut trace = opts.trace.then(Vec::new);
    let mut vs = vec![0; k + 1];
    let mut bd = vec![0; k + 1];
    let mut inserted = 0;

    for (i, face) in order.order().iter().enumerate() {
        let m = i + 1;
        if face.0 >= total {
            return invalid(format!("face rank {} out of range", face.0));
        }
        unrank_into(face.0, n, &mut vs);
        boundary_ranks_into(&vs, &mut bd);
        for &r in &bd {
            if degree[r] == 0 {
                isolated -= 1;
            }
            degree[r] += 1;
        }
        for &r in &bd[1..] {
            uf.union(bd[0], r);
        }
        if m3.is_none() {
            basis.insert_sparse(&bd)?;
        }
        inserted = m;

        if m1.is_none() && isolated == 0 {
            m1 = Some(m);
        }
        if m2.is_none() && uf.num_sets() == 1 {
            m2 = Some(m);
        }
        if m3.is_none() && basis.rank() == target_rank {
            m3 = Some(m);
        }
        if let Some(t) = trace.as_mut() {
            t.push(TraceRow {
                m,
                isolated_count: isolated,
                num_components: uf.num_sets(),
                rank: basis.rank(),
            });
        }
        if opts.early_exit && m3.is_some() {
            break;
        }
    }

    match (m1, m2, m3) {
        (Some(m1), Some(m2), Some(m3)) => Ok(ProcessRun {
            times: HittingTimes { m1, m2, m3 },
            inserted,
            trace,
        }),
        // the complete complex is connected and acyclic, so a full order
        // always reaches all three
        _ => unreachable!("complete complex must satisfy all three conditions"),
    }
}

pub fn write_trace_csv<W: Write>(rows: &[TraceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "isolated_count", "num_components", "rank"])?;
    for r in rows {
        w.serialize((r.m, r.isolated_count, r.num_components, r.rank))?;
    }
    w.flush()?;
    Ok(())
}
