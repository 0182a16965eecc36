//! Decode planning.

use serde::{Deserialize, Serialize};

use super::config::{Cell, StairConfig};
use super::schedule::{Line, Planner, Schedule};
use crate::error::{Error, Result};
use crate::mds::GenMatrix;

/// How a decode schedule is planned.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Row-local repair first, then the global pass over what remains.
    #[default]
    Practical,
    /// The global pass alone, from left to right and bottom to top.
    Upstairs,
    /// Repeatedly solve any line with enough known cells.
    Peeling,
}

pub(crate) fn plan(
    cfg: &StairConfig,
    row: &GenMatrix,
    col: Option<&GenMatrix>,
    lost: &[Cell],
    strategy: Strategy,
) -> Result<Schedule> {
    match strategy {
        Strategy::Practical => plan_structured(cfg, row, col, lost, true),
        Strategy::Upstairs => plan_structured(cfg, row, col, lost, false),
        Strategy::Peeling => plan_peeling(cfg, row, col, lost),
    }
}

fn plan_structured(
    cfg: &StairConfig,
    row: &GenMatrix,
    col: Option<&GenMatrix>,
    lost: &[Cell],
    local_first: bool,
) -> Result<Schedule> {
    let (n, r, m) = (cfg.n(), cfg.r(), cfg.m());
    let mut p = Planner::new(cfg, row, col);
    p.forget(lost);

    if local_first {
        for i in 0..r {
            let missing = p.unknown_in(Line::Row(i), n);
            if !missing.is_empty() && missing.len() <= m {
                p.solve(Line::Row(i), missing, n)?;
            }
        }
    }

    let mut damaged: Vec<(usize, usize)> = (0..n)
        .map(|j| (j, p.unknown_in(Line::Col(j), r).len()))
        .filter(|&(_, c)| c > 0)
        .collect();
    // the m worst chunks (ties: highest index) are left to the row pass
    damaged.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
    let deferred: Vec<usize> = damaged.iter().take(m).map(|&(j, _)| j).collect();
    let mut sector: Vec<(usize, usize)> = damaged.into_iter().skip(m).collect();
    sector.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));

    if let Some(&(_, need)) = sector.last() {
        if need > cfg.e_max() {
            return Err(Error::Unrecoverable(format!(
                "a chunk lost {need} sectors beyond the {} the column code covers",
                cfg.e_max()
            )));
        }
        let virt = |h: usize, j: usize| Cell::new(r + h, j);
        for j in 0..n {
            if deferred.contains(&j) || sector.iter().any(|&(q, _)| q == j) {
                continue;
            }
            let outputs: Vec<Cell> = (0..need).map(|h| virt(h, j)).filter(|&c| !p.is_known(c)).collect();
            p.solve(Line::Col(j), outputs, p.rows())?;
        }
        let mut rows_done = 0;
        for (k, &(q, c)) in sector.iter().enumerate() {
            for h in rows_done..c {
                let outputs: Vec<Cell> =
                    sector[k..].iter().map(|&(qj, _)| virt(h, qj)).filter(|&c| !p.is_known(c)).collect();
                p.solve(Line::Row(r + h), outputs, p.cols())?;
            }
            rows_done = rows_done.max(c);
            let mut outputs = p.unknown_in(Line::Col(q), r);
            outputs.extend((c..need).map(|h| virt(h, q)).filter(|&c| !p.is_known(c)));
            p.solve(Line::Col(q), outputs, p.rows())?;
        }
    }

    for i in 0..r {
        let missing = p.unknown_in(Line::Row(i), n);
        p.solve(Line::Row(i), missing, n)?;
    }
    Ok(p.finish())
}

fn plan_peeling(cfg: &StairConfig, row: &GenMatrix, col: Option<&GenMatrix>, lost: &[Cell]) -> Result<Schedule> {
    let mut p = Planner::new(cfg, row, col);
    p.forget(lost);
    let row_k = row.kappa();
    let col_k = col.map(GenMatrix::kappa);
    let pending = |p: &Planner| lost.iter().any(|&c| !p.is_known(c));
    while pending(&p) {
        let mut progress = false;
        for i in 0..p.rows() {
            let missing = p.unknown_in(Line::Row(i), p.cols());
            if !missing.is_empty() && p.cols() - missing.len() >= row_k {
                p.solve(Line::Row(i), missing, p.cols())?;
                progress = true;
            }
        }
        if let Some(col_k) = col_k {
            for j in 0..p.cols() {
                let missing = p.unknown_in(Line::Col(j), p.rows());
                if !missing.is_empty() && p.rows() - missing.len() >= col_k {
                    p.solve(Line::Col(j), missing, p.rows())?;
                    progress = true;
                }
            }
        }
        if !progress {
            return Err(Error::Unrecoverable("no line has enough known symbols".into()));
        }
    }
    Ok(p.finish())
}
