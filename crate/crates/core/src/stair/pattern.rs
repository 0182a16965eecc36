use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::config::{Cell, StairConfig};
use crate::error::{Error, Result};

/// Lost symbols of one stripe: whole failed chunks plus individual sector
/// failures in other chunks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailurePattern {
    pub failed_chunks: BTreeSet<usize>,
    /// chunk -> lost rows; never lists a failed chunk.
    pub sector_failures: BTreeMap<usize, BTreeSet<usize>>,
}

impl FailurePattern {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fail_chunk(&mut self, col: usize) -> &mut Self {
        self.sector_failures.remove(&col);
        self.failed_chunks.insert(col);
        self
    }

    pub fn fail_sector(&mut self, row: usize, col: usize) -> &mut Self {
        if !self.failed_chunks.contains(&col) {
            self.sector_failures.entry(col).or_default().insert(row);
        }
        self
    }

    /// Groups a list of lost cells by chunk; a chunk that lost all `r`
    /// rows is recorded as a failed chunk.
    pub fn from_cells(cfg: &StairConfig, cells: &[Cell]) -> Self {
        let mut p = FailurePattern::new();
        for c in cells {
            p.fail_sector(c.row, c.col);
        }
        let full: Vec<usize> =
            p.sector_failures.iter().filter(|(_, rows)| rows.len() == cfg.r()).map(|(&c, _)| c).collect();
        for c in full {
            p.fail_chunk(c);
        }
        p
    }

    pub fn is_empty(&self) -> bool {
        self.failed_chunks.is_empty() && self.sector_failures.values().all(BTreeSet::is_empty)
    }

    pub fn validate(&self, cfg: &StairConfig) -> Result<()> {
        for &c in &self.failed_chunks {
            if c >= cfg.n() {
                return Err(Error::InvalidParams(format!("failed chunk {c} out of range (n={})", cfg.n())));
            }
        }
        for (&c, rows) in &self.sector_failures {
            if c >= cfg.n() {
                return Err(Error::InvalidParams(format!("chunk {c} out of range (n={})", cfg.n())));
            }
            if self.failed_chunks.contains(&c) {
                return Err(Error::InvalidParams(format!("chunk {c} is both failed and partially failed")));
            }
            if let Some(&row) = rows.iter().find(|&&row| row >= cfg.r()) {
                return Err(Error::InvalidParams(format!("row {row} out of range (r={})", cfg.r())));
            }
        }
        Ok(())
    }

    /// Every lost cell, ordered by chunk then row.
    pub fn lost_cells(&self, cfg: &StairConfig) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self
            .failed_chunks
            .iter()
            .flat_map(|&col| (0..cfg.r()).map(move |row| Cell::new(row, col)))
            .chain(self.sector_failures.iter().flat_map(|(&col, rows)| rows.iter().map(move |&row| Cell::new(row, col))))
            .collect();
        cells.sort_by_key(|c| (c.col, c.row));
        cells
    }

    /// Nonzero sector-failure counts of the partially failed chunks.
    pub fn sector_counts(&self) -> Vec<usize> {
        self.sector_failures.values().map(BTreeSet::len).filter(|&c| c > 0).collect()
    }

    /// Lost symbols per chunk, counting a failed chunk as `r`.
    pub fn chunk_losses(&self, cfg: &StairConfig) -> Vec<usize> {
        let mut counts = vec![0; cfg.n()];
        for &c in &self.failed_chunks {
            counts[c] = cfg.r();
        }
        for (&c, rows) in &self.sector_failures {
            counts[c] += rows.len();
        }
        counts
    }
}

/// True iff the nonzero `counts` fit injectively into the slots of `e`,
/// i.e. sorted descending they are dominated elementwise by `e` sorted
/// descending.
pub(crate) fn dominated_by(counts: &[usize], e: &[usize]) -> bool {
    let mut x: Vec<usize> = counts.iter().copied().filter(|&c| c > 0).collect();
    if x.len() > e.len() {
        return false;
    }
    x.sort_unstable_by(|a, b| b.cmp(a));
    x.iter().zip(e.iter().rev()).all(|(c, slot)| c <= slot)
}

/// The coverage of the code: at most `m` failed chunks, and the
/// sector-failure counts of the remaining chunks dominated by `e`.
pub fn pattern_within_coverage(cfg: &StairConfig, pattern: &FailurePattern) -> bool {
    pattern.failed_chunks.len() <= cfg.m() && dominated_by(&pattern.sector_counts(), cfg.e())
}

/// Coverage after letting the `m` chunks with the most losses absorb the
/// device-failure budget, whether or not they failed entirely. Every
/// pattern within [`pattern_within_coverage`] is also within this one.
pub fn within_effective_coverage(cfg: &StairConfig, pattern: &FailurePattern) -> bool {
    let mut counts = pattern.chunk_losses(cfg);
    counts.sort_unstable_by(|a, b| b.cmp(a));
    dominated_by(&counts[cfg.m().min(counts.len())..], cfg.e())
}
