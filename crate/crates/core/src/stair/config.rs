use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A position in a stripe or canonical stripe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// What a stripe cell stores.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellRole {
    Data,
    RowParity,
    /// Global parity relocated into the bottom of a data chunk.
    InsideParity,
}

/// Parameters of a STAIR code: `n` chunks of `r` sectors per stripe,
/// tolerating `m` failed chunks plus sector failures bounded by the
/// coverage vector `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StairConfig {
    n: usize,
    r: usize,
    m: usize,
    e: Vec<usize>,
    w: u32,
}

impl StairConfig {
    /// Validates the parameters. `e` is sorted ascending; an empty `e`
    /// degenerates to a plain Reed-Solomon stripe.
    pub fn new(n: usize, r: usize, m: usize, e: &[usize], w: u32) -> Result<Self> {
        let mut e = e.to_vec();
        e.sort_unstable();
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !matches!(w, 8 | 16 | 32) {
            return bad(format!("w={w} must be 8, 16 or 32"));
        }
        if r == 0 {
            return bad("r must be positive".into());
        }
        if m >= n {
            return bad(format!("m={m} must be less than n={n}"));
        }
        if let Some(&first) = e.first() {
            if first == 0 {
                return bad("entries of e must be positive".into());
            }
        }
        if let Some(&last) = e.last() {
            if last > r {
                return bad(format!("largest entry of e ({last}) exceeds r={r}"));
            }
        }
        let mp = e.len();
        if m + mp > n {
            return bad(format!("m + m' = {} exceeds n={n}", m + mp));
        }
        if m + mp == 0 {
            return bad("m and e are both empty; the code has no redundancy".into());
        }
        let order = 1u64 << w;
        if (n + mp) as u64 > order {
            return bad(format!("n + m' = {} exceeds 2^w = {order}", n + mp));
        }
        let e_max = e.last().copied().unwrap_or(0);
        if (r + e_max) as u64 > order {
            return bad(format!("r + e_max = {} exceeds 2^w = {order}", r + e_max));
        }
        Ok(StairConfig { n, r, m, e, w })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn e(&self) -> &[usize] {
        &self.e
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    /// Number of chunks that may hold sector failures, `m' = len(e)`.
    pub fn m_prime(&self) -> usize {
        self.e.len()
    }

    /// Total tolerated sector failures, `s = sum(e)`.
    pub fn s(&self) -> usize {
        self.e.iter().sum()
    }

    /// Largest entry of `e`, also the longest tolerated burst; 0 when `e`
    /// is empty.
    pub fn e_max(&self) -> usize {
        self.e.last().copied().unwrap_or(0)
    }

    /// Number of data chunks, `n - m`.
    pub fn data_chunks(&self) -> usize {
        self.n - self.m
    }

    /// Column holding the inside global parities of coverage slot `l`.
    pub fn inside_col(&self, l: usize) -> usize {
        self.n - self.m - self.m_prime() + l
    }

    /// Rows of the canonical stripe, `r + e_max`.
    pub fn canonical_rows(&self) -> usize {
        self.r + self.e_max()
    }

    /// Columns of the canonical stripe, `n + m'`.
    pub fn canonical_cols(&self) -> usize {
        self.n + self.m_prime()
    }

    pub fn role(&self, row: usize, col: usize) -> CellRole {
        assert!(row < self.r && col < self.n, "cell ({row},{col}) outside the stripe");
        if col >= self.data_chunks() {
            return CellRole::RowParity;
        }
        let first_inside = self.data_chunks() - self.m_prime();
        if col >= first_inside && row >= self.r - self.e[col - first_inside] {
            CellRole::InsideParity
        } else {
            CellRole::Data
        }
    }

    /// Data cells in storage order: chunk by chunk, top to bottom.
    pub fn data_cells(&self) -> Vec<Cell> {
        (0..self.data_chunks())
            .flat_map(|col| (0..self.r).map(move |row| Cell::new(row, col)))
            .filter(|c| self.role(c.row, c.col) == CellRole::Data)
            .collect()
    }

    /// Inside global parity cells, slot by slot, top to bottom.
    pub fn inside_parity_cells(&self) -> Vec<Cell> {
        (0..self.m_prime())
            .flat_map(|l| {
                let col = self.inside_col(l);
                (self.r - self.e[l]..self.r).map(move |row| Cell::new(row, col))
            })
            .collect()
    }

    /// Every parity cell of the stripe: inside global parities followed by
    /// the row parity chunks.
    pub fn parity_cells(&self) -> Vec<Cell> {
        let mut cells = self.inside_parity_cells();
        for col in self.data_chunks()..self.n {
            cells.extend((0..self.r).map(|row| Cell::new(row, col)));
        }
        cells
    }

    /// Data symbols per stripe, `r(n-m) - s`.
    pub fn data_cells_per_stripe(&self) -> usize {
        self.r * self.data_chunks() - self.s()
    }

    /// Mult_XORs of upstairs encoding:
    /// `(n-m)(m r + s) + r (n-m) e_max`.
    pub fn upstairs_mult_xors(&self) -> usize {
        let k = self.data_chunks();
        k * (self.m * self.r + self.s()) + self.r * k * self.e_max()
    }

    /// Mult_XORs of downstairs encoding: `(n-m)(m+m') r + r s`.
    pub fn downstairs_mult_xors(&self) -> usize {
        let k = self.data_chunks();
        k * (self.m + self.m_prime()) * self.r + self.r * self.s()
    }

    /// Symbols saved per stripe against a code that spends `m + m'` whole
    /// parity chunks on the same coverage: `r m' - s`.
    pub fn symbols_saved(&self) -> usize {
        self.r * self.m_prime() - self.s()
    }
}

impl fmt::Display for StairConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.e.iter().map(ToString::to_string).collect();
        write!(f, "n={} r={} m={} e=({}) w={}", self.n, self.r, self.m, e.join(","), self.w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exemplar() {
        let c = StairConfig::new(8, 4, 2, &[1, 1, 2], 8).unwrap();
        assert_eq!((c.m_prime(), c.s(), c.e_max()), (3, 4, 2));
        assert_eq!((c.canonical_rows(), c.canonical_cols()), (6, 11));
        let inside: Vec<Cell> = c.inside_parity_cells();
        assert_eq!(inside, vec![Cell::new(3, 3), Cell::new(3, 4), Cell::new(2, 5), Cell::new(3, 5)]);
    }

    #[test]
    fn canonicalizes_e() {
        let c = StairConfig::new(8, 4, 2, &[2, 1, 1], 8).unwrap();
        assert_eq!(c.e(), &[1, 1, 2]);
    }

    #[test]
    fn constraint_violations() {
        let err = StairConfig::new(4, 4, 2, &[1, 1, 1], 8).unwrap_err().to_string();
        assert!(err.contains("m + m'"), "{err}");
        assert!(StairConfig::new(4, 4, 4, &[], 8).is_err());
        assert!(StairConfig::new(8, 4, 1, &[0, 1], 8).is_err());
        assert!(StairConfig::new(8, 4, 1, &[5], 8).is_err());
        assert!(StairConfig::new(8, 4, 0, &[], 8).is_err());
        assert!(StairConfig::new(8, 4, 1, &[1], 12).is_err());
        assert!(StairConfig::new(255, 4, 1, &[1, 1], 8).is_err());
        assert!(StairConfig::new(254, 4, 1, &[1, 1], 8).is_ok());
        assert!(StairConfig::new(8, 250, 1, &[7], 8).is_err());
    }

    #[test]
    fn cell_accounting() {
        for (n, r, m, e) in [(8, 4, 2, vec![1, 1, 2]), (6, 3, 1, vec![1, 2]), (16, 16, 3, vec![4]), (5, 2, 1, vec![])] {
            let c = StairConfig::new(n, r, m, &e, 8).unwrap();
            assert_eq!(c.parity_cells().len(), m * r + c.s());
            assert_eq!(c.data_cells().len(), r * (n - m) - c.s());
            assert_eq!(c.data_cells().len(), c.data_cells_per_stripe());
        }
    }

    #[test]
    fn rs_degenerate_counts() {
        let c = StairConfig::new(8, 16, 2, &[], 8).unwrap();
        assert_eq!(c.upstairs_mult_xors(), 6 * 2 * 16);
        assert_eq!(c.downstairs_mult_xors(), 6 * 2 * 16);
    }
}
