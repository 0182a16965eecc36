use super::config::StairConfig;
use super::stripe::Stripe;
use crate::error::Result;
use crate::mds::GenMatrix;

/// The stripe extended by intermediate parity columns and virtual parity
/// rows into a product-code grid of `(r + e_max) x (n + m')` symbols.
///
/// Cells below an intermediate parity column beyond its coverage entry
/// (`row - r >= e_l`) are dummies: they are computed like every other
/// cell but play no role in the code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalStripe {
    rows: usize,
    cols: usize,
    r: usize,
    n: usize,
    e: Vec<usize>,
    symbol_size: usize,
    /// Row-major.
    cells: Vec<Vec<u8>>,
}

impl CanonicalStripe {
    pub(crate) fn build(cfg: &StairConfig, row: &GenMatrix, col: Option<&GenMatrix>, stripe: &Stripe) -> Result<Self> {
        let (rows, cols, r, n) = (cfg.canonical_rows(), cfg.canonical_cols(), cfg.r(), cfg.n());
        let size = stripe.symbol_size();
        let mut cells = vec![Vec::new(); rows * cols];
        for i in 0..r {
            for j in 0..n {
                cells[i * cols + j] = stripe.cell(i, j).to_vec();
            }
            // intermediate parities are the extra row-code outputs
            let data: Vec<&[u8]> = (0..cfg.data_chunks()).map(|j| stripe.cell(i, j)).collect();
            let parity = row.encode(&data)?;
            for l in 0..cfg.m_prime() {
                cells[i * cols + n + l] = parity[cfg.m() + l].clone();
            }
        }
        if let Some(col) = col {
            for j in 0..cols {
                let top: Vec<&[u8]> = (0..r).map(|i| cells[i * cols + j].as_slice()).collect();
                let virt = col.encode(&top)?;
                for (h, v) in virt.into_iter().take(rows - r).enumerate() {
                    cells[(r + h) * cols + j] = v;
                }
            }
        }
        Ok(CanonicalStripe { rows, cols, r, n, e: cfg.e().to_vec(), symbol_size: size, cells })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn symbol_size(&self) -> usize {
        self.symbol_size
    }

    pub fn get(&self, row: usize, col: usize) -> &[u8] {
        &self.cells[row * self.cols + col]
    }

    pub fn is_dummy(&self, row: usize, col: usize) -> bool {
        row >= self.r && col >= self.n && row - self.r >= self.e[col - self.n]
    }

    /// True for the outside global parity cells, which the inside
    /// placement forces to zero.
    pub fn is_outside_parity(&self, row: usize, col: usize) -> bool {
        row >= self.r && col >= self.n && !self.is_dummy(row, col)
    }

    pub fn row(&self, i: usize) -> Vec<&[u8]> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<&[u8]> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn outside_parities_zero(&self) -> bool {
        (self.r..self.rows)
            .flat_map(|i| (self.n..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| self.is_outside_parity(i, j))
            .all(|(i, j)| self.get(i, j).iter().all(|&b| b == 0))
    }
}
