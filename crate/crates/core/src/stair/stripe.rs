use super::config::{Cell, CellRole, StairConfig};
use crate::error::{Error, Result};

/// An `r x n` grid of equally sized symbols, stored chunk-major: all `r`
/// symbols of chunk 0, then chunk 1, and so on. The byte image is exactly
/// what a container stores for one stripe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stripe {
    rows: usize,
    cols: usize,
    symbol_size: usize,
    buf: Vec<u8>,
}

impl Stripe {
    /// An all-zero stripe shaped for `cfg`.
    pub fn new(cfg: &StairConfig, symbol_size: usize) -> Result<Self> {
        let elem = cfg.w() as usize / 8;
        if symbol_size == 0 || symbol_size % elem != 0 {
            return Err(Error::MisalignedRegion { len: symbol_size, elem });
        }
        Ok(Stripe {
            rows: cfg.r(),
            cols: cfg.n(),
            symbol_size,
            buf: vec![0; cfg.r() * cfg.n() * symbol_size],
        })
    }

    /// Wraps an existing chunk-major byte image.
    pub fn from_bytes(cfg: &StairConfig, symbol_size: usize, buf: Vec<u8>) -> Result<Self> {
        let elem = cfg.w() as usize / 8;
        if symbol_size == 0 || symbol_size % elem != 0 {
            return Err(Error::MisalignedRegion { len: symbol_size, elem });
        }
        let expected = cfg.r() * cfg.n() * symbol_size;
        if buf.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: buf.len() });
        }
        Ok(Stripe { rows: cfg.r(), cols: cfg.n(), symbol_size, buf })
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

    #[inline]
    pub(crate) fn offset(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.rows && col < self.cols);
        (col * self.rows + row) * self.symbol_size
    }

    pub fn cell(&self, row: usize, col: usize) -> &[u8] {
        let o = self.offset(row, col);
        &self.buf[o..o + self.symbol_size]
    }

    pub fn cell_mut(&mut self, row: usize, col: usize) -> &mut [u8] {
        let o = self.offset(row, col);
        &mut self.buf[o..o + self.symbol_size]
    }

    /// All `r` symbols of chunk `col`, contiguous.
    pub fn chunk(&self, col: usize) -> &[u8] {
        let len = self.rows * self.symbol_size;
        &self.buf[col * len..(col + 1) * len]
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.buf
    }

    pub fn as_bytes_mut(&mut self) -> &mut [u8] {
        &mut self.buf
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    /// Copies `bytes` into the data cells in storage order, zero-padding
    /// the tail. Returns the number of bytes consumed.
    pub fn fill_data(&mut self, cfg: &StairConfig, bytes: &[u8]) -> usize {
        let s = self.symbol_size;
        let mut used = 0;
        for c in cfg.data_cells() {
            let dst = self.cell_mut(c.row, c.col);
            let take = bytes.len().saturating_sub(used).min(s);
            dst[..take].copy_from_slice(&bytes[used..used + take]);
            dst[take..].fill(0);
            used += take;
        }
        used
    }

    /// Concatenation of the data cells in storage order.
    pub fn data_bytes(&self, cfg: &StairConfig) -> Vec<u8> {
        let mut out = Vec::with_capacity(cfg.data_cells_per_stripe() * self.symbol_size);
        for c in cfg.data_cells() {
            out.extend_from_slice(self.cell(c.row, c.col));
        }
        out
    }

    /// Zeroes every parity cell.
    pub fn clear_parity(&mut self, cfg: &StairConfig) {
        for c in cfg.parity_cells() {
            self.cell_mut(c.row, c.col).fill(0);
        }
    }

    /// Zeroes the listed cells.
    pub fn erase(&mut self, cells: &[Cell]) {
        for c in cells {
            self.cell_mut(c.row, c.col).fill(0);
        }
    }

    /// Fills every data cell with bytes from `rng`, leaving parity cells
    /// untouched.
    pub fn randomize_data<R: rand::Rng + ?Sized>(&mut self, cfg: &StairConfig, rng: &mut R) {
        for row in 0..self.rows {
            for col in 0..self.cols {
                if cfg.role(row, col) == CellRole::Data {
                    rng.fill_bytes(self.cell_mut(row, col));
                }
            }
        }
    }
}
