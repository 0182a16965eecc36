//! Linear schedules over the canonical grid.
//!
//! The canonical grid is `(r + e_max) x (n + m')`. Its upper-left `r x n`
//! block is the stripe; the extra columns hold intermediate parities and
//! the extra rows hold virtual parities. Every row is a codeword of the row
//! code and every column a codeword of the column code, so any line with
//! `kappa` known cells determines the rest of that line. A [`Schedule`] is
//! a precomputed sequence of such line solves: the coefficients are fixed
//! when the schedule is planned and only region arithmetic happens when it
//! runs.

use serde::Serialize;

use super::config::{Cell, StairConfig};
use super::stripe::Stripe;
use crate::error::{Error, Result};
use crate::gf::{Field, Matrix};
use crate::mds::GenMatrix;

/// A codeword of the canonical grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Line {
    /// Canonical row, a row-code codeword.
    Row(usize),
    /// Canonical column, a column-code codeword.
    Col(usize),
}

#[derive(Clone, Copy, Debug)]
enum Loc {
    /// Symbol index `col * r + row` within the stripe.
    Stripe(usize),
    Scratch(usize),
    /// An outside global parity, fixed to zero.
    Zero,
}

/// One line solve: `outputs = inputs * coeffs` on the given line.
#[derive(Clone, Debug)]
pub struct Step {
    pub line: Line,
    pub inputs: Vec<Cell>,
    pub outputs: Vec<Cell>,
    coeffs: Matrix,
    in_locs: Vec<Loc>,
    out_locs: Vec<Loc>,
}

impl Step {
    /// Coefficient of input `i` in output `o`.
    pub fn coeff(&self, i: usize, o: usize) -> u32 {
        self.coeffs.get(i, o)
    }

    pub fn mult_xors(&self) -> usize {
        self.inputs.len() * self.outputs.len()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Schedule {
    steps: Vec<Step>,
    scratch_cells: usize,
}

impl Schedule {
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Mult_XORs the schedule performs, counting zero-valued outside
    /// global parities as ordinary inputs.
    pub fn mult_xors(&self) -> usize {
        self.steps.iter().map(Step::mult_xors).sum()
    }

    /// Applies the schedule to `stripe` in place.
    pub fn run(&self, field: &Field, stripe: &mut Stripe) {
        let size = stripe.symbol_size();
        let mut scratch = vec![0u8; self.scratch_cells * size];
        let mut acc = vec![0u8; size];
        let buf = stripe.as_bytes_mut();
        for step in &self.steps {
            for (o, out) in step.out_locs.iter().enumerate() {
                acc.fill(0);
                for (i, input) in step.in_locs.iter().enumerate() {
                    let src = match *input {
                        Loc::Stripe(k) => &buf[k * size..(k + 1) * size],
                        Loc::Scratch(k) => &scratch[k * size..(k + 1) * size],
                        Loc::Zero => continue,
                    };
                    field.mult_xor_unchecked(src, &mut acc, step.coeffs.get(i, o));
                }
                match *out {
                    Loc::Stripe(k) => buf[k * size..(k + 1) * size].copy_from_slice(&acc),
                    Loc::Scratch(k) => scratch[k * size..(k + 1) * size].copy_from_slice(&acc),
                    Loc::Zero => unreachable!("outside global parities are never outputs"),
                }
            }
        }
    }
}

/// Tracks which canonical cells are known while a schedule is built.
pub(crate) struct Planner<'a> {
    cfg: &'a StairConfig,
    row_code: &'a GenMatrix,
    col_code: Option<&'a GenMatrix>,
    rows: usize,
    cols: usize,
    known: Vec<bool>,
    steps: Vec<(Line, Vec<Cell>, Vec<Cell>, Matrix)>,
}

impl<'a> Planner<'a> {
    /// Every stripe cell and every outside global parity starts known;
    /// intermediate and virtual parities start unknown.
    pub fn new(cfg: &'a StairConfig, row_code: &'a GenMatrix, col_code: Option<&'a GenMatrix>) -> Self {
        let rows = cfg.canonical_rows();
        let cols = cfg.canonical_cols();
        let mut known = vec![false; rows * cols];
        for row in 0..cfg.r() {
            for col in 0..cfg.n() {
                known[row * cols + col] = true;
            }
        }
        for (l, &e) in cfg.e().iter().enumerate() {
            for h in 0..e {
                known[(cfg.r() + h) * cols + cfg.n() + l] = true;
            }
        }
        Planner { cfg, row_code, col_code, rows, cols, known, steps: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn forget(&mut self, cells: &[Cell]) {
        for c in cells {
            self.known[c.row * self.cols + c.col] = false;
        }
    }

    pub fn is_known(&self, c: Cell) -> bool {
        self.known[c.row * self.cols + c.col]
    }

    /// Cells of `line` at positions `< span`, in position order.
    pub fn line_cells(&self, line: Line, span: usize) -> Vec<Cell> {
        match line {
            Line::Row(i) => (0..span.min(self.cols)).map(|j| Cell::new(i, j)).collect(),
            Line::Col(j) => (0..span.min(self.rows)).map(|i| Cell::new(i, j)).collect(),
        }
    }

    pub fn unknown_in(&self, line: Line, span: usize) -> Vec<Cell> {
        self.line_cells(line, span).into_iter().filter(|&c| !self.is_known(c)).collect()
    }

    fn code(&self, line: Line) -> Result<&'a GenMatrix> {
        match line {
            Line::Row(_) => Ok(self.row_code),
            Line::Col(_) => self.col_code.ok_or_else(|| Error::Unrecoverable("no column code when e is empty".into())),
        }
    }

    /// Solves `outputs` on `line` from the first `kappa` known cells at
    /// positions `< span`.
    pub fn solve(&mut self, line: Line, outputs: Vec<Cell>, span: usize) -> Result<()> {
        if outputs.is_empty() {
            return Ok(());
        }
        let code = self.code(line)?;
        let kappa = code.kappa();
        let inputs: Vec<Cell> =
            self.line_cells(line, span).into_iter().filter(|&c| self.is_known(c)).take(kappa).collect();
        if inputs.len() < kappa {
            return Err(Error::Unrecoverable(format!(
                "{line:?} has {} known symbols, {kappa} needed",
                inputs.len()
            )));
        }
        let pos = |c: &Cell| match line {
            Line::Row(_) => c.col,
            Line::Col(_) => c.row,
        };
        let known_pos: Vec<usize> = inputs.iter().map(pos).collect();
        let want_pos: Vec<usize> = outputs.iter().map(pos).collect();
        let coeffs = code.decoding_matrix(&known_pos, &want_pos)?;
        for c in &outputs {
            self.known[c.row * self.cols + c.col] = true;
        }
        self.steps.push((line, inputs, outputs, coeffs));
        Ok(())
    }

    /// Resolves cell locations and freezes the schedule.
    pub fn finish(self) -> Schedule {
        let (r, n) = (self.cfg.r(), self.cfg.n());
        let mut scratch_index = vec![usize::MAX; self.rows * self.cols];
        let mut scratch_cells = 0;
        let cols = self.cols;
        let e = self.cfg.e();
        let mut locate = |c: Cell| -> Loc {
            if c.row < r && c.col < n {
                Loc::Stripe(c.col * r + c.row)
            } else if c.row >= r && c.col >= n && c.row - r < e[c.col - n] {
                Loc::Zero
            } else {
                let slot = &mut scratch_index[c.row * cols + c.col];
                if *slot == usize::MAX {
                    *slot = scratch_cells;
                    scratch_cells += 1;
                }
                Loc::Scratch(*slot)
            }
        };
        let steps = self
            .steps
            .into_iter()
            .map(|(line, inputs, outputs, coeffs)| {
                let in_locs = inputs.iter().map(|&c| locate(c)).collect();
                let out_locs = outputs.iter().map(|&c| locate(c)).collect();
                Step { line, inputs, outputs, coeffs, in_locs, out_locs }
            })
            .collect();
        Schedule { steps, scratch_cells }
    }
}
