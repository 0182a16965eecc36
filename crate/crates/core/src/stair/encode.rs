//! Encoders: the two reuse-based schedules and the direct per-parity
//! linear combinations.

use super::config::{Cell, StairConfig};
use super::decode::{plan, Strategy};
use super::schedule::{Line, Planner, Schedule};
use super::stripe::Stripe;
use crate::error::Result;
use crate::gf::{Elem, Field, Matrix};
use crate::mds::GenMatrix;

/// Parity as erasures, recovered bottom to top and left to right.
pub(crate) fn plan_upstairs(cfg: &StairConfig, row: &GenMatrix, col: Option<&GenMatrix>) -> Result<Schedule> {
    plan(cfg, row, col, &cfg.parity_cells(), Strategy::Upstairs)
}

/// Rows top to bottom; an intermediate parity column is completed as soon
/// as its known upper part plus its zero outside parities reach `r`
/// symbols, rightmost first.
pub(crate) fn plan_downstairs(cfg: &StairConfig, row: &GenMatrix, col: Option<&GenMatrix>) -> Result<Schedule> {
    let (n, r) = (cfg.n(), cfg.r());
    let mut p = Planner::new(cfg, row, col);
    p.forget(&cfg.parity_cells());
    for i in 0..r {
        for l in (0..cfg.m_prime()).rev() {
            if r - cfg.e()[l] == i {
                let outputs = (i..r).map(|row| Cell::new(row, n + l)).collect();
                p.solve(Line::Col(n + l), outputs, p.rows())?;
            }
        }
        let outputs = p.unknown_in(Line::Row(i), p.cols());
        p.solve(Line::Row(i), outputs, p.cols())?;
    }
    Ok(p.finish())
}

/// Every parity cell as an explicit combination of data cells.
#[derive(Clone, Debug)]
pub struct StandardGenerator {
    data_cells: Vec<Cell>,
    /// Parity cell and its nonzero `(data index, coefficient)` terms.
    parity: Vec<(Cell, Vec<(usize, Elem)>)>,
}

impl StandardGenerator {
    /// Derives the combinations from the two-phase construction: row
    /// encoding of the full data area, then column encoding of the
    /// intermediate parities, with the outside global parities forced to
    /// zero by choice of the inside ones.
    pub fn build(cfg: &StairConfig, field: &Field, row: &GenMatrix, col: Option<&GenMatrix>) -> Result<Self> {
        let data_cells = cfg.data_cells();
        let inside = cfg.inside_parity_cells();
        let nd = data_cells.len();
        let (r, k) = (cfg.r(), cfg.data_chunks());
        let a = row.parity_block();

        // coefficient vector over the data cells for every cell of the r x k data area
        let mut area = vec![vec![0 as Elem; nd]; r * k];
        for (d, c) in data_cells.iter().enumerate() {
            area[c.col * r + c.row][d] = 1;
        }

        if let Some(col) = col {
            let b = col.parity_block();
            let s = inside.len();
            // one constraint per outside global parity g[h][l] = 0
            let constraints: Vec<(usize, usize)> =
                (0..cfg.m_prime()).flat_map(|l| (0..cfg.e()[l]).map(move |h| (h, l))).collect();
            let weight = |c: Cell, (h, l): (usize, usize)| field.mul(a.get(c.col, cfg.m() + l), b.get(c.row, h));
            let mut kmat = Matrix::zeros(s, s);
            let mut lmat = Matrix::zeros(s, nd);
            for (q, &g) in constraints.iter().enumerate() {
                for (t, &c) in inside.iter().enumerate() {
                    kmat.set(q, t, weight(c, g));
                }
                for (d, &c) in data_cells.iter().enumerate() {
                    lmat.set(q, d, weight(c, g));
                }
            }
            let solved = kmat.invert(field)?.mul(&lmat, field);
            for (t, c) in inside.iter().enumerate() {
                area[c.col * r + c.row] = solved.row(t).to_vec();
            }
        }

        let mut parity = Vec::with_capacity(cfg.parity_cells().len());
        for c in &inside {
            parity.push((*c, sparse(&area[c.col * r + c.row])));
        }
        for kk in 0..cfg.m() {
            for i in 0..r {
                let mut acc = vec![0 as Elem; nd];
                for j in 0..k {
                    let coef = a.get(j, kk);
                    for (x, &y) in acc.iter_mut().zip(&area[j * r + i]) {
                        *x ^= field.mul(coef, y);
                    }
                }
                parity.push((Cell::new(i, k + kk), sparse(&acc)));
            }
        }
        Ok(StandardGenerator { data_cells, parity })
    }

    pub fn data_cells(&self) -> &[Cell] {
        &self.data_cells
    }

    /// Parity cells with their nonzero terms, inside parities first.
    pub fn terms(&self) -> impl Iterator<Item = (Cell, &[(usize, Elem)])> {
        self.parity.iter().map(|(c, t)| (*c, t.as_slice()))
    }

    /// Total nonzero terms, the Mult_XOR cost of direct encoding.
    pub fn mult_xors(&self) -> usize {
        self.parity.iter().map(|(_, t)| t.len()).sum()
    }

    /// Parity cells whose combination involves data cell `d`.
    pub fn dependents_of(&self, d: usize) -> Vec<Cell> {
        self.parity.iter().filter(|(_, t)| t.iter().any(|&(i, _)| i == d)).map(|(c, _)| *c).collect()
    }

    pub fn run(&self, field: &Field, stripe: &mut Stripe) {
        let size = stripe.symbol_size();
        let mut acc = vec![0u8; size];
        for (cell, terms) in &self.parity {
            acc.fill(0);
            for &(d, coef) in terms {
                let c = self.data_cells[d];
                field.mult_xor_unchecked(stripe.cell(c.row, c.col), &mut acc, coef);
            }
            stripe.cell_mut(cell.row, cell.col).copy_from_slice(&acc);
        }
    }
}

fn sparse(v: &[Elem]) -> Vec<(usize, Elem)> {
    v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect()
}
