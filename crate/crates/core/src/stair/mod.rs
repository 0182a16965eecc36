//! STAIR codes: `m` whole-chunk failures plus sector failures bounded by a
//! coverage vector `e`, built from a row code `C_row` of length `n + m'`
//! and a column code `C_col` of length `r + e_max`.

mod canonical;
mod config;
mod cost;
mod decode;
mod encode;
mod pattern;
mod schedule;
mod stripe;

use std::sync::Arc;

pub use canonical::CanonicalStripe;
pub use config::{Cell, CellRole, StairConfig};
pub use cost::{CostReport, Method};
pub use decode::Strategy;
pub use encode::StandardGenerator;
pub use pattern::{pattern_within_coverage, within_effective_coverage, FailurePattern};
pub(crate) use pattern::dominated_by as dominated;
pub use schedule::{Line, Schedule, Step};
pub use stripe::Stripe;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::mds::GenMatrix;

/// A STAIR code instance: configuration, both component codes and the
/// precomputed encoding plans.
#[derive(Clone, Debug)]
pub struct StairCode {
    cfg: StairConfig,
    field: Arc<Field>,
    row: GenMatrix,
    col: Option<GenMatrix>,
    upstairs: Schedule,
    downstairs: Schedule,
    standard: StandardGenerator,
    dependents: Vec<Vec<Cell>>,
}

impl StairCode {
    /// Uses the default polynomial for `cfg.w()`.
    pub fn new(cfg: StairConfig) -> Result<Self> {
        let field = Arc::new(Field::with_width(cfg.w())?);
        Self::with_field(cfg, field)
    }

    pub fn with_field(cfg: StairConfig, field: Arc<Field>) -> Result<Self> {
        if field.width() != cfg.w() {
            return Err(Error::InvalidConfig(format!("field width {} does not match w={}", field.width(), cfg.w())));
        }
        let row = GenMatrix::systematic(cfg.data_chunks(), cfg.canonical_cols(), field.clone())?;
        let col = match cfg.e_max() {
            0 => None,
            e_max => Some(GenMatrix::systematic(cfg.r(), cfg.r() + e_max, field.clone())?),
        };
        let upstairs = encode::plan_upstairs(&cfg, &row, col.as_ref())?;
        let downstairs = encode::plan_downstairs(&cfg, &row, col.as_ref())?;
        let standard = StandardGenerator::build(&cfg, &field, &row, col.as_ref())?;
        let dependents = (0..standard.data_cells().len()).map(|d| standard.dependents_of(d)).collect();
        Ok(StairCode { cfg, field, row, col, upstairs, downstairs, standard, dependents })
    }

    pub fn config(&self) -> &StairConfig {
        &self.cfg
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn row_code(&self) -> &GenMatrix {
        &self.row
    }

    /// `None` when `e` is empty.
    pub fn col_code(&self) -> Option<&GenMatrix> {
        self.col.as_ref()
    }

    pub fn upstairs_schedule(&self) -> &Schedule {
        &self.upstairs
    }

    pub fn downstairs_schedule(&self) -> &Schedule {
        &self.downstairs
    }

    pub fn standard_generator(&self) -> &StandardGenerator {
        &self.standard
    }

    /// An all-zero stripe shaped for this code.
    pub fn new_stripe(&self, symbol_size: usize) -> Result<Stripe> {
        Stripe::new(&self.cfg, symbol_size)
    }

    fn check_shape(&self, stripe: &Stripe) -> Result<()> {
        if stripe.rows() != self.cfg.r() || stripe.cols() != self.cfg.n() {
            return Err(Error::InvalidParams(format!(
                "stripe is {}x{}, code expects {}x{}",
                stripe.rows(),
                stripe.cols(),
                self.cfg.r(),
                self.cfg.n()
            )));
        }
        Ok(())
    }

    /// Fills every parity cell from the data cells.
    pub fn encode(&self, stripe: &mut Stripe, method: Method) -> Result<()> {
        self.check_shape(stripe)?;
        match method {
            Method::Standard => self.standard.run(&self.field, stripe),
            Method::Upstairs => self.upstairs.run(&self.field, stripe),
            Method::Downstairs => self.downstairs.run(&self.field, stripe),
        }
        Ok(())
    }

    pub fn encode_standard(&self, stripe: &mut Stripe) -> Result<()> {
        self.encode(stripe, Method::Standard)
    }

    pub fn encode_upstairs(&self, stripe: &mut Stripe) -> Result<()> {
        self.encode(stripe, Method::Upstairs)
    }

    pub fn encode_downstairs(&self, stripe: &mut Stripe) -> Result<()> {
        self.encode(stripe, Method::Downstairs)
    }

    /// Plans the recovery of `lost` without touching any data.
    pub fn plan_decode(&self, lost: &[Cell], strategy: Strategy) -> Result<Schedule> {
        if let Some(c) = lost.iter().find(|c| c.row >= self.cfg.r() || c.col >= self.cfg.n()) {
            return Err(Error::InvalidParams(format!("lost cell {c} outside the stripe")));
        }
        decode::plan(&self.cfg, &self.row, self.col.as_ref(), lost, strategy)
    }

    /// Restores the cells of `pattern` in place. Patterns the practical
    /// planner cannot handle are retried by peeling; what neither can
    /// solve is reported as unrecoverable and the stripe is left as is.
    pub fn decode(&self, stripe: &mut Stripe, pattern: &FailurePattern) -> Result<()> {
        self.check_shape(stripe)?;
        pattern.validate(&self.cfg)?;
        if pattern.is_empty() {
            return Ok(());
        }
        let lost = pattern.lost_cells(&self.cfg);
        let plan = self
            .plan_decode(&lost, Strategy::Practical)
            .or_else(|_| self.plan_decode(&lost, Strategy::Peeling))?;
        plan.run(&self.field, stripe);
        Ok(())
    }

    /// Decodes with one specific planner and returns the schedule it ran.
    pub fn decode_with(&self, stripe: &mut Stripe, pattern: &FailurePattern, strategy: Strategy) -> Result<Schedule> {
        self.check_shape(stripe)?;
        pattern.validate(&self.cfg)?;
        let plan = self.plan_decode(&pattern.lost_cells(&self.cfg), strategy)?;
        plan.run(&self.field, stripe);
        Ok(plan)
    }

    pub fn canonical(&self, stripe: &Stripe) -> Result<CanonicalStripe> {
        self.check_shape(stripe)?;
        CanonicalStripe::build(&self.cfg, &self.row, self.col.as_ref(), stripe)
    }

    /// Parity cells whose value changes with data cell `cell`.
    pub fn parity_dependents(&self, cell: Cell) -> Result<&[Cell]> {
        let d = self
            .standard
            .data_cells()
            .binary_search_by_key(&(cell.col, cell.row), |c| (c.col, c.row))
            .map_err(|_| Error::NotDataCell { row: cell.row, col: cell.col })?;
        Ok(&self.dependents[d])
    }

    /// Mean number of parity cells touched by a single data-cell update.
    pub fn update_penalty(&self) -> f64 {
        let total: usize = self.dependents.iter().map(Vec::len).sum();
        if self.dependents.is_empty() {
            return 0.0;
        }
        total as f64 / self.dependents.len() as f64
    }

    pub fn xor_count(&self, method: Method) -> usize {
        match method {
            Method::Standard => self.standard.mult_xors(),
            Method::Upstairs => self.cfg.upstairs_mult_xors(),
            Method::Downstairs => self.cfg.downstairs_mult_xors(),
        }
    }

    pub fn cost(&self) -> CostReport {
        CostReport::new(
            self.xor_count(Method::Standard),
            self.xor_count(Method::Upstairs),
            self.xor_count(Method::Downstairs),
        )
    }

    pub fn choose_method(&self) -> Method {
        self.cost().chosen
    }
}
