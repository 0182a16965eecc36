//! Systematic (eta, kappa) MDS codes from Cauchy matrices.
//!
//! A generator has the form `(I | A)` where `A[j][i] = 1 / (x_i + y_j)` with
//! `x_i = i` for the `eta - kappa` parity positions and `y_j = (eta - kappa) + j`
//! for the `kappa` data positions. Every square submatrix of a Cauchy matrix
//! is nonsingular, so any `kappa` columns of `(I | A)` are independent.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field, Matrix};

/// Systematic generator matrix `(I | A)` of an (eta, kappa) MDS code.
#[derive(Clone, Debug)]
pub struct GenMatrix {
    field: Arc<Field>,
    kappa: usize,
    eta: usize,
    /// kappa x (eta - kappa)
    parity: Matrix,
}

/// One codeword with some symbols possibly erased.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub symbols: Vec<Option<Vec<u8>>>,
}

impl Codeword {
    pub fn complete(symbols: Vec<Vec<u8>>) -> Self {
        Codeword { symbols: symbols.into_iter().map(Some).collect() }
    }

    pub fn erase(&mut self, pos: usize) {
        self.symbols[pos] = None;
    }

    pub fn present(&self) -> usize {
        self.symbols.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.symbols.iter().all(Option::is_some)
    }
}

impl GenMatrix {
    /// Builds the systematic Cauchy generator for `kappa` data symbols and
    /// codeword length `eta`.
    pub fn systematic(kappa: usize, eta: usize, field: Arc<Field>) -> Result<Self> {
        if kappa == 0 || kappa >= eta {
            return Err(Error::InvalidCode(format!("need 0 < kappa < eta, got kappa={kappa}, eta={eta}")));
        }
        if eta as u64 > field.order() {
            return Err(Error::InvalidCode(format!(
                "eta={eta} exceeds the field size 2^{}",
                field.width()
            )));
        }
        let parities = eta - kappa;
        let mut parity = Matrix::zeros(kappa, parities);
        for j in 0..kappa {
            let y = (parities + j) as Elem;
            for i in 0..parities {
                let x = i as Elem;
                parity.set(j, i, field.inv(x ^ y).expect("x and y are distinct"));
            }
        }
        Ok(GenMatrix { field, kappa, eta, parity })
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// The `A` block.
    pub fn parity_block(&self) -> &Matrix {
        &self.parity
    }

    /// Column `pos` of `(I | A)`.
    pub fn column(&self, pos: usize) -> Vec<Elem> {
        (0..self.kappa)
            .map(|j| {
                if pos < self.kappa {
                    (j == pos) as Elem
                } else {
                    self.parity.get(j, pos - self.kappa)
                }
            })
            .collect()
    }

    /// The full kappa x eta generator.
    pub fn full(&self) -> Matrix {
        let mut m = Matrix::zeros(self.kappa, self.eta);
        for pos in 0..self.eta {
            for (j, v) in self.column(pos).into_iter().enumerate() {
                m.set(j, pos, v);
            }
        }
        m
    }

    /// Submatrix of the generator made of the given codeword positions.
    pub fn columns(&self, positions: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.kappa, positions.len());
        for (k, &pos) in positions.iter().enumerate() {
            for (j, v) in self.column(pos).into_iter().enumerate() {
                m.set(j, k, v);
            }
        }
        m
    }

    /// Coefficients expressing the `wanted` positions as linear
    /// combinations of the `known` positions: `c_wanted = c_known * M`.
    /// Exactly `kappa` known positions are required.
    pub fn decoding_matrix(&self, known: &[usize], wanted: &[usize]) -> Result<Matrix> {
        if known.len() != self.kappa {
            return Err(Error::InsufficientSymbols { present: known.len(), needed: self.kappa });
        }
        let inv = self.columns(known).invert(&self.field)?;
        Ok(inv.mul(&self.columns(wanted), &self.field))
    }

    /// Computes the `eta - kappa` parity symbols of `data`.
    pub fn encode<D: AsRef<[u8]>>(&self, data: &[D]) -> Result<Vec<Vec<u8>>> {
        if data.len() != self.kappa {
            return Err(Error::InvalidCode(format!("expected {} data symbols, got {}", self.kappa, data.len())));
        }
        let len = data[0].as_ref().len();
        let mut out = vec![vec![0u8; len]; self.eta - self.kappa];
        for (j, d) in data.iter().enumerate() {
            let d = d.as_ref();
            if d.len() != len {
                return Err(Error::LengthMismatch { expected: len, actual: d.len() });
            }
            for (i, p) in out.iter_mut().enumerate() {
                self.field.mult_xor(d, p, self.parity.get(j, i))?;
            }
        }
        Ok(out)
    }

    /// Restores every erased symbol of `word` from any `kappa` present ones.
    pub fn decode(&self, word: &mut Codeword) -> Result<()> {
        if word.symbols.len() != self.eta {
            return Err(Error::InvalidCode(format!("codeword has {} symbols, code length is {}", word.symbols.len(), self.eta)));
        }
        let known: Vec<usize> = (0..self.eta).filter(|&p| word.symbols[p].is_some()).take(self.kappa).collect();
        let wanted: Vec<usize> = (0..self.eta).filter(|&p| word.symbols[p].is_none()).collect();
        if wanted.is_empty() {
            return Ok(());
        }
        if known.len() < self.kappa {
            return Err(Error::InsufficientSymbols { present: known.len(), needed: self.kappa });
        }
        let len = word.symbols[known[0]].as_ref().unwrap().len();
        let coeffs = self.decoding_matrix(&known, &wanted)?;
        for (w, &pos) in wanted.iter().enumerate() {
            let mut out = vec![0u8; len];
            for (k, &src) in known.iter().enumerate() {
                let s = word.symbols[src].as_ref().unwrap();
                self.field.mult_xor(s, &mut out, coeffs.get(k, w))?;
            }
            word.symbols[pos] = Some(out);
        }
        Ok(())
    }

    /// True iff the parity positions equal the re-encoded data positions.
    pub fn check_codeword<S: AsRef<[u8]>>(&self, word: &[S]) -> bool {
        if word.len() != self.eta {
            return false;
        }
        match self.encode(&word[..self.kappa]) {
            Ok(parity) => parity.iter().zip(&word[self.kappa..]).all(|(a, b)| a.as_slice() == b.as_ref()),
            Err(_) => false,
        }
    }
}
