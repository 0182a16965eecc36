use super::{Elem, Field};
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// The submatrix made of the listed columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.set(r, k, self.get(r, c));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix, field: &Field) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) ^ field.mul(a, other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Gauss-Jordan inverse.
    pub fn invert(&self, field: &Field) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col) != 0).ok_or(Error::SingularMatrix)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let scale = field.inv(a.get(col, col)).expect("pivot is nonzero");
            a.scale_row(col, scale, field);
            inv.scale_row(col, scale, field);
            for r in 0..n {
                let factor = a.get(r, col);
                if r != col && factor != 0 {
                    a.add_scaled_row(col, r, factor, field);
                    inv.add_scaled_row(col, r, factor, field);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: Elem, field: &Field) {
        for c in 0..self.cols {
            let v = field.mul(self.get(r, c), s);
            self.set(r, c, v);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_scaled_row(&mut self, src: usize, dst: usize, factor: Elem, field: &Field) {
        for c in 0..self.cols {
            let v = self.get(dst, c) ^ field.mul(factor, self.get(src, c));
            self.set(dst, c, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_inverts_to_itself() {
        let f = Field::gf256();
        let i = Matrix::identity(5);
        assert_eq!(i.invert(&f).unwrap(), i);
    }

    #[test]
    fn one_by_one() {
        let f = Field::gf256();
        for a in 1..256 {
            let m = Matrix::from_rows(vec![vec![a]]);
            assert_eq!(m.invert(&f).unwrap().get(0, 0), f.inv(a).unwrap());
        }
    }

    #[test]
    fn singular_and_non_square() {
        let f = Field::gf256();
        let m = Matrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        // second row = 2 * first row in GF(2^8)
        assert_eq!(f.mul(2, 2), 4);
        assert!(matches!(m.invert(&f), Err(Error::SingularMatrix)));
        assert!(matches!(Matrix::zeros(2, 3).invert(&f), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn cauchy_submatrix_multiplies_back() {
        let f = Field::gf256();
        // 1 / (x_i + y_j) with x = 0..4, y = 10..14
        let rows = (0..4u32)
            .map(|i| (10..14u32).map(|j| f.inv(i ^ j).unwrap()).collect())
            .collect();
        let m = Matrix::from_rows(rows);
        let inv = m.invert(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), Matrix::identity(4));
        assert_eq!(inv.mul(&m, &f), Matrix::identity(4));
    }
}
