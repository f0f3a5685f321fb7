//! Dense linear algebra over a finite field.

use crate::field::{FieldCtx, FieldElem};

#[derive(Clone, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, f: &FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.data.swap(pr * self.cols + c, row * self.cols + c);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self, f: &FieldCtx) -> Vec<Vec<FieldElem>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![FieldElem::ZERO; self.cols];
                v[fc] = FieldElem::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// One solution of `self * v = rhs` plus a kernel basis, or `None` when
    /// the system is inconsistent.
    pub fn solve(
        &self,
        f: &FieldCtx,
        rhs: &[FieldElem],
    ) -> Option<(Vec<FieldElem>, Vec<Vec<FieldElem>>)> {
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, rhs[r]);
        }
        let pivots = aug.rref(f);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![FieldElem::ZERO; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some((x, self.nullspace(f)))
    }

    /// Determinant by Gaussian elimination (square matrices).
    pub fn det(&self, f: &FieldCtx) -> FieldElem {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = FieldElem::ONE;
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return FieldElem::ZERO;
            };
            if pr != col {
                for c in 0..n {
                    m.data.swap(pr * n + c, col * n + c);
                }
                det = f.neg(det);
            }
            let piv = m.get(col, col);
            det = f.mul(det, piv);
            let inv = f.inv(piv).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = f.mul(m.get(r, col), inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn nullspace_vectors_are_in_kernel() {
        let f = build_field(5, 1).unwrap();
        let mut m = Matrix::zeros(2, 4);
        let vals = [1, 2, 3, 4, 2, 4, 1, 3];
        for (i, &v) in vals.iter().enumerate() {
            m.data[i] = f.from_int(v);
        }
        let ns = m.nullspace(&f);
        assert_eq!(ns.len(), 4 - m.rank(&f));
        for v in ns {
            for r in 0..2 {
                let s = f.sum((0..4).map(|c| f.mul(m.get(r, c), v[c])));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn det_of_triangular() {
        let f = build_field(7, 1).unwrap();
        let mut m = Matrix::zeros(3, 3);
        for (r, c, v) in [(0, 0, 2), (0, 1, 5), (1, 1, 3), (1, 2, 1), (2, 2, 4)] {
            m.set(r, c, f.from_int(v));
        }
        assert_eq!(m.det(&f), f.from_int(24));
    }
}
