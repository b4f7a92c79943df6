//! Small dense row-major matrices for linear transformations.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("a matrix needs at least one row")]
    Empty,
    #[error("row {row} has length {got}, expected {expected}")]
    RowLength { row: usize, expected: usize, got: usize },
    #[error("vector has length {got}, expected {expected}")]
    VectorLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, MatrixError> {
        let cols = rows.first().ok_or(MatrixError::Empty)?.len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        let row_count = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::RowLength { row: i + 1, expected: cols, got: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: row_count, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Matrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::VectorLength { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn mul_mat(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if other.rows != self.cols {
            return Err(MatrixError::VectorLength { expected: self.cols, got: other.rows });
        }
        let mut data = vec![0.0; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(Matrix { rows: self.rows, cols: other.cols, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_vector_and_matrix() {
        let m = Matrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.mul_vec(&[1.0, 1.0]).unwrap(), vec![3.0, 7.0]);
        let id = Matrix::identity(2);
        assert_eq!(m.mul_mat(&id).unwrap(), m);
    }

    #[test]
    fn shape_errors() {
        assert!(Matrix::from_rows(vec![]).is_err());
        assert!(Matrix::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        let m = Matrix::identity(2);
        assert!(m.mul_vec(&[1.0]).is_err());
    }
}
