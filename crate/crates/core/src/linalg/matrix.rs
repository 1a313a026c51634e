use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{convert, Overflow, Scalar};

/// Sparse integer matrix, stored column by column.
///
/// Only nonzero entries are kept; each column is sorted by row index. Columns
/// are the images of basis vectors, so `A * e_j` is column `j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|j| vec![(j, T::one())]).collect();
        Matrix {
            rows: n,
            cols: n,
            columns,
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Self {
        let mut columns: Vec<Vec<(usize, T)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(
                r < rows && c < cols,
                "triplet ({r}, {c}) outside {rows}x{cols}"
            );
            columns[c].push((r, v));
        }
        for col in &mut columns {
            col.sort_by_key(|(r, _)| *r);
            let mut merged: Vec<(usize, T)> = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv = lv.clone() + v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *col = merged;
        }
        Matrix {
            rows,
            cols,
            columns,
        }
    }

    /// Row-major dense input.
    pub fn from_rows(data: &[Vec<T>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        let triplets = data.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols, "ragged row {r}");
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(c, v)| (r, c, v.clone()))
        });
        Self::from_triplets(rows, cols, triplets)
    }

    pub fn from_i64_rows(data: &[&[i64]]) -> Self {
        let rows: Vec<Vec<T>> = data
            .iter()
            .map(|r| r.iter().map(|&v| T::from_int(v)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_triplets(
            n,
            n,
            entries.iter().cloned().enumerate().map(|(i, v)| (i, i, v)),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.columns[c]
            .binary_search_by_key(&r, |(row, _)| *row)
            .map(|i| self.columns[c][i].1.clone())
            .unwrap_or_else(|_| T::zero())
    }

    pub fn column(&self, c: usize) -> &[(usize, T)] {
        &self.columns[c]
    }

    /// Nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.entries().map(|(r, c, v)| (c, r, v.clone())),
        )
    }

    pub fn neg(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            columns: self
                .columns
                .iter()
                .map(|col| col.iter().map(|(r, v)| (*r, -v.clone())).collect())
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, Overflow> {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in add"
        );
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for (r, c, v) in self.entries().chain(other.entries()) {
            triplets.push((r, c, v.clone()));
        }
        // Duplicate summation inside from_triplets is unchecked; check here.
        for c in 0..self.cols {
            for (r, v) in &other.columns[c] {
                self.get(*r, c).try_add(v)?;
            }
        }
        Ok(Self::from_triplets(self.rows, self.cols, triplets))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, Overflow> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, Overflow> {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut columns = Vec::with_capacity(other.cols);
        let mut acc: Vec<Option<T>> = vec![None; self.rows];
        let mut touched: Vec<usize> = Vec::new();
        for col in &other.columns {
            for (k, b) in col {
                for (r, a) in &self.columns[*k] {
                    let prod = a.try_mul(b)?;
                    match &mut acc[*r] {
                        Some(v) => *v = v.try_add(&prod)?,
                        slot @ None => {
                            *slot = Some(prod);
                            touched.push(*r);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for r in touched.drain(..) {
                let v = acc[r].take().expect("touched slot");
                if !v.is_zero() {
                    out.push((r, v));
                }
            }
            columns.push(out);
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    /// Product; panics on overflow, so use it with [`num_bigint::BigInt`]
    /// or where the bound is known.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("overflow in matrix product")
    }

    pub fn try_pow(&self, exp: u32) -> Result<Self, Overflow> {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        for _ in 0..exp {
            out = out.try_mul(self)?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &T) -> Result<Self, Overflow> {
        let mut columns = Vec::with_capacity(self.cols);
        for col in &self.columns {
            let mut out = Vec::with_capacity(col.len());
            for (r, v) in col {
                let p = v.try_mul(s)?;
                if !p.is_zero() {
                    out.push((*r, p));
                }
            }
            columns.push(out);
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        })
    }

    /// Applies the matrix to a dense column vector.
    pub fn apply(&self, x: &[T]) -> Result<Vec<T>, Overflow> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![T::zero(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            if x[c].is_zero() {
                continue;
            }
            for (r, v) in col {
                y[*r] = y[*r].try_add(&v.try_mul(&x[c])?)?;
            }
        }
        Ok(y)
    }

    /// Places `block` with its top-left corner at `(row0, col0)`.
    pub fn with_block(&self, row0: usize, col0: usize, block: &Self) -> Self {
        assert!(row0 + block.rows <= self.rows && col0 + block.cols <= self.cols);
        let triplets = self.entries().map(|(r, c, v)| (r, c, v.clone())).chain(
            block
                .entries()
                .map(|(r, c, v)| (r + row0, c + col0, v.clone())),
        );
        Self::from_triplets(self.rows, self.cols, triplets)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let triplets = self
            .entries()
            .filter(|(r, c, _)| rows.contains(r) && cols.contains(c))
            .map(|(r, c, v)| (r - rows.start, c - cols.start, v.clone()));
        Self::from_triplets(rows.len(), cols.len(), triplets)
    }

    pub fn max_bits(&self) -> u64 {
        self.entries().map(|(_, _, v)| v.bits()).max().unwrap_or(0)
    }

    /// Converts the entry type, failing if any entry does not fit.
    pub fn convert<U: Scalar>(&self) -> Result<Matrix<U>, Overflow> {
        let mut columns = Vec::with_capacity(self.cols);
        for col in &self.columns {
            let mut out = Vec::with_capacity(col.len());
            for (r, v) in col {
                out.push((*r, convert::<T, U>(v)?));
            }
            columns.push(out);
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        })
    }

    /// Row-major sparse residues modulo `m`, zero residues dropped.
    pub fn rows_mod(&self, m: u64) -> Vec<Vec<(u32, u64)>> {
        let mut out: Vec<Vec<(u32, u64)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                let x = v.rem_u64(m);
                if x != 0 {
                    out[*r].push((c as u32, x));
                }
            }
        }
        out
    }

    /// Row-major sparse copy.
    pub fn rows_sparse(&self) -> Vec<Vec<(u32, T)>> {
        let mut out: Vec<Vec<(u32, T)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                out[*r].push((c as u32, v.clone()));
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn try_det(&self) -> Result<T, Overflow> {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.to_dense();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(T::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j]
                        .try_mul(&a[k][k])?
                        .try_sub(&a[i][k].try_mul(&a[k][j])?)?;
                    a[i][j] = num / prev.clone();
                }
                a[i][k] = T::zero();
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return Ok(T::one());
        }
        Ok(sign * a[n - 1][n - 1].clone())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries(
                self.columns
                    .iter()
                    .enumerate()
                    .flat_map(|(c, col)| col.iter().map(move |(r, v)| (r, c, v))),
            )
            .finish()
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dense = self.to_dense();
        let width = dense
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for row in dense {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Serialized form: dimensions plus `[row, col, value]` triplets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl<T: Scalar> Matrix<T> {
    pub fn to_json(&self) -> Result<MatrixJson, Overflow> {
        let mut entries = Vec::with_capacity(self.nnz());
        for (r, c, v) in self.entries() {
            entries.push((r, c, v.to_i64().ok_or(Overflow)?));
        }
        Ok(MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn from_json(json: &MatrixJson) -> Self {
        Self::from_triplets(
            json.rows,
            json.cols,
            json.entries.iter().map(|&(r, c, v)| (r, c, T::from_int(v))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let m = Matrix::<i64>::from_triplets(2, 2, [(0, 0, 2), (0, 0, -2), (1, 0, 3), (1, 0, 1)]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), 4);
        assert_eq!(m.get(0, 0), 0);
    }

    #[test]
    fn empty_shapes_are_valid() {
        let a = Matrix::<i64>::zeros(0, 3);
        let b = Matrix::<i64>::zeros(3, 0);
        let ab = b.mul(&a);
        assert_eq!((ab.rows(), ab.cols()), (3, 3));
        assert!(ab.is_zero());
        assert_eq!(a.mul(&b).rows(), 0);
        assert_eq!(Matrix::<i64>::identity(0).try_det(), Ok(1));
    }

    #[test]
    fn product_and_determinant() {
        let a = Matrix::<i64>::from_i64_rows(&[&[1, -1], &[0, 1]]);
        let b = Matrix::<i64>::from_i64_rows(&[&[1, 0], &[1, 1]]);
        assert_eq!(a.mul(&b).to_dense(), vec![vec![0, -1], vec![1, 1]]);
        assert_eq!(a.mul(&b).try_det(), Ok(1));
        let c = Matrix::<BigInt>::from_i64_rows(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(c.try_det(), Ok(BigInt::from(18)));
    }

    #[test]
    fn overflow_is_detected() {
        let a = Matrix::<i64>::from_i64_rows(&[&[i64::MAX / 2 + 1]]);
        assert!(a.try_mul(&a).is_err());
        assert!(a.try_add(&a).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = Matrix::<i64>::from_i64_rows(&[&[0, -3], &[7, 0]]);
        let back = Matrix::<i64>::from_json(&a.to_json().unwrap());
        assert_eq!(a, back);
    }
}
