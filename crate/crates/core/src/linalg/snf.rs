//! Smith normal form over the integers.
//!
//! Large inputs go through sparse elimination on `±1` pivots first; the dense
//! remainder (usually small) is diagonalized by gcd row and column steps.
//! Fixed-width scalars are tried first and the computation is redone with
//! [`BigInt`] on overflow. If entries of the remainder outgrow the bit budget,
//! the caller gets [`LinalgError::ResourceLimit`] and can switch to the
//! modular route in [`super::modular`].

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::elim::{Eliminator, IntDomain};
use super::matrix::Matrix;
use super::LinalgError;
use crate::scalar::{Overflow, Scalar};

/// Knobs for the exact routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfConfig {
    /// Maximum entry size, in bits, tolerated in the dense remainder.
    pub bit_budget: u64,
    /// Selects the large primes used for rational ranks in the modular route.
    pub seed: u64,
}

impl Default for SnfConfig {
    fn default() -> Self {
        SnfConfig {
            bit_budget: 4096,
            seed: 0,
        }
    }
}

impl SnfConfig {
    /// Reads `SUPERBRAID_BIT_BUDGET` if set.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(b) = std::env::var("SUPERBRAID_BIT_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
        {
            cfg.bit_budget = b;
        }
        cfg
    }
}

/// Invariant factors of a matrix, optionally with the unimodular transforms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm<T> {
    /// Nonzero invariant factors `d_1 | d_2 | ... | d_r`, all positive.
    pub divisors: Vec<T>,
    /// `(U, V)` with `U * M * V` diagonal.
    pub transforms: Option<(Matrix<T>, Matrix<T>)>,
}

impl<T: Scalar> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// The diagonal matrix `U * M * V` of the given shape.
    pub fn diagonal(&self, rows: usize, cols: usize) -> Matrix<T> {
        Matrix::from_triplets(
            rows,
            cols,
            self.divisors
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, d)| (i, i, d)),
        )
    }

    /// Divisors greater than one.
    pub fn torsion(&self) -> impl Iterator<Item = &T> {
        self.divisors.iter().filter(|d| !d.is_one())
    }
}

struct DenseSnf<T> {
    a: Vec<Vec<T>>,
    u: Option<Vec<Vec<T>>>,
    v: Option<Vec<Vec<T>>>,
    rows: usize,
    cols: usize,
}

fn identity_rows<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

impl<T: Scalar> DenseSnf<T> {
    fn new(a: Vec<Vec<T>>, cols: usize, track: bool) -> Self {
        let rows = a.len();
        DenseSnf {
            u: track.then(|| identity_rows(rows)),
            v: track.then(|| identity_rows(cols)),
            a,
            rows,
            cols,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i -= q * row_j
    fn row_axpy(&mut self, i: usize, j: usize, q: &T) -> Result<(), Overflow> {
        for c in 0..self.cols {
            if !self.a[j][c].is_zero() {
                self.a[i][c] = self.a[i][c].sub_mul(q, &self.a[j][c])?;
            }
        }
        if let Some(u) = &mut self.u {
            for c in 0..u[0].len() {
                if !u[j][c].is_zero() {
                    u[i][c] = u[i][c].sub_mul(q, &u[j][c])?;
                }
            }
        }
        Ok(())
    }

    /// col_i -= q * col_j
    fn col_axpy(&mut self, i: usize, j: usize, q: &T) -> Result<(), Overflow> {
        for row in &mut self.a {
            if !row[j].is_zero() {
                row[i] = row[i].sub_mul(q, &row[j])?;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !row[j].is_zero() {
                    row[i] = row[i].sub_mul(q, &row[j])?;
                }
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -x.clone();
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -x.clone();
            }
        }
    }

    fn min_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(T, usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if !x.is_zero() {
                    let ax = x.abs();
                    if best.as_ref().is_none_or(|(b, _, _)| ax < *b) {
                        let unit = ax.is_one();
                        best = Some((ax, i, j));
                        if unit {
                            return best.map(|(_, i, j)| (i, j));
                        }
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn max_bits(&self, t: usize) -> u64 {
        (t..self.rows)
            .flat_map(|i| self.a[i][t..].iter())
            .map(Scalar::bits)
            .max()
            .unwrap_or(0)
    }

    fn run(&mut self, bit_budget: Option<u64>) -> Result<Vec<T>, LinalgError> {
        let mut diag = Vec::new();
        for t in 0..self.rows.min(self.cols) {
            let Some((pi, pj)) = self.min_in_block(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.a[t][t].clone();
                let mut clean = true;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].clone() / p.clone();
                        self.row_axpy(i, t, &q)?;
                        clean &= self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].clone() / p.clone();
                        self.col_axpy(j, t, &q)?;
                        clean &= self.a[t][j].is_zero();
                    }
                }
                if !clean {
                    // move the smallest leftover in row/column t onto the diagonal
                    let mut best = (p.abs(), t, t);
                    for i in t + 1..self.rows {
                        let x = self.a[i][t].abs();
                        if !x.is_zero() && x < best.0 {
                            best = (x, i, t);
                        }
                    }
                    for j in t + 1..self.cols {
                        let x = self.a[t][j].abs();
                        if !x.is_zero() && x < best.0 {
                            best = (x, t, j);
                        }
                    }
                    self.swap_rows(t, best.1);
                    self.swap_cols(t, best.2);
                    continue;
                }
                let bad = (t + 1..self.rows).find(|&i| {
                    self.a[i][t + 1..]
                        .iter()
                        .any(|x| !x.is_zero() && !(x.clone() % p.clone()).is_zero())
                });
                match bad {
                    Some(i) => self.row_axpy(t, i, &-T::one())?,
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            diag.push(self.a[t][t].clone());
            if let Some(budget) = bit_budget {
                if self.max_bits(t) > budget {
                    return Err(LinalgError::ResourceLimit(format!(
                        "dense Smith remainder exceeded {budget} bits"
                    )));
                }
            }
        }
        Ok(diag)
    }
}

fn to_matrix<T: Scalar>(rows: Vec<Vec<T>>, cols: usize) -> Matrix<T> {
    let r = rows.len();
    let triplets = rows.into_iter().enumerate().flat_map(|(i, row)| {
        row.into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(j, v)| (i, j, v))
    });
    Matrix::from_triplets(r, cols, triplets)
}

/// Dense Smith normal form, with transforms when asked.
pub fn snf_dense<T: Scalar>(
    m: &Matrix<T>,
    want_transforms: bool,
) -> Result<SmithForm<T>, LinalgError> {
    let mut work = DenseSnf::new(m.to_dense(), m.cols(), want_transforms);
    let diag = work.run(None)?;
    let transforms = if want_transforms {
        let u = to_matrix(work.u.take().expect("tracked"), m.rows());
        let v = to_matrix(work.v.take().expect("tracked"), m.cols());
        Some((u, v))
    } else {
        None
    };
    Ok(SmithForm {
        divisors: diag,
        transforms,
    })
}

/// Sorts a diagonal into a divisibility chain (gcd/lcm sweeps).
pub fn normalize_diagonal<T: Scalar>(mut diag: Vec<T>) -> Vec<T> {
    diag.retain(|d| !d.is_zero());
    for d in &mut diag {
        *d = d.abs();
    }
    let n = diag.len();
    for i in 0..n {
        for j in i + 1..n {
            if !(diag[j].clone() % diag[i].clone()).is_zero() {
                let g = diag[i].gcd(&diag[j]);
                let l = diag[i].lcm(&diag[j]);
                diag[i] = g;
                diag[j] = l;
            }
        }
    }
    diag.sort();
    diag
}

fn snf_sparse<T: Scalar>(m: &Matrix<T>, cfg: &SnfConfig) -> Result<SmithForm<T>, LinalgError> {
    let domain = IntDomain::<T>::new();
    let mut elim = Eliminator::new(&domain, m.cols(), m.rows_sparse());
    let units = elim.run(1)?.len();
    let rest = elim.remainder();
    drop(elim);
    let mut divisors = vec![T::one(); units];
    if !rest.is_empty() {
        let cols = rest[0].len();
        log::debug!("dense Smith remainder {}x{}", rest.len(), cols);
        let mut dense = DenseSnf::new(rest, cols, false);
        divisors.extend(dense.run(Some(cfg.bit_budget))?);
    }
    Ok(SmithForm {
        divisors: normalize_diagonal(divisors),
        transforms: None,
    })
}

/// Smith normal form of `m`.
///
/// Without transforms the sparse route is used; fixed-width scalars report
/// [`LinalgError::Overflow`] instead of wrapping.
pub fn snf<T: Scalar>(
    m: &Matrix<T>,
    want_transforms: bool,
    cfg: &SnfConfig,
) -> Result<SmithForm<T>, LinalgError> {
    if want_transforms {
        snf_dense(m, true)
    } else {
        snf_sparse(m, cfg)
    }
}

/// Invariant factors with automatic promotion: `i64` first, then [`BigInt`].
pub fn invariant_factors<T: Scalar>(
    m: &Matrix<T>,
    cfg: &SnfConfig,
) -> Result<Vec<BigInt>, LinalgError> {
    if let Ok(small) = m.convert::<i64>() {
        match snf(&small, false, cfg) {
            Ok(s) => return Ok(s.divisors.iter().map(|d| BigInt::from(*d)).collect()),
            Err(LinalgError::Overflow(_)) => log::debug!("i64 overflow, retrying with BigInt"),
            Err(e) => return Err(e),
        }
    }
    let big = m.convert::<BigInt>()?;
    Ok(snf(&big, false, cfg)?.divisors)
}

/// True if every divisor divides the next one.
pub fn is_divisibility_chain<T: Scalar>(divisors: &[T]) -> bool {
    divisors.iter().all(|d| d.is_positive())
        && divisors
            .windows(2)
            .all(|w| (w[1].clone() % w[0].clone()).is_zero())
}

/// `|det| == 1` for a square matrix.
pub fn is_unimodular<T: Scalar>(m: &Matrix<T>) -> bool {
    let big = m.convert::<BigInt>().expect("BigInt holds everything");
    m.is_square() && big.try_det().map(|d| d.abs().is_one()).unwrap_or(false)
}
