//! Sparse Schur-complement elimination shared by the integer and modular
//! Smith form routes.
//!
//! A domain decides which entries are eligible pivots at a given level (units
//! at level 0, `p^v`-multiples at level `v` for the local rings). Pivot rows
//! and columns are removed after each step; the updated rows form the Schur
//! complement, which carries the same invariant factors as the input minus the
//! pivot just consumed.

use crate::scalar::{Overflow, Scalar};

pub(crate) trait Domain {
    type E: Clone + Send + Sync;

    fn is_zero(&self, e: &Self::E) -> bool;

    /// Pivot level of a nonzero entry; `u32::MAX` if it may never pivot.
    fn level(&self, e: &Self::E) -> u32;

    /// `f` with `f * pivot == a`, given `level(pivot) <= level(a)`.
    fn factor(&self, a: &Self::E, pivot: &Self::E) -> Self::E;

    /// `a - f * b`.
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Result<Self::E, Overflow>;

    /// `-f * b`.
    fn neg_mul(&self, f: &Self::E, b: &Self::E) -> Result<Self::E, Overflow>;
}

/// Integers, pivoting only on `±1`.
pub(crate) struct IntDomain<T>(std::marker::PhantomData<T>);

impl<T> IntDomain<T> {
    pub(crate) fn new() -> Self {
        IntDomain(std::marker::PhantomData)
    }
}

impl<T: Scalar> Domain for IntDomain<T> {
    type E = T;

    fn is_zero(&self, e: &T) -> bool {
        e.is_zero()
    }

    fn level(&self, e: &T) -> u32 {
        if e.abs().is_one() {
            0
        } else {
            u32::MAX
        }
    }

    fn factor(&self, a: &T, pivot: &T) -> T {
        // pivot is ±1
        a.clone() * pivot.clone()
    }

    fn sub_mul(&self, a: &T, f: &T, b: &T) -> Result<T, Overflow> {
        a.sub_mul(f, b)
    }

    fn neg_mul(&self, f: &T, b: &T) -> Result<T, Overflow> {
        Ok(-(f.try_mul(b)?))
    }
}

/// The local ring `Z/p^e`; level of an entry is its `p`-adic valuation.
pub(crate) struct LocalDomain {
    p: u64,
    modulus: u64,
}

impl LocalDomain {
    pub(crate) fn new(p: u64, exponent: u32) -> Self {
        let modulus = p
            .checked_pow(exponent)
            .filter(|m| *m < (1 << 62))
            .expect("modulus fits in 62 bits");
        LocalDomain { p, modulus }
    }

    pub(crate) fn modulus(&self) -> u64 {
        self.modulus
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    fn split(&self, mut a: u64) -> (u32, u64) {
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        (v, a)
    }
}

/// Inverse of a unit modulo `m`.
pub(crate) fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "{a} is not a unit mod {m}");
    s0.rem_euclid(m as i128) as u64
}

impl Domain for LocalDomain {
    type E = u64;

    fn is_zero(&self, e: &u64) -> bool {
        *e == 0
    }

    fn level(&self, e: &u64) -> u32 {
        self.split(*e).0
    }

    fn factor(&self, a: &u64, pivot: &u64) -> u64 {
        let (va, ua) = self.split(*a);
        let (vp, up) = self.split(*pivot);
        debug_assert!(va >= vp);
        let shift = self.p.pow(va - vp) % self.modulus;
        self.mulmod(self.mulmod(shift, ua), inv_mod(up, self.modulus))
    }

    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> Result<u64, Overflow> {
        let prod = self.mulmod(*f, *b);
        Ok((*a + self.modulus - prod) % self.modulus)
    }

    fn neg_mul(&self, f: &u64, b: &u64) -> Result<u64, Overflow> {
        let prod = self.mulmod(*f, *b);
        Ok((self.modulus - prod) % self.modulus)
    }
}

pub(crate) struct Eliminator<'d, D: Domain> {
    domain: &'d D,
    rows: Vec<Vec<(u32, D::E)>>,
    row_active: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    col_active: Vec<bool>,
}

/// Number of candidate rows inspected per pivot search.
const SEARCH_ROWS: usize = 6;

impl<'d, D: Domain> Eliminator<'d, D> {
    pub(crate) fn new(domain: &'d D, cols: usize, rows: Vec<Vec<(u32, D::E)>>) -> Self {
        let mut col_rows = vec![Vec::new(); cols];
        let mut col_count = vec![0u32; cols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c as usize].push(r as u32);
                col_count[*c as usize] += 1;
            }
        }
        let row_active = rows.iter().map(|r| !r.is_empty()).collect();
        Eliminator {
            domain,
            rows,
            row_active,
            col_rows,
            col_count,
            col_active: vec![true; cols],
        }
    }

    /// Picks a pivot of exactly `level`, preferring short rows and columns.
    fn find_pivot(&self, level: u32) -> Option<(usize, usize)> {
        let mut order: Vec<(usize, usize)> = self
            .rows
            .iter()
            .enumerate()
            .filter(|(r, row)| self.row_active[*r] && !row.is_empty())
            .map(|(r, row)| (row.len(), r))
            .collect();
        order.sort_unstable();
        let mut best: Option<(u64, usize, usize)> = None;
        let mut seen = 0;
        for (len, r) in order {
            if let Some((score, _, _)) = best {
                if score == 0 || seen >= SEARCH_ROWS {
                    break;
                }
            }
            let mut row_best: Option<(u32, usize)> = None;
            for (c, e) in &self.rows[r] {
                if self.domain.level(e) == level {
                    let cc = self.col_count[*c as usize];
                    if row_best.is_none_or(|(bc, _)| cc < bc) {
                        row_best = Some((cc, *c as usize));
                    }
                }
            }
            if let Some((cc, c)) = row_best {
                seen += 1;
                let score = (len as u64 - 1) * (cc as u64 - 1);
                if best.is_none_or(|(s, _, _)| score < s) {
                    best = Some((score, r, c));
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    fn entry(&self, r: usize, c: u32) -> Option<&D::E> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |(col, _)| *col)
            .ok()
            .map(|i| &row[i].1)
    }

    fn eliminate(&mut self, pr: usize, pc: usize) -> Result<(), Overflow> {
        let pivot_row = std::mem::take(&mut self.rows[pr]);
        self.row_active[pr] = false;
        self.col_active[pc] = false;
        for (c, _) in &pivot_row {
            self.col_count[*c as usize] -= 1;
        }
        let pivot = pivot_row
            .iter()
            .find(|(c, _)| *c as usize == pc)
            .map(|(_, e)| e.clone())
            .expect("pivot present");

        let mut targets = std::mem::take(&mut self.col_rows[pc]);
        targets.sort_unstable();
        targets.dedup();
        for r in targets {
            let r = r as usize;
            if !self.row_active[r] {
                continue;
            }
            let Some(a) = self.entry(r, pc as u32).cloned() else {
                continue;
            };
            let f = self.domain.factor(&a, &pivot);
            let old = std::mem::take(&mut self.rows[r]);
            let mut merged = Vec::with_capacity(old.len() + pivot_row.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < pivot_row.len() {
                let ci = old.get(i).map_or(u32::MAX, |e| e.0);
                let cj = pivot_row.get(j).map_or(u32::MAX, |e| e.0);
                if ci < cj {
                    merged.push(old[i].clone());
                    i += 1;
                } else if cj < ci {
                    let v = self.domain.neg_mul(&f, &pivot_row[j].1)?;
                    if !self.domain.is_zero(&v) {
                        self.col_count[cj as usize] += 1;
                        self.col_rows[cj as usize].push(r as u32);
                        merged.push((cj, v));
                    }
                    j += 1;
                } else {
                    let v = if ci as usize == pc {
                        None
                    } else {
                        let v = self.domain.sub_mul(&old[i].1, &f, &pivot_row[j].1)?;
                        (!self.domain.is_zero(&v)).then_some(v)
                    };
                    match v {
                        Some(v) => merged.push((ci, v)),
                        None => self.col_count[ci as usize] -= 1,
                    }
                    i += 1;
                    j += 1;
                }
            }
            if merged.is_empty() {
                self.row_active[r] = false;
            }
            self.rows[r] = merged;
        }
        Ok(())
    }

    /// Eliminates all pivots of level `0..max_level`, lowest level first.
    /// Returns the pivot levels in order.
    pub(crate) fn run(&mut self, max_level: u32) -> Result<Vec<u32>, Overflow> {
        let mut levels = Vec::new();
        let mut level = 0;
        while level < max_level {
            match self.find_pivot(level) {
                Some((r, c)) => {
                    self.eliminate(r, c)?;
                    levels.push(level);
                }
                None => {
                    if !self.row_active.iter().any(|a| *a) {
                        break;
                    }
                    level += 1;
                }
            }
        }
        Ok(levels)
    }

    /// Remaining nonzero submatrix as dense rows over the active columns.
    pub(crate) fn remainder(&self) -> Vec<Vec<D::E>>
    where
        D::E: Default,
    {
        let cols: Vec<usize> = (0..self.col_active.len())
            .filter(|&c| self.col_active[c] && self.col_count[c] > 0)
            .collect();
        let mut index = vec![usize::MAX; self.col_active.len()];
        for (i, &c) in cols.iter().enumerate() {
            index[c] = i;
        }
        self.rows
            .iter()
            .enumerate()
            .filter(|(r, row)| self.row_active[*r] && !row.is_empty())
            .map(|(_, row)| {
                let mut dense = vec![D::E::default(); cols.len()];
                for (c, e) in row {
                    dense[index[*c as usize]] = e.clone();
                }
                dense
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_inverse() {
        for m in [7u64, 8, 27, 1 << 40] {
            for a in 1..20u64 {
                if num_integer::gcd(a, m) == 1 {
                    assert_eq!((a as u128 * inv_mod(a, m) as u128 % m as u128) as u64, 1);
                }
            }
        }
    }

    #[test]
    fn local_levels_are_valuations() {
        let d = LocalDomain::new(2, 10);
        assert_eq!(d.level(&1), 0);
        assert_eq!(d.level(&12), 2);
        assert_eq!(d.factor(&12, &4) * 4 % 1024, 12);
    }

    #[test]
    fn eliminates_a_permutation_matrix() {
        let dom = IntDomain::<i64>::new();
        let rows = vec![vec![(1u32, 1i64)], vec![(0, -1)], vec![(2, 1)]];
        let mut e = Eliminator::new(&dom, 3, rows);
        assert_eq!(e.run(1).unwrap(), vec![0, 0, 0]);
        assert!(e.remainder().is_empty());
    }
}
