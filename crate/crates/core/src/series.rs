//! Truncated power series in `q` and `t` and the Poincaré series for
//! `H_*(Br_n; H_1(Sigma_n^d)) ⊗ Z_p`.

use serde::{Deserialize, Serialize};

use crate::engine::{Coeff, HomologyTable, LawReport, Violation};
use crate::linalg::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{p} does not divide {d}")]
    NotDivisor { p: u64, d: usize },
    #[error("series windows differ")]
    Window,
    #[error("the inverse of 1 - u needs u without constant term")]
    ConstantTerm,
    #[error("coefficient overflow")]
    Overflow,
}

/// Coefficients of `q^i t^n` for `i <= max_q`, `n <= max_t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivariateSeries {
    pub max_q: usize,
    pub max_t: usize,
    /// `coeffs[n][i]` is the coefficient of `q^i t^n`.
    pub coeffs: Vec<Vec<i64>>,
}

impl BivariateSeries {
    pub fn zero(max_q: usize, max_t: usize) -> Self {
        BivariateSeries {
            max_q,
            max_t,
            coeffs: vec![vec![0; max_q + 1]; max_t + 1],
        }
    }

    pub fn one(max_q: usize, max_t: usize) -> Self {
        Self::monomial(1, 0, 0, max_q, max_t)
    }

    /// `c q^i t^n`, or zero if it falls outside the window.
    pub fn monomial(c: i64, i: usize, n: usize, max_q: usize, max_t: usize) -> Self {
        let mut s = Self::zero(max_q, max_t);
        if i <= max_q && n <= max_t {
            s.coeffs[n][i] = c;
        }
        s
    }

    /// Coefficient of `q^i t^n`; zero outside the window.
    pub fn coeff(&self, i: usize, n: usize) -> i64 {
        self.coeffs
            .get(n)
            .and_then(|row| row.get(i))
            .copied()
            .unwrap_or(0)
    }

    fn same_window(&self, other: &Self) -> Result<(), SeriesError> {
        if (self.max_q, self.max_t) == (other.max_q, other.max_t) {
            Ok(())
        } else {
            Err(SeriesError::Window)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_window(other)?;
        let mut out = self.clone();
        for (row, other_row) in out.coeffs.iter_mut().zip(&other.coeffs) {
            for (a, b) in row.iter_mut().zip(other_row) {
                *a = a.checked_add(*b).ok_or(SeriesError::Overflow)?;
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().flatten().for_each(|c| *c = -*c);
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_window(other)?;
        let mut out = Self::zero(self.max_q, self.max_t);
        for (n1, row1) in self.coeffs.iter().enumerate() {
            for (i1, &a) in row1.iter().enumerate().filter(|(_, &a)| a != 0) {
                for (n2, row2) in other.coeffs[..=self.max_t - n1].iter().enumerate() {
                    for (i2, &b) in row2[..=self.max_q - i1]
                        .iter()
                        .enumerate()
                        .filter(|(_, &b)| b != 0)
                    {
                        let slot = &mut out.coeffs[n1 + n2][i1 + i2];
                        let term = a.checked_mul(b).ok_or(SeriesError::Overflow)?;
                        *slot = slot.checked_add(term).ok_or(SeriesError::Overflow)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `1 / (1 - u)` for `u` with zero constant term.
    pub fn geometric_inverse(u: &Self) -> Result<Self, SeriesError> {
        if u.coeff(0, 0) != 0 {
            return Err(SeriesError::ConstantTerm);
        }
        // u^k vanishes in the window once k exceeds max_q + max_t
        let mut total = Self::one(u.max_q, u.max_t);
        let mut power = Self::one(u.max_q, u.max_t);
        for _ in 0..u.max_q + u.max_t {
            power = power.mul(u)?;
            if power.is_zero() {
                break;
            }
            total = total.add(&power)?;
        }
        Ok(total)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|&c| c == 0)
    }

    /// Coefficients of `t^0`, for series in `q` alone.
    pub fn univariate(&self) -> Vec<i64> {
        self.coeffs[0].clone()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serialize")
    }
}

fn check_prime(p: u64) -> Result<(), SeriesError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(SeriesError::NotPrime(p))
    }
}

/// `1 + u + ... + u^{m-1}`.
pub fn q_analog(m: usize, at: &BivariateSeries) -> Result<BivariateSeries, SeriesError> {
    let mut total = BivariateSeries::zero(at.max_q, at.max_t);
    let mut power = BivariateSeries::one(at.max_q, at.max_t);
    for _ in 0..m {
        total = total.add(&power)?;
        power = power.mul(at)?;
    }
    Ok(total)
}

/// `(1 + num) / (1 - den)` with both monomials given by exponents.
fn factor(
    num: (usize, usize),
    den: (usize, usize),
    max_q: usize,
    max_t: usize,
) -> Result<BivariateSeries, SeriesError> {
    let top = BivariateSeries::one(max_q, max_t)
        .add(&BivariateSeries::monomial(1, num.0, num.1, max_q, max_t))?;
    let bottom = BivariateSeries::geometric_inverse(&BivariateSeries::monomial(
        1, den.0, den.1, max_q, max_t,
    ))?;
    top.mul(&bottom)
}

fn inverse_monomial(
    i: usize,
    n: usize,
    max_q: usize,
    max_t: usize,
) -> Result<BivariateSeries, SeriesError> {
    BivariateSeries::geometric_inverse(&BivariateSeries::monomial(1, i, n, max_q, max_t))
}

/// `q t^3 / ((1 - t^2 q^2)(1 - t^2)) * prod_j (1 + q^{2p^j - 1} t^{2p^j}) /
/// (1 - q^{2p^{j+1} - 2} t^{2p^{j+1}})`.
///
/// Factors with `2p^j > max_t` are `1` in the window and are skipped.
pub fn local_series(p: u64, max_q: usize, max_t: usize) -> Result<BivariateSeries, SeriesError> {
    check_prime(p)?;
    let p = p as usize;
    let mut s = BivariateSeries::monomial(1, 1, 3, max_q, max_t);
    s = s.mul(&inverse_monomial(2, 2, max_q, max_t)?)?;
    s = s.mul(&inverse_monomial(0, 2, max_q, max_t)?)?;
    let mut pj = 1usize;
    while 2 * pj <= max_t {
        let next = pj * p;
        s = s.mul(&factor(
            (2 * pj - 1, 2 * pj),
            (2 * next - 2, 2 * next),
            max_q,
            max_t,
        )?)?;
        pj = next;
    }
    Ok(s)
}

/// The `p = 2` form `q t^3 / (1 - t^2 q^2) * prod_{i >= 0} 1 / (1 - q^{2^i - 1} t^{2^i})`
/// exactly as written; it agrees with [`local_series`] at `p = 2` in odd
/// powers of `t` and equals `(1 + t)` times it.
pub fn local_series_two(max_q: usize, max_t: usize) -> Result<BivariateSeries, SeriesError> {
    let mut s = BivariateSeries::monomial(1, 1, 3, max_q, max_t);
    s = s.mul(&inverse_monomial(2, 2, max_q, max_t)?)?;
    let mut power = 1usize;
    while power <= max_t {
        s = s.mul(&inverse_monomial(power - 1, power, max_q, max_t)?)?;
        power *= 2;
    }
    Ok(s)
}

/// `q / (1 - q^2) * prod_j (1 + q^{2p^j - 1}) / (1 - q^{2p^{j+1} - 2})`, in
/// `q` alone (`max_t = 0`).
///
/// A factor is kept while its numerator `q^{2p^j - 1}` is inside the window;
/// its denominator has a larger exponent.
pub fn stable_series(p: u64, max_q: usize) -> Result<BivariateSeries, SeriesError> {
    check_prime(p)?;
    let p = p as usize;
    let mut s = BivariateSeries::monomial(1, 1, 0, max_q, 0);
    s = s.mul(&inverse_monomial(2, 0, max_q, 0)?)?;
    let mut pj = 1usize;
    while 2 * pj - 1 <= max_q {
        let next = pj * p;
        s = s.mul(&factor((2 * pj - 1, 0), (2 * next - 2, 0), max_q, 0)?)?;
        pj = next;
    }
    Ok(s)
}

/// The printed `p = 2` stable form `q / (1 - q^2) * prod_{j >= 1} 1 / (1 - q^{2^j - 1})`.
pub fn stable_series_two(max_q: usize) -> Result<BivariateSeries, SeriesError> {
    let mut s = BivariateSeries::monomial(1, 1, 0, max_q, 0);
    s = s.mul(&inverse_monomial(2, 0, max_q, 0)?)?;
    let mut power = 2usize;
    while power - 1 <= max_q {
        s = s.mul(&inverse_monomial(power - 1, 0, max_q, 0)?)?;
        power *= 2;
    }
    Ok(s)
}

/// For every odd `n` in `table`: `rank + #p-factors` of `H_i` against the
/// coefficient of `q^i t^n` in [`local_series`].
pub fn compare_local(p: u64, table: &HomologyTable) -> Result<LawReport, SeriesError> {
    check_prime(p)?;
    if !(table.d as u64).is_multiple_of(p) {
        return Err(SeriesError::NotDivisor { p, d: table.d });
    }
    let max_n = table.ns().max().unwrap_or(0);
    let series = local_series(p, max_n, max_n)?;
    let mut report = LawReport {
        law: format!("local series p={p} d={}", table.d),
        checked: 0,
        violations: Vec::new(),
    };
    if table.coeff != Coeff::Integers {
        report.violations.push(Violation {
            n: 0,
            i: 0,
            message: "needs integer coefficients".into(),
        });
        return Ok(report);
    }
    for (&n, row) in table.rows.iter().filter(|(n, _)| *n % 2 == 1) {
        for (i, g) in row.iter().enumerate() {
            report.checked += 1;
            let got = g.dim_mod_p(p) as i64;
            let want = series.coeff(i, n);
            if got != want {
                report.violations.push(Violation {
                    n,
                    i,
                    message: format!("Z_{p}-rank {got}, series coefficient {want}"),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_inverse_is_exact() {
        let mut u = BivariateSeries::zero(6, 5);
        u.coeffs[1][2] = 3;
        u.coeffs[2][0] = -1;
        u.coeffs[0][1] = 2;
        let inv = BivariateSeries::geometric_inverse(&u).unwrap();
        let one = BivariateSeries::one(6, 5);
        assert_eq!(one.sub(&u).unwrap().mul(&inv).unwrap(), one);
        assert_eq!(
            BivariateSeries::geometric_inverse(&one),
            Err(SeriesError::ConstantTerm)
        );
    }

    #[test]
    fn q_analogs() {
        let t = BivariateSeries::monomial(-1, 0, 1, 0, 4);
        assert_eq!(q_analog(1, &t).unwrap(), BivariateSeries::one(0, 4));
        let three = q_analog(3, &t).unwrap();
        assert_eq!(
            three.coeffs,
            vec![vec![1], vec![-1], vec![1], vec![0], vec![0]]
        );
        let two = q_analog(2, &t).unwrap();
        assert_eq!((two.coeff(0, 0), two.coeff(0, 1)), (1, -1));
    }

    #[test]
    fn stable_expansions() {
        let two = stable_series(2, 11).unwrap().univariate();
        assert_eq!(two, vec![0, 1, 1, 2, 3, 4, 5, 7, 9, 11, 14, 17]);
        assert_eq!(stable_series_two(11).unwrap().univariate(), two);
        let three = stable_series(3, 12).unwrap().univariate();
        assert_eq!(three[..12], [0, 1, 1, 1, 1, 2, 3, 3, 3, 4, 5, 5]);
        // q (1 + q)(1 + q^5) / ((1 - q^2)(1 - q^4)) up to q^12, by counting
        // solutions of 1 + a + 5b + 2x + 4y = k with a, b in {0, 1}
        let count = |k: i64| {
            let mut c = 0;
            for (a, b) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let rest = k - 1 - a - 5 * b;
                for y in 0..=rest.max(0) / 4 {
                    if rest >= 0 && (rest - 4 * y) % 2 == 0 {
                        c += 1;
                    }
                }
            }
            c
        };
        assert_eq!(three, (0..=12).map(count).collect::<Vec<_>>());
    }

    #[test]
    fn local_series_shape() {
        let s = local_series(2, 12, 13).unwrap();
        // hand expansion: q t^3, then q t^5 (q + q^2 + q^3)
        assert_eq!(s.coeff(1, 3), 1);
        assert_eq!((s.coeff(1, 5), s.coeff(2, 5), s.coeff(3, 5)), (1, 1, 1));
        for n in (0..=13).step_by(2) {
            assert!((0..=12).all(|i| s.coeff(i, n) == 0), "n = {n}");
        }
        let printed = local_series_two(12, 13).unwrap();
        let t = BivariateSeries::one(12, 13)
            .add(&BivariateSeries::monomial(1, 0, 1, 12, 13))
            .unwrap();
        assert_eq!(printed, s.mul(&t).unwrap());
        for n in (1..=13).step_by(2) {
            assert!((0..=12).all(|i| s.coeff(i, n) == printed.coeff(i, n)));
        }
        assert!(matches!(
            local_series(4, 3, 3),
            Err(SeriesError::NotPrime(4))
        ));
    }
}
