//! Modular ranks and `p`-local invariant factors.
//!
//! The local route eliminates over `Z/p^e` pivoting on entries of minimal
//! valuation; the pivot valuations are exactly the `p`-adic valuations of the
//! invariant factors below `e`. Combining the local data over a set of primes
//! reconstructs the invariant factors whose prime support lies in that set.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::elim::{Eliminator, LocalDomain};
use super::matrix::Matrix;
use super::LinalgError;
use crate::linalg::snf::SnfConfig;
use crate::scalar::Scalar;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// 31-bit primes used for rational ranks.
const RANK_PRIMES: [u64; 6] = [
    2_147_483_647,
    2_147_483_629,
    2_147_483_587,
    2_147_483_579,
    2_147_483_563,
    2_147_483_549,
];

fn check_prime(p: u64) -> Result<(), LinalgError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(LinalgError::NotPrime(p))
    }
}

/// Largest exponent with `p^e < 2^62`.
fn max_exponent(p: u64) -> u32 {
    let mut e = 0;
    let mut m: u64 = 1;
    while let Some(next) = m.checked_mul(p).filter(|x| *x < (1 << 62)) {
        m = next;
        e += 1;
    }
    e
}

/// Pivot valuations of `m` over `Z/p^e`, ascending.
pub fn local_valuations<T: Scalar>(
    m: &Matrix<T>,
    p: u64,
    exponent: u32,
) -> Result<Vec<u32>, LinalgError> {
    check_prime(p)?;
    let domain = LocalDomain::new(p, exponent);
    let mut elim = Eliminator::new(&domain, m.cols(), m.rows_mod(domain.modulus()));
    let mut levels = elim.run(exponent)?;
    levels.sort_unstable();
    Ok(levels)
}

/// Rank over the field with `p` elements.
pub fn rank_mod_p<T: Scalar>(m: &Matrix<T>, p: u64) -> Result<usize, LinalgError> {
    Ok(local_valuations(m, p, 1)?.len())
}

/// Rank over the rationals, as the largest rank modulo a few large primes.
pub fn rational_rank<T: Scalar>(m: &Matrix<T>, cfg: &SnfConfig) -> usize {
    let start = (cfg.seed as usize) % RANK_PRIMES.len();
    (0..2)
        .into_par_iter()
        .map(|i| {
            let q = RANK_PRIMES[(start + i) % RANK_PRIMES.len()];
            rank_mod_p(m, q).expect("rank primes are prime")
        })
        .max()
        .unwrap_or(0)
}

/// Invariant factors reconstructed from local data at `primes`.
///
/// Factors are exact up to primes outside the list: any prime not in
/// `primes` is reported as a unit.
pub fn modular_invariant_factors<T: Scalar>(
    m: &Matrix<T>,
    primes: &[u64],
    cfg: &SnfConfig,
) -> Result<Vec<BigInt>, LinalgError> {
    let local: Vec<(u64, u32, Vec<u32>)> = primes
        .par_iter()
        .map(|&p| {
            let e = max_exponent(p);
            Ok((p, e, local_valuations(m, p, e)?))
        })
        .collect::<Result<_, LinalgError>>()?;
    // a local rank can only undercount, so the maximum is the best estimate
    let rank = local
        .iter()
        .map(|(_, _, v)| v.len())
        .max()
        .unwrap_or(0)
        .max(rational_rank(m, cfg));
    if let Some((p, e, _)) = local.iter().find(|(_, _, v)| v.len() < rank) {
        return Err(LinalgError::ResourceLimit(format!(
            "invariant factor divisible by {p}^{e}"
        )));
    }
    let mut divisors = vec![BigInt::from(1); rank];
    for (p, _, vals) in local {
        for (d, v) in divisors.iter_mut().zip(vals) {
            *d *= BigInt::from(p).pow(v);
        }
    }
    Ok(divisors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(12), vec![2, 3, 5, 7, 11]);
        assert_eq!(prime_factors(60), vec![2, 3, 5]);
        assert!(RANK_PRIMES.iter().all(|&p| is_prime(p)));
    }

    #[test]
    fn ranks_mod_p() {
        let m = Matrix::<i64>::from_i64_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(rank_mod_p(&m, 2).unwrap(), 1);
        assert_eq!(rank_mod_p(&m, 5).unwrap(), 2);
        assert_eq!(rank_mod_p(&Matrix::<i64>::zeros(3, 3), 7).unwrap(), 0);
        assert!(matches!(rank_mod_p(&m, 4), Err(LinalgError::NotPrime(4))));
    }

    #[test]
    fn local_valuations_match_divisors() {
        // SNF of this matrix is diag(1, 4, 24)
        let m = Matrix::<i64>::from_i64_rows(&[&[1, 0, 0], &[0, 4, 0], &[0, 0, 24]]);
        assert_eq!(local_valuations(&m, 2, 10).unwrap(), vec![0, 2, 3]);
        assert_eq!(local_valuations(&m, 3, 5).unwrap(), vec![0, 0, 1]);
        let d = modular_invariant_factors(&m, &[2, 3], &SnfConfig::default()).unwrap();
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(4), BigInt::from(24)]);
    }
}
