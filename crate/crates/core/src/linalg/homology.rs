use num_traits::ToPrimitive;

use super::abelian::AbelianGroup;
use super::matrix::Matrix;
use super::modular::{modular_invariant_factors, rank_mod_p};
use super::snf::{invariant_factors, SnfConfig};
use super::LinalgError;
use crate::scalar::Scalar;

/// How invariant factors of a boundary are obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Route {
    /// Full integer Smith form; falls back to `Modular` over the given
    /// primes when the bit budget is exceeded.
    Exact { fallback_primes: Vec<u64> },
    /// Local elimination at each listed prime plus a rational rank.
    Modular { primes: Vec<u64> },
}

impl Default for Route {
    fn default() -> Self {
        Route::Exact {
            fallback_primes: Vec::new(),
        }
    }
}

fn check_pair<T: Scalar>(d_k: &Matrix<T>, d_k1: &Matrix<T>) -> Result<(), LinalgError> {
    if d_k.cols() != d_k1.rows() {
        return Err(LinalgError::DimensionMismatch {
            left: (d_k.rows(), d_k.cols()),
            right: (d_k1.rows(), d_k1.cols()),
        });
    }
    Ok(())
}

/// Invariant factors of a boundary map along the requested route.
pub fn boundary_factors<T: Scalar>(
    m: &Matrix<T>,
    route: &Route,
    cfg: &SnfConfig,
) -> Result<Vec<u64>, LinalgError> {
    let divisors = match route {
        Route::Exact { fallback_primes } => match invariant_factors(m, cfg) {
            Err(LinalgError::ResourceLimit(msg)) if !fallback_primes.is_empty() => {
                log::warn!("{msg}; switching to the modular route");
                modular_invariant_factors(m, fallback_primes, cfg)?
            }
            other => other?,
        },
        Route::Modular { primes } => modular_invariant_factors(m, primes, cfg)?,
    };
    divisors
        .iter()
        .map(|d| {
            d.to_u64().ok_or_else(|| {
                LinalgError::ResourceLimit(format!("invariant factor {d} exceeds u64"))
            })
        })
        .collect()
}

/// `H_k = ker d_k / im d_{k+1}` from precomputed data: the rank of `d_k`
/// and the invariant factors of `d_{k+1}`.
pub fn homology_from_factors(dim: usize, rank_out: usize, incoming: &[u64]) -> AbelianGroup {
    let free = dim - rank_out - incoming.len();
    AbelianGroup::new(free, incoming.iter().copied().filter(|&d| d != 1))
}

/// Homology at the middle of `C_{k+1} --d_k1--> C_k --d_k--> C_{k-1}`.
///
/// Checks that the composite vanishes.
pub fn homology_pair<T: Scalar>(
    d_k: &Matrix<T>,
    d_k1: &Matrix<T>,
) -> Result<AbelianGroup, LinalgError> {
    homology_pair_with(d_k, d_k1, &Route::default(), &SnfConfig::default())
}

pub fn homology_pair_with<T: Scalar>(
    d_k: &Matrix<T>,
    d_k1: &Matrix<T>,
    route: &Route,
    cfg: &SnfConfig,
) -> Result<AbelianGroup, LinalgError> {
    check_pair(d_k, d_k1)?;
    if !d_k.try_mul(d_k1)?.is_zero() {
        return Err(LinalgError::NonzeroComposite);
    }
    let out = boundary_factors(d_k, route, cfg)?.len();
    let incoming = boundary_factors(d_k1, route, cfg)?;
    Ok(homology_from_factors(d_k.cols(), out, &incoming))
}

/// `dim H_k` with coefficients in `F_p`.
pub fn betti_mod_p<T: Scalar>(
    d_k: &Matrix<T>,
    d_k1: &Matrix<T>,
    p: u64,
) -> Result<usize, LinalgError> {
    check_pair(d_k, d_k1)?;
    Ok(d_k.cols() - rank_mod_p(d_k, p)? - rank_mod_p(d_k1, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_by_two() {
        let zero = Matrix::<i64>::zeros(1, 1);
        let two = Matrix::<i64>::from_i64_rows(&[&[2]]);
        let h = homology_pair(&zero, &two).unwrap();
        assert_eq!(h, AbelianGroup::new(0, [2]));
    }

    #[test]
    fn free_when_boundaries_vanish() {
        let h = homology_pair(&Matrix::<i64>::zeros(1, 1), &Matrix::<i64>::zeros(1, 1)).unwrap();
        assert_eq!(h, AbelianGroup::free(1));
    }

    #[test]
    fn cyclic_of_order_six() {
        let d_k = Matrix::<i64>::zeros(1, 2);
        let d_k1 = Matrix::<i64>::from_i64_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            homology_pair(&d_k, &d_k1).unwrap(),
            AbelianGroup::new(0, [6])
        );
    }

    #[test]
    fn rejects_bad_pairs() {
        let a = Matrix::<i64>::from_i64_rows(&[&[1]]);
        assert!(matches!(
            homology_pair(&a, &a),
            Err(LinalgError::NonzeroComposite)
        ));
        let b = Matrix::<i64>::zeros(2, 3);
        assert!(matches!(
            homology_pair(&a, &b),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn modular_route_agrees() {
        let d_k = Matrix::<i64>::zeros(1, 2);
        let d_k1 = Matrix::<i64>::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let route = Route::Modular { primes: vec![2, 3] };
        let h = homology_pair_with(&d_k, &d_k1, &route, &SnfConfig::default()).unwrap();
        assert_eq!(h, AbelianGroup::new(0, [6]));
        assert_eq!(betti_mod_p(&d_k, &d_k1, 2).unwrap(), 1);
        assert_eq!(betti_mod_p(&d_k, &d_k1, 5).unwrap(), 0);
    }
}
