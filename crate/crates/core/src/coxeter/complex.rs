//! The algebraic Salvetti complex of a finite type Artin group with
//! coefficients in a local system.
//!
//! `C_k` is one copy of the module per `k`-subset of generators, in colex
//! order. The block from `Gamma` to `Gamma \ {tau}` is
//! `sum_beta (-1)^(l(beta) + mu(Gamma, tau)) rho(beta)` over the minimal coset
//! representatives `beta`, with `rho(beta)` evaluated on a positive lift.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::group::{coset_reps_unchecked, CoxeterSpec, Element, Family, GenSet, Side};
use super::local::LocalSystem;
use crate::linalg::{
    boundary_factors, homology_from_factors, rank_mod_p, rational_rank, AbelianGroup, LinalgError,
    Matrix, MatrixJson, Route, SnfConfig,
};
use crate::scalar::{Overflow, Scalar};

/// Exponent `mu(Gamma, tau)` in the boundary sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignRule {
    /// Number of generators in `Gamma` below `tau`.
    Lower,
    /// Number of generators in `Gamma` above `tau`.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexConfig {
    pub side: Side,
    pub sign: SignRule,
}

impl ComplexConfig {
    /// Enumeration order used when selecting a configuration.
    pub const ALL: [ComplexConfig; 4] = [
        ComplexConfig {
            side: Side::Left,
            sign: SignRule::Lower,
        },
        ComplexConfig {
            side: Side::Left,
            sign: SignRule::Upper,
        },
        ComplexConfig {
            side: Side::Right,
            sign: SignRule::Lower,
        },
        ComplexConfig {
            side: Side::Right,
            sign: SignRule::Upper,
        },
    ];

    fn mu(&self, gamma: GenSet, tau: usize) -> usize {
        match self.sign {
            SignRule::Lower => gamma.iter().filter(|&g| g < tau).count(),
            SignRule::Upper => gamma.iter().filter(|&g| g > tau).count(),
        }
    }
}

impl fmt::Display for ComplexConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            SignRule::Lower => "lower",
            SignRule::Upper => "upper",
        };
        write!(f, "{}-cosets/{sign}-sign", self.side)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("boundary squared is nonzero in degree {k}: cell {gamma} to cell {gamma_second}")]
    NonzeroSquare {
        k: usize,
        gamma: GenSet,
        gamma_second: GenSet,
    },
    #[error("no sign and coset convention gives a valid complex")]
    NoValidConfig,
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Free chain complex `C_rank -> ... -> C_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex<T> {
    pub spec: CoxeterSpec,
    pub dim: usize,
    pub config: ComplexConfig,
    pub ranks: Vec<usize>,
    /// `boundaries[k]` is `d_k : C_k -> C_{k-1}` for `k = 0..=rank + 1`, with
    /// zero maps at both ends.
    pub boundaries: Vec<Matrix<T>>,
}

impl<T: Scalar> ChainComplex<T> {
    pub fn top(&self) -> usize {
        self.spec.rank
    }

    pub fn boundary(&self, k: usize) -> &Matrix<T> {
        &self.boundaries[k]
    }

    pub fn cells(&self, k: usize) -> Vec<GenSet> {
        GenSet::subsets(self.spec.rank, k)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// Integral homology in degrees `0..=rank`.
    pub fn homology(
        &self,
        route: &Route,
        cfg: &SnfConfig,
    ) -> Result<Vec<AbelianGroup>, LinalgError> {
        let factors: Vec<Vec<u64>> = self
            .boundaries
            .par_iter()
            .map(|m| boundary_factors(m, route, cfg))
            .collect::<Result<_, _>>()?;
        Ok((0..=self.top())
            .map(|k| homology_from_factors(self.ranks[k], factors[k].len(), &factors[k + 1]))
            .collect())
    }

    /// Betti numbers over the field with `p` elements.
    pub fn betti_mod_p(&self, p: u64) -> Result<Vec<usize>, LinalgError> {
        let ranks: Vec<usize> = self
            .boundaries
            .par_iter()
            .map(|m| rank_mod_p(m, p))
            .collect::<Result<_, _>>()?;
        Ok((0..=self.top())
            .map(|k| self.ranks[k] - ranks[k] - ranks[k + 1])
            .collect())
    }

    /// Betti numbers over the rationals.
    pub fn rational_betti(&self, cfg: &SnfConfig) -> Vec<usize> {
        let ranks: Vec<usize> = self
            .boundaries
            .par_iter()
            .map(|m| rational_rank(m, cfg))
            .collect();
        (0..=self.top())
            .map(|k| self.ranks[k] - ranks[k] - ranks[k + 1])
            .collect()
    }

    /// Checks `d_{k-1} d_k = 0` everywhere, naming the first failing cells.
    pub fn check_square_zero(&self) -> Result<(), ComplexError> {
        for k in 2..=self.top() {
            let prod = self.boundaries[k - 1].try_mul(&self.boundaries[k])?;
            let first = prod.entries().next().map(|(r, c, _)| (r, c));
            if let Some((r, c)) = first {
                return Err(ComplexError::NonzeroSquare {
                    k,
                    gamma: self.cells(k)[c / self.dim],
                    gamma_second: self.cells(k - 2)[r / self.dim],
                });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<ComplexJson, Overflow> {
        Ok(ComplexJson {
            family: self.spec.family,
            rank: self.spec.rank,
            dim: self.dim,
            config: self.config,
            ranks: self.ranks.clone(),
            boundaries: self
                .boundaries
                .iter()
                .map(Matrix::to_json)
                .collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub family: Family,
    pub rank: usize,
    pub dim: usize,
    pub config: ComplexConfig,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<MatrixJson>,
}

/// Square matrix stored column by column.
#[derive(Clone)]
struct Dense<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> Dense<T> {
    fn identity(dim: usize) -> Self {
        let mut data = vec![T::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = T::one();
        }
        Dense { dim, data }
    }

    /// `self * s`.
    fn mul_sparse_right(&self, s: &Matrix<T>) -> Result<Self, Overflow> {
        let dim = self.dim;
        let mut data = vec![T::zero(); dim * dim];
        for j in 0..dim {
            let out = &mut data[j * dim..(j + 1) * dim];
            for (r, v) in s.column(j) {
                let src = &self.data[r * dim..(r + 1) * dim];
                for (o, x) in out.iter_mut().zip(src) {
                    if !x.is_zero() {
                        *o = o.try_add(&x.try_mul(v)?)?;
                    }
                }
            }
        }
        Ok(Dense { dim, data })
    }

    /// `s * self`.
    fn mul_sparse_left(&self, s: &Matrix<T>) -> Result<Self, Overflow> {
        let dim = self.dim;
        let mut data = vec![T::zero(); dim * dim];
        for j in 0..dim {
            let out = &mut data[j * dim..(j + 1) * dim];
            for (c, x) in self.data[j * dim..(j + 1) * dim].iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (r, v) in s.column(c) {
                    out[*r] = out[*r].try_add(&v.try_mul(x)?)?;
                }
            }
        }
        Ok(Dense { dim, data })
    }

    fn accumulate(&mut self, other: &Self, negate: bool) -> Result<(), Overflow> {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = if negate { a.try_sub(b)? } else { a.try_add(b)? };
        }
        Ok(())
    }
}

/// `sum_beta (-1)^l(beta) rho(beta)` over minimal representatives of
/// `W_{gamma \ tau}` in `W_gamma`.
fn coset_sum<T: Scalar>(
    rho: &LocalSystem<T>,
    gamma: GenSet,
    tau: usize,
    side: Side,
) -> Result<Dense<T>, Overflow> {
    let spec = rho.spec();
    let dim = rho.dim();
    let reps = coset_reps_unchecked(spec, gamma, gamma.without(tau), side);
    let mut images: HashMap<Element, Dense<T>> = HashMap::with_capacity(reps.len());
    let mut total = Dense {
        dim,
        data: vec![T::zero(); dim * dim],
    };
    for rep in &reps {
        let image = match (rep.word.first(), rep.word.last(), side) {
            (None, _, _) => Dense::identity(dim),
            (_, Some(&g), Side::Right) => {
                let parent = rep.element.mul_right(spec.family, g);
                images[&parent].mul_sparse_right(rho.action(g))?
            }
            (Some(&g), _, Side::Left) => {
                let parent = rep.element.mul_left(spec.family, g);
                images[&parent].mul_sparse_left(rho.action(g))?
            }
            _ => unreachable!("nonempty word has both ends"),
        };
        total.accumulate(&image, rep.length % 2 == 1)?;
        images.insert(rep.element.clone(), image);
    }
    Ok(total)
}

/// Builds the complex and verifies `d^2 = 0`.
pub fn build_complex<T: Scalar>(
    rho: &LocalSystem<T>,
    config: ComplexConfig,
) -> Result<ChainComplex<T>, ComplexError> {
    let spec = *rho.spec();
    let dim = rho.dim();
    let rank = spec.rank;
    let ranks: Vec<usize> = (0..=rank)
        .map(|k| GenSet::subsets(rank, k).len() * dim)
        .collect();
    let mut boundaries = vec![Matrix::zeros(0, ranks[0])];
    for k in 1..=rank {
        let cols = GenSet::subsets(rank, k);
        let columns: Vec<Vec<(usize, usize, T)>> = cols
            .par_iter()
            .enumerate()
            .map(|(col_block, &gamma)| {
                let mut triplets = Vec::new();
                for tau in gamma.iter() {
                    let block = coset_sum(rho, gamma, tau, config.side)?;
                    let row_block = gamma.without(tau).colex_rank();
                    let negate = config.mu(gamma, tau) % 2 == 1;
                    for c in 0..dim {
                        for r in 0..dim {
                            let v = &block.data[c * dim + r];
                            if !v.is_zero() {
                                let v = if negate { -v.clone() } else { v.clone() };
                                triplets.push((row_block * dim + r, col_block * dim + c, v));
                            }
                        }
                    }
                }
                Ok(triplets)
            })
            .collect::<Result<_, Overflow>>()?;
        boundaries.push(Matrix::from_triplets(
            ranks[k - 1],
            ranks[k],
            columns.into_iter().flatten(),
        ));
    }
    boundaries.push(Matrix::zeros(ranks[rank], 0));
    let complex = ChainComplex {
        spec,
        dim,
        config,
        ranks,
        boundaries,
    };
    complex.check_square_zero()?;
    Ok(complex)
}

/// The homology every configuration must reproduce for the trivial system:
/// `H_0 = Z`, `H_1` the abelianization (`Z` in type A, `Z^2` in type B with
/// rank at least 2) and nothing above the rank.
pub fn trivial_gates(spec: CoxeterSpec, config: ComplexConfig) -> Result<bool, ComplexError> {
    let rho = LocalSystem::<i64>::trivial(spec, 1);
    let complex = match build_complex(&rho, config) {
        Ok(c) => c,
        Err(ComplexError::NonzeroSquare { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    let h = complex.homology(&Route::default(), &SnfConfig::default())?;
    let h1 = match (spec.family, spec.rank) {
        (_, 0) => None,
        (Family::A, _) | (Family::B, 1) => Some(AbelianGroup::free(1)),
        (Family::B, _) => Some(AbelianGroup::free(2)),
    };
    Ok(h[0] == AbelianGroup::free(1) && h1.is_none_or(|g| h[1] == g) && h.len() == spec.rank + 1)
}

/// First configuration in [`ComplexConfig::ALL`] that passes the trivial gates
/// and gives `d^2 = 0` for `rho`.
///
/// At small rank a wrong coset side can pass `d^2 = 0` by accident; prefer
/// [`select_config_for`] with a probe of rank at least 3.
pub fn select_config<T: Scalar>(rho: &LocalSystem<T>) -> Result<ChainComplex<T>, ComplexError> {
    let config = select_config_for(std::slice::from_ref(rho))?;
    build_complex(rho, config)
}

/// First configuration that passes the trivial gates and `d^2 = 0` for every
/// system in `probes`.
pub fn select_config_for<T: Scalar>(
    probes: &[LocalSystem<T>],
) -> Result<ComplexConfig, ComplexError> {
    'configs: for config in ComplexConfig::ALL {
        for rho in probes {
            if !trivial_gates(*rho.spec(), config)? {
                continue 'configs;
            }
            match build_complex(rho, config) {
                Ok(_) => {}
                Err(ComplexError::NonzeroSquare { .. }) => continue 'configs,
                Err(e) => return Err(e),
            }
        }
        return Ok(config);
    }
    Err(ComplexError::NoValidConfig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::local::{t_local_system, TModule, TVariant};
    use crate::surface::{build_rep, Construction, Order};

    fn trivial_homology(spec: CoxeterSpec, config: ComplexConfig) -> Vec<AbelianGroup> {
        let c = build_complex(&LocalSystem::<i64>::trivial(spec, 1), config).unwrap();
        c.homology(&Route::default(), &SnfConfig::default())
            .unwrap()
    }

    #[test]
    fn braid_group_on_two_strands() {
        for config in ComplexConfig::ALL {
            let h = trivial_homology(CoxeterSpec::type_a(1), config);
            assert_eq!(h, vec![AbelianGroup::free(1), AbelianGroup::free(1)]);
        }
    }

    #[test]
    fn braid_group_on_three_strands() {
        let config = ComplexConfig::ALL[0];
        let c = build_complex(
            &LocalSystem::<i64>::trivial(CoxeterSpec::type_a(2), 1),
            config,
        )
        .unwrap();
        assert_eq!(c.ranks, vec![1, 2, 1]);
        assert_eq!(c.boundary(1), &Matrix::zeros(1, 2));
        // both coset sums are 1 - 1 + 1 = 1; removing s1 carries mu = 1
        assert_eq!(c.boundary(2), &Matrix::from_i64_rows(&[&[-1], &[1]]));
        let h = c
            .homology(&Route::default(), &SnfConfig::default())
            .unwrap();
        assert_eq!(
            h,
            vec![
                AbelianGroup::free(1),
                AbelianGroup::free(1),
                AbelianGroup::zero()
            ]
        );
    }

    #[test]
    fn cell_counts_are_binomial() {
        let c = build_complex(
            &LocalSystem::<i64>::trivial(CoxeterSpec::type_a(5), 2),
            ComplexConfig::ALL[0],
        )
        .unwrap();
        assert_eq!(c.ranks, vec![2, 10, 20, 20, 10, 2]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn surface_system_needs_matching_side() {
        let rep = build_rep::<i64>(4, 3, Construction::B, Order::RightToLeft).unwrap();
        let rho = LocalSystem::from_surface(&rep).unwrap();
        let chosen = select_config(&rho).unwrap();
        assert_eq!(chosen.config.side, Side::Right);
        let wrong = ComplexConfig {
            side: Side::Left,
            sign: SignRule::Lower,
        };
        assert!(matches!(
            build_complex(&rho, wrong),
            Err(ComplexError::NonzeroSquare { .. })
        ));
    }

    #[test]
    fn type_b_systems_build() {
        for v in TVariant::ALL {
            let rho = t_local_system::<i64>(3, 4, TModule::Full, v).unwrap();
            select_config(&rho).unwrap();
        }
    }
}
