//! Twisted homology of braid groups with coefficients in the first homology
//! of the superelliptic fiber, plus the companion computations: trivial
//! coefficients, `B(d, d, n)` and the type B systems.

mod cache;
mod calibration;
mod verify;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{
    build_complex, select_config_for, t_local_system, ChainComplex, ComplexConfig, ComplexError,
    CoxeterSpec, LocalSystem, LocalSystemError, TModule, TVariant,
};
use crate::linalg::modular::{prime_factors, primes_up_to};
use crate::linalg::{is_prime, AbelianGroup, LinalgError, Route, SnfConfig};
use crate::scalar::{Overflow, Scalar};
use crate::surface::{build_rep, build_rep_relaxed, Construction, Order, RepError, SurfaceRep};

pub use cache::{Cache, CacheEntry, GroupJson};
pub use calibration::{
    CalibrationReport, CandidateReport, CandidateStatus, VariantCheck, VariantReport,
};
pub use verify::{
    compare_dimensions, verify_covering_iso, verify_euler, verify_stability, verify_torsion_law,
    verify_universal_coefficients, verify_unstable_free, ColumnStability, HighlightCheck,
    LawReport, StabilityReport, Violation,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Coefficient ring of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coeff {
    Integers,
    Prime(u64),
}

impl Coeff {
    /// Tag used in cache file names: `z` or `f5`.
    pub fn file_tag(&self) -> String {
        match self {
            Coeff::Integers => "z".into(),
            Coeff::Prime(p) => format!("f{p}"),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Integers => write!(f, "z"),
            Coeff::Prime(p) => write!(f, "f:{p}"),
        }
    }
}

impl FromStr for Coeff {
    type Err = EngineError;

    /// Accepts `z`, `f:p` and `fp`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("z") {
            return Ok(Coeff::Integers);
        }
        let digits = s
            .strip_prefix("f:")
            .or_else(|| s.strip_prefix('f'))
            .or_else(|| s.strip_prefix("F:"))
            .or_else(|| s.strip_prefix('F'))
            .ok_or_else(|| EngineError::BadCoeff(s.to_string()))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| EngineError::BadCoeff(s.to_string()))?;
        if !is_prime(p) {
            return Err(EngineError::NotPrime(p));
        }
        Ok(Coeff::Prime(p))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Local(#[from] LocalSystemError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("calibration unresolved for d = {d}: {reason}")]
    Calibration { d: usize, reason: String },
    #[error("cache: {0}")]
    Cache(String),
    #[error("cache conflict at {path}: stored fingerprint {found}, current {expected}")]
    CacheConflict {
        path: String,
        expected: String,
        found: String,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse coefficient ring {0:?}; use z or f:p")]
    BadCoeff(String),
    #[error("covering hypotheses fail for d = {d}, d' = {d_prime}, p = {p}: {reason}")]
    Hypothesis {
        d: usize,
        d_prime: usize,
        p: u64,
        reason: String,
    },
}

impl From<Overflow> for EngineError {
    fn from(o: Overflow) -> Self {
        EngineError::Linalg(LinalgError::Overflow(o))
    }
}

impl EngineError {
    fn is_overflow(&self) -> bool {
        matches!(
            self,
            EngineError::Rep(RepError::Overflow(_))
                | EngineError::Local(LocalSystemError::Overflow(_))
                | EngineError::Complex(ComplexError::Overflow(_))
                | EngineError::Complex(ComplexError::Linalg(LinalgError::Overflow(_)))
                | EngineError::Linalg(LinalgError::Overflow(_))
        )
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            EngineError::Linalg(LinalgError::ResourceLimit(_))
                | EngineError::Complex(ComplexError::Linalg(LinalgError::ResourceLimit(_)))
        )
    }
}

/// Every choice the computation depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convention {
    pub construction: Construction,
    pub order: Option<Order>,
    pub complex: ComplexConfig,
}

impl Convention {
    /// `B/right-to-left;right-cosets/lower-sign`.
    pub fn fingerprint(&self) -> String {
        let twist = match self.order {
            Some(o) => format!("{}/{}", self.construction, o),
            None => self.construction.to_string(),
        };
        format!("{twist};{}", self.complex)
    }

    pub fn surface_rep<T: Scalar>(&self, n: usize, d: usize) -> Result<SurfaceRep<T>, RepError> {
        let order = self.order.unwrap_or(Order::RightToLeft);
        match self.construction {
            Construction::A => build_rep_relaxed(n, d, Construction::A, order),
            Construction::B => build_rep(n, d, Construction::B, order),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fingerprint())
    }
}

/// Fingerprint recorded for `d = 1`, where the module is zero.
pub const ZERO_MODULE: &str = "zero-module";

/// Groups `H_i` for `i` ascending, keyed by `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub d: usize,
    pub coeff: Coeff,
    pub fingerprint: String,
    pub version: String,
    pub rows: BTreeMap<usize, Vec<AbelianGroup>>,
}

impl HomologyTable {
    pub fn new(d: usize, coeff: Coeff, fingerprint: impl Into<String>) -> Self {
        HomologyTable {
            d,
            coeff,
            fingerprint: fingerprint.into(),
            version: VERSION.to_string(),
            rows: BTreeMap::new(),
        }
    }

    pub fn cell(&self, n: usize, i: usize) -> Option<&AbelianGroup> {
        self.rows.get(&n)?.get(i)
    }

    pub fn ns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Torsion primes tried when the exact route gives up: primes dividing `d`
/// and all primes up to `n`.
pub fn fallback_primes(n: usize, d: usize) -> Vec<u64> {
    let mut primes = prime_factors(d as u64);
    primes.extend(primes_up_to(n as u64));
    primes.sort_unstable();
    primes.dedup();
    primes
}

fn groups_of<T: Scalar>(
    complex: &ChainComplex<T>,
    coeff: Coeff,
    route: &Route,
    snf: &SnfConfig,
) -> Result<Vec<AbelianGroup>, EngineError> {
    Ok(match coeff {
        Coeff::Integers => complex.homology(route, snf)?,
        Coeff::Prime(p) => complex
            .betti_mod_p(p)?
            .into_iter()
            .map(AbelianGroup::free)
            .collect(),
    })
}

/// Runs `job` over `i64` and redoes it over [`BigInt`] on overflow.
fn with_retry<R>(
    small: impl FnOnce() -> Result<R, EngineError>,
    big: impl FnOnce() -> Result<R, EngineError>,
) -> Result<R, EngineError> {
    match small() {
        Err(e) if e.is_overflow() => {
            log::info!("machine-word overflow, retrying with big integers");
            big()
        }
        other => other,
    }
}

/// Front end for all homology computations; holds calibrations and an
/// optional cache.
pub struct Engine {
    snf: SnfConfig,
    cache: Option<Cache>,
    conventions: Mutex<HashMap<usize, Arc<CalibrationReport>>>,
    variants: Mutex<HashMap<usize, Arc<VariantReport>>>,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(SnfConfig::default())
    }
}

impl Engine {
    pub fn new(snf: SnfConfig) -> Self {
        Engine {
            snf,
            cache: None,
            conventions: Mutex::new(HashMap::new()),
            variants: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_cache(mut self, cache: Cache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn snf_config(&self) -> &SnfConfig {
        &self.snf
    }

    pub fn cache(&self) -> Option<&Cache> {
        self.cache.as_ref()
    }

    /// Calibration for degree `d`, computed once.
    pub fn calibrate(&self, d: usize) -> Result<Arc<CalibrationReport>, EngineError> {
        if let Some(r) = self.conventions.lock().expect("calibration lock").get(&d) {
            return Ok(r.clone());
        }
        let report = Arc::new(calibration::calibrate(self, d)?);
        log::info!("d = {d}: calibrated convention {}", report.chosen);
        self.conventions
            .lock()
            .expect("calibration lock")
            .insert(d, report.clone());
        Ok(report)
    }

    pub fn convention(&self, d: usize) -> Result<Convention, EngineError> {
        Ok(self.calibrate(d)?.chosen)
    }

    /// Fingerprint of the calibrated convention, or [`ZERO_MODULE`] for
    /// `d = 1`.
    pub fn fingerprint(&self, d: usize) -> Result<String, EngineError> {
        if d <= 1 {
            return Ok(ZERO_MODULE.to_string());
        }
        Ok(self.convention(d)?.fingerprint())
    }

    /// `H_i(Br_n; H_1(Sigma_n^d))` for `i = 0..n`, with the calibrated
    /// convention; read from and written to the cache when one is set.
    pub fn braid_twisted_homology(
        &self,
        n: usize,
        d: usize,
        coeff: Coeff,
    ) -> Result<Vec<AbelianGroup>, EngineError> {
        if n == 0 || d == 0 {
            return Err(RepError::Degenerate.into());
        }
        if d == 1 || n == 1 {
            return Ok(vec![AbelianGroup::zero(); n]);
        }
        let convention = self.convention(d)?;
        let fingerprint = convention.fingerprint();
        if let Some(cache) = &self.cache {
            if let Some(groups) = cache.load("A", n, d, coeff, &fingerprint)? {
                return Ok(groups);
            }
        }
        let groups = self.twisted_with(n, d, coeff, &convention)?;
        if let Some(cache) = &self.cache {
            cache.store("A", n, d, coeff, &fingerprint, &groups)?;
        }
        Ok(groups)
    }

    /// Same computation under an explicit convention, bypassing calibration
    /// and the cache.
    pub fn twisted_with(
        &self,
        n: usize,
        d: usize,
        coeff: Coeff,
        convention: &Convention,
    ) -> Result<Vec<AbelianGroup>, EngineError> {
        let route = Route::Exact {
            fallback_primes: fallback_primes(n, d),
        };
        with_retry(
            || {
                groups_of(
                    &twisted_complex::<i64>(n, d, convention)?,
                    coeff,
                    &route,
                    &self.snf,
                )
            },
            || {
                groups_of(
                    &twisted_complex::<BigInt>(n, d, convention)?,
                    coeff,
                    &route,
                    &self.snf,
                )
            },
        )
    }

    /// Homology of `Br_n` with trivial integer coefficients, `i = 0..n`.
    pub fn trivial_homology(
        &self,
        n: usize,
        coeff: Coeff,
    ) -> Result<Vec<AbelianGroup>, EngineError> {
        if n == 0 {
            return Err(RepError::Degenerate.into());
        }
        let rho = LocalSystem::<i64>::trivial(CoxeterSpec::type_a(n - 1), 1);
        let config = self.trivial_config(n)?;
        let complex = build_complex(&rho, config)?;
        groups_of(&complex, coeff, &Route::default(), &self.snf)
    }

    fn trivial_config(&self, n: usize) -> Result<ComplexConfig, EngineError> {
        let probe = LocalSystem::<i64>::trivial(CoxeterSpec::type_a(n.max(4) - 1), 1);
        Ok(select_config_for(&[probe])?)
    }

    /// `H_i(B(d, d, n)) = H_i(Br_n) + H_{i-1}(Br_n; H_1(Sigma_n^d))` for
    /// `i = 0..=n`.
    pub fn bddn_homology(&self, n: usize, d: usize) -> Result<Vec<AbelianGroup>, EngineError> {
        let trivial = self.trivial_homology(n, Coeff::Integers)?;
        let twisted = self.braid_twisted_homology(n, d, Coeff::Integers)?;
        Ok((0..=n)
            .map(|i| {
                let base = trivial.get(i).cloned().unwrap_or_default();
                match i.checked_sub(1).and_then(|j| twisted.get(j)) {
                    Some(g) => base.direct_sum(g),
                    None => base,
                }
            })
            .collect())
    }

    /// Rows `ns` of the table for `d`. Rows are computed concurrently.
    pub fn table(
        &self,
        d: usize,
        ns: impl IntoIterator<Item = usize>,
        coeff: Coeff,
    ) -> Result<HomologyTable, EngineError> {
        let fingerprint = self.fingerprint(d)?;
        let ns: Vec<usize> = ns.into_iter().collect();
        let rows: Vec<(usize, Vec<AbelianGroup>)> = ns
            .par_iter()
            .map(|&n| Ok((n, self.braid_twisted_homology(n, d, coeff)?)))
            .collect::<Result<_, EngineError>>()?;
        let mut table = HomologyTable::new(d, coeff, fingerprint);
        table.rows.extend(rows);
        Ok(table)
    }

    /// The calibrated sign variant of the type B system for degree `d`.
    pub fn calibrate_variant(&self, d: usize) -> Result<Arc<VariantReport>, EngineError> {
        if let Some(r) = self.variants.lock().expect("variant lock").get(&d) {
            return Ok(r.clone());
        }
        let report = Arc::new(calibration::calibrate_variant(self, d)?);
        self.variants
            .lock()
            .expect("variant lock")
            .insert(d, report.clone());
        Ok(report)
    }

    /// Homology of `Art(B_n)` with coefficients in the chosen quotient of
    /// `Z[t]`, `i = 0..=n`.
    pub fn artin_b_homology(
        &self,
        n: usize,
        d: usize,
        module: TModule,
        variant: TVariant,
        coeff: Coeff,
    ) -> Result<Vec<AbelianGroup>, EngineError> {
        let complex = self.artin_b_complex::<BigInt>(n, d, module, variant)?;
        groups_of(&complex, coeff, &Route::default(), &self.snf)
    }

    /// Rational Betti numbers of the type B system, `i = 0..=n`.
    pub fn artin_b_betti(
        &self,
        n: usize,
        d: usize,
        module: TModule,
        variant: TVariant,
    ) -> Result<Vec<usize>, EngineError> {
        let complex = self.artin_b_complex::<i64>(n, d, module, variant)?;
        Ok(complex.rational_betti(&self.snf))
    }

    pub fn artin_b_complex<T: Scalar>(
        &self,
        n: usize,
        d: usize,
        module: TModule,
        variant: TVariant,
    ) -> Result<ChainComplex<T>, EngineError> {
        let rho = t_local_system::<T>(n, d, module, variant)?;
        let probe = t_local_system::<T>(n.max(3), d, module, variant)?;
        let config = select_config_for(&[probe])?;
        Ok(build_complex(&rho, config)?)
    }
}

/// The Salvetti complex of `Br_n` with coefficients in the surface
/// representation built under `convention`.
pub fn twisted_complex<T: Scalar>(
    n: usize,
    d: usize,
    convention: &Convention,
) -> Result<ChainComplex<T>, EngineError> {
    let rep = convention.surface_rep::<T>(n, d)?;
    let rho = LocalSystem::from_surface(&rep)?;
    Ok(build_complex(&rho, convention.complex)?)
}

/// Expected rational Betti numbers of the type B systems, `i = 0..=n`:
/// `(1 + q)(1 + q + ... + q^{n-1})` for odd `n` (full module), and for even
/// `n` (cyclotomic quotient) zero when `d` is odd, `(1 + q) q^{n-1}` when `d`
/// is even.
pub fn type_b_expected_betti(n: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; n + 1];
    if n % 2 == 1 {
        for j in 0..n {
            out[j] += 1;
            out[j + 1] += 1;
        }
    } else if d.is_multiple_of(2) && n > 0 {
        out[n - 1] = 1;
        out[n] = 1;
    }
    out
}

/// Module used by the type B gate for this parity of `n`.
pub fn type_b_module(n: usize) -> TModule {
    if n % 2 == 1 {
        TModule::Full
    } else {
        TModule::Cyclotomic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Side, SignRule};
    use crate::linalg::snf;
    use crate::Matrix;

    fn calibrated() -> Convention {
        Convention {
            construction: Construction::B,
            order: Some(Order::RightToLeft),
            complex: ComplexConfig {
                side: Side::Right,
                sign: SignRule::Lower,
            },
        }
    }

    #[test]
    fn coefficient_tags() {
        assert_eq!("z".parse::<Coeff>().unwrap(), Coeff::Integers);
        assert_eq!("f:3".parse::<Coeff>().unwrap(), Coeff::Prime(3));
        assert_eq!("f5".parse::<Coeff>().unwrap(), Coeff::Prime(5));
        assert!(matches!(
            "f:4".parse::<Coeff>(),
            Err(EngineError::NotPrime(4))
        ));
        assert!("q".parse::<Coeff>().is_err());
        assert_eq!(Coeff::Prime(2).to_string(), "f:2");
        assert_eq!(Coeff::Prime(2).file_tag(), "f2");
    }

    #[test]
    fn fingerprint_format() {
        assert_eq!(
            calibrated().fingerprint(),
            "B/right-to-left;right-cosets/lower-sign"
        );
    }

    #[test]
    fn two_strands_are_the_coinvariants_of_one_twist() {
        let engine = Engine::default();
        for d in 2..=6 {
            let h = engine
                .twisted_with(2, d, Coeff::Integers, &calibrated())
                .unwrap();
            let rep = calibrated().surface_rep::<i64>(2, d).unwrap();
            let t = rep.generator(1).try_sub(&Matrix::identity(d - 1)).unwrap();
            let form = snf(&t, false, &SnfConfig::default()).unwrap();
            let coker =
                AbelianGroup::new(d - 1 - form.rank(), form.divisors.iter().map(|&x| x as u64));
            let ker = AbelianGroup::free(d - 1 - form.rank());
            assert_eq!(h, vec![coker, ker], "d = {d}");
        }
    }

    #[test]
    fn degenerate_inputs() {
        let engine = Engine::default();
        assert_eq!(
            engine
                .braid_twisted_homology(5, 1, Coeff::Integers)
                .unwrap(),
            vec![AbelianGroup::zero(); 5]
        );
        assert_eq!(
            engine
                .braid_twisted_homology(1, 4, Coeff::Integers)
                .unwrap(),
            vec![AbelianGroup::zero()]
        );
        assert!(engine
            .braid_twisted_homology(0, 4, Coeff::Integers)
            .is_err());
    }

    #[test]
    fn trivial_coefficients() {
        let engine = Engine::default();
        for n in 2..=6 {
            let h = engine.trivial_homology(n, Coeff::Integers).unwrap();
            assert_eq!(h.len(), n);
            assert_eq!(h[0], AbelianGroup::free(1));
            assert_eq!(h[1], AbelianGroup::free(1));
        }
        // H_2(Br_4) = Z_2
        assert_eq!(
            engine.trivial_homology(4, Coeff::Integers).unwrap()[2],
            AbelianGroup::new(0, [2])
        );
    }

    #[test]
    fn expected_type_b_polynomials() {
        assert_eq!(type_b_expected_betti(3, 2), vec![1, 2, 2, 1]);
        assert_eq!(type_b_expected_betti(4, 3), vec![0; 5]);
        assert_eq!(type_b_expected_betti(4, 2), vec![0, 0, 0, 1, 1]);
    }

    #[test]
    fn table_json_round_trip() {
        let engine = Engine::default();
        let t = engine.table(3, 2..=5, Coeff::Integers).unwrap();
        let back = HomologyTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert_eq!(t.cell(3, 1), Some(&AbelianGroup::new(0, [3])));
    }
}
