//! The `verify --suite paper` runner: every law the engine checks, applied
//! to the rows inside a window, with a flat list of named checks.

use std::collections::BTreeMap;

use serde::Serialize;
use superbraid::coxeter::{ChainComplex, ComplexError};
use superbraid::engine::{
    compare_dimensions, twisted_complex, type_b_expected_betti, type_b_module, verify_covering_iso,
    verify_euler, verify_stability, verify_torsion_law, verify_universal_coefficients,
    verify_unstable_free, Coeff, Engine, EngineError, HomologyTable, LawReport,
};
use superbraid::fixtures::{fixture, printed_stable_expansion, Cell};
use superbraid::linalg::modular::prime_factors;
use superbraid::series::{compare_local, stable_series};
use superbraid::Matrix;

/// Largest `n` per degree `d` gated by default.
pub const GOLDEN_WINDOW: [(usize, usize); 5] = [(2, 10), (3, 10), (4, 9), (5, 9), (6, 8)];

/// Pairs `(p, d)` compared with the local series.
const LOCAL_PAIRS: [(u64, usize); 6] = [(2, 2), (3, 3), (2, 4), (5, 5), (2, 6), (3, 6)];

/// `(d, d', p)` covering pairs.
const COVERINGS: [(usize, usize, u64); 2] = [(2, 6, 2), (3, 6, 3)];

const TYPE_B_ODD_MAX: usize = 7;
const TYPE_B_EVEN_MAX: usize = 6;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn from_law(name: String, law: &LawReport) -> Self {
        Check {
            name,
            pass: law.pass(),
            checked: law.checked,
            failures: law
                .violations
                .iter()
                .map(|v| format!("n={} i={}: {}", v.n, v.i, v.message))
                .collect(),
        }
    }

    fn failed(name: String, reason: impl Into<String>) -> Self {
        Check {
            name,
            pass: false,
            checked: 0,
            failures: vec![reason.into()],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    /// Largest `n` per degree.
    pub window: BTreeMap<usize, usize>,
    pub fingerprints: BTreeMap<usize, String>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub struct Options {
    pub window: BTreeMap<usize, usize>,
    /// Flip the sign of one boundary entry before the `d^2 = 0` checks.
    pub inject_fault: bool,
}

impl Options {
    pub fn golden() -> Self {
        Options {
            window: GOLDEN_WINDOW.into_iter().collect(),
            inject_fault: false,
        }
    }
}

/// Negates one entry of `d_2` whose row meets a nonzero column of `d_1`, so
/// the composite cannot stay zero.
fn perturb(complex: &mut ChainComplex<i64>) -> bool {
    if complex.top() < 2 {
        return false;
    }
    let d1 = &complex.boundaries[1];
    let d2 = &complex.boundaries[2];
    let target = d2
        .entries()
        .map(|(r, c, _)| (r, c))
        .find(|&(r, _)| !d1.column(r).is_empty());
    let Some((r0, c0)) = target else { return false };
    let triplets: Vec<_> = d2
        .entries()
        .map(|(r, c, v)| {
            if (r, c) == (r0, c0) {
                (r, c, -*v)
            } else {
                (r, c, *v)
            }
        })
        .collect();
    complex.boundaries[2] = Matrix::from_triplets(d2.rows(), d2.cols(), triplets);
    true
}

fn integral_rows(
    engine: &Engine,
    d: usize,
    max_n: usize,
    coeff: Coeff,
) -> Result<HomologyTable, EngineError> {
    engine.table(d, 2..=max_n, coeff)
}

fn golden(d: usize, table: &HomologyTable, warnings: &mut Vec<String>) -> Option<Check> {
    let published = fixture(d)?;
    let mut check = Check {
        name: format!("golden d={d} ({})", published.provenance()),
        pass: true,
        checked: 0,
        failures: Vec::new(),
    };
    for (&n, row) in &table.rows {
        for (i, got) in row.iter().enumerate() {
            match published.cell(n, i) {
                Some(Cell::Group(want)) => {
                    check.checked += 1;
                    if got != want {
                        check
                            .failures
                            .push(format!("n={n} i={i}: computed {got}, published {want}"));
                    }
                }
                Some(Cell::Unknown) => warnings.push(format!(
                    "d={d} n={n} i={i}: computed {got}, published value unknown"
                )),
                None => {}
            }
        }
    }
    check.pass = check.failures.is_empty();
    Some(check)
}

fn boundaries(
    engine: &Engine,
    d: usize,
    max_n: usize,
    inject: &mut bool,
) -> Result<Check, EngineError> {
    let convention = engine.convention(d)?;
    let mut check = Check {
        name: format!("boundary squares d={d}"),
        pass: true,
        checked: 0,
        failures: Vec::new(),
    };
    for n in 2..=max_n {
        let mut complex = twisted_complex::<i64>(n, d, &convention)?;
        if *inject && perturb(&mut complex) {
            *inject = false;
        }
        check.checked += 1;
        match complex.check_square_zero() {
            Ok(()) => {}
            Err(e @ ComplexError::NonzeroSquare { .. }) => {
                check.failures.push(format!("n={n}: {e}"))
            }
            Err(e) => return Err(e.into()),
        }
    }
    check.pass = check.failures.is_empty();
    Ok(check)
}

fn stable(p: u64) -> Check {
    let printed = printed_stable_expansion(p).expect("printed expansions exist for p = 2, 3");
    let name = format!("stable series p={p}");
    let series = match stable_series(p, printed.len() - 1) {
        Ok(s) => s.univariate(),
        Err(e) => return Check::failed(name, e.to_string()),
    };
    let failures: Vec<String> = printed
        .iter()
        .zip(&series)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, (a, b))| format!("q^{i}: computed {b}, printed {a}"))
        .collect();
    Check {
        name,
        pass: failures.is_empty(),
        checked: printed.len(),
        failures,
    }
}

fn type_b(engine: &Engine, d: usize, max_n: usize) -> Result<Check, EngineError> {
    let variant = engine.calibrate_variant(d)?.chosen;
    let mut check = Check {
        name: format!("type B Betti numbers d={d} ({variant})"),
        pass: true,
        checked: 0,
        failures: Vec::new(),
    };
    let last = max_n.min(TYPE_B_ODD_MAX);
    for n in (1..=last).filter(|&n| n % 2 == 1 || n <= TYPE_B_EVEN_MAX) {
        check.checked += 1;
        let got = engine.artin_b_betti(n, d, type_b_module(n), variant)?;
        let want = type_b_expected_betti(n, d);
        if got != want {
            check
                .failures
                .push(format!("n={n}: {got:?}, expected {want:?}"));
        }
    }
    check.pass = check.failures.is_empty();
    Ok(check)
}

pub fn run(engine: &Engine, options: &Options) -> Result<SuiteReport, EngineError> {
    let window: BTreeMap<usize, usize> = options
        .window
        .iter()
        .filter(|&(&d, &n)| d >= 1 && n >= 2)
        .map(|(&d, &n)| (d, n))
        .collect();
    let mut report = SuiteReport {
        suite: "paper",
        window: window.clone(),
        fingerprints: BTreeMap::new(),
        checks: Vec::new(),
        warnings: Vec::new(),
        pass: true,
    };
    if window.is_empty() {
        report
            .warnings
            .push("empty window: nothing was verified".into());
        return Ok(report);
    }
    let mut inject = options.inject_fault;
    let mut integral = BTreeMap::new();
    let mut modular: BTreeMap<(usize, u64), HomologyTable> = BTreeMap::new();
    for (&d, &max_n) in &window {
        report.fingerprints.insert(d, engine.fingerprint(d)?);
        if d >= 2 {
            let calibration = engine.calibrate(d)?;
            report.checks.push(Check {
                name: format!("calibration d={d}"),
                pass: calibration.exclusive(),
                checked: calibration.candidates.len(),
                failures: Vec::new(),
            });
            report
                .checks
                .push(boundaries(engine, d, max_n, &mut inject)?);
        }
        let table = integral_rows(engine, d, max_n, Coeff::Integers)?;
        if let Some(check) = golden(d, &table, &mut report.warnings) {
            report.checks.push(check);
        }
        report.checks.push(Check::from_law(
            format!("torsion law d={d}"),
            &verify_torsion_law(&table),
        ));
        report.checks.push(Check::from_law(
            format!("unstable free part d={d}"),
            &verify_unstable_free(&table),
        ));
        let stability = verify_stability(&table, fixture(d));
        let mut check = Check::from_law(format!("stability d={d}"), &stability.iso_range);
        for h in stability
            .highlights
            .iter()
            .filter(|h| h.pass == Some(false))
        {
            check.failures.push(format!(
                "highlight n={} i={}: column first stable at {:?}",
                h.n, h.i, h.first_stable
            ));
        }
        check.checked += stability
            .highlights
            .iter()
            .filter(|h| h.pass.is_some())
            .count();
        check.pass = stability.pass();
        report.checks.push(check);

        let mut primes: Vec<u64> = prime_factors(d as u64);
        primes.extend([2, 3, 5]);
        primes.sort_unstable();
        primes.dedup();
        for p in primes {
            let mod_p = integral_rows(engine, d, max_n, Coeff::Prime(p))?;
            report.checks.push(Check::from_law(
                format!("universal coefficients d={d} p={p}"),
                &verify_universal_coefficients(&table, &mod_p),
            ));
            report.checks.push(Check::from_law(
                format!("euler characteristic d={d} p={p}"),
                &verify_euler(&mod_p),
            ));
            modular.insert((d, p), mod_p);
        }
        if d >= 2 {
            report.checks.push(type_b(engine, d, max_n)?);
        }
        integral.insert(d, table);
    }

    for (p, d) in LOCAL_PAIRS {
        let Some(table) = integral.get(&d) else {
            continue;
        };
        let name = format!("local series p={p} d={d}");
        report.checks.push(match compare_local(p, table) {
            Ok(law) => Check::from_law(name, &law),
            Err(e) => Check::failed(name, e.to_string()),
        });
    }
    for p in [2, 3] {
        if window.keys().any(|&d| d % p == 0) {
            report.checks.push(stable(p as u64));
        }
    }
    for (d, d_prime, p) in COVERINGS {
        let (Some(small), Some(large)) = (modular.get(&(d, p)), modular.get(&(d_prime, p))) else {
            continue;
        };
        let name = format!("covering d={d} d'={d_prime} p={p}");
        report
            .checks
            .push(match verify_covering_iso(d, d_prime, p, small, large) {
                Ok(law) => Check::from_law(name, &law),
                Err(e @ EngineError::Hypothesis { .. }) => {
                    // still say where the dimensions agree, for the record
                    let law = compare_dimensions(small, large);
                    let mut check = Check::failed(name, e.to_string());
                    let rows: BTreeMap<usize, bool> = small
                        .ns()
                        .map(|n| (n, law.violations.iter().all(|v| v.n != n)))
                        .collect();
                    let agree: Vec<String> = rows
                        .iter()
                        .filter(|(_, &ok)| ok)
                        .map(|(n, _)| n.to_string())
                        .collect();
                    let differ: Vec<String> = rows
                        .iter()
                        .filter(|(_, &ok)| !ok)
                        .map(|(n, _)| n.to_string())
                        .collect();
                    check.failures.push(format!(
                        "dimensions agree for n in [{}], differ for n in [{}]",
                        agree.join(", "),
                        differ.join(", ")
                    ));
                    check
                }
                Err(e) => return Err(e),
            });
    }
    for (&d, &max_n) in window.iter().filter(|(&d, _)| d % 2 == 1 && d > 1) {
        let Some(large) = modular.get(&(d, 2)) else {
            continue;
        };
        let zero = integral_rows(engine, 1, max_n, Coeff::Prime(2))?;
        let name = format!("vanishing mod 2 d={d}");
        report
            .checks
            .push(match verify_covering_iso(1, d, 2, &zero, large) {
                Ok(law) => Check::from_law(name, &law),
                Err(e) => Check::failed(name, e.to_string()),
            });
    }
    report.pass = report.checks.iter().all(|c| c.pass);
    Ok(report)
}
