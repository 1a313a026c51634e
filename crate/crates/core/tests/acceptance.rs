//! Acceptance run: one PASS/FAIL line per criterion, with details indented
//! underneath. Windows, budgets and series orders are pinned below.
//!
//! Four criteria fail on the merits (see `KNOWN_FAILURES`). The run exits
//! nonzero if the set of failing criteria differs from that list in either
//! direction, so a regression or an unexpected fix is both reported.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use superbraid::coxeter::{
    build_complex, select_config_for, t_local_system, trivial_gates, CoxeterSpec, LocalSystem,
    TModule,
};
use superbraid::engine::{
    compare_dimensions, twisted_complex, type_b_module, verify_covering_iso, verify_euler,
    verify_stability, verify_torsion_law, verify_universal_coefficients, verify_unstable_free,
    CandidateStatus, Coeff, Engine, HomologyTable, LawReport,
};
use superbraid::fixtures::{fixture, printed_stable_expansion, Cell, TableFixture};
use superbraid::linalg::{modular::prime_factors, Route};
use superbraid::series::{compare_local, stable_series};
use superbraid::surface::{
    build_rep, build_rep_relaxed, check_braid_relations, convention_audit, root_check,
    BlockRelation, Construction, Order,
};
use superbraid::{AbelianGroup, SnfConfig};

const DEGREES: std::ops::RangeInclusive<usize> = 2..=6;

/// Criterion 1.
const REP_N: std::ops::RangeInclusive<usize> = 2..=8;
const REP_BUDGET: Duration = Duration::from_secs(10);

/// Criterion 2: largest Coxeter rank per family, and the time budget.
const TYPE_A_MAX_RANK: usize = 9;
const TYPE_B_MAX_RANK: usize = 7;
const COMPLEX_BUDGET: Duration = Duration::from_secs(60);

/// Criterion 4: gated rows `n <= GOLDEN_WINDOW[d]`; printed rows past the
/// window are computed and reported but do not gate.
const GOLDEN_WINDOW: [(usize, usize); 5] = [(2, 10), (3, 10), (4, 9), (5, 9), (6, 8)];
const ROW_BUDGET: Duration = Duration::from_secs(600);

/// Criterion 7.
const STABLE_ORDERS: [(u64, usize); 2] = [(2, 11), (3, 12)];
const LOCAL_PAIRS: [(u64, usize); 6] = [(2, 2), (3, 3), (2, 4), (5, 5), (2, 6), (3, 6)];

/// Criterion 8.
const COVERINGS: [(usize, usize, u64); 2] = [(2, 6, 2), (3, 6, 3)];

/// Criterion 10.
const TYPE_B_ODD_MAX: usize = 7;
const TYPE_B_EVEN_MAX: usize = 6;

/// Criterion 11: primes checked besides those dividing `d`.
const EXTRA_PRIMES: [u64; 3] = [2, 3, 5];

/// Criteria that fail against the published data; the reasons are printed
/// with each FAIL line.
const KNOWN_FAILURES: [usize; 4] = [1, 4, 7, 8];

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome {
            pass,
            summary: summary.into(),
            details: Vec::new(),
        }
    }
}

fn law_details(law: &LawReport, limit: usize) -> Vec<String> {
    law.violations
        .iter()
        .take(limit)
        .map(|v| format!("{}: n={} i={}: {}", law.law, v.n, v.i, v.message))
        .collect()
}

/// Integral and modular tables over every printed row, shared by the
/// criteria.
struct Tables {
    integral: BTreeMap<usize, HomologyTable>,
    modular: BTreeMap<(usize, u64), HomologyTable>,
    row_times: Vec<(usize, usize, Duration)>,
}

fn primes_for(d: usize) -> Vec<u64> {
    let mut primes = prime_factors(d as u64);
    primes.extend(EXTRA_PRIMES);
    primes.sort_unstable();
    primes.dedup();
    primes
}

fn last_row(d: usize) -> usize {
    fixture(d).map_or(8, TableFixture::max_n)
}

fn compute_tables(engine: &Engine) -> Tables {
    let mut tables = Tables {
        integral: BTreeMap::new(),
        modular: BTreeMap::new(),
        row_times: Vec::new(),
    };
    for d in DEGREES {
        let fingerprint = engine.fingerprint(d).unwrap();
        let mut table = HomologyTable::new(d, Coeff::Integers, fingerprint);
        // rows one at a time so each gets its own timing
        for n in 2..=last_row(d) {
            let start = Instant::now();
            let row = engine
                .braid_twisted_homology(n, d, Coeff::Integers)
                .unwrap();
            tables.row_times.push((d, n, start.elapsed()));
            table.rows.insert(n, row);
        }
        for p in primes_for(d) {
            let ns: Vec<usize> = table.ns().collect();
            tables
                .modular
                .insert((d, p), engine.table(d, ns, Coeff::Prime(p)).unwrap());
        }
        tables.integral.insert(d, table);
    }
    tables
}

fn golden_window(d: usize) -> usize {
    GOLDEN_WINDOW
        .iter()
        .find(|&&(e, _)| e == d)
        .map_or(0, |&(_, n)| n)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    // per d: strand counts with a failing generator, and whether the d-th
    // power is a transvection once n >= 3 (at n = 2 the twist has finite order)
    let mut root_failures: BTreeMap<usize, (BTreeSet<usize>, usize, bool)> = BTreeMap::new();
    let mut checked = 0;
    for n in REP_N {
        for d in DEGREES {
            checked += 1;
            let rep = match build_rep::<i64>(n, d, Construction::B, Order::RightToLeft) {
                Ok(rep) => rep,
                Err(e) => {
                    failures.push(format!("B n={n} d={d}: {e}"));
                    continue;
                }
            };
            if let Some(f) = check_braid_relations(&rep.generators).unwrap() {
                failures.push(format!("B n={n} d={d}: {f}"));
            }
            for (k, g) in rep.generators.iter().enumerate() {
                if g.try_det().unwrap().abs() != 1 {
                    failures.push(format!("B n={n} d={d} k={}: determinant", k + 1));
                }
                if !rep.form.preserved_by(g).unwrap() {
                    failures.push(format!("B n={n} d={d} k={}: form not preserved", k + 1));
                }
            }
            if d % 2 == 0 {
                for k in 1..n {
                    let report = root_check(&rep, k).unwrap();
                    if !report.pass {
                        let entry = root_failures.entry(d).or_insert((BTreeSet::new(), 0, true));
                        entry.0.insert(n);
                        entry.1 += 1;
                        entry.2 &= n == 2 || report.full_power_is_transvection;
                    }
                }
            }
            if d >= 3 {
                let a =
                    build_rep_relaxed::<i64>(n, d, Construction::A, Order::RightToLeft).unwrap();
                if let Some(f) = check_braid_relations(&a.generators).unwrap() {
                    failures.push(format!("A n={n} d={d}: {f}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && root_failures.is_empty() && elapsed < REP_BUDGET;
    let mut out = Outcome::new(
        pass,
        format!(
            "representation suite, {checked} (n, d) pairs in {elapsed:.2?} (budget {REP_BUDGET:?})"
        ),
    );
    out.details = failures;
    for (d, (strands, count, full)) in root_failures {
        out.details.push(format!(
            "root check d={d}: {count} generators with T^(d/2) not a transvection, n in {strands:?}; \
             T^d a transvection for n >= 3: {full}"
        ));
    }
    out
}

fn criterion_2(engine: &Engine) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut complexes = 0;
    for rank in 1..=TYPE_A_MAX_RANK {
        let n = rank + 1;
        let trivial = LocalSystem::<i64>::trivial(CoxeterSpec::type_a(rank), 1);
        let config = select_config_for(std::slice::from_ref(&trivial)).unwrap();
        let complex = build_complex(&trivial, config).unwrap();
        complexes += 1;
        if let Err(e) = complex.check_square_zero() {
            failures.push(format!("trivial rank {rank}: {e}"));
        }
        let h = complex
            .homology(&Route::default(), &SnfConfig::default())
            .unwrap();
        if h[0] != AbelianGroup::free(1) || h[1] != AbelianGroup::free(1) || h.len() != rank + 1 {
            failures.push(format!(
                "trivial gate Br_{n}: H_0 = {}, H_1 = {}, {} degrees",
                h[0],
                h[1],
                h.len()
            ));
        }
        if !trivial_gates(CoxeterSpec::type_a(rank), config).unwrap() {
            failures.push(format!("trivial gates type A rank {rank}"));
        }
        for d in DEGREES {
            let convention = engine.convention(d).unwrap();
            let complex = twisted_complex::<i64>(n, d, &convention).unwrap();
            complexes += 1;
            if let Err(e) = complex.check_square_zero() {
                failures.push(format!("surface system n={n} d={d}: {e}"));
            }
        }
    }
    for rank in 1..=TYPE_B_MAX_RANK {
        let trivial = LocalSystem::<i64>::trivial(CoxeterSpec::type_b(rank), 1);
        let config = select_config_for(std::slice::from_ref(&trivial)).unwrap();
        let complex = build_complex(&trivial, config).unwrap();
        complexes += 1;
        if let Err(e) = complex.check_square_zero() {
            failures.push(format!("trivial type B rank {rank}: {e}"));
        }
        let h = complex
            .homology(&Route::default(), &SnfConfig::default())
            .unwrap();
        if h[0] != AbelianGroup::free(1) || h.len() != rank + 1 {
            failures.push(format!("trivial gate type B rank {rank}: H_0 = {}", h[0]));
        }
        for d in DEGREES {
            let variant = engine.calibrate_variant(d).unwrap().chosen;
            for module in [TModule::Full, TModule::Cyclotomic] {
                let complex = engine
                    .artin_b_complex::<i64>(rank, d, module, variant)
                    .unwrap();
                complexes += 1;
                if let Err(e) = complex.check_square_zero() {
                    failures.push(format!("type B rank {rank} d={d} {module:?}: {e}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let mut out = Outcome::new(
        failures.is_empty() && elapsed < COMPLEX_BUDGET,
        format!(
            "complex soundness, {complexes} complexes (type A rank <= {TYPE_A_MAX_RANK}, type B rank <= \
             {TYPE_B_MAX_RANK}) in {elapsed:.2?} (budget {COMPLEX_BUDGET:?})"
        ),
    );
    out.details = failures;
    out
}

fn criterion_3(engine: &Engine) -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for d in DEGREES {
        let report = engine.calibrate(d).unwrap();
        let matching: Vec<String> = report
            .candidates
            .iter()
            .filter(|c| c.matches())
            .map(|c| {
                format!(
                    "{}{}",
                    c.construction,
                    c.order.map_or(String::new(), |o| format!("/{o}"))
                )
            })
            .collect();
        let rejected = report
            .candidates
            .iter()
            .filter(|c| matches!(c.status, CandidateStatus::Rejected { .. }))
            .count();
        // the chosen convention, recomputed: H_1 at n = 3 and the rows n = 4, 5
        let published = fixture(d).unwrap();
        let mut ok = report.exclusive();
        let h3 = engine
            .braid_twisted_homology(3, d, Coeff::Integers)
            .unwrap();
        ok &= h3[1] == AbelianGroup::new(0, [d as u64]);
        for n in 3..=5 {
            let row = engine
                .braid_twisted_homology(n, d, Coeff::Integers)
                .unwrap();
            for (i, g) in row.iter().enumerate() {
                if let Some(want) = published.group(n, i) {
                    ok &= g == want;
                }
            }
        }
        pass &= ok;
        details.push(format!(
            "d={d}: chosen {}, matching [{}], rejected {rejected}, exclusive {}",
            report.chosen,
            matching.join(", "),
            report.exclusive()
        ));
    }
    let audit = convention_audit(3, 2).unwrap();
    let discrepancy = audit
        .blocks
        .iter()
        .find(|b| b.k == 1 && b.row_block == 1 && b.col_block == 1);
    let documented =
        !audit.identical && discrepancy.is_some_and(|b| b.relation != BlockRelation::Equal);
    pass &= documented;
    if let Some(b) = discrepancy {
        details.push(format!(
            "audit n=3 d=2 diagonal block: A {:?}, B {:?} ({:?})",
            b.a, b.b, b.relation
        ));
    }
    let mut out = Outcome::new(
        pass,
        "calibration: one configuration reproduces n = 3, 4, 5 for every d",
    );
    out.details = details;
    out
}

fn criterion_4(tables: &Tables) -> Outcome {
    let mut details = Vec::new();
    let mut gated = 0;
    let mut mismatches = 0;
    for (&d, table) in &tables.integral {
        let published = fixture(d).unwrap();
        let window = golden_window(d);
        for (n, i, cell) in published.cells() {
            let got = table.cell(n, i).unwrap();
            let inside = n <= window;
            match cell {
                Cell::Unknown => details.push(format!(
                    "d={d} n={n} i={i}: computed {got}, published value unknown (excluded)"
                )),
                Cell::Group(want) if got != want => {
                    if inside {
                        gated += 1;
                        mismatches += 1;
                    }
                    details.push(format!(
                        "d={d} n={n} i={i}: computed {got}, published {want}{}",
                        if inside {
                            ""
                        } else {
                            " (outside the gated window)"
                        }
                    ));
                }
                Cell::Group(_) => gated += usize::from(inside),
            }
        }
        let extra: Vec<usize> = published.rows().filter(|&n| n > window).collect();
        if !extra.is_empty() {
            details.push(format!(
                "d={d}: rows {extra:?} computed beyond the gated window"
            ));
        }
    }
    let slowest = tables.row_times.iter().max_by_key(|(_, _, t)| *t).unwrap();
    let within_budget = tables.row_times.iter().all(|(_, _, t)| *t < ROW_BUDGET);
    details.push(format!(
        "slowest row d={} n={}: {:.2?} (budget {ROW_BUDGET:?} per row)",
        slowest.0, slowest.1, slowest.2
    ));
    Outcome {
        pass: mismatches == 0 && within_budget,
        summary: format!("golden tables, {gated} gated cells, {mismatches} mismatches"),
        details,
    }
}

fn criterion_5(tables: &Tables) -> Outcome {
    let mut details = Vec::new();
    let mut checked = 0;
    for table in tables.integral.values() {
        let law = verify_torsion_law(table);
        checked += law.checked;
        details.extend(law_details(&law, 5));
    }
    Outcome {
        pass: details.is_empty(),
        summary: format!("torsion laws, {checked} cells"),
        details,
    }
}

fn criterion_6(tables: &Tables) -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    let mut highlights = 0;
    for (&d, table) in &tables.integral {
        let report = verify_stability(table, fixture(d));
        pass &= report.pass();
        details.extend(law_details(&report.iso_range, 5));
        for h in &report.highlights {
            match h.pass {
                Some(true) => highlights += 1,
                Some(false) => details.push(format!(
                    "d={d} highlight n={} i={}: column first stable at {:?}",
                    h.n, h.i, h.first_stable
                )),
                None => details.push(format!(
                    "d={d} highlight n={} i={} lies beyond the computed rows",
                    h.n, h.i
                )),
            }
        }
    }
    Outcome {
        pass,
        summary: format!("stability range and {highlights} highlighted first-stable cells"),
        details,
    }
}

fn criterion_7(tables: &Tables) -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (p, order) in STABLE_ORDERS {
        let printed = &printed_stable_expansion(p).unwrap()[..=order];
        let computed = stable_series(p, order).unwrap().univariate();
        for (i, (want, got)) in printed.iter().zip(&computed).enumerate() {
            if want != got {
                pass = false;
                details.push(format!(
                    "stable p={p} q^{i}: computed {got}, printed {want}"
                ));
            }
        }
    }
    for (p, d) in LOCAL_PAIRS {
        let law = compare_local(p, &tables.integral[&d]).unwrap();
        pass &= law.pass();
        details.extend(law_details(&law, 5));
    }
    Outcome {
        pass,
        summary: "Poincare series: printed stable expansions and local series against odd rows"
            .into(),
        details,
    }
}

fn criterion_8(tables: &Tables, engine: &Engine) -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (d, d_prime, p) in COVERINGS {
        let (small, large) = (&tables.modular[&(d, p)], &tables.modular[&(d_prime, p)]);
        match verify_covering_iso(d, d_prime, p, small, large) {
            Ok(law) => {
                pass &= law.pass();
                details.push(format!(
                    "d={d} d'={d_prime} p={p}: {} cells compared",
                    law.checked
                ));
                details.extend(law_details(&law, 5));
            }
            Err(e) => {
                pass = false;
                details.push(format!("d={d} d'={d_prime} p={p}: {e}"));
                let law = compare_dimensions(small, large);
                let differ: BTreeSet<usize> = law.violations.iter().map(|v| v.n).collect();
                let agree: Vec<usize> = small.ns().filter(|n| !differ.contains(n)).collect();
                details.push(format!(
                    "    dimensions agree for n in {agree:?}, differ for n in {differ:?}"
                ));
            }
        }
    }
    for d in DEGREES.filter(|d| d % 2 == 1) {
        let large = &tables.modular[&(d, 2)];
        let zero = engine.table(1, large.ns(), Coeff::Prime(2)).unwrap();
        let law = verify_covering_iso(1, d, 2, &zero, large).unwrap();
        pass &= law.pass();
        details.push(format!("vanishing mod 2, d={d}: {} cells", law.checked));
        details.extend(law_details(&law, 5));
    }
    Outcome {
        pass,
        summary: "coverings: mod p dimensions along d | d'".into(),
        details,
    }
}

fn criterion_9(tables: &Tables) -> Outcome {
    let mut details = Vec::new();
    let mut checked = 0;
    for table in tables.integral.values() {
        let law = verify_unstable_free(table);
        checked += law.checked;
        details.extend(law_details(&law, 5));
    }
    Outcome {
        pass: details.is_empty(),
        summary: format!("unstable free part, {checked} cells in even rows"),
        details,
    }
}

/// Coefficients of `(1 + q)(1 + ... + q^{n-1})`, or of `(1 + q) q^{n-1}`.
fn poincare(n: usize, full: bool) -> Vec<usize> {
    let factor: Vec<usize> = if full {
        vec![1; n]
    } else {
        (0..n).map(|j| usize::from(j == n - 1)).collect()
    };
    let mut out = vec![0; n + 1];
    for (j, c) in factor.iter().enumerate() {
        out[j] += c;
        out[j + 1] += c;
    }
    out
}

fn criterion_10(engine: &Engine) -> Outcome {
    let mut details = Vec::new();
    let mut checked = 0;
    for d in DEGREES {
        let variant = engine.calibrate_variant(d).unwrap().chosen;
        let rows = (1..=TYPE_B_ODD_MAX)
            .step_by(2)
            .chain((2..=TYPE_B_EVEN_MAX).step_by(2));
        for n in rows {
            checked += 1;
            let expected = match (n % 2, d % 2) {
                (1, _) => poincare(n, true),
                (_, 0) => poincare(n, false),
                _ => vec![0; n + 1],
            };
            let module = type_b_module(n);
            let complex = build_complex(&t_local_system::<i64>(n, d, module, variant).unwrap(), {
                let probe = t_local_system::<i64>(n.max(3), d, module, variant).unwrap();
                select_config_for(&[probe]).unwrap()
            })
            .unwrap();
            let got = complex.rational_betti(&SnfConfig::default());
            if got != expected {
                details.push(format!(
                    "d={d} n={n} ({variant}, {module:?}): {got:?}, expected {expected:?}"
                ));
            }
        }
    }
    Outcome {
        pass: details.is_empty(),
        summary: format!("type B rational Betti numbers, {checked} (n, d) pairs"),
        details,
    }
}

/// Invariant factors divisible by `p`, i.e. the rank of `G / pG` minus the
/// free rank.
fn divisible(group: &AbelianGroup, p: u64) -> usize {
    group.torsion.iter().filter(|&&t| t % p == 0).count()
}

fn criterion_11(tables: &Tables) -> Outcome {
    let mut details = Vec::new();
    let mut checked = 0;
    for ((d, p), modular) in &tables.modular {
        let integral = &tables.integral[d];
        // direct count, independent of the engine's own check
        for (&n, dims) in &modular.rows {
            let row = &integral.rows[&n];
            for (i, dim) in dims.iter().enumerate() {
                checked += 1;
                let below = if i == 0 {
                    0
                } else {
                    divisible(&row[i - 1], *p)
                };
                let here = row[i].rank + divisible(&row[i], *p);
                if dim.rank != here + below {
                    details.push(format!(
                        "d={d} p={p} n={n} i={i}: F_p dimension {}, expected {}",
                        dim.rank,
                        here + below
                    ));
                }
            }
        }
        details.extend(law_details(
            &verify_universal_coefficients(integral, modular),
            5,
        ));
        details.extend(law_details(&verify_euler(modular), 5));
    }
    Outcome {
        pass: details.is_empty(),
        summary: format!("universal coefficients and Euler characteristic, {checked} cells"),
        details,
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let engine = Engine::default();
    let tables = compute_tables(&engine);
    let results: Vec<(usize, Outcome)> = vec![
        (1, criterion_1()),
        (2, criterion_2(&engine)),
        (3, criterion_3(&engine)),
        (4, criterion_4(&tables)),
        (5, criterion_5(&tables)),
        (6, criterion_6(&tables)),
        (7, criterion_7(&tables)),
        (8, criterion_8(&tables, &engine)),
        (9, criterion_9(&tables)),
        (10, criterion_10(&engine)),
        (11, criterion_11(&tables)),
    ];
    for (k, outcome) in &results {
        println!(
            "criterion {k:>2}: {} {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.summary
        );
        for line in &outcome.details {
            println!("    {line}");
        }
    }
    let failing: BTreeSet<usize> = results
        .iter()
        .filter(|(_, o)| !o.pass)
        .map(|(k, _)| *k)
        .collect();
    let known: BTreeSet<usize> = KNOWN_FAILURES.into_iter().collect();
    println!(
        "acceptance: {} of {} criteria pass in {:.1?}; failing {:?}",
        results.len() - failing.len(),
        results.len(),
        started.elapsed(),
        failing
    );
    if failing == known {
        println!("acceptance: the failing set is exactly the known one {known:?}");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: expected failing set {known:?}, got {failing:?}");
        ExitCode::FAILURE
    }
}
