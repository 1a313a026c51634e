//! Consistency laws checked on computed tables.

use serde::Serialize;

use super::{Coeff, EngineError, HomologyTable};
use crate::coxeter::binomial;
use crate::fixtures::TableFixture;
use crate::linalg::{is_prime, AbelianGroup};
use crate::surface::betti1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: usize,
    pub i: usize,
    pub message: String,
}

/// Outcome of one law over a table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    /// Number of cells (or rows) the law was applied to.
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl LawReport {
    fn new(law: impl Into<String>) -> Self {
        LawReport {
            law: law.into(),
            checked: 0,
            violations: Vec::new(),
        }
    }

    fn fail(&mut self, n: usize, i: usize, message: impl Into<String>) {
        self.violations.push(Violation {
            n,
            i,
            message: message.into(),
        });
    }

    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

fn squarefree(d: usize) -> bool {
    (2..=d)
        .take_while(|p| p * p <= d)
        .all(|p| !d.is_multiple_of(p * p))
}

/// For `n` odd or `d` odd: every primary factor divides `d` and the free
/// rank vanishes in positive degrees. For odd `n` and squarefree `d`, no
/// factor of order `p^2`.
pub fn verify_torsion_law(table: &HomologyTable) -> LawReport {
    let mut report = LawReport::new("torsion");
    if table.coeff != Coeff::Integers {
        report.fail(0, 0, "needs integer coefficients");
        return report;
    }
    let d = table.d as u64;
    for (&n, row) in &table.rows {
        if n % 2 == 0 && d.is_multiple_of(2) {
            continue;
        }
        for (i, g) in row.iter().enumerate() {
            report.checked += 1;
            for pp in g.primary() {
                if !d.is_multiple_of(pp.value()) {
                    report.fail(
                        n,
                        i,
                        format!("factor Z_{} does not divide d = {d}", pp.value()),
                    );
                }
                if n % 2 == 1 && squarefree(table.d) && pp.k > 1 {
                    report.fail(n, i, format!("factor Z_{} with d squarefree", pp.value()));
                }
            }
            if i >= 1 && g.rank > 0 {
                report.fail(n, i, format!("free rank {}", g.rank));
            }
        }
    }
    report
}

/// Even `n`: free rank one exactly in degrees `n - 1` and `n - 2` when `d`
/// is even, zero everywhere when `d` is odd.
pub fn verify_unstable_free(table: &HomologyTable) -> LawReport {
    let mut report = LawReport::new("unstable-free");
    if table.coeff != Coeff::Integers {
        report.fail(0, 0, "needs integer coefficients");
        return report;
    }
    for (&n, row) in &table.rows {
        if n % 2 == 1 || n < 2 {
            continue;
        }
        for (i, g) in row.iter().enumerate() {
            report.checked += 1;
            let top = i + 2 >= n;
            let want = usize::from(table.d.is_multiple_of(2) && top && table.d > 1);
            if g.rank != want {
                report.fail(n, i, format!("free rank {}, expected {want}", g.rank));
            }
        }
    }
    report
}

/// Where a column stops changing inside the computed window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnStability {
    pub i: usize,
    /// Smallest `n` from which the column is constant up to the last row.
    pub first_stable: usize,
    pub value: AbelianGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HighlightCheck {
    pub n: usize,
    pub i: usize,
    pub expected: AbelianGroup,
    /// `None` when the highlighted row lies beyond the window.
    pub pass: Option<bool>,
    pub first_stable: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    /// `H_i` equal for `n` and `n + 1` whenever `i < n/2 - 1`.
    pub iso_range: LawReport,
    pub columns: Vec<ColumnStability>,
    pub highlights: Vec<HighlightCheck>,
}

impl StabilityReport {
    pub fn pass(&self) -> bool {
        self.iso_range.pass() && self.highlights.iter().all(|h| h.pass != Some(false))
    }
}

fn contiguous_to_end(table: &HomologyTable, from: usize) -> bool {
    let last = table.ns().max().unwrap_or(0);
    from <= last && (from..=last).all(|n| table.rows.contains_key(&n))
}

/// Checks the isomorphism range and, given the published table, that each
/// shaded cell starts a column that stays constant to the end of the window
/// with the published value.
pub fn verify_stability(
    table: &HomologyTable,
    published: Option<&TableFixture>,
) -> StabilityReport {
    let mut iso_range = LawReport::new("stability");
    for (&n, row) in &table.rows {
        let Some(next) = table.rows.get(&(n + 1)) else {
            continue;
        };
        for i in (0..row.len()).take_while(|&i| 2 * i + 2 < n) {
            iso_range.checked += 1;
            if row[i] != next[i] {
                iso_range.fail(n, i, format!("{} at n, {} at n + 1", row[i], next[i]));
            }
        }
    }
    let last = table.ns().max().unwrap_or(0);
    let columns: Vec<ColumnStability> = (0..last)
        .map(|i| {
            let value = table.cell(last, i).cloned().unwrap_or_default();
            let mut first_stable = last;
            while first_stable > 1 && table.cell(first_stable - 1, i).is_some_and(|g| *g == value) {
                first_stable -= 1;
            }
            ColumnStability {
                i,
                first_stable,
                value,
            }
        })
        .collect();
    let highlights = published
        .map(|fixture| {
            fixture
                .highlights
                .iter()
                .filter_map(|&(n, i)| {
                    let expected = fixture.group(n, i)?.clone();
                    if !contiguous_to_end(table, n) {
                        return Some(HighlightCheck {
                            n,
                            i,
                            expected,
                            pass: None,
                            first_stable: None,
                        });
                    }
                    let start = table.cell(n, i);
                    let constant = (n..=last).all(|m| table.cell(m, i) == start);
                    Some(HighlightCheck {
                        n,
                        i,
                        pass: Some(constant && start == Some(&expected)),
                        first_stable: columns.get(i).map(|c| c.first_stable),
                        expected,
                    })
                })
                .collect()
        })
        .unwrap_or_default();
    StabilityReport {
        iso_range,
        columns,
        highlights,
    }
}

/// Degree-by-degree equality of two mod-`p` tables on their common rows.
pub fn compare_dimensions(small: &HomologyTable, large: &HomologyTable) -> LawReport {
    let mut report = LawReport::new(format!("covering d={} d'={}", small.d, large.d));
    for (&n, row) in &small.rows {
        let Some(other) = large.rows.get(&n) else {
            continue;
        };
        for (i, (a, b)) in row.iter().zip(other).enumerate() {
            report.checked += 1;
            if a.rank != b.rank {
                report.fail(
                    n,
                    i,
                    format!("dimension {} for d, {} for d'", a.rank, b.rank),
                );
            }
        }
    }
    report
}

/// Mod-`p` dimensions agree for `d | d'` when `2 | d` or `2 ∤ d'`, and
/// `p ∤ d'/d`. Both tables must hold `F_p` dimensions.
pub fn verify_covering_iso(
    d: usize,
    d_prime: usize,
    p: u64,
    small: &HomologyTable,
    large: &HomologyTable,
) -> Result<LawReport, EngineError> {
    let reject = |reason: &str| EngineError::Hypothesis {
        d,
        d_prime,
        p,
        reason: reason.to_string(),
    };
    if !is_prime(p) {
        return Err(EngineError::NotPrime(p));
    }
    if d == 0 || !d_prime.is_multiple_of(d) {
        return Err(reject("d does not divide d'"));
    }
    if d % 2 == 1 && d_prime.is_multiple_of(2) {
        return Err(reject("d is odd and d' is even"));
    }
    if ((d_prime / d) as u64).is_multiple_of(p) {
        return Err(reject("p divides d'/d"));
    }
    if small.d != d
        || large.d != d_prime
        || small.coeff != Coeff::Prime(p)
        || large.coeff != Coeff::Prime(p)
    {
        return Err(reject(
            "tables do not match the requested degrees and field",
        ));
    }
    Ok(compare_dimensions(small, large))
}

/// `dim_{F_p} H_i(M/p) = rank H_i + #p-factors of H_i + #p-factors of H_{i-1}`.
pub fn verify_universal_coefficients(
    integral: &HomologyTable,
    modular: &HomologyTable,
) -> LawReport {
    let mut report = LawReport::new(format!("universal coefficients {}", modular.coeff));
    let Coeff::Prime(p) = modular.coeff else {
        report.fail(0, 0, "second table must have field coefficients");
        return report;
    };
    for (&n, row) in &integral.rows {
        let Some(dims) = modular.rows.get(&n) else {
            continue;
        };
        for (i, dim) in dims.iter().enumerate() {
            report.checked += 1;
            let below = i.checked_sub(1).map_or(0, |j| row[j].p_rank(p));
            let want = row[i].dim_mod_p(p) + below;
            if dim.rank != want {
                report.fail(
                    n,
                    i,
                    format!("F_{p} dimension {}, integral data give {want}", dim.rank),
                );
            }
        }
    }
    report
}

/// Alternating sum of mod-`p` dimensions against the alternating sum of
/// chain ranks `C(n - 1, k) * (n - 1)(d - 1)`.
pub fn verify_euler(modular: &HomologyTable) -> LawReport {
    let mut report = LawReport::new(format!("euler characteristic {}", modular.coeff));
    for (&n, dims) in &modular.rows {
        report.checked += 1;
        let homology: i64 = dims
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if i % 2 == 0 {
                    g.rank as i64
                } else {
                    -(g.rank as i64)
                }
            })
            .sum();
        let module = betti1(n, modular.d) as i64;
        let chains: i64 = (0..n)
            .map(|k| {
                let cells = binomial(n - 1, k) as i64 * module;
                if k % 2 == 0 {
                    cells
                } else {
                    -cells
                }
            })
            .sum();
        if homology != chains {
            report.fail(
                n,
                0,
                format!("homology gives {homology}, chains give {chains}"),
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(d: usize, coeff: Coeff, rows: &[(usize, &[&str])]) -> HomologyTable {
        let mut t = HomologyTable::new(d, coeff, "test");
        for &(n, cells) in rows {
            t.rows
                .insert(n, cells.iter().map(|s| s.parse().unwrap()).collect());
        }
        t
    }

    #[test]
    fn torsion_law_scope() {
        let t = table(
            4,
            Coeff::Integers,
            &[(8, &["0", "Z_4", "Z_4 Z_8 Z"]), (9, &["0", "Z_4"])],
        );
        assert!(verify_torsion_law(&t).pass());
        let bad = table(2, Coeff::Integers, &[(5, &["0", "Z_3"])]);
        assert_eq!(verify_torsion_law(&bad).violations.len(), 1);
        let squares = table(6, Coeff::Integers, &[(5, &["0", "Z_4"])]);
        assert_eq!(verify_torsion_law(&squares).violations.len(), 2);
        assert!(verify_torsion_law(&table(1, Coeff::Integers, &[])).pass());
    }

    #[test]
    fn unstable_free_part() {
        let t = table(
            4,
            Coeff::Integers,
            &[(4, &["0", "Z_2 Z_4", "Z_2^2 Z", "Z"])],
        );
        assert!(verify_unstable_free(&t).pass());
        let odd = table(3, Coeff::Integers, &[(4, &["0", "Z_3", "Z"])]);
        assert!(!verify_unstable_free(&odd).pass());
    }

    #[test]
    fn stability_range() {
        let t = table(
            2,
            Coeff::Integers,
            &[
                (5, &["0", "Z_2", "Z_2", "Z_2", "0"]),
                (6, &["0", "Z_2", "Z_2^2", "Z_2^2 Z_3", "Z", "Z"]),
                (7, &["0", "Z_2", "Z_2", "Z_2^2", "Z_2^2", "Z_2", "0"]),
            ],
        );
        let r = verify_stability(&t, crate::fixtures::fixture(2));
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.columns[1].first_stable, 5);
        let h = r.highlights.iter().find(|h| (h.n, h.i) == (5, 1)).unwrap();
        assert_eq!(h.pass, Some(true));
        assert!(r
            .highlights
            .iter()
            .any(|h| (h.n, h.i) == (9, 3) && h.pass.is_none()));
    }

    #[test]
    fn covering_hypotheses() {
        let a = table(2, Coeff::Prime(2), &[(3, &["0", "Z", "0"])]);
        let b = table(6, Coeff::Prime(2), &[(3, &["0", "Z", "0"])]);
        assert!(verify_covering_iso(2, 6, 2, &a, &b).unwrap().pass());
        let c = table(3, Coeff::Prime(3), &[]);
        let e = table(6, Coeff::Prime(3), &[]);
        assert!(matches!(
            verify_covering_iso(3, 6, 3, &c, &e),
            Err(EngineError::Hypothesis { .. })
        ));
        assert!(verify_covering_iso(2, 6, 3, &a, &b).is_err());
    }

    #[test]
    fn universal_coefficients() {
        let z = table(
            4,
            Coeff::Integers,
            &[(4, &["0", "Z_2 Z_4", "Z_2^2 Z", "Z"])],
        );
        let f2 = table(4, Coeff::Prime(2), &[(4, &["0", "Z^2", "Z^5", "Z^3"])]);
        assert!(verify_universal_coefficients(&z, &f2).pass());
        assert!(verify_euler(&f2).pass());
    }
}
