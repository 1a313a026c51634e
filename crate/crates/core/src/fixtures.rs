//! Published values of `H_i(Br_n; H_1(Sigma_n^d))` for `d = 2..6`, as
//! embedded reference data.
//!
//! Rows list degrees `i = 1, 2, ...`. Blank cells inside the printed
//! staircase are the zero group; `?` marks the one unknown cell.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::linalg::AbelianGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Group(AbelianGroup),
    Unknown,
}

#[derive(Debug, Clone)]
pub struct TableFixture {
    pub d: usize,
    /// Table number, `1` for `d = 2` through `5` for `d = 6`.
    pub table: usize,
    /// Largest degree that has a column.
    pub columns: usize,
    rows: BTreeMap<usize, Vec<Cell>>,
    /// Shaded cells `(n, i)`: the first stable group of each column.
    pub highlights: Vec<(usize, usize)>,
}

impl TableFixture {
    pub fn provenance(&self) -> String {
        format!("Table {}", self.table)
    }

    pub fn rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn max_n(&self) -> usize {
        self.rows.keys().copied().max().unwrap_or(0)
    }

    /// The printed cell, or `None` when `(n, i)` is not part of the table
    /// (degree 0, rows not printed, degrees past the last column).
    pub fn cell(&self, n: usize, i: usize) -> Option<&Cell> {
        if i == 0 || i > self.columns {
            return None;
        }
        self.rows.get(&n)?.get(i - 1)
    }

    pub fn group(&self, n: usize, i: usize) -> Option<&AbelianGroup> {
        match self.cell(n, i)? {
            Cell::Group(g) => Some(g),
            Cell::Unknown => None,
        }
    }

    /// All printed cells in row order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, &Cell)> + '_ {
        self.rows
            .iter()
            .flat_map(|(&n, row)| row.iter().enumerate().map(move |(j, c)| (n, j + 1, c)))
    }
}

struct Raw {
    d: usize,
    columns: usize,
    rows: &'static [(usize, &'static [&'static str])],
    highlights: &'static [(usize, usize)],
}

const RAW: [Raw; 5] = [
    Raw {
        d: 2,
        columns: 11,
        rows: &[
            (3, &["Z_2", "0"]),
            (4, &["Z_2^2", "Z", "Z"]),
            (5, &["Z_2", "Z_2", "Z_2", "0"]),
            (6, &["Z_2", "Z_2^2", "Z_2^2 Z_3", "Z", "Z"]),
            (7, &["Z_2", "Z_2", "Z_2^2", "Z_2^2", "Z_2", "0"]),
            (
                8,
                &["Z_2", "Z_2", "Z_2^3", "Z_2^3 Z_3", "Z_2^3 Z_3", "Z", "Z"],
            ),
            (
                9,
                &["Z_2", "Z_2", "Z_2^2", "Z_2^3", "Z_2^3", "Z_2^2", "Z_2", "0"],
            ),
            (
                10,
                &[
                    "Z_2",
                    "Z_2",
                    "Z_2^2",
                    "Z_2^4",
                    "Z_2^4",
                    "Z_2^4 Z_3",
                    "Z_2^3 Z_3 Z_5",
                    "Z",
                    "Z",
                ],
            ),
            (
                11,
                &[
                    "Z_2", "Z_2", "Z_2^2", "Z_2^3", "Z_2^4", "Z_2^4", "Z_2^4", "Z_2^3", "Z_2", "0",
                ],
            ),
            (
                12,
                &[
                    "Z_2",
                    "Z_2",
                    "Z_2^2",
                    "Z_2^3",
                    "Z_2^5",
                    "Z_2^5",
                    "Z_2^6 Z_3",
                    "Z_2^6 Z_3 Z_5",
                    "Z_2^3 Z_3 Z_5",
                    "Z",
                    "Z",
                ],
            ),
            (
                13,
                &[
                    "Z_2", "Z_2", "Z_2^2", "Z_2^3", "Z_2^4", "Z_2^5", "Z_2^6", "Z_2^6", "Z_2^5",
                    "Z_2^3", "Z_2",
                ],
            ),
        ],
        highlights: &[(5, 1), (7, 2), (9, 3), (11, 4), (13, 5)],
    },
    Raw {
        d: 3,
        columns: 8,
        rows: &[
            (3, &["Z_3", "0"]),
            (4, &["Z_3", "Z_3", "0"]),
            (5, &["Z_3", "Z_3", "Z_3", "0"]),
            (6, &["Z_3", "Z_3", "Z_3^2", "Z_3^2", "0"]),
            (7, &["Z_3", "Z_3", "Z_3", "Z_3", "Z_3", "0"]),
            (8, &["Z_3", "Z_3", "Z_3", "Z_3", "Z_3", "Z_3", "0"]),
            (
                9,
                &["Z_3", "Z_3", "Z_3", "Z_3", "Z_3^2", "Z_3^2", "Z_3", "0"],
            ),
            (
                10,
                &["Z_3", "Z_3", "Z_3", "Z_3", "Z_3^2", "Z_3^3", "Z_3^2", "Z_3"],
            ),
        ],
        highlights: &[(4, 1), (6, 2), (7, 3), (9, 4)],
    },
    Raw {
        d: 4,
        columns: 9,
        rows: &[
            (3, &["Z_4", "0"]),
            (4, &["Z_2 Z_4", "Z_2^2 Z", "Z"]),
            (5, &["Z_4", "Z_4", "Z_4", "0"]),
            (6, &["Z_4", "Z_2 Z_4", "Z_2 Z_3 Z_4", "Z_2 Z", "Z"]),
            (7, &["Z_4", "Z_4", "Z_2 Z_4", "Z_2 Z_4", "Z_4", "0"]),
            (
                8,
                &[
                    "Z_4",
                    "Z_4",
                    "Z_2^2 Z_4",
                    "Z_2^3 Z_3 Z_4",
                    "Z_2^3 Z_3 Z_4",
                    "Z_4 Z_8 Z",
                    "Z",
                ],
            ),
            (
                9,
                &[
                    "Z_4",
                    "Z_4",
                    "Z_2 Z_4",
                    "Z_2^2 Z_4",
                    "Z_2^2 Z_4",
                    "Z_2 Z_4",
                    "Z_4",
                    "0",
                ],
            ),
            (
                10,
                &[
                    "Z_4",
                    "Z_4",
                    "Z_2 Z_4",
                    "Z_2^3 Z_4",
                    "Z_2^3 Z_4",
                    "Z_2^3 Z_4 Z_6",
                    "Z_2^3 Z_60",
                    "Z_2 Z",
                    "Z",
                ],
            ),
        ],
        highlights: &[(5, 1), (7, 2), (9, 3)],
    },
    Raw {
        d: 5,
        columns: 11,
        rows: &[
            (3, &["Z_5", "0"]),
            (4, &["Z_5", "Z_5", "0"]),
            (5, &["Z_5", "Z_5", "Z_5", "0"]),
            (6, &["Z_5", "Z_5", "Z_5", "Z_5", "0"]),
            (7, &["Z_5", "Z_5", "Z_5", "Z_5", "Z_5", "0"]),
            (8, &["Z_5", "Z_5", "Z_5", "Z_5", "Z_5", "Z_5", "0"]),
            (9, &["Z_5", "Z_5", "Z_5", "Z_5", "Z_5", "Z_5", "Z_5", "0"]),
            (
                10,
                &[
                    "Z_5", "Z_5", "Z_5", "Z_5", "Z_5", "Z_5", "Z_5^4", "Z_5^4", "0",
                ],
            ),
        ],
        highlights: &[(4, 1), (5, 2), (6, 3), (8, 4), (9, 5)],
    },
    Raw {
        d: 6,
        columns: 9,
        rows: &[
            (3, &["Z_6", "0"]),
            (4, &["Z_2 Z_6", "Z_3 Z", "Z"]),
            (5, &["Z_6", "Z_6", "Z_6", "0"]),
            (6, &["Z_6", "Z_2 Z_6", "Z_3^2 Z_6^2", "Z_3^4 Z", "Z"]),
            (7, &["Z_6", "Z_6", "Z_2 Z_6", "Z_2 Z_6", "Z_6", "0"]),
            (
                8,
                &[
                    "Z_6",
                    "Z_6",
                    "Z_2^2 Z_6",
                    "Z_2 Z_6^2",
                    "Z_2 Z_6^2",
                    "Z_3 Z",
                    "Z",
                ],
            ),
            (
                9,
                &[
                    "Z_6",
                    "Z_6",
                    "Z_2 Z_6",
                    "Z_2^2 Z_6",
                    "Z_2 Z_6^2",
                    "Z_6^2",
                    "Z_6",
                    "0",
                ],
            ),
            (
                10,
                &[
                    "Z_6",
                    "Z_6",
                    "Z_2 Z_6",
                    "?",
                    "Z_2^2 Z_6^2",
                    "Z_6^4",
                    "Z_6^3 Z_5",
                    "Z_3 Z",
                    "Z",
                ],
            ),
        ],
        highlights: &[(5, 1), (7, 2), (9, 3)],
    },
];

fn parse(raw: &Raw, table: usize) -> TableFixture {
    let rows = raw
        .rows
        .iter()
        .map(|&(n, cells)| {
            let cells = cells
                .iter()
                .map(|&s| match s {
                    "?" => Cell::Unknown,
                    s => Cell::Group(s.parse().expect("fixture cells are well formed")),
                })
                .collect();
            (n, cells)
        })
        .collect();
    TableFixture {
        d: raw.d,
        table,
        columns: raw.columns,
        rows,
        highlights: raw.highlights.to_vec(),
    }
}

fn all() -> &'static [TableFixture] {
    static TABLES: OnceLock<Vec<TableFixture>> = OnceLock::new();
    TABLES.get_or_init(|| {
        RAW.iter()
            .enumerate()
            .map(|(j, raw)| parse(raw, j + 1))
            .collect()
    })
}

/// The published table for degree `d`, if there is one.
pub fn fixture(d: usize) -> Option<&'static TableFixture> {
    all().iter().find(|t| t.d == d)
}

pub fn fixtures() -> &'static [TableFixture] {
    all()
}

/// Printed first terms of the stable Poincare series, coefficients of
/// `q^0, q^1, ...`.
pub fn printed_stable_expansion(p: u64) -> Option<&'static [i64]> {
    match p {
        2 => Some(&[0, 1, 1, 2, 3, 4, 5, 7, 9, 11, 14, 17]),
        3 => Some(&[0, 1, 1, 1, 1, 2, 3, 3, 3, 4, 5, 5, 6]),
        _ => None,
    }
}
