use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::modular::prime_factors;
use super::snf::normalize_diagonal;

/// A finitely generated abelian group `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_m`.
///
/// Torsion is kept as an invariant-factor chain; equality compares the free
/// rank and the multiset of primary factors, so `Z/6` equals `Z/2 ⊕ Z/3`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

/// A primary cyclic factor `Z/p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub k: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.p.pow(self.k)
    }
}

impl AbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Builds from any list of cyclic orders; entries `<= 1` are dropped.
    pub fn new(rank: usize, cyclic: impl IntoIterator<Item = u64>) -> Self {
        let orders: Vec<i128> = cyclic
            .into_iter()
            .filter(|&c| c > 1)
            .map(|c| c as i128)
            .collect();
        let torsion = normalize_diagonal(orders)
            .into_iter()
            .filter(|&c| c > 1)
            .map(|c| c as u64)
            .collect();
        AbelianGroup { rank, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Sorted multiset of primary factors.
    pub fn primary(&self) -> Vec<PrimePower> {
        let mut out = Vec::new();
        for &t in &self.torsion {
            for p in prime_factors(t) {
                let mut k = 0;
                let mut x = t;
                while x % p == 0 {
                    x /= p;
                    k += 1;
                }
                out.push(PrimePower { p, k });
            }
        }
        out.sort_unstable();
        out
    }

    /// Number of cyclic factors whose order is divisible by `p`.
    pub fn p_rank(&self, p: u64) -> usize {
        self.torsion.iter().filter(|&&t| t % p == 0).count()
    }

    /// `dim (G ⊗ F_p)`.
    pub fn dim_mod_p(&self, p: u64) -> usize {
        self.rank + self.p_rank(p)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(
            self.rank + other.rank,
            self.torsion.iter().chain(&other.torsion).copied(),
        )
    }

    pub fn order_of_torsion(&self) -> u128 {
        self.torsion.iter().map(|&t| t as u128).product()
    }
}

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.primary() == other.primary()
    }
}

impl Eq for AbelianGroup {}

impl fmt::Display for AbelianGroup {
    /// `Z^2 + Z_2^3 + Z_6`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|&&x| x == t).count();
            if run == 1 {
                parts.push(format!("Z_{t}"));
            } else {
                parts.push(format!("Z_{t}^{run}"));
            }
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse abelian group from {0:?}")]
pub struct ParseGroupError(String);

impl FromStr for AbelianGroup {
    type Err = ParseGroupError;

    /// Parses the [`fmt::Display`] notation; `+` separators are optional, so
    /// `Z_2^2 Z_3 Z` also parses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGroupError(s.to_string());
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Self::zero());
        }
        let mut rank = 0;
        let mut cyclic = Vec::new();
        for token in s
            .split(|c: char| c == '+' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let body = token.strip_prefix('Z').ok_or_else(err)?;
            let (order, power) = match body.split_once('^') {
                Some((o, p)) => (o, p.parse::<usize>().map_err(|_| err())?),
                None => (body, 1),
            };
            if order.is_empty() {
                rank += power;
            } else {
                let n: u64 = order
                    .strip_prefix('_')
                    .ok_or_else(err)?
                    .parse()
                    .map_err(|_| err())?;
                cyclic.extend(std::iter::repeat_n(n, power));
            }
        }
        Ok(Self::new(rank, cyclic))
    }
}
