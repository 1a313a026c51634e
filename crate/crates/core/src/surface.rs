//! First homology of the superelliptic surface `y^d = prod (z - x_i)` over
//! `n` branch points, and the action of the standard braid generators on it.
//!
//! Coordinates: the class `a(k, i)` with `k in 1..n`, `i in 1..d` sits at
//! `(k - 1)(d - 1) + (i - 1)`. The formal class `a(k, d)` is the negative sum
//! of its block, and every index in the pairing rules is read mod `d`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::linalg::{rational_rank, Matrix, SnfConfig};
use crate::scalar::{Overflow, Scalar};

pub fn betti1(n: usize, d: usize) -> usize {
    n.saturating_sub(1) * d.saturating_sub(1)
}

pub fn genus(n: usize, d: usize) -> usize {
    // 2g + b - 1 = betti1 with b = gcd(n, d)
    (betti1(n, d) + 1 - boundary_components(n, d)) / 2
}

pub fn boundary_components(n: usize, d: usize) -> usize {
    n.gcd(&d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Construction {
    /// Twist read off the pairing table with the curves `gamma(k, i)`.
    A,
    /// Product of transvections along `a(k, 1), ..., a(k, d - 1)`.
    B,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::A => write!(f, "A"),
            Construction::B => write!(f, "B"),
        }
    }
}

impl std::str::FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Construction::A),
            "B" | "b" => Ok(Construction::B),
            _ => Err(format!("unknown construction {s:?}")),
        }
    }
}

/// How the transvection product is composed.
///
/// `RightToLeft` is the matrix `t_1 t_2 ... t_{d-1}`, so `t_{d-1}` acts
/// first; `LeftToRight` applies `t_1` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    LeftToRight,
    RightToLeft,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::LeftToRight => write!(f, "left-to-right"),
            Order::RightToLeft => write!(f, "right-to-left"),
        }
    }
}

impl std::str::FromStr for Order {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left-to-right" | "ltr" => Ok(Order::LeftToRight),
            "right-to-left" | "rtl" => Ok(Order::RightToLeft),
            _ => Err(format!("unknown order {s:?}")),
        }
    }
}

/// A relation a candidate representation fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationFailure {
    Braid { k: usize },
    Commute { k: usize, l: usize },
    Determinant { k: usize, det: String },
    Omega { k: usize },
}

impl fmt::Display for RelationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationFailure::Braid { k } => {
                write!(f, "T{k} T{0} T{k} != T{0} T{k} T{0}", k + 1)
            }
            RelationFailure::Commute { k, l } => write!(f, "T{k} T{l} != T{l} T{k}"),
            RelationFailure::Determinant { k, det } => write!(f, "det T{k} = {det}"),
            RelationFailure::Omega { k } => {
                write!(f, "T{k} does not preserve the intersection form")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error("generator index {k} outside 1..{n} (n = {n}, d = {d})")]
    IndexOutOfRange { n: usize, d: usize, k: usize },
    #[error("n and d must be positive")]
    Degenerate,
    #[error("relation violated: {0}")]
    Relation(RelationFailure),
    #[error("root check needs even d, got {0}")]
    OddDegree(usize),
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

/// Index bookkeeping for the classes `a(k, i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceBasis {
    pub n: usize,
    pub d: usize,
}

impl SurfaceBasis {
    pub fn new(n: usize, d: usize) -> Result<Self, RepError> {
        if n == 0 || d == 0 {
            return Err(RepError::Degenerate);
        }
        Ok(SurfaceBasis { n, d })
    }

    pub fn rank(&self) -> usize {
        betti1(self.n, self.d)
    }

    /// Coordinate of `a(k, i)` for `1 <= i < d`.
    pub fn coord(&self, k: usize, i: usize) -> usize {
        debug_assert!((1..self.n).contains(&k) && (1..self.d).contains(&i));
        (k - 1) * (self.d - 1) + (i - 1)
    }

    /// Inverse of [`coord`](Self::coord).
    pub fn label(&self, c: usize) -> (usize, usize) {
        (c / (self.d - 1) + 1, c % (self.d - 1) + 1)
    }

    /// Representative of `i` in `1..=d`.
    fn wrap(&self, i: i64) -> usize {
        let d = self.d as i64;
        ((i - 1).rem_euclid(d) + 1) as usize
    }

    fn congruent(&self, i: usize, j: usize) -> bool {
        (i as i64 - j as i64).rem_euclid(self.d as i64) == 0
    }

    /// Coordinates of `a(k, i)`, any `i`; `a(k, d)` expands to minus the block.
    pub fn formal(&self, k: usize, i: i64) -> Vec<(usize, i64)> {
        let i = self.wrap(i);
        if i < self.d {
            vec![(self.coord(k, i), 1)]
        } else {
            (1..self.d).map(|j| (self.coord(k, j), -1)).collect()
        }
    }

    /// The relation vector `a(k, 1) + ... + a(k, d)` expanded in coordinates.
    pub fn relation(&self, k: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        for i in 1..=self.d {
            for (c, s) in self.formal(k, i as i64) {
                v[c] += s;
            }
        }
        v
    }

    /// Pairing of the formal classes `a(k, i)` and `a(l, j)`.
    pub fn pair_formal(&self, k: usize, i: usize, l: usize, j: usize) -> i64 {
        let mut out = 0;
        if l == k {
            if self.congruent(j, i + 1) {
                out += 1;
            }
            if self.congruent(j + 1, i) {
                out -= 1;
            }
        } else if l == k + 1 {
            if self.congruent(j, i) {
                out -= 1;
            }
            if self.congruent(j, i + 1) {
                out += 1;
            }
        } else if l + 1 == k {
            out = -self.pair_formal(l, j, k, i);
        }
        out
    }

    /// Pairing of `a(l, j)` with the curve `gamma(k, i)`.
    fn pair_gamma(&self, l: usize, j: usize, k: usize, i: usize) -> i64 {
        let mut out = 0;
        if l == k {
            if self.congruent(i, j) {
                out += 1;
            }
            if self.congruent(i, j + 1) {
                out -= 1;
            }
        } else if l + 1 == k {
            if self.congruent(i, j + 1) {
                out -= 1;
            }
        } else if l == k + 1 && self.congruent(i, j) {
            out += 1;
        }
        out
    }

    fn check_generator(&self, k: usize) -> Result<(), RepError> {
        if k == 0 || k >= self.n {
            return Err(RepError::IndexOutOfRange {
                n: self.n,
                d: self.d,
                k,
            });
        }
        Ok(())
    }
}

/// The intersection pairing `(x, y) = x^T omega y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm<T> {
    pub n: usize,
    pub d: usize,
    pub omega: Matrix<T>,
}

impl<T: Scalar> IntersectionForm<T> {
    pub fn pair(&self, x: &[T], y: &[T]) -> Result<T, Overflow> {
        let oy = self.omega.apply(y)?;
        let mut acc = T::zero();
        for (a, b) in x.iter().zip(&oy) {
            acc = acc.try_add(&a.try_mul(b)?)?;
        }
        Ok(acc)
    }

    /// `m^T omega m == omega`.
    pub fn preserved_by(&self, m: &Matrix<T>) -> Result<bool, Overflow> {
        Ok(m.transpose().try_mul(&self.omega)?.try_mul(m)? == self.omega)
    }
}

pub fn intersection_form<T: Scalar>(n: usize, d: usize) -> Result<IntersectionForm<T>, RepError> {
    let basis = SurfaceBasis::new(n, d)?;
    let size = basis.rank();
    let mut triplets = Vec::new();
    for r in 0..size {
        let (k, i) = basis.label(r);
        for c in 0..size {
            let (l, j) = basis.label(c);
            let v = basis.pair_formal(k, i, l, j);
            if v != 0 {
                triplets.push((r, c, T::from_int(v)));
            }
        }
    }
    Ok(IntersectionForm {
        n,
        d,
        omega: Matrix::from_triplets(size, size, triplets),
    })
}

/// Twist `T_k` from the rule `a -> a - sum_i (a, gamma(k, i)) a(k, i)`.
pub fn twist_matrix_a<T: Scalar>(n: usize, d: usize, k: usize) -> Result<Matrix<T>, RepError> {
    let basis = SurfaceBasis::new(n, d)?;
    basis.check_generator(k)?;
    let size = basis.rank();
    let mut triplets = Vec::new();
    for c in 0..size {
        let (l, j) = basis.label(c);
        triplets.push((c, c, 1));
        if l + 1 < k || l > k + 1 {
            continue;
        }
        for i in 1..=d {
            let w = basis.pair_gamma(l, j, k, i);
            if w != 0 {
                for (r, s) in basis.formal(k, i as i64) {
                    triplets.push((r, c, -w * s));
                }
            }
        }
    }
    Ok(Matrix::from_triplets(
        size,
        size,
        triplets.into_iter().map(|(r, c, v)| (r, c, T::from_int(v))),
    ))
}

/// The transvection `x -> x - (x, c) c`, i.e. `I - c (omega c)^T`.
pub fn transvection<T: Scalar>(form: &IntersectionForm<T>, c: &[T]) -> Result<Matrix<T>, RepError> {
    let size = c.len();
    let oc = form.omega.apply(c)?;
    let mut triplets: Vec<(usize, usize, T)> = (0..size).map(|i| (i, i, T::one())).collect();
    for (r, cr) in c.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (col, w) in oc.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            triplets.push((r, col, -cr.try_mul(w)?));
        }
    }
    Ok(Matrix::from_triplets(size, size, triplets))
}

/// Twist `T_k` as the product of transvections along the block `k` basis.
pub fn twist_matrix_b<T: Scalar>(
    n: usize,
    d: usize,
    k: usize,
    order: Order,
) -> Result<Matrix<T>, RepError> {
    let basis = SurfaceBasis::new(n, d)?;
    basis.check_generator(k)?;
    let form = intersection_form::<T>(n, d)?;
    twist_b_with(&basis, &form, k, order)
}

fn twist_b_with<T: Scalar>(
    basis: &SurfaceBasis,
    form: &IntersectionForm<T>,
    k: usize,
    order: Order,
) -> Result<Matrix<T>, RepError> {
    let size = basis.rank();
    let mut out = Matrix::identity(size);
    for i in 1..basis.d {
        let mut c = vec![T::zero(); size];
        c[basis.coord(k, i)] = T::one();
        let t = transvection(form, &c)?;
        out = match order {
            Order::RightToLeft => out.try_mul(&t)?,
            Order::LeftToRight => t.try_mul(&out)?,
        };
    }
    Ok(out)
}

/// One generator matrix per standard braid generator, with the form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceRep<T> {
    pub n: usize,
    pub d: usize,
    pub construction: Construction,
    /// Only meaningful for construction B.
    pub order: Option<Order>,
    pub generators: Vec<Matrix<T>>,
    pub form: IntersectionForm<T>,
}

impl<T: Scalar> SurfaceRep<T> {
    pub fn rank(&self) -> usize {
        betti1(self.n, self.d)
    }

    /// Generator `T_k`, `k` starting at 1.
    pub fn generator(&self, k: usize) -> &Matrix<T> {
        &self.generators[k - 1]
    }

    /// Short tag such as `B/right-to-left`.
    pub fn fingerprint(&self) -> String {
        match self.order {
            Some(order) => format!("{}/{}", self.construction, order),
            None => self.construction.to_string(),
        }
    }
}

/// First braid-group relation that fails, if any.
pub fn check_braid_relations<T: Scalar>(
    generators: &[Matrix<T>],
) -> Result<Option<RelationFailure>, Overflow> {
    for k in 0..generators.len() {
        for l in k + 1..generators.len() {
            let (a, b) = (&generators[k], &generators[l]);
            if l == k + 1 {
                let left = a.try_mul(b)?.try_mul(a)?;
                let right = b.try_mul(a)?.try_mul(b)?;
                if left != right {
                    return Ok(Some(RelationFailure::Braid { k: k + 1 }));
                }
            } else if a.try_mul(b)? != b.try_mul(a)? {
                return Ok(Some(RelationFailure::Commute { k: k + 1, l: l + 1 }));
            }
        }
    }
    Ok(None)
}

fn check_determinants<T: Scalar>(
    generators: &[Matrix<T>],
) -> Result<Option<RelationFailure>, Overflow> {
    for (k, g) in generators.iter().enumerate() {
        let det = g.try_det()?;
        if det.abs() != T::one() {
            return Ok(Some(RelationFailure::Determinant {
                k: k + 1,
                det: det.to_string(),
            }));
        }
    }
    Ok(None)
}

fn check_omega<T: Scalar>(
    form: &IntersectionForm<T>,
    generators: &[Matrix<T>],
) -> Result<Option<RelationFailure>, Overflow> {
    for (k, g) in generators.iter().enumerate() {
        if !form.preserved_by(g)? {
            return Ok(Some(RelationFailure::Omega { k: k + 1 }));
        }
    }
    Ok(None)
}

fn generators_for<T: Scalar>(
    n: usize,
    d: usize,
    construction: Construction,
    order: Order,
) -> Result<(Vec<Matrix<T>>, IntersectionForm<T>), RepError> {
    let basis = SurfaceBasis::new(n, d)?;
    let form = intersection_form::<T>(n, d)?;
    let generators = (1..n)
        .map(|k| match construction {
            Construction::A => twist_matrix_a(n, d, k),
            Construction::B => twist_b_with(&basis, &form, k, order),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((generators, form))
}

/// Assembles all generators and checks braid relations, determinants and
/// (construction B, or A with `d >= 3`) preservation of the form.
pub fn build_rep<T: Scalar>(
    n: usize,
    d: usize,
    construction: Construction,
    order: Order,
) -> Result<SurfaceRep<T>, RepError> {
    let wants_omega = construction == Construction::B || d >= 3;
    assemble(n, d, construction, order, wants_omega)
}

/// Like [`build_rep`] but only requires a braid group representation; the
/// form is not checked.
pub fn build_rep_relaxed<T: Scalar>(
    n: usize,
    d: usize,
    construction: Construction,
    order: Order,
) -> Result<SurfaceRep<T>, RepError> {
    assemble(n, d, construction, order, false)
}

fn assemble<T: Scalar>(
    n: usize,
    d: usize,
    construction: Construction,
    order: Order,
    wants_omega: bool,
) -> Result<SurfaceRep<T>, RepError> {
    let (generators, form) = generators_for::<T>(n, d, construction, order)?;
    let failure = match check_braid_relations(&generators)? {
        Some(f) => Some(f),
        None => match check_determinants(&generators)? {
            Some(f) => Some(f),
            None if wants_omega => check_omega(&form, &generators)?,
            None => None,
        },
    };
    if let Some(f) = failure {
        return Err(RepError::Relation(f));
    }
    Ok(SurfaceRep {
        n,
        d,
        construction,
        order: (construction == Construction::B).then_some(order),
        generators,
        form,
    })
}

/// Whether `T_k^{d/2}` is a transvection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootReport {
    pub k: usize,
    pub power: usize,
    pub rank_minus_identity: usize,
    pub square_zero: bool,
    pub pass: bool,
    /// Same test for `T_k^d`, for comparison.
    pub full_power_is_transvection: bool,
}

fn transvection_test<T: Scalar>(m: &Matrix<T>) -> Result<(usize, bool), Overflow> {
    let nil = m.try_sub(&Matrix::identity(m.rows()))?;
    let rank = rational_rank(&nil, &SnfConfig::default());
    Ok((rank, nil.try_mul(&nil)?.is_zero()))
}

pub fn root_check<T: Scalar>(rep: &SurfaceRep<T>, k: usize) -> Result<RootReport, RepError> {
    if rep.d % 2 == 1 {
        return Err(RepError::OddDegree(rep.d));
    }
    SurfaceBasis::new(rep.n, rep.d)?.check_generator(k)?;
    let power = rep.d / 2;
    let half = rep.generator(k).try_pow(power as u32)?;
    let (rank, square_zero) = transvection_test(&half)?;
    let (full_rank, full_square_zero) = transvection_test(&half.try_mul(&half)?)?;
    Ok(RootReport {
        k,
        power,
        rank_minus_identity: rank,
        square_zero,
        pass: rank == 1 && square_zero,
        full_power_is_transvection: full_rank == 1 && full_square_zero,
    })
}

/// How a block of construction A relates to the same block of B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockRelation {
    Equal,
    Negated,
    Differs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockComparison {
    pub k: usize,
    pub order: Order,
    pub row_block: usize,
    pub col_block: usize,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
    pub relation: BlockRelation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionStatus {
    pub construction: Construction,
    pub order: Option<Order>,
    pub braid_relations: bool,
    pub determinants: bool,
    pub preserves_omega: bool,
    pub reverses_omega: bool,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: usize,
    pub d: usize,
    pub identical: bool,
    pub blocks: Vec<BlockComparison>,
    pub constructions: Vec<ConstructionStatus>,
}

fn dense_block(m: &Matrix<i64>, d: usize, row_block: usize, col_block: usize) -> Vec<Vec<i64>> {
    let w = d - 1;
    m.submatrix(
        (row_block - 1) * w..row_block * w,
        (col_block - 1) * w..col_block * w,
    )
    .to_dense()
}

fn status(
    n: usize,
    d: usize,
    construction: Construction,
    order: Order,
) -> Result<ConstructionStatus, RepError> {
    let (gens, form) = generators_for::<i64>(n, d, construction, order)?;
    let braid = check_braid_relations(&gens)?;
    let det = check_determinants(&gens)?;
    let omega = check_omega(&form, &gens)?;
    let negated = IntersectionForm {
        n,
        d,
        omega: form.omega.neg(),
    };
    let mut reverses = !gens.is_empty() && !form.omega.is_zero();
    for g in &gens {
        reverses &= g.transpose().try_mul(&form.omega)?.try_mul(g)? == negated.omega;
    }
    Ok(ConstructionStatus {
        construction,
        order: (construction == Construction::B).then_some(order),
        braid_relations: braid.is_none(),
        determinants: det.is_none(),
        preserves_omega: omega.is_none(),
        reverses_omega: reverses,
        first_failure: braid.or(det).or(omega).map(|f| f.to_string()),
    })
}

/// Compares constructions A and B (both orders) block by block.
pub fn convention_audit(n: usize, d: usize) -> Result<AuditReport, RepError> {
    let basis = SurfaceBasis::new(n, d)?;
    let mut blocks = Vec::new();
    if basis.rank() > 0 {
        for k in 1..n {
            let a = twist_matrix_a::<i64>(n, d, k)?;
            for order in [Order::LeftToRight, Order::RightToLeft] {
                let b = twist_matrix_b::<i64>(n, d, k, order)?;
                for row_block in k.saturating_sub(1).max(1)..=(k + 1).min(n - 1) {
                    for col_block in k.saturating_sub(1).max(1)..=(k + 1).min(n - 1) {
                        let block_a = dense_block(&a, d, row_block, col_block);
                        let block_b = dense_block(&b, d, row_block, col_block);
                        let negated: Vec<Vec<i64>> = block_b
                            .iter()
                            .map(|r| r.iter().map(|v| -v).collect())
                            .collect();
                        let relation = if block_a == block_b {
                            BlockRelation::Equal
                        } else if block_a == negated {
                            BlockRelation::Negated
                        } else {
                            BlockRelation::Differs
                        };
                        blocks.push(BlockComparison {
                            k,
                            order,
                            row_block,
                            col_block,
                            a: block_a,
                            b: block_b,
                            relation,
                        });
                    }
                }
            }
        }
    }
    let constructions = vec![
        status(n, d, Construction::A, Order::RightToLeft)?,
        status(n, d, Construction::B, Order::LeftToRight)?,
        status(n, d, Construction::B, Order::RightToLeft)?,
    ];
    Ok(AuditReport {
        n,
        d,
        identical: blocks.iter().all(|b| b.relation == BlockRelation::Equal),
        blocks,
        constructions,
    })
}

/// Serialized twist matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistJson {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub construction: Construction,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order: Option<Order>,
    pub entries: Vec<(usize, usize, i64)>,
}

impl TwistJson {
    pub fn new<T: Scalar>(
        n: usize,
        d: usize,
        k: usize,
        construction: Construction,
        order: Option<Order>,
        m: &Matrix<T>,
    ) -> Result<Self, Overflow> {
        Ok(TwistJson {
            n,
            d,
            k,
            construction,
            order,
            entries: m.to_json()?.entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn surface_invariants() {
        assert_eq!(
            (betti1(3, 2), genus(3, 2), boundary_components(3, 2)),
            (2, 1, 1)
        );
        assert_eq!(betti1(1, 7), 0);
        assert_eq!((genus(6, 4), boundary_components(6, 4)), (7, 2));
        assert_eq!(
            2 * genus(6, 4) + boundary_components(6, 4) - 1,
            betti1(6, 4)
        );
    }

    #[test]
    fn small_forms() {
        let f = intersection_form::<i64>(3, 2).unwrap();
        assert_eq!(f.omega, m(&[&[0, -1], &[1, 0]]));
        let f = intersection_form::<i64>(2, 3).unwrap();
        assert_eq!(f.omega, m(&[&[0, 1], &[-1, 0]]));
    }

    #[test]
    fn relation_vectors_are_radical_for_formal_pairing() {
        for n in 2..6 {
            for d in 2..7 {
                let basis = SurfaceBasis::new(n, d).unwrap();
                for k in 1..n {
                    for l in 1..n {
                        for j in 1..=d {
                            let s: i64 = (1..=d).map(|i| basis.pair_formal(k, i, l, j)).sum();
                            assert_eq!(s, 0, "n={n} d={d} k={k} l={l} j={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn construction_a_examples() {
        let t = twist_matrix_a::<i64>(3, 3, 1).unwrap();
        assert_eq!(t.submatrix(0..2, 0..2), m(&[&[0, -1], &[1, -1]]));
        assert_eq!(twist_matrix_a::<i64>(2, 2, 1).unwrap(), m(&[&[-1]]));
        assert_eq!(
            twist_matrix_a::<i64>(3, 2, 1).unwrap(),
            m(&[&[-1, -1], &[0, 1]])
        );
        assert_eq!(twist_matrix_a::<i64>(4, 1, 2).unwrap(), Matrix::identity(0));
        assert!(matches!(
            twist_matrix_a::<i64>(3, 3, 3),
            Err(RepError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn construction_b_examples() {
        for order in [Order::LeftToRight, Order::RightToLeft] {
            let rep = build_rep::<i64>(3, 2, Construction::B, order).unwrap();
            assert_eq!(rep.generators[0], m(&[&[1, -1], &[0, 1]]));
            assert_eq!(rep.generators[1], m(&[&[1, 0], &[1, 1]]));
        }
        let t = twist_matrix_b::<i64>(3, 2, 1, Order::LeftToRight).unwrap();
        let nil = t.try_sub(&Matrix::identity(2)).unwrap();
        assert!(nil.mul(&nil).is_zero());
    }

    #[test]
    fn only_one_product_order_is_a_representation() {
        assert!(build_rep::<i64>(3, 3, Construction::B, Order::RightToLeft).is_ok());
        assert_eq!(
            build_rep::<i64>(3, 3, Construction::B, Order::LeftToRight),
            Err(RepError::Relation(RelationFailure::Braid { k: 1 }))
        );
    }

    #[test]
    fn degenerate_reps() {
        let rep = build_rep::<i64>(4, 1, Construction::B, Order::LeftToRight).unwrap();
        assert!(rep.generators.iter().all(|g| g.rows() == 0));
        let rep = build_rep::<i64>(1, 3, Construction::A, Order::LeftToRight).unwrap();
        assert!(rep.generators.is_empty());
    }

    #[test]
    fn construction_a_is_a_representation() {
        let rep = build_rep_relaxed::<i64>(3, 3, Construction::A, Order::RightToLeft).unwrap();
        assert_eq!(rep.generators[0].rows(), 4);
        // the cross-block rows of the literal table break the form
        assert_eq!(
            build_rep::<i64>(3, 3, Construction::A, Order::RightToLeft),
            Err(RepError::Relation(RelationFailure::Omega { k: 1 }))
        );
        // d = 2 reverses the form instead of preserving it
        let audit = convention_audit(3, 2).unwrap();
        let a = &audit.constructions[0];
        assert!(a.braid_relations && !a.preserves_omega && a.reverses_omega);
        assert!(!audit.identical);
    }

    #[test]
    fn roots_of_dehn_twists() {
        let rep = build_rep::<i64>(4, 2, Construction::B, Order::RightToLeft).unwrap();
        for k in 1..4 {
            assert!(root_check(&rep, k).unwrap().pass);
        }
        // for d = 4 the generator has eigenvalues +-i, so only T^4 is unipotent
        let rep = build_rep::<i64>(4, 4, Construction::B, Order::RightToLeft).unwrap();
        for k in 1..4 {
            let report = root_check(&rep, k).unwrap();
            assert!(!report.pass && report.full_power_is_transvection);
        }
        let odd = build_rep::<i64>(3, 3, Construction::B, Order::RightToLeft).unwrap();
        assert_eq!(root_check(&odd, 1), Err(RepError::OddDegree(3)));
    }

    #[test]
    fn twist_json_shape() {
        let t = twist_matrix_b::<i64>(3, 2, 1, Order::LeftToRight).unwrap();
        let json = TwistJson::new(3, 2, 1, Construction::B, None, &t).unwrap();
        let text = serde_json::to_string(&json).unwrap();
        assert_eq!(
            text,
            r#"{"n":3,"d":2,"k":1,"construction":"B","entries":[[0,0,1],[0,1,-1],[1,1,1]]}"#
        );
    }
}
