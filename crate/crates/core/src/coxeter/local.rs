use std::fmt;

use serde::{Deserialize, Serialize};

use super::group::CoxeterSpec;
use crate::linalg::Matrix;
use crate::scalar::{Overflow, Scalar};
use crate::surface::SurfaceRep;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalSystemError {
    #[error("expected {expected} generator matrices, got {got}")]
    Count { expected: usize, got: usize },
    #[error("generator {g} is not a {dim}x{dim} matrix")]
    Shape { g: usize, dim: usize },
    #[error("generator {g} is not invertible over the integers")]
    NotInvertible { g: usize },
    #[error("Artin relation of length {m} fails between s{i} and s{j}")]
    Relation { i: usize, j: usize, m: u32 },
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

/// A representation of an Artin group on `Z^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSystem<T> {
    spec: CoxeterSpec,
    dim: usize,
    action: Vec<Matrix<T>>,
    label: String,
}

fn alternating<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, len: u32) -> Result<Matrix<T>, Overflow> {
    let mut out = Matrix::identity(a.rows());
    for step in 0..len {
        out = out.try_mul(if step % 2 == 0 { a } else { b })?;
    }
    Ok(out)
}

impl<T: Scalar> LocalSystem<T> {
    /// Checks shapes, invertibility and the Artin relations.
    pub fn new(
        spec: CoxeterSpec,
        dim: usize,
        action: Vec<Matrix<T>>,
        label: impl Into<String>,
    ) -> Result<Self, LocalSystemError> {
        if action.len() != spec.rank {
            return Err(LocalSystemError::Count {
                expected: spec.rank,
                got: action.len(),
            });
        }
        for (g, m) in action.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(LocalSystemError::Shape { g, dim });
            }
            if m.try_det()?.abs() != T::one() {
                return Err(LocalSystemError::NotInvertible { g });
            }
        }
        for i in 0..spec.rank {
            for j in i + 1..spec.rank {
                let m = spec.m(i, j);
                let (a, b) = (&action[i], &action[j]);
                if alternating(a, b, m)? != alternating(b, a, m)? {
                    return Err(LocalSystemError::Relation { i, j, m });
                }
            }
        }
        Ok(LocalSystem {
            spec,
            dim,
            action,
            label: label.into(),
        })
    }

    pub fn spec(&self) -> &CoxeterSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, g: usize) -> &Matrix<T> {
        &self.action[g]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn trivial(spec: CoxeterSpec, dim: usize) -> Self {
        LocalSystem {
            spec,
            dim,
            action: vec![Matrix::identity(dim); spec.rank],
            label: format!("trivial^{dim}"),
        }
    }

    /// The braid group `Br_n` acting on the first homology of the surface.
    pub fn from_surface(rep: &SurfaceRep<T>) -> Result<Self, LocalSystemError> {
        Self::new(
            CoxeterSpec::type_a(rep.n - 1),
            rep.rank(),
            rep.generators.clone(),
            format!("surface/{}", rep.fingerprint()),
        )
    }

    pub fn convert<U: Scalar>(&self) -> Result<LocalSystem<U>, Overflow> {
        Ok(LocalSystem {
            spec: self.spec,
            dim: self.dim,
            action: self
                .action
                .iter()
                .map(Matrix::convert)
                .collect::<Result<_, _>>()?,
            label: self.label.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply<T: Scalar>(&self, m: Matrix<T>) -> Matrix<T> {
        match self {
            Sign::Plus => m,
            Sign::Minus => m.neg(),
        }
    }
}

/// Which module over `Z[t]` the type B systems realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TModule {
    /// `Z[t] / (1 - (-t)^d)`, rank `d`.
    Full,
    /// `Z[t] / ([d]_{-t})`, rank `d - 1`.
    Cyclotomic,
}

/// Candidate action: `t` (up to sign) on `s_0`, plus or minus the identity on
/// the remaining generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TVariant {
    pub special: Sign,
    pub braid: Sign,
}

impl TVariant {
    pub const ALL: [TVariant; 4] = [
        TVariant {
            special: Sign::Plus,
            braid: Sign::Plus,
        },
        TVariant {
            special: Sign::Plus,
            braid: Sign::Minus,
        },
        TVariant {
            special: Sign::Minus,
            braid: Sign::Plus,
        },
        TVariant {
            special: Sign::Minus,
            braid: Sign::Minus,
        },
    ];
}

impl fmt::Display for TVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |x: Sign| if x == Sign::Plus { "+" } else { "-" };
        write!(f, "{}t/{}1", s(self.special), s(self.braid))
    }
}

/// Companion matrix of multiplication by `t` on the chosen quotient, in the
/// basis `1, t, t^2, ...`.
pub fn t_companion<T: Scalar>(d: usize, module: TModule) -> Matrix<T> {
    let sign = |e: usize| if e.is_multiple_of(2) { 1 } else { -1 };
    let size = match module {
        TModule::Full => d,
        TModule::Cyclotomic => d.saturating_sub(1),
    };
    let mut triplets: Vec<(usize, usize, i64)> =
        (0..size.saturating_sub(1)).map(|i| (i + 1, i, 1)).collect();
    match module {
        // t^d = (-1)^d
        TModule::Full if d > 0 => triplets.push((0, d - 1, sign(d))),
        // t^{d-1} = sum_j (-1)^{d+j} t^j
        TModule::Cyclotomic if size > 0 => {
            triplets.extend((0..size).map(|j| (j, size - 1, sign(d + j))));
        }
        _ => {}
    }
    Matrix::from_triplets(
        size,
        size,
        triplets.into_iter().map(|(r, c, v)| (r, c, T::from_int(v))),
    )
}

/// Type B system of rank `n` with `s_0` acting by `+-t`.
pub fn t_local_system<T: Scalar>(
    n: usize,
    d: usize,
    module: TModule,
    variant: TVariant,
) -> Result<LocalSystem<T>, LocalSystemError> {
    let spec = CoxeterSpec::type_b(n);
    let c = t_companion::<T>(d, module);
    let dim = c.rows();
    let mut action = Vec::with_capacity(n);
    if n > 0 {
        action.push(variant.special.apply(c));
    }
    for _ in 1..n {
        action.push(variant.braid.apply(Matrix::identity(dim)));
    }
    let module_tag = match module {
        TModule::Full => "full",
        TModule::Cyclotomic => "cyclotomic",
    };
    LocalSystem::new(spec, dim, action, format!("t-{module_tag}/{variant}"))
}
