use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four non-octonion simple Euclidean Jordan algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    /// Real symmetric matrices.
    RealSym,
    /// Complex Hermitian matrices.
    ComplexHerm,
    /// Quaternionic Hermitian matrices.
    QuatHerm,
    /// The Lorentz (spin factor) algebra on R^{n+1}.
    Lorentz,
}

impl AlgebraKind {
    pub fn is_matrix(self) -> bool {
        !matches!(self, AlgebraKind::Lorentz)
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::RealSym => "real",
            AlgebraKind::ComplexHerm => "complex",
            AlgebraKind::QuatHerm => "quaternion",
            AlgebraKind::Lorentz => "lorentz",
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which algebra, its rank `r`, Peirce constant `d` and dimension
/// `dim = r + d r (r - 1) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDescriptor")]
pub struct AlgebraDescriptor {
    kind: AlgebraKind,
    rank: usize,
    peirce: usize,
    dim: usize,
}

#[derive(Deserialize)]
struct RawDescriptor {
    kind: AlgebraKind,
    rank: usize,
    peirce: usize,
    dim: usize,
}

impl TryFrom<RawDescriptor> for AlgebraDescriptor {
    type Error = Error;

    fn try_from(raw: RawDescriptor) -> Result<Self> {
        let d = match raw.kind {
            AlgebraKind::Lorentz => AlgebraDescriptor::lorentz(raw.dim.saturating_sub(1))?,
            kind => AlgebraDescriptor::matrix(kind, raw.rank)?,
        };
        if d.rank != raw.rank || d.peirce != raw.peirce || d.dim != raw.dim {
            return Err(Error::InvalidInput(format!(
                "inconsistent descriptor: rank {} peirce {} dim {}",
                raw.rank, raw.peirce, raw.dim
            )));
        }
        Ok(d)
    }
}

impl AlgebraDescriptor {
    pub fn real_sym(rank: usize) -> Result<Self> {
        Self::matrix(AlgebraKind::RealSym, rank)
    }

    pub fn complex_herm(rank: usize) -> Result<Self> {
        Self::matrix(AlgebraKind::ComplexHerm, rank)
    }

    pub fn quat_herm(rank: usize) -> Result<Self> {
        Self::matrix(AlgebraKind::QuatHerm, rank)
    }

    /// Spin factor on R^{n+1}: rank 2, Peirce constant n - 1.
    pub fn lorentz(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "Lorentz algebra needs n >= 2, got {n}"
            )));
        }
        Ok(Self {
            kind: AlgebraKind::Lorentz,
            rank: 2,
            peirce: n - 1,
            dim: n + 1,
        })
    }

    pub fn matrix(kind: AlgebraKind, rank: usize) -> Result<Self> {
        let peirce = match kind {
            AlgebraKind::RealSym => 1,
            AlgebraKind::ComplexHerm => 2,
            AlgebraKind::QuatHerm => 4,
            AlgebraKind::Lorentz => {
                return Err(Error::InvalidInput(
                    "use AlgebraDescriptor::lorentz for the Lorentz algebra".into(),
                ))
            }
        };
        if rank == 0 {
            return Err(Error::InvalidInput("rank must be positive".into()));
        }
        Ok(Self {
            kind,
            rank,
            peirce,
            dim: rank + peirce * rank * (rank - 1) / 2,
        })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn peirce(&self) -> usize {
        self.peirce
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_matrix(&self) -> bool {
        self.kind.is_matrix()
    }

    /// `dim / r`, the exponent appearing in the Wishart density and the Jacobian of ψ⁻¹.
    pub fn dim_over_rank(&self) -> f64 {
        self.dim as f64 / self.rank as f64
    }

    /// Real components per matrix entry (1, 2 or 4); 1 for Lorentz.
    pub fn components(&self) -> usize {
        match self.kind {
            AlgebraKind::Lorentz => 1,
            _ => self.peirce,
        }
    }

    /// Length of the flat coordinate vector of an element.
    pub fn storage_len(&self) -> usize {
        match self.kind {
            AlgebraKind::Lorentz => self.dim,
            _ => self.peirce * self.rank * self.rank,
        }
    }

    /// Column labels for the CSV coordinate layout.
    pub fn coordinate_labels(&self) -> Vec<String> {
        const COMP: [&str; 4] = ["1", "i", "j", "k"];
        match self.kind {
            AlgebraKind::Lorentz => (0..self.dim).map(|i| format!("x{i}")).collect(),
            AlgebraKind::RealSym => {
                let r = self.rank;
                (0..r * r)
                    .map(|idx| format!("x_{}_{}", idx / r + 1, idx % r + 1))
                    .collect()
            }
            _ => {
                let r = self.rank;
                let d = self.peirce;
                (0..r * r * d)
                    .map(|idx| {
                        let entry = idx / d;
                        format!("x_{}_{}_{}", entry / r + 1, entry % r + 1, COMP[idx % d])
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AlgebraKind::Lorentz => write!(f, "lorentz(n={})", self.dim - 1),
            kind => write!(f, "{kind}(r={})", self.rank),
        }
    }
}
