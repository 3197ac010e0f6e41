use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{sample_haar_basis, sample_unit_vec, ComplexVec};

const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodebookKind {
    /// Union of `bases` orthonormal bases; flat index `m * dim + n` is
    /// vector `n` of basis `m`.
    MultiBasis { bases: usize },
    /// Unstructured unit vectors.
    Rvq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    kind: CodebookKind,
    dim: usize,
    vectors: Vec<ComplexVec>,
}

impl Codebook {
    /// Codebook from explicit bases. Each basis must hold `dim` mutually
    /// orthonormal vectors.
    pub fn multi_basis(bases: Vec<Vec<ComplexVec>>) -> Result<Self> {
        let dim = match bases.first().and_then(|b| b.first()) {
            Some(v) => v.dim(),
            None => return Err(Error::domain("codebook", "no bases")),
        };
        let count = bases.len();
        let mut vectors = Vec::with_capacity(count * dim);
        for (m, basis) in bases.into_iter().enumerate() {
            if basis.len() != dim {
                return Err(Error::domain(
                    "codebook",
                    format!("basis {m} has {} vectors, expected {dim}", basis.len()),
                ));
            }
            for (i, a) in basis.iter().enumerate() {
                if a.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        left: a.dim(),
                        right: dim,
                    });
                }
                for (j, b) in basis.iter().enumerate().take(i + 1) {
                    let g = a.dot_unchecked(b);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    if (g - Complex64::new(expect, 0.0)).norm() > ORTHONORMAL_TOL {
                        return Err(Error::domain(
                            "codebook",
                            format!("basis {m} is not orthonormal at ({i}, {j})"),
                        ));
                    }
                }
            }
            vectors.extend(basis);
        }
        Ok(Codebook {
            kind: CodebookKind::MultiBasis { bases: count },
            dim,
            vectors,
        })
    }

    /// `bases` independent Haar-random bases of `C^dim`.
    pub fn random_multi_basis<R: Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        bases: usize,
    ) -> Result<Self> {
        if bases == 0 {
            return Err(Error::domain("codebook", "basis count must be positive"));
        }
        let mut vectors = Vec::with_capacity(bases * dim);
        for _ in 0..bases {
            vectors.extend(sample_haar_basis(rng, dim)?);
        }
        Ok(Codebook {
            kind: CodebookKind::MultiBasis { bases },
            dim,
            vectors,
        })
    }

    pub fn rvq(vectors: Vec<ComplexVec>) -> Result<Self> {
        let dim = match vectors.first() {
            Some(v) => v.dim(),
            None => return Err(Error::domain("codebook", "empty RVQ codebook")),
        };
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: v.dim(),
                    right: dim,
                });
            }
            if (v.norm() - 1.0).abs() > ORTHONORMAL_TOL {
                return Err(Error::domain("codebook", "RVQ codeword is not unit norm"));
            }
        }
        Ok(Codebook {
            kind: CodebookKind::Rvq,
            dim,
            vectors,
        })
    }

    /// `size` i.i.d. isotropic unit vectors.
    pub fn random_rvq<R: Rng + ?Sized>(rng: &mut R, dim: usize, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::domain("codebook", "empty RVQ codebook"));
        }
        let vectors = (0..size)
            .map(|_| sample_unit_vec(rng, dim))
            .collect::<Result<Vec<_>>>()?;
        Ok(Codebook {
            kind: CodebookKind::Rvq,
            dim,
            vectors,
        })
    }

    pub fn kind(&self) -> CodebookKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[ComplexVec] {
        &self.vectors
    }

    pub fn codeword(&self, index: usize) -> Option<&ComplexVec> {
        self.vectors.get(index)
    }

    /// Number of orthonormal bases (1 for an RVQ codebook, which is
    /// treated as a single group).
    pub fn basis_count(&self) -> usize {
        match self.kind {
            CodebookKind::MultiBasis { bases } => bases,
            CodebookKind::Rvq => 1,
        }
    }

    /// `(basis, beam)` of a flat index in a multi-basis codebook.
    pub fn split_index(&self, flat: usize) -> (usize, usize) {
        (flat / self.dim, flat % self.dim)
    }

    pub fn flat_index(&self, basis: usize, beam: usize) -> usize {
        basis * self.dim + beam
    }

    /// Vectors of basis `m`.
    pub fn basis(&self, m: usize) -> &[ComplexVec] {
        &self.vectors[m * self.dim..(m + 1) * self.dim]
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CodebookDoc::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CodebookDoc = serde_json::from_str(text)?;
        doc.try_into()
    }
}

/// On-disk form: vectors as `[re, im]` pairs, grouped by basis (RVQ
/// codebooks are a single group).
#[derive(Debug, Serialize, Deserialize)]
struct CodebookDoc {
    kind: DocKind,
    dim: usize,
    groups: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum DocKind {
    MultiBasis,
    Rvq,
}

impl From<&Codebook> for CodebookDoc {
    fn from(cb: &Codebook) -> Self {
        let to_pairs = |v: &ComplexVec| v.entries().iter().map(|z| [z.re, z.im]).collect();
        let (kind, groups) = match cb.kind {
            CodebookKind::MultiBasis { bases } => (
                DocKind::MultiBasis,
                (0..bases)
                    .map(|m| cb.basis(m).iter().map(to_pairs).collect())
                    .collect(),
            ),
            CodebookKind::Rvq => (
                DocKind::Rvq,
                vec![cb.vectors.iter().map(to_pairs).collect()],
            ),
        };
        CodebookDoc {
            kind,
            dim: cb.dim,
            groups,
        }
    }
}

impl TryFrom<CodebookDoc> for Codebook {
    type Error = Error;

    fn try_from(doc: CodebookDoc) -> Result<Self> {
        let to_vec = |pairs: Vec<[f64; 2]>| {
            ComplexVec::new(
                pairs
                    .into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect(),
            )
        };
        let groups = doc
            .groups
            .into_iter()
            .map(|g| g.into_iter().map(to_vec).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let cb = match doc.kind {
            DocKind::MultiBasis => Codebook::multi_basis(groups)?,
            DocKind::Rvq => Codebook::rvq(groups.into_iter().flatten().collect())?,
        };
        if cb.dim != doc.dim {
            return Err(Error::DimensionMismatch {
                left: cb.dim,
                right: doc.dim,
            });
        }
        Ok(cb)
    }
}
