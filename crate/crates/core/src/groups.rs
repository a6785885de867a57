//! Finitely generated free abelian groups with a chosen embedding into the
//! scalar field, plus the GL_r(ℤ) automorphism action.

use thiserror::Error;

use crate::exactmath::{ExactMatrix, FieldConfig, Scalar};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("generator images are linearly dependent over ℚ")]
    DependentGenerators,
    #[error("rank {rank} not supported over {field:?}")]
    RankUnsupported { rank: usize, field: FieldConfig },
    #[error("matrix determinant must be ±1")]
    NotUnimodular,
}

/// An element of ℤ^r in generator coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupElement(pub Vec<i64>);

impl GroupElement {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn zero(rank: usize) -> GroupElement {
        GroupElement(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, rhs: &GroupElement) -> GroupElement {
        assert_eq!(self.rank(), rhs.rank());
        GroupElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement(self.0.iter().map(|a| -a).collect())
    }
}

/// A free abelian group of rank r embedded into the field by the images of
/// its generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupSpec {
    rank: usize,
    field: FieldConfig,
    generator_images: Vec<Scalar>,
}

impl GroupSpec {
    pub fn new(generator_images: Vec<Scalar>, field: FieldConfig) -> Result<GroupSpec, GroupError> {
        let rank = generator_images.len();
        let max_rank = match field {
            FieldConfig::Rational => 1,
            FieldConfig::Quadratic { .. } => 2,
        };
        if rank > max_rank {
            return Err(GroupError::RankUnsupported { rank, field });
        }
        // independence over ℚ: images as 2-vectors in basis {1, √d}
        let m = ExactMatrix::from_rows(
            generator_images
                .iter()
                .map(|s| {
                    vec![
                        Scalar::new(
                            s.rational_part().clone(),
                            num::rational::BigRational::from_integer(0.into()),
                            FieldConfig::Rational,
                        ),
                        Scalar::new(
                            s.sqrt_part().clone(),
                            num::rational::BigRational::from_integer(0.into()),
                            FieldConfig::Rational,
                        ),
                    ]
                })
                .collect(),
            FieldConfig::Rational,
        );
        if rank > 0 && m.rank() < rank {
            return Err(GroupError::DependentGenerators);
        }
        Ok(GroupSpec { rank, field, generator_images })
    }

    /// ℤ embedded as itself.
    pub fn integers(field: FieldConfig) -> GroupSpec {
        GroupSpec::new(vec![Scalar::one(field)], field).unwrap()
    }

    /// ℤ + ℤ√d inside ℚ(√d).
    pub fn integers_with_sqrt(field: FieldConfig) -> Result<GroupSpec, GroupError> {
        GroupSpec::new(vec![Scalar::one(field), Scalar::sqrt_d(field)], field)
    }

    /// The trivial group Δ = {0}.
    pub fn trivial(field: FieldConfig) -> GroupSpec {
        GroupSpec { rank: 0, field, generator_images: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn generator_images(&self) -> &[Scalar] {
        &self.generator_images
    }

    pub fn embed(&self, g: &GroupElement) -> Result<Scalar, GroupError> {
        if g.rank() != self.rank {
            return Err(GroupError::RankMismatch { expected: self.rank, got: g.rank() });
        }
        let mut acc = Scalar::zero(self.field);
        for (c, img) in g.0.iter().zip(&self.generator_images) {
            if *c != 0 {
                acc += Scalar::from_int(*c, self.field) * img;
            }
        }
        Ok(acc)
    }
}

/// σ ∈ Aut(ℤ^r) = GL_r(ℤ), stored as an integer matrix with det ±1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AutMatrix {
    rank: usize,
    entries: Vec<Vec<i64>>,
}

impl AutMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<AutMatrix, GroupError> {
        let rank = entries.len();
        for row in &entries {
            if row.len() != rank {
                return Err(GroupError::RankMismatch { expected: rank, got: row.len() });
            }
        }
        let m = AutMatrix { rank, entries };
        match m.det() {
            1 | -1 => Ok(m),
            _ => Err(GroupError::NotUnimodular),
        }
    }

    pub fn identity(rank: usize) -> AutMatrix {
        let entries = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        AutMatrix { rank, entries }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    fn det(&self) -> i64 {
        match self.rank {
            0 => 1,
            1 => self.entries[0][0],
            2 => {
                self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
            }
            _ => {
                // cofactor expansion; ranks here are tiny
                let mut det = 0i64;
                for j in 0..self.rank {
                    let minor: Vec<Vec<i64>> = self.entries[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|(k, _)| *k != j)
                                .map(|(_, v)| *v)
                                .collect()
                        })
                        .collect();
                    let m = AutMatrix { rank: self.rank - 1, entries: minor };
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    det += sign * self.entries[0][j] * m.det();
                }
                det
            }
        }
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        if g.rank() != self.rank {
            return Err(GroupError::RankMismatch { expected: self.rank, got: g.rank() });
        }
        Ok(GroupElement(
            self.entries
                .iter()
                .map(|row| row.iter().zip(&g.0).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    /// Exact integer inverse (exists since det = ±1).
    pub fn inverse(&self) -> AutMatrix {
        let d = self.det();
        match self.rank {
            0 => AutMatrix::identity(0),
            1 => AutMatrix { rank: 1, entries: vec![vec![self.entries[0][0] * d * d / d]] },
            2 => {
                let [[a, b], [c, e]] = [
                    [self.entries[0][0], self.entries[0][1]],
                    [self.entries[1][0], self.entries[1][1]],
                ];
                AutMatrix {
                    rank: 2,
                    entries: vec![vec![e * d, -b * d], vec![-c * d, a * d]],
                }
            }
            _ => unreachable!("ranks above 2 are rejected by GroupSpec"),
        }
    }

    pub fn compose(&self, rhs: &AutMatrix) -> AutMatrix {
        assert_eq!(self.rank, rhs.rank);
        let entries = (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| (0..self.rank).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum())
                    .collect()
            })
            .collect();
        AutMatrix { rank: self.rank, entries }
    }
}
