//! Text formats: the scalar grammar and the JSON algebra and map files.
//!
//! Scalar grammar (no whitespace):
//!
//! ```text
//! scalar   := real | imag | real sign imag
//! real     := rational
//! imag     := rational "i" | "i" | "-i"
//! rational := ["-"] digits ["/" digits]
//! ```
//!
//! Files are serialized canonically: fixed field order, reduced scalars,
//! compact JSON and a single trailing newline.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    is_associative, Algebra, AlgebraError, AssociativityWitness, StructureTensor,
};
use crate::linalg::Matrix;
use crate::morphism::{LinearMap, MorphismError};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{kind} at offset {offset} in `{input}`")]
pub struct ScalarParseError {
    pub kind: ScalarErrorKind,
    pub offset: usize,
    pub input: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarErrorKind {
    Empty,
    ExpectedDigits,
    ZeroDenominator,
    UnexpectedCharacter,
    TrailingInput,
}

impl fmt::Display for ScalarErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarErrorKind::Empty => "empty scalar",
            ScalarErrorKind::ExpectedDigits => "expected digits",
            ScalarErrorKind::ZeroDenominator => "zero denominator",
            ScalarErrorKind::UnexpectedCharacter => "unexpected character",
            ScalarErrorKind::TrailingInput => "trailing input",
        })
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, kind: ScalarErrorKind, offset: usize) -> ScalarParseError {
        ScalarParseError {
            kind,
            offset,
            input: self.text.to_string(),
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.text[start..self.pos].parse().expect("ascii digits"))
    }

    /// `digits ["/" digits]`, unsigned.
    fn unsigned_rational(&mut self) -> Result<Option<BigRational>, ScalarParseError> {
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        if !self.eat(b'/') {
            return Ok(Some(BigRational::from_integer(num)));
        }
        let den_at = self.pos;
        let den = self
            .digits()
            .ok_or_else(|| self.error(ScalarErrorKind::ExpectedDigits, den_at))?;
        if den.is_zero() {
            return Err(self.error(ScalarErrorKind::ZeroDenominator, den_at));
        }
        Ok(Some(BigRational::new(num, den)))
    }

    /// An optionally signed term; returns the value and whether it carried `i`.
    fn term(&mut self) -> Result<(BigRational, bool), ScalarParseError> {
        let negative = self.eat(b'-');
        let at = self.pos;
        let magnitude = self.unsigned_rational()?;
        let imaginary = self.eat(b'i');
        let value = match (magnitude, imaginary) {
            (Some(q), _) => q,
            (None, true) => BigRational::from_integer(1.into()),
            (None, false) => {
                let kind = if self.peek().is_none() {
                    ScalarErrorKind::ExpectedDigits
                } else {
                    ScalarErrorKind::UnexpectedCharacter
                };
                return Err(self.error(kind, at));
            }
        };
        Ok((if negative { -value } else { value }, imaginary))
    }
}

/// Parses one scalar in the grammar above.
pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarParseError> {
    let mut cur = Cursor { text, pos: 0 };
    if text.is_empty() {
        return Err(cur.error(ScalarErrorKind::Empty, 0));
    }
    let (first, first_is_imag) = cur.term()?;
    if first_is_imag {
        if cur.peek().is_some() {
            return Err(cur.error(ScalarErrorKind::TrailingInput, cur.pos));
        }
        return Ok(Scalar::new(BigRational::zero(), first));
    }
    if cur.peek().is_none() {
        return Ok(Scalar::real(first));
    }
    let sign_at = cur.pos;
    let negative = if cur.eat(b'+') {
        false
    } else if cur.eat(b'-') {
        true
    } else {
        return Err(cur.error(ScalarErrorKind::UnexpectedCharacter, sign_at));
    };
    let imag_at = cur.pos;
    let (second, second_is_imag) = cur.term()?;
    if !second_is_imag {
        return Err(cur.error(ScalarErrorKind::UnexpectedCharacter, cur.pos.max(imag_at)));
    }
    if cur.peek().is_some() {
        return Err(cur.error(ScalarErrorKind::TrailingInput, cur.pos));
    }
    Ok(Scalar::new(first, if negative { -second } else { second }))
}

impl FromStr for Scalar {
    type Err = ScalarParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("bad scalar at {location}: {source}")]
    Scalar {
        location: String,
        #[source]
        source: ScalarParseError,
    },
    #[error("algebra name mismatch: map names `{in_file}` but the {role} is `{given}`")]
    NameMismatch {
        role: &'static str,
        in_file: String,
        given: String,
    },
    #[error("table is not associative at {0}")]
    NonAssociative(Box<AssociativityWitness>),
    #[error(transparent)]
    Algebra(AlgebraError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

impl FileError {
    /// Stable code per failure class.
    pub fn code(&self) -> &'static str {
        match self {
            FileError::Io { .. } => "E_IO",
            FileError::Json(_) => "E_JSON",
            FileError::Dimension(_) => "E_DIMENSION",
            FileError::Scalar { .. } => "E_SCALAR",
            FileError::NameMismatch { .. } => "E_NAME",
            FileError::NonAssociative(_) => "E_NONASSOCIATIVE",
            FileError::Algebra(_) => "E_ALGEBRA",
            FileError::Morphism(_) => "E_MAP",
        }
    }
}

/// On-disk algebra: `table[i][j]` is the coefficient vector of `e_i e_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub table: Vec<Vec<Vec<String>>>,
}

/// On-disk linear map: `matrix[r][c]`, rows indexed by the codomain basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub domain: String,
    pub codomain: String,
    pub matrix: Vec<Vec<String>>,
}

impl AlgebraFile {
    pub fn from_algebra(a: &Algebra) -> Self {
        let n = a.dim();
        AlgebraFile {
            name: a.name().to_string(),
            dim: n,
            basis: a.labels().to_vec(),
            table: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            a.basis_product(i, j)
                                .iter()
                                .map(Scalar::to_string)
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Builds the algebra; associativity is checked unless `unchecked`.
    pub fn to_algebra(&self, unchecked: bool) -> Result<Algebra, FileError> {
        let n = self.dim;
        if self.basis.len() != n {
            return Err(FileError::Dimension(format!(
                "dim is {n} but basis has {} labels",
                self.basis.len()
            )));
        }
        if self.table.len() != n {
            return Err(FileError::Dimension(format!(
                "dim is {n} but table has {} rows",
                self.table.len()
            )));
        }
        let mut t = StructureTensor::zeros(n);
        for (i, row) in self.table.iter().enumerate() {
            if row.len() != n {
                return Err(FileError::Dimension(format!(
                    "table row {i} has {} entries",
                    row.len()
                )));
            }
            for (j, entry) in row.iter().enumerate() {
                if entry.len() != n {
                    return Err(FileError::Dimension(format!(
                        "table[{i}][{j}] has {} coefficients",
                        entry.len()
                    )));
                }
                for (k, text) in entry.iter().enumerate() {
                    let value = parse_scalar(text).map_err(|source| FileError::Scalar {
                        location: format!("table[{i}][{j}][{k}]"),
                        source,
                    })?;
                    t.set(i, j, k, value);
                }
            }
        }
        let algebra = Algebra::new_unchecked(self.name.clone(), self.basis.clone(), t)
            .map_err(FileError::Algebra)?;
        if !unchecked {
            if let Some(w) = is_associative(&algebra).witness {
                return Err(FileError::NonAssociative(Box::new(w)));
            }
        }
        Ok(algebra)
    }
}

impl MapFile {
    pub fn from_map(m: &LinearMap) -> Self {
        MapFile {
            domain: m.domain().name().to_string(),
            codomain: m.codomain().name().to_string(),
            matrix: m
                .matrix()
                .to_rows()
                .into_iter()
                .map(|r| r.iter().map(Scalar::to_string).collect())
                .collect(),
        }
    }

    /// Builds the map between the given algebras, whose names must match the file.
    pub fn to_map(
        &self,
        domain: &Arc<Algebra>,
        codomain: &Arc<Algebra>,
    ) -> Result<LinearMap, FileError> {
        for (role, in_file, given) in [
            ("domain", &self.domain, domain.name()),
            ("codomain", &self.codomain, codomain.name()),
        ] {
            if in_file != given {
                return Err(FileError::NameMismatch {
                    role,
                    in_file: in_file.clone(),
                    given: given.to_string(),
                });
            }
        }
        if self.matrix.len() != codomain.dim()
            || self.matrix.iter().any(|r| r.len() != domain.dim())
        {
            return Err(FileError::Dimension(format!(
                "map matrix must be {}x{}",
                codomain.dim(),
                domain.dim()
            )));
        }
        let rows = self
            .matrix
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, text)| {
                        parse_scalar(text).map_err(|source| FileError::Scalar {
                            location: format!("matrix[{r}][{c}]"),
                            source,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LinearMap::new(domain, codomain, Matrix::from_rows(rows))?)
    }
}

fn to_canonical<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn serialize_algebra(a: &Algebra) -> String {
    to_canonical(&AlgebraFile::from_algebra(a))
}

pub fn serialize_map(m: &LinearMap) -> String {
    to_canonical(&MapFile::from_map(m))
}

pub fn parse_algebra_str(text: &str, unchecked: bool) -> Result<Algebra, FileError> {
    let file: AlgebraFile =
        serde_json::from_str(text).map_err(|e| FileError::Json(e.to_string()))?;
    file.to_algebra(unchecked)
}

fn read(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|e| FileError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn parse_algebra_file(path: &Path, unchecked: bool) -> Result<Algebra, FileError> {
    parse_algebra_str(&read(path)?, unchecked)
}

pub fn parse_map_str(
    text: &str,
    domain: &Arc<Algebra>,
    codomain: &Arc<Algebra>,
) -> Result<LinearMap, FileError> {
    let file: MapFile = serde_json::from_str(text).map_err(|e| FileError::Json(e.to_string()))?;
    file.to_map(domain, codomain)
}

pub fn parse_map_file(
    path: &Path,
    domain: &Arc<Algebra>,
    codomain: &Arc<Algebra>,
) -> Result<LinearMap, FileError> {
    parse_map_str(&read(path)?, domain, codomain)
}
