//! Linear maps between algebras and the verdicts built on them:
//! homomorphism, character, isomorphism, and subspace closure checks.
//!
//! Continuity is automatic in finite dimension; reports say so explicitly
//! instead of omitting the clause.

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::algebra::{check_same, Algebra, AlgebraError, Combination, Element, StructureTensor};
use crate::linalg::{Echelon, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("map matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("character codomain must be C (got `{0}`)")]
    CharacterCodomain(String),
    #[error("subspace is not closed under multiplication: {0}")]
    NotSubalgebra(Box<ProductWitness>),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A linear map; column `j` of the matrix is the image of domain basis vector `j`.
#[derive(Clone, Debug)]
pub struct LinearMap {
    domain: Arc<Algebra>,
    codomain: Arc<Algebra>,
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(
        domain: &Arc<Algebra>,
        codomain: &Arc<Algebra>,
        matrix: Matrix,
    ) -> Result<Self, MorphismError> {
        if matrix.rows() != codomain.dim() || matrix.cols() != domain.dim() {
            return Err(MorphismError::Shape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                expected_rows: codomain.dim(),
                expected_cols: domain.dim(),
            });
        }
        Ok(LinearMap {
            domain: Arc::clone(domain),
            codomain: Arc::clone(codomain),
            matrix,
        })
    }

    /// Builds the map from the images of the domain basis vectors.
    pub fn from_images(
        domain: &Arc<Algebra>,
        codomain: &Arc<Algebra>,
        images: &[Vec<Scalar>],
    ) -> Result<Self, MorphismError> {
        if images.len() != domain.dim() || images.iter().any(|c| c.len() != codomain.dim()) {
            return Err(MorphismError::Shape {
                rows: images.first().map_or(0, Vec::len),
                cols: images.len(),
                expected_rows: codomain.dim(),
                expected_cols: domain.dim(),
            });
        }
        LinearMap::new(
            domain,
            codomain,
            Matrix::from_columns(codomain.dim(), images),
        )
    }

    pub fn identity(algebra: &Arc<Algebra>) -> Self {
        LinearMap {
            domain: Arc::clone(algebra),
            codomain: Arc::clone(algebra),
            matrix: Matrix::identity(algebra.dim()),
        }
    }

    pub fn zero(domain: &Arc<Algebra>, codomain: &Arc<Algebra>) -> Self {
        LinearMap {
            domain: Arc::clone(domain),
            codomain: Arc::clone(codomain),
            matrix: Matrix::zeros(codomain.dim(), domain.dim()),
        }
    }

    pub fn domain(&self) -> &Arc<Algebra> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Algebra> {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn image_of_basis(&self, j: usize) -> Vec<Scalar> {
        self.matrix.column(j)
    }

    pub fn apply_coeffs(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(x)
    }

    pub fn apply(&self, x: &Element) -> Result<Element, MorphismError> {
        check_same(&self.domain, x.algebra())?;
        Ok(Element::new(&self.codomain, self.apply_coeffs(x.coeffs()))?)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LinearMap) -> Result<LinearMap, MorphismError> {
        check_same(&self.codomain, &next.domain)?;
        Ok(LinearMap {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&next.codomain),
            matrix: next.matrix.mul(&self.matrix),
        })
    }

    pub fn determinant(&self) -> Option<Scalar> {
        self.matrix.determinant()
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        let inv = self.matrix.inverse()?;
        Some(LinearMap {
            domain: Arc::clone(&self.codomain),
            codomain: Arc::clone(&self.domain),
            matrix: inv,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// The image as a subspace of the codomain.
    pub fn image(&self) -> Subspace {
        let cols = (0..self.domain.dim())
            .map(|j| self.matrix.column(j))
            .collect();
        Subspace::from_coeffs(&self.codomain, cols).expect("columns have codomain length")
    }
}

/// A basis pair on which a map fails to be multiplicative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomWitness {
    pub pair: (usize, usize),
    pub labels: (String, String),
    /// `T(e_i e_j)`
    pub image_of_product: Vec<Scalar>,
    /// `T(e_i) T(e_j)`
    pub product_of_images: Vec<Scalar>,
    codomain_labels: Vec<String>,
}

impl fmt::Display for HomWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = &self.labels;
        write!(
            f,
            "({a}, {b}): T({a}{b}) = {} but T({a})T({b}) = {}",
            Combination(&self.codomain_labels, &self.image_of_product),
            Combination(&self.codomain_labels, &self.product_of_images)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomReport {
    pub pairs_checked: usize,
    pub witness: Option<HomWitness>,
    /// Always true: every linear map between finite-dimensional spaces is bounded.
    pub continuity_automatic: bool,
}

impl HomReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for HomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "homomorphism: pass ({} basis pairs)", self.pairs_checked)?,
            Some(w) => write!(f, "homomorphism: FAIL at {w}")?,
        }
        write!(f, "; continuity automatic (finite dimension)")
    }
}

/// Checks `T(e_i e_j) = T(e_i) T(e_j)` for every domain basis pair.
pub fn is_homomorphism(map: &LinearMap) -> HomReport {
    let dom = map.domain();
    let cod = map.codomain();
    let n = dom.dim();
    let images: Vec<Vec<Scalar>> = (0..n).map(|j| map.image_of_basis(j)).collect();
    let mut checked = 0;
    for i in 0..n {
        for j in 0..n {
            checked += 1;
            let lhs = map.apply_coeffs(dom.basis_product(i, j));
            let rhs = cod.mul_coeffs(&images[i], &images[j]);
            if lhs != rhs {
                return HomReport {
                    pairs_checked: checked,
                    witness: Some(HomWitness {
                        pair: (i, j),
                        labels: (dom.labels()[i].clone(), dom.labels()[j].clone()),
                        image_of_product: lhs,
                        product_of_images: rhs,
                        codomain_labels: cod.labels().to_vec(),
                    }),
                    continuity_automatic: true,
                };
            }
        }
    }
    HomReport {
        pairs_checked: checked,
        witness: None,
        continuity_automatic: true,
    }
}

/// Elementwise multiplicativity: `f(x y) = f(x) f(y)`.
pub fn preserves_product(map: &LinearMap, x: &Element, y: &Element) -> Result<bool, MorphismError> {
    let xy = crate::algebra::multiply(x, y)?;
    let lhs = map.apply(&xy)?;
    let rhs = crate::algebra::multiply(&map.apply(x)?, &map.apply(y)?)?;
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharFailure {
    Zero,
    NotMultiplicative(HomWitness),
}

impl fmt::Display for CharFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharFailure::Zero => write!(
                f,
                "the zero functional is not a character (characters are non-zero)"
            ),
            CharFailure::NotMultiplicative(w) => write!(f, "not multiplicative at {w}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharReport {
    pub failure: Option<CharFailure>,
}

impl CharReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// A character is a nonzero multiplicative functional into `C`.
pub fn is_character(chi: &LinearMap) -> Result<CharReport, MorphismError> {
    if !chi.codomain().is_complex_field() {
        return Err(MorphismError::CharacterCodomain(
            chi.codomain().name().to_string(),
        ));
    }
    if chi.is_zero() {
        return Ok(CharReport {
            failure: Some(CharFailure::Zero),
        });
    }
    let hom = is_homomorphism(chi);
    Ok(CharReport {
        failure: hom.witness.map(CharFailure::NotMultiplicative),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoFailure {
    NotSquare { rows: usize, cols: usize },
    Singular { rank: usize },
    NotMultiplicative(HomWitness),
}

impl fmt::Display for IsoFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoFailure::NotSquare { rows, cols } => {
                write!(f, "not bijective: matrix is {rows}x{cols}")
            }
            IsoFailure::Singular { rank } => write!(f, "not bijective: rank {rank}"),
            IsoFailure::NotMultiplicative(w) => write!(f, "not multiplicative: {w}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    pub rank: usize,
    /// `None` when the matrix is not square.
    pub determinant: Option<Scalar>,
    pub homomorphism: HomReport,
    pub failure: Option<IsoFailure>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for IsoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.determinant {
            Some(d) => write!(f, "rank {}, determinant {d}; ", self.rank)?,
            None => write!(f, "rank {}, non-square; ", self.rank)?,
        }
        match &self.failure {
            None => write!(f, "isomorphism: pass; {}", self.homomorphism),
            Some(e) => write!(f, "isomorphism: FAIL ({e})"),
        }
    }
}

/// Bijective (square with full rank) and multiplicative on basis pairs.
pub fn verify_isomorphism(map: &LinearMap) -> IsoReport {
    let m = map.matrix();
    let rank = m.rank();
    let determinant = m.determinant();
    let homomorphism = is_homomorphism(map);
    let failure = if !m.is_square() {
        Some(IsoFailure::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    } else if rank < m.rows() {
        Some(IsoFailure::Singular { rank })
    } else {
        homomorphism
            .witness
            .clone()
            .map(IsoFailure::NotMultiplicative)
    };
    IsoReport {
        rank,
        determinant,
        homomorphism,
        failure,
    }
}

/// The span of a list of vectors in an ambient algebra.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: Arc<Algebra>,
    spanning: Vec<Vec<Scalar>>,
    reduced: OnceLock<Echelon>,
}

impl Subspace {
    pub fn new(ambient: &Arc<Algebra>, spanning: &[Element]) -> Result<Self, MorphismError> {
        for v in spanning {
            check_same(ambient, v.algebra())?;
        }
        Ok(Subspace {
            ambient: Arc::clone(ambient),
            spanning: spanning.iter().map(|v| v.coeffs().to_vec()).collect(),
            reduced: OnceLock::new(),
        })
    }

    pub fn from_coeffs(
        ambient: &Arc<Algebra>,
        spanning: Vec<Vec<Scalar>>,
    ) -> Result<Self, MorphismError> {
        if let Some(v) = spanning.iter().find(|v| v.len() != ambient.dim()) {
            return Err(AlgebraError::CoefficientCount {
                expected: ambient.dim(),
                got: v.len(),
            }
            .into());
        }
        Ok(Subspace {
            ambient: Arc::clone(ambient),
            spanning,
            reduced: OnceLock::new(),
        })
    }

    pub fn ambient(&self) -> &Arc<Algebra> {
        &self.ambient
    }

    pub fn spanning(&self) -> &[Vec<Scalar>] {
        &self.spanning
    }

    /// Reduced row echelon basis, computed once.
    pub fn reduced(&self) -> &Echelon {
        self.reduced
            .get_or_init(|| Echelon::of_vectors(self.ambient.dim(), &self.spanning))
    }

    pub fn rank(&self) -> usize {
        self.reduced().rank()
    }

    pub fn codimension(&self) -> usize {
        self.ambient.dim() - self.rank()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduced().contains(v)
    }

    fn product_outside(&self, left: &[Scalar], right: &[Scalar]) -> Option<ProductWitness> {
        let product = self.ambient.mul_coeffs(left, right);
        if self.contains(&product) {
            None
        } else {
            Some(ProductWitness {
                left: left.to_vec(),
                right: right.to_vec(),
                product,
                labels: self.ambient.labels().to_vec(),
            })
        }
    }

    fn subalgebra_witness(&self) -> Option<ProductWitness> {
        let basis = self.reduced().basis();
        basis
            .iter()
            .flat_map(|a| basis.iter().map(move |b| (a, b)))
            .find_map(|(a, b)| self.product_outside(a, b))
    }

    /// The subspace as an algebra in its reduced basis, with its inclusion
    /// into the ambient algebra. Fails if the subspace is not closed under
    /// multiplication or is zero.
    pub fn to_algebra(&self, name: &str) -> Result<(Arc<Algebra>, LinearMap), MorphismError> {
        if let Some(w) = self.subalgebra_witness() {
            return Err(MorphismError::NotSubalgebra(Box::new(w)));
        }
        let reduced = self.reduced();
        let basis = reduced.basis();
        let r = basis.len();
        let mut t = StructureTensor::zeros(r);
        for (a, va) in basis.iter().enumerate() {
            for (b, vb) in basis.iter().enumerate() {
                let coords = reduced
                    .coordinates(&self.ambient.mul_coeffs(va, vb))
                    .expect("closed under multiplication");
                for (c, x) in coords.into_iter().enumerate() {
                    t.set(a, b, c, x);
                }
            }
        }
        let labels = basis
            .iter()
            .map(|v| Combination(self.ambient.labels(), v).to_string())
            .collect();
        let sub = Arc::new(Algebra::new(name, labels, t)?);
        let inclusion = LinearMap::from_images(&sub, &self.ambient, basis)?;
        Ok((sub, inclusion))
    }
}

/// A product `left * right` that leaves the subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductWitness {
    pub left: Vec<Scalar>,
    pub right: Vec<Scalar>,
    pub product: Vec<Scalar>,
    labels: Vec<String>,
}

impl fmt::Display for ProductWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) * ({}) = {} is not in the span",
            Combination(&self.labels, &self.left),
            Combination(&self.labels, &self.right),
            Combination(&self.labels, &self.product)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceReport {
    pub rank: usize,
    pub codimension: usize,
    pub is_subalgebra: bool,
    pub subalgebra_witness: Option<ProductWitness>,
    /// `ambient * S ⊆ S`
    pub is_left_ideal: bool,
    pub left_ideal_witness: Option<ProductWitness>,
    /// `S * ambient ⊆ S`
    pub is_right_ideal: bool,
    pub right_ideal_witness: Option<ProductWitness>,
}

impl SubspaceReport {
    /// Two-sided ideal.
    pub fn is_ideal(&self) -> bool {
        self.is_left_ideal && self.is_right_ideal
    }

    pub fn ideal_witness(&self) -> Option<&ProductWitness> {
        self.left_ideal_witness
            .as_ref()
            .or(self.right_ideal_witness.as_ref())
    }
}

impl fmt::Display for SubspaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank: {}", self.rank)?;
        writeln!(f, "codimension: {}", self.codimension)?;
        match &self.subalgebra_witness {
            None => writeln!(f, "subalgebra: true")?,
            Some(w) => writeln!(f, "subalgebra: false, {w}")?,
        }
        match &self.left_ideal_witness {
            None => writeln!(f, "left ideal: true")?,
            Some(w) => writeln!(f, "left ideal: false, {w}")?,
        }
        match &self.right_ideal_witness {
            None => writeln!(f, "right ideal: true")?,
            Some(w) => writeln!(f, "right ideal: false, {w}")?,
        }
        write!(f, "ideal: {}", self.is_ideal())
    }
}

/// Rank, codimension, and closure of a subspace under the algebra product.
pub fn subspace_report(s: &Subspace) -> SubspaceReport {
    let ambient = s.ambient();
    let n = ambient.dim();
    let basis = s.reduced().basis();
    let subalgebra_witness = s.subalgebra_witness();
    let unit = |i: usize| {
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::one();
        v
    };
    let left_ideal_witness = (0..n)
        .flat_map(|i| basis.iter().map(move |v| (i, v)))
        .find_map(|(i, v)| s.product_outside(&unit(i), v));
    let right_ideal_witness = basis
        .iter()
        .flat_map(|v| (0..n).map(move |i| (v, i)))
        .find_map(|(v, i)| s.product_outside(v, &unit(i)));
    let report = SubspaceReport {
        rank: s.rank(),
        codimension: s.codimension(),
        is_subalgebra: subalgebra_witness.is_none(),
        subalgebra_witness,
        is_left_ideal: left_ideal_witness.is_none(),
        left_ideal_witness,
        is_right_ideal: right_ideal_witness.is_none(),
        right_ideal_witness,
    };
    // a one-sided ideal is already closed under multiplication
    assert!(
        !(report.is_left_ideal || report.is_right_ideal) || report.is_subalgebra,
        "ideal verdict without subalgebra verdict"
    );
    report
}
