//! Structure-constant algebras and their elements.
//!
//! An [`Algebra`] of dimension `n` is given by a basis `e_1..e_n` and a
//! structure tensor `c[i][j][k]`, the coefficient of `e_k` in `e_i * e_j`.
//! The left factor indexes the first axis.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("algebra mismatch: `{left}` vs `{right}`")]
    AlgebraMismatch { left: String, right: String },
    #[error("an algebra must have positive dimension")]
    ZeroDimension,
    #[error("expected {expected} basis labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("structure tensor has {got} entries, expected {expected}")]
    TensorShape { expected: usize, got: usize },
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("not associative: {0}")]
    NotAssociative(Box<AssociativityWitness>),
}

/// Dense `n x n x n` structure constants.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureTensor {
    dim: usize,
    data: Vec<Scalar>,
}

impl StructureTensor {
    pub fn zeros(dim: usize) -> Self {
        StructureTensor {
            dim,
            data: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    pub fn from_flat(dim: usize, data: Vec<Scalar>) -> Result<Self, AlgebraError> {
        let expected = dim * dim * dim;
        if data.len() != expected {
            return Err(AlgebraError::TensorShape {
                expected,
                got: data.len(),
            });
        }
        Ok(StructureTensor { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        let idx = self.index(i, j, k);
        self.data[idx] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, k: usize, value: &Scalar) {
        let idx = self.index(i, j, k);
        self.data[idx] += value;
    }

    /// The coefficient vector of `e_i * e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[Scalar] {
        let start = self.index(i, j, 0);
        &self.data[start..start + self.dim]
    }

    pub fn as_flat(&self) -> &[Scalar] {
        &self.data
    }
}

#[derive(Clone)]
pub struct Algebra {
    name: String,
    labels: Vec<String>,
    tensor: StructureTensor,
    // sparse view of the tensor: nonzero (k, c[i][j][k]) for each i * dim + j
    sparse: Vec<Vec<(usize, Scalar)>>,
}

impl Algebra {
    /// Checked constructor: the tensor must be associative.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        tensor: StructureTensor,
    ) -> Result<Self, AlgebraError> {
        let algebra = Algebra::new_unchecked(name, labels, tensor)?;
        if let Some(w) = is_associative(&algebra).witness {
            return Err(AlgebraError::NotAssociative(Box::new(w)));
        }
        Ok(algebra)
    }

    /// Validates shapes and labels but not associativity.
    pub fn new_unchecked(
        name: impl Into<String>,
        labels: Vec<String>,
        tensor: StructureTensor,
    ) -> Result<Self, AlgebraError> {
        let dim = tensor.dim();
        if dim == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        if labels.len() != dim {
            return Err(AlgebraError::LabelCount {
                expected: dim,
                got: labels.len(),
            });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(AlgebraError::DuplicateLabel(l.clone()));
            }
        }
        let sparse = (0..dim * dim)
            .map(|ij| {
                tensor
                    .product(ij / dim, ij % dim)
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect()
            })
            .collect();
        Ok(Algebra {
            name: name.into(),
            labels,
            tensor,
            sparse,
        })
    }

    /// The one-dimensional unital algebra `C`, basis `{1}`.
    pub fn complex_field() -> Self {
        let mut t = StructureTensor::zeros(1);
        t.set(0, 0, 0, Scalar::one());
        Algebra::new_unchecked("C", vec!["1".into()], t).expect("valid shape")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn tensor(&self) -> &StructureTensor {
        &self.tensor
    }

    /// True when this is the one-dimensional algebra with `e * e = e`.
    pub fn is_complex_field(&self) -> bool {
        self.dim() == 1 && self.tensor.get(0, 0, 0).is_one()
    }

    /// Coefficients of `e_i * e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Scalar] {
        self.tensor.product(i, j)
    }

    /// Product of two coefficient vectors through the structure tensor.
    pub fn mul_coeffs(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        debug_assert!(x.len() == n && y.len() == n);
        let mut out = vec![Scalar::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let terms = &self.sparse[i * n + j];
                if terms.is_empty() {
                    continue;
                }
                let xy = xi * yj;
                for (k, c) in terms {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    /// `sum_l v_l (e_l * e_k)` or `sum_l v_l (e_k * e_l)` depending on side.
    fn mul_basis_coeffs(&self, v: &[Scalar], k: usize, v_on_left: bool) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (l, vl) in v.iter().enumerate() {
            if vl.is_zero() {
                continue;
            }
            let idx = if v_on_left { l * n + k } else { k * n + l };
            for (m, c) in &self.sparse[idx] {
                out[*m] += &(vl * c);
            }
        }
        out
    }

    pub fn commutativity_witness(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.basis_product(i, j) != self.basis_product(j, i))
    }

    pub fn is_commutative(&self) -> bool {
        self.commutativity_witness().is_none()
    }

    /// Same algebra with basis `f_a = e_{perm[a]}`.
    pub fn permuted(&self, perm: &[usize]) -> Algebra {
        let n = self.dim();
        assert_eq!(perm.len(), n, "permutation length mismatch");
        let mut t = StructureTensor::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    t.set(a, b, c, self.tensor.get(perm[a], perm[b], perm[c]).clone());
                }
            }
        }
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        Algebra::new_unchecked(self.name.clone(), labels, t).expect("permutation keeps shape")
    }

    pub fn renamed(
        &self,
        name: impl Into<String>,
        labels: Vec<String>,
    ) -> Result<Algebra, AlgebraError> {
        Algebra::new_unchecked(name, labels, self.tensor.clone())
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.labels == other.labels && self.tensor == other.tensor
    }
}

impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({}, dim {})", self.name, self.dim())
    }
}

pub(crate) fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn check_same(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<(), AlgebraError> {
    if same_algebra(a, b) {
        Ok(())
    } else {
        Err(AlgebraError::AlgebraMismatch {
            left: a.name().to_string(),
            right: b.name().to_string(),
        })
    }
}

/// A coefficient vector over the basis of one algebra.
#[derive(Clone)]
pub struct Element {
    algebra: Arc<Algebra>,
    coeffs: Vec<Scalar>,
}

impl Element {
    pub fn new(algebra: &Arc<Algebra>, coeffs: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if coeffs.len() != algebra.dim() {
            return Err(AlgebraError::CoefficientCount {
                expected: algebra.dim(),
                got: coeffs.len(),
            });
        }
        Ok(Element {
            algebra: Arc::clone(algebra),
            coeffs,
        })
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        Element {
            algebra: Arc::clone(algebra),
            coeffs: vec![Scalar::zero(); algebra.dim()],
        }
    }

    /// The basis vector `e_i`. Panics if `i` is out of range.
    pub fn basis(algebra: &Arc<Algebra>, i: usize) -> Self {
        assert!(i < algebra.dim(), "basis index out of range");
        let mut e = Element::zero(algebra);
        e.coeffs[i] = Scalar::one();
        e
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        check_same(&self.algebra, &other.algebra)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Element {
            algebra: Arc::clone(&self.algebra),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        check_same(&self.algebra, &other.algebra)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Element {
            algebra: Arc::clone(&self.algebra),
            coeffs,
        })
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        Element {
            algebra: Arc::clone(&self.algebra),
            coeffs: self.coeffs.iter().map(|c| s * c).collect(),
        }
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.algebra.name())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.algebra.labels(), &self.coeffs)
    }
}

/// Writes `c_1*l_1 + c_2*l_2 + ...`, skipping zero terms.
pub(crate) fn write_combination(
    f: &mut fmt::Formatter<'_>,
    labels: &[String],
    coeffs: &[Scalar],
) -> fmt::Result {
    let mut first = true;
    for (c, l) in coeffs.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        if c.is_one() {
            write!(f, "{l}")?;
        } else if c.is_real() {
            write!(f, "{c}*{l}")?;
        } else {
            write!(f, "({c})*{l}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Formats a coefficient vector with the given labels.
pub struct Combination<'a>(pub &'a [String], pub &'a [Scalar]);

impl fmt::Display for Combination<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.0, self.1)
    }
}

/// `x * y`; both must belong to the same algebra.
pub fn multiply(x: &Element, y: &Element) -> Result<Element, AlgebraError> {
    check_same(&x.algebra, &y.algebra)?;
    let coeffs = x.algebra.mul_coeffs(&x.coeffs, &y.coeffs);
    Ok(Element {
        algebra: Arc::clone(&x.algebra),
        coeffs,
    })
}

/// A basis triple on which `(e_i e_j) e_k != e_i (e_j e_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativityWitness {
    pub triple: (usize, usize, usize),
    pub labels: [String; 3],
    pub left: Vec<Scalar>,
    pub right: Vec<Scalar>,
    basis: Vec<String>,
}

impl fmt::Display for AssociativityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.labels;
        write!(
            f,
            "({a}, {b}, {c}): ({a}{b}){c} = {} but {a}({b}{c}) = {}",
            Combination(&self.basis, &self.left),
            Combination(&self.basis, &self.right)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativityReport {
    pub triples_checked: usize,
    /// First failing triple in lexicographic order.
    pub witness: Option<AssociativityWitness>,
}

impl AssociativityReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks `(e_i e_j) e_k = e_i (e_j e_k)` on every basis triple.
pub fn is_associative(algebra: &Algebra) -> AssociativityReport {
    let n = algebra.dim();
    let mut checked = 0;
    for i in 0..n {
        for j in 0..n {
            let ij = algebra.basis_product(i, j);
            for k in 0..n {
                checked += 1;
                let left = algebra.mul_basis_coeffs(ij, k, true);
                let jk = algebra.basis_product(j, k);
                let right = algebra.mul_basis_coeffs(jk, i, false);
                if left != right {
                    let l = algebra.labels();
                    return AssociativityReport {
                        triples_checked: checked,
                        witness: Some(AssociativityWitness {
                            triple: (i, j, k),
                            labels: [l[i].clone(), l[j].clone(), l[k].clone()],
                            left,
                            right,
                            basis: l.to_vec(),
                        }),
                    };
                }
            }
        }
    }
    AssociativityReport {
        triples_checked: checked,
        witness: None,
    }
}

/// The two-sided identity, if one exists.
///
/// Solves `u e_j = e_j` and `e_j u = e_j` for all `j` at once; any solution
/// of the combined system is the (unique) identity.
pub fn find_identity(algebra: &Arc<Algebra>) -> Option<Element> {
    let n = algebra.dim();
    let t = algebra.tensor();
    let mut system = Matrix::zeros(2 * n * n, n);
    let mut rhs = vec![Scalar::zero(); 2 * n * n];
    for j in 0..n {
        for k in 0..n {
            let left_row = j * n + k;
            let right_row = n * n + left_row;
            for i in 0..n {
                system[(left_row, i)] = t.get(i, j, k).clone();
                system[(right_row, i)] = t.get(j, i, k).clone();
            }
            if j == k {
                rhs[left_row] = Scalar::one();
                rhs[right_row] = Scalar::one();
            }
        }
    }
    let u = system.solve(&rhs)?;
    Some(Element {
        algebra: Arc::clone(algebra),
        coeffs: u,
    })
}
