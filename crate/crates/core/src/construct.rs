//! Algebra constructions: direct sum, unitization, the generalized and
//! character Lau products, and the maps relating them.
//!
//! Every product construction orders its basis as the `A` block followed by
//! the `B` block; unitization appends the adjoined unit last.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{
    find_identity, same_algebra, Algebra, AlgebraError, Element, StructureTensor,
};
use crate::corpus::random_element;
use crate::linalg::Matrix;
use crate::morphism::{
    is_character, is_homomorphism, preserves_product, verify_isomorphism, CharFailure, HomWitness,
    IsoReport, LinearMap, MorphismError,
};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(Box<HomWitness>),
    #[error("not a character: {0}")]
    NotACharacter(Box<CharFailure>),
    #[error(
        "requires unital A: `{0}` has no identity element, so the character cannot be turned into a homomorphism into A"
    )]
    RequiresUnital(String),
    #[error("map {role} is `{got}`, expected `{expected}`")]
    Endpoint {
        role: &'static str,
        expected: String,
        got: String,
    },
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn check_endpoint(
    role: &'static str,
    expected: &Arc<Algebra>,
    got: &Arc<Algebra>,
) -> Result<(), ConstructionError> {
    if same_algebra(expected, got) {
        Ok(())
    } else {
        Err(ConstructionError::Endpoint {
            role,
            expected: expected.name().to_string(),
            got: got.name().to_string(),
        })
    }
}

fn check_hom(a: &Arc<Algebra>, b: &Arc<Algebra>, t: &LinearMap) -> Result<(), ConstructionError> {
    check_endpoint("domain", b, t.domain())?;
    check_endpoint("codomain", a, t.codomain())?;
    match is_homomorphism(t).witness {
        Some(w) => Err(ConstructionError::NotAHomomorphism(Box::new(w))),
        None => Ok(()),
    }
}

fn check_character(b: &Arc<Algebra>, chi: &LinearMap) -> Result<(), ConstructionError> {
    check_endpoint("domain", b, chi.domain())?;
    match is_character(chi)?.failure {
        Some(f) => Err(ConstructionError::NotACharacter(Box::new(f))),
        None => Ok(()),
    }
}

/// Labels for the `A` block followed by the `B` block; on any collision both
/// sides are prefixed with `L.` and `R.`.
fn block_labels(a: &Algebra, b: &Algebra) -> Vec<String> {
    let collide = a.labels().iter().any(|l| b.labels().contains(l));
    if collide {
        a.labels()
            .iter()
            .map(|l| format!("L.{l}"))
            .chain(b.labels().iter().map(|l| format!("R.{l}")))
            .collect()
    } else {
        a.labels().iter().chain(b.labels()).cloned().collect()
    }
}

/// Copies the structure constants of `src` into `dst` at block `offset`.
fn embed_block(dst: &mut StructureTensor, src: &Algebra, offset: usize) {
    let n = src.dim();
    for i in 0..n {
        for j in 0..n {
            for (k, c) in src.basis_product(i, j).iter().enumerate() {
                if !c.is_zero() {
                    dst.set(offset + i, offset + j, offset + k, c.clone());
                }
            }
        }
    }
}

/// `A ⊕ B` with coordinatewise product.
pub fn direct_sum(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Arc<Algebra>, ConstructionError> {
    let (na, nb) = (a.dim(), b.dim());
    let mut t = StructureTensor::zeros(na + nb);
    embed_block(&mut t, a, 0);
    embed_block(&mut t, b, na);
    let name = format!("dsum({},{})", a.name(), b.name());
    Ok(Arc::new(Algebra::new_unchecked(
        name,
        block_labels(a, b),
        t,
    )?))
}

/// `A♯`: `A` with an adjoined unit `u` as the last basis vector, plus the
/// inclusion `A -> A♯`.
pub fn unitization(a: &Arc<Algebra>) -> Result<(Arc<Algebra>, LinearMap), ConstructionError> {
    let n = a.dim();
    let mut t = StructureTensor::zeros(n + 1);
    embed_block(&mut t, a, 0);
    for i in 0..n {
        t.set(i, n, i, Scalar::one());
        t.set(n, i, i, Scalar::one());
    }
    t.set(n, n, n, Scalar::one());
    let mut unit = String::from("u");
    while a.labels().contains(&unit) {
        unit.push('\'');
    }
    let mut labels = a.labels().to_vec();
    labels.push(unit);
    let sharp = Arc::new(Algebra::new_unchecked(
        format!("unitize({})", a.name()),
        labels,
        t,
    )?);
    let images: Vec<Vec<Scalar>> = (0..n)
        .map(|i| Element::basis(&sharp, i).into_coeffs())
        .collect();
    let inclusion = LinearMap::from_images(a, &sharp, &images)?;
    Ok((sharp, inclusion))
}

/// Product space `A ⊕ B` with a bilinear product given by the cross terms
/// `left(i, j) = e_i^A * (image of e_j^B)` and `right(i, j) = (image of e_i^B) * e_j^A`.
fn lau_tensor(
    a: &Algebra,
    b: &Algebra,
    cross_left: impl Fn(usize, usize) -> Vec<Scalar>,
    cross_right: impl Fn(usize, usize) -> Vec<Scalar>,
) -> StructureTensor {
    let (na, nb) = (a.dim(), b.dim());
    let mut t = StructureTensor::zeros(na + nb);
    embed_block(&mut t, a, 0);
    embed_block(&mut t, b, na);
    for i in 0..na {
        for j in 0..nb {
            for (k, c) in cross_left(i, j).into_iter().enumerate() {
                if !c.is_zero() {
                    t.set(i, na + j, k, c);
                }
            }
            for (k, c) in cross_right(j, i).into_iter().enumerate() {
                if !c.is_zero() {
                    t.set(na + j, i, k, c);
                }
            }
        }
    }
    t
}

/// `A ×_T B`: `(a1, b1)(a2, b2) = (a1 a2 + T(b1) a2 + a1 T(b2), b1 b2)` for
/// a homomorphism `T: B -> A`.
pub fn generalized_lau_product(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    t: &LinearMap,
) -> Result<Arc<Algebra>, ConstructionError> {
    check_hom(a, b, t)?;
    let images: Vec<Vec<Scalar>> = (0..b.dim()).map(|j| t.image_of_basis(j)).collect();
    let unit = |i: usize| Element::basis(a, i).into_coeffs();
    let tensor = lau_tensor(
        a,
        b,
        |i, j| a.mul_coeffs(&unit(i), &images[j]),
        |j, i| a.mul_coeffs(&images[j], &unit(i)),
    );
    let name = format!("genlau({},{})", a.name(), b.name());
    Ok(Arc::new(Algebra::new_unchecked(
        name,
        block_labels(a, b),
        tensor,
    )?))
}

/// `A ×_χ B`: `(a1, b1)(a2, b2) = (a1 a2 + χ(b1) a2 + a1 χ(b2), b1 b2)` for
/// a character `χ` of `B`. `A` need not be unital.
pub fn lau_product(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    chi: &LinearMap,
) -> Result<Arc<Algebra>, ConstructionError> {
    check_character(b, chi)?;
    let values: Vec<Scalar> = (0..b.dim()).map(|j| chi.matrix()[(0, j)].clone()).collect();
    let scaled = |i: usize, s: &Scalar| {
        let mut v = vec![Scalar::zero(); a.dim()];
        v[i] = s.clone();
        v
    };
    let tensor = lau_tensor(
        a,
        b,
        |i, j| scaled(i, &values[j]),
        |j, i| scaled(i, &values[j]),
    );
    let name = format!("lau({},{})", a.name(), b.name());
    Ok(Arc::new(Algebra::new_unchecked(
        name,
        block_labels(a, b),
        tensor,
    )?))
}

/// `T(b) = χ(b) e_A`, defined only when `A` has an identity `e_A`.
pub fn character_to_hom(a: &Arc<Algebra>, chi: &LinearMap) -> Result<LinearMap, ConstructionError> {
    let b = Arc::clone(chi.domain());
    check_character(&b, chi)?;
    let unit =
        find_identity(a).ok_or_else(|| ConstructionError::RequiresUnital(a.name().to_string()))?;
    let images: Vec<Vec<Scalar>> = (0..b.dim())
        .map(|j| unit.scale(&chi.matrix()[(0, j)]).into_coeffs())
        .collect();
    Ok(LinearMap::from_images(&b, a, &images)?)
}

/// `φ(a, b) = (a + T(b), b)` from `A ×_T B` to `A ⊕ B`; its matrix is
/// `[[I, M_T], [0, I]]`.
pub fn trivializing_isomorphism(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    t: &LinearMap,
) -> Result<LinearMap, ConstructionError> {
    let product = generalized_lau_product(a, b, t)?;
    let sum = direct_sum(a, b)?;
    let (na, nb) = (a.dim(), b.dim());
    let mut m = Matrix::identity(na + nb);
    for i in 0..na {
        for j in 0..nb {
            m[(i, na + j)] = t.matrix()[(i, j)].clone();
        }
    }
    Ok(LinearMap::new(&product, &sum, m)?)
}

/// `ψ(a, b) = ((a, χ(b)), b)` from `A ×_χ B` into `A♯ ⊕ B`.
pub fn unitization_embedding(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    chi: &LinearMap,
) -> Result<LinearMap, ConstructionError> {
    let product = lau_product(a, b, chi)?;
    let (sharp, _) = unitization(a)?;
    let ambient = direct_sum(&sharp, b)?;
    let (na, nb) = (a.dim(), b.dim());
    let mut m = Matrix::zeros(na + 1 + nb, na + nb);
    for i in 0..na {
        m[(i, i)] = Scalar::one();
    }
    for j in 0..nb {
        m[(na, na + j)] = chi.matrix()[(0, j)].clone();
        m[(na + 1 + j, na + j)] = Scalar::one();
    }
    Ok(LinearMap::new(&product, &ambient, m)?)
}

/// Outcome of checking that `A ×_T B` collapses onto `A ⊕ B`.
#[derive(Clone, Debug)]
pub struct CollapseReport {
    pub product: Arc<Algebra>,
    pub phi: LinearMap,
    pub iso: IsoReport,
    pub random_pairs_checked: usize,
    /// First seeded pair `(x, y)` with `φ(x y) != φ(x) φ(y)`.
    pub random_failure: Option<(Element, Element)>,
}

impl CollapseReport {
    pub fn passed(&self) -> bool {
        self.iso.passed()
            && self.iso.determinant.as_ref().is_some_and(Scalar::is_one)
            && self.random_failure.is_none()
    }
}

impl fmt::Display for CollapseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "product: {} (dim {})",
            self.product.name(),
            self.product.dim()
        )?;
        writeln!(f, "phi: {}", self.iso)?;
        match &self.random_failure {
            None => writeln!(
                f,
                "random pairs: {} checked, all multiplicative",
                self.random_pairs_checked
            )?,
            Some((x, y)) => writeln!(f, "random pairs: FAIL at x = {x}, y = {y}")?,
        }
        write!(
            f,
            "verdict: {}",
            if self.passed() {
                "isomorphic to the direct sum"
            } else {
                "FAIL"
            }
        )
    }
}

/// Builds `A ×_T B` and `φ`, verifies `φ` as an isomorphism onto `A ⊕ B`,
/// and spot-checks multiplicativity on `samples` seeded random pairs.
pub fn collapse(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    t: &LinearMap,
    samples: usize,
    seed: u64,
) -> Result<CollapseReport, ConstructionError> {
    let phi = trivializing_isomorphism(a, b, t)?;
    let product = Arc::clone(phi.domain());
    let iso = verify_isomorphism(&phi);
    let mut random_failure = None;
    for s in 0..samples as u64 {
        let x = random_element(&product, seed.wrapping_add(2 * s), 3);
        let y = random_element(&product, seed.wrapping_add(2 * s + 1), 3);
        if !preserves_product(&phi, &x, &y)? {
            random_failure = Some((x, y));
            break;
        }
    }
    Ok(CollapseReport {
        product,
        phi,
        iso,
        random_pairs_checked: samples,
        random_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_associative, multiply};
    use crate::corpus::{catalog_algebra, CatalogSpec};
    use crate::morphism::{is_homomorphism, subspace_report};

    fn cat(s: &str) -> Arc<Algebra> {
        Arc::new(catalog_algebra(&s.parse::<CatalogSpec>().unwrap()).unwrap())
    }

    fn v(c: &[i64]) -> Vec<Scalar> {
        c.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    fn el(a: &Arc<Algebra>, c: &[i64]) -> Element {
        Element::new(a, v(c)).unwrap()
    }

    fn complex() -> Arc<Algebra> {
        Arc::new(Algebra::complex_field())
    }

    #[test]
    fn direct_sum_of_c_and_c_is_pointwise() {
        let c = cat("pointwise:1");
        let s = direct_sum(&c, &c).unwrap();
        assert_eq!(s.tensor(), cat("pointwise:2").tensor());
        assert_eq!(s.labels(), ["L.e1", "R.e1"]);
    }

    #[test]
    fn unitization_of_zero_algebra() {
        let z = cat("zero:1");
        let (sharp, incl) = unitization(&z).unwrap();
        assert_eq!(sharp.labels(), ["x", "u"]);
        let (x, u) = (Element::basis(&sharp, 0), Element::basis(&sharp, 1));
        assert!(multiply(&x, &x).unwrap().is_zero());
        assert_eq!(multiply(&x, &u).unwrap(), x);
        assert_eq!(multiply(&u, &x).unwrap(), x);
        assert_eq!(multiply(&u, &u).unwrap(), u);
        assert_eq!(find_identity(&sharp).unwrap(), u);
        assert!(is_homomorphism(&incl).passed());
    }

    #[test]
    fn unitization_of_c_is_c_squared() {
        let c = cat("pointwise:1");
        let (sharp, _) = unitization(&c).unwrap();
        let c2 = cat("pointwise:2");
        // (a, λ) -> (a + λ, λ)
        let w = LinearMap::from_images(&sharp, &c2, &[v(&[1, 0]), v(&[1, 1])]).unwrap();
        assert!(verify_isomorphism(&w).passed());
    }

    #[test]
    fn unitization_keeps_unit_last_even_when_already_unital() {
        let m2 = cat("matrix:2");
        let (sharp, _) = unitization(&m2).unwrap();
        assert_eq!(find_identity(&sharp).unwrap(), Element::basis(&sharp, 4));
    }

    #[test]
    fn generalized_lau_examples() {
        let c = cat("pointwise:1");
        let id = LinearMap::identity(&c);
        let p = generalized_lau_product(&c, &c, &id).unwrap();
        let one = el(&p, &[1, 1]);
        assert_eq!(multiply(&one, &one).unwrap(), el(&p, &[3, 1]));

        let m2 = cat("matrix:2");
        let c2 = cat("pointwise:2");
        let zero = LinearMap::zero(&c2, &m2);
        assert_eq!(
            generalized_lau_product(&m2, &c2, &zero).unwrap().tensor(),
            direct_sum(&m2, &c2).unwrap().tensor()
        );
    }

    #[test]
    fn generalized_lau_rejects_non_homomorphism() {
        let c = cat("pointwise:1");
        let m2 = cat("matrix:2");
        let e12 = LinearMap::from_images(&c, &m2, &[v(&[0, 1, 0, 0])]).unwrap();
        match generalized_lau_product(&m2, &c, &e12) {
            Err(ConstructionError::NotAHomomorphism(w)) => assert_eq!(w.pair, (0, 0)),
            other => panic!("unexpected {other:?}"),
        }
        let err = generalized_lau_product(&m2, &c, &e12).unwrap_err();
        assert!(err.to_string().starts_with("not a homomorphism"));
        // wrong endpoints
        assert!(matches!(
            generalized_lau_product(&c, &m2, &e12),
            Err(ConstructionError::Endpoint { .. })
        ));
    }

    #[test]
    fn lau_product_examples() {
        let z = cat("zero:1");
        let c = complex();
        let id = LinearMap::identity(&c);
        let p = lau_product(&z, &c, &id).unwrap();
        let x1 = el(&p, &[1, 1]);
        assert_eq!(multiply(&x1, &x1).unwrap(), el(&p, &[2, 1]));

        let zero = LinearMap::zero(&c, &c);
        match lau_product(&z, &c, &zero) {
            Err(ConstructionError::NotACharacter(f)) => assert_eq!(*f, CharFailure::Zero),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lau_with_identity_character_is_unitization() {
        for s in [
            "zero:1",
            "zero:2",
            "poly:3",
            "matrix:2",
            "pointwise:2",
            "cyclic:3",
        ] {
            let a = cat(s);
            let c = complex();
            let p = lau_product(&a, &c, &LinearMap::identity(&c)).unwrap();
            let (sharp, _) = unitization(&a).unwrap();
            let w = LinearMap::new(&p, &sharp, Matrix::identity(a.dim() + 1)).unwrap();
            assert!(verify_isomorphism(&w).passed(), "{s}");
        }
    }

    #[test]
    fn character_to_hom_examples() {
        let c = complex();
        let id = LinearMap::identity(&c);
        let t = character_to_hom(&c, &id).unwrap();
        assert_eq!(t.matrix(), &Matrix::identity(1));

        let m2 = cat("matrix:2");
        let t = character_to_hom(&m2, &id).unwrap();
        assert_eq!(t.image_of_basis(0), v(&[1, 0, 0, 1]));
        assert!(is_homomorphism(&t).passed());

        let err = character_to_hom(&cat("zero:1"), &id).unwrap_err();
        assert!(matches!(err, ConstructionError::RequiresUnital(_)));
        assert!(err.to_string().starts_with("requires unital A"));
    }

    #[test]
    fn coincidence_for_unital_a() {
        let m2 = cat("matrix:2");
        let c2 = cat("pointwise:2");
        let c = complex();
        let chi = LinearMap::from_images(&c2, &c, &[v(&[0]), v(&[1])]).unwrap();
        let t = character_to_hom(&m2, &chi).unwrap();
        assert_eq!(
            lau_product(&m2, &c2, &chi).unwrap().tensor(),
            generalized_lau_product(&m2, &c2, &t).unwrap().tensor()
        );
    }

    #[test]
    fn trivializing_isomorphism_examples() {
        let c = cat("pointwise:1");
        let zero = LinearMap::zero(&c, &c);
        let phi = trivializing_isomorphism(&c, &c, &zero).unwrap();
        assert_eq!(phi.matrix(), &Matrix::identity(2));

        let id = LinearMap::identity(&c);
        let phi = trivializing_isomorphism(&c, &c, &id).unwrap();
        assert_eq!(
            phi.matrix(),
            &Matrix::from_rows(vec![v(&[1, 1]), v(&[0, 1])])
        );
        let p = Arc::clone(phi.domain());
        let s = Arc::clone(phi.codomain());
        let x = el(&p, &[1, 1]);
        assert_eq!(
            phi.apply(&multiply(&x, &x).unwrap()).unwrap(),
            el(&s, &[4, 1])
        );
        let px = phi.apply(&x).unwrap();
        assert_eq!(px, el(&s, &[2, 1]));
        assert_eq!(multiply(&px, &px).unwrap(), el(&s, &[4, 1]));
        let r = verify_isomorphism(&phi);
        assert!(r.passed());
        assert_eq!(r.determinant, Some(Scalar::one()));

        let inverse = phi.inverse().unwrap();
        assert_eq!(
            inverse.matrix(),
            &Matrix::from_rows(vec![v(&[1, -1]), v(&[0, 1])])
        );
    }

    #[test]
    fn embedding_of_c_c_id() {
        let c = complex();
        let id = LinearMap::identity(&c);
        let psi = unitization_embedding(&c, &c, &id).unwrap();
        assert!(is_homomorphism(&psi).passed());
        assert_eq!(psi.matrix().rank(), 2);
        let image = psi.image();
        assert_eq!(image.reduced().basis(), &[v(&[1, 0, 0]), v(&[0, 1, 1])]);
        let r = subspace_report(&image);
        assert_eq!(r.codimension, 1);
        assert!(r.is_subalgebra);
        assert!(!r.is_ideal());
        let w = r.ideal_witness().unwrap();
        assert_eq!(w.left, v(&[0, 1, 0]));
        assert_eq!(w.right, v(&[0, 1, 1]));
        assert_eq!(w.product, v(&[0, 1, 0]));
    }

    #[test]
    fn constructions_are_associative() {
        let m2 = cat("matrix:2");
        let p3 = cat("poly:3");
        let c = complex();
        let chi = LinearMap::from_images(&p3, &c, &[v(&[1]), v(&[0]), v(&[0])]).unwrap();
        let t = character_to_hom(&m2, &chi).unwrap();
        for alg in [
            direct_sum(&m2, &p3).unwrap(),
            unitization(&p3).unwrap().0,
            generalized_lau_product(&m2, &p3, &t).unwrap(),
            lau_product(&cat("zero:2"), &p3, &chi).unwrap(),
        ] {
            assert!(is_associative(&alg).passed(), "{}", alg.name());
        }
    }

    #[test]
    fn collapse_passes_on_small_triple() {
        let c2 = cat("pointwise:2");
        let c = cat("pointwise:1");
        let incl = LinearMap::from_images(&c, &c2, &[v(&[1, 0])]).unwrap();
        let r = collapse(&c2, &c, &incl, 20, 7).unwrap();
        assert!(r.passed(), "{r}");
    }
}
