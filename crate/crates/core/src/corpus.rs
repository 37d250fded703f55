//! Deterministic catalog of algebras, characters and homomorphisms.
//!
//! Catalog algebras are addressed by strings such as `matrix:2`, `zero:1`,
//! `poly:3`, `cyclic:4` and `pointwise:2`. Structure tensors are never
//! random; randomness enters only through [`random_element`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{find_identity, Algebra, AlgebraError, Element, StructureTensor};
use crate::construct::{character_to_hom, ConstructionError};
use crate::morphism::{is_character, is_homomorphism, LinearMap, MorphismError};
use crate::scalar::Scalar;

pub const MAX_PARAMETER: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("unrecognized catalog spec `{0}` (expected family:parameter, family one of zero, pointwise, poly, matrix, cyclic)")]
    BadSpec(String),
    #[error("parameter {parameter} out of range 1..={max} for family {family}")]
    ParameterOutOfRange {
        family: Family,
        parameter: usize,
        max: usize,
    },
    #[error("unrecognized homomorphism strategy `{0}`")]
    BadStrategy(String),
    #[error("strategy {strategy} does not apply to {source_spec} -> {target}")]
    Inapplicable {
        strategy: String,
        source_spec: String,
        target: String,
    },
    #[error("{spec} has no character #{index}")]
    NoSuchCharacter { spec: String, index: usize },
    #[error("generator produced an invalid map for {0}")]
    Generator(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// all products zero
    Zero,
    /// `e_i e_j = δ_ij e_i`
    Pointwise,
    /// `C[x] / (x^k)`
    TruncPoly,
    /// `n x n` matrix units
    Matrix,
    /// group algebra of `Z/k`
    CyclicGroup,
}

impl Family {
    pub fn key(self) -> &'static str {
        match self {
            Family::Zero => "zero",
            Family::Pointwise => "pointwise",
            Family::TruncPoly => "poly",
            Family::Matrix => "matrix",
            Family::CyclicGroup => "cyclic",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CatalogSpec {
    pub family: Family,
    pub parameter: usize,
}

impl CatalogSpec {
    pub fn new(family: Family, parameter: usize) -> Result<Self, CorpusError> {
        if parameter == 0 || parameter > MAX_PARAMETER {
            return Err(CorpusError::ParameterOutOfRange {
                family,
                parameter,
                max: MAX_PARAMETER,
            });
        }
        Ok(CatalogSpec { family, parameter })
    }

    pub fn dim(&self) -> usize {
        match self.family {
            Family::Matrix => self.parameter * self.parameter,
            _ => self.parameter,
        }
    }

    pub fn algebra(&self) -> Result<Arc<Algebra>, CorpusError> {
        catalog_algebra(self).map(Arc::new)
    }
}

impl fmt::Display for CatalogSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.parameter)
    }
}

impl FromStr for CatalogSpec {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CorpusError::BadSpec(s.to_string());
        let (family, param) = s.split_once(':').ok_or_else(bad)?;
        let family = match family {
            "zero" => Family::Zero,
            "pointwise" => Family::Pointwise,
            "poly" | "trunc_poly" => Family::TruncPoly,
            "matrix" => Family::Matrix,
            "cyclic" | "cyclic_group" => Family::CyclicGroup,
            _ => return Err(bad()),
        };
        let parameter = param.parse::<usize>().map_err(|_| bad())?;
        CatalogSpec::new(family, parameter)
    }
}

fn power_labels(var: &str, k: usize) -> Vec<String> {
    (0..k)
        .map(|a| match a {
            0 => "1".to_string(),
            1 => var.to_string(),
            _ => format!("{var}^{a}"),
        })
        .collect()
}

/// The catalog algebra for `spec`, verified associative.
pub fn catalog_algebra(spec: &CatalogSpec) -> Result<Algebra, CorpusError> {
    let spec = CatalogSpec::new(spec.family, spec.parameter)?;
    let p = spec.parameter;
    let n = spec.dim();
    let mut t = StructureTensor::zeros(n);
    let labels: Vec<String> = match spec.family {
        Family::Zero if p == 1 => vec!["x".into()],
        Family::Zero => (1..=p).map(|i| format!("x{i}")).collect(),
        Family::Pointwise => {
            for i in 0..p {
                t.set(i, i, i, Scalar::one());
            }
            (1..=p).map(|i| format!("e{i}")).collect()
        }
        Family::TruncPoly => {
            for a in 0..p {
                for b in 0..p - a {
                    t.set(a, b, a + b, Scalar::one());
                }
            }
            power_labels("x", p)
        }
        Family::Matrix => {
            for r in 0..p {
                for m in 0..p {
                    for c in 0..p {
                        t.set(r * p + m, m * p + c, r * p + c, Scalar::one());
                    }
                }
            }
            (1..=p)
                .flat_map(|r| (1..=p).map(move |c| format!("e{r}{c}")))
                .collect()
        }
        Family::CyclicGroup => {
            for a in 0..p {
                for b in 0..p {
                    t.set(a, b, (a + b) % p, Scalar::one());
                }
            }
            power_labels("g", p)
        }
    };
    Ok(Algebra::new(spec.to_string(), labels, t)?)
}

/// The characters of a catalog algebra that are exact over `Q(i)`, in a
/// fixed order. Each is verified before it is returned.
pub fn catalog_characters(spec: &CatalogSpec) -> Result<Vec<LinearMap>, CorpusError> {
    let b = spec.algebra()?;
    let c = Arc::new(Algebra::complex_field());
    let p = spec.parameter;
    let value_lists: Vec<Vec<Scalar>> = match spec.family {
        Family::Zero => Vec::new(),
        Family::Pointwise => (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        if i == j {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect()
            })
            .collect(),
        Family::TruncPoly => {
            vec![(0..p)
                .map(|a| {
                    if a == 0 {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()]
        }
        Family::Matrix if p == 1 => vec![vec![Scalar::one()]],
        Family::Matrix => Vec::new(),
        Family::CyclicGroup => {
            let mut roots = vec![Scalar::one()];
            if p.is_multiple_of(2) {
                roots.push(Scalar::from_int(-1));
            }
            if p.is_multiple_of(4) {
                roots.push(Scalar::i());
                roots.push(Scalar::complex(0, -1));
            }
            roots
                .iter()
                .map(|w| {
                    let mut acc = Scalar::one();
                    (0..p)
                        .map(|_| {
                            let v = acc.clone();
                            acc = &acc * w;
                            v
                        })
                        .collect()
                })
                .collect()
        }
    };
    value_lists
        .into_iter()
        .map(|vals| {
            let images: Vec<Vec<Scalar>> = vals.into_iter().map(|v| vec![v]).collect();
            let chi = LinearMap::from_images(&b, &c, &images)?;
            if !is_character(&chi)?.passed() {
                return Err(CorpusError::Generator(format!("character of {spec}")));
            }
            Ok(chi)
        })
        .collect()
}

/// How a homomorphism `T: B -> A` between catalog algebras is produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomStrategy {
    Zero,
    /// `T(b) = χ(b) e_A` with `χ` the given entry of [`catalog_characters`] of `B`.
    UnitalScalar {
        character: usize,
    },
    Inclusion,
    Projection,
    /// Chain of strategies; each stage names its own endpoints.
    Composition(Vec<HomSpec>),
}

/// A homomorphism `source -> target` (that is, `B -> A`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpec {
    pub strategy: HomStrategy,
    pub source: CatalogSpec,
    pub target: CatalogSpec,
}

impl HomSpec {
    pub fn new(strategy: HomStrategy, source: CatalogSpec, target: CatalogSpec) -> Self {
        HomSpec {
            strategy,
            source,
            target,
        }
    }

    /// Parses the strategy string used on the command line: `zero`,
    /// `unital:N`, `inclusion`, `projection`, or a chain such as
    /// `projection>[pointwise:2]>inclusion`.
    pub fn parse(
        strategy: &str,
        source: CatalogSpec,
        target: CatalogSpec,
    ) -> Result<Self, CorpusError> {
        let parts: Vec<&str> = strategy.split('>').collect();
        if parts.len() == 1 {
            return Ok(HomSpec::new(
                parse_simple_strategy(strategy)?,
                source,
                target,
            ));
        }
        if parts.len().is_multiple_of(2) {
            return Err(CorpusError::BadStrategy(strategy.to_string()));
        }
        let mut stages = Vec::new();
        let mut from = source;
        for chunk in parts.chunks(2) {
            let to = match chunk.get(1) {
                Some(mid) => mid
                    .strip_prefix('[')
                    .and_then(|m| m.strip_suffix(']'))
                    .ok_or_else(|| CorpusError::BadStrategy(strategy.to_string()))?
                    .parse()?,
                None => target,
            };
            stages.push(HomSpec::new(parse_simple_strategy(chunk[0])?, from, to));
            from = to;
        }
        Ok(HomSpec::new(
            HomStrategy::Composition(stages),
            source,
            target,
        ))
    }

    /// Inverse of [`HomSpec::parse`] for the strategy part.
    pub fn strategy_string(&self) -> String {
        match &self.strategy {
            HomStrategy::Zero => "zero".into(),
            HomStrategy::UnitalScalar { character } => format!("unital:{character}"),
            HomStrategy::Inclusion => "inclusion".into(),
            HomStrategy::Projection => "projection".into(),
            HomStrategy::Composition(stages) => {
                let mut s = String::new();
                for (i, st) in stages.iter().enumerate() {
                    if i > 0 {
                        s.push_str(&format!(">[{}]>", st.source));
                    }
                    s.push_str(&st.strategy_string());
                }
                s
            }
        }
    }
}

impl fmt::Display for HomSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} : {} -> {}",
            self.strategy_string(),
            self.source,
            self.target
        )
    }
}

fn parse_simple_strategy(s: &str) -> Result<HomStrategy, CorpusError> {
    match s {
        "zero" => Ok(HomStrategy::Zero),
        "inclusion" => Ok(HomStrategy::Inclusion),
        "projection" => Ok(HomStrategy::Projection),
        _ => s
            .strip_prefix("unital:")
            .and_then(|n| n.parse().ok())
            .map(|character| HomStrategy::UnitalScalar { character })
            .ok_or_else(|| CorpusError::BadStrategy(s.to_string())),
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

/// Images of the source basis under the family-specific inclusion, if defined.
fn inclusion_images(b: &CatalogSpec, a: &CatalogSpec) -> Option<Vec<Vec<Scalar>>> {
    use Family::*;
    let (m, n, dim_a) = (b.parameter, a.parameter, a.dim());
    match (b.family, a.family) {
        (Pointwise, Pointwise) | (Zero, Zero) if m <= n => {
            Some((0..m).map(|i| unit_vec(dim_a, i)).collect())
        }
        (Pointwise, Matrix) if m <= n => Some((0..m).map(|i| unit_vec(dim_a, i * n + i)).collect()),
        (Matrix, Matrix) if m <= n => Some(
            (0..m * m)
                .map(|idx| unit_vec(dim_a, (idx / m) * n + idx % m))
                .collect(),
        ),
        (CyclicGroup, CyclicGroup) if n % m == 0 => {
            Some((0..m).map(|a| unit_vec(dim_a, a * (n / m))).collect())
        }
        _ => None,
    }
}

/// Images of the source basis under the family-specific quotient map, if defined.
fn projection_images(b: &CatalogSpec, a: &CatalogSpec) -> Option<Vec<Vec<Scalar>>> {
    use Family::*;
    let (m, n, dim_a) = (b.parameter, a.parameter, a.dim());
    let truncate = || {
        (0..m)
            .map(|i| {
                if i < n {
                    unit_vec(dim_a, i)
                } else {
                    vec![Scalar::zero(); dim_a]
                }
            })
            .collect()
    };
    match (b.family, a.family) {
        (Pointwise, Pointwise) | (TruncPoly, TruncPoly) | (Zero, Zero) if n <= m => {
            Some(truncate())
        }
        (CyclicGroup, CyclicGroup) if m % n == 0 => {
            Some((0..m).map(|g| unit_vec(dim_a, g % n)).collect())
        }
        _ => None,
    }
}

/// Builds the homomorphism described by `spec` and re-verifies it.
pub fn catalog_homomorphism(spec: &HomSpec) -> Result<LinearMap, CorpusError> {
    let b = spec.source.algebra()?;
    let a = spec.target.algebra()?;
    let inapplicable = || CorpusError::Inapplicable {
        strategy: spec.strategy_string(),
        source_spec: spec.source.to_string(),
        target: spec.target.to_string(),
    };
    let map = match &spec.strategy {
        HomStrategy::Zero => LinearMap::zero(&b, &a),
        HomStrategy::UnitalScalar { character } => {
            let chars = catalog_characters(&spec.source)?;
            let chi = chars
                .get(*character)
                .ok_or_else(|| CorpusError::NoSuchCharacter {
                    spec: spec.source.to_string(),
                    index: *character,
                })?;
            if find_identity(&a).is_none() {
                return Err(inapplicable());
            }
            character_to_hom(&a, chi)?
        }
        HomStrategy::Inclusion => {
            let images = inclusion_images(&spec.source, &spec.target).ok_or_else(inapplicable)?;
            LinearMap::from_images(&b, &a, &images)?
        }
        HomStrategy::Projection => {
            let images = projection_images(&spec.source, &spec.target).ok_or_else(inapplicable)?;
            LinearMap::from_images(&b, &a, &images)?
        }
        HomStrategy::Composition(stages) => {
            let (first, last) = match (stages.first(), stages.last()) {
                (Some(f), Some(l)) => (f, l),
                _ => return Err(inapplicable()),
            };
            if first.source != spec.source
                || last.target != spec.target
                || stages.windows(2).any(|w| w[0].target != w[1].source)
            {
                return Err(inapplicable());
            }
            let mut acc = LinearMap::identity(&b);
            for st in stages {
                acc = acc.then(&catalog_homomorphism(st)?)?;
            }
            acc
        }
    };
    if !is_homomorphism(&map).passed() {
        return Err(CorpusError::Generator(spec.to_string()));
    }
    Ok(map)
}

/// Every catalog spec of dimension at most `max_dim`, in a fixed order.
pub fn specs_up_to_dim(max_dim: usize) -> Vec<CatalogSpec> {
    use Family::*;
    let mut out = Vec::new();
    for family in [Zero, Pointwise, TruncPoly, CyclicGroup, Matrix] {
        for p in 1..=MAX_PARAMETER {
            let spec = CatalogSpec {
                family,
                parameter: p,
            };
            if spec.dim() <= max_dim {
                out.push(spec);
            }
        }
    }
    out
}

/// All applicable `(A, B, T)` triples over catalog algebras of dimension at
/// most `max_dim`, each `T` verified. Strategies: zero, every unital scalar
/// character, inclusion, projection, and projection followed by inclusion
/// through an intermediate algebra.
pub fn triple_corpus(max_dim: usize) -> Result<Vec<(HomSpec, LinearMap)>, CorpusError> {
    let specs = specs_up_to_dim(max_dim);
    let mut out = Vec::new();
    for &b in &specs {
        let n_chars = catalog_characters(&b)?.len();
        for &a in &specs {
            let mut candidates = vec![HomStrategy::Zero];
            candidates
                .extend((0..n_chars).map(|character| HomStrategy::UnitalScalar { character }));
            candidates.push(HomStrategy::Inclusion);
            candidates.push(HomStrategy::Projection);
            for &mid in &specs {
                if mid != a
                    && mid != b
                    && projection_images(&b, &mid).is_some()
                    && inclusion_images(&mid, &a).is_some()
                {
                    candidates.push(HomStrategy::Composition(vec![
                        HomSpec::new(HomStrategy::Projection, b, mid),
                        HomSpec::new(HomStrategy::Inclusion, mid, a),
                    ]));
                }
            }
            for strategy in candidates {
                let spec = HomSpec::new(strategy, b, a);
                match catalog_homomorphism(&spec) {
                    Ok(t) => out.push((spec, t)),
                    Err(CorpusError::Inapplicable { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

/// A deterministic element with rational coefficients `p/q`,
/// `p ∈ [-bound, bound]`, `q ∈ [1, bound]`, keyed by the algebra name and
/// `seed`.
pub fn random_element(algebra: &Arc<Algebra>, seed: u64, bound: u64) -> Element {
    let bound = bound.max(1) as i64;
    let mut hasher = Sha256::new();
    hasher.update(algebra.name().as_bytes());
    hasher.update([0u8]);
    hasher.update(seed.to_le_bytes());
    let key: [u8; 32] = hasher.finalize().into();
    let mut rng = ChaCha8Rng::from_seed(key);
    let coeffs = (0..algebra.dim())
        .map(|_| {
            let p = rng.random_range(-bound..=bound);
            let q = rng.random_range(1..=bound);
            Scalar::real(BigRational::new(BigInt::from(p), BigInt::from(q)))
        })
        .collect();
    Element::new(algebra, coeffs).expect("length matches dimension")
}
