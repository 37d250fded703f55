//! Property lab: tests, on a finite corpus, whether a fingerprint-level
//! property survives unitization, direct sums, finite-codimension
//! subalgebras and Lau products.
//!
//! The lab demonstrates; it proves nothing. Every case has an id, and
//! `lauprod lab --predicate P --case ID` re-evaluates that single case.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::algebra::{Algebra, Element};
use crate::analysis::{fingerprint, Fingerprint};
use crate::construct::{
    direct_sum, lau_product, unitization, unitization_embedding, ConstructionError,
};
use crate::corpus::{catalog_characters, CatalogSpec, CorpusError};
use crate::morphism::{MorphismError, Subspace};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("unknown predicate `{0}` (expected unital, commutative or semisimple)")]
    UnknownPredicate(String),
    #[error("unrecognized lab case `{0}`")]
    BadCase(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Predicate {
    Unital,
    Commutative,
    Semisimple,
}

impl Predicate {
    pub fn holds(self, f: &Fingerprint) -> bool {
        match self {
            Predicate::Unital => f.unital,
            Predicate::Commutative => f.commutative,
            Predicate::Semisimple => f.semisimple(),
        }
    }

    fn describe(self, f: &Fingerprint) -> String {
        match self {
            Predicate::Unital => format!("unital {}", f.unital),
            Predicate::Commutative => format!("commutative {}", f.commutative),
            Predicate::Semisimple => format!("radical_dim {}", f.radical_dim),
        }
    }
}

impl FromStr for Predicate {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unital" => Ok(Predicate::Unital),
            "commutative" => Ok(Predicate::Commutative),
            "semisimple" => Ok(Predicate::Semisimple),
            _ => Err(LabError::UnknownPredicate(s.to_string())),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Predicate::Unital => "unital",
            Predicate::Commutative => "commutative",
            Predicate::Semisimple => "semisimple",
        })
    }
}

/// `(A, B, χ)` with `χ` an index into [`catalog_characters`] of `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabPair {
    pub a: CatalogSpec,
    pub b: CatalogSpec,
    pub character: usize,
}

impl fmt::Display for LabPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.character)
    }
}

impl FromStr for LabPair {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        match parts.as_slice() {
            [a, b, c] => Ok(LabPair {
                a: a.parse()?,
                b: b.parse()?,
                character: c.parse().map_err(|_| LabError::BadCase(s.to_string()))?,
            }),
            _ => Err(LabError::BadCase(s.to_string())),
        }
    }
}

/// The shipped finite-codimension subalgebra instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubalgebraInstance {
    /// `{e11, e12, e22}` in `matrix:2`
    UpperTriangular,
    /// `{e11, e22}` in `matrix:2`
    Diagonal,
    /// `{x}` in `poly:2`
    PolyRadical,
    /// image of `ψ: A ×_χ B -> A♯ ⊕ B`
    Psi(LabPair),
}

impl fmt::Display for SubalgebraInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubalgebraInstance::UpperTriangular => write!(f, "upper-triangular"),
            SubalgebraInstance::Diagonal => write!(f, "diagonal"),
            SubalgebraInstance::PolyRadical => write!(f, "poly2-radical"),
            SubalgebraInstance::Psi(p) => write!(f, "psi:{p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabCase {
    Unitization(CatalogSpec),
    DirectSum(CatalogSpec, CatalogSpec),
    Subalgebra(SubalgebraInstance),
    Lau(LabPair),
}

impl fmt::Display for LabCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabCase::Unitization(a) => write!(f, "h1:{a}"),
            LabCase::DirectSum(a, b) => write!(f, "h2:{a},{b}"),
            LabCase::Subalgebra(s) => write!(f, "h3:{s}"),
            LabCase::Lau(p) => write!(f, "lau:{p}"),
        }
    }
}

impl FromStr for LabCase {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LabError::BadCase(s.to_string());
        let (section, rest) = s.split_once(':').ok_or_else(bad)?;
        match section {
            "h1" => Ok(LabCase::Unitization(rest.parse()?)),
            "h2" => {
                let (a, b) = rest.split_once(',').ok_or_else(bad)?;
                Ok(LabCase::DirectSum(a.parse()?, b.parse()?))
            }
            "h3" => Ok(LabCase::Subalgebra(match rest {
                "upper-triangular" => SubalgebraInstance::UpperTriangular,
                "diagonal" => SubalgebraInstance::Diagonal,
                "poly2-radical" => SubalgebraInstance::PolyRadical,
                _ => SubalgebraInstance::Psi(rest.strip_prefix("psi:").ok_or_else(bad)?.parse()?),
            })),
            "lau" => Ok(LabCase::Lau(rest.parse()?)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseOutcome {
    /// The hypothesis does not hold, so nothing is tested.
    Skipped,
    Holds,
    Fails(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabFailure {
    pub case_id: String,
    pub detail: String,
    /// Command that re-evaluates this case alone.
    pub replay: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SectionReport {
    /// Cases whose hypothesis held and whose conclusion was tested.
    pub cases: usize,
    pub failures: Vec<LabFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabReport {
    pub predicate: Predicate,
    pub h1_unitization: SectionReport,
    pub h2_direct_sum: SectionReport,
    pub h3_finite_codim: SectionReport,
    pub conclusion_lau: SectionReport,
}

impl LabReport {
    pub fn sections(&self) -> [(&'static str, &SectionReport); 4] {
        [
            ("H1 unitization", &self.h1_unitization),
            ("H2 direct sum", &self.h2_direct_sum),
            ("H3 finite codimension", &self.h3_finite_codim),
            ("conclusion Lau product", &self.conclusion_lau),
        ]
    }

    pub fn failure_count(&self) -> usize {
        self.sections().iter().map(|(_, s)| s.failures.len()).sum()
    }
}

impl fmt::Display for LabReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "predicate: {}", self.predicate)?;
        for (name, s) in self.sections() {
            writeln!(
                f,
                "{name}: {} cases, {} failures",
                s.cases,
                s.failures.len()
            )?;
            for fail in &s.failures {
                writeln!(f, "  FAIL {}: {}", fail.case_id, fail.detail)?;
                writeln!(f, "    replay: {}", fail.replay)?;
            }
        }
        write!(f, "(a demonstration on a finite corpus, not a proof)")
    }
}

pub fn replay_command(predicate: Predicate, case: &LabCase) -> String {
    format!("lauprod lab --predicate {predicate} --case {case}")
}

/// The corpus the CLI lab runs on.
pub fn shipped_corpus() -> Vec<CatalogSpec> {
    [
        "zero:1",
        "zero:2",
        "pointwise:1",
        "pointwise:2",
        "poly:2",
        "poly:3",
        "cyclic:2",
        "cyclic:3",
        "matrix:2",
    ]
    .iter()
    .map(|s| s.parse().expect("valid shipped spec"))
    .collect()
}

/// Every `(A, B, χ)` over `corpus` with `χ` a catalog character of `B`.
pub fn pairs_over(corpus: &[CatalogSpec]) -> Result<Vec<LabPair>, LabError> {
    let mut out = Vec::new();
    for &a in corpus {
        for &b in corpus {
            for character in 0..catalog_characters(&b)?.len() {
                out.push(LabPair { a, b, character });
            }
        }
    }
    Ok(out)
}

/// Memoized fingerprints keyed by algebra name; names of catalog-derived
/// algebras determine their tensors.
#[derive(Default)]
struct Fingerprints(Mutex<HashMap<String, Fingerprint>>);

impl Fingerprints {
    fn of(&self, a: &Arc<Algebra>) -> Fingerprint {
        if let Some(f) = self.0.lock().expect("poisoned").get(a.name()) {
            return f.clone();
        }
        let f = fingerprint(a);
        self.0
            .lock()
            .expect("poisoned")
            .insert(a.name().to_string(), f.clone());
        f
    }
}

fn character(pair: &LabPair) -> Result<crate::morphism::LinearMap, LabError> {
    catalog_characters(&pair.b)?
        .into_iter()
        .nth(pair.character)
        .ok_or_else(|| {
            CorpusError::NoSuchCharacter {
                spec: pair.b.to_string(),
                index: pair.character,
            }
            .into()
        })
}

fn subalgebra_instance(inst: &SubalgebraInstance) -> Result<(Arc<Algebra>, Subspace), LabError> {
    let units = |a: &Arc<Algebra>, idx: &[usize]| -> Vec<Element> {
        idx.iter().map(|&i| Element::basis(a, i)).collect()
    };
    match inst {
        SubalgebraInstance::UpperTriangular | SubalgebraInstance::Diagonal => {
            let m2 = "matrix:2".parse::<CatalogSpec>()?.algebra()?;
            let idx: &[usize] = if *inst == SubalgebraInstance::Diagonal {
                &[0, 3]
            } else {
                &[0, 1, 3]
            };
            let s = Subspace::new(&m2, &units(&m2, idx))?;
            Ok((m2, s))
        }
        SubalgebraInstance::PolyRadical => {
            let p2 = "poly:2".parse::<CatalogSpec>()?.algebra()?;
            let s = Subspace::new(&p2, &units(&p2, &[1]))?;
            Ok((p2, s))
        }
        SubalgebraInstance::Psi(pair) => {
            let psi =
                unitization_embedding(&pair.a.algebra()?, &pair.b.algebra()?, &character(pair)?)?;
            Ok((Arc::clone(psi.codomain()), psi.image()))
        }
    }
}

fn evaluate(
    predicate: Predicate,
    case: &LabCase,
    cache: &Fingerprints,
) -> Result<CaseOutcome, LabError> {
    let q = |a: &Arc<Algebra>| {
        let f = cache.of(a);
        (predicate.holds(&f), f)
    };
    let verdict = |ok: bool, what: &str, f: &Fingerprint| {
        if ok {
            CaseOutcome::Holds
        } else {
            CaseOutcome::Fails(format!(
                "{what} fails {predicate} ({})",
                predicate.describe(f)
            ))
        }
    };
    match case {
        LabCase::Unitization(spec) => {
            let a = spec.algebra()?;
            if !q(&a).0 {
                return Ok(CaseOutcome::Skipped);
            }
            let (sharp, _) = unitization(&a)?;
            let (ok, f) = q(&sharp);
            Ok(verdict(
                ok,
                &format!("{spec} is {predicate} but its unitization"),
                &f,
            ))
        }
        LabCase::DirectSum(sa, sb) => {
            let (a, b) = (sa.algebra()?, sb.algebra()?);
            if !q(&a).0 || !q(&b).0 {
                return Ok(CaseOutcome::Skipped);
            }
            let (ok, f) = q(&direct_sum(&a, &b)?);
            Ok(verdict(
                ok,
                &format!("{sa} and {sb} are {predicate} but their direct sum"),
                &f,
            ))
        }
        LabCase::Subalgebra(inst) => {
            let (ambient, sub) = subalgebra_instance(inst)?;
            if !q(&ambient).0 {
                return Ok(CaseOutcome::Skipped);
            }
            let ambient_desc = predicate.describe(&cache.of(&ambient));
            let (sub_alg, _) = sub.to_algebra(&format!("sub[{inst}]"))?;
            let (ok, f) = q(&sub_alg);
            Ok(verdict(
                ok,
                &format!(
                    "{} is {predicate} ({ambient_desc}) but its codimension-{} subalgebra {inst}",
                    ambient.name(),
                    sub.codimension()
                ),
                &f,
            ))
        }
        LabCase::Lau(pair) => {
            let (a, b) = (pair.a.algebra()?, pair.b.algebra()?);
            if !q(&a).0 || !q(&b).0 {
                return Ok(CaseOutcome::Skipped);
            }
            let chi = character(pair)?;
            let product = lau_product(&a, &b, &chi)?;
            let (ok, f) = q(&product);
            Ok(verdict(
                ok,
                &format!(
                    "{} and {} are {predicate} but the Lau product (character {})",
                    pair.a, pair.b, pair.character
                ),
                &f,
            ))
        }
    }
}

/// Re-evaluates one case by id.
pub fn run_case(predicate: &str, case_id: &str) -> Result<CaseOutcome, LabError> {
    let predicate: Predicate = predicate.parse()?;
    let case: LabCase = case_id.parse()?;
    evaluate(predicate, &case, &Fingerprints::default())
}

/// Every case the lab runs over `corpus` and `pairs`, in report order.
pub fn lab_cases(corpus: &[CatalogSpec], pairs: &[LabPair]) -> [Vec<LabCase>; 4] {
    let h1 = corpus.iter().map(|&a| LabCase::Unitization(a)).collect();
    let h2 = corpus
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| corpus[i..].iter().map(move |&b| LabCase::DirectSum(a, b)))
        .collect();
    let mut h3: Vec<LabCase> = [
        SubalgebraInstance::UpperTriangular,
        SubalgebraInstance::Diagonal,
        SubalgebraInstance::PolyRadical,
    ]
    .into_iter()
    .map(LabCase::Subalgebra)
    .collect();
    h3.extend(
        pairs
            .iter()
            .map(|&p| LabCase::Subalgebra(SubalgebraInstance::Psi(p))),
    );
    let lau = pairs.iter().map(|&p| LabCase::Lau(p)).collect();
    [h1, h2, h3, lau]
}

pub fn run_lab(
    predicate: &str,
    corpus: &[CatalogSpec],
    pairs: &[LabPair],
) -> Result<LabReport, LabError> {
    let predicate: Predicate = predicate.parse()?;
    let cache = Fingerprints::default();
    let mut sections = Vec::with_capacity(4);
    for cases in lab_cases(corpus, pairs) {
        let mut section = SectionReport::default();
        for case in &cases {
            match evaluate(predicate, case, &cache)? {
                CaseOutcome::Skipped => {}
                CaseOutcome::Holds => section.cases += 1,
                CaseOutcome::Fails(detail) => {
                    section.cases += 1;
                    section.failures.push(LabFailure {
                        case_id: case.to_string(),
                        detail,
                        replay: replay_command(predicate, case),
                    });
                }
            }
        }
        sections.push(section);
    }
    let mut it = sections.into_iter();
    let mut next = || it.next().expect("four sections");
    Ok(LabReport {
        predicate,
        h1_unitization: next(),
        h2_direct_sum: next(),
        h3_finite_codim: next(),
        conclusion_lau: next(),
    })
}
