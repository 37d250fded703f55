use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use lauprod::algebra::{is_associative, Algebra};
use lauprod::analysis::{fingerprint, norm_report};
use lauprod::construct::{
    collapse, direct_sum, generalized_lau_product, lau_product, unitization, unitization_embedding,
    ConstructionError,
};
use lauprod::corpus::{
    catalog_characters, catalog_homomorphism, CatalogSpec, CorpusError, HomSpec,
};
use lauprod::format::{parse_algebra_file, parse_map_file, serialize_algebra, FileError};
use lauprod::lab::{pairs_over, run_case, run_lab, shipped_corpus, CaseOutcome, LabError};
use lauprod::morphism::{
    is_homomorphism, subspace_report, verify_isomorphism, LinearMap, MorphismError,
};

/// Exact finite-dimensional algebra constructions and checks.
///
/// Algebra arguments are catalog specs (`zero:N`, `pointwise:N`, `poly:N`,
/// `matrix:N`, `cyclic:N`) or paths to algebra files. Map arguments are
/// paths to map files or, between catalog algebras, strategy strings
/// (`zero`, `unital:N`, `inclusion`, `projection`, chains like
/// `projection>[pointwise:2]>inclusion`; for characters `char:N`).
///
/// Exit status: 0 all checks passed, 1 a mathematical check failed,
/// 2 bad input or usage.
#[derive(Parser)]
#[command(name = "lauprod", version)]
struct Cli {
    /// Accept non-associative tables in algebra files.
    #[arg(long, global = true)]
    unchecked: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the fingerprint and associativity verdict of an algebra.
    Describe { algebra: String },
    /// Build an algebra and write it as an algebra file.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Build A ×_T B and check that φ(a, b) = (a + T(b), b) is an isomorphism onto A ⊕ B.
    Collapse {
        a: String,
        b: String,
        /// Homomorphism T: B -> A.
        #[arg(long)]
        hom: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check that a map A -> B is an algebra isomorphism.
    VerifyIso {
        a: String,
        b: String,
        #[arg(long)]
        map: String,
    },
    /// Check the embedding ψ: A ×_χ B -> A♯ ⊕ B and report on its image.
    Embed {
        a: String,
        b: String,
        /// Character χ: B -> C.
        #[arg(long = "char")]
        character: String,
    },
    /// Check submultiplicativity of the renormed l1 norm.
    NormCheck {
        algebra: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Test whether a predicate survives the Lau product on the shipped corpus.
    Lab {
        /// unital, commutative or semisimple
        #[arg(long)]
        predicate: String,
        /// Re-evaluate a single case by id.
        #[arg(long)]
        case: Option<String>,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// A ⊕ B
    Dsum {
        a: String,
        b: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A♯
    Unitize {
        a: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A ×_χ B
    Lau {
        a: String,
        b: String,
        #[arg(long = "char")]
        character: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A ×_T B
    GenLau {
        a: String,
        b: String,
        #[arg(long)]
        hom: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    /// A mathematical check failed; the message carries the witness.
    Check(String),
    Input(String),
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        match e {
            FileError::NonAssociative(_) => Failure::Check(format!("[{}] {e}", e.code())),
            _ => Failure::Input(format!("[{}] {e}", e.code())),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::NotAHomomorphism(_) | ConstructionError::NotACharacter(_) => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Input(e.to_string())
            }
        }
    )*};
}
input_error!(CorpusError, MorphismError, LabError);

/// A resolved algebra argument, remembering its catalog spec when it has one.
struct Operand {
    algebra: Arc<Algebra>,
    spec: Option<CatalogSpec>,
}

fn load_algebra(arg: &str, unchecked: bool) -> Result<Operand, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let algebra = Arc::new(parse_algebra_file(path, unchecked)?);
        return Ok(Operand {
            algebra,
            spec: None,
        });
    }
    match arg.parse::<CatalogSpec>() {
        Ok(spec) => Ok(Operand {
            algebra: spec.algebra()?,
            spec: Some(spec),
        }),
        Err(e) => Err(Failure::Input(format!(
            "`{arg}` is neither a file nor a catalog spec ({e})"
        ))),
    }
}

/// Homomorphism `source -> target` from a map file or a catalog strategy.
fn load_hom(arg: &str, source: &Operand, target: &Operand) -> Result<LinearMap, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(parse_map_file(path, &source.algebra, &target.algebra)?);
    }
    match (source.spec, target.spec) {
        (Some(s), Some(t)) => Ok(catalog_homomorphism(&HomSpec::parse(arg, s, t)?)?),
        _ => Err(Failure::Input(format!(
            "`{arg}` is not a file, and strategy strings need catalog algebras on both ends"
        ))),
    }
}

/// Character `b -> C` from a map file or `char:N` (or just `N`).
fn load_character(arg: &str, b: &Operand) -> Result<LinearMap, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(parse_map_file(
            path,
            &b.algebra,
            &Arc::new(Algebra::complex_field()),
        )?);
    }
    let index: usize = arg
        .strip_prefix("char:")
        .unwrap_or(arg)
        .parse()
        .map_err(|_| Failure::Input(format!("`{arg}` is neither a file nor `char:N`")))?;
    let spec = b
        .spec
        .ok_or_else(|| Failure::Input("`char:N` needs a catalog algebra B".into()))?;
    catalog_characters(&spec)?
        .into_iter()
        .nth(index)
        .ok_or_else(|| {
            Failure::Input(
                CorpusError::NoSuchCharacter {
                    spec: spec.to_string(),
                    index,
                }
                .to_string(),
            )
        })
}

fn emit(algebra: &Algebra, output: Option<&Path>) -> Result<(), Failure> {
    let text = serialize_algebra(algebra);
    match output {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Input(format!("cannot write `{}`: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict(ok: bool) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check("check failed".into()))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let load = |arg: &str| load_algebra(arg, cli.unchecked);
    match cli.command {
        Command::Describe { algebra } => {
            let op = load(&algebra)?;
            let a = &op.algebra;
            println!("name: {}", a.name());
            println!("basis: {}", a.labels().join(" "));
            let assoc = is_associative(a);
            match &assoc.witness {
                None => println!("associative: true ({} triples)", assoc.triples_checked),
                Some(w) => {
                    println!("associative: false, {w}");
                    return Err(Failure::Check("not associative".into()));
                }
            }
            let f = fingerprint(a);
            println!("dim: {}", f.dim);
            println!("unital: {}", f.unital);
            println!("commutative: {}", f.commutative);
            println!("center_dim: {}", f.center_dim);
            println!("radical_dim: {}", f.radical_dim);
            Ok(())
        }
        Command::Construct { kind } => match kind {
            ConstructKind::Dsum { a, b, output } => {
                let (a, b) = (load(&a)?, load(&b)?);
                emit(&*direct_sum(&a.algebra, &b.algebra)?, output.as_deref())
            }
            ConstructKind::Unitize { a, output } => {
                let a = load(&a)?;
                emit(&unitization(&a.algebra)?.0, output.as_deref())
            }
            ConstructKind::Lau {
                a,
                b,
                character,
                output,
            } => {
                let (a, b) = (load(&a)?, load(&b)?);
                let chi = load_character(&character, &b)?;
                emit(
                    &*lau_product(&a.algebra, &b.algebra, &chi)?,
                    output.as_deref(),
                )
            }
            ConstructKind::GenLau { a, b, hom, output } => {
                let (a, b) = (load(&a)?, load(&b)?);
                let t = load_hom(&hom, &b, &a)?;
                emit(
                    &*generalized_lau_product(&a.algebra, &b.algebra, &t)?,
                    output.as_deref(),
                )
            }
        },
        Command::Collapse {
            a,
            b,
            hom,
            samples,
            seed,
        } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let t = load_hom(&hom, &b, &a)?;
            let report = collapse(&a.algebra, &b.algebra, &t, samples, seed)?;
            println!("{report}");
            verdict(report.passed())
        }
        Command::VerifyIso { a, b, map } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let m = load_hom(&map, &a, &b)?;
            let report = verify_isomorphism(&m);
            println!("{report}");
            verdict(report.passed())
        }
        Command::Embed { a, b, character } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let chi = load_character(&character, &b)?;
            let psi = unitization_embedding(&a.algebra, &b.algebra, &chi)?;
            println!("psi: {} -> {}", psi.domain().name(), psi.codomain().name());
            let hom = is_homomorphism(&psi);
            println!("{hom}");
            let report = subspace_report(&psi.image());
            println!("{report}");
            verdict(hom.passed() && report.codimension == 1 && report.is_subalgebra)
        }
        Command::NormCheck {
            algebra,
            samples,
            seed,
        } => {
            let a = load(&algebra)?;
            let report = norm_report(&a.algebra, samples, seed);
            println!("{report}");
            verdict(report.passed())
        }
        Command::Lab { predicate, case } => match case {
            Some(id) => {
                let outcome = run_case(&predicate, &id)?;
                match &outcome {
                    CaseOutcome::Skipped => {
                        println!("{id}: hypothesis does not hold, nothing to test")
                    }
                    CaseOutcome::Holds => println!("{id}: holds"),
                    CaseOutcome::Fails(detail) => println!("{id}: FAIL {detail}"),
                }
                verdict(!matches!(outcome, CaseOutcome::Fails(_)))
            }
            None => {
                let corpus = shipped_corpus();
                let report = run_lab(&predicate, &corpus, &pairs_over(&corpus)?)?;
                println!("{report}");
                verdict(report.failure_count() == 0)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("lauprod: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("lauprod: error: {msg}");
            ExitCode::from(2)
        }
    }
}
