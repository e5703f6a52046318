//! Command-line surface over the variety-dimension library. Every verb
//! is a thin adapter: parsing, dispatch and formatting here, all
//! mathematics in the library.
//!
//! Exit codes: 0 success, 1 mathematically negative answer (an identity
//! that fails, a hyperassociativity check that fails), 2 usage or
//! backend errors.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use vardim::band::{self, FastVariety, Word};
use vardim::hypersub::Hypersubstitution;
use vardim::lattice::{
    self, axiom_report, builtin_model, distributivity_axiom, enumerate_binary_lattice_terms,
    fluidity_certificate, named_lattice_axioms, LatticeModel, SigmaVerdict,
};
use vardim::registry::{self, DerivedTarget, Registry};
use vardim::term::{parse_identity, print_term, var_name, Signature};

#[derive(Parser)]
#[command(
    name = "vardim",
    version,
    about = "Band and lattice variety calculator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for table sweeps (results are deterministic).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Cap on free-algebra generators / identity variables (default 3).
    #[arg(long, global = true)]
    cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form of a word in a band variety.
    Normalize {
        #[arg(long, default_value = "B")]
        variety: String,
        word: String,
    },
    /// Does an identity hold in a band variety? Exit 1 when it fails.
    Check {
        #[arg(long)]
        variety: String,
        identity: String,
    },
    /// Apply a hypersubstitution to both sides of an identity.
    DeriveIdentity {
        #[arg(long)]
        sigma: String,
        identity: String,
    },
    /// Identify the derived variety of a registry variety.
    DerivedVariety {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        sigma: String,
    },
    /// All derived varieties of a registry variety.
    DerivedSet {
        #[arg(long)]
        variety: String,
    },
    /// Dimension of a registry variety, with the per-class report.
    Dimension {
        #[arg(long)]
        variety: String,
    },
    /// Dimension table over the thirteen subvarieties of RegB.
    DimensionTable,
    /// Solid/fluid/prefluid/minimal flags of a registry variety.
    Classify {
        #[arg(long)]
        variety: String,
    },
    /// The relatively free algebra of a variety.
    FreeAlgebra {
        #[arg(long)]
        gens: usize,
        #[arg(long, default_value = "B")]
        variety: String,
        /// Print only the cardinality.
        #[arg(long)]
        count: bool,
    },
    /// Do all six derived associativity identities hold? Exit 1 if not.
    Hyperassoc {
        #[arg(long)]
        variety: String,
    },
    /// Check a lattice identity: in the free lattice, or in a model.
    LatticeCheck {
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        identity: String,
    },
    /// Equivalence classes of binary lattice terms up to a depth.
    LatticeEnumerate {
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Derive a lattice model by a hypersubstitution and report the
    /// lattice axioms on the result.
    LatticeDerive {
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        sigma: String,
    },
    /// Fluidity certificate for HSP(models) = Mod(axioms).
    FluidityCert {
        /// Builtin model names or JSON files, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        models: Vec<String>,
        /// Add the distributivity axiom to the certificate.
        #[arg(long)]
        distributive: bool,
        /// Additional axioms in lattice syntax (repeatable).
        #[arg(long)]
        axiom: Vec<String>,
    },
    /// DOT digraph of the variety lattice with derived-variety arrows.
    LatticeDot,
}

fn main() -> ExitCode {
    // die silently on closed pipes, like other unix filters
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(negative) => {
            if negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn registry_for(cli: &Cli) -> vardim::Result<&'static Registry> {
    match cli.cap {
        None => Ok(registry::shared()),
        Some(cap) => Ok(Box::leak(Box::new(Registry::with_cap(cap)?))),
    }
}

/// Returns whether the answer was mathematically negative.
fn run(cli: &Cli) -> vardim::Result<bool> {
    match &cli.command {
        Command::Normalize { variety, word } => {
            let w = Word::parse(word)?;
            if variety == "B" {
                println!("{}", shortest_band_form(cli, &w)?);
            } else {
                let fast = FastVariety::from_name(variety)
                    .ok_or_else(|| vardim::Error::UnknownVariety(variety.clone()))?;
                println!("{}", band::fast_normalize(fast, &w));
            }
            Ok(false)
        }
        Command::Check { variety, identity } => {
            let reg = registry_for(cli)?;
            let v = reg.get(variety)?;
            let e = parse_identity(identity, &Signature::band())?;
            match v.holds_with_witness(&e)? {
                None => {
                    if cli.json {
                        println!("{}", serde_json::json!({ "holds": true }));
                    } else {
                        println!("true");
                    }
                    Ok(false)
                }
                Some(failure) => {
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "holds": false,
                                "witness": witness_json(&failure),
                            })
                        );
                    } else {
                        println!("false");
                        print_witness(&failure);
                    }
                    Ok(true)
                }
            }
        }
        Command::DeriveIdentity { sigma, identity } => {
            let (sig, s) = parse_sigma_any(sigma)?;
            let e = parse_identity(identity, &sig)?;
            let derived = s.derive_identity(&e);
            if sig == Signature::band() {
                let (u, v) = band::flatten_identity(&derived)?;
                println!("{u} = {v}");
            } else {
                println!("{}", derived.display(&sig));
            }
            Ok(false)
        }
        Command::DerivedVariety { variety, sigma } => {
            let reg = registry_for(cli)?;
            let v = reg.get(variety)?;
            let s = Hypersubstitution::parse(sigma, &Signature::band())?;
            match reg.derived_variety(v, &s)? {
                DerivedTarget::Registry(w) => {
                    if cli.json {
                        println!("{}", serde_json::json!({ "target": w.name() }));
                    } else {
                        println!("{}", w.name());
                    }
                }
                DerivedTarget::Outside {
                    derived_identity,
                    failure,
                } => {
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "target": null,
                                "failed_identity": derived_identity
                                    .display(&Signature::band())
                                    .to_string(),
                                "lhs": failure.lhs_value.to_string(),
                                "rhs": failure.rhs_value.to_string(),
                            })
                        );
                    } else {
                        println!(
                            "outside registry: derived identity {} fails ({} vs {})",
                            derived_identity.display(&Signature::band()),
                            failure.lhs_value,
                            failure.rhs_value
                        );
                    }
                }
            }
            Ok(false)
        }
        Command::DerivedSet { variety } => {
            let reg = registry_for(cli)?;
            let v = reg.get(variety)?;
            let set = reg.derived_set(v)?;
            if cli.json {
                println!("{}", serde_json::to_string(&set).unwrap());
            } else {
                println!("{{{}}}", set.join(", "));
            }
            Ok(false)
        }
        Command::Dimension { variety } => {
            let reg = registry_for(cli)?;
            let report = reg.dimension(reg.get(variety)?)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("{}", report.dimension);
                println!(
                    "  {} classes checked (one per hypersubstitution class modulo {})",
                    report.entries.len(),
                    report.variety
                );
                for e in &report.entries {
                    println!(
                        "  {} ({}) -> {}{}{}",
                        e.sigma,
                        e.image,
                        e.target.as_deref().unwrap_or("outside registry"),
                        if e.proper { ", proper" } else { "" },
                        if e.included { ", included" } else { "" },
                    );
                }
                if !report.complete {
                    println!("  (some classes leave the registry; see notes via --json)");
                }
            }
            Ok(false)
        }
        Command::DimensionTable => {
            let reg = registry_for(cli)?;
            warm_reports(reg, cli.threads);
            let table = reg.dimension_table()?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&table).unwrap());
            } else {
                println!(
                    "{:<8} {:>3} {:<30} {:<6} {:<6} {:<9} {:<7}",
                    "variety", "dim", "derived set", "solid", "fluid", "prefluid", "minimal"
                );
                for row in &table.varieties {
                    println!(
                        "{:<8} {:>3} {:<30} {:<6} {:<6} {:<9} {:<7}",
                        row.variety,
                        row.dimension,
                        format!("{{{}}}", row.derived_set.join(", ")),
                        row.solid,
                        row.fluid,
                        row.prefluid,
                        row.minimal
                    );
                }
            }
            Ok(false)
        }
        Command::Classify { variety } => {
            let reg = registry_for(cli)?;
            let class = reg.classify(reg.get(variety)?)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&class).unwrap());
            } else {
                println!(
                    "{}: dimension {}, solid={}, fluid={}, prefluid={}, minimal={} (within the registry)",
                    class.variety,
                    class.dimension,
                    class.solid,
                    class.fluid,
                    class.prefluid,
                    class.minimal
                );
            }
            Ok(false)
        }
        Command::FreeAlgebra {
            gens,
            variety,
            count,
        } => {
            let reg = registry_for(cli)?;
            let free = reg.get(variety)?.free_algebra(*gens)?;
            if *count {
                println!("{}", free.size());
            } else if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&free.algebra.to_json()).unwrap()
                );
            } else {
                println!("size {}", free.size());
                let labels: Vec<String> = free.words.iter().map(Word::to_string).collect();
                println!("elements: {}", labels.join(", "));
                for (i, a) in labels.iter().enumerate() {
                    for (j, b) in labels.iter().enumerate() {
                        let p = free.mul(i, j);
                        println!("  {a} * {b} = {}", labels[p]);
                    }
                }
            }
            Ok(false)
        }
        Command::Hyperassoc { variety } => {
            let reg = registry_for(cli)?;
            let report = reg.hyperassociativity_check(reg.get(variety)?)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("{}", report.hyperassociative);
                for f in &report.failures {
                    println!(
                        "  {} fails: {} = {} ({} vs {})",
                        f.sigma, f.lhs, f.rhs, f.lhs_value, f.rhs_value
                    );
                }
            }
            Ok(!report.hyperassociative)
        }
        Command::LatticeCheck {
            model,
            file,
            identity,
        } => {
            let e = parse_identity(identity, &Signature::lattice())?;
            match load_model(model.as_deref(), file.as_deref())? {
                None => {
                    let equal = lattice::free_lattice_equal(&e.lhs, &e.rhs)?;
                    println!("{equal}");
                    Ok(!equal)
                }
                Some(m) => match m.algebra().satisfies_with_witness(&e) {
                    None => {
                        println!("true");
                        Ok(false)
                    }
                    Some(env) => {
                        println!("false");
                        println!("  witness: {}", env_string(&env));
                        Ok(true)
                    }
                },
            }
        }
        Command::LatticeEnumerate { depth } => {
            let classes = enumerate_binary_lattice_terms(*depth)?;
            println!("{}", classes.len());
            for c in &classes {
                println!("  {}", print_term(c, &Signature::lattice()));
            }
            Ok(false)
        }
        Command::LatticeDerive { model, file, sigma } => {
            let m = load_model(model.as_deref(), file.as_deref())?.ok_or_else(|| {
                vardim::Error::UnknownVariety("lattice-derive needs --model or --file".into())
            })?;
            let s = Hypersubstitution::parse(sigma, &Signature::lattice())?;
            let derived = m.algebra().derived_algebra(&s)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&derived.to_json()).unwrap()
                );
            } else {
                println!("{}", derived.to_json());
            }
            let mut any_failed = false;
            for check in axiom_report(&derived)? {
                match check.witness {
                    None => println!("  {}: pass", check.name),
                    Some(env) => {
                        any_failed = true;
                        println!("  {}: FAIL at {}", check.name, env_string(&env));
                    }
                }
            }
            Ok(any_failed)
        }
        Command::FluidityCert {
            models,
            distributive,
            axiom,
        } => {
            let mut gens = Vec::new();
            for spec in models {
                gens.push(load_model_spec(spec)?);
            }
            let mut axioms = named_lattice_axioms();
            if *distributive {
                axioms.push(("distributivity".into(), distributivity_axiom()));
            }
            for text in axiom {
                axioms.push((text.clone(), parse_identity(text, &Signature::lattice())?));
            }
            let iso_cap = cli.cap.unwrap_or(64).max(64);
            let report = fluidity_certificate(&gens, &axioms, iso_cap)?;
            println!("dimension {}", report.dimension);
            let sig = Signature::lattice();
            for entry in &report.entries {
                let sigma = format!(
                    "join:={}, meet:={}",
                    print_term(&entry.sigma.0, &sig),
                    print_term(&entry.sigma.1, &sig)
                );
                match &entry.verdict {
                    SigmaVerdict::EqualsVariety => println!("  [{sigma}] equals the variety"),
                    SigmaVerdict::DualSelfdual => {
                        println!("  [{sigma}] dual variety; selfdual, equal to the variety")
                    }
                    SigmaVerdict::DualUnresolved => {
                        println!("  [{sigma}] dual variety; inclusion not established")
                    }
                    SigmaVerdict::NotIncluded {
                        generator,
                        axiom_name,
                        witness,
                    } => println!(
                        "  [{sigma}] not included: {axiom_name} fails in derived {generator} at {}",
                        env_string(witness)
                    ),
                    SigmaVerdict::IncludedProper => {
                        println!("  [{sigma}] proper and included")
                    }
                }
            }
            Ok(false)
        }
        Command::LatticeDot => {
            let reg = registry_for(cli)?;
            warm_reports(reg, cli.threads);
            print!("{}", reg.dot()?);
            Ok(false)
        }
    }
}

/// Shortest-then-lexicographic representative of a word in the free
/// band, through the free band on its content.
fn shortest_band_form(cli: &Cli, w: &Word) -> vardim::Result<String> {
    let reg = registry_for(cli)?;
    let b = reg.get("B")?;
    let content = w.content();
    let free = b.free_algebra(content.len())?;
    // sorted relabelling preserves lexicographic order both ways
    let relabeled = Word::new(
        w.letters()
            .iter()
            .map(|l| content.iter().position(|c| c == l).unwrap())
            .collect(),
    )?;
    let element = free.element_of_word(&relabeled)?;
    Ok(free.words[element]
        .letters()
        .iter()
        .map(|&i| var_name(content[i]))
        .collect())
}

/// Computes the per-variety reports ahead of table assembly, optionally
/// in parallel; reports are cached, so assembly stays deterministic.
fn warm_reports(reg: &'static Registry, threads: usize) {
    if threads <= 1 {
        return;
    }
    let varieties: Vec<_> = reg.sublattice().collect();
    std::thread::scope(|scope| {
        for chunk in varieties.chunks(varieties.len().div_ceil(threads)) {
            scope.spawn(move || {
                for v in chunk {
                    let _ = reg.derivation_report(v);
                }
            });
        }
    });
}

/// Hypersubstitution literal over whichever builtin signature accepts
/// it: band names and `mul:=`, or lattice `join:=.../meet:=...`.
fn parse_sigma_any(lit: &str) -> vardim::Result<(Signature, Hypersubstitution)> {
    let band_sig = Signature::band();
    match Hypersubstitution::parse(lit, &band_sig) {
        Ok(s) => Ok((band_sig, s)),
        Err(band_err) => {
            let lattice_sig = Signature::lattice();
            match Hypersubstitution::parse(lit, &lattice_sig) {
                Ok(s) => Ok((lattice_sig, s)),
                Err(_) => Err(band_err),
            }
        }
    }
}

fn load_model(
    name: Option<&str>,
    file: Option<&std::path::Path>,
) -> vardim::Result<Option<LatticeModel>> {
    match (name, file) {
        (Some(n), _) => Ok(Some(builtin_model(n)?)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| vardim::Error::AlgebraFormat(format!("{}: {e}", path.display())))?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "model".into());
            Ok(Some(LatticeModel::from_json(name, &text)?))
        }
        (None, None) => Ok(None),
    }
}

/// A model spec for `--models`: a builtin name, or a path to a JSON
/// file when it names an existing file.
fn load_model_spec(spec: &str) -> vardim::Result<LatticeModel> {
    if std::path::Path::new(spec).exists() {
        load_model(None, Some(std::path::Path::new(spec))).map(Option::unwrap)
    } else {
        builtin_model(spec)
    }
}

fn env_string(env: &[(usize, usize)]) -> String {
    env.iter()
        .map(|(var, e)| format!("{}:{e}", var_name(*var)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn print_witness(failure: &band::HoldsFailure) {
    let env: Vec<String> = failure
        .env
        .iter()
        .map(|(var, w)| format!("{}:{w}", var_name(*var)))
        .collect();
    println!(
        "  witness: {} gives {} vs {}",
        env.join(", "),
        failure.lhs_value,
        failure.rhs_value
    );
}

fn witness_json(failure: &band::HoldsFailure) -> serde_json::Value {
    serde_json::json!({
        "env": failure
            .env
            .iter()
            .map(|(var, w)| (var_name(*var), w.to_string()))
            .collect::<std::collections::BTreeMap<_, _>>(),
        "lhs": failure.lhs_value.to_string(),
        "rhs": failure.rhs_value.to_string(),
    })
}
