use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use qphase::model::{enumerate_qstructures, random_qstructure, RandomModelConfig};
use qphase::proof::{
    check_proof, search, soundness_harness, CalculusMode, HarnessConfig, ModelPolicy, RuleTag,
    SearchConfig,
};
use qphase::syntax::{falsify, parse_formula, parse_sequent, sequent_valid, FalsifyConfig,
    FalsifyOutcome};
use qphase::{QSubspace, QStructure, QVector};
use qphase_cli::formats::{
    resolve_assignment, AssignmentFile, CountermodelFile, ModelFile, ProofFile,
};

/// Workbench for finite phase-style models of a non-commutative,
/// non-associative variant of linear logic, with an exact rational
/// subspace engine and a sequent proof kernel.
#[derive(Parser)]
#[command(name = "qphase", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file against the structure axioms
    Validate {
        /// Model file (JSON)
        model: PathBuf,
    },
    /// List every fact of a model, flagged
    Facts { model: PathBuf },
    /// Evaluate a formula to a fact
    Eval {
        model: PathBuf,
        /// Assignment file mapping atoms to element lists
        assignment: PathBuf,
        /// Formula text, e.g. "~(a * b)"
        formula: String,
    },
    /// Decide validity of a sequent in a model under an assignment
    Check {
        model: PathBuf,
        assignment: PathBuf,
        /// Sequent text, e.g. "a, b |- c"
        sequent: String,
    },
    /// Search for a proof of a sequent
    Prove {
        sequent: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value = "plain")]
        mode: CalculusMode,
        /// Allow cut, with cut formulas drawn from the goal's subformulas
        #[arg(long)]
        allow_cut: bool,
        /// Write the proof file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a proof file
    CheckProof {
        proof: PathBuf,
        #[arg(long, default_value = "plain")]
        mode: CalculusMode,
    },
    /// Search for a countermodel to a sequent
    Falsify {
        sequent: String,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// Write the countermodel file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random soundness trials for one rule
    Harness {
        #[arg(long)]
        rule: RuleTag,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "plain")]
        mode: CalculusMode,
        /// Model sampling policy: auto, projective or unconstrained
        #[arg(long, default_value = "auto")]
        models: ModelPolicy,
    },
    /// Exact rational subspace operations
    Baby {
        #[command(subcommand)]
        op: BabyOp,
    },
    /// Enumerate every structure of a given size
    Enumerate {
        #[arg(long)]
        size: usize,
        /// Print the first N structures instead of only the count
        #[arg(long, default_value_t = 0)]
        show: usize,
    },
    /// Sample a random structure and print it as a model file
    RandomModel {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        projective: bool,
        #[arg(long)]
        allow_unit_garbage: bool,
    },
}

#[derive(Subcommand)]
enum BabyOp {
    /// Project subspace A onto subspace B
    Project {
        /// Subspace as semicolon-separated vectors, e.g. "1,0;0,1"
        a: String,
        b: String,
        #[arg(long)]
        dim: usize,
    },
    /// Orthogonal complement of a subspace
    Complement {
        a: String,
        #[arg(long)]
        dim: usize,
    },
    /// Randomized checks of the two projection-orthogonality laws
    TestLemma1 {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    // die quietly when the consumer of a pipe goes away, like cat does
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

const OK: ExitCode = ExitCode::SUCCESS;
const SEMANTIC_FAILURE: ExitCode = ExitCode::FAILURE;

fn read_model_file(path: &Path) -> Result<ModelFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Loads and builds a model; axiom violations are input errors here.
/// `validate` handles violations itself and reports them at exit 1.
fn load_valid_model(path: &Path) -> Result<QStructure> {
    let q = read_model_file(path)?.build()?;
    let report = q.validate();
    if !report.is_valid() {
        return Err(anyhow!(
            "model {} violates the structure axioms:\n{}",
            path.display(),
            format_report(&q, &report)
        ));
    }
    Ok(q)
}

fn load_assignment_file(path: &Path) -> Result<AssignmentFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn format_report(q: &QStructure, report: &qphase::ValidationReport) -> String {
    use qphase::Violation;
    let mut out = String::new();
    for v in &report.violations {
        let line = match *v {
            Violation::UnitNotNeutral { x, left } => {
                let (l, r) = if left { ("unit", q.label(x)) } else { (q.label(x), "unit") };
                format!("unit-neutrality broken at ({l},{r})")
            }
            Violation::SymmetryBroken { x, y } => {
                format!("symmetry broken at ({},{})", q.label(x), q.label(y))
            }
            Violation::ReversalBroken { x, y, z } => format!(
                "reversal broken at ({},{},{})",
                q.label(x),
                q.label(y),
                q.label(z)
            ),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_subspace(text: &str, dim: usize) -> Result<QSubspace> {
    let vectors: Vec<QVector> = qphase::parse_vector_list(text).map_err(|e| anyhow!("{e}"))?;
    QSubspace::span(dim, &vectors).map_err(|e| anyhow!("{e}"))
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Validate { model } => {
            let q = read_model_file(&model)?.build()?;
            let report = q.validate();
            if report.is_valid() {
                println!("valid ({} elements, garbage {})", q.size(), q.format_set(q.garbage()));
                if q.is_projective() {
                    println!("projective: garbage absorbs under composition");
                }
                let gap = q.garbage_not_generated();
                if !gap.is_empty() {
                    println!(
                        "note: garbage elements not generated by any orthogonal pair: {}",
                        q.format_set(gap)
                    );
                }
                Ok(OK)
            } else {
                print!("{}", format_report(&q, &report));
                println!("{} violation(s)", report.violations.len());
                Ok(SEMANTIC_FAILURE)
            }
        }
        Command::Facts { model } => {
            let q = load_valid_model(&model)?;
            let facts = q.all_facts();
            println!("{} fact(s)", facts.len());
            let one = q.one_fact().set();
            let zero = q.zero_fact().set();
            let z = q.z_fact().set();
            for (i, f) in facts.iter().enumerate() {
                let mut flags = Vec::new();
                if f.set() == q.carrier() {
                    flags.push("TOP");
                }
                if f.set() == one {
                    flags.push("ONE");
                }
                if f.set() == zero {
                    flags.push("ZERO");
                }
                if f.set() == z {
                    flags.push("Z");
                }
                if f.contains(q.unit()) {
                    flags.push("VALID");
                }
                if flags.is_empty() {
                    println!("F{i:<3} {}", q.format_set(f.set()));
                } else {
                    println!("F{i:<3} {} {}", q.format_set(f.set()), flags.join(" "));
                }
            }
            Ok(OK)
        }
        Command::Eval {
            model,
            assignment,
            formula,
        } => {
            let q = load_valid_model(&model)?;
            let asg = resolve_assignment(&q, &load_assignment_file(&assignment)?)?;
            let f = parse_formula(&formula).map_err(|e| anyhow!("{e}"))?;
            let fact = asg.eval(&f).map_err(|e| anyhow!("{e}"))?;
            println!("{fact}");
            Ok(OK)
        }
        Command::Check {
            model,
            assignment,
            sequent,
        } => {
            let q = load_valid_model(&model)?;
            let asg = resolve_assignment(&q, &load_assignment_file(&assignment)?)?;
            let s = parse_sequent(&sequent).map_err(|e| anyhow!("{e}"))?;
            if sequent_valid(&asg, &s).map_err(|e| anyhow!("{e}"))? {
                println!("valid");
                Ok(OK)
            } else {
                println!("invalid");
                Ok(SEMANTIC_FAILURE)
            }
        }
        Command::Prove {
            sequent,
            depth,
            mode,
            allow_cut,
            out,
        } => {
            let s = parse_sequent(&sequent).map_err(|e| anyhow!("{e}"))?;
            let cfg = SearchConfig::new(depth, mode).allow_cut(allow_cut);
            match search(&s, &cfg) {
                Some(tree) => {
                    check_proof(&tree, mode).expect("searched proofs re-check");
                    let file = ProofFile::from_tree(&tree);
                    write_or_print(out.as_deref(), &serde_json::to_string_pretty(&file)?)?;
                    Ok(OK)
                }
                None => {
                    eprintln!("not found within depth {depth} ({mode} mode); not a disproof");
                    Ok(SEMANTIC_FAILURE)
                }
            }
        }
        Command::CheckProof { proof, mode } => {
            let text = fs::read_to_string(&proof)
                .with_context(|| format!("reading {}", proof.display()))?;
            let file: ProofFile = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", proof.display()))?;
            let tree = file.to_tree()?;
            match check_proof(&tree, mode) {
                Ok(()) => {
                    println!("ok: {} node(s), concludes {}", tree.node_count(), tree.conclusion);
                    Ok(OK)
                }
                Err(e) => {
                    println!("rejected: {e}");
                    Ok(SEMANTIC_FAILURE)
                }
            }
        }
        Command::Falsify {
            sequent,
            max_size,
            seed,
            budget,
            out,
        } => {
            let s = parse_sequent(&sequent).map_err(|e| anyhow!("{e}"))?;
            match falsify(&s, &FalsifyConfig::new(max_size, seed, budget)) {
                FalsifyOutcome::Countermodel(cm) => {
                    eprintln!(
                        "countermodel found at probe {} (size {})",
                        cm.probe,
                        cm.structure.size()
                    );
                    let file = CountermodelFile::new(&s, &cm);
                    write_or_print(out.as_deref(), &serde_json::to_string_pretty(&file)?)?;
                    Ok(OK)
                }
                FalsifyOutcome::Inconclusive { probes } => {
                    println!("inconclusive after {probes} probe(s); not a validity proof");
                    Ok(SEMANTIC_FAILURE)
                }
            }
        }
        Command::Harness {
            rule,
            trials,
            seed,
            mode,
            models,
        } => {
            let cfg = HarnessConfig::new(trials, mode, seed).models(models);
            let report = soundness_harness(rule, &cfg);
            print!("{report}");
            Ok(if report.is_clean() { OK } else { SEMANTIC_FAILURE })
        }
        Command::Baby { op } => run_baby(op),
        Command::Enumerate { size, show } => {
            let mut count = 0u64;
            for q in enumerate_qstructures(size).map_err(|e| anyhow!("{e}"))? {
                if count < show as u64 {
                    println!("# structure {count}");
                    print!("{q}");
                }
                count += 1;
            }
            println!("size {size}: {count} valid structure(s)");
            Ok(OK)
        }
        Command::RandomModel {
            size,
            seed,
            projective,
            allow_unit_garbage,
        } => {
            let cfg = RandomModelConfig::new(size)
                .projective(projective)
                .allow_unit_garbage(allow_unit_garbage);
            let sampled = random_qstructure(&cfg, seed).map_err(|e| anyhow!("{e}"))?;
            eprintln!("found after {} attempt(s)", sampled.attempts);
            let file = ModelFile::from_structure(
                Some(format!("random-{size}-{seed}")),
                &sampled.structure,
            );
            println!("{}", serde_json::to_string_pretty(&file)?);
            Ok(OK)
        }
    }
}

fn run_baby(op: BabyOp) -> Result<ExitCode> {
    match op {
        BabyOp::Project { a, b, dim } => {
            let a = parse_subspace(&a, dim)?;
            let b = parse_subspace(&b, dim)?;
            println!("{}", a.project_onto(&b));
            Ok(OK)
        }
        BabyOp::Complement { a, dim } => {
            let a = parse_subspace(&a, dim)?;
            println!("{}", a.ortho_complement());
            Ok(OK)
        }
        BabyOp::TestLemma1 { dim, trials, seed } => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut passes = 0u64;
            for _ in 0..trials {
                let a = qphase::linalg::random_subspace(dim, &mut rng);
                let b = qphase::linalg::random_subspace(dim, &mut rng);
                let c = qphase::linalg::random_subspace(dim, &mut rng);
                let symmetric =
                    a.project_onto(&b).is_zero() == b.project_onto(&a).is_zero();
                let reversal = a.project_onto(&b).project_onto(&c).is_zero()
                    == a.project_onto(&c.project_onto(&b)).is_zero();
                if symmetric && reversal {
                    passes += 1;
                }
            }
            println!("{passes}/{trials} pass");
            Ok(if passes == trials { OK } else { SEMANTIC_FAILURE })
        }
    }
}
