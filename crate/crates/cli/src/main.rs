//! `oikomplex` — construct free OI-modules, decompose their tensor, exterior,
//! and symmetric powers into free summands, build width-wise Koszul and
//! Buchsbaum–Eisenbud complexes, and verify the defining identities by exact
//! rational arithmetic.
//!
//! Exit codes: 0 = success and all requested checks passed; 1 = the
//! construction ran but a check failed; 2 = usage or input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use oikomplex_core::{
    assemble_oi_complex, be_at_width, certify_rank_identity, koszul_at_width,
    mixed_codomain_degrees, strand_homology_dimension, sym_decompose, tensor_decompose,
    verify_family, wedge_decompose, AlgebraSignature, ComplexKind, FreeDecomposition,
    FreeOIModule, ModuleMorphism, OIComplexSpec, PolyMatrix, WidthComplex,
};

/// Widths above this explode combinatorially; refuse them up front.
const MAX_WIDTH: u32 = 12;

#[derive(Parser)]
#[command(
    name = "oikomplex",
    version,
    about = "Exact width-wise complexes over polynomial OI-algebras",
    long_about = "Constructs free modules over polynomial OI-algebras, decomposes their \
                  multilinear powers with explicit free bases, builds width-wise Koszul and \
                  Buchsbaum–Eisenbud complexes, and verifies d∘d = 0, naturality, gradedness, \
                  minimality, and generic exactness — all over exact rationals."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the width-w basis of a free module
    Basis(BasisArgs),
    /// Decompose a tensor product of two free modules into free summands
    Tensor(TensorArgs),
    /// Decompose an exterior power of a free module into free summands
    Wedge(PowerArgs),
    /// Decompose a symmetric power of a free module into free summands
    Sym(PowerArgs),
    /// Certify the binomial rank identity of a decomposition
    Identity(IdentityArgs),
    /// Build the Koszul complex of φ: F → A at one width
    Koszul(KoszulArgs),
    /// Build the Buchsbaum–Eisenbud complex BE^i of φ: F → G at one width
    Be(BeArgs),
    /// Assemble a family of complexes and run every exact check plus homology probes
    Verify(VerifyArgs),
}

#[derive(Args)]
struct BasisArgs {
    /// Algebra signature: factor widths "1,1,1", optional degrees "2:1,3:2"
    #[arg(long)]
    algebra: String,
    /// Generators "width:shift,…" (":shift" optional, e.g. "1:1,2")
    #[arg(long)]
    free: String,
    #[arg(long)]
    width: u32,
}

#[derive(Args)]
struct TensorArgs {
    #[arg(long)]
    algebra: String,
    /// Left factor generators "width:shift,…"
    #[arg(long)]
    left: String,
    /// Right factor generators "width:shift,…"
    #[arg(long)]
    right: String,
    /// Certify the rank identity for widths up to this bound
    #[arg(long, default_value_t = 8)]
    wmax: u32,
    /// Write the decomposition JSON here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PowerArgs {
    #[arg(long)]
    algebra: String,
    #[arg(long)]
    free: String,
    /// The exterior/symmetric power to take
    #[arg(long)]
    power: usize,
    #[arg(long, default_value_t = 8)]
    wmax: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecompKind {
    Tensor,
    Wedge,
    Sym,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long)]
    algebra: String,
    #[arg(long, value_enum)]
    kind: DecompKind,
    /// Module for wedge/sym
    #[arg(long)]
    free: Option<String>,
    /// Left factor for tensor
    #[arg(long)]
    left: Option<String>,
    /// Right factor for tensor
    #[arg(long)]
    right: Option<String>,
    #[arg(long)]
    power: Option<usize>,
    #[arg(long, default_value_t = 10)]
    wmax: u32,
}

#[derive(Args)]
struct KoszulArgs {
    /// Morphism JSON file (domain F, codomain the algebra)
    #[arg(long)]
    phi: PathBuf,
    #[arg(long)]
    width: u32,
    /// Truncate at this exterior degree (default: full, rank F at this width)
    #[arg(long)]
    trunc: Option<usize>,
    /// Print basis labels for every slot
    #[arg(long)]
    labels: bool,
    /// Write the width-complex JSON here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BeArgs {
    /// Morphism JSON file (codomain must be width-0 generated)
    #[arg(long)]
    phi: PathBuf,
    /// The index i of BE^i (0 = generalized Eagon–Northcott)
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long)]
    width: u32,
    #[arg(long)]
    labels: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    Koszul,
    Be,
}

#[derive(Args)]
struct VerifyArgs {
    /// Morphism JSON file
    #[arg(long)]
    phi: PathBuf,
    #[arg(long, value_enum)]
    kind: FamilyKind,
    /// Koszul truncation (default: full, rank F at wmax)
    #[arg(long)]
    trunc: Option<usize>,
    /// BE index i
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Verify widths 0..=wmax
    #[arg(long, default_value_t = 5)]
    wmax: u32,
    /// Random points per width for the homology probe
    #[arg(long, default_value_t = 3)]
    trials: u32,
    /// Seed of the reproducible probe
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also report exact graded strand homology dimensions up to this internal
    /// degree (informational; catches torsion the point probes cannot see)
    #[arg(long)]
    strand_max: Option<i64>,
    /// Write the verification report JSON here
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Basis(a) => cmd_basis(a),
        Command::Tensor(a) => cmd_tensor(a),
        Command::Wedge(a) => cmd_power(a, DecompKind::Wedge),
        Command::Sym(a) => cmd_power(a, DecompKind::Sym),
        Command::Identity(a) => cmd_identity(a),
        Command::Koszul(a) => cmd_koszul(a),
        Command::Be(a) => cmd_be(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn guard_width(w: u32) -> Result<()> {
    if w > MAX_WIDTH {
        bail!("width {w} exceeds the guard (≤ {MAX_WIDTH}); ranks grow like C(w,d) and become unmanageable");
    }
    Ok(())
}

fn parse_algebra(text: &str) -> Result<AlgebraSignature> {
    AlgebraSignature::from_str(text)
        .with_context(|| format!("invalid algebra signature {text:?}"))
}

/// Parses "width:shift,width,…" into a free module over the given algebra.
fn parse_module(sig: &AlgebraSignature, text: &str) -> Result<FreeOIModule> {
    let mut pairs = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            bail!("empty generator entry in {text:?}");
        }
        let (w, a) = match part.split_once(':') {
            Some((w, a)) => (
                w.parse::<u32>().with_context(|| format!("bad generator width in {part:?}"))?,
                a.parse::<i64>().with_context(|| format!("bad generator shift in {part:?}"))?,
            ),
            None => {
                (part.parse::<u32>().with_context(|| format!("bad generator width in {part:?}"))?, 0)
            }
        };
        pairs.push((w, a));
    }
    Ok(FreeOIModule::from_pairs(sig.clone(), &pairs))
}

fn load_morphism(path: &PathBuf) -> Result<ModuleMorphism> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read morphism file {}", path.display()))?;
    let phi = ModuleMorphism::from_json(&text)
        .with_context(|| format!("cannot parse morphism file {}", path.display()))?;
    if let Some(witness) = phi.graded_witness() {
        eprintln!("note: morphism is not a degree-0 graded map: {witness}");
    }
    Ok(phi)
}

fn write_artifact(out: &Option<PathBuf>, content: &str) -> Result<()> {
    if let Some(path) = out {
        fs::write(path, content)
            .with_context(|| format!("cannot write artifact {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

/// `C(w,n)`-sum expression for the rank of a free module, e.g. "C(w,1) + 2*C(w,3)".
fn rank_expr(module: &FreeOIModule) -> String {
    let mut by_width: std::collections::BTreeMap<u32, u64> = std::collections::BTreeMap::new();
    for g in module.generators() {
        *by_width.entry(g.width).or_insert(0) += 1;
    }
    if by_width.is_empty() {
        return "0".into();
    }
    by_width
        .into_iter()
        .map(|(w, m)| if m == 1 { format!("C(w,{w})") } else { format!("{m}*C(w,{w})") })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Exact binomial coefficient over u128 (0 when k > n).
fn choose(n: u128, k: usize) -> u128 {
    if (k as u128) > n {
        return 0;
    }
    let mut result: u128 = 1;
    for j in 0..k as u128 {
        result = result * (n - j) / (j + 1);
    }
    result
}

fn cmd_basis(a: BasisArgs) -> Result<bool> {
    guard_width(a.width)?;
    let sig = parse_algebra(&a.algebra)?;
    let module = parse_module(&sig, &a.free)?;
    let basis = module.width_basis(a.width);
    println!("module {module} over {sig}");
    println!("width {}: rank {}", a.width, basis.len());
    for (key, deg) in basis.keys.iter().zip(&basis.degrees) {
        println!("  {key}  (degree {deg})");
    }
    Ok(true)
}

fn print_identity_outcome(report: &oikomplex_core::multilinear::IdentityReport) -> bool {
    println!("identity: {}", report.identity);
    match report.first_failure {
        None => {
            println!("rank identity PASS for all widths ≤ {}", report.max_width);
            true
        }
        Some((w, expected, got)) => {
            println!(
                "rank identity FAIL at width {w}: expected {expected}, decomposition gives {got}"
            );
            false
        }
    }
}

fn cmd_tensor(a: TensorArgs) -> Result<bool> {
    guard_width(a.wmax)?;
    let sig = parse_algebra(&a.algebra)?;
    let left = parse_module(&sig, &a.left)?;
    let right = parse_module(&sig, &a.right)?;
    let decomp = tensor_decompose(&left, &right)?;
    let lhs = format!("({})*({})", rank_expr(&left), rank_expr(&right));
    print_decomposition(&decomp);
    let report = certify_rank_identity(
        &decomp,
        &|w| left.rank_at_width(w) * right.rank_at_width(w),
        &lhs,
        a.wmax,
    );
    let pass = print_identity_outcome(&report);
    write_artifact(&a.out, &decomp.to_json(&lhs))?;
    Ok(pass)
}

fn cmd_power(a: PowerArgs, kind: DecompKind) -> Result<bool> {
    guard_width(a.wmax)?;
    let sig = parse_algebra(&a.algebra)?;
    let module = parse_module(&sig, &a.free)?;
    let (decomp, lhs): (FreeDecomposition, String) = match kind {
        DecompKind::Wedge => (
            wedge_decompose(&module, a.power)?,
            format!("C({},{})", rank_expr(&module), a.power),
        ),
        DecompKind::Sym => (
            sym_decompose(&module, a.power)?,
            format!("C({}+{},{})", rank_expr(&module), a.power as i64 - 1, a.power),
        ),
        DecompKind::Tensor => unreachable!("tensor goes through cmd_tensor"),
    };
    print_decomposition(&decomp);
    let q = a.power;
    let expected: Box<dyn Fn(u32) -> u128> = match kind {
        DecompKind::Wedge => Box::new(move |w| choose(module.rank_at_width(w), q)),
        DecompKind::Sym => Box::new(move |w| {
            if q == 0 {
                1
            } else {
                choose(module.rank_at_width(w) + q as u128 - 1, q)
            }
        }),
        DecompKind::Tensor => unreachable!(),
    };
    let report = certify_rank_identity(&decomp, &expected, &lhs, a.wmax);
    let pass = print_identity_outcome(&report);
    write_artifact(&a.out, &decomp.to_json(&lhs))?;
    Ok(pass)
}

fn print_decomposition(decomp: &FreeDecomposition) {
    println!("free summands (width, degree shift, multiplicity):");
    for s in &decomp.summands {
        println!("  F<{}>({})^{}", s.width, -s.degree, s.multiplicity);
    }
    println!("total new generators: {}", decomp.total_generators());
}

fn cmd_identity(a: IdentityArgs) -> Result<bool> {
    guard_width(a.wmax)?;
    let sig = parse_algebra(&a.algebra)?;
    match a.kind {
        DecompKind::Tensor => {
            let (Some(left), Some(right)) = (&a.left, &a.right) else {
                bail!("--kind tensor needs --left and --right");
            };
            let left = parse_module(&sig, left)?;
            let right = parse_module(&sig, right)?;
            let decomp = tensor_decompose(&left, &right)?;
            let lhs = format!("({})*({})", rank_expr(&left), rank_expr(&right));
            let report = certify_rank_identity(
                &decomp,
                &|w| left.rank_at_width(w) * right.rank_at_width(w),
                &lhs,
                a.wmax,
            );
            Ok(print_identity_outcome(&report))
        }
        DecompKind::Wedge | DecompKind::Sym => {
            let Some(free) = &a.free else {
                bail!("--kind wedge/sym needs --free");
            };
            let Some(power) = a.power else {
                bail!("--kind wedge/sym needs --power");
            };
            let module = parse_module(&sig, free)?;
            let (decomp, lhs) = if a.kind == DecompKind::Wedge {
                (wedge_decompose(&module, power)?, format!("C({},{power})", rank_expr(&module)))
            } else {
                (
                    sym_decompose(&module, power)?,
                    format!("C({}+{},{power})", rank_expr(&module), power as i64 - 1),
                )
            };
            let expected: Box<dyn Fn(u32) -> u128> = if a.kind == DecompKind::Wedge {
                Box::new(move |w| choose(module.rank_at_width(w), power))
            } else {
                Box::new(move |w| {
                    if power == 0 {
                        1
                    } else {
                        choose(module.rank_at_width(w) + power as u128 - 1, power)
                    }
                })
            };
            let report = certify_rank_identity(&decomp, &expected, &lhs, a.wmax);
            Ok(print_identity_outcome(&report))
        }
    }
}

fn print_matrix(name: &str, m: &PolyMatrix) {
    println!("{name}: {}×{}", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| m.get(r, c).to_string()).collect();
        println!("  [{}]", row.join(", "));
    }
}

fn print_complex(c: &WidthComplex, labels: bool) {
    println!(
        "width {}: {} slots, homological degrees 0..={}",
        c.width,
        c.modules.len(),
        c.modules.len().saturating_sub(1)
    );
    for (j, slot) in c.modules.iter().enumerate() {
        println!("C_{j}: rank {}, degrees {:?}", slot.rank, slot.degrees);
        if labels {
            for (label, deg) in slot.labels.iter().zip(&slot.degrees) {
                println!("    {label}  (degree {deg})");
            }
        }
    }
    for (j, d) in c.differentials.iter().enumerate() {
        print_matrix(&format!("d_{}", j + 1), d);
    }
}

fn cmd_koszul(a: KoszulArgs) -> Result<bool> {
    guard_width(a.width)?;
    let phi = load_morphism(&a.phi)?;
    let trunc = match a.trunc {
        Some(t) => t,
        None => usize::try_from(phi.domain().rank_at_width(a.width))
            .context("rank too large to truncate at")?,
    };
    let complex = koszul_at_width(&phi, a.width, trunc)?;
    print_complex(&complex, a.labels);
    write_artifact(&a.out, &complex.to_json())?;
    Ok(true)
}

fn cmd_be(a: BeArgs) -> Result<bool> {
    guard_width(a.width)?;
    let phi = load_morphism(&a.phi)?;
    if mixed_codomain_degrees(&phi) {
        eprintln!("note: codomain generators have mixed internal degrees");
    }
    let complex = be_at_width(&phi, a.index, a.width)?;
    print_complex(&complex, a.labels);
    write_artifact(&a.out, &complex.to_json())?;
    Ok(true)
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    guard_width(a.wmax)?;
    let phi = load_morphism(&a.phi)?;
    let kind = match a.kind {
        FamilyKind::Koszul => {
            let truncation = match a.trunc {
                Some(t) => t,
                None => usize::try_from(phi.domain().rank_at_width(a.wmax))
                    .context("rank too large to truncate at")?,
            };
            ComplexKind::Koszul { truncation }
        }
        FamilyKind::Be => {
            if mixed_codomain_degrees(&phi) {
                eprintln!("note: codomain generators have mixed internal degrees");
            }
            ComplexKind::BuchsbaumEisenbud { index: a.index }
        }
    };
    let spec = OIComplexSpec { kind, phi };
    let report = verify_family(&spec, a.wmax, a.trials, a.seed)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    if let Some(strand_max) = a.strand_max {
        let sig = spec.phi.domain().algebra().clone();
        let family = assemble_oi_complex(&spec, a.wmax)?;
        let mut found = false;
        for c in &family.widths {
            for j in 1..c.modules.len() {
                for degree in 0..=strand_max {
                    let dim = strand_homology_dimension(c, &sig, j, degree)?;
                    if dim > 0 {
                        found = true;
                        println!(
                            "INFO  module-level strand homology: width {}, H_{j}, degree {degree}: dimension {dim}",
                            c.width
                        );
                    }
                }
            }
        }
        if !found {
            println!(
                "INFO  no module-level strand homology in positive degrees up to degree {strand_max}"
            );
        }
    }
    println!("VERIFY: {}", if report.pass { "PASS" } else { "FAIL" });
    write_artifact(&a.out, &report.to_json())?;
    Ok(report.pass)
}
