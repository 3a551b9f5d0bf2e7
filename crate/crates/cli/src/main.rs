use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use arcalg::algebra::{multiply_diagrams, ArcAlgebra, BasisDiagram, DEFAULT_DIM_CAP};
use arcalg::combinatorics::enumerate_weights_bounded;
use arcalg::faithcheck::{CheckOptions, CheckReport, Status};
use arcalg::functors::Workbench;
use arcalg::klpoly::{inverse_kl_matrix, kl_matrix, verify_inverse, PolyMatrix, DEFAULT_WEIGHT_CAP};
use arcalg::repcat::{delta_filtration_mults, ext_dims, hom_dim, ModuleRep, DEFAULT_RESOLUTION_CAP};
use arcalg::surgery::Schedule;
use arcalg::verify::{run_suite, Suite};
use arcalg::{ArcError, Field, Partition, Rational, Weight, F2, F3, F5, F7, FMersenne61};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "arcalg", version, about = "Exact computations with Khovanov arc algebras and their covers")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Config {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Characteristic of the ground field: 0 or one of 2, 3, 5, 7, 2305843009213693951.
    #[arg(long = "char", global = true, default_value_t = 0)]
    characteristic: u64,
    /// Largest algebra dimension that will be built.
    #[arg(long, global = true, env = "ARCALG_DIM_CAP", default_value_t = DEFAULT_DIM_CAP)]
    dim_cap: usize,
    /// Largest number of weights in a matrix computation.
    #[arg(long, global = true, env = "ARCALG_WEIGHT_CAP", default_value_t = DEFAULT_WEIGHT_CAP)]
    weight_cap: usize,
    /// Largest dimension of a single resolution term.
    #[arg(long, global = true, env = "ARCALG_RESOLUTION_CAP", default_value_t = DEFAULT_RESOLUTION_CAP)]
    resolution_cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Projective,
    Standard,
    Costandard,
    Simple,
    Tilting,
    Cell,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    #[value(name = "K")]
    K,
    #[value(name = "H")]
    H,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Combinatorics,
    Algebra,
    Repcat,
    Functors,
    Faithfulness,
    All,
}

#[derive(Args)]
struct BoxArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// List the weights of a box with their partitions.
    Weights {
        #[command(flatten)]
        bx: BoxArgs,
        /// Only regular weights.
        #[arg(long)]
        regular: bool,
    },
    /// Draw the cup diagram of a weight.
    Cup {
        #[arg(long)]
        weight: String,
    },
    /// The weight λ° indexing the socle of Δ(λ).
    Circ {
        #[arg(long)]
        weight: String,
    },
    /// Multiply two basis diagrams, given as "bottom|middle|top" or JSON.
    Multiply {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Surgery order; the product does not depend on it.
        #[arg(long, default_value = "leftmost")]
        schedule: String,
    },
    /// The Cartan matrix dim e_λ K e_μ.
    Cartan {
        #[command(flatten)]
        bx: BoxArgs,
    },
    /// Kazhdan–Lusztig polynomial matrices.
    Kl {
        #[command(flatten)]
        bx: BoxArgs,
        /// Print the inverse matrix (p polynomials) instead.
        #[arg(long)]
        inverse: bool,
        /// Check that the two matrices are mutually inverse.
        #[arg(long)]
        check: bool,
    },
    /// Report on a module: dimensions, radical and socle layers, Δ-filtration.
    Module {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        weight: String,
        /// Box, when the weight is given as a partition.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Side::K)]
        side: Side,
    },
    /// dim Hom between two modules, each given as KIND:WEIGHT.
    Hom {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Side::K)]
        side: Side,
    },
    /// dim Ext^j between two modules, each given as KIND:WEIGHT.
    Ext {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Largest degree.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Side::K)]
        side: Side,
    },
    /// Run a verification suite on one box.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[command(flatten)]
        bx: BoxArgs,
        /// Allow the larger faithfulness runs (m+n ≥ 5).
        #[arg(long)]
        deep: bool,
        /// Largest Ext degree probed where a check leaves it open.
        #[arg(long, default_value_t = 3)]
        jmax: usize,
        /// Also write the reports as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Errors carrying the process exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(Exit(code, _)) = e.downcast_ref::<Exit>() {
        return *code;
    }
    match e.downcast_ref::<ArcError>() {
        Some(ArcError::BoundExceeded { .. } | ArcError::ResourceCap(_)) => 3,
        Some(
            ArcError::Parse(_)
            | ArcError::BoxMismatch(..)
            | ArcError::PartitionOutsideBox(..)
            | ArcError::BadPosition { .. }
            | ArcError::UnknownLabel(_)
            | ArcError::NotOriented(_)
            | ArcError::Precondition(_),
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Calls `$body` with `$F` bound to the field of characteristic `$p`.
macro_rules! with_field {
    ($p:expr, $F:ident => $body:expr) => {
        match $p {
            0 => {
                type $F = Rational;
                $body
            }
            2 => {
                type $F = F2;
                $body
            }
            3 => {
                type $F = F3;
                $body
            }
            5 => {
                type $F = F5;
                $body
            }
            7 => {
                type $F = F7;
                $body
            }
            2_305_843_009_213_693_951 => {
                type $F = FMersenne61;
                $body
            }
            p => Err(Exit(2, format!("unsupported characteristic {p}")).into()),
        }
    };
}

fn run(cli: &Cli) -> Result<u8> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Weights { bx, regular } => weights(cfg, bx, *regular),
        Command::Cup { weight } => cup(cfg, weight),
        Command::Circ { weight } => {
            let w = parse_weight(weight, None, None)?;
            emit(cfg, &json!({"weight": w, "circ": w.circ()}), &format!("{}\n", w.circ()))
        }
        Command::Multiply { left, right, schedule } => multiply(cfg, left, right, schedule),
        Command::Cartan { bx } => cartan(cfg, bx),
        Command::Kl { bx, inverse, check } => kl(cfg, bx, *inverse, *check),
        Command::Module { kind, weight, m, n, side } => {
            with_field!(cfg.characteristic, F => module::<F>(cfg, *kind, weight, *m, *n, *side))
        }
        Command::Hom { left, right, m, n, side } => {
            with_field!(cfg.characteristic, F => hom::<F>(cfg, left, right, *m, *n, *side))
        }
        Command::Ext { left, right, degree, m, n, side } => {
            with_field!(cfg.characteristic, F => ext::<F>(cfg, left, right, *degree, *m, *n, *side))
        }
        Command::Verify { suite, bx, deep, jmax, json } => {
            with_field!(cfg.characteristic, F => verify::<F>(cfg, *suite, bx, *deep, *jmax, json.as_ref()))
        }
    }
}

/// Prints `value` as JSON, or `text` otherwise.
fn emit(cfg: &Config, value: &Value, text: &str) -> Result<u8> {
    match cfg.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        _ => print!("{text}"),
    }
    Ok(0)
}

/// A weight string, or a partition when the box is given and the string
/// is not a weight.
fn parse_weight(s: &str, m: Option<usize>, n: Option<usize>) -> Result<Weight> {
    let s = s.trim();
    match (m, n) {
        (Some(m), Some(n)) => match Weight::parse_in(s, m, n) {
            Ok(w) => Ok(w),
            Err(e @ ArcError::BoxMismatch(..)) => Err(e.into()),
            Err(_) => Ok(Partition::parse(s, m, n)?.to_weight()),
        },
        (None, None) => Ok(Weight::parse(s)?),
        _ => Err(Exit(2, "give both --m and --n or neither".into()).into()),
    }
}

fn weights(cfg: &Config, bx: &BoxArgs, regular: bool) -> Result<u8> {
    let ws: Vec<Weight> = enumerate_weights_bounded(bx.m, bx.n, cfg.weight_cap)?
        .into_iter()
        .filter(|w| !regular || w.is_regular())
        .collect();
    let rows: Vec<Value> = ws
        .iter()
        .map(|w| json!({"weight": w, "partition": w.to_partition().to_string(), "regular": w.is_regular()}))
        .collect();
    let mut text = String::new();
    match cfg.format {
        Format::Csv => {
            text.push_str("weight,partition,regular\n");
            for w in &ws {
                writeln!(text, "{},\"{}\",{}", w, w.to_partition(), w.is_regular())?;
            }
        }
        _ => {
            for w in &ws {
                writeln!(text, "{:<width$}  {}{}", w.to_string(), w.to_partition(), if w.is_regular() { "  regular" } else { "" }, width = bx.m + bx.n)?;
            }
        }
    }
    emit(cfg, &Value::Array(rows), &text)
}

fn cup(cfg: &Config, weight: &str) -> Result<u8> {
    let w = parse_weight(weight, None, None)?;
    let d = w.cup_diagram();
    let ascii = d.render_ascii(Some(&w));
    let value = json!({"weight": w, "cup_diagram": d, "degree": d.degree(&w)?, "ascii": ascii});
    match cfg.format {
        Format::Json => emit(cfg, &value, ""),
        _ => {
            print!("{ascii}");
            println!("{}", serde_json::to_string(&d)?);
            Ok(0)
        }
    }
}

fn parse_diagram(s: &str) -> Result<BasisDiagram> {
    BasisDiagram::parse(s).with_context(|| format!("reading diagram {s:?}"))
}

fn multiply(cfg: &Config, left: &str, right: &str, schedule: &str) -> Result<u8> {
    let a = parse_diagram(left)?;
    let b = parse_diagram(right)?;
    let schedule = match schedule {
        "leftmost" => Schedule::LeftmostFirst,
        "rightmost" => Schedule::RightmostFirst,
        s => return Err(Exit(2, format!("unknown schedule {s:?}, expected leftmost or rightmost")).into()),
    };
    if a.bottom.len() != b.bottom.len() {
        return Err(Exit(2, "diagrams have different lengths".into()).into());
    }
    let terms = multiply_diagrams(&a, &b, schedule)?;
    let value: Value = terms
        .iter()
        .map(|(d, c)| json!({"diagram": d, "coeff": c}))
        .collect();
    let mut text = String::new();
    if terms.is_empty() {
        text.push_str("0\n");
    }
    for (d, c) in &terms {
        writeln!(text, "{c:+} {d}")?;
    }
    match cfg.format {
        Format::Text => emit(cfg, &value, &text),
        _ => {
            println!("{}", serde_json::to_string(&value)?);
            Ok(0)
        }
    }
}

fn table(labels: &[Weight], cells: &[Vec<String>], csv: bool) -> String {
    let mut out = String::new();
    if csv {
        out.push_str("row");
        for l in labels {
            let _ = write!(out, ",{l}");
        }
        out.push('\n');
        for (l, row) in labels.iter().zip(cells) {
            let _ = write!(out, "{l}");
            for c in row {
                let _ = write!(out, ",\"{c}\"");
            }
            out.push('\n');
        }
        return out;
    }
    let w = labels
        .iter()
        .map(|l| l.to_string().chars().count())
        .chain(cells.iter().flatten().map(|c| c.chars().count()))
        .max()
        .unwrap_or(1);
    let _ = write!(out, "{:w$}", "");
    for l in labels {
        let _ = write!(out, " {:>w$}", l.to_string());
    }
    out.push('\n');
    for (l, row) in labels.iter().zip(cells) {
        let _ = write!(out, "{:w$}", l.to_string());
        for c in row {
            let _ = write!(out, " {c:>w$}");
        }
        out.push('\n');
    }
    out
}

fn cartan(cfg: &Config, bx: &BoxArgs) -> Result<u8> {
    let k = ArcAlgebra::extended_with_cap(bx.m, bx.n, cfg.dim_cap)?;
    let c = k.cartan_matrix();
    let cells: Vec<Vec<String>> = c.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    let value = json!({"algebra": k.name(), "dim": k.dim(), "labels": k.labels(), "matrix": c});
    emit(cfg, &value, &table(k.labels(), &cells, cfg.format == Format::Csv))
}

fn kl(cfg: &Config, bx: &BoxArgs, inverse: bool, check: bool) -> Result<u8> {
    if check {
        let ok = verify_inverse(bx.m, bx.n, cfg.weight_cap)?;
        let word = if ok { "PASS" } else { "FAIL" };
        emit(cfg, &json!({"inverse_identity": ok}), &format!("inverse identity: {word}\n"))?;
        return Ok(if ok { 0 } else { 1 });
    }
    let mat: PolyMatrix = if inverse {
        inverse_kl_matrix(bx.m, bx.n, cfg.weight_cap)?
    } else {
        kl_matrix(bx.m, bx.n, cfg.weight_cap)?
    };
    match cfg.format {
        Format::Csv => {
            print!("{}", mat.to_csv());
            Ok(0)
        }
        _ => {
            let cells: Vec<Vec<String>> = mat
                .entries
                .iter()
                .map(|r| r.iter().map(|p| if p.is_zero() { ".".into() } else { p.to_string() }).collect())
                .collect();
            emit(cfg, &serde_json::to_value(&mat)?, &table(&mat.weights, &cells, false))
        }
    }
}

fn build<F: Field>(wb: &Workbench, kind: Kind, w: &Weight, side: Side) -> Result<ModuleRep<F>> {
    let (m, n) = w.shape();
    let k = wb.extended(m, n)?;
    let on_k = match kind {
        Kind::Projective => ModuleRep::projective(&k, w)?,
        Kind::Standard => ModuleRep::standard(&k, w)?,
        Kind::Costandard => ModuleRep::<F>::standard(&k, w)?.dual(),
        Kind::Simple => ModuleRep::simple(&k, w)?,
        Kind::Tilting => wb.tilting(w)?,
        Kind::Cell => return Ok(wb.cell(w)?),
    };
    match side {
        Side::K => Ok(on_k),
        Side::H => {
            if kind == Kind::Simple && !w.is_regular() {
                bail!(Exit(2, format!("{w} is not regular, so fL({w}) = 0 is not a simple H-module")));
            }
            Ok(wb.f(&on_k)?)
        }
    }
}

fn spec(s: &str, m: Option<usize>, n: Option<usize>) -> Result<(Kind, Weight)> {
    let (kind, w) = s
        .split_once(':')
        .ok_or_else(|| Exit(2, format!("module {s:?} should read KIND:WEIGHT, e.g. standard:v^v")))?;
    let kind = Kind::from_str(kind.trim(), true).map_err(|e| Exit(2, e))?;
    Ok((kind, parse_weight(w, m, n)?))
}

fn workbench(cfg: &Config) -> Workbench {
    Workbench::new(cfg.dim_cap)
}

fn module<F: Field>(cfg: &Config, kind: Kind, weight: &str, m: Option<usize>, n: Option<usize>, side: Side) -> Result<u8> {
    let w = parse_weight(weight, m, n)?;
    let wb = workbench(cfg);
    let module = build::<F>(&wb, kind, &w, side)?;
    let mut report = module.report();
    let filtration = if module.algebra().kind() == arcalg::algebra::AlgebraKind::Extended {
        match delta_filtration_mults(&module) {
            Ok(c) => Some(
                module
                    .algebra()
                    .labels()
                    .iter()
                    .zip(c)
                    .filter(|(_, c)| *c > 0)
                    .map(|(l, c)| (*l, c))
                    .collect::<Vec<_>>(),
            ),
            Err(ArcError::NotDeltaFiltered(_)) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    if let Some(f) = &filtration {
        report["delta_filtration"] = f.iter().map(|(l, c)| json!({"weight": l, "mult": c})).collect();
    }
    report["field"] = json!(F::name());
    let mut text = String::new();
    writeln!(text, "{} over {} ({})", describe(kind, &w, side), module.algebra().name(), F::name())?;
    writeln!(text, "dim {}", module.dim())?;
    let layer_text = |layers: Vec<Vec<usize>>| -> Vec<String> {
        layers
            .iter()
            .map(|l| {
                module
                    .layer_weights(l)
                    .iter()
                    .map(|(w, d)| if *d == 1 { format!("L({w})") } else { format!("{d}·L({w})") })
                    .collect::<Vec<_>>()
                    .join(" + ")
            })
            .collect()
    };
    for (i, l) in layer_text(module.radical_layers()).iter().enumerate() {
        writeln!(text, "rad layer {i}: {l}")?;
    }
    for (i, l) in layer_text(module.socle_layers()).iter().enumerate() {
        writeln!(text, "soc layer {i}: {l}")?;
    }
    match &filtration {
        Some(f) => {
            let parts: Vec<String> = f.iter().map(|(l, c)| if *c == 1 { format!("Δ({l})") } else { format!("{c}·Δ({l})") }).collect();
            writeln!(text, "Δ-filtration: {}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })?;
        }
        None if module.algebra().kind() == arcalg::algebra::AlgebraKind::Extended => writeln!(text, "Δ-filtration: none")?,
        None => {}
    }
    emit(cfg, &report, &text)
}

fn describe(kind: Kind, w: &Weight, side: Side) -> String {
    let base = match kind {
        Kind::Projective => format!("P({w})"),
        Kind::Standard => format!("Δ({w})"),
        Kind::Costandard => format!("∇({w})"),
        Kind::Simple => format!("L({w})"),
        Kind::Tilting => format!("T({w})"),
        Kind::Cell => return format!("S({w})"),
    };
    match side {
        Side::K => base,
        Side::H => format!("f{base}"),
    }
}

fn pair<F: Field>(
    wb: &Workbench,
    left: &str,
    right: &str,
    m: Option<usize>,
    n: Option<usize>,
    side: Side,
) -> Result<(ModuleRep<F>, ModuleRep<F>, String, String)> {
    let (lk, lw) = spec(left, m, n)?;
    let (rk, rw) = spec(right, m, n)?;
    if lw.shape() != rw.shape() {
        return Err(ArcError::BoxMismatch(lw.m(), lw.n(), rw.m(), rw.n()).into());
    }
    let a = build::<F>(wb, lk, &lw, side)?;
    let b = build::<F>(wb, rk, &rw, side)?;
    Ok((a, b, describe(lk, &lw, side), describe(rk, &rw, side)))
}

fn hom<F: Field>(cfg: &Config, left: &str, right: &str, m: Option<usize>, n: Option<usize>, side: Side) -> Result<u8> {
    let wb = workbench(cfg);
    let (a, b, la, lb) = pair::<F>(&wb, left, right, m, n, side)?;
    let d = hom_dim(&a, &b)?;
    emit(cfg, &json!({"left": la, "right": lb, "hom": d}), &format!("dim Hom({la}, {lb}) = {d}\n"))
}

#[allow(clippy::too_many_arguments)]
fn ext<F: Field>(
    cfg: &Config,
    left: &str,
    right: &str,
    degree: usize,
    m: Option<usize>,
    n: Option<usize>,
    side: Side,
) -> Result<u8> {
    let wb = workbench(cfg);
    let (a, b, la, lb) = pair::<F>(&wb, left, right, m, n, side)?;
    let dims = ext_dims(&a, &b, degree, cfg.resolution_cap)?;
    let mut text = String::new();
    for (j, d) in dims.iter().enumerate() {
        writeln!(text, "dim Ext^{j}({la}, {lb}) = {d}")?;
    }
    emit(cfg, &json!({"left": la, "right": lb, "ext": dims}), &text)
}

fn verify<F: Field>(cfg: &Config, suite: SuiteArg, bx: &BoxArgs, deep: bool, jmax: usize, out: Option<&PathBuf>) -> Result<u8> {
    let suite = match suite {
        SuiteArg::Combinatorics => Suite::Combinatorics,
        SuiteArg::Algebra => Suite::Algebra,
        SuiteArg::Repcat => Suite::Repcat,
        SuiteArg::Functors => Suite::Functors,
        SuiteArg::Faithfulness => Suite::Faithfulness,
        SuiteArg::All => Suite::All,
    };
    let heavy = matches!(suite, Suite::Faithfulness | Suite::All) && bx.m + bx.n >= 5;
    if heavy && !deep {
        return Err(Exit(
            3,
            format!("the faithfulness checks at ({},{}) are a long run; pass --deep to allow it", bx.m, bx.n),
        )
        .into());
    }
    let wb = workbench(cfg);
    let cap = if deep { cfg.resolution_cap.max(4 * DEFAULT_RESOLUTION_CAP) } else { cfg.resolution_cap };
    let reports = run_suite::<F>(&wb, suite, bx.m, bx.n, CheckOptions { jmax, cap })?;
    if let Some(path) = out {
        std::fs::write(path, serde_json::to_string_pretty(&reports)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let value = serde_json::to_value(&reports)?;
    emit(cfg, &value, &summary(&reports))?;
    Ok(if reports.iter().all(CheckReport::passed) {
        0
    } else if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        3
    })
}

fn summary(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    let width = reports.iter().map(|r| r.check.len()).max().unwrap_or(5);
    for r in reports {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Partial => "PARTIAL",
        };
        let held = r.witnesses.iter().filter(|w| w.holds).count();
        let _ = writeln!(
            out,
            "{:<width$}  ({},{}) char {}  {status:<7}  {held}/{} witnesses  {} ms",
            r.check,
            r.params.m,
            r.params.n,
            r.params.char,
            r.witnesses.len(),
            r.millis
        );
        for w in r.failures() {
            let _ = writeln!(out, "    failed: {}  lhs {:?} rhs {:?}", w.item, w.lhs, w.rhs);
        }
        for note in &r.notes {
            let _ = writeln!(out, "    note: {note}");
        }
    }
    out
}
