//! Command-line front end. `run` returns the process exit code:
//! 0 on success, 1 on a usage or input error, 2 when a verification check
//! finds a counterexample.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{average_energy, code_rate, table1, table1_csv, table1_markdown};
use crate::error::{Error, Result};
use crate::graph::{
    build_graph, export, spiral_layout, spring_layout_with, EdgeRule, ExportFormat, SpringConfig,
};
use crate::modulo::{mu1, mu2, residue_table, PrimeModulus};
use crate::quaternion::HurwitzInt;
use crate::verify::{run_suite, verify_modulus, Check};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "hurwitz-codes",
    version,
    about = "Residue rings of Hurwitz integers and the codes built on them"
)]
struct Cli {
    /// Output format: text, json, csv, markdown, dot or svg (not every
    /// command supports every format)
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Markdown,
    Dot,
    Svg,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ModulusArg {
    /// Modulus as text, e.g. "5/2+3/2i+3/2j+3/2k"
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,

    /// Modulus in doubled coordinates, e.g. "5,3,3,3"
    #[arg(long, allow_hyphen_values = true)]
    alpha2: Option<String>,
}

impl ModulusArg {
    fn modulus(&self) -> Result<PrimeModulus> {
        let q: HurwitzInt = match (&self.alpha, &self.alpha2) {
            (Some(s), _) => s.parse()?,
            (None, Some(s)) => HurwitzInt::parse_doubled(s)?,
            (None, None) => unreachable!("clap requires one of --alpha, --alpha2"),
        };
        PrimeModulus::new(q)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Residue table with both branch values for every z
    Residues(ModulusArg),
    /// Average energy of the residue set
    Energy(ModulusArg),
    /// Energy table for primes N = 6k + 1
    Table1 {
        #[arg(long, default_value_t = 43)]
        max_norm: u64,
    },
    /// Length and rate of a code over a prime p = 1 mod 24
    Rate {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Constellation graph with an optional layout
    Graph(GraphArgs),
    /// Exhaustive checks over all prime moduli up to a norm bound
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Cycle,
    Unit,
    Complete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LayoutArg {
    Spring,
    Spiral,
    None,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    modulus: ModulusArg,
    #[arg(long, value_enum, default_value_t = RuleArg::Cycle)]
    rule: RuleArg,
    #[arg(long, value_enum, default_value_t = LayoutArg::Spring)]
    layout: LayoutArg,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    dims: u8,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1.0)]
    rest_length: f64,
    #[arg(long, default_value_t = 1.0)]
    repulsion: f64,
    /// Helix turns for the spiral layout
    #[arg(long, default_value_t = 2.0)]
    turns: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Every check (the default when no check is named)
    #[arg(long)]
    all: bool,
    /// Addition and multiplication are preserved modulo alpha
    #[arg(long)]
    thm1: bool,
    /// Residues are congruent to z and pairwise incongruent
    #[arg(long)]
    thm2: bool,
    /// mu(z) + mu(N - z) is congruent to zero
    #[arg(long)]
    prop7: bool,
    /// Two-component integer moduli only use branch one
    #[arg(long)]
    cor1: bool,
    /// Values at z = 0 and z = N
    #[arg(long)]
    anchors: bool,
    #[arg(long, default_value_t = 200)]
    norm_bound: u64,
    /// Check a single modulus instead of every prime up to the bound
    #[arg(long, allow_hyphen_values = true, conflicts_with = "norm_bound")]
    alpha: Option<String>,
}

impl VerifyArgs {
    fn checks(&self) -> Vec<Check> {
        let picked: Vec<Check> = [
            (self.thm2, Check::Bijection),
            (self.thm1, Check::Homomorphism),
            (self.prop7, Check::Symmetry),
            (self.anchors, Check::Anchors),
            (self.cor1, Check::TwoComponentCollapse),
        ]
        .into_iter()
        .filter_map(|(on, c)| on.then_some(c))
        .collect();
        if self.all || picked.is_empty() {
            Check::ALL.to_vec()
        } else {
            picked
        }
    }
}

/// Output of a command plus whether every check passed.
struct Output {
    text: String,
    ok: bool,
}

impl From<String> for Output {
    fn from(text: String) -> Self {
        Output { text, ok: true }
    }
}

fn unsupported(cmd: &str, f: Format) -> Error {
    Error::InvalidArgument(format!("{cmd} does not support --format {f:?}").to_lowercase())
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn residues(m: &PrimeModulus, format: Format) -> Result<String> {
    let table = residue_table(m)?;
    match format {
        Format::Json => return Ok(table.to_json()),
        Format::Csv => return Ok(table.to_csv()),
        Format::Text => {}
        f => return Err(unsupported("residues", f)),
    }
    let mut rows = vec![[
        "z".to_string(),
        "mu1".into(),
        "N1".into(),
        "mu2".into(),
        "N2".into(),
        "branch".into(),
        "mu".into(),
    ]];
    for e in table.entries() {
        rows.push([
            e.z.to_string(),
            mu1(m, e.z)?.to_string(),
            e.norm1.to_string(),
            mu2(m, e.z)?.to_string(),
            e.norm2.to_string(),
            e.branch.number().to_string(),
            e.residue.to_string(),
        ]);
    }
    let mut width = [0usize; 7];
    for r in &rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut s = format!("alpha = {}, N = {}\n", m.alpha(), m.norm());
    for r in &rows {
        let line: Vec<String> = r
            .iter()
            .zip(width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(s, "{}", line.join("  ").trim_end());
    }
    Ok(s)
}

fn graph(a: &GraphArgs, format: Format) -> Result<String> {
    let m = a.modulus.modulus()?;
    let rule = match a.rule {
        RuleArg::Cycle => EdgeRule::Cycle,
        RuleArg::Unit => EdgeRule::UnitDifference,
        RuleArg::Complete => EdgeRule::Complete,
    };
    let g = build_graph(&residue_table(&m)?, rule)?;
    let dims = usize::from(a.dims);
    let layout = match a.layout {
        LayoutArg::Spring => Some(spring_layout_with(
            &g,
            &SpringConfig {
                dims,
                max_iters: a.max_iters,
                tol: a.tol,
                seed: a.seed,
                rest_length: a.rest_length,
                repulsion: a.repulsion,
                ..SpringConfig::default()
            },
        )?),
        LayoutArg::Spiral => Some(spiral_layout(&g, a.turns, dims)?),
        LayoutArg::None => None,
    };
    let ef = match format {
        Format::Dot | Format::Text => ExportFormat::Dot,
        Format::Json => ExportFormat::Json,
        Format::Csv => ExportFormat::Csv,
        Format::Svg => ExportFormat::Svg,
        f => return Err(unsupported("graph", f)),
    };
    export(&g, layout.as_ref(), ef)
}

fn verify(a: &VerifyArgs, format: Format) -> Result<Output> {
    let checks = a.checks();
    let reports = match &a.alpha {
        Some(s) => {
            let m = PrimeModulus::new(s.parse()?)?;
            verify_modulus(&m)?
                .into_iter()
                .filter(|r| checks.contains(&r.check))
                .collect()
        }
        None => run_suite(a.norm_bound, &checks)?,
    };
    let ok = reports.iter().all(|r| r.passed());
    let text = match format {
        Format::Json => json(&reports),
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(s, "{r}");
            }
            let _ = writeln!(
                s,
                "{}",
                if ok {
                    "all checks passed"
                } else {
                    "verification FAILED"
                }
            );
            s
        }
        f => return Err(unsupported("verify", f)),
    };
    Ok(Output { text, ok })
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let format = cli.format;
    let text = |default: Format| format.unwrap_or(default);
    Ok(match &cli.command {
        Command::Residues(a) => residues(&a.modulus()?, text(Format::Text))?.into(),
        Command::Energy(a) => {
            let e = average_energy(&a.modulus()?)?;
            match text(Format::Text) {
                Format::Text => format!("{e}\n"),
                Format::Json => json(&e),
                f => return Err(unsupported("energy", f)),
            }
            .into()
        }
        Command::Table1 { max_norm } => {
            let rows = table1(*max_norm)?;
            match text(Format::Markdown) {
                Format::Markdown | Format::Text => table1_markdown(&rows),
                Format::Csv => table1_csv(&rows),
                Format::Json => json(&rows),
                f => return Err(unsupported("table1", f)),
            }
            .into()
        }
        Command::Rate { p, k } => {
            let r = code_rate(*p, *k)?;
            match text(Format::Text) {
                Format::Text => format!("{r}\n"),
                Format::Json => json(&r),
                f => return Err(unsupported("rate", f)),
            }
            .into()
        }
        Command::Graph(a) => graph(a, text(Format::Dot))?.into(),
        Command::Verify(a) => verify(a, text(Format::Text))?,
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run(args: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let out = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.out {
        Some(path) => {
            std::fs::write(path, &out.text).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => stdout
            .write_all(out.text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    if out.ok {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}
