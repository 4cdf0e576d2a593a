use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aodkit::{
    appendix_transform, apply_transform, catalog_names, classify, construct1_with, construct2_with, extract_blocks,
    power_report, rate, render_delimited, render_report_delimited, render_report_text, render_table, resolve_name,
    run_ber, table_report, verify_af, verify_aod, verify_mn_seed, verify_ostbc, Constellation, Document, KronOrder,
    MonomialTransform, SimConfig, SymbolicCode, Target, VerifyReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Lib(#[from] aodkit::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    fn category(&self) -> &'static str {
        use aodkit::Error as E;
        match self {
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::CheckFailed(_) => "check-failed",
            CliError::Lib(E::Malformed(_) | E::Parse(_)) => "malformed",
            CliError::Lib(E::UnknownName { .. }) => "unknown-name",
            CliError::Lib(E::Inconsistent(_)) => "internal",
            CliError::Lib(_) => "invalid-input",
        }
    }

    fn exit_code(&self) -> u8 {
        match self.category() {
            "check-failed" => 1,
            "usage" => 2,
            "io" => 3,
            "malformed" => 4,
            "unknown-name" => 5,
            "invalid-input" => 6,
            _ => 7,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "aodkit",
    version,
    about = "Amicable orthogonal designs and the space-time block codes built from them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Browse the built-in codes, families and seeds.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Check a code, family or seed against a set of conditions.
    Verify(VerifyArgs),
    /// Build a new family with one of the two constructions.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Power metrics of one code under a constellation assignment.
    Metrics(MetricsArgs),
    /// Recompute a published power table.
    Tables(TablesArgs),
    /// Monomial equivalence and block structure.
    #[command(subcommand)]
    Equiv(EquivCmd),
    /// Monte Carlo bit error rate over a quasi-static Rayleigh channel.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DocFormat {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Table,
    Delimited,
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List every name accepted wherever a code, family or seed is expected.
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: DocFormat,
    },
    /// Print one entry.
    Show {
        name: String,
        #[arg(long, value_enum, default_value = "text")]
        format: DocFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Ostbc,
    Aod,
    Af,
    MnSeed,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedTarget {
    Aod,
    Af,
}

#[derive(Args)]
struct VerifyArgs {
    /// A catalogue name or a JSON document.
    input: String,
    #[arg(long, value_enum)]
    level: Level,
    /// Seed target for `--level mn-seed`.
    #[arg(long, value_enum, default_value = "aod")]
    target: SeedTarget,
    #[arg(long, value_enum, default_value = "text")]
    format: DocFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kron {
    SeedOuter,
    SeedInner,
}

impl From<Kron> for KronOrder {
    fn from(k: Kron) -> Self {
        match k {
            Kron::SeedOuter => KronOrder::SeedOuter,
            Kron::SeedInner => KronOrder::SeedInner,
        }
    }
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Order n to 4n from a family and an {M, N} seed.
    C1 {
        #[arg(long)]
        input: String,
        #[arg(long)]
        mn: String,
        /// Output file; the family is written to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "seed-outer")]
        kron: Kron,
    },
    /// Order n to 2n from a family.
    C2 {
        #[arg(long)]
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "seed-outer")]
        kron: Kron,
    },
}

/// `<symbol>=<degrees>`, the symbol written `x2` or `2` (1-based).
#[derive(Clone, Debug)]
struct Rotation {
    symbol: usize,
    degrees: f64,
}

fn parse_rotation(s: &str) -> Result<Rotation, String> {
    let (sym, deg) = s.split_once('=').ok_or("expected <symbol>=<degrees>")?;
    let sym = sym.trim().trim_start_matches('x');
    let symbol: usize = sym.parse().map_err(|_| format!("bad symbol '{sym}'"))?;
    if symbol == 0 {
        return Err("symbols are numbered from 1".into());
    }
    let degrees = deg.trim().parse().map_err(|_| format!("bad angle '{deg}'"))?;
    Ok(Rotation { symbol: symbol - 1, degrees })
}

fn parse_constellation(s: &str) -> Result<Constellation, String> {
    Constellation::parse(s).map_err(|e| e.to_string())
}

#[derive(Clone, Debug)]
struct SnrGrid(Vec<f64>);

/// `start:step:stop` inclusive, or a single value.
fn parse_snr(s: &str) -> Result<SnrGrid, String> {
    let nums: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad number '{p}'")))
        .collect::<Result<_, _>>()?;
    match nums[..] {
        [v] => Ok(SnrGrid(vec![v])),
        [start, step, stop] => {
            if step <= 0.0 || stop < start {
                return Err("need step > 0 and stop >= start".into());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok(SnrGrid((0..=n).map(|i| start + i as f64 * step).collect()))
        }
        _ => Err("expected <start:step:stop> or a single value".into()),
    }
}

#[derive(Args)]
struct ConstellationArgs {
    /// Constellation for every symbol: qpsk, bpsk, 8psk, 16qam, optionally `@deg`.
    #[arg(long, value_parser = parse_constellation, default_value = "qpsk")]
    constellation: Constellation,
    /// Rotate one symbol's constellation, e.g. `x2=45`. Repeatable.
    #[arg(long, value_parser = parse_rotation)]
    rotate: Vec<Rotation>,
}

impl ConstellationArgs {
    fn assign(&self, k: usize) -> CliResult<Vec<Constellation>> {
        let mut v = vec![self.constellation.clone(); k];
        for r in &self.rotate {
            let slot = v
                .get_mut(r.symbol)
                .ok_or_else(|| CliError::Usage(format!("x{} out of range for k = {k}", r.symbol + 1)))?;
            *slot = slot.rotated(r.degrees);
        }
        Ok(v)
    }
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    code: String,
    #[command(flatten)]
    consts: ConstellationArgs,
    #[arg(long, value_enum, default_value = "table")]
    format: TableFormat,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    table: u8,
    #[arg(long, value_enum, default_value = "table")]
    format: TableFormat,
}

#[derive(Subcommand)]
enum EquivCmd {
    /// Apply `left · C · right` with signed permutations.
    Apply {
        #[arg(long)]
        code: String,
        /// A transform JSON file, or `appendix` for the built-in witness.
        #[arg(long)]
        transform: String,
        /// Compare the result with this code and fail when they differ.
        #[arg(long)]
        compare: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Identify the 2×2 block pattern of an 8×8 code.
    Blocks {
        #[arg(long)]
        code: String,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    code: String,
    /// SNR grid in dB as `start:step:stop`.
    #[arg(long, value_parser = parse_snr)]
    snr: SnrGrid,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    nr: usize,
    #[command(flatten)]
    consts: ConstellationArgs,
    /// CSV output; written to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn looks_like_path(arg: &str) -> bool {
    arg.contains(['/', '\\']) || arg.ends_with(".json")
}

/// A name resolves through the catalogues unless a file of that name exists.
fn load(arg: &str) -> CliResult<Document> {
    let path = Path::new(arg);
    if path.is_file() || looks_like_path(arg) {
        return Ok(Document::from_json(&read_file(path)?)?);
    }
    Ok(resolve_name(arg)?)
}

fn load_code(arg: &str) -> CliResult<SymbolicCode> {
    Ok(load(arg)?.into_code()?)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summary(name: &str, doc: &Document) -> serde_json::Value {
    match doc {
        Document::Code(c) => json!({
            "name": name, "kind": doc.kind(), "rows": c.p(), "antennas": c.n_t(), "symbols": c.k(),
            "rate": rate(c).to_string(),
        }),
        Document::Family(f) => json!({
            "name": name, "kind": doc.kind(), "order": f.order, "s": f.s(), "t": f.t(),
            "complex": f.complex, "class": classify(f),
        }),
        Document::Seed(s) => json!({ "name": name, "kind": doc.kind(), "order": s.as_family().order }),
    }
}

fn summary_line(name: &str, doc: &Document) -> String {
    let detail = match doc {
        Document::Code(c) => format!("{}x{}, k = {}, rate {}", c.p(), c.n_t(), c.k(), rate(c)),
        Document::Family(f) => {
            let field = if f.complex { "complex" } else { "real" };
            format!("order {}, s = {}, t = {}, {field}, {}", f.order, f.s(), f.t(), classify(f))
        }
        Document::Seed(s) => format!("order {}", s.as_family().order),
    };
    format!("{name:<16} {:<8} {detail}", doc.kind())
}

fn catalog(cmd: CatalogCmd) -> CliResult<()> {
    match cmd {
        CatalogCmd::List { format } => {
            let docs = catalog_names().into_iter().map(|n| Ok((n, resolve_name(n)?))).collect::<CliResult<Vec<_>>>()?;
            match format {
                DocFormat::Text => docs.iter().for_each(|(n, d)| println!("{}", summary_line(n, d))),
                DocFormat::Structured => {
                    let v: Vec<_> = docs.iter().map(|(n, d)| summary(n, d)).collect();
                    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
                }
            }
        }
        CatalogCmd::Show { name, format } => {
            let doc = resolve_name(&name)?;
            match format {
                DocFormat::Text => print!("{doc}"),
                DocFormat::Structured => println!("{}", doc.to_json()),
            }
        }
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> CliResult<()> {
    let doc = load(&args.input)?;
    let label = doc.label().to_string();
    let report: VerifyReport = match args.level {
        Level::Ostbc => verify_ostbc(&doc.into_code()?),
        Level::Aod => verify_aod(&doc.into_family()?),
        Level::Af => verify_af(&doc.into_family()?),
        Level::MnSeed => {
            let target = match args.target {
                SeedTarget::Aod => Target::Aod,
                SeedTarget::Af => Target::Af,
            };
            verify_mn_seed(&doc.into_seed()?, target)
        }
    };
    match args.format {
        DocFormat::Text => print!("{label}: {report}"),
        DocFormat::Structured => println!("{}", serde_json::to_string_pretty(&report).expect("json")),
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("{label} failed {} condition(s)", report.violations.len())))
    }
}

fn construct(cmd: ConstructCmd) -> CliResult<()> {
    let (fam, out) = match cmd {
        ConstructCmd::C1 { input, mn, out, kron } => {
            let fam = load(&input)?.into_family()?;
            let seed = load(&mn)?.into_seed()?;
            (construct1_with(&fam, &seed, kron.into())?, out)
        }
        ConstructCmd::C2 { input, out, kron } => {
            let fam = load(&input)?.into_family()?;
            (construct2_with(&fam, kron.into())?, out)
        }
    };
    emit(out.as_deref(), &format!("{}\n", fam.to_json()))?;
    if out.is_some() {
        println!("{}", summary_line(&fam.label, &Document::Family(fam.clone())));
    }
    Ok(())
}

fn metrics(args: MetricsArgs) -> CliResult<()> {
    let code = load_code(&args.code)?;
    let consts = args.consts.assign(code.k())?;
    let rep = power_report(&code, &consts)?;
    match args.format {
        TableFormat::Table => print!("{}", render_report_text(&code.label, &consts, &rep)),
        TableFormat::Delimited => print!("{}", render_report_delimited(&code.label, &consts, &rep)),
    }
    Ok(())
}

fn tables(args: TablesArgs) -> CliResult<()> {
    let rows = table_report(args.table)?;
    match args.format {
        TableFormat::Table => print!("{}", render_table(&rows)),
        TableFormat::Delimited => print!("{}", render_delimited(&rows)),
    }
    Ok(())
}

fn equiv(cmd: EquivCmd) -> CliResult<()> {
    match cmd {
        EquivCmd::Apply { code, transform, compare, out } => {
            let code = load_code(&code)?;
            let tr = if transform == "appendix" {
                appendix_transform()
            } else {
                MonomialTransform::from_json(&read_file(Path::new(&transform))?)?
            };
            let moved = apply_transform(&code, &tr)?;
            match &out {
                Some(p) => write_file(p, &format!("{}\n", moved.to_json()))?,
                None => print!("{moved}"),
            }
            if let Some(other) = compare {
                let target = load_code(&other)?;
                let same = moved.entries() == target.entries() && moved.k() == target.k();
                println!("equal to {}: {}", target.label, if same { "yes" } else { "no" });
                if !same {
                    return Err(CliError::CheckFailed(format!("result differs from {}", target.label)));
                }
            }
        }
        EquivCmd::Blocks { code } => print!("{}", extract_blocks(&load_code(&code)?)?),
    }
    Ok(())
}

fn simulate(args: SimulateArgs) -> CliResult<()> {
    let code = load_code(&args.code)?;
    let constellations = args.consts.assign(code.k())?;
    let snr_db = args.snr.0;
    if args.nr == 0 || args.trials == 0 {
        return Err(CliError::Usage("--nr and --trials must be positive".into()));
    }
    let cfg = SimConfig {
        code,
        constellations,
        n_r: args.nr,
        snr_db,
        trials: args.trials,
        seed: args.seed,
        noise_free: false,
    };
    let res = run_ber(&cfg)?;
    emit(args.out.as_deref(), &res.to_csv())?;
    if args.out.is_some() {
        for p in &res.points {
            println!("{:>6} dB  ber {:.3e}  ({} / {} bits)", p.snr_db, p.ber, p.bit_errors, p.bits);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Catalog(c) => catalog(c),
        Command::Verify(a) => verify(a),
        Command::Construct(c) => construct(c),
        Command::Metrics(a) => metrics(a),
        Command::Tables(a) => tables(a),
        Command::Equiv(c) => equiv(c),
        Command::Simulate(a) => simulate(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code())
        }
    }
}
