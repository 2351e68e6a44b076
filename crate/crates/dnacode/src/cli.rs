//! Command-line interface.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dnacode_core::products::{self, BinaryCode, TernaryCode};
use dnacode_core::{
    construct_with, register_result, verify, BoundTable, Code, CodeParams, ConstraintKind, Engine,
    NucleotideOrdering, OffsetSpec,
};

use crate::codefile::{format_code, format_component, read_code, write_code};
use crate::error::{CliError, Result};
use crate::records::{render, BoundRecord, Format, TableRecord, VerifyRecord};
use crate::tables::{entries, run_entries, RunOptions, TableEntrySpec};

#[derive(Debug, Parser)]
#[command(name = "dnacode", version, about = "Constant GC-content DNA codes: bounds, constructions, verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Best lower and upper bounds with their derivations.
    Bound(BoundArgs),
    /// Greedy lexicographic code.
    Construct(ConstructArgs),
    /// Check code files against their declared parameters.
    Verify(VerifyArgs),
    /// Reproduce the published tables.
    Table(TableArgs),
    /// Product code from greedy component codes.
    Product(ProductArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Gc,
    Gcrc,
    Gcr,
}

impl From<KindArg> for ConstraintKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Gc => ConstraintKind::Gc,
            KindArg::Gcrc => ConstraintKind::GcRc,
            KindArg::Gcr => ConstraintKind::GcR,
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Word length.
    #[arg(long)]
    pub n: usize,
    /// All distances 1..=n when omitted.
    #[arg(long)]
    pub d: Option<usize>,
    /// All GC-contents 0..=n when omitted.
    #[arg(long)]
    pub w: Option<usize>,
    #[arg(long, value_enum, default_value_t = KindArg::Gc)]
    pub constraint: KindArg,
    /// Code files to register as constructive lower bounds.
    #[arg(long)]
    pub register: Vec<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Auto,
    Scan,
    Mark,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Auto => Engine::Auto,
            EngineArg::Scan => Engine::Scan,
            EngineArg::Mark => Engine::Mark,
        }
    }
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Word length.
    #[arg(long)]
    pub n: usize,
    /// Minimum distance.
    #[arg(long)]
    pub d: usize,
    /// GC-content.
    #[arg(long)]
    pub w: usize,
    #[arg(long, value_enum, default_value_t = KindArg::Gc)]
    pub constraint: KindArg,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=6))]
    pub ordering: u8,
    /// Starting rank in base 16.
    #[arg(long, default_value = "0", conflicts_with = "factored")]
    pub offset: String,
    /// Factored scan with outer and inner base-16 offsets, `HEX,HEX`.
    #[arg(long)]
    pub factored: Option<String>,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    pub engine: EngineArg,
    /// Code file destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Format of the summary printed to standard error.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// 1: GC-content with reverse-complement constraint, 2: GC-content only.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub reproduce: u8,
    /// Also run entries known to be slow.
    #[arg(long)]
    pub include_slow: bool,
    /// Only the cell `n,d`.
    #[arg(long, value_parser = parse_pair)]
    pub entry: Option<(usize, usize)>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Per-entry time limit in seconds.
    #[arg(long, default_value_t = 900)]
    pub budget_secs: u64,
    /// Directory for the constructed code files.
    #[arg(long)]
    pub save_dir: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProductKind {
    /// Constant-weight binary times binary.
    Binary,
    /// Reverse constraint on the constant-weight factor.
    BinaryRCw,
    /// Reverse constraint on the second binary factor.
    BinaryR,
    /// Constant-weight ternary times binary of length `n - w`.
    Ternary,
    /// Reverse constraint on the ternary factor.
    TernaryR,
    /// Reverse constraint on the binary factor only; kept only if it verifies.
    TernaryBinaryR,
    /// Distance-2 witnesses (weight-w words times parity or odd-weight words).
    D2,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    /// Word length.
    #[arg(long)]
    pub n: usize,
    /// Minimum distance.
    #[arg(long)]
    pub d: usize,
    /// GC-content.
    #[arg(long)]
    pub w: usize,
    #[arg(long, value_enum, default_value_t = KindArg::Gc)]
    pub constraint: KindArg,
    #[arg(long, value_enum)]
    pub construction: ProductKind,
    /// Code file destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the two component codes into this directory.
    #[arg(long)]
    pub components: Option<PathBuf>,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected n,d, got {s}"))?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t}: {e}"));
    Ok((p(a)?, p(b)?))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(CliError::io(path)),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Whether the command succeeded (exit 0) or found a mismatch (exit 1).
pub type Outcome = bool;

fn run_bound(a: &BoundArgs) -> Result<Outcome> {
    let kind: ConstraintKind = a.constraint.into();
    let codes: Vec<Code> = a.register.iter().map(|p| read_code(p)).collect::<Result<_>>()?;
    let max_n = codes.iter().map(|c| c.params.n).chain([a.n]).max().unwrap_or(a.n);
    let mut table = BoundTable::build(max_n)?;
    let mut ok = true;
    for (path, code) in a.register.iter().zip(&codes) {
        if let Err(e) = register_result(&mut table, code) {
            eprintln!("{}: {e}", path.display());
            ok = false;
        }
    }
    let ds: Vec<usize> = a.d.map_or_else(|| (1..=a.n).collect(), |d| vec![d]);
    let ws: Vec<usize> = a.w.map_or_else(|| (0..=a.n).collect(), |w| vec![w]);
    let mut records = Vec::new();
    for &d in &ds {
        for &w in &ws {
            let (lo, up) = table.best_bounds(a.n, d, w, kind)?;
            records.push(BoundRecord::new(a.n, d, w, kind.as_str(), &lo, &up));
        }
    }
    emit(&render(&records, a.output.format)?, a.output.out.as_deref())?;
    Ok(ok)
}

fn offset_spec(a: &ConstructArgs) -> Result<OffsetSpec> {
    Ok(match &a.factored {
        Some(text) => {
            let (x, y) = text
                .split_once(',')
                .ok_or_else(|| CliError::Usage(format!("--factored expects HEX,HEX, got {text}")))?;
            OffsetSpec::parse(&format!("{}⊙{}", x.trim(), y.trim()), NucleotideOrdering::STANDARD)?
        }
        None => OffsetSpec::parse(&a.offset, NucleotideOrdering::new(a.ordering)?)?,
    })
}

fn summarize(path: &str, code: &Code, format: Format) -> Result<bool> {
    let report = verify(code);
    eprint!("{}", render(&[VerifyRecord::new(path, &report)], format)?);
    Ok(report.pass)
}

fn run_construct(a: &ConstructArgs) -> Result<Outcome> {
    let params = CodeParams::new(a.n, a.d, a.w, a.constraint.into())?;
    let spec = offset_spec(a)?;
    let code = construct_with(params, spec, a.engine.into(), &mut || false)?.expect("never stopped");
    emit(&format_code(&code), a.out.as_deref())?;
    let name = a.out.as_ref().map_or_else(|| "-".to_string(), |p| p.display().to_string());
    summarize(&name, &code, a.format)
}

fn run_verify(a: &VerifyArgs) -> Result<Outcome> {
    let mut records = Vec::new();
    for path in &a.files {
        let code = read_code(path)?;
        records.push(VerifyRecord::new(&path.display().to_string(), &verify(&code)));
    }
    emit(&render(&records, a.output.format)?, a.output.out.as_deref())?;
    Ok(records.iter().all(|r| r.pass))
}

fn run_table(a: &TableArgs) -> Result<Outcome> {
    let selected: Vec<TableEntrySpec> = entries(a.reproduce)
        .into_iter()
        .filter(|e| a.entry.is_none_or(|(n, d)| e.n == n && e.d == d))
        .collect();
    if selected.is_empty() {
        return Err(CliError::Usage("no table entry matches --entry".into()));
    }
    let opts = RunOptions {
        include_slow: a.include_slow || a.entry.is_some(),
        budget: Duration::from_secs(a.budget_secs),
        engine: Engine::Auto,
    };
    let outcomes = run_entries(&selected, &opts, a.jobs)?;
    if let Some(dir) = &a.save_dir {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        for o in &outcomes {
            if let Some(code) = &o.code {
                let e = &o.spec;
                write_code(&dir.join(format!("table{}_n{}_d{}.txt", e.table, e.n, e.d)), code)?;
            }
        }
    }
    let records: Vec<TableRecord> = outcomes.iter().map(TableRecord::new).collect();
    emit(&render(&records, a.output.format)?, a.output.out.as_deref())?;
    let failed = outcomes.iter().filter(|o| o.spec.graded() && o.status.is_failure()).count();
    if a.output.format == Format::Text {
        let info = outcomes.iter().filter(|o| !o.spec.graded() && o.status.is_failure()).count();
        eprintln!(
            "{} entries: {} graded failures, {} informational mismatches",
            outcomes.len(),
            failed,
            info
        );
    }
    Ok(failed == 0)
}

fn write_components(dir: &Path, first: &str, second: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    fs::write(dir.join("factor1.txt"), first).map_err(CliError::io(dir.join("factor1.txt")))?;
    fs::write(dir.join("factor2.txt"), second).map_err(CliError::io(dir.join("factor2.txt")))
}

fn binary_pair(a: &ProductArgs, d: usize) -> Result<(BinaryCode, BinaryCode)> {
    let (n, w) = (a.n, a.w);
    Ok(match a.construction {
        ProductKind::BinaryRCw => (products::binary_cw_r_lexicode(n, d, w)?, products::binary_lexicode(n, d)?),
        ProductKind::BinaryR => (products::binary_cw_lexicode(n, d, w)?, products::binary_r_lexicode(n, d)?),
        _ => (products::binary_cw_lexicode(n, d, w)?, products::binary_lexicode(n, d)?),
    })
}

fn ternary_pair(a: &ProductArgs, d: usize) -> Result<(TernaryCode, BinaryCode)> {
    let (n, w) = (a.n, a.w);
    Ok(match a.construction {
        ProductKind::TernaryR => (products::ternary_cw_r_lexicode(n, d, w)?, products::binary_lexicode(n - w, d)?),
        ProductKind::TernaryBinaryR => (products::ternary_cw_lexicode(n, d, w)?, products::binary_r_lexicode(n - w, d)?),
        _ => (products::ternary_cw_lexicode(n, d, w)?, products::binary_lexicode(n - w, d)?),
    })
}

fn run_product(a: &ProductArgs) -> Result<Outcome> {
    let target: ConstraintKind = a.constraint.into();
    CodeParams::new(a.n, a.d, a.w, target)?;
    // A reverse-constrained code at distance d + 1 gives distance d after the
    // coordinate complement for odd n.
    let build_d = if target == ConstraintKind::GcRc && a.n % 2 == 1 { a.d + 1 } else { a.d };
    if build_d > a.n {
        return Err(CliError::Usage(format!("distance {} too large for odd length {}", a.d, a.n)));
    }
    let code = match a.construction {
        ProductKind::D2 => {
            if a.d != 2 {
                return Err(CliError::Usage("the d2 construction needs --d 2".into()));
            }
            match target {
                ConstraintKind::Gc => products::gc_d2_witness(a.n, a.w)?,
                ConstraintKind::GcRc => products::gcrc_d2_witness(a.n, a.w)?,
                ConstraintKind::GcR => {
                    let b1 = products::binary_cw_lexicode(a.n, 2, a.w)?;
                    products::product_gc(&b1, &products::odd_weight_r_code(a.n)?)?
                }
            }
        }
        ProductKind::Binary | ProductKind::BinaryRCw | ProductKind::BinaryR => {
            let (b1, b2) = binary_pair(a, build_d)?;
            if let Some(dir) = &a.components {
                write_components(dir, &format_component(&b1), &format_component(&b2))?;
            }
            products::product_gc(&b1, &b2)?
        }
        ProductKind::Ternary | ProductKind::TernaryR | ProductKind::TernaryBinaryR => {
            let (t, b) = ternary_pair(a, build_d)?;
            if let Some(dir) = &a.components {
                write_components(dir, &format_component(&t), &format_component(&b))?;
            }
            products::product_ternary(&t, &b)?
        }
    };
    let code = match (target, code.params.kind) {
        (ConstraintKind::Gc, _) => Code { params: CodeParams { kind: ConstraintKind::Gc, ..code.params }, ..code },
        (t, k) if t == k => code,
        (ConstraintKind::GcRc, ConstraintKind::GcR) => products::r_to_rc(&code)?,
        (t, k) => {
            return Err(CliError::Usage(format!(
                "construction {:?} gives a {k} code, not {t}",
                a.construction
            )))
        }
    };
    emit(&format_code(&code), a.out.as_deref())?;
    let name = a.out.as_ref().map_or_else(|| "-".to_string(), |p| p.display().to_string());
    summarize(&name, &code, Format::Text)
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Bound(a) => run_bound(a),
        Command::Construct(a) => run_construct(a),
        Command::Verify(a) => run_verify(a),
        Command::Table(a) => run_table(a),
        Command::Product(a) => run_product(a),
    }
}

/// Parses arguments and runs; returns the process exit code: 0 success,
/// 1 verification or reproduction mismatch, 2 usage or input error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
