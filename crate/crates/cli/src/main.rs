use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use linkhom::catalog::{
    convert_upstream_dump, emit, filter_ke, parse_catalog, run_batch, BatchOptions, CatalogWarning, InputFormat,
    OutputFormat,
};
use linkhom::classify::{classify_link, find_twins, LinkRecord};
use linkhom::covers::cover_record;
use linkhom::decompose::{find_decompositions, preferred_decomposition, render_polynomial, Block};
use linkhom::oracle::verify_record;
use linkhom::WeightSystem;

const EXIT_ENTRY_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "linkhom", version, about = "Homology of links of weighted homogeneous singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one link and print its record as JSON.
    Classify {
        #[command(flatten)]
        ws: WeightArgs,
        /// Re-derive the record with the brute-force oracles.
        #[arg(long, hide = true)]
        verify: bool,
    },
    /// Classify every row of a catalog.
    Batch {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: InFormat,
        /// Keep only rows with the given flag set.
        #[arg(long, value_enum)]
        filter: Option<Filter>,
        #[arg(long, value_enum, default_value = "jsonl")]
        emit: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Branched cover `z^p + f` and its sphere type.
    Cover {
        #[command(flatten)]
        ws: WeightArgs,
        #[arg(long)]
        p: u64,
    },
    /// Groups of rational homology spheres sharing d, μ and |H|.
    Twins {
        #[arg(long)]
        input: PathBuf,
        /// Defaults to jsonl for `.jsonl` files and csv otherwise.
        #[arg(long, value_enum)]
        format: Option<InFormat>,
    },
    /// BP/chain/cycle decompositions of a weight system.
    Decompose {
        #[command(flatten)]
        ws: WeightArgs,
        /// List every decomposition instead of the preferred one.
        #[arg(long)]
        all: bool,
    },
    /// Best-effort conversion of a plain-text hypersurface list to catalog CSV.
    Convert {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(clap::Args)]
struct WeightArgs {
    /// Comma-separated weights, e.g. 13,143,775,620,465.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    weights: Vec<u64>,
    /// Weighted degree; defaults to the sum of the weights minus one.
    #[arg(long)]
    degree: Option<u64>,
}

impl WeightArgs {
    fn system(&self) -> Result<WeightSystem, Failure> {
        WeightSystem::new(&self.weights, self.degree).map_err(|e| Failure::usage(e.to_string()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InFormat {
    Csv,
    Jsonl,
}

impl From<InFormat> for InputFormat {
    fn from(f: InFormat) -> Self {
        match f {
            InFormat::Csv => InputFormat::Csv,
            InFormat::Jsonl => InputFormat::Jsonl,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Jsonl,
    Markdown,
}

impl From<OutFormat> for OutputFormat {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => OutputFormat::Csv,
            OutFormat::Jsonl => OutputFormat::Jsonl,
            OutFormat::Markdown => OutputFormat::Markdown,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Filter {
    Ke,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, msg: msg.into() }
    }

    fn entry(msg: impl Into<String>) -> Self {
        Self { code: EXIT_ENTRY_FAILURE, msg: msg.into() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::entry(e.to_string()))?;
    print_line(&text)
}

fn print_line(text: &str) -> Result<(), Failure> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn read_catalog(path: &Path, format: InputFormat) -> Result<Vec<linkhom::catalog::CatalogEntry>, Failure> {
    let file = File::open(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let parsed = parse_catalog(file, format).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        match w {
            CatalogWarning::DuplicateEntry { line, first_line } => {
                eprintln!("warning: line {line} repeats the entry on line {first_line}")
            }
        }
    }
    Ok(parsed.entries)
}

fn classify(ws: &WeightArgs, verify: bool) -> Result<(), Failure> {
    let system = ws.system()?;
    let rec = classify_link(&system).map_err(|e| Failure::entry(format!("{system}: {e}")))?;
    for w in &rec.warnings {
        eprintln!("warning: {w}");
    }
    if verify {
        let checks = verify_record(&rec).map_err(|e| Failure::entry(format!("verification failed: {e}")))?;
        if checks.is_empty() {
            eprintln!("verify: no oracle applies at this scale");
        }
        for c in checks {
            eprintln!("verify: {c}");
        }
    }
    print_json(&rec)
}

fn batch(
    input: &Path,
    format: InFormat,
    filter: Option<Filter>,
    out_format: OutFormat,
    out: Option<&Path>,
    threads: Option<usize>,
) -> Result<(), Failure> {
    let mut entries = read_catalog(input, format.into())?;
    if let Some(Filter::Ke) = filter {
        entries = filter_ke(entries);
    }
    let items = run_batch(&entries, BatchOptions { threads });
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    emit(&items, out_format.into(), &mut sink)?;
    sink.flush()?;
    let failed: Vec<_> = items.iter().filter(|i| i.result.is_err()).collect();
    for item in &failed {
        if let Err(e) = &item.result {
            eprintln!("line {}: {e}", item.entry.source_line);
        }
    }
    for item in &items {
        if let Ok(rec) = &item.result {
            for w in &rec.warnings {
                eprintln!("line {}: warning: {w}", item.entry.source_line);
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::entry(format!("{} of {} entries failed", failed.len(), items.len())))
    }
}

#[derive(Serialize)]
struct TwinMember<'a> {
    weights: &'a [u64],
    #[serde(rename = "type")]
    label: Option<&'a str>,
    homology: String,
}

#[derive(Serialize)]
struct TwinOutput<'a> {
    degree: u64,
    mu: String,
    torsion_order: String,
    members: Vec<TwinMember<'a>>,
}

fn twins(input: &Path, format: Option<InFormat>) -> Result<(), Failure> {
    let format = format.map(InputFormat::from).unwrap_or_else(|| {
        if input.extension().is_some_and(|e| e == "jsonl") {
            InputFormat::Jsonl
        } else {
            InputFormat::Csv
        }
    });
    let entries = read_catalog(input, format)?;
    let items = run_batch(&entries, BatchOptions::default());
    let records: Vec<LinkRecord> = items.iter().filter_map(|i| i.result.clone().ok()).collect();
    for group in find_twins(&records) {
        let out = TwinOutput {
            degree: group.degree,
            mu: group.mu.to_string(),
            torsion_order: group.torsion_order.to_string(),
            members: group
                .members
                .iter()
                .map(|m| TwinMember { weights: m.ws.weights(), label: m.type_label(), homology: m.homology_text() })
                .collect(),
        };
        print_line(&serde_json::to_string(&out).map_err(|e| Failure::entry(e.to_string()))?)?;
    }
    let failed = items.len() - records.len();
    if failed > 0 {
        return Err(Failure::entry(format!("{failed} entries could not be classified")));
    }
    Ok(())
}

#[derive(Serialize)]
struct DecompositionOutput<'a> {
    label: &'a str,
    polynomial: String,
    blocks: &'a [Block],
}

fn decompose(ws: &WeightArgs, all: bool) -> Result<(), Failure> {
    let system = ws.system()?;
    let decs = if all { find_decompositions(&system) } else { preferred_decomposition(&system).into_iter().collect() };
    let out: Vec<DecompositionOutput> = decs
        .iter()
        .map(|d| DecompositionOutput { label: d.label(), polynomial: render_polynomial(d, &system), blocks: d.blocks() })
        .collect();
    print_json(&out)
}

fn convert(input: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(input).map_err(|e| Failure::usage(format!("{}: {e}", input.display())))?;
    let entries = convert_upstream_dump(&text);
    let arity = entries.iter().map(|e| e.weights.len()).max().unwrap_or(5);
    let mut out = io::stdout().lock();
    let header: Vec<String> = (0..arity).map(|i| format!("w{i}")).chain(["d".into(), "ke".into()]).collect();
    writeln!(out, "{}", header.join(","))?;
    for e in entries {
        let mut cells: Vec<String> = (0..arity).map(|i| e.weights.get(i).map_or(String::new(), u64::to_string)).collect();
        cells.push(e.degree.map_or(String::new(), |d| d.to_string()));
        cells.push(e.ke_flag.map_or(String::new(), |f| f.to_string()));
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { ws, verify } => classify(&ws, verify),
        Command::Batch { input, format, filter, emit, out, threads } => {
            batch(&input, format, filter, emit, out.as_deref(), threads)
        }
        Command::Cover { ws, p } => {
            let system = ws.system()?;
            let rec = cover_record(&system, p).map_err(|e| Failure::entry(format!("{system}, p = {p}: {e}")))?;
            print_json(&rec)
        }
        Command::Twins { input, format } => twins(&input, format),
        Command::Decompose { ws, all } => decompose(&ws, all),
        Command::Convert { input } => convert(&input),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
