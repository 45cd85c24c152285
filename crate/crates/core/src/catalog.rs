//! Catalog input, batch classification, and table output.
//!
//! The normalised CSV schema is `w0,…,w_{m-1}[,d][,ke]`. A header row is
//! recognised when it names columns `w0`, `w1`, …; then `d` (or `degree`)
//! and `ke` (or `ke_flag`) are picked up by name and every other column is
//! ignored. Without a header each row holds `arity` weights, optionally
//! followed by the degree and a `true`/`false` flag. `#` starts a comment.
//!
//! JSONL rows look like `{"weights": [1,1,1,4,6], "degree": 12, "ke": true}`.

use std::collections::HashMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_link, LinkRecord};
use crate::error::{Error, Result};
use crate::weights::WeightSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub weights: Vec<u64>,
    pub degree: Option<u64>,
    pub ke_flag: Option<bool>,
    pub source_line: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
    Markdown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogWarning {
    DuplicateEntry { line: usize, first_line: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParsedCatalog {
    pub entries: Vec<CatalogEntry>,
    pub warnings: Vec<CatalogWarning>,
}

/// Number of weights in a headerless CSV row.
pub const DEFAULT_ARITY: usize = 5;

pub fn parse_catalog<R: Read>(input: R, format: InputFormat) -> Result<ParsedCatalog> {
    let entries = match format {
        InputFormat::Csv => parse_csv(input, DEFAULT_ARITY)?,
        InputFormat::Jsonl => parse_jsonl(input)?,
    };
    let mut seen: HashMap<(Vec<u64>, Option<u64>), usize> = HashMap::new();
    let mut warnings = Vec::new();
    for e in &entries {
        let key = (e.weights.clone(), e.degree);
        match seen.get(&key) {
            Some(&first_line) => warnings.push(CatalogWarning::DuplicateEntry { line: e.source_line, first_line }),
            None => {
                seen.insert(key, e.source_line);
            }
        }
    }
    Ok(ParsedCatalog { entries, warnings })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_u64(cell: &str, line: usize) -> Result<u64> {
    let v: u64 = cell.parse().map_err(|_| parse_err(line, format!("not a positive integer: {cell:?}")))?;
    if v == 0 {
        return Err(parse_err(line, "zero is not a valid weight or degree"));
    }
    Ok(v)
}

fn parse_flag(cell: &str, line: usize) -> Result<Option<bool>> {
    match cell.to_ascii_lowercase().as_str() {
        "" => Ok(None),
        "true" | "yes" | "1" => Ok(Some(true)),
        "false" | "no" | "0" => Ok(Some(false)),
        _ => Err(parse_err(line, format!("not a flag: {cell:?}"))),
    }
}

struct Columns {
    weights: Vec<usize>,
    degree: Option<usize>,
    ke: Option<usize>,
}

fn header_columns(record: &csv::StringRecord) -> Option<Columns> {
    let mut weights: Vec<(usize, usize)> = Vec::new();
    let mut degree = None;
    let mut ke = None;
    for (i, name) in record.iter().enumerate() {
        let name = name.trim().to_ascii_lowercase();
        if let Some(k) = name.strip_prefix('w').and_then(|k| k.parse::<usize>().ok()) {
            weights.push((k, i));
        } else if name == "d" || name == "degree" {
            degree = Some(i);
        } else if name == "ke" || name == "ke_flag" {
            ke = Some(i);
        }
    }
    if weights.is_empty() {
        return None;
    }
    weights.sort();
    Some(Columns { weights: weights.into_iter().map(|(_, i)| i).collect(), degree, ke })
}

fn parse_csv<R: Read>(input: R, arity: usize) -> Result<Vec<CatalogEntry>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut columns: Option<Columns> = None;
    let mut entries = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if idx == 0 || (entries.is_empty() && columns.is_none()) {
            if let Some(c) = header_columns(&record) {
                columns = Some(c);
                continue;
            }
        }
        let entry = match &columns {
            Some(c) => {
                let mut weights = Vec::new();
                for &i in &c.weights {
                    match record.get(i) {
                        Some("") | None => {}
                        Some(cell) => weights.push(parse_u64(cell, line)?),
                    }
                }
                let degree = match c.degree.and_then(|i| record.get(i)) {
                    Some("") | None => None,
                    Some(cell) => Some(parse_u64(cell, line)?),
                };
                let ke_flag = match c.ke.and_then(|i| record.get(i)) {
                    Some(cell) => parse_flag(cell, line)?,
                    None => None,
                };
                CatalogEntry { weights, degree, ke_flag, source_line: line }
            }
            None => {
                let mut cells: Vec<&str> = record.iter().collect();
                let mut ke_flag = None;
                if let Some(last) = cells.last() {
                    if last.parse::<u64>().is_err() {
                        ke_flag = parse_flag(last, line)?;
                        cells.pop();
                    }
                }
                let nums = cells.iter().map(|c| parse_u64(c, line)).collect::<Result<Vec<_>>>()?;
                let (weights, degree) = if nums.len() == arity {
                    (nums, None)
                } else if nums.len() == arity + 1 {
                    (nums[..arity].to_vec(), Some(nums[arity]))
                } else {
                    return Err(parse_err(line, format!("expected {arity} weights and an optional degree, got {} numbers", nums.len())));
                };
                CatalogEntry { weights, degree, ke_flag, source_line: line }
            }
        };
        if entry.weights.is_empty() {
            return Err(parse_err(line, "no weights"));
        }
        entries.push(entry);
    }
    Ok(entries)
}

#[derive(Deserialize)]
struct JsonRow {
    weights: Vec<u64>,
    #[serde(default, alias = "d")]
    degree: Option<u64>,
    #[serde(default, alias = "ke_flag")]
    ke: Option<bool>,
}

fn parse_jsonl<R: Read>(mut input: R) -> Result<Vec<CatalogEntry>> {
    let mut text = String::new();
    input.read_to_string(&mut text).map_err(|e| parse_err(0, e.to_string()))?;
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let row: JsonRow = serde_json::from_str(raw).map_err(|e| parse_err(line, e.to_string()))?;
        if row.weights.is_empty() || row.weights.contains(&0) || row.degree == Some(0) {
            return Err(parse_err(line, "weights and degree must be positive"));
        }
        entries.push(CatalogEntry { weights: row.weights, degree: row.degree, ke_flag: row.ke, source_line: line });
    }
    Ok(entries)
}

/// Best-effort reader for plain-text dumps of weighted hypersurface lists.
///
/// Each line is scanned for a parenthesised weight tuple; the degree is
/// taken from an `X_d`/`X<d>` token if present, and `KE`/`yes`/`no` set the
/// flag. Lines without a tuple are skipped.
pub fn convert_upstream_dump(text: &str) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let Some(open) = line.find('(') else { continue };
        let Some(close) = line[open..].find(')').map(|c| open + c) else { continue };
        let weights: Option<Vec<u64>> = line[open + 1..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().ok().filter(|&w| w > 0))
            .collect();
        let Some(weights) = weights.filter(|w| !w.is_empty()) else { continue };
        let head = &line[..open];
        let degree = head
            .find('X')
            .map(|x| head[x + 1..].trim_start_matches(['_', '{']).chars().take_while(char::is_ascii_digit).collect::<String>())
            .and_then(|s| s.parse().ok());
        let lower = line[close..].to_ascii_lowercase();
        let ke_flag = if lower.contains("not ke") || lower.contains(" no") {
            Some(false)
        } else if lower.contains("ke") || lower.contains("yes") {
            Some(true)
        } else {
            None
        };
        out.push(CatalogEntry { weights, degree, ke_flag, source_line: i + 1 });
    }
    out
}

/// Keeps entries flagged Kähler–Einstein.
pub fn filter_ke(entries: Vec<CatalogEntry>) -> Vec<CatalogEntry> {
    entries.into_iter().filter(|e| e.ke_flag == Some(true)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchItem {
    pub entry: CatalogEntry,
    pub result: Result<LinkRecord>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BatchOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

pub fn classify_entry(entry: &CatalogEntry) -> Result<LinkRecord> {
    let ws = WeightSystem::new(&entry.weights, entry.degree)?;
    let mut rec = classify_link(&ws)?;
    rec.ke_flag = entry.ke_flag;
    Ok(rec)
}

/// One result per entry, in input order. Failures stay in the output.
pub fn run_batch(entries: &[CatalogEntry], options: BatchOptions) -> Vec<BatchItem> {
    let work = || {
        entries
            .par_iter()
            .map(|e| BatchItem { entry: e.clone(), result: classify_entry(e) })
            .collect()
    };
    match options.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    }
}

fn tuple(ws: &[u64]) -> String {
    format!("({})", ws.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
}

fn flag_text(f: Option<bool>) -> &'static str {
    match f {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

pub fn emit<W: Write>(items: &[BatchItem], format: OutputFormat, out: W) -> std::io::Result<()> {
    match format {
        OutputFormat::Csv => emit_csv(items, out),
        OutputFormat::Jsonl => emit_jsonl(items, out),
        OutputFormat::Markdown => emit_markdown(items, out),
    }
}

fn emit_csv<W: Write>(items: &[BatchItem], out: W) -> std::io::Result<()> {
    let arity = items.iter().map(|i| i.entry.weights.len()).max().unwrap_or(DEFAULT_ARITY);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..arity).map(|i| format!("w{i}")).collect();
    header.extend(
        ["d", "ke", "type", "polynomial", "mu", "rank", "h3", "torsion_order", "kind", "error"].map(String::from),
    );
    w.write_record(&header)?;
    for item in items {
        let mut row: Vec<String> = (0..arity)
            .map(|i| item.entry.weights.get(i).map_or(String::new(), u64::to_string))
            .collect();
        match &item.result {
            Ok(r) => {
                row.push(r.ws.degree().to_string());
                row.push(flag_text(item.entry.ke_flag).into());
                row.push(r.type_label().unwrap_or("unsupported").into());
                row.push(r.polynomial.clone().unwrap_or_default());
                row.push(r.mu.to_string());
                row.push(r.rank.to_string());
                row.push(r.homology_text());
                row.push(r.torsion_order.as_ref().map_or(String::new(), |t| t.to_string()));
                row.push(r.kind.to_string());
                row.push(String::new());
            }
            Err(e) => {
                row.push(item.entry.degree.map_or(String::new(), |d| d.to_string()));
                row.push(flag_text(item.entry.ke_flag).into());
                row.extend(std::iter::repeat(String::new()).take(7));
                row.push(e.to_string());
            }
        }
        w.write_record(&row)?;
    }
    w.flush()
}

#[derive(Serialize)]
struct FailedRow<'a> {
    source_line: usize,
    weights: &'a [u64],
    degree: Option<u64>,
    error: String,
}

fn emit_jsonl<W: Write>(items: &[BatchItem], mut out: W) -> std::io::Result<()> {
    for item in items {
        let line = match &item.result {
            Ok(r) => serde_json::to_string(r),
            Err(e) => serde_json::to_string(&FailedRow {
                source_line: item.entry.source_line,
                weights: &item.entry.weights,
                degree: item.entry.degree,
                error: e.to_string(),
            }),
        }
        .map_err(std::io::Error::other)?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn emit_markdown<W: Write>(items: &[BatchItem], mut out: W) -> std::io::Result<()> {
    writeln!(out, "| w | Polynomial | Type | d | μ | H₃ |")?;
    writeln!(out, "|---|---|---|---|---|---|")?;
    for item in items {
        match &item.result {
            Ok(r) => writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                tuple(r.ws.weights()),
                r.polynomial.as_deref().unwrap_or("-"),
                r.type_label().unwrap_or("unsupported"),
                r.ws.degree(),
                r.mu,
                r.homology_text()
            )?,
            Err(e) => writeln!(
                out,
                "| {} | error: {} | | {} | | |",
                tuple(&item.entry.weights),
                e,
                item.entry.degree.map_or(String::new(), |d| d.to_string())
            )?,
        }
    }
    Ok(())
}
