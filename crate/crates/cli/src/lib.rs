//! Command-line front end for `vlg-core`.
//!
//! `run` parses arguments, reads the input (plain text or FASTA), dispatches
//! to a subcommand and returns the process exit code: 0 on success, 2 on any
//! usage, input or pattern error.

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use vlg_core::matcher::NoProbe;
use vlg_core::reporter::count_combinations;
use vlg_core::{build_implicit_gap_graph, oracle, report_chunked, report_on_the_fly, Matcher, VlgPattern};

/// One searchable sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDocument {
    /// FASTA header token, or the file name in text mode.
    pub id: String,
    pub sequence: Vec<u8>,
}

#[derive(Parser, Debug)]
#[command(name = "vlg", version, about = "Variable-length-gap pattern matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// End positions of all matches.
    Match(Common),
    /// Every match combination, one per line.
    Combos {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Engine::Onthefly)]
        engine: Engine,
        /// Chunk length for the chunked engine (default 2(m+B)).
        #[arg(long)]
        chunk_len: Option<usize>,
    },
    /// Dump the implicit gap graph.
    Graph(Common),
    /// Brute-force reference; prints end positions, or combinations with --combos.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        combos: bool,
    },
    /// Instance and run statistics.
    Stats(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Pattern such as `A.{6,7}CC.{2,6}GT`.
    #[arg(short, long)]
    pattern: String,
    /// Input file, or `-` for standard input.
    #[arg(short, long)]
    text: PathBuf,
    /// Treat the input as FASTA (also enabled by a leading `>`).
    #[arg(long)]
    fasta: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Onthefly,
    Chunked,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug)]
enum CliError {
    Io(String, io::Error),
    Pattern(vlg_core::PatternError),
    Core(vlg_core::Error),
    Oracle(oracle::OracleError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(what, e) => write!(f, "{what}: {e}"),
            CliError::Pattern(e) => write!(f, "invalid pattern: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Oracle(e) => write!(f, "oracle: {e}"),
        }
    }
}

impl From<vlg_core::Error> for CliError {
    fn from(e: vlg_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<oracle::OracleError> for CliError {
    fn from(e: oracle::OracleError) -> Self {
        CliError::Oracle(e)
    }
}

/// Runs the CLI against the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = run_with(argv, &mut stdin.lock(), &mut out, &mut stderr.lock());
    match out.flush() {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => 2,
        _ => code,
    }
}

/// Like [`run`], with explicit streams.
pub fn run_with<I, T>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                return 2;
            }
            let _ = write!(out, "{rendered}");
            return 0;
        }
    };
    match dispatch(cli.command, stdin, out, err) {
        Ok(()) => 0,
        Err(CliError::Io(_, e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "vlg: error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let common = match &cmd {
        Command::Match(c) | Command::Graph(c) | Command::Stats(c) => c,
        Command::Combos { common, .. } | Command::Oracle { common, .. } => common,
    };
    let pattern = VlgPattern::parse(&common.pattern).map_err(CliError::Pattern)?;
    let needs_bounds = matches!(cmd, Command::Combos { .. } | Command::Graph(_))
        || matches!(cmd, Command::Oracle { combos: true, .. });
    if needs_bounds && !pattern.is_bounded() {
        return Err(vlg_core::Error::UnboundedGap.into());
    }
    if let Command::Combos { chunk_len: Some(len), .. } = cmd {
        let span = pattern.max_span().unwrap_or(usize::MAX);
        if len < span {
            return Err(vlg_core::Error::ChunkTooShort { len, span }.into());
        }
    }
    let docs = load(common, stdin, err)?;
    let format = common.format;
    let w = |e| CliError::Io("writing output".into(), e);
    for doc in &docs {
        let out_doc = Output { out: &mut *out, format, id: doc.id.as_str(), prefixed: docs.fasta };
        match &cmd {
            Command::Match(_) => {
                let mut o = out_doc;
                let mut res = Ok(());
                Matcher::new(pattern.clone()).run(&doc.sequence, &mut NoProbe, |end| {
                    if res.is_ok() {
                        res = o.end(end);
                    }
                });
                res.map_err(w)?;
            }
            Command::Combos { engine, chunk_len, .. } => {
                let mut o = out_doc;
                let mut res = Ok(());
                let mut sink = |c: &[usize]| {
                    if res.is_ok() {
                        res = o.ends(c);
                    }
                };
                match engine {
                    Engine::Onthefly => {
                        report_on_the_fly(&pattern, &doc.sequence, &mut sink)?;
                    }
                    Engine::Chunked => {
                        report_chunked(&pattern, &doc.sequence, *chunk_len, &mut sink)?;
                    }
                }
                res.map_err(w)?;
            }
            Command::Graph(_) => {
                let g = build_implicit_gap_graph(&pattern, &doc.sequence)?;
                out_doc.graph(&g).map_err(w)?;
            }
            Command::Oracle { combos, .. } => {
                let mut o = out_doc;
                if *combos {
                    for c in oracle::brute_force_combinations(&pattern, &doc.sequence)? {
                        o.ends(&c).map_err(w)?;
                    }
                } else {
                    for e in oracle::brute_force_endpoints(&pattern, &doc.sequence)? {
                        o.end(e).map_err(w)?;
                    }
                }
            }
            Command::Stats(_) => stats(&pattern, &doc.sequence, out_doc).map_err(w)?,
        }
    }
    Ok(())
}

struct Documents {
    docs: Vec<InputDocument>,
    fasta: bool,
}

impl<'a> IntoIterator for &'a Documents {
    type Item = &'a InputDocument;
    type IntoIter = std::slice::Iter<'a, InputDocument>;

    fn into_iter(self) -> Self::IntoIter {
        self.docs.iter()
    }
}

fn load(common: &Common, stdin: &mut dyn Read, err: &mut dyn Write) -> Result<Documents, CliError> {
    let name = common.text.display().to_string();
    let mut bytes = Vec::new();
    if name == "-" {
        stdin.read_to_end(&mut bytes)
    } else {
        File::open(&common.text).and_then(|mut f| f.read_to_end(&mut bytes))
    }
    .map_err(|e| CliError::Io(format!("reading {name}"), e))?;

    if common.fasta || bytes.first() == Some(&b'>') {
        let docs = ingest_fasta(BufReader::new(bytes.as_slice()), err)
            .map_err(|e| CliError::Io(format!("reading {name}"), e))?;
        return Ok(Documents { docs, fasta: true });
    }
    if bytes.last() == Some(&b'\n') {
        bytes.pop();
        if bytes.last() == Some(&b'\r') {
            bytes.pop();
        }
    }
    let id = if name == "-" { "stdin".to_string() } else { name };
    Ok(Documents { docs: vec![InputDocument { id, sequence: bytes }], fasta: false })
}

/// Splits FASTA input into records. Header lines start with `>`; the id is
/// the first whitespace-delimited token. Whitespace inside sequences is
/// dropped. Records with no sequence, and sequence data before the first
/// header, are skipped with a warning on `diag`.
pub fn ingest_fasta(input: impl BufRead, diag: &mut dyn Write) -> io::Result<Vec<InputDocument>> {
    let mut docs = Vec::new();
    let mut current: Option<InputDocument> = None;
    let mut orphan = false;
    let mut finish = |doc: Option<InputDocument>, docs: &mut Vec<InputDocument>| -> io::Result<()> {
        if let Some(doc) = doc {
            if doc.sequence.is_empty() {
                writeln!(diag, "vlg: warning: skipping empty record '{}'", doc.id)?;
            } else {
                docs.push(doc);
            }
        }
        Ok(())
    };
    for line in input.split(b'\n') {
        let line = line?;
        if let Some(header) = line.strip_prefix(b">") {
            finish(current.take(), &mut docs)?;
            let header = String::from_utf8_lossy(header);
            let id = header.split_whitespace().next().unwrap_or("").to_string();
            current = Some(InputDocument { id, sequence: Vec::new() });
        } else if let Some(doc) = current.as_mut() {
            doc.sequence.extend(line.iter().filter(|b| !b.is_ascii_whitespace()));
        } else if line.iter().any(|b| !b.is_ascii_whitespace()) {
            orphan = true;
        }
    }
    finish(current.take(), &mut docs)?;
    if orphan {
        writeln!(diag, "vlg: warning: ignoring sequence data before the first header")?;
    }
    Ok(docs)
}

struct Output<'a> {
    out: &'a mut dyn Write,
    format: Format,
    id: &'a str,
    prefixed: bool,
}

impl Output<'_> {
    fn prefix(&self) -> String {
        if self.prefixed {
            format!("{}:", self.id)
        } else {
            String::new()
        }
    }

    fn json(&mut self, mut value: serde_json::Value) -> io::Result<()> {
        if self.prefixed {
            value["id"] = json!(self.id);
        }
        writeln!(self.out, "{value}")
    }

    fn end(&mut self, end: usize) -> io::Result<()> {
        match self.format {
            Format::Text => writeln!(self.out, "{}{end}", self.prefix()),
            Format::Json => self.json(json!({ "end": end })),
        }
    }

    fn ends(&mut self, ends: &[usize]) -> io::Result<()> {
        match self.format {
            Format::Text => {
                let line: Vec<String> = ends.iter().map(usize::to_string).collect();
                writeln!(self.out, "{}{}", self.prefix(), line.join(","))
            }
            Format::Json => self.json(json!({ "ends": ends })),
        }
    }

    fn graph(mut self, g: &vlg_core::ImplicitGapGraph) -> io::Result<()> {
        match self.format {
            Format::Text => {
                let prefix = self.prefix();
                g.write_text(&mut self.out, &prefix)
            }
            Format::Json => {
                for layer in 0..g.k() {
                    for n in g.nodes(layer) {
                        self.json(json!({ "node": [layer + 1, n.endpos] }))?;
                    }
                }
                for e in g.edges().collect::<Vec<_>>() {
                    self.json(json!({ "edge": [e.layer + 1, e.endpos, e.layer, e.pred_endpos] }))?;
                }
                Ok(())
            }
        }
    }
}

fn stats(p: &VlgPattern, text: &[u8], mut o: Output<'_>) -> io::Result<()> {
    let st = p.stats();
    let summary = Matcher::new(p.clone()).run(text, &mut NoProbe, |_| {});
    let beta = if p.is_bounded() {
        build_implicit_gap_graph(p, text).ok().map(|g| count_combinations(&g))
    } else {
        None
    };
    match o.format {
        Format::Text => {
            let prefix = o.prefix();
            let peaks: Vec<String> = summary.peak_list_sizes.iter().map(usize::to_string).collect();
            let fields = [
                ("n", text.len().to_string()),
                ("m", st.m.to_string()),
                ("k", st.k.to_string()),
                ("A", st.a.to_string()),
                ("B", st.b.map_or("unbounded".into(), |b| b.to_string())),
                ("alpha", summary.alpha().to_string()),
                ("matches", summary.counters.reported.to_string()),
                ("beta", beta.map_or("n/a".into(), |b| b.to_string())),
                ("peak_list_sizes", peaks.join(",")),
            ];
            for (key, value) in fields {
                writeln!(o.out, "{prefix}{key}={value}")?;
            }
            Ok(())
        }
        Format::Json => o.json(json!({
            "n": text.len(),
            "m": st.m,
            "k": st.k,
            "A": st.a,
            "B": st.b,
            "alpha": summary.alpha(),
            "matches": summary.counters.reported,
            // u128 does not fit a JSON number in general.
            "beta": beta.map(|b| b.to_string()),
            "peak_list_sizes": summary.peak_list_sizes,
        })),
    }
}
