//! Command line front end: `latpoly poly|cws|nef|mori [OPTION-STRINGS] [in-file [out-file]]`.
//!
//! The classic single-letter option strings (`-gve`, `-Lp`, `-c3`, ...) are passed
//! through as trailing arguments and parsed by each subcommand.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};

pub mod cws;
pub mod input;
pub mod mori;
pub mod nef;
pub mod poly;
pub mod render;

use input::{Reader, Record};

#[derive(Debug)]
pub enum CliError {
    /// Malformed input; aborts with exit code 1.
    Parse { line: usize, col: usize, msg: String },
    /// Bad or conflicting options; exit code 1.
    Usage(String),
    /// Out of scope option or a size cap; exit code 2.
    Capability(String),
    Io(io::Error),
    /// A problem with one record; reported and processing continues.
    Domain(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse { line, col, msg } => write!(f, "parse error at line {line}, column {col}: {msg}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Capability(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Domain(m) => write!(f, "{m}"),
        }
    }
}

impl From<latpoly::Error> for CliError {
    fn from(e: latpoly::Error) -> Self {
        match e {
            latpoly::Error::Capability(m) => CliError::Capability(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Capability(_) => 2,
            CliError::Domain(_) => 0,
            _ => 1,
        }
    }
}

/// Prompts go to standard output; results go to the output file if one was given.
pub struct Console<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    file: Option<BufWriter<File>>,
    interactive: bool,
}

impl<'a> Console<'a> {
    pub fn new(out: &'a mut dyn Write, err: &'a mut dyn Write, interactive: bool) -> Self {
        Console {
            out,
            err,
            file: None,
            interactive,
        }
    }

    pub fn prompt(&mut self, s: &str) {
        if self.interactive {
            let _ = self.out.write_all(s.as_bytes());
            let _ = self.out.flush();
        }
    }

    pub fn emit(&mut self, s: &str) -> io::Result<()> {
        match &mut self.file {
            Some(f) => f.write_all(s.as_bytes()),
            None => self.out.write_all(s.as_bytes()),
        }
    }

    pub fn error(&mut self, s: &str) {
        let _ = self.err.write_all(s.as_bytes());
    }

    fn flush(&mut self) -> io::Result<()> {
        if let Some(f) = &mut self.file {
            f.flush()?;
        }
        self.out.flush()?;
        self.err.flush()
    }
}

/// Per-record output buffers, optionally connected to the live console and reader.
pub struct Io<'r, 'a> {
    pub out: String,
    pub err: String,
    live: Option<(&'r mut Console<'a>, &'r mut Reader<'a>)>,
}

impl<'r, 'a> Io<'r, 'a> {
    fn buffered() -> Self {
        Io {
            out: String::new(),
            err: String::new(),
            live: None,
        }
    }

    /// Writes buffered output now (so that it appears before a prompt).
    pub fn flush(&mut self) -> Result<(), CliError> {
        if let Some((c, _)) = &mut self.live {
            c.emit(&std::mem::take(&mut self.out))?;
            c.error(&std::mem::take(&mut self.err));
        }
        Ok(())
    }

    /// Reads the next integer of the input stream after showing `prompt`.
    pub fn read_int(&mut self, prompt: &str, what: &str) -> Result<i64, CliError> {
        self.flush()?;
        match &mut self.live {
            Some((c, r)) => {
                c.prompt(prompt);
                r.int_token(what)
            }
            None => Err(CliError::Usage("this mode reads further input and cannot run in parallel".into())),
        }
    }

    /// Reads the next raw token of the input stream with its line and column.
    pub fn read_token(&mut self, what: &str) -> Result<(usize, usize, String), CliError> {
        match &mut self.live {
            Some((_, r)) => {
                let (col, t) = r.token(what)?;
                Ok((r.line(), col, t))
            }
            None => Err(CliError::Usage("this mode reads further input and cannot run in parallel".into())),
        }
    }
}

/// Settings shared by all subcommands.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Largest dimension accepted (for nef: dimension of the Gorenstein cone minus one).
    #[arg(long, default_value_t = 10)]
    pub max_dim: usize,
    /// Largest number of lattice points accepted for a single polytope.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_points: usize,
    /// Number of worker threads; output order is preserved.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl Common {
    pub fn check_dim(&self, d: usize, what: &str) -> Result<(), CliError> {
        if d > self.max_dim {
            return Err(CliError::Capability(format!(
                "{what} {d} exceeds --max-dim {}; rerun with --max-dim {d} or larger",
                self.max_dim
            )));
        }
        Ok(())
    }

    pub fn check_points(&self, np: usize) -> Result<(), CliError> {
        if np > self.max_points {
            return Err(CliError::Capability(format!(
                "polytope has {np} lattice points, more than --max-points {}; rerun with a larger cap",
                self.max_points
            )));
        }
        Ok(())
    }
}

#[derive(Args, Debug, Clone)]
pub struct Legacy {
    #[command(flatten)]
    pub common: Common,
    /// Option strings such as -gve, followed by optional input and output files.
    #[arg(allow_hyphen_values = true, trailing_var_arg = true)]
    pub args: Vec<String>,
}

impl Legacy {
    /// Moves `--max-dim`, `--max-points` and `--jobs` given after the option strings
    /// into `common`.
    pub fn normalized(&self) -> Result<Legacy, CliError> {
        let mut out = self.clone();
        out.args.clear();
        let mut it = self.args.iter();
        while let Some(a) = it.next() {
            let (name, inline) = match a.split_once('=') {
                Some((n, v)) => (n, Some(v.to_string())),
                None => (a.as_str(), None),
            };
            if !matches!(name, "--max-dim" | "--max-points" | "--jobs") {
                out.args.push(a.clone());
                continue;
            }
            let v = match inline {
                Some(v) => v,
                None => it
                    .next()
                    .cloned()
                    .ok_or_else(|| CliError::Usage(format!("{name} needs a value")))?,
            };
            let n: usize = v
                .parse()
                .map_err(|_| CliError::Usage(format!("{name} expects a nonnegative integer, found `{v}`")))?;
            match name {
                "--max-dim" => out.common.max_dim = n,
                "--max-points" => out.common.max_points = n,
                _ => out.common.jobs = n.max(1),
            }
        }
        Ok(out)
    }
}

#[derive(Parser, Debug)]
#[command(name = "latpoly", version, about = "Exact computations with lattice polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polytope data: points, vertices, equations, Hodge numbers, normal forms, IP simplices.
    #[command(after_help = poly::HELP)]
    Poly(Legacy),
    /// Weight systems from a polytope (-N) and polytope data for IP weight systems (-i).
    #[command(after_help = cws::HELP)]
    Cws(Legacy),
    /// Nef partitions and Gorenstein cones.
    #[command(after_help = nef::HELP)]
    Nef(Legacy),
    /// Star triangulations, Stanley-Reisner ideals and Mori cones.
    #[command(after_help = mori::HELP)]
    Mori(Legacy),
}

/// Splits trailing arguments into option strings and up to two file names.
pub fn split_args(args: &[String]) -> Result<(Vec<String>, Option<String>, Option<String>), CliError> {
    let mut opts = Vec::new();
    let mut files = Vec::new();
    for a in args {
        if a.starts_with('-') && a.len() > 1 {
            opts.push(a.clone());
        } else if a == "-" {
            opts.push("-f".into());
        } else {
            files.push(a.clone());
        }
    }
    if files.len() > 2 {
        return Err(CliError::Usage(format!("unexpected argument `{}`", files[2])));
    }
    let mut it = files.into_iter();
    Ok((opts, it.next(), it.next()))
}

/// One subcommand run over a stream of records.
pub trait Job: Sync {
    /// Prompt shown before each record in interactive mode.
    fn prompt(&self) -> String;
    /// Weights of weight-system input add up to this multiple of the degree.
    fn ratio(&self) -> i64 {
        1
    }
    /// Whether processing a record reads further input.
    fn needs_input(&self) -> bool {
        false
    }
    fn process(&self, rec: &Record, io: &mut Io) -> Result<(), CliError>;
    /// Output after the last record.
    fn finish(&self, _io: &mut Io) {}
}

pub struct Streams<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Runs `job` over all records; returns the exit code.
pub fn drive(job: &dyn Job, common: &Common, filter: bool, input: Option<String>, output: Option<String>, s: Streams) -> i32 {
    let Streams { stdin, stdout, stderr } = s;
    let src: Box<dyn BufRead + '_> = match &input {
        Some(path) => match File::open(path) {
            Ok(f) => Box::new(BufReader::new(f)),
            Err(e) => {
                let _ = writeln!(stderr, "cannot open input file `{path}`: {e}");
                return 1;
            }
        },
        None => Box::new(stdin),
    };
    let interactive = input.is_none() && !filter;
    let mut console = Console::new(stdout, stderr, interactive);
    if let Some(path) = &output {
        match File::create(path) {
            Ok(f) => console.file = Some(BufWriter::new(f)),
            Err(e) => {
                console.error(&format!("cannot create output file `{path}`: {e}\n"));
                return 1;
            }
        }
    }
    let mut reader = Reader::new(src);
    let code = if common.jobs > 1 && !interactive && !job.needs_input() {
        drive_parallel(job, common.jobs, &mut console, &mut reader)
    } else {
        drive_sequential(job, &mut console, &mut reader)
    };
    let mut io = Io::buffered();
    if code == 0 {
        job.finish(&mut io);
    }
    let _ = console.emit(&io.out);
    console.error(&io.err);
    let _ = console.flush();
    code
}

/// Writes the buffers of one record; returns `Some(exit code)` if processing must stop.
fn report(console: &mut Console, out: &str, err: &str, res: Result<(), CliError>) -> Option<i32> {
    if let Err(e) = console.emit(out) {
        console.error(&format!("i/o error: {e}\n"));
        return Some(1);
    }
    console.error(err);
    match res {
        Ok(()) => None,
        Err(CliError::Domain(m)) => {
            console.error(&format!("{m}\n"));
            None
        }
        Err(e) => {
            console.error(&format!("{e}\n"));
            Some(e.exit_code())
        }
    }
}

fn drive_sequential<'a>(job: &dyn Job, console: &mut Console<'a>, reader: &mut Reader<'a>) -> i32 {
    let prompt = job.prompt();
    loop {
        console.prompt(&prompt);
        let rec = match reader.read_record(job.ratio(), console) {
            Ok(Some(r)) => r,
            Ok(None) => return 0,
            Err(e) => {
                console.error(&format!("{e}\n"));
                return e.exit_code();
            }
        };
        let mut io = Io {
            out: String::new(),
            err: String::new(),
            live: Some((&mut *console, &mut *reader)),
        };
        let res = job.process(&rec, &mut io);
        let (out, err) = (std::mem::take(&mut io.out), std::mem::take(&mut io.err));
        drop(io);
        if let Some(code) = report(console, &out, &err, res) {
            return code;
        }
    }
}

type Outcome = (String, String, Result<(), CliError>);

fn drive_parallel<'a>(job: &dyn Job, jobs: usize, console: &mut Console<'a>, reader: &mut Reader<'a>) -> i32 {
    let mut records = Vec::new();
    let mut read_error = None;
    loop {
        match reader.read_record(job.ratio(), console) {
            Ok(Some(r)) => records.push(r),
            Ok(None) => break,
            Err(e) => {
                read_error = Some(e);
                break;
            }
        }
    }
    let results: Vec<Mutex<Option<Outcome>>> = records.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.min(records.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= records.len() {
                    break;
                }
                let mut io = Io::buffered();
                let res = job.process(&records[i], &mut io);
                *results[i].lock().unwrap() = Some((io.out, io.err, res));
            });
        }
    });
    for slot in results {
        let (out, err, res) = slot.into_inner().unwrap().expect("record processed");
        if let Some(code) = report(console, &out, &err, res) {
            return code;
        }
    }
    match read_error {
        Some(e) => {
            console.error(&format!("{e}\n"));
            e.exit_code()
        }
        None => 0,
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, s: Streams) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = s.stdout.write_all(text.as_bytes());
            } else {
                let _ = s.stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let (Command::Poly(l) | Command::Cws(l) | Command::Nef(l) | Command::Mori(l)) = &cli.command;
    let l = match l.normalized() {
        Ok(l) => l,
        Err(e) => return fail(e, s),
    };
    match &cli.command {
        Command::Poly(_) => poly::run(&l, s),
        Command::Cws(_) => cws::run(&l, s),
        Command::Nef(_) => nef::run(&l, s),
        Command::Mori(_) => mori::run(&l, s),
    }
}

/// Reports an option error and returns its exit code.
pub fn fail(e: CliError, s: Streams) -> i32 {
    let _ = writeln!(s.stderr, "{e}");
    e.exit_code()
}

/// Runs a subcommand text with `input` as standard input; returns `(exit code, stdout, stderr)`.
pub fn run_capture(args: &[&str], input: &str) -> (i32, String, String) {
    let mut stdin = input.as_bytes();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("latpoly").chain(args.iter().copied()),
        Streams {
            stdin: &mut stdin,
            stdout: &mut out,
            stderr: &mut err,
        },
    );
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}
