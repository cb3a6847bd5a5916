//! The `automorph` command line.
//!
//! Exit status: 0 on success, 1 when a validation or verification step
//! fails, 2 on usage, input/output or parse errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use automorph_core::crypto::{keygen, CipherVariant, DEFAULT_MAX_DEGREE};
use automorph_core::inverse::{default_dmax, formal_inverse, is_exact_inverse, measure_inverse_degree, InverseDegree};
use automorph_core::parse::parse_scalar;
use automorph_core::verify::{check_keller, check_parametrized_minors, diagonal_normalization};
use automorph_core::{PolyMap, Scalar};
use clap::{Args, Parser, Subcommand};

use crate::document::MapDocument;
use crate::key_file::{parse_key, print_key, KeyFileError};
use crate::report::render_report;
use crate::spec_file::parse_family_spec;

#[derive(Parser, Debug)]
#[command(name = "automorph", version, about = "Build, verify and invert polynomial automorphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a family's forward and inverse maps from a spec file.
    GenMap {
        spec: PathBuf,
        /// Directory for `<stem>.forward.map` and `<stem>.inverse.map`.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print the Jacobian report of a map.
    Verify {
        map: PathBuf,
        /// Check the parametrized minor system for these diagonal
        /// coefficients (comma separated); without values they are read off
        /// the map.
        #[arg(long, num_args = 0..=1, value_delimiter = ',', allow_negative_numbers = true)]
        lambdas: Option<Vec<String>>,
        /// Exit with status 1 when the report shows a failure.
        #[arg(long)]
        strict: bool,
    },
    /// Print the polynomial inverse found by the formal-inverse iteration.
    Invert {
        map: PathBuf,
        /// Print the degree-truncated formal inverse itself, exact or not.
        #[arg(long)]
        oracle: bool,
        /// Truncation degree; defaults to deg(P)^(n-1) + 1.
        #[arg(long)]
        dmax: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the composition A(B(x)).
    Compose {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the degrees of a map and of its inverse.
    Degree {
        map: PathBuf,
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// Block cipher keys and byte encryption.
    #[command(subcommand)]
    Crypto(CryptoCommand),
}

#[derive(Subcommand, Debug)]
pub enum CryptoCommand {
    /// Generate a key file.
    Keygen {
        #[arg(long)]
        variant: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        modulus: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encrypt bytes.
    Encrypt(Stream),
    /// Decrypt bytes.
    Decrypt(Stream),
}

#[derive(Args, Debug)]
pub struct Stream {
    #[arg(long)]
    key: PathBuf,
    /// Input file; standard input when absent.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Why a command did not succeed.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    /// Bad arguments, unreadable files or malformed input.
    #[error("{0}")]
    Usage(String),
    /// The input was well formed but did not pass.
    #[error("{0}")]
    Rejected(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Rejected(_) => 1,
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, bytes: &[u8]) -> Outcome {
    match path {
        Some(p) => write_file(p, bytes),
        None => out.write_all(bytes).map_err(|e| Failure::Usage(format!("stdout: {e}"))),
    }
}

fn load_map(path: &Path) -> Result<PolyMap, Failure> {
    let doc = MapDocument::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    doc.to_map().map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn rejected(e: impl std::fmt::Display) -> Failure {
    Failure::Rejected(e.to_string())
}

fn forms(forms: &[Vec<Scalar>]) -> String {
    if forms.is_empty() {
        return "none".into();
    }
    let each: Vec<String> =
        forms.iter().map(|f| f.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")).collect();
    each.join("; ")
}

fn gen_map(spec_path: &Path, out_dir: &Path, out: &mut dyn Write) -> Outcome {
    let text = read(spec_path)?;
    let spec = parse_family_spec(&text).map_err(|e| Failure::Usage(format!("{}: {e}", spec_path.display())))?;
    let pair = spec.build().map_err(|e| rejected(format!("{}: {e}", spec.kind)))?;
    let stem = spec_path.file_stem().map_or_else(|| "map".into(), |s| s.to_string_lossy().into_owned());
    let (deg_f, deg_i) = (pair.forward.degree().or_zero(), pair.inverse.degree().or_zero());
    let doc = |map: &PolyMap, role: &str| {
        MapDocument::from_map(map)
            .with("family", pair.family)
            .with("role", role)
            .with("deg_forward", deg_f)
            .with("deg_inverse", deg_i)
            .with("jacobian", &pair.jacobian)
            .with("invariant_forms", forms(&pair.invariant_forms))
    };
    let forward_path = out_dir.join(format!("{stem}.forward.map"));
    let inverse_path = out_dir.join(format!("{stem}.inverse.map"));
    write_file(&forward_path, doc(&pair.forward, "forward").to_string().as_bytes())?;
    write_file(&inverse_path, doc(&pair.inverse, "inverse").to_string().as_bytes())?;
    let summary = format!(
        "family: {}\nvars: {}\ndeg_forward: {deg_f}\ndeg_inverse: {deg_i}\npredicted_deg_forward: {}\n\
         predicted_deg_inverse: {}\njacobian: {}\ninvariant_forms: {}\nforward: {}\ninverse: {}\n",
        pair.family,
        pair.forward.nvars(),
        pair.predicted_deg_forward,
        pair.predicted_deg_inverse,
        pair.jacobian,
        forms(&pair.invariant_forms),
        forward_path.display(),
        inverse_path.display(),
    );
    emit(out, None, summary.as_bytes())
}

fn verify(path: &Path, lambdas: Option<&[String]>, strict: bool, out: &mut dyn Write) -> Outcome {
    let map = load_map(path)?;
    let report = match lambdas {
        None => check_keller(&map),
        Some(values) => {
            let lambdas = if values.is_empty() {
                diagonal_normalization(&map).map_err(rejected)?
            } else {
                values
                    .iter()
                    .map(|v| parse_scalar(v, map.ring()).map_err(|e| Failure::Usage(format!("--lambdas `{v}`: {e}"))))
                    .collect::<Result<Vec<_>, _>>()?
            };
            check_parametrized_minors(&map, &lambdas).map_err(rejected)?
        }
    };
    emit(out, None, render_report(&report).as_bytes())?;
    let passed = report.is_keller() && report.all_minor_equations_hold();
    if strict && !passed {
        return Err(Failure::Rejected(format!("{}: verification failed", path.display())));
    }
    Ok(())
}

fn invert(path: &Path, oracle: bool, dmax: Option<u32>, target: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let map = load_map(path)?;
    let dmax = dmax.unwrap_or_else(|| default_dmax(&map));
    if oracle {
        let series = formal_inverse(&map, dmax).map_err(rejected)?;
        let exact = is_exact_inverse(&map, &series.map).map_err(rejected)?.exact;
        let doc = MapDocument::from_map(&series.map).with("truncation_degree", dmax).with("exact", exact);
        emit(out, target, doc.to_string().as_bytes())?;
        return if exact { Ok(()) } else { Err(Failure::Rejected(format!("not polynomial up to degree {dmax}"))) };
    }
    match measure_inverse_degree(&map, dmax).map_err(rejected)? {
        InverseDegree::Exact { inverse, .. } => {
            emit(out, target, MapDocument::from_map(&inverse).to_string().as_bytes())
        }
        InverseDegree::NotPolynomialUpTo(d) => {
            emit(out, None, format!("status: not_polynomial_up_to\ndmax: {d}\n").as_bytes())?;
            Err(Failure::Rejected(format!("not polynomial up to degree {d}")))
        }
    }
}

fn compose(a: &Path, b: &Path, target: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let (a, b) = (load_map(a)?, load_map(b)?);
    let c = a.compose(&b).map_err(rejected)?;
    emit(out, target, MapDocument::from_map(&c).to_string().as_bytes())
}

fn degree(path: &Path, dmax: Option<u32>, out: &mut dyn Write) -> Outcome {
    let map = load_map(path)?;
    let n = map.nvars() as u32;
    let deg = map.degree().or_zero();
    let bound = u64::from(deg).checked_pow(n - 1);
    let bound_text = bound.map_or_else(|| "overflow".to_string(), |b| b.to_string());
    let dmax = dmax.unwrap_or_else(|| default_dmax(&map));
    let mut text = format!("vars: {n}\ndeg_forward: {deg}\ndegree_bound: {bound_text}\n");
    let result = measure_inverse_degree(&map, dmax).map_err(rejected)?;
    let status = match result {
        InverseDegree::Exact { degree, .. } => {
            let within = bound.is_none_or(|b| u64::from(degree) <= b);
            text.push_str(&format!("deg_inverse: {degree}\nwithin_bound: {within}\n"));
            Ok(())
        }
        InverseDegree::NotPolynomialUpTo(d) => {
            text.push_str(&format!("deg_inverse: none\nnot_polynomial_up_to: {d}\n"));
            Err(Failure::Rejected(format!("not polynomial up to degree {d}")))
        }
    };
    emit(out, None, text.as_bytes())?;
    status
}

fn load_key(path: &Path) -> Result<automorph_core::crypto::CipherKey, Failure> {
    parse_key(&read(path)?).map_err(|e| match e {
        KeyFileError::Parse(p) => Failure::Usage(format!("{}: {p}", path.display())),
        KeyFileError::Invalid(e) => Failure::Rejected(format!("{}: invalid key: {e}", path.display())),
    })
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>, Failure> {
    match path {
        Some(p) => fs::read(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn crypto(cmd: &CryptoCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        CryptoCommand::Keygen { variant, n, modulus, seed, max_degree, out: target } => {
            let variant: CipherVariant = variant.parse().map_err(|e| Failure::Usage(format!("--variant: {e}")))?;
            let key = keygen(variant, *n, *modulus, *seed, *max_degree).map_err(rejected)?;
            emit(out, target.as_deref(), print_key(&key).as_bytes())
        }
        CryptoCommand::Encrypt(s) => {
            let key = load_key(&s.key)?;
            let ct = key.encrypt_bytes(&read_input(s.input.as_deref())?).map_err(rejected)?;
            emit(out, s.out.as_deref(), &ct)
        }
        CryptoCommand::Decrypt(s) => {
            let key = load_key(&s.key)?;
            let pt = key.decrypt_bytes(&read_input(s.input.as_deref())?).map_err(rejected)?;
            emit(out, s.out.as_deref(), &pt)
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::GenMap { spec, out_dir } => gen_map(spec, out_dir, out),
        Command::Verify { map, lambdas, strict } => verify(map, lambdas.as_deref(), *strict, out),
        Command::Invert { map, oracle, dmax, out: target } => invert(map, *oracle, *dmax, target.as_deref(), out),
        Command::Compose { a, b, out: target } => compose(a, b, target.as_deref(), out),
        Command::Degree { map, dmax } => degree(map, *dmax, out),
        Command::Crypto(cmd) => crypto(cmd, out),
    }
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}
