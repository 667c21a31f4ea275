//! Command-line front end.
//!
//! Certificates and TSV tables go to stdout; diagnostics and reports go to
//! stderr. Exit codes: 0 success, 1 criterion not met or certificate
//! invalid, 2 inconclusive, 3 input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::One;

use crate::certificate::{verify, Certificate};
use crate::criterion::{
    self, Certification, CriterionError, CriterionOutcome, SearchConfig, SearchOutcome, VariantSet,
};
use crate::nt::FactorConfig;
use crate::oracle::{self, KroneckerBudget, OracleStatus};
use crate::poly::Polynomial;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_MET: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "irrcert",
    version,
    about = "Certify irreducibility of integer polynomials from prime-power values"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PolySource {
    /// Polynomial as `7,5,-16` (ascending) or `4*x^2-16*x+7`
    #[arg(short = 'p', long = "poly")]
    poly: Option<String>,
    /// File containing the polynomial
    #[arg(short = 'f', long = "poly-file")]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FactorArgs {
    /// Seed for randomized factoring
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    trial_bound: u32,
    #[arg(long, default_value_t = 10_000_000)]
    rho_cap: u64,
}

impl FactorArgs {
    fn config(&self) -> FactorConfig {
        FactorConfig {
            trial_bound: self.trial_bound,
            rho_iteration_cap: self.rho_cap,
            rng_seed: self.seed,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Try to certify at a single point n
    Certify {
        #[command(flatten)]
        source: PolySource,
        #[arg(short = 'n')]
        n: BigUint,
        #[arg(long, default_value = "girstmair,theorem1,theorem2")]
        variants: VariantSet,
        #[arg(long)]
        divide_content: bool,
        /// Write the certificate here instead of stdout
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        factoring: FactorArgs,
    },
    /// Search n upward for the smallest certificate
    Search {
        #[command(flatten)]
        source: PolySource,
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
        #[arg(long)]
        n_min: Option<u64>,
        #[arg(long)]
        d_max: Option<BigUint>,
        #[arg(long, default_value = "girstmair,theorem1,theorem2")]
        variants: VariantSet,
        #[arg(long)]
        divide_content: bool,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        factoring: FactorArgs,
    },
    /// Re-verify a certificate file
    Verify { cert: PathBuf },
    /// Smallest accepted n per variant, as TSV
    Compare {
        #[command(flatten)]
        source: PolySource,
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
        #[arg(long, default_value = "girstmair,theorem1,theorem2")]
        variants: VariantSet,
        #[arg(long)]
        divide_content: bool,
        #[command(flatten)]
        factoring: FactorArgs,
    },
    /// Brute-force factorization verdict
    OracleCheck {
        #[command(flatten)]
        source: PolySource,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        divide_content: bool,
    },
}

/// Input-stage failure carrying its exit code.
struct Exit(u8, String);

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Exit(EXIT_INPUT, format!("I/O error: {e}"))
    }
}

fn input_error(msg: impl Into<String>) -> Exit {
    Exit(EXIT_INPUT, msg.into())
}

fn load_polynomial(
    source: &PolySource,
    divide_content: bool,
    err: &mut dyn Write,
) -> Result<Polynomial, Exit> {
    let text = match (&source.poly, &source.file) {
        (Some(p), None) => p.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?,
        _ => {
            return Err(input_error(
                "exactly one of --poly or --poly-file is required",
            ))
        }
    };
    let f: Polynomial = text
        .trim()
        .parse()
        .map_err(|e| input_error(format!("invalid polynomial: {e}")))?;
    if f.is_zero() {
        return Err(input_error("polynomial is zero"));
    }
    let content = f.content().expect("nonzero");
    if content.is_one() {
        return Ok(f);
    }
    if divide_content {
        writeln!(err, "divided out content {content}")?;
        return Ok(f.primitive_part().expect("nonzero"));
    }
    Err(input_error(format!(
        "polynomial is not primitive (content {content}); use --divide-content"
    )))
}

fn require_degree_two(f: &Polynomial) -> Result<(), Exit> {
    match f.degree() {
        Some(m) if m >= 2 => Ok(()),
        Some(1) => Err(input_error(
            "polynomial has degree 1 (primitive linear polynomials are irreducible; no witness is needed)",
        )),
        Some(m) => Err(input_error(format!("polynomial has degree {m}; degree >= 2 is required"))),
        None => Err(input_error("polynomial is zero")),
    }
}

fn criterion_error(e: CriterionError) -> Exit {
    input_error(e.to_string())
}

fn emit_certificate(
    c: &Certificate,
    output: Option<&PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Exit> {
    let json = c.to_json().map_err(|e| Exit(EXIT_NOT_MET, e.to_string()))?;
    match output {
        Some(path) => {
            fs::write(path, &json)?;
            writeln!(err, "certificate written to {}", path.display())?;
        }
        None => out.write_all(json.as_bytes())?,
    }
    writeln!(
        err,
        "irreducible: {} at n = {}: f(n) = {}{}^{}·{} (j = {})",
        c.variant, c.n, c.sign, c.p, c.k, c.d, c.j
    )?;
    Ok(())
}

fn outcome_exit(outcome: &CriterionOutcome) -> u8 {
    match outcome {
        CriterionOutcome::Accepted { .. } => EXIT_OK,
        CriterionOutcome::Inconclusive(_) => EXIT_INCONCLUSIVE,
        CriterionOutcome::PreconditionFailed(_) | CriterionOutcome::NotApplicable(_) => {
            EXIT_NOT_MET
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Exit> {
    match cli.command {
        Command::Certify {
            source,
            n,
            variants,
            divide_content,
            output,
            factoring,
        } => {
            let f = load_polynomial(&source, divide_content, err)?;
            require_degree_two(&f)?;
            let cfg = SearchConfig {
                variants,
                factoring: factoring.config(),
                ..SearchConfig::default()
            };
            match criterion::certify_at(&f, &n, &cfg).map_err(criterion_error)? {
                Certification::Certified(c) => {
                    emit_certificate(&c, output.as_ref(), out, err)?;
                    Ok(EXIT_OK)
                }
                Certification::Failed(outcome) => {
                    let reason = outcome.reason().expect("failed outcome has a reason");
                    writeln!(err, "{} at n = {n}: {reason}", outcome.status())?;
                    Ok(outcome_exit(&outcome))
                }
            }
        }
        Command::Search {
            source,
            n_max,
            n_min,
            d_max,
            variants,
            divide_content,
            output,
            factoring,
        } => {
            let f = load_polynomial(&source, divide_content, err)?;
            require_degree_two(&f)?;
            let cfg = SearchConfig {
                n_max,
                n_min,
                d_max,
                factoring: factoring.config(),
                variants,
            };
            match criterion::search(&f, &cfg).map_err(criterion_error)? {
                SearchOutcome::Found(c) => {
                    emit_certificate(&c, output.as_ref(), out, err)?;
                    Ok(EXIT_OK)
                }
                SearchOutcome::Exhausted(report) => {
                    writeln!(
                        err,
                        "no certificate for n in {}..={} ({} points tried)",
                        report.n_start, report.n_end, report.evaluated
                    )?;
                    if report.inconclusive.is_empty() {
                        Ok(EXIT_NOT_MET)
                    } else {
                        let list: Vec<String> =
                            report.inconclusive.iter().map(u64::to_string).collect();
                        writeln!(
                            err,
                            "inconclusive (factoring budget exhausted) at n = {}",
                            list.join(",")
                        )?;
                        Ok(EXIT_INCONCLUSIVE)
                    }
                }
            }
        }
        Command::Verify { cert } => {
            let bytes = fs::read(&cert)
                .map_err(|e| input_error(format!("cannot read {}: {e}", cert.display())))?;
            let c = match Certificate::deserialize(&bytes) {
                Ok(c) => c,
                Err(e) => {
                    writeln!(err, "invalid: {e}")?;
                    return Ok(EXIT_NOT_MET);
                }
            };
            let report = verify(&c);
            for caveat in &report.caveats {
                writeln!(err, "caveat: {caveat}")?;
            }
            if report.valid {
                writeln!(
                    err,
                    "valid: {} certificate, n = {}, p = {}",
                    c.variant, c.n, c.p
                )?;
                Ok(EXIT_OK)
            } else {
                for failure in &report.failures {
                    writeln!(
                        err,
                        "failed {}: expected {}, found {}",
                        failure.condition, failure.expected, failure.found
                    )?;
                }
                Ok(EXIT_NOT_MET)
            }
        }
        Command::Compare {
            source,
            n_max,
            variants,
            divide_content,
            factoring,
        } => {
            let f = load_polynomial(&source, divide_content, err)?;
            require_degree_two(&f)?;
            let cfg = SearchConfig {
                n_max,
                factoring: factoring.config(),
                variants,
                ..SearchConfig::default()
            };
            let rows = criterion::smallest_per_variant(&f, &cfg).map_err(criterion_error)?;
            writeln!(out, "variant\tsmallest_n\tp\tk\td\tj")?;
            for (variant, cert) in rows {
                match cert {
                    Some(c) => writeln!(
                        out,
                        "{variant}\t{}\t{}\t{}\t{}\t{}",
                        c.n, c.p, c.k, c.d, c.j
                    )?,
                    None => writeln!(out, "{variant}\t\t\t\t\t")?,
                }
            }
            Ok(EXIT_OK)
        }
        Command::OracleCheck {
            source,
            budget,
            divide_content,
        } => {
            let f = load_polynomial(&source, divide_content, err)?;
            let verdict = oracle::kronecker_factor(
                &f,
                KroneckerBudget {
                    max_tuples_per_degree: budget,
                },
            )
            .map_err(|e| input_error(e.to_string()))?;
            match verdict.status {
                OracleStatus::Irreducible => {
                    writeln!(out, "irreducible")?;
                    Ok(EXIT_OK)
                }
                OracleStatus::Reducible(g, h) => {
                    writeln!(out, "reducible\t{g}\t{h}")?;
                    Ok(EXIT_NOT_MET)
                }
                OracleStatus::Inconclusive => {
                    writeln!(out, "inconclusive")?;
                    writeln!(
                        err,
                        "budget exhausted for factor degrees {:?}",
                        verdict.budget_used.exhausted_degrees
                    )?;
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(Exit(code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}
