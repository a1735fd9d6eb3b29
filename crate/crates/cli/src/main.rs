//! `diffspec`: differential spectra of power functions over GF(2^n).

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diffspec::formulas::{self, Family, KloostermanMethod};
use diffspec::gf2n::{parse_modulus_hex, Field};
use diffspec::spectra::{reduce_exponent, spectrum_bruteforce, spectrum_kernel};
use diffspec::verify::{run_all, VerifyConfig};
use diffspec::{linmaps, Error};

use output::{emit, Format};

#[derive(Parser)]
#[command(name = "diffspec", version, about = "Differential spectra of x^d over GF(2^n)")]
struct Cli {
    /// Worker threads (defaults to all cores). Never changes results.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Differential spectrum of one exponent.
    Spectrum {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        selector: Selector,
        /// Defaults to formula for --family, kernel for --t, brute for --d.
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Run the verification harness over a degree range.
    Verify {
        #[arg(long, default_value_t = 4)]
        n_min: u32,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[arg(long)]
        modulus: Option<String>,
        /// Flip one matrix bit chosen from this seed; the run should fail.
        #[arg(long, value_name = "SEED")]
        inject_fault: Option<u64>,
    },
    /// Differential uniformity of every x^(2^t-1) for a range of degrees.
    Scan {
        #[arg(long, default_value_t = 4)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
    },
    /// The Kloosterman sum K(1).
    Kloosterman {
        #[arg(long)]
        n: u32,
        /// brute sums over the field, formula uses the binomial expression.
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Weight-3 and weight-4 codeword counts of the code with zeros {1, 7}.
    Codes {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// Histogram of dim Ker P(t,b) over all b.
    Profile {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        modulus: Option<String>,
    },
}

/// Exactly one exponent selector.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct Selector {
    #[arg(long)]
    d: Option<u64>,
    /// Selects d = 2^t - 1.
    #[arg(long)]
    t: Option<u32>,
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| "expected one of x7, n-2, half, half+1, inverse".to_string())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Kernel,
    Formula,
}

enum Failure {
    /// Verification failed or a counterexample was found.
    Check,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn field(n: u32, modulus: Option<&str>) -> Result<Field, Failure> {
    let modulus = modulus.map(parse_modulus_hex).transpose()?;
    Ok(Field::new(n, modulus)?)
}

/// `t` with `2^t - 1 = d` (after reduction), if any.
fn exponent_t(n: u32, d: u64) -> Option<u32> {
    let d = reduce_exponent(n, d);
    (d != u64::MAX && (d + 1).is_power_of_two()).then(|| (d + 1).trailing_zeros())
}

fn spectrum(
    n: u32,
    sel: &Selector,
    method: Option<Method>,
    modulus: Option<&str>,
    format: Format,
) -> Result<String, Failure> {
    if !(2..=64).contains(&n) {
        return Err(Error::UnsupportedDegree(n).into());
    }
    let method = method.unwrap_or(match (sel.d, sel.t) {
        (Some(_), _) => Method::Brute,
        (_, Some(_)) => Method::Kernel,
        _ => Method::Formula,
    });
    let d = match (sel.d, sel.t, sel.family) {
        (Some(d), _, _) => d,
        (_, Some(t), _) if (2..n).contains(&t) => (1u64 << t) - 1,
        (_, Some(t), _) => return Err(Error::TOutOfRange { n, t }.into()),
        (_, _, Some(family)) => (1u64 << family.t(n).min(63)) - 1,
        _ => unreachable!("clap enforces one selector"),
    };
    let spectrum = match method {
        Method::Brute => spectrum_bruteforce(&field(n, modulus)?, d)?,
        Method::Kernel => {
            let t = exponent_t(n, d).filter(|t| (2..n).contains(t)).ok_or_else(|| {
                Failure::Usage(format!("kernel method needs d = 2^t - 1 with 2 <= t < n, got {d}"))
            })?;
            spectrum_kernel(&field(n, modulus)?, t)?
        }
        Method::Formula => {
            let family = match sel.family {
                Some(f) => f,
                None => {
                    let t = exponent_t(n, d);
                    Family::ALL
                        .into_iter()
                        .find(|f| Some(f.t(n)) == t && formulas::closed_form_spectrum(n, *f).is_ok())
                        .ok_or_else(|| {
                            Failure::Usage(format!("no closed form for d = {d} at n = {n}"))
                        })?
                }
            };
            if let Some(m) = modulus {
                // validated only: the closed form does not depend on it
                field(n, Some(m))?;
            }
            formulas::closed_form_spectrum(n, family)?
        }
    };
    Ok(emit(&spectrum, format))
}

fn run(cli: Cli) -> Result<String, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Spectrum {
            n,
            selector,
            method,
            modulus,
        } => spectrum(n, &selector, method, modulus.as_deref(), format),
        Command::Verify {
            n_min,
            n_max,
            modulus,
            inject_fault,
        } => {
            let mut cfg = VerifyConfig::new(n_min, n_max);
            cfg.modulus = modulus.as_deref().map(parse_modulus_hex).transpose()?;
            cfg.fault_seed = inject_fault;
            let report = run_all(&cfg)?;
            let text = emit(&report, format);
            if report.all_passed {
                Ok(text)
            } else {
                print!("{text}");
                Err(Failure::Check)
            }
        }
        Command::Scan { n_min, n_max } => {
            let findings = formulas::conjecture_scan(n_min, n_max)?;
            let text = emit(&findings, format);
            if findings.iter().any(|f| f.counterexample) {
                print!("{text}");
                Err(Failure::Check)
            } else {
                Ok(text)
            }
        }
        Command::Kloosterman { n, method, modulus } => {
            let method = match method {
                Method::Brute => KloostermanMethod::Direct,
                Method::Formula => KloostermanMethod::Carlitz,
                Method::Kernel => {
                    return Err(Failure::Usage("kloosterman supports brute or formula".into()))
                }
            };
            let value = match method {
                KloostermanMethod::Direct => formulas::kloosterman(&field(n, modulus.as_deref())?, method)?,
                KloostermanMethod::Carlitz => formulas::KloostermanValue {
                    n,
                    value: formulas::kloosterman_carlitz(n)?,
                },
            };
            Ok(emit(&output::Kloosterman { method, value }, format))
        }
        Command::Codes { n, method } => {
            let counts = match method {
                Method::Formula => formulas::code_weights_closed_form(n)?,
                Method::Brute => formulas::code_weights_exhaustive(&field(n, None)?)?,
                Method::Kernel => return Err(Failure::Usage("codes supports brute or formula".into())),
            };
            Ok(emit(&counts, format))
        }
        Command::Profile { n, t, modulus } => {
            let profile = linmaps::kernel_profile(&field(n, modulus.as_deref())?, t)?;
            Ok(emit(&profile, format))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
