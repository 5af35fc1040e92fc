use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quatcert::certificate::{build_witness, catalog, decode, encode, verify_certificate, Bounds, WitnessCertificate};
use quatcert::error::Error;
use quatcert::field::{Field, FieldElem};
use quatcert::hilbert::{hilbert, ramification_set, QuatPresentation};
use quatcert::place::Place;
use quatcert::quadform::{global_search, local_represents, DiagForm, Evidence};

/// Builds and checks certificates for quaternion algebra witnesses over
/// Q(i) and F_q(t).
#[derive(Parser)]
#[command(name = "quatcert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, verify or catalog witness certificates.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Print the local Hilbert symbol (a,b)_v as +1 or -1.
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        place: String,
        /// gaussian or fq:<q>; inferred from an @q suffix when omitted.
        #[arg(long)]
        field: Option<String>,
    },
    /// Print the places where (a,b) ramifies.
    Ramify {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        field: Option<String>,
    },
    /// Decide whether a diagonal form represents d locally, or search for a
    /// global representation.
    Represents {
        /// Comma-separated coefficients c1,c2,c3[,c4].
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "global", required_unless_present = "global")]
        place: Option<String>,
        #[arg(long, requires = "bound")]
        global: bool,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long)]
        field: Option<String>,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Build a certificate and write it to a file.
    Build {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 3)]
        n: i64,
        #[arg(long, default_value_t = 100)]
        bound: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a certificate file and print the report.
    Verify { file: PathBuf },
    /// Build one certificate per n into a directory.
    Catalog {
        /// Comma-separated odd integers >= 3.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        n: Vec<i64>,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 100)]
        bound: u32,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct Target {
    /// gaussian or fq:<q>.
    #[arg(long, default_value = "gaussian")]
    field: String,
    /// Comma-separated places; defaults to 2+i,2-i over Q(i).
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
}

impl Target {
    fn resolve(&self) -> Result<(Field, Vec<Place>), Failure> {
        let field: Field = self.field.parse()?;
        let sigma = match (&self.sigma, &field) {
            (Some(s), _) => s,
            (None, Field::Gaussian) => "2+i,2-i",
            (None, _) => return Err(Failure::Input("--sigma is required for function fields".into())),
        };
        let places = sigma.split(',').map(|s| Place::parse(s.trim(), &field)).collect::<Result<_, _>>()?;
        Ok((field, places))
    }
}

enum Failure {
    Verification(String),
    Input(String),
    Exhausted(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SearchExhausted(_) => Failure::Exhausted(e.to_string()),
            Error::OracleDisagreement(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// The field named by `--field`, else the one implied by an `@q` suffix.
fn pick_field(field: &Option<String>, args: &[&str]) -> Result<Field, Failure> {
    if let Some(f) = field {
        return Ok(f.parse()?);
    }
    for s in args {
        if let Some((_, q)) = s.rsplit_once('@') {
            let q: u64 = q.parse().map_err(|_| Failure::Input(format!("bad field suffix in '{s}'")))?;
            return Ok(Field::function_field(q)?);
        }
    }
    Ok(Field::Gaussian)
}

fn write_certificate(cert: &WitnessCertificate, path: &Path) -> Result<(), Failure> {
    let report = verify_certificate(cert);
    if !report.passed {
        return Err(Failure::Verification(format!("built certificate failed verification\n{report}")));
    }
    fs::write(path, encode(cert)).map_err(|e| io_error(path, e))?;
    println!(
        "wrote {}: Q = {}, d = {}, n = {}, trdeg bound {}",
        path.display(),
        cert.presentation,
        cert.d,
        cert.group.n,
        cert.group.trdeg_bound
    );
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Witness(WitnessCommand::Build { target, n, bound, out }) => {
            let (field, sigma) = target.resolve()?;
            let cert = build_witness(&field, &sigma, n, Bounds::new(bound))?;
            write_certificate(&cert, &out)
        }
        Command::Witness(WitnessCommand::Verify { file }) => {
            let text = fs::read_to_string(&file).map_err(|e| io_error(&file, e))?;
            let report = verify_certificate(&decode(&text)?);
            println!("{report}");
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verification(format!("{} failed", file.display())))
            }
        }
        Command::Witness(WitnessCommand::Catalog { n, target, bound, out_dir }) => {
            if n.is_empty() {
                return Err(Failure::Input("--n needs at least one value".into()));
            }
            let (field, sigma) = target.resolve()?;
            let certs = catalog(&n, &field, &sigma, Bounds::new(bound))?;
            fs::create_dir_all(&out_dir).map_err(|e| io_error(&out_dir, e))?;
            for cert in &certs {
                write_certificate(cert, &out_dir.join(format!("witness_n{}.json", cert.group.n)))?;
            }
            Ok(())
        }
        Command::Hilbert { a, b, place, field } => {
            let field = pick_field(&field, &[&a, &b, &place])?;
            let v = Place::parse(&place, &field)?;
            let s = hilbert(&field.parse_elem(&a)?, &field.parse_elem(&b)?, &v)?;
            println!("{}", if s == 1 { "+1" } else { "-1" });
            Ok(())
        }
        Command::Ramify { a, b, field } => {
            let field = pick_field(&field, &[&a, &b])?;
            let p = QuatPresentation::new(field.parse_elem(&a)?, field.parse_elem(&b)?)?;
            println!("{}", ramification_set(&p)?);
            Ok(())
        }
        Command::Represents { form, d, place, global, bound, field } => {
            let field = pick_field(&field, &[&form, &d, place.as_deref().unwrap_or("")])?;
            let f = DiagForm::parse(&form, &field)?;
            let d: FieldElem = field.parse_elem(&d)?;
            if global {
                let bound = bound.expect("required by clap");
                return match global_search(&f, &d, bound)? {
                    Some(x) => {
                        let shown: Vec<String> = x.iter().map(FieldElem::to_string).collect();
                        println!("{f} represents {d}: x = ({})", shown.join(", "));
                        Ok(())
                    }
                    None => Err(Failure::Exhausted(format!("no representation of {d} by {f} up to height {bound}"))),
                };
            }
            let v = Place::parse(place.as_deref().expect("required by clap"), &field)?;
            let r = local_represents(&f, &d, &v)?;
            println!("{}", r.verdict);
            match &r.evidence {
                Evidence::Solution(s) => {
                    let shown: Vec<String> = s.vector.iter().map(ToString::to_string).collect();
                    println!("solution mod ({v})^{}: ({})", s.precision, shown.join(", "));
                }
                Evidence::Obstruction(facts) => {
                    println!(
                        "hasse invariant {} vs {}, discriminant {} square: {}",
                        facts.hasse, facts.reference, facts.discriminant, facts.discriminant_square
                    );
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Exhausted(m)) => {
            eprintln!("search exhausted: {m}");
            ExitCode::from(3)
        }
    }
}
