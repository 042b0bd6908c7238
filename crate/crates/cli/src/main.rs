use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cohoquant::artifact::{self, Artifact, Kind};
use cohoquant::associator::{solve_associator, verify_associator, AssocOptions, Associator};
use cohoquant::cohomology::{cohomology_report, Complex};
use cohoquant::reports;
use cohoquant::specialize::{flatness_of, quantize, validate_bialgebra, LieBialgebra};
use cohoquant::twist::{build_r, check_form, check_quasitriangular, check_qybe, solve_twist};
use cohoquant::{selftest, Error};

const MAX_ASSOC_ORDER: usize = 6;
const MAX_TWIST_ORDER: usize = 5;

#[derive(Parser)]
#[command(name = "cohoquant", version, about = "Exact associators, twists and quantizations of Lie bialgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for or verify an associator.
    #[command(subcommand)]
    Assoc(AssocCmd),
    /// Solve for or verify a twist.
    #[command(subcommand)]
    Twist(TwistCmd),
    /// Build or check the R-matrix of a twist.
    #[command(subcommand)]
    Rmatrix(RmatrixCmd),
    /// Cohomology of the universal complexes.
    #[command(subcommand)]
    Cohomology(CohomologyCmd),
    /// Evaluate a twist on a Lie bialgebra and check the resulting Hopf structure.
    Quantize(QuantizeArgs),
    /// Write or validate a Lie bialgebra file.
    #[command(subcommand)]
    Bialgebra(BialgebraCmd),
    /// Decode an artifact and print a one-line summary.
    Inspect { file: PathBuf },
    /// Run the built-in fixtures.
    Selftest(ReportOut),
}

#[derive(Args)]
struct ReportOut {
    /// Also write the report artifact here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum AssocCmd {
    Solve {
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Add the normalization `Alt(Φ_2) = (1/8)[t12,t23]` to the degree-2 system.
        #[arg(long)]
        impose_alt_phi2: bool,
        /// Drop the group-like condition and solve the bare relations.
        #[arg(long)]
        not_group_like: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    Verify {
        file: PathBuf,
        /// Check only through this degree.
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        out: ReportOut,
    },
}

#[derive(Subcommand)]
enum TwistCmd {
    Solve {
        #[arg(long)]
        assoc: PathBuf,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    Verify {
        file: PathBuf,
        #[command(flatten)]
        out: ReportOut,
    },
}

#[derive(Subcommand)]
enum RmatrixCmd {
    Build {
        #[arg(long)]
        twist: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    Check {
        file: PathBuf,
        /// Also check quasitriangularity against this twist and its associator.
        #[arg(long)]
        twist: Option<PathBuf>,
        #[command(flatten)]
        out: ReportOut,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ComplexArg {
    Cohoch,
    Wedge,
}

#[derive(Subcommand)]
enum CohomologyCmd {
    Report {
        #[arg(long, value_enum)]
        complex: ComplexArg,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        degree: usize,
        /// List the fine-degree blocks of the mixed pieces.
        #[arg(long)]
        fine: bool,
        /// Fail unless the cohomology has this dimension.
        #[arg(long)]
        expect: Option<usize>,
        #[command(flatten)]
        out: ReportOut,
    },
}

#[derive(Args)]
struct QuantizeArgs {
    #[arg(long)]
    bialgebra: PathBuf,
    #[arg(long)]
    twist: PathBuf,
    #[arg(long, default_value_t = 2)]
    hbar_order: usize,
    #[arg(long, default_value_t = 2)]
    degree_cap: usize,
    #[command(flatten)]
    out: ReportOut,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Borel,
    Abelian,
}

#[derive(Subcommand)]
enum BialgebraCmd {
    Example {
        #[arg(value_enum)]
        which: Example,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    Validate {
        file: PathBuf,
        #[command(flatten)]
        out: ReportOut,
    },
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path, kind: Kind) -> Result<Artifact, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(Artifact::parse_kind(&text, kind)?)
}

fn write(path: &Path, a: &Artifact) -> Result<(), Failure> {
    fs::write(path, a.to_text()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn cap(what: &str, order: usize, max: usize) -> Result<(), Failure> {
    if order > max {
        return Err(Error::Usage(format!("{what} {order} exceeds the supported maximum {max}")).into());
    }
    Ok(())
}

fn emit(rep: &Artifact, out: &ReportOut) -> Outcome {
    for line in reports::summary_lines(rep) {
        println!("{line}");
    }
    if let Some(p) = &out.report {
        write(p, rep)?;
    }
    Ok(rep.payload["ok"].as_bool().unwrap_or(false))
}

fn load_twist(path: &Path) -> Result<(cohoquant::twist::Twist, Associator), Failure> {
    let a = read(path, Kind::Twist)?;
    Ok(artifact::decode_twist(&a.payload, "$.payload")?)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Assoc(AssocCmd::Solve { order, impose_alt_phi2, not_group_like, output }) => {
            cap("order", order, MAX_ASSOC_ORDER)?;
            let phi = solve_associator(order, AssocOptions { impose_alt_phi2, group_like: !not_group_like })?;
            write(&output, &Artifact::new(Kind::Associator, artifact::encode_associator(&phi)))?;
            match phi.phi2_coefficient() {
                Some(c) => println!("associator to order {order}; degree-2 part is {c}·[t12,t23]"),
                None => println!("associator to order {order}"),
            }
            Ok(true)
        }
        Command::Assoc(AssocCmd::Verify { file, order, out }) => {
            let a = read(&file, Kind::Associator)?;
            let phi = artifact::decode_associator(&a.payload, "$.payload")?;
            let k = order.unwrap_or(phi.order);
            if k > phi.order {
                return Err(Error::Usage(format!("artifact only has order {}", phi.order)).into());
            }
            let rep = verify_associator(&phi.phi, k)?;
            emit(&reports::associator(&phi, &rep), &out)
        }
        Command::Twist(TwistCmd::Solve { assoc, order, output }) => {
            cap("order", order, MAX_TWIST_ORDER)?;
            let a = read(&assoc, Kind::Associator)?;
            let phi = artifact::decode_associator(&a.payload, "$.payload")?;
            if order > phi.order {
                return Err(Error::Usage(format!("associator only has order {}", phi.order)).into());
            }
            if order == MAX_TWIST_ORDER {
                eprintln!("warning: order {order} needs a lot of memory");
            }
            let phi = Associator { order, phi: phi.phi.truncate(order) };
            let tw = solve_twist(&phi, order)?;
            write(&output, &Artifact::new(Kind::Twist, artifact::encode_twist(&tw, &phi)))?;
            println!("twist to order {order}");
            Ok(true)
        }
        Command::Twist(TwistCmd::Verify { file, out }) => {
            let (tw, phi) = load_twist(&file)?;
            cap("order", tw.order, MAX_TWIST_ORDER)?;
            if phi.order < tw.order {
                return Err(Error::Usage("the associator is shorter than the twist".into()).into());
            }
            let residual = tw.residual(&phi)?;
            emit(&reports::twist(&tw, &residual), &out)
        }
        Command::Rmatrix(RmatrixCmd::Build { twist, output }) => {
            let (tw, _) = load_twist(&twist)?;
            cap("order", tw.order, MAX_TWIST_ORDER)?;
            let rm = build_r(&tw.j)?;
            write(&output, &Artifact::new(Kind::RMatrix, artifact::encode_rmatrix(&rm)))?;
            println!("R-matrix to order {}", rm.order);
            Ok(true)
        }
        Command::Rmatrix(RmatrixCmd::Check { file, twist, out }) => {
            let a = read(&file, Kind::RMatrix)?;
            let rm = artifact::decode_rmatrix(&a.payload, "$.payload")?;
            cap("order", rm.order, MAX_TWIST_ORDER)?;
            let q = check_qybe(&rm);
            let form = check_form(&rm)?;
            let (quasi, rebuilt) = match twist {
                Some(p) => {
                    let (tw, phi) = load_twist(&p)?;
                    if tw.order != rm.order || phi.order < tw.order {
                        return Err(Error::Usage("twist and R-matrix orders differ".into()).into());
                    }
                    let phi = Associator { order: tw.order, phi: phi.phi.truncate(tw.order) };
                    let rebuilt = build_r(&tw.j)?.r.sub(&rm.r).comps().iter().map(|c| c.len()).sum();
                    (Some(check_quasitriangular(&tw.j, &rm, &phi)?), Some(rebuilt))
                }
                None => (None, None),
            };
            emit(&reports::rmatrix(&q, &form, quasi.as_ref(), rebuilt), &out)
        }
        Command::Cohomology(CohomologyCmd::Report { complex, h, degree, fine, expect, out }) => {
            cap("degree", degree, 4)?;
            let complex = match complex {
                ComplexArg::Cohoch => Complex::Cohoch,
                ComplexArg::Wedge => Complex::Wedge,
            };
            let rep = cohomology_report(complex, h, degree, fine)?;
            println!("dimension {}", rep.dim_cohomology);
            for g in &rep.generators {
                println!("generator {g:?}");
            }
            for (p, q, fd, n) in &rep.fine_blocks {
                println!("block ({p},{q}) {fd:?}: {n}");
            }
            emit(&reports::cohomology(&rep, expect), &out)
        }
        Command::Quantize(args) => {
            let b = artifact::decode_bialgebra(&read(&args.bialgebra, Kind::Bialgebra)?.payload, "$.payload")?;
            let (tw, _) = load_twist(&args.twist)?;
            cap("ħ-order", args.hbar_order, 4)?;
            cap("degree cap", args.degree_cap, 4)?;
            if args.hbar_order > tw.order {
                return Err(Error::Usage(format!("twist only has order {}", tw.order)).into());
            }
            let valid = validate_bialgebra(&b);
            if !valid.ok() {
                return emit(&reports::bialgebra(&valid), &args.out);
            }
            let (rep, q) = quantize(&b, &tw.j, args.hbar_order)?;
            let flat = flatness_of(&q, args.degree_cap);
            emit(&reports::quantize(&q, &rep, &flat), &args.out)
        }
        Command::Bialgebra(BialgebraCmd::Example { which, dim, output }) => {
            let b = match which {
                Example::Borel => LieBialgebra::borel(),
                Example::Abelian => {
                    if dim == 0 || dim > 64 {
                        return Err(Error::Usage("dimension must be in 1..=64".into()).into());
                    }
                    LieBialgebra::abelian(dim)
                }
            };
            write(&output, &Artifact::new(Kind::Bialgebra, artifact::encode_bialgebra(&b)))?;
            Ok(true)
        }
        Command::Bialgebra(BialgebraCmd::Validate { file, out }) => {
            let b = artifact::decode_bialgebra(&read(&file, Kind::Bialgebra)?.payload, "$.payload")?;
            emit(&reports::bialgebra(&validate_bialgebra(&b)), &out)
        }
        Command::Inspect { file } => {
            let text = fs::read_to_string(&file).map_err(|e| Failure::Io(format!("{}: {e}", file.display())))?;
            let a = Artifact::parse(&text)?;
            println!("{} {}", artifact::decode_any(&a)?, a.digest());
            Ok(true)
        }
        Command::Selftest(out) => {
            let checks = selftest::all();
            emit(&reports::selftest(&checks), &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Solver { .. } | Error::Precondition { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
