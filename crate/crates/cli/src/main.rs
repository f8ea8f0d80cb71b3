use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use poisred::manifest::{builtin, CheckKind, CheckSpec, Manifest, BUILTIN};
use poisred::report::Report;
use poisred::runner::{self, RunOptions};

#[derive(Parser)]
#[command(
    name = "poisred",
    version,
    about = "Check Poisson brackets, Poisson Lie groups, momentum maps and reductions declared in TOML manifests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every declared check.
    Run(Common),
    /// Run one family of checks.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Dualize each bialgebra and test the double-dual round trip.
    Dual(Common),
    /// Dressing fields, their linearization at the identity and orbit ranks.
    Dressing(Common),
    /// Ideal invariance, ideal closure and reduced brackets.
    Reduce(Common),
    /// Leaf geometry.
    Leaf {
        #[command(subcommand)]
        what: LeafCmd,
    },
    /// List the built-in fixture manifests.
    Fixtures,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Jacobi identity of bivectors and structure constants.
    Jacobi(Common),
    /// Cocycle condition of cobrackets.
    Cocycle(Common),
    /// Multiplicativity of group bivectors.
    Multiplicative(Common),
    /// Homomorphism and Poisson-action conditions of actions.
    Action(Common),
    /// Momentum map equation.
    Moment(Common),
    /// Whether momentum maps are Poisson maps.
    PoissonMap(Common),
}

#[derive(Subcommand)]
enum LeafCmd {
    /// Bivector and orbit ranks; tangency of generators to level sets.
    Scan(Common),
}

#[derive(Args)]
struct Common {
    /// Manifest files.
    manifests: Vec<PathBuf>,
    /// Built-in fixture manifest (repeatable).
    #[arg(long = "fixture", value_name = "NAME")]
    fixtures: Vec<String>,
    /// Use every built-in fixture.
    #[arg(long)]
    all_fixtures: bool,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Treat WARN as failure.
    #[arg(long)]
    strict: bool,
    /// Record wall-clock time per check.
    #[arg(long)]
    timing: bool,
}

impl Common {
    fn options(&self) -> RunOptions {
        RunOptions {
            samples: self.samples,
            tol: self.tol,
            seed: self.seed,
            step: self.step,
            timing: self.timing,
        }
    }

    fn sources(&self) -> Result<Vec<(String, Manifest)>, String> {
        let mut out = Vec::new();
        for path in &self.manifests {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let m = Manifest::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            out.push((label, m));
        }
        let names: Vec<String> = if self.all_fixtures {
            BUILTIN.iter().map(|(n, _)| n.to_string()).collect()
        } else {
            self.fixtures.clone()
        };
        for name in names {
            let text = builtin(&name).ok_or_else(|| format!("unknown fixture `{name}`"))?;
            let m = Manifest::parse(text).map_err(|e| format!("fixture `{name}`: {e}"))?;
            out.push((name, m));
        }
        if out.is_empty() {
            return Err("no manifest given (pass a path, --fixture NAME or --all-fixtures)".into());
        }
        Ok(out)
    }
}

fn execute(common: &Common, kinds: Option<&[CheckKind]>) -> Result<Report, String> {
    let sources = common.sources()?;
    let opts = common.options();
    let prefix = sources.len() > 1;
    let mut report = Report::new(opts.seed);
    for (label, m) in &sources {
        let checks: Vec<CheckSpec> = match kinds {
            None => m.checks.clone(),
            Some(k) => runner::select(m, k),
        };
        for mut record in runner::run(m, &checks, &opts).checks {
            if prefix {
                record.name = format!("{label}/{}", record.name);
            }
            report.checks.push(record);
        }
    }
    Ok(report)
}

fn emit(common: &Common, report: &Report) -> Result<(), String> {
    match &common.json {
        Some(p) if p.as_os_str() == "-" => print!("{}", report.to_json()),
        Some(p) => {
            std::fs::write(p, report.to_json()).map_err(|e| format!("{}: {e}", p.display()))?;
            print!("{}", report.to_text());
        }
        None => print!("{}", report.to_text()),
    }
    Ok(())
}

fn main() -> ExitCode {
    use CheckKind::*;
    let cli = Cli::parse();
    let (common, kinds): (&Common, Option<&[CheckKind]>) = match &cli.command {
        Command::Fixtures => {
            for (name, _) in BUILTIN {
                println!("{name}");
            }
            return ExitCode::SUCCESS;
        }
        Command::Run(c) => (c, None),
        Command::Check { what } => match what {
            CheckCmd::Jacobi(c) => (c, Some(&[Jacobi, JacobiSc])),
            CheckCmd::Cocycle(c) => (c, Some(&[Cocycle])),
            CheckCmd::Multiplicative(c) => (c, Some(&[Multiplicative])),
            CheckCmd::Action(c) => (c, Some(&[Action, PoissonAction, Invariant])),
            CheckCmd::Moment(c) => (c, Some(&[Moment])),
            CheckCmd::PoissonMap(c) => (c, Some(&[PoissonMap])),
        },
        Command::Dual(c) => (c, Some(&[Dual])),
        Command::Dressing(c) => (c, Some(&[Dressing])),
        Command::Reduce(c) => (c, Some(&[IdealInvariance, IdealClosure, Reduce])),
        Command::Leaf {
            what: LeafCmd::Scan(c),
        } => (c, Some(&[LeafScan, LeafTangent])),
    };
    let report = match execute(common, kinds) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = emit(common, &report) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code(common.strict) as u8)
}
