use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use p1_functors::corpus::corpus;
use p1_functors::format::{
    compose_spec_from_json, functor_from_json, functor_to_json, sheaf_from_json, ComposeSpec, Report,
};
use p1_functors::functor::{evaluate_on_sheaf, FunctorData};
use p1_functors::linalg::Field;
use p1_functors::sheaves::{h0_dim, h1_dim};
use p1_functors::structure::{decompose, is_integral_transform, is_pullback, run_property_suite, Mode, Status};
use p1_functors::{Error, Result};

#[derive(Parser)]
#[command(name = "p1f", version, about = "Structure decomposition of functors on the projective line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a functor file from a compose spec.
    Compose {
        #[arg(long)]
        spec: PathBuf,
        /// Overrides the seed in the spec.
        #[arg(long)]
        gauge_seed: Option<u64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Decompose a functor and write the report.
    Decompose {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Integral transform and pullback verdicts.
    Classify { file: PathBuf },
    /// Dimension of the functor's value on a sheaf.
    Eval {
        file: PathBuf,
        #[arg(long)]
        sheaf: PathBuf,
        /// Twist used to present the torsion part.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        twist: i64,
    },
    /// `h0` and `h1` of a twisted sheaf.
    Cohomology {
        #[arg(long)]
        sheaf: PathBuf,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        twist: i64,
    },
    /// Run the property suite on one file, or round-trip a seeded corpus.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct VerifyArgs {
    file: Option<PathBuf>,
    /// `SEED COUNT`
    #[arg(long, num_args = 2, value_names = ["SEED", "COUNT"])]
    corpus: Option<Vec<u64>>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the same directory so a failure never
/// leaves a partial file behind.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

fn load_functor(path: &Path) -> Result<FunctorData> {
    let f = functor_from_json(&read(path)?)?;
    f.ensure_valid()?;
    Ok(f)
}

fn compose(spec: &Path, gauge_seed: Option<u64>, output: &Path) -> Result<()> {
    let mut spec = compose_spec_from_json(&read(spec)?)?;
    if gauge_seed.is_some() {
        spec.gauge_seed = gauge_seed;
    }
    write_atomic(output, &functor_to_json(&spec.build()))
}

fn decompose_cmd(file: &Path, output: &Path) -> Result<()> {
    let f = load_functor(file)?;
    let (d, _) = decompose(&f)?;
    let props = run_property_suite(&f);
    let report = Report::new(&d, true, [f.lo(), f.hi()], &props);
    write_atomic(output, &report.to_json())
}

fn classify(file: &Path) -> Result<()> {
    let f = load_functor(file)?;
    let it = is_integral_transform(&f, Mode::Verify)?;
    let pb = is_pullback(&f, Mode::Verify)?;
    println!(
        "integral_transform: {}; pullback: {}",
        if it { "yes" } else { "no" },
        pb.map_or("none".to_string(), |p| p.to_string())
    );
    Ok(())
}

fn eval(file: &Path, sheaf: &Path, twist: i64) -> Result<()> {
    let f = load_functor(file)?;
    let s = sheaf_from_json(&read(sheaf)?, f.field())?;
    println!("{}", evaluate_on_sheaf(&f, &s, twist)?.dim);
    Ok(())
}

fn cohomology(sheaf: &Path, twist: i64) -> Result<()> {
    let s = sheaf_from_json(&read(sheaf)?, Field::Rational)?.twist(twist);
    println!("h0: {}", h0_dim(&s));
    println!("h1: {}", h1_dim(&s));
    Ok(())
}

fn verify_file(file: &Path) -> Result<()> {
    let f = load_functor(file)?;
    let props = run_property_suite(&f);
    for e in &props.entries {
        match &e.detail {
            Some(d) => println!("{}: {} ({d})", e.status, e.claim),
            None => println!("{}: {}", e.status, e.claim),
        }
    }
    if !props.no_failures() {
        let failed: Vec<&str> = props
            .entries
            .iter()
            .filter(|e| e.status == Status::Fail)
            .map(|e| e.claim.as_str())
            .collect();
        return Err(Error::NotAdmissible(format!("failed claims: {}", failed.join("; "))));
    }
    Ok(())
}

fn check_instance(spec: &ComposeSpec) -> std::result::Result<(), String> {
    let f = spec.build();
    let (d, _) = decompose(&f).map_err(|e| e.to_string())?;
    if d != spec.decomposition {
        return Err(format!("recovered {d:?}"));
    }
    let props = run_property_suite(&f);
    if !props.all_pass() {
        let bad: Vec<String> = props
            .entries
            .iter()
            .filter(|e| e.status != Status::Pass)
            .map(|e| format!("{} {}", e.status, e.claim))
            .collect();
        return Err(bad.join("; "));
    }
    Ok(())
}

fn verify_corpus(seed: u64, count: usize) -> Result<()> {
    let specs = corpus(seed, count);
    let outcomes: Vec<_> = specs.par_iter().map(check_instance).collect();
    let mut failed = Vec::new();
    for (k, o) in outcomes.iter().enumerate() {
        match o {
            Ok(()) => println!("instance {k}: ok"),
            Err(msg) => {
                println!("instance {k}: FAILED {msg}");
                failed.push(k);
            }
        }
    }
    println!("corpus {seed}: {}/{count} passed", count - failed.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::NotAdmissible(format!("corpus instances {failed:?} failed")))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compose { spec, gauge_seed, output } => compose(&spec, gauge_seed, &output),
        Command::Decompose { file, output } => decompose_cmd(&file, &output),
        Command::Classify { file } => classify(&file),
        Command::Eval { file, sheaf, twist } => eval(&file, &sheaf, twist),
        Command::Cohomology { sheaf, twist } => cohomology(&sheaf, twist),
        Command::Verify(args) => match (args.file, args.corpus) {
            (Some(file), _) => verify_file(&file),
            (None, Some(c)) => verify_corpus(c[0], c[1] as usize),
            (None, None) => unreachable!("clap requires one of them"),
        },
    }
}

fn report_error(code: &str, message: &str) {
    let v = serde_json::json!({ "error": code, "message": message });
    eprintln!("{v}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("USAGE", e.to_string().trim());
            return ExitCode::from(4);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(e.code(), &e.to_string());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_whole_file() {
        let dir = tempfile::TempDir::new().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, "first, longer contents").unwrap();
        write_atomic(&p, "second").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn atomic_write_into_missing_directory_fails_cleanly() {
        let dir = tempfile::TempDir::new().unwrap();
        let p = dir.path().join("nope").join("out.json");
        assert!(matches!(write_atomic(&p, "x"), Err(Error::Io(_))));
        assert!(!p.exists());
    }
}
