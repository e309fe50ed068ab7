use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use thinlie::canon;
use thinlie::families::{self, Family};
use thinlie::invariants::{self, LocusMode};
use thinlie::meataxe::{self, Simplicity};
use thinlie::report::{self, RunReport};
use thinlie::search::{self, Level};
use thinlie::ThinTable;

/// Search, verify and fingerprint thin Lie algebras over GF(2).
#[derive(Parser)]
#[command(name = "thinlie", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for the randomized simplicity test.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 1 runs everything on the calling thread.
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,
    /// Omit wall-clock times so output is byte-identical across runs.
    #[arg(long, global = true)]
    stable: bool,
    /// Output location for commands that produce tables.
    #[arg(long, global = true)]
    emit: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate thin tables satisfying the Jacobi system and a constraint level.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "base")]
        level: Level,
        /// Stop after this many solutions.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Decide simplicity of the algebra in a table file.
    CheckSimple { file: PathBuf },
    /// Count square-zero or idempotent elements.
    Count {
        file: PathBuf,
        #[arg(long)]
        mode: LocusMode,
        /// Also count by walking every element and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Print the isomorphism-invariant summary of a table.
    Fingerprint { file: PathBuf },
    /// Build a member of one of the two infinite families.
    Family {
        #[arg(long)]
        which: Family,
        #[arg(long)]
        n: usize,
    },
    /// Check the structural claims about both families at one n.
    VerifyFamily {
        #[arg(long)]
        n: usize,
    },
    /// Group the tables in a directory into GL(n,2) orbits.
    Classify { dir: PathBuf },
    /// Validate a table file and report simplicity and fingerprint.
    VerifyFixture { path: PathBuf },
    /// Recompute every reference value and compare.
    ReproduceAll,
}

/// Exit status 1 is a mathematical mismatch, 2 an I/O or parse failure.
enum Failure {
    Mismatch,
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_table(path: &Path) -> Result<ThinTable, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    ThinTable::parse_any(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn finish(report: &RunReport, stable: bool) -> Outcome {
    print!("{}", report.render(stable));
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn cmd_search(g: &Global, n: usize, level: Level, limit: Option<u64>) -> Outcome {
    let sys = search::generate_constraints(n, level)?;
    let start = Instant::now();
    let assignments = if g.parallel > 1 {
        search::enumerate_solutions_parallel(&sys, limit)
    } else {
        let mut out = Vec::new();
        search::enumerate_solutions(&sys, limit, |x| out.push(x.to_vec()));
        out
    };
    if let Some(dir) = &g.emit {
        fs::create_dir_all(dir)?;
        let width = assignments.len().max(1).to_string().len();
        for (i, x) in assignments.iter().enumerate() {
            let t = search::solution_to_table(n, x)?;
            fs::write(dir.join(format!("n{n}_{}_{:0width$}.txt", level.name(), i + 1)), t.to_text())?;
        }
    }
    println!("n={n} level={} variables={} equations={}", level.name(), sys.num_vars, sys.equations.len());
    if !g.stable {
        println!("elapsed={:.3}s", start.elapsed().as_secs_f64());
    }
    println!("solutions={}", assignments.len());
    Ok(())
}

fn cmd_check_simple(g: &Global, file: &Path) -> Outcome {
    let t = read_table(file)?;
    if !t.is_lie_algebra() {
        println!("invalid: the table violates the Jacobi identity");
        return Err(Failure::Mismatch);
    }
    match meataxe::is_simple(&t, g.seed) {
        Ok(Simplicity::Simple) => println!("simple"),
        Ok(Simplicity::NotSimple(w)) => println!("not-simple witness-dim={}", w.dim()),
        Err(e) => {
            println!("indeterminate: {e}");
            return Err(Failure::Mismatch);
        }
    }
    Ok(())
}

fn cmd_count(file: &Path, mode: LocusMode, oracle: bool) -> Outcome {
    let t = read_table(file)?;
    let count = invariants::count_locus(&t, mode);
    println!("{}={count}", mode.name());
    if oracle {
        let brute = invariants::brute_force_count(&t, mode)?;
        println!("{}-oracle={brute}", mode.name());
        if brute != count {
            println!("MISMATCH");
            return Err(Failure::Mismatch);
        }
    }
    Ok(())
}

fn cmd_family(g: &Global, which: Family, n: usize) -> Outcome {
    let t = which.build(n)?;
    match &g.emit {
        Some(path) => {
            fs::write(path, t.to_text())?;
            println!("{which}({n}) dim={} written to {}", t.dim(), path.display());
        }
        None => print!("{}", t.to_text()),
    }
    Ok(())
}

fn cmd_verify_family(g: &Global, n: usize) -> Outcome {
    let r = families::verify_family_theorems(n, g.seed)?;
    print!("{r}");
    if r.all_passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn cmd_classify(g: &Global, dir: &Path) -> Outcome {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.is_file());
    paths.sort();
    let tables: Vec<ThinTable> = paths.iter().map(|p| read_table(p)).collect::<Result<_, _>>()?;
    let c = canon::classify(&tables)?;
    println!("tables={} classes={}", tables.len(), c.classes.len());
    for (i, class) in c.classes.iter().enumerate() {
        println!("class {i} hash={} members={} {}", class.hash, class.members.len(), class.fingerprint);
        for &m in &class.members {
            let name = paths[m].file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            println!("  {name}");
        }
        if let Some(out) = &g.emit {
            fs::create_dir_all(out)?;
            fs::write(out.join(format!("class_{i}_{}.txt", &class.hash[..12])), class.canonical.to_text())?;
        }
    }
    for group in &c.unresolved {
        println!("unresolved: classes {group:?} share a fingerprint");
    }
    Ok(())
}

fn cmd_verify_fixture(g: &Global, path: &Path) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let r = report::verify_fixture(&path.display().to_string(), &text, g.seed)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    finish(&r, g.stable)
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Search { n, level, limit } => cmd_search(g, *n, *level, *limit),
        Command::CheckSimple { file } => cmd_check_simple(g, file),
        Command::Count { file, mode, oracle } => cmd_count(file, *mode, *oracle),
        Command::Fingerprint { file } => {
            println!("{}", invariants::fingerprint(&read_table(file)?));
            Ok(())
        }
        Command::Family { which, n } => cmd_family(g, *which, *n),
        Command::VerifyFamily { n } => cmd_verify_family(g, *n),
        Command::Classify { dir } => cmd_classify(g, dir),
        Command::VerifyFixture { path } => cmd_verify_fixture(g, path),
        Command::ReproduceAll => finish(&report::reproduce_all(g.seed, g.parallel > 1), g.stable),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.global.parallel.max(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
