use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hopping_core::report::{parse_config, run_study, StudySpec};
use hopping_core::Error;

/// Spectral and Bose-gas studies of the Pure Hopping model.
#[derive(Parser, Debug)]
#[command(name = "hopping", version)]
struct Args {
    /// table, norms, green, ids-shift, dims, rho-c, schedule-convergence,
    /// density-limit or fixed-density
    #[arg(long)]
    study: Option<String>,
    /// N, Z, Z^d, NComb(d), ZComb(d)
    #[arg(long)]
    model: Option<String>,
    /// Comma-separated volume indices (site offsets for the green study)
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Condensate weight D
    #[arg(long = "bigD")]
    big_d: Option<String>,
    /// Mean density for fixed-density
    #[arg(long)]
    rho: Option<String>,
    /// Scaled gap rate (density-limit) or offset above the norm (green)
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long)]
    workers: Option<usize>,
    /// key=value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 1,
        e if e.is_numerical() => 3,
        _ => 2,
    }
}

fn run(args: Args) -> Result<(), Error> {
    let mut map: BTreeMap<String, String> = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    let flags = [
        ("study", &args.study),
        ("model", &args.model),
        ("n", &args.n),
        ("beta", &args.beta),
        ("bigD", &args.big_d),
        ("rho", &args.rho),
        ("a", &args.a),
        ("tol", &args.tol),
        ("format", &args.format),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            map.insert(k.to_string(), v.clone());
        }
    }
    let workers = match args.workers {
        Some(w) => Some(w),
        None => map
            .get("workers")
            .map(|w| w.parse::<usize>().map_err(|_| Error::Invalid(format!("workers: '{w}' is not a count"))))
            .transpose()?,
    };
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::Invalid("workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Error::Invalid(e.to_string()))?;
    }
    let out_path = args.out.clone().or_else(|| map.get("out").map(PathBuf::from));
    let spec = StudySpec::from_map(&map)?;
    let text = run_study(&spec)?.render(spec.format, &spec.hash())?;
    match out_path {
        Some(path) => fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hopping: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
