mod pca;
mod svg;

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use circlift::complex::{Chain, Cochain, FilteredComplex};
use circlift::experiments::{sample_circle, sample_trefoil, sparsity_sweep, write_sparsity_csv, Metadata};
use circlift::finite_field::OddPrime;
use circlift::io::{
    read_complex, read_coords_csv, read_points, to_json_pretty, write_coords_csv, write_points, DiagramJson, GradedJson,
    LiftReportJson, PairJson, SmoothedJson, WindingReportJson,
};
use circlift::lifting::{lift_closed, LiftOptions, DEFAULT_SNF_CAP};
use circlift::persistence::ClassStrategy;
use circlift::pipeline::{coordinates_from, lift_class, rips_for, PipelineConfig, ScalePolicy, StageError, Threshold};
use circlift::smoothing::{circular_correlation, circular_map, harmonic_smooth};
use circlift::winding::{reduce_winding, WindingOptions};
use circlift::Error;

#[derive(Parser, Debug)]
#[command(name = "circlift", version, about = "Circular coordinates with validated integer lifting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full pipeline from a point cloud or an explicit complex.
    Run(RunArgs),
    /// Lift a mod-p cocycle or cycle to a closed integer one.
    Lift(LiftArgs),
    /// Reduce the winding number of an integer cocycle to one.
    ReduceWinding(WindingArgs),
    /// Harmonic smoothing and circular coordinates for an integer cocycle.
    Coords(CoordsArgs),
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Points as CSV, one row per point, no header.
    #[arg(long)]
    input: Option<PathBuf>,
    /// JSON list of `[[vertices], filtration]` maximal simplices.
    #[arg(long)]
    complex: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 47)]
    prime: u64,
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    /// Rips threshold, or "auto" for the enclosing radius.
    #[arg(long, default_value = "auto")]
    threshold: String,
    /// "max-persistence" or "index:k".
    #[arg(long, default_value = "max-persistence")]
    class: String,
    /// "midpoint" or an explicit scale inside the selected interval.
    #[arg(long, default_value = "midpoint")]
    scale: String,
    #[arg(long, default_value_t = DEFAULT_SNF_CAP)]
    snf_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip winding reduction and smooth the lifted cocycle directly.
    #[arg(long)]
    no_reduce: bool,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Cocycle,
    Cycle,
}

#[derive(Args, Debug)]
struct LiftArgs {
    #[arg(long)]
    complex: PathBuf,
    /// Chain JSON `{"dim", "entries"}` with coefficients mod p.
    #[arg(long)]
    chain: PathBuf,
    #[arg(long, value_enum, default_value = "cocycle")]
    kind: Kind,
    #[arg(long, default_value_t = 47)]
    prime: u64,
    #[arg(long, default_value_t = DEFAULT_SNF_CAP)]
    snf_cap: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WindingArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    cocycle: PathBuf,
    /// Integer cycle the cocycle is paired with.
    #[arg(long)]
    cycle: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SNF_CAP)]
    snf_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoordsArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    cocycle: PathBuf,
    /// Vertex pinned at zero.
    #[arg(long)]
    base: Option<usize>,
    /// Ground truth `vertex_id,theta` CSV; prints the correlation.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// Proportion of lines in F_p^n that cannot be scaled into range.
    Sparsity {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: u64,
        #[arg(long, default_value_t = 3)]
        pmin: u64,
        #[arg(long, default_value_t = 300)]
        pmax: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Points on a circle in `ambient` dimensions, plus ground-truth angles.
    Circle {
        #[arg(long, default_value_t = 60)]
        count: usize,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 300)]
        ambient: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Points on a trefoil knot.
    Trefoil {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

/// An error with the operation that raised it.
struct Failure {
    operation: String,
    error: Error,
}

impl From<StageError> for Failure {
    fn from(e: StageError) -> Self {
        Failure { operation: e.operation.to_string(), error: e.source }
    }
}

trait At<T> {
    fn at(self, operation: &str) -> Result<T, Failure>;
}

impl<T, E: Into<Error>> At<T> for Result<T, E> {
    fn at(self, operation: &str) -> Result<T, Failure> {
        self.map_err(|e| Failure { operation: operation.to_string(), error: e.into() })
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Unliftable => 2,
        Error::ZeroPairing => 3,
        Error::TorsionObstruction(_) => 4,
        Error::EmptyDiagram(_) => 5,
        _ => 1,
    }
}

fn message(e: &Error) -> String {
    match e {
        Error::EmptyDiagram(1) => "no significant H¹ class".to_string(),
        e => e.to_string(),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).at("cli_io.open")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    fs::write(dir.join(name), contents).at("cli_io.write")
}

fn write_json_to<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), Failure> {
    let text = to_json_pretty(value).at("cli_io.write")?;
    match out {
        Some(path) => fs::write(path, text).at("cli_io.write"),
        None => std::io::stdout().write_all(text.as_bytes()).at("cli_io.write"),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_reader(open(path)?).at("cli_io.read_json")
}

fn load_complex(path: &Path) -> Result<FilteredComplex, Failure> {
    read_complex(open(path)?).at("cli_io.read_complex")
}

fn prime(p: u64) -> Result<OddPrime, Failure> {
    OddPrime::new(p).at("cli_io.config")
}

fn run(args: RunArgs) -> Result<(), Failure> {
    // validate everything before computing
    let config = PipelineConfig {
        prime: prime(args.prime)?,
        max_dim: args.max_dim,
        threshold: args.threshold.parse::<Threshold>().at("cli_io.config")?,
        class: args.class.parse::<ClassStrategy>().at("cli_io.config")?,
        scale: args.scale.parse::<ScalePolicy>().at("cli_io.config")?,
        snf_cap: args.snf_cap,
        seed: args.seed,
        reduce_winding: !args.no_reduce,
    };
    if config.max_dim == 0 {
        return Err(Error::InvalidArgument("--max-dim must be at least 1".into())).at("cli_io.config");
    }
    fs::create_dir_all(&args.out).at("cli_io.write")?;
    let (complex, points) = match (&args.source.input, &args.source.complex) {
        (Some(path), _) => {
            let points = read_points(open(path)?).at("cli_io.read_points")?;
            (rips_for(&points, &config)?, Some(points))
        }
        (_, Some(path)) => (load_complex(path)?, None),
        _ => unreachable!("clap enforces one source"),
    };
    let lifted = lift_class(&complex, &config)?;
    write_file(&args.out, "diagram.json", &to_json_pretty(&DiagramJson::new(&complex, &lifted.diagram)).at("cli_io.write")?)?;
    let sub = &lifted.complex;
    let lift_json = json!({
        "class": PairJson::new(&complex, &lifted.class),
        "cocycle": LiftReportJson::new(sub, &lifted.cocycle_lift),
        "cycle": LiftReportJson::new(sub, &lifted.cycle_lift),
    });
    write_file(&args.out, "lift_report.json", &to_json_pretty(&lift_json).at("cli_io.write")?)?;
    let coords = coordinates_from(sub, &lifted.cocycle_lift.exact_preimage, &lifted.cycle_lift.exact_preimage, &config)?;
    if let Some(w) = &coords.winding {
        write_file(&args.out, "winding_report.json", &to_json_pretty(&WindingReportJson::new(sub, w)).at("cli_io.write")?)?;
    }
    write_file(&args.out, "smoothed.json", &to_json_pretty(&SmoothedJson::new(sub, &coords.smoothed)).at("cli_io.write")?)?;
    let mut csv = Vec::new();
    write_coords_csv(&coords.coords, &mut csv).at("cli_io.write")?;
    fs::write(args.out.join("coords.csv"), csv).at("cli_io.write")?;
    let theta: Vec<f64> = coords.coords.values.values().copied().collect();
    let plane = match points {
        Some(points) => pca::pca_project(&points).at("cli_io.pca_project")?,
        // without points, vertices sit on the circle at their angle
        None => theta.iter().map(|t| [(std::f64::consts::TAU * t).cos(), (std::f64::consts::TAU * t).sin()]).collect(),
    };
    write_file(&args.out, "coords.svg", &svg::coords_scatter(&plane, &theta))?;
    Ok(())
}

fn lift(args: LiftArgs) -> Result<(), Failure> {
    let p = prime(args.prime)?;
    let complex = load_complex(&args.complex)?;
    let chain: GradedJson = read_json(&args.chain)?;
    let options = LiftOptions { snf_cap: args.snf_cap };
    let report = match args.kind {
        Kind::Cocycle => {
            let c: Cochain<u64> = chain.to_mod_p(&complex, p).at("cli_io.read_chain")?;
            LiftReportJson::new(&complex, &lift_closed(&complex, &c, p, options).at("lifting.lift_closed")?)
        }
        Kind::Cycle => {
            let c: Chain<u64> = chain.to_mod_p(&complex, p).at("cli_io.read_chain")?;
            LiftReportJson::new(&complex, &lift_closed(&complex, &c, p, options).at("lifting.lift_closed")?)
        }
    };
    write_json_to(args.out.as_deref(), &report)
}

fn reduce(args: WindingArgs) -> Result<(), Failure> {
    let complex = load_complex(&args.complex)?;
    let alpha: Cochain<_> = read_json::<GradedJson>(&args.cocycle)?.to_integer(&complex).at("cli_io.read_chain")?;
    let beta: Chain<_> = read_json::<GradedJson>(&args.cycle)?.to_integer(&complex).at("cli_io.read_chain")?;
    let options = WindingOptions { snf_cap: args.snf_cap, seed: args.seed, ..WindingOptions::default() };
    let report = reduce_winding(&complex, &alpha, &beta, &options).at("winding.reduce_winding")?;
    write_json_to(args.out.as_deref(), &WindingReportJson::new(&complex, &report))
}

fn coords(args: CoordsArgs) -> Result<(), Failure> {
    let complex = load_complex(&args.complex)?;
    let alpha: Cochain<_> = read_json::<GradedJson>(&args.cocycle)?.to_integer(&complex).at("cli_io.read_chain")?;
    let smoothed = harmonic_smooth(&complex, &alpha).at("smoothing_coords.harmonic_smooth")?;
    let coords = circular_map(&smoothed, &complex, args.base).at("smoothing_coords.circular_map")?;
    fs::create_dir_all(&args.out).at("cli_io.write")?;
    write_file(&args.out, "smoothed.json", &to_json_pretty(&SmoothedJson::new(&complex, &smoothed)).at("cli_io.write")?)?;
    let mut csv = Vec::new();
    write_coords_csv(&coords, &mut csv).at("cli_io.write")?;
    fs::write(args.out.join("coords.csv"), csv).at("cli_io.write")?;
    if let Some(path) = args.truth {
        let truth = read_coords_csv(open(&path)?).at("cli_io.read_coords")?;
        let r = circular_correlation(&coords, &truth.values).at("smoothing_coords.circular_correlation")?;
        println!("{}", json!({ "circular_correlation": r }));
    }
    Ok(())
}

fn experiment(e: Experiment) -> Result<(), Failure> {
    match e {
        Experiment::Sparsity { n, k, pmin, pmax, samples, seed, out } => {
            let rows = sparsity_sweep(n, pmin, pmax, samples, k, seed).at("experiments.sparsity_sweep")?;
            let meta = Metadata::new(seed);
            fs::create_dir_all(&out).at("cli_io.write")?;
            let file = File::create(out.join("sparsity.csv")).at("cli_io.write")?;
            write_sparsity_csv(&rows, BufWriter::new(file)).at("cli_io.write")?;
            write_file(&out, "sparsity.svg", &svg::sparsity_chart(&rows, &meta))?;
            let params = json!({ "metadata": meta, "n": n, "k": k, "pmin": pmin, "pmax": pmax, "samples_per_prime": samples });
            write_file(&out, "metadata.json", &to_json_pretty(&params).at("cli_io.write")?)
        }
        Experiment::Circle { count, noise, ambient, seed, out } => {
            let (points, turns) = sample_circle(count, noise, ambient, seed).at("experiments.sample_circle")?;
            fs::create_dir_all(&out).at("cli_io.write")?;
            write_points(&points, File::create(out.join("points.csv")).at("cli_io.write")?).at("cli_io.write")?;
            let truth = circlift::smoothing::CircularCoords { values: turns.into_iter().enumerate().collect() };
            write_coords_csv(&truth, File::create(out.join("truth.csv")).at("cli_io.write")?).at("cli_io.write")?;
            write_file(&out, "metadata.json", &to_json_pretty(&Metadata::new(seed)).at("cli_io.write")?)
        }
        Experiment::Trefoil { count, noise, seed, out } => {
            let points = sample_trefoil(count, noise, seed).at("experiments.sample_trefoil")?;
            fs::create_dir_all(&out).at("cli_io.write")?;
            write_points(&points, File::create(out.join("points.csv")).at("cli_io.write")?).at("cli_io.write")?;
            write_file(&out, "metadata.json", &to_json_pretty(&Metadata::new(seed)).at("cli_io.write")?)
        }
    }
}

fn limit_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("CIRCLIFT_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("CIRCLIFT_THREADS={value:?}")))
        .at("cli_io.config")?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidArgument(e.to_string()))
        .at("cli_io.config")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let diag = json!({ "error": "Usage", "operation": "cli_io.parse_args", "message": e.kind().to_string() });
            eprintln!("{diag}");
            return ExitCode::from(1);
        }
    };
    let out_dir = match &cli.command {
        Command::Run(a) => Some(a.out.clone()),
        _ => None,
    };
    let result = limit_threads().and_then(|()| match cli.command {
        Command::Run(a) => run(a),
        Command::Lift(a) => lift(a),
        Command::ReduceWinding(a) => reduce(a),
        Command::Coords(a) => coords(a),
        Command::Experiment(e) => experiment(e),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let diag = json!({ "error": f.error.name(), "operation": f.operation, "message": message(&f.error) });
            eprintln!("{diag}");
            if let Some(dir) = out_dir.filter(|d| d.is_dir()) {
                let _ = fs::write(dir.join("error.json"), format!("{diag:#}\n"));
            }
            ExitCode::from(exit_code(&f.error))
        }
    }
}
