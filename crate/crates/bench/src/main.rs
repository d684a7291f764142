use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mgpf_bench::fixtures::load_fixture;
use mgpf_bench::instances::generate_instance;
use mgpf_bench::maps::{build_provider, cache_dir, load_map, HeuristicChoice, LandmarkConfig, DEFAULT_LANDMARKS};
use mgpf_bench::record::{RecordInput, RunRecord};
use mgpf_bench::suite::{run_suite, summary_table, write_csv, write_figures, BenchConfig};
use mgpf_core::heuristic::Weight;
use mgpf_core::pipeline::{tree_to_walk, validate_solution, SolutionRecord};
use mgpf_core::steiner::{solve, Solver, SolverConfig};
use mgpf_core::{Instance, NodeId};

type Fallible<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(
    name = "mgpf",
    version,
    about = "Multi-goal path finding with S* Steiner tree search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print the walk.
    Solve(SolveArgs),
    /// Run a benchmark suite and write one CSV row per run.
    Bench(BenchArgs),
    /// Build or load the landmark table for a map.
    Landmarks(LandmarkArgs),
    /// Check a solution file against its instance.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Map file (MovingAI or edge list) or synthetic map name such as maze-32.
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    map: Option<String>,
    /// Shipped fixture: appendix-weak-h, appendix-strong-h, line-5 or star.
    #[arg(long)]
    fixture: Option<String>,
    /// Origin, destination, then goals, as node ids.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["n", "fixture"])]
    terminals: Option<Vec<NodeId>>,
    /// Number of random terminals (origin and destination included).
    #[arg(long, short = 'n')]
    n: Option<usize>,
    /// Seed for terminal placement.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

struct Loaded {
    name: String,
    instance: Instance,
    seed: Option<u64>,
    default_heuristic: HeuristicChoice,
    default_weight: Weight,
}

impl InstanceArgs {
    fn load(&self) -> Fallible<Loaded> {
        if let Some(name) = &self.fixture {
            let f = load_fixture(name)?;
            return Ok(Loaded {
                name: f.name.to_string(),
                instance: f.instance,
                seed: None,
                default_heuristic: HeuristicChoice::Fixed(f.heuristic),
                default_weight: f.weight,
            });
        }
        let map = load_map(self.map.as_deref().expect("clap requires --map"))?;
        let (instance, seed) = match (&self.terminals, self.n) {
            (Some(t), _) if t.len() >= 2 => (Instance::new(map.graph.clone(), t[0], t[1], t[2..].to_vec())?, None),
            (Some(_), _) => return Err("--terminals needs an origin and a destination".into()),
            (None, Some(n)) => (generate_instance(&map.graph, n, self.seed)?, Some(self.seed)),
            (None, None) => return Err("give --terminals or -n".into()),
        };
        Ok(Loaded {
            name: map.name,
            instance,
            seed,
            default_heuristic: HeuristicChoice::Auto,
            default_weight: Weight::ONE,
        })
    }
}

#[derive(Args)]
struct LandmarkOpts {
    /// Landmarks for the ALT heuristic.
    #[arg(long = "landmarks", default_value_t = DEFAULT_LANDMARKS)]
    count: usize,
    /// Seed for landmark selection.
    #[arg(long, default_value_t = 1)]
    landmark_seed: u64,
    /// Rebuild the landmark table even if a cached copy exists.
    #[arg(long)]
    force_rebuild: bool,
}

impl LandmarkOpts {
    fn config(&self) -> LandmarkConfig {
        LandmarkConfig {
            count: self.count,
            seed: self.landmark_seed,
            dir: cache_dir(),
            force_rebuild: self.force_rebuild,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// kruskal, unmerged, hs, bs or mm.
    #[arg(long, default_value = "mm")]
    solver: Solver,
    /// Heuristic weight in [0, 1], e.g. 1/2 or 0.75.
    #[arg(long)]
    w: Option<Weight>,
    /// auto, zero, octile, exact or alt.
    #[arg(long)]
    heuristic: Option<HeuristicChoice>,
    #[arg(long)]
    reprioritize: bool,
    /// Merged BS nominates by g instead of f.
    #[arg(long)]
    bs_nominate_by_g: bool,
    #[command(flatten)]
    landmarks: LandmarkOpts,
    /// Solution file; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Run record (JSON); standard error when absent.
    #[arg(long)]
    record: Option<PathBuf>,
    /// Validate the walk before writing it.
    #[arg(long)]
    verify: bool,
    /// Report zero elapsed time.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reprioritize {
    Off,
    On,
    Both,
}

#[derive(Args)]
struct BenchArgs {
    /// Map files or synthetic map names; repeat or separate with commas.
    #[arg(long = "map", required = true, value_delimiter = ',')]
    maps: Vec<String>,
    /// Terminal counts.
    #[arg(long = "n", short = 'n', value_delimiter = ',', default_value = "10,20,30,40,50")]
    ns: Vec<usize>,
    /// Heuristic weights.
    #[arg(long = "w", value_delimiter = ',', default_value = "0,1/4,1/2,3/4,1")]
    weights: Vec<Weight>,
    /// Solvers, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    solvers: Vec<String>,
    #[arg(long, value_enum, default_value = "both")]
    reprioritize: Reprioritize,
    /// Instances per map and terminal count.
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "auto")]
    heuristic: HeuristicChoice,
    #[command(flatten)]
    landmarks: LandmarkOpts,
    #[arg(long)]
    bs_nominate_by_g: bool,
    /// Write 0 for every time_ms so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
    /// Validate every walk; violations go to the error column.
    #[arg(long)]
    verify: bool,
    /// CSV output; standard output when absent (the summary then goes to
    /// standard error).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Also write the per-configuration summary table here.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Write `<prefix>.vs_n.csv` and `<prefix>.vs_w.csv` for plotting.
    #[arg(long)]
    figures: Option<PathBuf>,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct LandmarkArgs {
    /// Map file or synthetic map name.
    #[arg(long)]
    map: String,
    #[arg(long, default_value_t = DEFAULT_LANDMARKS)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    force_rebuild: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Solution file written by `solve`.
    #[arg(long)]
    solution: PathBuf,
}

fn write_or(path: Option<&PathBuf>, text: &str, fallback: &mut dyn Write) -> Fallible<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => fallback.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> Fallible<ExitCode> {
    let loaded = args.instance.load()?;
    let inst = &loaded.instance;
    let kind = args.heuristic.unwrap_or(loaded.default_heuristic).resolve(inst.graph());
    let weight = args.w.unwrap_or(loaded.default_weight);
    let mut from_cache = None;
    let lm = args.landmarks.config();
    let provider = build_provider(inst, kind, weight, &mut || {
        let (table, cached) = lm.load(inst.graph())?;
        from_cache = Some(cached);
        Ok(table)
    })?;
    let config = SolverConfig::new(args.solver)
        .reprioritize(args.reprioritize)
        .bs_nominate_by_g(args.bs_nominate_by_g);
    let out = solve(inst, &provider, &config)?;
    let solution = tree_to_walk(&out.forest, inst)?;
    let mut record = RunRecord::new(
        RecordInput {
            map: &loaded.name,
            solver: args.solver,
            heuristic: kind.to_string(),
            w: weight.to_string(),
            reprioritize: args.reprioritize,
            bs_nominate_by_g: args.bs_nominate_by_g,
            seed: loaded.seed,
            terminals: inst.terminals(),
            no_timing: args.no_timing,
        },
        &out.stats,
        &solution,
    );
    record.landmarks_from_cache = from_cache;
    let mut status = ExitCode::SUCCESS;
    if args.verify {
        let (ok, violations) = validate_solution(&solution, inst);
        if !ok {
            status = ExitCode::FAILURE;
        }
        record.violations = Some(violations);
    }
    write_or(
        args.out.as_ref(),
        &SolutionRecord::from(&solution).to_text(),
        &mut io::stdout(),
    )?;
    write_or(args.record.as_ref(), &(record.to_json() + "\n"), &mut io::stderr())?;
    Ok(status)
}

fn parse_solvers(names: &[String]) -> Fallible<Vec<Solver>> {
    if names.iter().any(|s| s.eq_ignore_ascii_case("all")) {
        return Ok(Solver::ALL.to_vec());
    }
    Ok(names.iter().map(|s| s.parse()).collect::<Result<_, _>>()?)
}

fn cmd_bench(args: &BenchArgs) -> Fallible<ExitCode> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let config = BenchConfig {
        maps: args.maps.clone(),
        ns: args.ns.clone(),
        weights: args.weights.clone(),
        solvers: parse_solvers(&args.solvers)?,
        reprioritize: match args.reprioritize {
            Reprioritize::Off => vec![false],
            Reprioritize::On => vec![true],
            Reprioritize::Both => vec![false, true],
        },
        instances: args.instances,
        seed: args.seed,
        heuristic: args.heuristic,
        landmarks: args.landmarks.config(),
        bs_nominate_by_g: args.bs_nominate_by_g,
        no_timing: args.no_timing,
        verify: args.verify,
    };
    let rows = run_suite(&config)?;
    let summary = summary_table(&rows);
    match &args.out {
        Some(path) => {
            write_csv(&rows, io::BufWriter::new(fs::File::create(path)?))?;
            print!("{summary}");
        }
        None => {
            write_csv(&rows, io::stdout().lock())?;
            eprint!("{summary}");
        }
    }
    if let Some(path) = &args.summary {
        fs::write(path, &summary)?;
    }
    if let Some(prefix) = &args.figures {
        let with = |ext: &str| {
            let mut p = prefix.clone().into_os_string();
            p.push(ext);
            PathBuf::from(p)
        };
        write_figures(
            &rows,
            fs::File::create(with(".vs_n.csv"))?,
            fs::File::create(with(".vs_w.csv"))?,
        )?;
    }
    let failed = rows.iter().filter(|r| !r.error.is_empty()).count();
    if failed > 0 {
        eprintln!("{failed} of {} runs reported errors", rows.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_landmarks(args: &LandmarkArgs) -> Fallible<ExitCode> {
    let map = load_map(&args.map)?;
    let config = LandmarkConfig {
        count: args.count,
        seed: args.seed,
        dir: cache_dir(),
        force_rebuild: args.force_rebuild,
    };
    let (table, cached) = config.load(&map.graph)?;
    let fingerprint = mgpf_core::heuristic::graph_fingerprint(&map.graph);
    let path = mgpf_core::heuristic::LandmarkTable::cache_path(&config.dir, &fingerprint, args.seed, args.count);
    println!("map {}", map.name);
    println!("file {}", path.display());
    println!("source {}", if cached { "cache" } else { "built" });
    println!("landmarks {}", table.landmarks().len());
    if table.shortfall() > 0 {
        println!("shortfall {} (map has too few border nodes)", table.shortfall());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Fallible<ExitCode> {
    let loaded = args.instance.load()?;
    let record = SolutionRecord::from_text(&fs::read_to_string(&args.solution)?)?;
    let violations = record.violations(&loaded.instance);
    if violations.is_empty() {
        println!(
            "valid: cost {} tree {} ratio {}",
            record.cost, record.tree_edge_cost, record.ratio
        );
        Ok(ExitCode::SUCCESS)
    } else {
        for v in &violations {
            println!("invalid: {v}");
        }
        Ok(ExitCode::FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Landmarks(a) => cmd_landmarks(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
