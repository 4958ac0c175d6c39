use std::fmt;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use breakfast_core::creativity::BatchReport;
use breakfast_core::kitchen::{self, ServeRequest};
use breakfast_core::{fixtures, HouseholdState, ObjectClass, StateLock};
use breakfast_service::{ServerConfig, DEFAULT_PORT};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

const STATE_FILE: &str = "household.json";

#[derive(Debug, Parser)]
#[command(name = "breakfast", version, about = "Teach, serve and invent breakfasts for a household")]
struct Cli {
    /// Directory holding the household state
    #[arg(long, global = true, env = "BREAKFAST_DATA_DIR", default_value = ".")]
    data_dir: PathBuf,

    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Create a new household
    Init(InitArgs),
    /// Manage the object catalog
    #[command(subcommand)]
    Object(ObjectCommand),
    /// Teach a named breakfast setup
    Teach {
        name: String,
        /// Comma-separated object names
        #[arg(long, value_delimiter = ',', required = true)]
        objects: Vec<String>,
    },
    /// List taught breakfasts with their recent counts
    List,
    /// Serve a breakfast and record it
    Serve(ServeArgs),
    /// Move the household calendar
    #[command(subcommand)]
    Day(DayCommand),
    /// Show servings still inside the short-term window
    History,
    /// Print the dependency rules learned from taught setups
    Rules,
    /// Generate a batch of new breakfasts and report how they were classified
    Simulate {
        #[arg(long)]
        n: usize,
        /// Also write the JSON report to this file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the HTTP API over this household
    ServeHttp {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Allowed browser origin; any origin when omitted
        #[arg(long)]
        cors_origin: Option<String>,
    },
}

#[derive(Debug, Args)]
struct InitArgs {
    #[arg(long, default_value_t = breakfast_core::memory::DEFAULT_STM_DAYS)]
    stm_days: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start from a ready-made catalog and taught setups
    #[arg(long)]
    preset: Option<Preset>,
    /// Replace an existing household
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    Kitchen,
    Pantry,
    Unconventional,
}

#[derive(Debug, Subcommand)]
enum ObjectCommand {
    /// Add an object to the catalog
    Add {
        name: String,
        #[arg(long)]
        class: ObjectClass,
        /// The robot can pick this object up
        #[arg(long)]
        graspable: bool,
    },
    /// List catalog objects
    List,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ServeArgs {
    /// Serve the taught breakfast with this name
    #[arg(long)]
    name: Option<String>,
    /// Serve the breakfast eaten least in the recent window
    #[arg(long)]
    least_eaten: bool,
    /// Invent a new breakfast
    #[arg(long)]
    surprise: bool,
}

impl ServeArgs {
    fn request(&self) -> ServeRequest {
        match &self.name {
            Some(name) => ServeRequest::ByName { name: name.clone() },
            None if self.least_eaten => ServeRequest::LeastEaten,
            None => ServeRequest::Surprise,
        }
    }
}

#[derive(Debug, Subcommand)]
enum DayCommand {
    /// Start the next day
    Advance,
}

#[derive(Debug)]
enum CliError {
    Core(breakfast_core::Error),
    NotInitialized(PathBuf),
    AlreadyInitialized(PathBuf),
    Io(std::io::Error),
    Server(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::NotInitialized(_) => "NotInitialized",
            CliError::AlreadyInitialized(_) => "AlreadyInitialized",
            CliError::Io(_) => "Io",
            CliError::Server(_) => "Server",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::NotInitialized(p) => write!(f, "no household at {}; run `breakfast init` first", p.display()),
            CliError::AlreadyInitialized(p) => write!(f, "a household already exists at {}; pass --force to replace it", p.display()),
            CliError::Io(e) => e.fmt(f),
            CliError::Server(e) => f.write_str(e),
        }
    }
}

impl From<breakfast_core::Error> for CliError {
    fn from(e: breakfast_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// A loaded household whose lock is held until it is dropped.
struct Session {
    path: PathBuf,
    state: HouseholdState,
    _lock: StateLock,
}

impl Session {
    fn open(data_dir: &Path) -> CliResult<Self> {
        let path = data_dir.join(STATE_FILE);
        if !path.exists() {
            return Err(CliError::NotInitialized(path));
        }
        let lock = StateLock::acquire(&path)?;
        let state = HouseholdState::load(&path)?;
        Ok(Self { path, state, _lock: lock })
    }

    fn commit(&self) -> CliResult<()> {
        Ok(self.state.save(&self.path)?)
    }
}

fn print(json_mode: bool, value: serde_json::Value, text: impl FnOnce() -> String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
    } else {
        print!("{}", text());
    }
}

fn init(cli: &Cli, args: &InitArgs) -> CliResult<()> {
    std::fs::create_dir_all(&cli.data_dir)?;
    let path = cli.data_dir.join(STATE_FILE);
    let _lock = StateLock::acquire(&path)?;
    if path.exists() && !args.force {
        return Err(CliError::AlreadyInitialized(path));
    }
    let state = match args.preset {
        None => HouseholdState::new(args.stm_days, args.seed)?,
        Some(preset) => {
            let mut doc = match preset {
                Preset::Kitchen => fixtures::kitchen_household(args.seed),
                Preset::Pantry => fixtures::pantry_household(args.seed),
                Preset::Unconventional => fixtures::unconventional_household(args.seed),
            }
            .to_document();
            doc.stm_days = args.stm_days;
            HouseholdState::from_document(doc)?
        }
    };
    state.save(&path)?;
    let (objects, breakfasts) = (state.catalog().len(), state.episodic().len());
    print(
        cli.json,
        json!({"path": path, "stm_days": args.stm_days, "seed": args.seed, "objects": objects, "breakfasts": breakfasts}),
        || {
            format!(
                "initialized {} (stm_days {}, seed {}, {objects} objects, {breakfasts} breakfasts)\n",
                path.display(),
                args.stm_days,
                args.seed
            )
        },
    );
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Init(args) => init(cli, args),
        Command::Object(ObjectCommand::Add { name, class, graspable }) => {
            let mut s = Session::open(&cli.data_dir)?;
            let id = s.state.add_object(name, *class, *graspable)?;
            s.commit()?;
            let spec = s.state.catalog().spec(id).clone();
            print(cli.json, json!(spec), || {
                format!("added object #{} {} ({}{})\n", id.0, spec.name, spec.class, if spec.graspable { ", graspable" } else { "" })
            });
            Ok(())
        }
        Command::Object(ObjectCommand::List) => {
            let s = Session::open(&cli.data_dir)?;
            let objects = s.state.catalog().objects();
            print(cli.json, json!(objects), || {
                objects
                    .iter()
                    .map(|o| format!("{}\t{}\t{}\t{}\n", o.id.0, o.name, o.class, if o.graspable { "graspable" } else { "-" }))
                    .collect()
            });
            Ok(())
        }
        Command::Teach { name, objects } => {
            let mut s = Session::open(&cli.data_dir)?;
            let entry = s.state.teach(name, objects)?.clone();
            s.commit()?;
            let names = s.state.catalog().decode(&entry.lv)?;
            print(cli.json, json!({"id": entry.id, "name": entry.name, "objects": names}), || {
                format!("taught #{} {}: {}\n", entry.id, entry.name, names.join(", "))
            });
            Ok(())
        }
        Command::List => {
            let s = Session::open(&cli.data_dir)?;
            let counts = s.state.eaten_counts();
            let mut rows = Vec::new();
            for e in s.state.episodic().entries() {
                let objects = s.state.catalog().decode(&e.lv)?;
                rows.push(json!({
                    "id": e.id,
                    "name": e.name,
                    "objects": objects,
                    "taught_on_day": e.taught_on_day,
                    "eaten_in_window": counts.0[e.id.0],
                }));
            }
            print(cli.json, json!(rows), || {
                s.state
                    .episodic()
                    .entries()
                    .iter()
                    .zip(&rows)
                    .map(|(e, row)| format!("#{} {}: {} (eaten {})\n", e.id, e.name, join(&row["objects"]), counts.0[e.id.0]))
                    .collect()
            });
            Ok(())
        }
        Command::Serve(args) => {
            let mut s = Session::open(&cli.data_dir)?;
            let plan = kitchen::serve(&mut s.state, &args.request())?;
            s.commit()?;
            print(cli.json, json!(plan), || plan.to_text());
            Ok(())
        }
        Command::Day(DayCommand::Advance) => {
            let mut s = Session::open(&cli.data_dir)?;
            let day = s.state.advance_day();
            s.commit()?;
            print(cli.json, json!({"day": day}), || format!("day {day}\n"));
            Ok(())
        }
        Command::History => {
            let s = Session::open(&cli.data_dir)?;
            let rows = kitchen::history(&s.state);
            print(cli.json, json!(rows), || {
                rows.iter()
                    .map(|r| format!("day {}\t{}\t{}\n", r.day, r.served, r.objects.join(", ")))
                    .collect()
            });
            Ok(())
        }
        Command::Rules => {
            let s = Session::open(&cli.data_dir)?;
            let kg = s.state.knowledge_graph()?;
            let views = breakfast_core::rules::rule_views(kg, s.state.catalog());
            print(cli.json, json!({"built_from": kg.built_from, "rules": views}), || {
                breakfast_core::rules::dump(kg, s.state.catalog())
            });
            Ok(())
        }
        Command::Simulate { n, report } => {
            let mut s = Session::open(&cli.data_dir)?;
            let stats = s.state.simulate_batch(*n)?;
            s.commit()?;
            let out = BatchReport::new(&stats, s.state.catalog())?;
            if let Some(path) = report {
                std::fs::write(path, serde_json::to_string_pretty(&out).expect("reports serialize") + "\n")?;
            }
            print(cli.json, json!(out), || out.to_text());
            Ok(())
        }
        Command::ServeHttp { port, host, cors_origin } => {
            let path = cli.data_dir.join(STATE_FILE);
            if !path.exists() {
                return Err(CliError::NotInitialized(path));
            }
            let config = ServerConfig {
                addr: SocketAddr::new(*host, *port),
                state_path: path,
                cors_origin: cors_origin.clone(),
            };
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(breakfast_service::run(config)).map_err(|e| match e.downcast::<breakfast_core::Error>() {
                Ok(core) => CliError::Core(*core),
                Err(other) => CliError::Server(other.to_string()),
            })
        }
    }
}

fn join(names: &serde_json::Value) -> String {
    names
        .as_array()
        .map(|a| a.iter().filter_map(|v| v.as_str()).collect::<Vec<_>>().join(", "))
        .unwrap_or_default()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default_level = if matches!(cli.command, Command::ServeHttp { .. }) { "info" } else { "warn" };
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| tracing_subscriber::EnvFilter::new(default_level)),
        )
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if cli.json {
                eprintln!("{}", json!({"error": {"code": e.code(), "message": e.to_string()}}));
            } else {
                eprintln!("error[{}]: {e}", e.code());
            }
            ExitCode::from(1)
        }
    }
}
