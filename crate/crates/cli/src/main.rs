use clap::{Parser, Subcommand};
use odgrid::config::{Model, PricingConfig, PriceReport, SheetRow};
use odgrid::tables::{build_table, TableId, TableOptions};
use odgrid::Error;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Interpolated trinomial-grid option pricer.
#[derive(Parser, Debug)]
#[command(name = "odgrid", version)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "ODGRID_THREADS")]
    threads: Option<usize>,

    /// Print machine-readable JSON instead of text or CSV.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Price the job described by a TOML config.
    Price {
        config: PathBuf,
        /// Write the value (lv1d) or Arrow–Debreu (glv) sheets as CSV.
        #[arg(long, value_name = "FILE")]
        dump_sheets: Option<PathBuf>,
        /// Override the Monte Carlo seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Regenerate a published table as CSV.
    Table {
        /// lv1d_calib, basket2d, basket3d, hw_adj, heston or glv_calib.
        id: String,
        /// Add the Monte Carlo oracle columns.
        #[arg(long)]
        with_mc: bool,
        /// Write to a file instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Monte Carlo paths.
        #[arg(long)]
        paths: Option<usize>,
        /// Pairwise correlation of the basket tables.
        #[arg(long)]
        correlation: Option<f64>,
    },
    /// Print an example config for a model.
    Example { model: String },
}

enum Failure {
    Config(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFinite { .. } | Error::Unstable { .. } | Error::PremiumOutOfBounds { .. } => {
                Failure::Numeric(e.to_string())
            }
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Price { config, dump_sheets, seed } => price(&config, dump_sheets.as_deref(), seed, cli.json),
        Command::Table { id, with_mc, out, seed, paths, correlation } => {
            let id: TableId = id.parse()?;
            let mut opts = TableOptions { with_mc, correlation, ..Default::default() };
            if let Some(s) = seed {
                opts.mc.seed = s;
            }
            if let Some(p) = paths {
                opts.mc.paths = p;
            }
            if with_mc && !id.has_mc() {
                log::warn!("table {} has no Monte Carlo columns", id.name());
            }
            let table = build_table(id, &opts)?;
            let text = if cli.json {
                serde_json::to_string_pretty(&table).expect("table serializes") + "\n"
            } else {
                table.to_csv()
            };
            emit(&text, out.as_deref())
        }
        Command::Example { model } => {
            let m = Model::ALL
                .into_iter()
                .find(|m| m.name() == model)
                .ok_or_else(|| Failure::Config(format!("unknown model `{model}`")))?;
            print!("{}", PricingConfig::example(m).to_toml_string()?);
            Ok(())
        }
    }
}

fn price(path: &Path, dump: Option<&Path>, seed: Option<u64>, json: bool) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = PricingConfig::from_toml_str(&text)?;
    if let Some(s) = seed {
        cfg.mc.seed = s;
    }
    let report = cfg.run(dump.is_some())?;
    if let (Some(file), Some(rows)) = (dump, &report.sheets) {
        write_file(file, &sheets_csv(rows))?;
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", render(&report));
    }
    Ok(())
}

fn render(r: &PriceReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model        {}", r.model.name());
    let _ = writeln!(s, "price        {:.6}", r.price);
    if let Some(e) = r.stderr {
        let _ = writeln!(s, "stderr       {e:.6}");
    }
    if let Some(v) = r.implied_vol {
        let _ = writeln!(s, "implied vol  {:.4}%", 100.0 * v);
    }
    if let Some(g) = &r.grid {
        let nodes: Vec<String> = g.nodes.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(s, "grid         {} steps, {} nodes at maturity", g.steps, nodes.join(" x "));
    }
    let _ = writeln!(s, "wall time    {:.3} s", r.wall_time_s);
    s
}

fn sheets_csv(rows: &[SheetRow]) -> String {
    let mut s = String::from("step,node,state,value\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{:e},{:e}", r.step, r.node, r.state, r.value);
    }
    s
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
