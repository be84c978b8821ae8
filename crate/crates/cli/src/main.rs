use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eegcr::augment::AugmentChain;
use eegcr::harness::{
    load_dataset, render_report, run_scenario_on, sweep, ReportFormat, ResultTable, ScenarioConfig, ScenarioKind,
    SweepParam,
};
use eegcr::synth::{parse_synth_file, synth_imbalanced, synth_mi};
use eegcr::{parse_montage, Error, Result, TrialSet};
use log::info;

const EXIT_CONFIG: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Parser)]
#[command(name = "eegcr", version, about = "Channel reflection augmentation and CSP+LDA benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic trial set from a spec file.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        /// Output directory; receives data.eegt and data.montage.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one scenario and emit a report.
    Run(RunArgs),
    /// Run one scenario per grid value of an augmentation constant.
    Sweep {
        #[arg(long)]
        param: String,
        /// Comma-separated values; defaults to the standard grid.
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Parse and check a montage file.
    ValidateMontage { file: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario config file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// EEGT file or a directory holding data.eegt.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    augment: Option<String>,
    #[arg(long)]
    n_labeled: Option<usize>,
    #[arg(long)]
    target: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repeats: Option<usize>,
    /// Report file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

fn config_err(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

impl RunArgs {
    fn scenario_config(&self) -> Result<ScenarioConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
                text.parse()?
            }
            None => ScenarioConfig::new(ScenarioKind::Within),
        };
        if let Some(s) = &self.scenario {
            cfg.scenario = s.parse()?;
            if self.n_labeled.is_none() && cfg.scenario == ScenarioKind::CrossUnsupervised {
                cfg.n_labeled_per_class = 0;
            }
        }
        if self.config.is_none() && self.n_labeled.is_none() && cfg.scenario != ScenarioKind::CrossUnsupervised {
            return Err(config_err("--n-labeled is required for this scenario"));
        }
        if let Some(d) = &self.data {
            cfg.data = Some(d.clone());
        }
        if let Some(a) = &self.augment {
            cfg.chain = a.parse::<AugmentChain>()?;
        }
        if let Some(n) = self.n_labeled {
            cfg.n_labeled_per_class = n;
        }
        if let Some(t) = self.target {
            cfg.target_subject = Some(t);
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(r) = self.repeats {
            cfg.repeats = r;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn format(&self) -> Result<ReportFormat> {
        self.format.parse()
    }

    fn dataset(&self, cfg: &ScenarioConfig) -> Result<TrialSet<f64>> {
        let path = cfg.data.as_ref().ok_or_else(|| config_err("no dataset given (--data)"))?;
        info!("loading {}", path.display());
        load_dataset(path)
    }

    fn emit(&self, tables: &[ResultTable], format: ReportFormat) -> Result<()> {
        let text = render_report(tables, format)?;
        match &self.out {
            Some(p) => fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| config_err(format!("bad grid value `{v}`"))))
        .collect()
}

fn cmd_synth(spec_path: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(spec_path).map_err(|e| config_err(format!("{}: {e}", spec_path.display())))?;
    let (spec, minority) = parse_synth_file(&text)?;
    let set: TrialSet<f64> = match minority {
        Some(f) => synth_imbalanced(&spec, f)?,
        None => synth_mi(&spec)?,
    };
    fs::create_dir_all(out)?;
    let path = out.join("data.eegt");
    eegcr::data::write_trialset(&set, &path)?;
    info!("wrote {} trials to {}", set.len(), path.display());
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let cfg = args.scenario_config()?;
    let format = args.format()?;
    let set = args.dataset(&cfg)?;
    let table = run_scenario_on(&set, &cfg)?;
    info!("{} avg {:.2}", table.method, table.avg());
    args.emit(&[table], format)
}

fn cmd_sweep(param: &str, grid: Option<&str>, args: &RunArgs) -> Result<()> {
    let param: SweepParam = param.parse()?;
    let mut cfg = args.scenario_config()?;
    if args.augment.is_none() && args.config.is_none() {
        cfg.chain = param.as_str().parse()?;
    }
    let grid = match grid {
        Some(g) => parse_grid(g)?,
        None => param.default_grid(),
    };
    let format = args.format()?;
    let set = args.dataset(&cfg)?;
    let mut tables = sweep(&set, &cfg, param, &grid)?;
    // CR has no constant: a flat reference line
    let reference = ScenarioConfig {
        chain: "cr".parse()?,
        ..cfg
    };
    tables.push(run_scenario_on(&set, &reference)?);
    args.emit(&tables, format)
}

fn cmd_validate_montage(file: &Path) -> Result<()> {
    let text = fs::read_to_string(file).map_err(|e| config_err(format!("{}: {e}", file.display())))?;
    let montage = parse_montage(&text)?;
    println!(
        "ok: {} channels, {} pairs, {} midline",
        montage.len(),
        montage.pair_count(),
        montage.midline().len()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Synth { spec, out } => cmd_synth(spec, out),
        Command::Run(args) => cmd_run(args),
        Command::Sweep { param, grid, run } => cmd_sweep(param, grid.as_deref(), run),
        Command::ValidateMontage { file } => cmd_validate_montage(file),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { EXIT_CONFIG } else { EXIT_DATA })
        }
    }
}
