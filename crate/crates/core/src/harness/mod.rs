//! Scenario runner: splits, alignment, augmentation of training data,
//! CSP+LDA scoring, hyperparameter sweeps and report emission.

mod config;
mod report;
mod run;
mod split;

pub use config::{ScenarioConfig, ScenarioKind, DEFAULT_REPEATS};
pub use report::{emit_report, render_report, ReportFormat, ResultTable};
pub use run::{load_dataset, run_scenario, run_scenario_on, sweep, SweepParam};
pub use split::{block_len, split_continuous_block};
