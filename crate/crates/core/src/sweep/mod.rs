//! Parameter sweeps over the pipeline and their CSV/JSON output.

pub mod config;
pub mod emit;
pub mod run;

pub use config::{parse_overrides, parse_pairs, AxisSpec, ChannelKind, Column, Format, Param, SweepConfig};
pub use emit::{emit, format_number, parse_number, write_table};
pub use run::{channel_for, evaluate_point, run_sweep, SweepRow, SweepTable};
