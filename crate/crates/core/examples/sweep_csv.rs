//! A two-axis dephasing sweep written as CSV to stdout.

use udw_qfim::sweep::{emit, run_sweep, SweepConfig};

fn main() -> udw_qfim::Result<()> {
    let cfg = SweepConfig::parse(
        "grid.x.name = t
         grid.x.start = 0
         grid.x.stop = 10
         grid.x.count = 5
         grid.y.name = delta0
         grid.y.start = -2.5
         grid.y.stop = 0.5
         grid.y.count = 3
         fixed.T = 0.5
         fixed.omega = 1
         channel.kind = dephasing
         channel.tau = 5
         channel.mu = 0.6
         outputs = var_T_sim, var_D_sim, gamma, flags
         workers = 2",
    )?;
    let table = run_sweep(&cfg)?;
    emit(&table, cfg.format, None)
}
