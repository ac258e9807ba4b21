//! Document parsing and subcommands of the `higgs` tool. Reports are JSON
//! values with sorted keys, so equal inputs give byte-identical output.

pub mod commands;
pub mod doc;

pub use commands::{cmd_check, cmd_dim, cmd_jh, cmd_rays, cmd_sweep, Mode, Options, Outcome};
pub use doc::{from_json, InputError, PairDocument, SweepDocument};

/// Pretty JSON with a trailing newline.
pub fn render(report: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}
