//! `spinmagic` command-line front end. Exit codes: 0 success, 2 bad input, 3 numerical failure.

mod args;
mod commands;
mod error;
mod output;

use clap::Parser;

use args::{merge_config, Cli, Command};
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    macro_rules! with_config {
        ($a:expr, $f:path) => {{
            let cfg = $a.common.config.clone();
            $f(merge_config($a, cfg.as_deref())?)
        }};
    }
    match cli.command {
        Command::OatSweep(a) => with_config!(a, commands::oat_sweep),
        Command::Scaling(a) => with_config!(a, commands::scaling),
        Command::Kitten(a) => with_config!(a, commands::kitten),
        Command::Dicke(a) => with_config!(a, commands::dicke),
        Command::Gghz(a) => with_config!(a, commands::gghz),
        Command::Readout(a) => with_config!(a, commands::readout),
        Command::Husimi(a) => with_config!(a, commands::husimi_cmd),
        Command::Sre(a) => with_config!(a, commands::sre),
        Command::State(a) => with_config!(a, commands::state),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("spinmagic: {e}");
        std::process::exit(e.exit_code());
    }
}
