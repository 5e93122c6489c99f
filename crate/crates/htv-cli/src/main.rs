use clap::Parser;

use htv_cli::cli::{Cli, Command};
use htv_cli::{bench, exit_code, run};

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Inpaint(args) => run::cmd_inpaint(args),
        Command::Genmask(args) => run::cmd_genmask(args),
        Command::Bench(args) => bench::cmd_bench(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err));
    }
}
