use clap::Parser;
use twistmo::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("twistmo: {e}");
        std::process::exit(e.exit_code());
    }
}
