use clap::Parser;
use nervekit::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("nervekit: {e:#}");
        std::process::exit(e.exit_code());
    }
}
