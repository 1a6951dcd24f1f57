use clap::Parser;

fn main() {
    let cli = sbs::cli::Cli::parse();
    if let Err(e) = sbs::cli::run(cli) {
        eprintln!("sbs: {e}");
        std::process::exit(e.exit_code());
    }
}
