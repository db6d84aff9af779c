use clap::Parser;

fn main() {
    let cli = mkdv_cli::Cli::parse();
    if let Err(e) = mkdv_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
