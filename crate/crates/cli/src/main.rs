use clap::Parser;

fn main() {
    let cli = hzpos_cli::Cli::parse();
    if let Err(err) = hzpos_cli::run(cli) {
        eprintln!("hzpos: {err}");
        std::process::exit(err.exit_code());
    }
}
