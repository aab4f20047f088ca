use clap::Parser;

fn main() {
    let cli = arith_lg_cli::Cli::parse();
    std::process::exit(arith_lg_cli::run(&cli));
}
