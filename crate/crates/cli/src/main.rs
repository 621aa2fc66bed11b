use clap::Parser;

fn main() {
    std::process::exit(orbitree_cli::run(orbitree_cli::Cli::parse()));
}
