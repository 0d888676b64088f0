use bredon::cli::{run, Cli};
use clap::Parser;

fn main() {
    let cli = Cli::parse();
    let (code, out, err) = run(&cli);
    print!("{out}");
    eprint!("{err}");
    std::process::exit(code);
}
