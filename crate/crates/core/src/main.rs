use clap::Parser;
use twoassoc::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let report = run(&cli);
    print!("{}", report.render(cli.json));
    if !report.ok && !cli.json {
        eprintln!("{}", report.json);
    }
    std::process::exit(report.exit_code());
}
