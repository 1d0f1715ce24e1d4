use clap::Parser;
use kgraph_cli::{execute, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage text on stderr, input-error exit code
            eprintln!("{e}");
            std::process::exit(3);
        }
    };
    let outcome = execute(cli);
    println!(
        "{}",
        serde_json::to_string_pretty(&outcome.report).expect("reports serialize")
    );
    eprintln!("{}", outcome.summary);
    std::process::exit(outcome.exit_code);
}
