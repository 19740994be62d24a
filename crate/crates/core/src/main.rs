use clap::error::ErrorKind;
use clap::Parser;

use heighttower::cli::{self, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            std::process::exit(0);
        }
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": { "kind": "usage", "message": e.to_string() } })
            );
            std::process::exit(1);
        }
    };
    std::process::exit(cli::run(&cli));
}
