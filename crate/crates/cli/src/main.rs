use clap::error::ErrorKind;
use clap::Parser;
use fbc_cli::{run, Cli, EXIT_OK, EXIT_USAGE};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let outcome = run(&cli);
    let out = outcome.render(cli.json);
    if outcome.code == EXIT_OK || cli.json {
        println!("{out}");
    } else {
        eprintln!("{out}");
    }
    std::process::exit(outcome.code);
}
