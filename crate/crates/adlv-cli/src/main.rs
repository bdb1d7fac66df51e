use std::io::Write;
use std::process::ExitCode;

use adlv_cli::commands::{error_record, input_echo};
use adlv_cli::{run, Command, Options, Status};
use clap::error::ErrorKind;
use clap::Parser;

/// Combinatorics of affine Deligne-Lusztig varieties of Coxeter type.
#[derive(Parser)]
#[command(name = "adlv", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let cmd = std::env::args().nth(1).unwrap_or_default();
            let msg = e.render().to_string();
            println!("{}", error_record(&cmd, serde_json::json!({}), msg.trim()).to_line());
            eprint!("{msg}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command, &cli.opts) {
        Ok(records) => {
            let mut out = std::io::stdout().lock();
            for r in &records {
                let _ = writeln!(out, "{}", r.to_line());
            }
            if records.iter().any(|r| r.status == Status::Fail) {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let rec = error_record(&cli.command.name(), input_echo(cli.command, &cli.opts), &e.to_string());
            println!("{}", rec.to_line());
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
