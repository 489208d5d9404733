use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use pingpong_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output_path = cli.output.clone();

    let rendered = match execute(cli) {
        Ok(rendered) => rendered,
        Err(err) => {
            eprintln!("error: {}", err.message());
            return ExitCode::from(err.exit_code() as u8);
        }
    };

    // Everything is rendered; now (and only now) touch the filesystem.
    if let Some((path, bytes)) = &rendered.transcripts {
        if let Err(err) = std::fs::write(path, bytes) {
            eprintln!(
                "error: cannot write transcripts to {}: {err}",
                path.display()
            );
            return ExitCode::from(1);
        }
    }
    let write_result = match &output_path {
        Some(path) => std::fs::write(path, &rendered.primary)
            .map_err(|err| format!("cannot write output to {}: {err}", path.display())),
        None => std::io::stdout()
            .write_all(&rendered.primary)
            .map_err(|err| format!("cannot write to stdout: {err}")),
    };
    if let Err(message) = write_result {
        eprintln!("error: {message}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
