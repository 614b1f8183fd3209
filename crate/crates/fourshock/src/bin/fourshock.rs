use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match fourshock::cli::parse_args(std::env::args()) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit code 0
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code.clamp(0, 2) as u8);
        }
    };
    match fourshock::cli::run(&cli, &mut std::io::stdout()) {
        Ok(code) => ExitCode::from(code.clamp(0, 127) as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
