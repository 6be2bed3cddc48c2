use std::process::ExitCode;

fn main() -> ExitCode {
    sphereperc_cli::run(std::env::args_os().collect())
}
