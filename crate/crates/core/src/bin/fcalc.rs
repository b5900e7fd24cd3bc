use std::process::ExitCode;

fn main() -> ExitCode {
    fractal_calculus::cli::main_from_args(std::env::args_os())
}
