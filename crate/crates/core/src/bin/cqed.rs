use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(cqed_entangle::cli::run(std::env::args_os()))
}
