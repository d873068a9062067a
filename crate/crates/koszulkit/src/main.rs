use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(koszulkit::cli::run() as u8)
}
