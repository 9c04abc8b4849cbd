use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(bivar::cli::main())
}
