use std::process::ExitCode;

fn main() -> ExitCode {
    mmc::cli::main()
}
