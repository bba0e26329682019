use std::process::ExitCode;

fn main() -> ExitCode {
    bamkit::cli::main_entry()
}
