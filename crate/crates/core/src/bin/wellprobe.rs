use std::process::ExitCode;

fn main() -> ExitCode {
    wellprobe::cli::main_entry()
}
