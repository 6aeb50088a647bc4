use std::io::{stderr, stdout};
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let code = ftpath_cli::app::run(&args, &mut stdout().lock(), &mut stderr().lock());
    ExitCode::from(code as u8)
}
