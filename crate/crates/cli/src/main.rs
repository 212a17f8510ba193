use std::io::{stderr, stdout};
use std::process::ExitCode;

fn main() -> ExitCode {
    let (mut out, mut err) = (stdout().lock(), stderr().lock());
    let code = qsverify_cli::run(std::env::args_os(), &mut out, &mut err);
    ExitCode::from(code as u8)
}
