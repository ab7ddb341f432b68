use std::process::ExitCode;

fn main() -> ExitCode {
    let report = dedmod::cli::run_args(std::env::args_os());
    print!("{}", report.text);
    ExitCode::from(report.code as u8)
}
