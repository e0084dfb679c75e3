use std::io::Write;

fn main() {
    let report = kkmfix::cli::run_command(std::env::args());
    let output = report.output();
    let written = if report.exit_code == 2 {
        std::io::stderr().write_all(output.as_bytes())
    } else {
        std::io::stdout().write_all(output.as_bytes())
    };
    if written.is_err() {
        std::process::exit(2);
    }
    std::process::exit(report.exit_code);
}
