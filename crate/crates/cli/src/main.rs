use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = pellgroup_cli::run(std::env::args_os());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(result.payload.render().as_bytes());
    let _ = out.flush();
    if !result.diagnostics.is_empty() {
        eprintln!("{}", result.diagnostics.trim_end());
    }
    ExitCode::from(result.exit_code() as u8)
}
