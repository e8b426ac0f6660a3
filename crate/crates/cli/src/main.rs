use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let ceiling = std::env::var(covermap_cli::CEILING_VAR).ok();
    let out = covermap_cli::run(std::env::args_os(), ceiling.as_deref());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
