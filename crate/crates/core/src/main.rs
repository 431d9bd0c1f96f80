use std::io::Write;

fn main() {
    let (code, out) = fnx::cli::run(std::env::args_os());
    // a closed pipe is not an error worth reporting
    let _ = if code == fnx::cli::EXIT_USAGE {
        std::io::stderr().write_all(out.as_bytes())
    } else {
        std::io::stdout().write_all(out.as_bytes())
    };
    std::process::exit(code);
}
