use std::io::{self, Write};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = partikit::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = io::stdout().flush();
    std::process::exit(code);
}
