use clap::Parser;
use priorent_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    eprintln!("priorent {}", env!("CARGO_PKG_VERSION"));
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut diag = stderr.lock();
    if let Err(e) = run(cli, &mut out, &mut diag) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
