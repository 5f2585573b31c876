use bsdisc::cli::{run, Cli};
use clap::Parser;

fn main() {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
