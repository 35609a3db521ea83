use clap::Parser;
use std::io::Write;

fn main() {
    let cli = pflab::Cli::parse();
    let out = pflab::run(&cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(pflab::render(&out, cli.format).as_bytes());
    let _ = stdout.flush();
    if let Some(msg) = &out.diagnostic {
        eprintln!("error: {msg}");
    }
    std::process::exit(out.exit);
}
