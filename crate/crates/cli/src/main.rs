use clap::Parser;

fn main() {
    let cli = butson_cli::Cli::parse();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    if let Err(e) = cli.run(&mut out) {
        use std::io::Write;
        let _ = out.flush();
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
