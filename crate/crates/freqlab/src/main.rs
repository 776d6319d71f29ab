use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use freqlab::error::EXIT_INPUT;
use freqlab::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("freqlab: cannot size the worker pool: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("freqlab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(dir) = &cli.global.out_dir {
        if let Err(e) = std::fs::create_dir_all(dir) {
            eprintln!("freqlab: {}: {e}", dir.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
        for (name, bytes) in &out.files {
            let path = dir.join(name);
            if let Err(e) = std::fs::write(&path, bytes) {
                eprintln!("freqlab: {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
    } else {
        let mut so = std::io::stdout().lock();
        if so.write_all(&out.stdout).and_then(|_| so.flush()).is_err() {
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    ExitCode::from(out.exit as u8)
}
