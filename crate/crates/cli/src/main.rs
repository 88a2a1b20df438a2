use clap::Parser;
use entlab::{main_with, Cli, THREADS_ENV};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let env = std::env::var(THREADS_ENV).ok();
    std::process::exit(main_with(cli, env.as_deref()));
}
