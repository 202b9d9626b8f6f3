use clap::Parser;
use papt_cli::{run, Args};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    if let Err(e) = run(&args) {
        eprintln!("papt: {e}");
        std::process::exit(e.exit_code());
    }
}
