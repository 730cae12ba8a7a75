use clap::Parser;
use weightraise::config::{Cli, RunConfig};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("weightraise: {e}");
            std::process::exit(e.exit_code());
        }
    };
    std::process::exit(weightraise::run(&config));
}
