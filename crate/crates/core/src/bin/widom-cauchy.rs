use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = widom_cauchy::cli::Args::parse();
    std::process::exit(widom_cauchy::cli::run(&args));
}
