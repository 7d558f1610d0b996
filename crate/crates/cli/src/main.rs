use clap::Parser;

fn main() {
    let cli = qwrt_cli::Cli::parse();
    let code = qwrt_cli::run(&cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
