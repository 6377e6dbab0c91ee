fn main() {
    std::process::exit(teleflow_cli::run(std::env::args_os()));
}
