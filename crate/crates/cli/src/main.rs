fn main() {
    std::process::exit(hardy_cli::run(std::env::args_os()));
}
