fn main() {
    std::process::exit(latvib_cli::run(std::env::args_os()));
}
