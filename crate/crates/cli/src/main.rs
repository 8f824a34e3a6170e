fn main() {
    std::process::exit(gsi_cli::run(std::env::args_os()));
}
