fn main() {
    std::process::exit(fqdio_cli::run_command(std::env::args_os()));
}
