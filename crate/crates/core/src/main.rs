fn main() {
    std::process::exit(rabi_moments::cli::run_cli(std::env::args_os()));
}
