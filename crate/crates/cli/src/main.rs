fn main() {
    std::process::exit(subradiance_cli::run(std::env::args_os()));
}
