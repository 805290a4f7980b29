fn main() {
    std::process::exit(ksat_cli::run(std::env::args_os()))
}
