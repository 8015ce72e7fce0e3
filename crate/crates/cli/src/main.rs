fn main() {
    std::process::exit(ncps_cli::app::run(std::env::args_os()));
}
