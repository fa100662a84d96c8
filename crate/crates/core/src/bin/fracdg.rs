fn main() {
    env_logger::init();
    std::process::exit(fracdg::cli::main_with(std::env::args_os()));
}
