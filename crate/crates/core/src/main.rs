fn main() {
    std::process::exit(ordinalia::cli::run(std::env::args_os()));
}
