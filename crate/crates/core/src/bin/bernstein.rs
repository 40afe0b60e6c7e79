fn main() {
    std::process::exit(bernstein_core::cli::run(std::env::args_os()));
}
