fn main() {
    std::process::exit(lppie::cli::run(std::env::args_os()));
}
