fn main() {
    std::process::exit(formality::cli::run(std::env::args_os()));
}
