fn main() {
    std::process::exit(dnacode::cli::run(std::env::args_os()));
}
