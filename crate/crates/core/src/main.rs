fn main() {
    std::process::exit(lagindex::cli::run(std::env::args_os()));
}
