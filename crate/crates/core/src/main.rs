fn main() {
    std::process::exit(graphcode::cli::run(std::env::args_os()));
}
