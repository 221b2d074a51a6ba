fn main() {
    std::process::exit(circle_pattern_cli::run(std::env::args_os()));
}
