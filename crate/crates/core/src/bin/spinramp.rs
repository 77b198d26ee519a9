fn main() {
    std::process::exit(spinramp::cli::run(std::env::args_os()));
}
