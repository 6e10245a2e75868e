fn main() {
    std::process::exit(cubicforms::cli::run(std::env::args_os()));
}
