fn main() {
    std::process::exit(qac::cli::run(std::env::args_os()));
}
