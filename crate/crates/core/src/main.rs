fn main() {
    std::process::exit(qpm::cli::run(std::env::args_os()));
}
