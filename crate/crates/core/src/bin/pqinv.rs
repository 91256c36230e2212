fn main() {
    std::process::exit(pqinv::cli::run(std::env::args_os()));
}
