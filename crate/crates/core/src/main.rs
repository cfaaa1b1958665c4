fn main() {
    std::process::exit(kllab::cli::run(std::env::args_os()));
}
