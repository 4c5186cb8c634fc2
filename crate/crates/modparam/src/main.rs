fn main() {
    std::process::exit(modparam::cli::run(std::env::args_os()));
}
