fn main() {
    std::process::exit(ncdeg_core::cli::run(std::env::args_os()));
}
