fn main() {
    std::process::exit(modext::cli::run(std::env::args_os()));
}
