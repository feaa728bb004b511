fn main() {
    std::process::exit(kasami::cli::run(std::env::args_os()));
}
