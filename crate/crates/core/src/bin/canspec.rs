fn main() {
    std::process::exit(canspec::cli::run(std::env::args_os()));
}
