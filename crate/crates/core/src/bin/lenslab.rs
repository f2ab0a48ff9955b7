fn main() {
    std::process::exit(lenslab::cli::main_with(std::env::args_os()));
}
