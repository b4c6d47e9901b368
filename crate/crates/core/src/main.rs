fn main() {
    std::process::exit(polya::cli::main_with_args(std::env::args_os()));
}
