fn main() {
    std::process::exit(paps::cli::main_with_args(std::env::args_os()));
}
