fn main() {
    std::process::exit(a1_core::cli::main_with_args(std::env::args_os()));
}
