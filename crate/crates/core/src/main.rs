fn main() {
    std::process::exit(sparsebound::cli::main_with_args(std::env::args_os()));
}
