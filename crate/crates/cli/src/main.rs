fn main() {
    std::process::exit(nelab_cli::main_with_args(std::env::args_os()));
}
