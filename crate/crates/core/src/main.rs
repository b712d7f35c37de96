fn main() {
    std::process::exit(nswave::cli::main_with_args(std::env::args_os()));
}
