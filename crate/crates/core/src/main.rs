fn main() {
    std::process::exit(gerbelab::cli::main_with_args(std::env::args_os()));
}
