fn main() {
    std::process::exit(kobalab::cli::main_with_args(std::env::args_os()));
}
