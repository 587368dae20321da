fn main() {
    std::process::exit(sepinv::cli::main_with_args(std::env::args_os()));
}
