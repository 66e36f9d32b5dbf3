fn main() {
    std::process::exit(gsfv::cli::main_with_args(std::env::args_os()));
}
