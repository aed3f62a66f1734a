fn main() {
    std::process::exit(deltapoly::cli::main_with_args(std::env::args_os()));
}
