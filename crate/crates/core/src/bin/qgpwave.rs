fn main() {
    std::process::exit(qgpwave::cli::main_from_args(std::env::args_os()));
}
