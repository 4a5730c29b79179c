fn main() {
    std::process::exit(prenichols::cli::main_with_args(std::env::args_os()));
}
