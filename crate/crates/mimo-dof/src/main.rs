fn main() {
    std::process::exit(mimo_dof::cli::main_with_args(std::env::args_os()));
}
