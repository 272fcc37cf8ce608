fn main() {
    std::process::exit(eigenmoduli_cli::main_with(std::env::args_os()));
}
