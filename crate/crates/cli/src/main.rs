fn main() {
    std::process::exit(hat_cli::main_with_args(std::env::args()));
}
