fn main() {
    std::process::exit(deploygrip::cli::main_with_args(std::env::args_os()));
}
