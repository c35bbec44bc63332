fn main() {
    std::process::exit(depthcast_core::cli::main_with_args(std::env::args_os()));
}
