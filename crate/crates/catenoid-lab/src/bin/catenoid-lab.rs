fn main() {
    std::process::exit(catenoid_lab::cli::main_with_args(std::env::args_os()));
}
