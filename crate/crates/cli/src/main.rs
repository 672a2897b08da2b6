fn main() {
    std::process::exit(hjsweep_cli::run(std::env::args_os()));
}
