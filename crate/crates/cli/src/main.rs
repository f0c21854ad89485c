fn main() {
    std::process::exit(wallcross_cli::run(std::env::args_os()));
}
