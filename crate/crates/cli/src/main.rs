fn main() {
    std::process::exit(netsmooth_cli::run(std::env::args_os()));
}
