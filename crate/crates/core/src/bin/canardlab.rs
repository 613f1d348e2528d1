fn main() {
    std::process::exit(canardlab::cli::run(std::env::args_os()));
}
