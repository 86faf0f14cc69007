fn main() {
    std::process::exit(brauerkit::cli::run(std::env::args_os()));
}
