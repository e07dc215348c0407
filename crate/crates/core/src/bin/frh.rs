fn main() {
    std::process::exit(frhankel::cli::run(std::env::args_os()));
}
