fn main() {
    std::process::exit(permwalk::cli::run(std::env::args_os()));
}
