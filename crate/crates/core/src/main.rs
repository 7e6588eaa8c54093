fn main() {
    std::process::exit(relpoly::cli::run(std::env::args_os()));
}
