fn main() {
    std::process::exit(bellkit::cli::main_from(std::env::args_os()));
}
