fn main() {
    std::process::exit(bisph_lab::cli::run(std::env::args_os()));
}
