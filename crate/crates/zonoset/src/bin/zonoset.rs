fn main() {
    std::process::exit(zonoset::cli::run(std::env::args_os()));
}
