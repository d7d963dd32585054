fn main() {
    std::process::exit(egfc::cli::run(std::env::args_os()));
}
