fn main() {
    std::process::exit(ihcore::cli::main_with(std::env::args().collect()));
}
