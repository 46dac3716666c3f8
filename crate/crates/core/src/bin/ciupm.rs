fn main() {
    std::process::exit(ciupm::cli::run());
}
